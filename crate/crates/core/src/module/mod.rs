//! Finitely presented modules over finite-level rings: Fitting ideals,
//! characteristic ideals of elementary modules, and projections in towers.

mod fitting;
mod presentation;
mod projection;

pub use fitting::{
    characteristic_ideal, check_pseudo_null_witness, determinant, fitt_char_compare, fitting_ideal,
    maximal_minors, min_generators, FittCharComparison, FittCharInput, FittCharOutcome, PseudoNullWitness,
};
pub use presentation::{elementary_presentation, ElementaryModuleSpec, ModulePresentation, MAX_GENERATORS};
pub use projection::{
    lift_element, preimage_ideal, pro_fitting_intersection, project_element, project_ideal,
    project_presentation, projected_ring, tower_fitting_comparison, TowerFittingComparison,
};
