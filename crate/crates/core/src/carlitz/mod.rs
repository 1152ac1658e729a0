//! The Carlitz module over `A = F_q[T]` and its torsion layers.

mod fq;
mod layer;
mod module;
mod poly;

pub use fq::{FieldSpec, FqContext, MAX_FIELD_ORDER};
pub use layer::{
    structure_from_orders, torsion_layer, torsion_root_count, unit_group_structure, RootCount, TorsionLayer,
    MAX_LAYER_SIZE, MAX_RESIDUE_SIZE, MAX_ROOT_COUNT_DEGREE,
};
pub use module::{add_coefficients, carlitz_polynomial, compose_coefficients, reduce_at, CarlitzPolynomial, SparsePoly};
pub use poly::{FqPoly, TRIAL_DIVISION_LIMIT};
