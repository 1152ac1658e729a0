pub mod algebra;
pub mod carlitz;
pub mod cohomology;
pub mod control;
pub mod error;
pub mod linalg;
pub mod module;
pub mod tate;

pub use algebra::{FiniteAbelianPGroup, FiniteLevelRing, RingElement, RingIdeal};
pub use error::{Error, Result};
pub use linalg::{AbelianGroupStructure, PrimePowerMatrix, PrimePowerRing, SpanRelation};
