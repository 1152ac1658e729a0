//! Exact linear algebra over the chain ring Z/p^N.

mod abelian;
mod matrix;
mod ring;

pub use abelian::{factorize, AbelianGroupStructure};
pub use matrix::{PrimePowerMatrix, SmithForm, SpanRelation, SubmoduleComparison};
pub use ring::{is_prime, PrimePowerRing, MAX_PRECISION, MAX_PRIME};
