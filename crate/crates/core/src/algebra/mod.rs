//! Finite-level models of the Iwasawa algebra: group rings of finite abelian
//! p-groups and box-truncated power-series rings, with their ideals.

mod cyclic;
mod group;
mod ideal;
mod ring;

pub use cyclic::{group_ring_to_polynomial, polynomial_model, polynomial_to_group_ring, CyclicPolynomialRing};
pub use group::FiniteAbelianPGroup;
pub use ideal::{augmentation_ideal, augmentation_ideal_power, ideal_span, is_unit, RingIdeal};
pub use ring::{FiniteLevelRing, RingDescriptor, RingElement, RingKind, MAX_BASIS_LEN};
