use super::ring::{FiniteLevelRing, RingElement, RingKind};
use crate::error::{invalid, Error, Result};
use crate::linalg::{PrimePowerMatrix, SpanRelation};

/// An ideal of a finite-level ring, stored both as its generators and as the
/// Howell form of its coefficient-vector span over `Z/l^N`.
#[derive(Clone, Debug)]
pub struct RingIdeal {
    ring: FiniteLevelRing,
    generators: Vec<RingElement>,
    span: PrimePowerMatrix,
}

impl PartialEq for RingIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.span == other.span
    }
}

impl Eq for RingIdeal {}

impl RingIdeal {
    /// The ideal generated by `generators`: the `Z/l^N`-span of every product
    /// of a generator with a basis element.
    pub fn span(ring: &FiniteLevelRing, generators: Vec<RingElement>) -> Result<Self> {
        for g in &generators {
            ring.check_element(g)?;
        }
        let mut gens: Vec<RingElement> = Vec::new();
        for g in generators.into_iter().map(|g| ring.reduce(&g)) {
            if !ring.is_zero(&g) && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let n = ring.basis_len();
        let mut rows = Vec::with_capacity(gens.len() * n);
        for g in &gens {
            for b in 0..n {
                rows.push(ring.shift(g, b));
            }
        }
        let span = PrimePowerMatrix::from_row_vecs(ring.coeff_ring(), n, rows).howell_form();
        Ok(RingIdeal { ring: ring.clone(), generators: gens, span })
    }

    /// Wraps a span that is already known to be an ideal (in Howell form).
    fn from_span(ring: &FiniteLevelRing, span: PrimePowerMatrix) -> Self {
        let generators = span.row_vecs();
        RingIdeal { ring: ring.clone(), generators, span }
    }

    pub fn zero(ring: &FiniteLevelRing) -> Self {
        RingIdeal {
            ring: ring.clone(),
            generators: Vec::new(),
            span: PrimePowerMatrix::zeros(ring.coeff_ring(), 0, ring.basis_len()),
        }
    }

    pub fn unit(ring: &FiniteLevelRing) -> Self {
        Self::span(ring, vec![ring.one()]).expect("one is a ring element")
    }

    pub fn ring(&self) -> &FiniteLevelRing {
        &self.ring
    }

    pub fn generators(&self) -> &[RingElement] {
        &self.generators
    }

    /// Howell basis of the coefficient span.
    pub fn span_basis(&self) -> &PrimePowerMatrix {
        &self.span
    }

    pub fn is_zero(&self) -> bool {
        self.span.rows() == 0
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.contains(&self.ring.one())
    }

    /// `log_l |I|`.
    pub fn log_cardinality(&self) -> u32 {
        self.span.howell_log_cardinality()
    }

    pub fn contains(&self, x: &[u64]) -> bool {
        x.len() == self.ring.basis_len() && self.span.howell_solve(&self.ring.reduce(x)).is_some()
    }

    pub fn contains_ideal(&self, other: &RingIdeal) -> bool {
        self.ring == other.ring && (0..other.span.rows()).all(|i| self.span.howell_solve(other.span.row(i)).is_some())
    }

    /// Checks that the stored span is closed under multiplication by every basis element.
    pub fn is_closed(&self) -> bool {
        (0..self.span.rows()).all(|i| {
            (0..self.ring.basis_len()).all(|b| self.span.howell_solve(&self.ring.shift(self.span.row(i), b)).is_some())
        })
    }

    fn check_same_ring(&self, other: &RingIdeal) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch("ideals live in different rings".into()));
        }
        Ok(())
    }

    /// Picks the shorter of the generator list and the span basis.
    fn compact_generators(&self) -> Vec<RingElement> {
        if self.generators.len() <= self.span.rows() {
            self.generators.clone()
        } else {
            self.span.row_vecs()
        }
    }

    pub fn product(&self, other: &RingIdeal) -> Result<RingIdeal> {
        self.check_same_ring(other)?;
        let (a, b) = (self.compact_generators(), other.compact_generators());
        let mut gens = Vec::with_capacity(a.len() * b.len());
        for x in &a {
            for y in &b {
                gens.push(self.ring.mul(x, y));
            }
        }
        RingIdeal::span(&self.ring, gens)
    }

    pub fn power(&self, k: u32) -> Result<RingIdeal> {
        if k == 0 {
            return Ok(RingIdeal::unit(&self.ring));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.product(self)?;
        }
        Ok(acc)
    }

    pub fn sum(&self, other: &RingIdeal) -> Result<RingIdeal> {
        self.check_same_ring(other)?;
        let stacked = self.span.vstack(&other.span)?.howell_form();
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        gens.dedup();
        Ok(RingIdeal { ring: self.ring.clone(), generators: gens, span: stacked })
    }

    pub fn compare(&self, other: &RingIdeal) -> Result<(SpanRelation, RingIdeal)> {
        self.check_same_ring(other)?;
        let cmp = self.span.submodule_compare(&other.span)?;
        Ok((cmp.relation, RingIdeal::from_span(&self.ring, cmp.intersection)))
    }

    pub fn intersection(&self, other: &RingIdeal) -> Result<RingIdeal> {
        Ok(self.compare(other)?.1)
    }

    /// `log_l |self / sub|`; requires `sub ⊆ self`.
    pub fn quotient_log_order(&self, sub: &RingIdeal) -> Result<u32> {
        if !self.contains_ideal(sub) {
            return Err(invalid("quotient requires containment"));
        }
        Ok(self.log_cardinality() - sub.log_cardinality())
    }
}

/// The ideal generated by the given elements, with its span normal form.
pub fn ideal_span(ring: &FiniteLevelRing, generators: Vec<RingElement>) -> Result<RingIdeal> {
    RingIdeal::span(ring, generators)
}

/// `x` is a unit iff it generates the unit ideal.
pub fn is_unit(ring: &FiniteLevelRing, x: &[u64]) -> bool {
    RingIdeal::span(ring, vec![x.to_vec()]).map(|i| i.is_unit_ideal()).unwrap_or(false)
}

/// Kernel of the augmentation `R[G] -> R`, generated by `γ_i - 1`.
pub fn augmentation_ideal(ring: &FiniteLevelRing) -> Result<RingIdeal> {
    match ring.kind() {
        RingKind::GroupRing(_) => {
            let gens = (0..ring.vars()).map(|i| ring.variable(i)).collect();
            RingIdeal::span(ring, gens)
        }
        RingKind::TruncatedPoly { .. } => Err(invalid("augmentation ideal needs a group ring")),
    }
}

/// `I^k` for the augmentation ideal `I` of a group ring.
pub fn augmentation_ideal_power(ring: &FiniteLevelRing, k: u32) -> Result<RingIdeal> {
    if k == 0 {
        return Err(invalid("augmentation ideal power must be >= 1"));
    }
    augmentation_ideal(ring)?.power(k)
}
