use serde::{Deserialize, Serialize};

use super::group::FiniteAbelianPGroup;
use crate::error::{invalid, Error, Result};
use crate::linalg::PrimePowerRing;

/// Hard limit on the additive rank of a finite-level ring.
pub const MAX_BASIS_LEN: usize = 4096;

/// Coefficient vector with respect to the ring's ordered basis.
pub type RingElement = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    /// `R[G]` with basis the group elements.
    GroupRing(FiniteAbelianPGroup),
    /// `R[T_1..T_d] / (T_1^M, ..., T_d^M)` with basis the monomials in the box `[0, M)^d`.
    TruncatedPoly { vars: usize, cap: u32 },
}

/// A finite commutative ring that is free over `Z/l^N`: either a group ring of a
/// finite abelian p-group or a box-truncated polynomial ring. Basis elements are
/// indexed by multi-indices in a mixed-radix box, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteLevelRing {
    coeff: PrimePowerRing,
    kind: RingKind,
    radices: Vec<u64>,
    strides: Vec<usize>,
    len: usize,
}

/// JSON form of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingDescriptor {
    GroupRing {
        l: u64,
        #[serde(rename = "N")]
        precision: u32,
        p: u64,
        exponents: Vec<u32>,
    },
    TruncPoly {
        p: u64,
        #[serde(rename = "N")]
        precision: u32,
        d: usize,
        #[serde(rename = "M")]
        cap: u32,
    },
}

impl FiniteLevelRing {
    pub fn group_ring(coeff: PrimePowerRing, group: FiniteAbelianPGroup) -> Result<Self> {
        let radices: Vec<u64> = (0..group.rank()).map(|i| group.factor_order(i)).collect();
        Self::build(coeff, RingKind::GroupRing(group), radices)
    }

    pub fn truncated_poly(coeff: PrimePowerRing, vars: usize, cap: u32) -> Result<Self> {
        if cap == 0 {
            return Err(invalid("truncation degree must be >= 1"));
        }
        Self::build(coeff, RingKind::TruncatedPoly { vars, cap }, vec![cap as u64; vars])
    }

    fn build(coeff: PrimePowerRing, kind: RingKind, radices: Vec<u64>) -> Result<Self> {
        let mut len: usize = 1;
        for &r in &radices {
            len = len
                .checked_mul(r as usize)
                .filter(|&l| l <= MAX_BASIS_LEN)
                .ok_or_else(|| Error::SizeCap(format!("ring basis larger than {MAX_BASIS_LEN}")))?;
        }
        let mut strides = vec![1usize; radices.len()];
        for i in (0..radices.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * radices[i + 1] as usize;
        }
        Ok(FiniteLevelRing { coeff, kind, radices, strides, len })
    }

    pub fn from_descriptor(desc: &RingDescriptor) -> Result<Self> {
        match *desc {
            RingDescriptor::GroupRing { l, precision, p, ref exponents } => Self::group_ring(
                PrimePowerRing::new(l, precision)?,
                FiniteAbelianPGroup::new(p, exponents.clone())?,
            ),
            RingDescriptor::TruncPoly { p, precision, d, cap } => {
                Self::truncated_poly(PrimePowerRing::new(p, precision)?, d, cap)
            }
        }
    }

    pub fn descriptor(&self) -> RingDescriptor {
        match &self.kind {
            RingKind::GroupRing(g) => RingDescriptor::GroupRing {
                l: self.coeff.p(),
                precision: self.coeff.precision(),
                p: g.p(),
                exponents: g.exponents().to_vec(),
            },
            RingKind::TruncatedPoly { vars, cap } => RingDescriptor::TruncPoly {
                p: self.coeff.p(),
                precision: self.coeff.precision(),
                d: *vars,
                cap: *cap,
            },
        }
    }

    pub fn coeff_ring(&self) -> PrimePowerRing {
        self.coeff
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn group(&self) -> Option<&FiniteAbelianPGroup> {
        match &self.kind {
            RingKind::GroupRing(g) => Some(g),
            RingKind::TruncatedPoly { .. } => None,
        }
    }

    pub fn is_group_ring(&self) -> bool {
        matches!(self.kind, RingKind::GroupRing(_))
    }

    /// Number of variables / cyclic factors.
    pub fn vars(&self) -> usize {
        self.radices.len()
    }

    pub fn basis_len(&self) -> usize {
        self.len
    }

    /// `log_l` of the number of elements.
    pub fn log_cardinality(&self) -> u64 {
        self.len as u64 * self.coeff.precision() as u64
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0u64; self.radices.len()];
        for (i, &s) in self.strides.iter().enumerate() {
            out[i] = (idx / s) as u64;
            idx %= s;
        }
        out
    }

    pub fn index_of(&self, exps: &[u64]) -> Option<usize> {
        if exps.len() != self.radices.len() {
            return None;
        }
        let mut idx = 0;
        for ((&e, &r), &s) in exps.iter().zip(&self.radices).zip(&self.strides) {
            if e >= r {
                return None;
            }
            idx += e as usize * s;
        }
        Some(idx)
    }

    /// Index of the product of basis elements `a` and `b`, or `None` when it truncates to zero.
    pub fn basis_product(&self, a: usize, b: usize) -> Option<usize> {
        let group = self.is_group_ring();
        let (mut a, mut b) = (a, b);
        let mut idx = 0;
        for (&r, &s) in self.radices.iter().zip(&self.strides) {
            let (da, db) = ((a / s) as u64, (b / s) as u64);
            a %= s;
            b %= s;
            let mut e = da + db;
            if e >= r {
                if group {
                    e -= r;
                } else {
                    return None;
                }
            }
            idx += e as usize * s;
        }
        Some(idx)
    }

    pub fn zero(&self) -> RingElement {
        vec![0; self.len]
    }

    pub fn constant(&self, c: i64) -> RingElement {
        let mut x = self.zero();
        x[0] = self.coeff.from_i64(c);
        x
    }

    pub fn one(&self) -> RingElement {
        self.constant(1)
    }

    /// Basis element with the given exponent vector (group exponents are reduced
    /// mod the factor orders; truncated monomials beyond the cap are zero).
    pub fn basis_element(&self, exps: &[u64]) -> RingElement {
        let mut x = self.zero();
        let reduced: Vec<u64> = if self.is_group_ring() {
            exps.iter().zip(&self.radices).map(|(&e, &r)| e % r).collect()
        } else {
            exps.to_vec()
        };
        if let Some(i) = self.index_of(&reduced) {
            x[i] = 1;
        }
        x
    }

    /// `T_i` in a truncated ring, `γ_i - 1` in a group ring.
    pub fn variable(&self, i: usize) -> RingElement {
        let mut exps = vec![0u64; self.vars()];
        exps[i] = 1;
        let x = self.basis_element(&exps);
        if self.is_group_ring() {
            self.sub(&x, &self.one())
        } else {
            x
        }
    }

    /// Builds `sum c_k * basis(exps_k)`.
    pub fn from_terms(&self, terms: &[(i64, Vec<u64>)]) -> Result<RingElement> {
        let mut x = self.zero();
        for (c, exps) in terms {
            if exps.len() != self.vars() {
                return Err(Error::DimensionMismatch(format!(
                    "term exponent vector of length {} in a ring with {} variables",
                    exps.len(),
                    self.vars()
                )));
            }
            let b = self.basis_element(exps);
            x = self.add(&x, &self.scale(&b, self.coeff.from_i64(*c)));
        }
        Ok(x)
    }

    pub fn check_element(&self, x: &[u64]) -> Result<()> {
        if x.len() != self.len {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coefficients, ring basis has {}",
                x.len(),
                self.len
            )));
        }
        Ok(())
    }

    pub fn reduce(&self, x: &[u64]) -> RingElement {
        x.iter().map(|&c| self.coeff.reduce(c)).collect()
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> RingElement {
        a.iter().zip(b).map(|(&x, &y)| self.coeff.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> RingElement {
        a.iter().zip(b).map(|(&x, &y)| self.coeff.sub(x, y)).collect()
    }

    pub fn neg(&self, a: &[u64]) -> RingElement {
        a.iter().map(|&x| self.coeff.neg(x)).collect()
    }

    pub fn scale(&self, a: &[u64], c: u64) -> RingElement {
        a.iter().map(|&x| self.coeff.mul(x, c)).collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> RingElement {
        let r = self.coeff;
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                if let Some(k) = self.basis_product(i, j) {
                    out[k] = r.add(out[k], r.mul(x, y));
                }
            }
        }
        out
    }

    /// `x * basis_b`.
    pub fn shift(&self, x: &[u64], b: usize) -> RingElement {
        let mut out = self.zero();
        for (i, &c) in x.iter().enumerate() {
            if c != 0 {
                if let Some(k) = self.basis_product(i, b) {
                    out[k] = self.coeff.add(out[k], c);
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &[u64], mut e: u64) -> RingElement {
        let mut acc = self.one();
        let mut base = x.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Sum of coefficients (group rings), the constant term (truncated rings).
    pub fn augmentation(&self, x: &[u64]) -> u64 {
        match self.kind {
            RingKind::GroupRing(_) => x.iter().fold(0, |acc, &c| self.coeff.add(acc, c)),
            RingKind::TruncatedPoly { .. } => x[0],
        }
    }

    /// Image in the residue field `F_l` of a local ring; `None` for group rings
    /// with `l != p`, which are not local.
    pub fn residue(&self, x: &[u64]) -> Option<u64> {
        if let RingKind::GroupRing(g) = &self.kind {
            if g.p() != self.coeff.p() && g.rank() > 0 {
                return None;
            }
        }
        Some(self.augmentation(x) % self.coeff.p())
    }

    pub fn is_local(&self) -> bool {
        self.residue(&self.zero()).is_some()
    }

    /// Human-readable form, e.g. `3 + 2*T1*T2^2` or `1 + g1^2`.
    pub fn format_element(&self, x: &[u64]) -> String {
        let sym = if self.is_group_ring() { "g" } else { "T" };
        let mut terms = Vec::new();
        for (i, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let exps = self.multi_index(i);
            let mono: Vec<String> = exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| if e == 1 { format!("{sym}{}", v + 1) } else { format!("{sym}{}^{e}", v + 1) })
                .collect();
            terms.push(match (c, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono.join("*"),
                _ => format!("{c}*{}", mono.join("*")),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}
