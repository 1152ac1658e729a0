use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::PrimePowerMatrix;
use crate::error::{Error, Result};

/// A finite abelian group `Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ... | d_k`
/// and every `d_i > 1`. For a p-group every `d_i` is a power of p.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupStructure {
    invariant_factors: Vec<u64>,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders([n])
    }

    /// `Z/p^{a_1} + ... + Z/p^{a_k}`; exponents may come in any order and zeros are dropped.
    pub fn from_prime_power_exponents(p: u64, exponents: impl IntoIterator<Item = u32>) -> Self {
        Self::from_cyclic_orders(exponents.into_iter().map(|a| p.pow(a)))
    }

    /// Canonical invariant factors of a direct sum of cyclic groups of the given orders.
    pub fn from_cyclic_orders(orders: impl IntoIterator<Item = u64>) -> Self {
        // prime -> exponents of the primary components
        let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for n in orders {
            assert!(n > 0, "cyclic group order must be positive");
            for (q, e) in factorize(n) {
                primary.entry(q).or_default().push(e);
            }
        }
        let width = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; width];
        for (q, mut exps) in primary {
            exps.sort_unstable();
            let offset = width - exps.len();
            for (i, e) in exps.into_iter().enumerate() {
                factors[offset + i] *= q.pow(e);
            }
        }
        AbelianGroupStructure { invariant_factors: factors }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Minimal number of generators.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn checked_order(&self) -> Option<u128> {
        self.invariant_factors.iter().try_fold(1u128, |acc, &d| acc.checked_mul(d as u128))
    }

    pub fn order(&self) -> u128 {
        self.checked_order().expect("group order overflows u128")
    }

    /// `log_p |G|`; panics if the group is not a p-group.
    pub fn log_order(&self, p: u64) -> u32 {
        self.prime_power_exponents(p).iter().sum()
    }

    /// Exponents `a_i` with `d_i = p^{a_i}`; panics if the group is not a p-group.
    pub fn prime_power_exponents(&self, p: u64) -> Vec<u32> {
        self.invariant_factors
            .iter()
            .map(|&d| {
                let f = factorize(d);
                assert!(f.len() == 1 && f[0].0 == p, "{d} is not a power of {p}");
                f[0].1
            })
            .collect()
    }

    /// The Sylow q-subgroup.
    pub fn sylow(&self, q: u64) -> Self {
        Self::from_cyclic_orders(self.invariant_factors.iter().map(|&d| {
            let mut part = 1;
            let mut d = d;
            while d % q == 0 {
                d /= q;
                part *= q;
            }
            part
        }))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic_orders(self.invariant_factors.iter().chain(&other.invariant_factors).copied())
    }

    /// Cokernel of `x -> x * m` on `(Z/p^N)^rows -> (Z/p^N)^cols`, i.e. `(Z/p^N)^cols / rowspan(m)`.
    pub fn from_relations(m: &PrimePowerMatrix) -> Self {
        let r = m.ring();
        let n = r.precision();
        let snf = m.smith_normal_form();
        let diag = snf.diagonal_valuations();
        let mut exps: Vec<u32> = diag.iter().map(|&a| a.min(n)).collect();
        exps.extend(std::iter::repeat(n).take(m.cols() - diag.len()));
        Self::from_prime_power_exponents(r.p(), exps)
    }

    /// Structure of `span(sup) / span(sub)`; requires `span(sub) ⊆ span(sup)`.
    pub fn quotient(sub: &PrimePowerMatrix, sup: &PrimePowerMatrix) -> Result<Self> {
        if sub.cols() != sup.cols() || sub.ring() != sup.ring() {
            return Err(Error::DimensionMismatch("quotient of spans in different ambients".into()));
        }
        let h = sup.howell_form();
        if h.rows() == 0 {
            return Ok(Self::trivial());
        }
        let mut rels = Vec::with_capacity(sub.rows());
        for i in 0..sub.rows() {
            let c = h
                .howell_solve(sub.row(i))
                .ok_or_else(|| Error::InvalidParameter("submodule not contained in supermodule".into()))?;
            rels.push(c);
        }
        let own = h.kernel_basis();
        let coeff_rels = PrimePowerMatrix::from_row_vecs(h.ring(), h.rows(), rels).vstack(&own)?;
        Ok(Self::from_relations(&coeff_rels))
    }

    /// Structure of a span itself, `span(m)`.
    pub fn of_span(m: &PrimePowerMatrix) -> Self {
        let zero = PrimePowerMatrix::zeros(m.ring(), 0, m.cols());
        Self::quotient(&zero, m).expect("zero submodule is always contained")
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Trial-division factorization into `(prime, exponent)` pairs.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::PrimePowerRing;

    #[test]
    fn invariant_factor_normalization() {
        let g = AbelianGroupStructure::from_cyclic_orders([6, 4, 1, 9]);
        // Z/6 + Z/4 + Z/9 = (Z/2 + Z/4) + (Z/3 + Z/9) = Z/6 + Z/36
        assert_eq!(g.invariant_factors(), &[6, 36]);
        assert_eq!(g.order(), 216);
        assert_eq!(g.sylow(2).invariant_factors(), &[2, 4]);
        assert_eq!(AbelianGroupStructure::from_prime_power_exponents(3, [2, 0, 1]).invariant_factors(), &[3, 9]);
        assert!(AbelianGroupStructure::cyclic(1).is_trivial());
    }

    #[test]
    fn cokernel_and_quotient() {
        let r = PrimePowerRing::new(2, 3).unwrap();
        let m = PrimePowerMatrix::from_rows(r, 3, &[[2, 0, 0], [0, 4, 0]]).unwrap();
        let g = AbelianGroupStructure::from_relations(&m);
        assert_eq!(g.invariant_factors(), &[2, 4, 8]);

        let sup = PrimePowerMatrix::from_rows(r, 2, &[[1, 0], [0, 2]]).unwrap();
        let sub = PrimePowerMatrix::from_rows(r, 2, &[[4, 0], [0, 4]]).unwrap();
        let q = AbelianGroupStructure::quotient(&sub, &sup).unwrap();
        assert_eq!(q.invariant_factors(), &[2, 4]);
        assert!(AbelianGroupStructure::quotient(&sup, &sub).is_err());
        assert_eq!(AbelianGroupStructure::of_span(&sup).invariant_factors(), &[4, 8]);
    }
}
