//! The finite-level change of variables `γ -> 1 + T` identifying
//! `Z/l^N[Z/p^k]` with `Z/l^N[T] / ((1+T)^{p^k} - 1)`.

use super::ring::{FiniteLevelRing, RingElement};
use crate::error::{invalid, Result};
use crate::linalg::PrimePowerRing;

/// `Z/l^N[T] / (f)` with `f = (1+T)^n - 1`, `n = p^k`; elements are coefficient
/// vectors of length `n` in the basis `1, T, ..., T^{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicPolynomialRing {
    coeff: PrimePowerRing,
    degree: usize,
    /// Coefficients of `f` below the leading one.
    modulus_tail: Vec<u64>,
}

impl CyclicPolynomialRing {
    pub fn new(coeff: PrimePowerRing, degree: usize) -> Self {
        let mut binom = vec![0u64; degree + 1];
        binom[0] = 1;
        for _ in 0..degree {
            for j in (1..=degree).rev() {
                binom[j] = coeff.add(binom[j], binom[j - 1]);
            }
        }
        binom[0] = coeff.sub(binom[0], 1);
        binom.truncate(degree);
        CyclicPolynomialRing { coeff, degree, modulus_tail: binom }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff_ring(&self) -> PrimePowerRing {
        self.coeff
    }

    pub fn one(&self) -> Vec<u64> {
        let mut x = vec![0; self.degree];
        x[0] = 1 % self.coeff.modulus();
        x
    }

    /// Reduces an arbitrary-length polynomial modulo `f`.
    pub fn reduce_poly(&self, mut poly: Vec<u64>) -> Vec<u64> {
        let r = self.coeff;
        let n = self.degree;
        while poly.len() > n {
            let top = poly.pop().unwrap();
            if top != 0 {
                let base = poly.len() - n;
                // T^n = -(tail)
                for (j, &c) in self.modulus_tail.iter().enumerate() {
                    poly[base + j] = r.sub(poly[base + j], r.mul(top, c));
                }
            }
        }
        poly.resize(n, 0);
        poly
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let r = self.coeff;
        let mut prod = vec![0u64; a.len() + b.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = r.add(prod[i + j], r.mul(x, y));
            }
        }
        self.reduce_poly(prod)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter().zip(b).map(|(&x, &y)| self.coeff.add(x, y)).collect()
    }
}

fn cyclic_degree(ring: &FiniteLevelRing) -> Result<usize> {
    let g = ring.group().ok_or_else(|| invalid("expected a group ring"))?;
    if g.rank() != 1 {
        return Err(invalid("the polynomial model handles one cyclic factor at a time"));
    }
    Ok(g.factor_order(0) as usize)
}

/// The polynomial ring matching a cyclic group ring.
pub fn polynomial_model(ring: &FiniteLevelRing) -> Result<CyclicPolynomialRing> {
    Ok(CyclicPolynomialRing::new(ring.coeff_ring(), cyclic_degree(ring)?))
}

/// `sum c_i γ^i  ->  sum c_i (1+T)^i mod f`.
pub fn group_ring_to_polynomial(ring: &FiniteLevelRing, x: &[u64]) -> Result<Vec<u64>> {
    ring.check_element(x)?;
    let model = polynomial_model(ring)?;
    let r = ring.coeff_ring();
    let mut out = vec![0u64; model.degree()];
    let mut gamma_power = model.one();
    let one_plus_t = model.reduce_poly(vec![1, 1]);
    for &c in x {
        if c != 0 {
            for (o, &g) in out.iter_mut().zip(&gamma_power) {
                *o = r.add(*o, r.mul(c, g));
            }
        }
        gamma_power = model.mul(&gamma_power, &one_plus_t);
    }
    Ok(out)
}

/// Inverse of [`group_ring_to_polynomial`]: `T -> γ - 1`.
pub fn polynomial_to_group_ring(ring: &FiniteLevelRing, y: &[u64]) -> Result<RingElement> {
    let n = cyclic_degree(ring)?;
    if y.len() != n {
        return Err(invalid(format!("polynomial has {} coefficients, expected {n}", y.len())));
    }
    let t = ring.variable(0);
    let mut out = ring.zero();
    let mut t_power = ring.one();
    for &c in y {
        if c != 0 {
            out = ring.add(&out, &ring.scale(&t_power, c));
        }
        t_power = ring.mul(&t_power, &t);
    }
    Ok(out)
}
