use std::collections::BTreeMap;

use super::fq::FqContext;
use super::poly::FqPoly;
use crate::error::{invalid, Result};

/// A sparse polynomial in `T` over `F_q`: `(exponent, coefficient)` pairs,
/// exponents strictly increasing, coefficients nonzero. Carlitz coefficients
/// have degrees near `q^i` but few terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly(Vec<(u64, u32)>);

impl SparsePoly {
    pub fn zero() -> Self {
        SparsePoly(Vec::new())
    }

    pub fn from_dense(a: &FqPoly) -> Self {
        SparsePoly(a.coeffs().iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i as u64, c)).collect())
    }

    pub fn to_dense(&self) -> FqPoly {
        let len = self.0.last().map_or(0, |&(e, _)| e as usize + 1);
        let mut v = vec![0u32; len];
        for &(e, c) in &self.0 {
            v[e as usize] = c;
        }
        FqPoly::new(v)
    }

    pub fn terms(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<u64> {
        self.0.last().map(|&(e, _)| e)
    }

    fn from_map(map: BTreeMap<u64, u32>) -> Self {
        SparsePoly(map.into_iter().filter(|&(_, c)| c != 0).collect())
    }

    fn accumulate(&self, ctx: &FqContext, into: &mut BTreeMap<u64, u32>) {
        for &(e, c) in &self.0 {
            let slot = into.entry(e).or_insert(0);
            *slot = ctx.add(*slot, c);
        }
    }

    pub fn add(&self, ctx: &FqContext, other: &SparsePoly) -> SparsePoly {
        let mut map = BTreeMap::new();
        self.accumulate(ctx, &mut map);
        other.accumulate(ctx, &mut map);
        Self::from_map(map)
    }

    pub fn mul(&self, ctx: &FqContext, other: &SparsePoly) -> SparsePoly {
        let mut map: BTreeMap<u64, u32> = BTreeMap::new();
        for &(e, c) in &self.0 {
            for &(f, d) in &other.0 {
                let slot = map.entry(e + f).or_insert(0);
                *slot = ctx.add(*slot, ctx.mul(c, d));
            }
        }
        Self::from_map(map)
    }

    /// `a(T) -> T * a(T)`.
    pub fn shift(&self) -> SparsePoly {
        SparsePoly(self.0.iter().map(|&(e, c)| (e + 1, c)).collect())
    }

    /// `a(T) -> a(T^k)`, which equals `a^k` when `k` is a power of `q`.
    pub fn substitute_power(&self, k: u64) -> SparsePoly {
        SparsePoly(self.0.iter().map(|&(e, c)| (e * k, c)).collect())
    }

    /// `a(c)` for `c ∈ F_q`.
    pub fn eval(&self, ctx: &FqContext, c: u32) -> u32 {
        let order = ctx.q() - 1;
        self.0.iter().fold(0, |acc, &(e, coef)| {
            let power = if e == 0 {
                1
            } else if c == 0 {
                0
            } else {
                ctx.pow(c, e % order)
            };
            ctx.add(acc, ctx.mul(coef, power))
        })
    }
}

/// `Φ_a(x) = Σ c_i x^{q^i}` with `c_i ∈ F_q[T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CarlitzPolynomial {
    q: u64,
    operand: FqPoly,
    coefficients: Vec<SparsePoly>,
}

impl CarlitzPolynomial {
    pub fn operand(&self) -> &FqPoly {
        &self.operand
    }

    /// `c_0, ..., c_{deg a}`.
    pub fn coefficients(&self) -> &[SparsePoly] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize) -> FqPoly {
        self.coefficients.get(i).map(SparsePoly::to_dense).unwrap_or_default()
    }

    /// `deg_x Φ_a = q^{deg a}`.
    pub fn x_degree(&self) -> u128 {
        (self.q as u128).pow(self.coefficients.len() as u32 - 1)
    }

    /// Exponents `q^i` of the monomials with nonzero coefficient.
    pub fn x_exponents(&self) -> Vec<u128> {
        (0..self.coefficients.len())
            .filter(|&i| !self.coefficients[i].is_zero())
            .map(|i| (self.q as u128).pow(i as u32))
            .collect()
    }
}

/// `Φ_T ∘ Φ`: `c'_i = T c_i + c_{i-1}(T^q)`.
fn apply_t(ctx: &FqContext, coeffs: &[SparsePoly]) -> Vec<SparsePoly> {
    let q = ctx.q();
    let mut out = Vec::with_capacity(coeffs.len() + 1);
    for i in 0..=coeffs.len() {
        let mut c = coeffs.get(i).map(SparsePoly::shift).unwrap_or_default();
        if i > 0 {
            c = c.add(ctx, &coeffs[i - 1].substitute_power(q));
        }
        out.push(c);
    }
    out
}

/// Horner evaluation of `a` at `Φ_T`.
pub fn carlitz_polynomial(ctx: &FqContext, a: &FqPoly) -> Result<CarlitzPolynomial> {
    ctx.check_poly(a)?;
    if a.is_zero() {
        return Err(invalid("the Carlitz polynomial of 0 is not defined here"));
    }
    let mut coeffs: Vec<SparsePoly> = Vec::new();
    for &c in a.coeffs().iter().rev() {
        coeffs = apply_t(ctx, &coeffs);
        let constant = SparsePoly::from_dense(&FqPoly::constant(c));
        match coeffs.first_mut() {
            Some(c0) => *c0 = c0.add(ctx, &constant),
            None => coeffs.push(constant),
        }
    }
    Ok(CarlitzPolynomial { q: ctx.q(), operand: a.clone(), coefficients: coeffs })
}

/// Coefficients of `f ∘ g` for additive polynomials: `Σ_{i,j} f_i g_j^{q^i} x^{q^{i+j}}`.
pub fn compose_coefficients(ctx: &FqContext, f: &[SparsePoly], g: &[SparsePoly]) -> Vec<SparsePoly> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let q = ctx.q();
    let mut out = vec![SparsePoly::zero(); f.len() + g.len() - 1];
    let mut q_power = 1u64;
    for (i, fi) in f.iter().enumerate() {
        for (j, gj) in g.iter().enumerate() {
            let term = fi.mul(ctx, &gj.substitute_power(q_power));
            out[i + j] = out[i + j].add(ctx, &term);
        }
        q_power = q_power.saturating_mul(q);
    }
    out
}

/// Coefficientwise sum.
pub fn add_coefficients(ctx: &FqContext, f: &[SparsePoly], g: &[SparsePoly]) -> Vec<SparsePoly> {
    let n = f.len().max(g.len());
    let mut out: Vec<SparsePoly> = (0..n)
        .map(|i| {
            let a = f.get(i).cloned().unwrap_or_default();
            let b = g.get(i).cloned().unwrap_or_default();
            a.add(ctx, &b)
        })
        .collect();
    while out.last().is_some_and(SparsePoly::is_zero) {
        out.pop();
    }
    out
}

/// `Φ_a(x)` reduced at `T = c`, as a dense polynomial in `x` over `F_q`.
pub fn reduce_at(ctx: &FqContext, phi: &CarlitzPolynomial, c: u32) -> FqPoly {
    let mut coeffs = vec![0u32; phi.x_degree() as usize + 1];
    let mut e = 1usize;
    for ci in phi.coefficients() {
        coeffs[e] = ci.eval(ctx, c);
        e *= ctx.q() as usize;
    }
    FqPoly::new(coeffs)
}
