use std::fmt;

use serde::{Deserialize, Serialize};

use super::fq::FqContext;
use crate::error::{invalid, Error, Result};

/// Trial division is used while the number of candidate divisors stays below this.
pub const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

/// A polynomial over `F_q`, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<u32>", into = "Vec<u32>")]
pub struct FqPoly(Vec<u32>);

impl From<Vec<u32>> for FqPoly {
    fn from(v: Vec<u32>) -> Self {
        FqPoly::new(v)
    }
}

impl From<FqPoly> for Vec<u32> {
    fn from(p: FqPoly) -> Self {
        p.0
    }
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly(coeffs)
    }

    pub fn zero() -> Self {
        FqPoly(Vec::new())
    }

    pub fn one() -> Self {
        FqPoly(vec![1])
    }

    pub fn constant(c: u32) -> Self {
        FqPoly::new(vec![c])
    }

    /// `c T^e`.
    pub fn monomial(c: u32, e: usize) -> Self {
        let mut v = vec![0; e + 1];
        v[e] = c;
        FqPoly::new(v)
    }

    /// The variable `T`.
    pub fn t() -> Self {
        FqPoly(vec![0, 1])
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn lead(&self) -> u32 {
        self.0.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the base-q digits of `code`.
    pub fn monic_from_code(q: u64, deg: usize, mut code: u64) -> Self {
        let mut v = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            v.push((code % q) as u32);
            code /= q;
        }
        v.push(1);
        FqPoly(v)
    }
}

impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "T")?,
                (1, _) => write!(f, "{c}*T")?,
                (_, 1) => write!(f, "T^{i}")?,
                _ => write!(f, "{c}*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl FqContext {
    pub fn check_poly(&self, a: &FqPoly) -> Result<()> {
        match a.coeffs().iter().position(|&c| !self.is_element(c)) {
            Some(i) => Err(invalid(format!("coefficient {i} is not an element of F_{}", self.q()))),
            None => Ok(()),
        }
    }

    pub fn poly_add(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.0.len().max(b.0.len());
        FqPoly::new((0..n).map(|i| self.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn poly_sub(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let n = a.0.len().max(b.0.len());
        FqPoly::new((0..n).map(|i| self.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn poly_scale(&self, a: &FqPoly, c: u32) -> FqPoly {
        FqPoly::new(a.0.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn poly_mul(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        if a.is_zero() || b.is_zero() {
            return FqPoly::zero();
        }
        let mut out = vec![0u32; a.0.len() + b.0.len() - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        FqPoly::new(out)
    }

    pub fn poly_pow(&self, a: &FqPoly, mut e: u64) -> FqPoly {
        let mut acc = FqPoly::one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.poly_mul(&base, &base);
            }
        }
        acc
    }

    /// `(quotient, remainder)`; panics on division by zero.
    pub fn poly_divrem(&self, a: &FqPoly, b: &FqPoly) -> (FqPoly, FqPoly) {
        let db = b.degree().expect("division by the zero polynomial");
        let inv_lead = self.inv(b.lead());
        let mut r = a.0.clone();
        if r.len() <= db {
            return (FqPoly::zero(), a.clone());
        }
        let mut quot = vec![0u32; r.len() - db];
        for k in (0..quot.len()).rev() {
            let c = self.mul(r[k + db], inv_lead);
            if c == 0 {
                continue;
            }
            quot[k] = c;
            for (j, &bj) in b.0.iter().enumerate() {
                r[k + j] = self.sub(r[k + j], self.mul(c, bj));
            }
        }
        r.truncate(db);
        (FqPoly::new(quot), FqPoly::new(r))
    }

    pub fn poly_rem(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        self.poly_divrem(a, b).1
    }

    pub fn poly_divides(&self, d: &FqPoly, a: &FqPoly) -> bool {
        self.poly_rem(a, d).is_zero()
    }

    pub fn poly_monic(&self, a: &FqPoly) -> FqPoly {
        if a.is_zero() {
            return FqPoly::zero();
        }
        self.poly_scale(a, self.inv(a.lead()))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn poly_gcd(&self, a: &FqPoly, b: &FqPoly) -> FqPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.poly_rem(&x, &y);
            x = y;
            y = r;
        }
        self.poly_monic(&x)
    }

    pub fn poly_mulmod(&self, a: &FqPoly, b: &FqPoly, m: &FqPoly) -> FqPoly {
        self.poly_rem(&self.poly_mul(a, b), m)
    }

    pub fn poly_powmod(&self, a: &FqPoly, mut e: u64, m: &FqPoly) -> FqPoly {
        let mut acc = self.poly_rem(&FqPoly::one(), m);
        let mut base = self.poly_rem(a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mulmod(&acc, &base, m);
            }
            e >>= 1;
            if e > 0 {
                base = self.poly_mulmod(&base, &base, m);
            }
        }
        acc
    }

    pub fn poly_derivative(&self, a: &FqPoly) -> FqPoly {
        FqPoly::new(
            a.0.iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| self.mul(c, self.from_int((i as u64 % self.p()) as i64)))
                .collect(),
        )
    }

    pub fn poly_eval(&self, a: &FqPoly, x: u32) -> u32 {
        a.0.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// `a(T^k)`.
    pub fn poly_substitute_power(&self, a: &FqPoly, k: usize) -> FqPoly {
        if a.is_zero() {
            return FqPoly::zero();
        }
        let mut v = vec![0u32; (a.0.len() - 1) * k + 1];
        for (i, &c) in a.0.iter().enumerate() {
            v[i * k] = c;
        }
        FqPoly::new(v)
    }

    /// `b` with `b^p = a`, when `a' = 0`.
    pub fn poly_pth_root(&self, a: &FqPoly) -> Option<FqPoly> {
        let p = self.p() as usize;
        if a.0.iter().enumerate().any(|(i, &c)| c != 0 && i % p != 0) {
            return None;
        }
        Some(FqPoly::new(a.0.iter().step_by(p).map(|&c| self.pth_root(c)).collect()))
    }

    /// Number of monic candidates of degree `1..=deg/2`.
    fn trial_candidates(&self, deg: usize) -> Option<u64> {
        (1..=deg / 2).try_fold(0u64, |acc, k| self.q().checked_pow(k as u32).and_then(|c| acc.checked_add(c)))
    }

    /// Irreducibility by trial division against every monic polynomial of
    /// degree at most `deg/2`.
    pub fn is_irreducible_trial(&self, a: &FqPoly) -> Result<bool> {
        let deg = match a.degree() {
            None | Some(0) => return Ok(false),
            Some(d) => d,
        };
        match self.trial_candidates(deg) {
            Some(c) if c <= TRIAL_DIVISION_LIMIT => {}
            _ => return Err(Error::SizeCap(format!("trial division for degree {deg} over F_{}", self.q()))),
        }
        for k in 1..=deg / 2 {
            for code in 0..self.q().pow(k as u32) {
                if self.poly_divides(&FqPoly::monic_from_code(self.q(), k, code), a) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Rabin's test: `T^{q^n} = T mod a` and `gcd(T^{q^{n/r}} - T, a) = 1` for primes `r | n`.
    pub fn is_irreducible_rabin(&self, a: &FqPoly) -> bool {
        let n = match a.degree() {
            None | Some(0) => return false,
            Some(d) => d,
        };
        let frob = |k: usize| -> FqPoly {
            let mut x = self.poly_rem(&FqPoly::t(), a);
            for _ in 0..k {
                x = self.poly_powmod(&x, self.q(), a);
            }
            x
        };
        let t = self.poly_rem(&FqPoly::t(), a);
        if frob(n) != t {
            return false;
        }
        crate::linalg::factorize(n as u64).into_iter().all(|(r, _)| {
            let diff = self.poly_sub(&frob(n / r as usize), &t);
            self.poly_gcd(&diff, a).is_constant()
        })
    }

    /// Trial division where affordable, Rabin's test beyond.
    pub fn is_irreducible(&self, a: &FqPoly) -> bool {
        self.is_irreducible_trial(a).unwrap_or_else(|_| self.is_irreducible_rabin(a))
    }

    /// Validates a prime of `A = F_q[T]`: monic and irreducible.
    pub fn check_prime(&self, a: &FqPoly) -> Result<()> {
        self.check_poly(a)?;
        if !a.is_monic() {
            return Err(invalid(format!("{a} is not monic")));
        }
        if !self.is_irreducible(a) {
            return Err(Error::Reducible(format!("{a} over F_{}", self.q())));
        }
        Ok(())
    }

    /// Factorization into monic irreducibles with multiplicities (sorted),
    /// by repeated trial division. Returns the leading coefficient alongside.
    pub fn poly_factor(&self, a: &FqPoly) -> Result<(u32, Vec<(FqPoly, u32)>)> {
        let deg = a.degree().ok_or_else(|| invalid("cannot factor the zero polynomial"))?;
        match self.trial_candidates(deg) {
            Some(c) if c <= TRIAL_DIVISION_LIMIT => {}
            _ => return Err(Error::SizeCap(format!("trial factorization of degree {deg} over F_{}", self.q()))),
        }
        let lead = a.lead();
        let mut rest = self.poly_monic(a);
        let mut out = Vec::new();
        let mut k = 1;
        while rest.degree().unwrap_or(0) >= 2 * k {
            for code in 0..self.q().pow(k as u32) {
                let d = FqPoly::monic_from_code(self.q(), k, code);
                let mut mult = 0;
                loop {
                    let (quot, rem) = self.poly_divrem(&rest, &d);
                    if !rem.is_zero() {
                        break;
                    }
                    rest = quot;
                    mult += 1;
                }
                if mult > 0 {
                    out.push((d, mult));
                }
            }
            k += 1;
        }
        if rest.degree().unwrap_or(0) >= 1 {
            match out.iter_mut().find(|(f, _)| *f == rest) {
                Some(entry) => entry.1 += 1,
                None => out.push((rest, 1)),
            }
        }
        out.sort();
        Ok((lead, out))
    }

    /// Every monic irreducible of the given degree, in code order.
    pub fn monic_irreducibles(&self, deg: usize) -> Vec<FqPoly> {
        (0..self.q().pow(deg as u32))
            .map(|c| FqPoly::monic_from_code(self.q(), deg, c))
            .filter(|f| self.is_irreducible(f))
            .collect()
    }
}
