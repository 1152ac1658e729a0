use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{factorize, is_prime};

/// Largest field handled.
pub const MAX_FIELD_ORDER: u64 = 64;

/// `F_q = F_p[α]/(m(α))`. Elements are encoded as integers `Σ c_i p^i`
/// for `c_0 + c_1 α + ...`; arithmetic runs on precomputed tables.
#[derive(Clone, Debug)]
pub struct FqContext {
    p: u64,
    f: u32,
    q: u32,
    modulus: Vec<u64>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl PartialEq for FqContext {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.f == other.f
    }
}

impl Eq for FqContext {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub f: u32,
}

impl FqContext {
    pub fn new(p: u64, f: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(invalid(format!("characteristic {p} is not prime")));
        }
        if f == 0 {
            return Err(invalid("extension degree must be >= 1"));
        }
        let q = p.checked_pow(f).filter(|&q| q <= MAX_FIELD_ORDER).ok_or_else(|| {
            invalid(format!("field order {p}^{f} exceeds {MAX_FIELD_ORDER}"))
        })?;
        let modulus = least_irreducible(p, f as usize);
        let q32 = q as u32;
        let digits = |x: u32| -> Vec<u64> {
            let mut x = x as u64;
            (0..f).map(|_| {
                let d = x % p;
                x /= p;
                d
            })
            .collect()
        };
        let encode = |d: &[u64]| -> u32 { d.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32 };
        let mut add = vec![0u32; (q * q) as usize];
        let mut mul = vec![0u32; (q * q) as usize];
        for x in 0..q32 {
            let dx = digits(x);
            for y in 0..q32 {
                let dy = digits(y);
                let s: Vec<u64> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                add[(x * q32 + y) as usize] = encode(&s);
                let mut prod = vec![0u64; 2 * f as usize];
                for (i, &a) in dx.iter().enumerate() {
                    for (j, &b) in dy.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + a * b) % p;
                    }
                }
                fp_reduce(&mut prod, &modulus, p);
                prod.resize(f as usize, 0);
                mul[(x * q32 + y) as usize] = encode(&prod);
            }
        }
        let mut neg = vec![0u32; q as usize];
        let mut inv = vec![0u32; q as usize];
        for x in 0..q32 {
            for y in 0..q32 {
                if add[(x * q32 + y) as usize] == 0 {
                    neg[x as usize] = y;
                }
                if mul[(x * q32 + y) as usize] == 1 {
                    inv[x as usize] = y;
                }
            }
        }
        Ok(FqContext { p, f, q: q32, modulus, add, mul, neg, inv })
    }

    /// The context for a field of order `q`.
    pub fn of_order(q: u64) -> Result<Self> {
        let fac = factorize(q);
        if fac.len() != 1 {
            return Err(invalid(format!("{q} is not a prime power")));
        }
        Self::new(fac[0].0, fac[0].1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    /// Coefficients of the defining polynomial over `F_p`, low to high (monic).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec { p: self.p, f: self.f }
    }

    pub fn is_element(&self, x: u32) -> bool {
        x < self.q
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        self.add[(x * self.q + y) as usize]
    }

    #[inline]
    pub fn sub(&self, x: u32, y: u32) -> u32 {
        self.add(x, self.neg[y as usize])
    }

    #[inline]
    pub fn neg(&self, x: u32) -> u32 {
        self.neg[x as usize]
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[(x * self.q + y) as usize]
    }

    /// Inverse of a nonzero element.
    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        debug_assert!(x != 0);
        self.inv[x as usize]
    }

    pub fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut acc = 1;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The unique `y` with `y^p = x`.
    pub fn pth_root(&self, x: u32) -> u32 {
        self.pow(x, self.q() / self.p)
    }
}

/// Reduces `poly` (F_p coefficients) modulo the monic `m` in place.
fn fp_reduce(poly: &mut Vec<u64>, m: &[u64], p: u64) {
    let deg = m.len() - 1;
    while poly.len() > deg {
        let top = poly.pop().unwrap();
        if top != 0 {
            let base = poly.len() - deg;
            for (j, &c) in m[..deg].iter().enumerate() {
                poly[base + j] = (poly[base + j] + (p - top) * c) % p;
            }
        }
    }
}

/// Trial division by monic polynomials of degree `1..=deg/2`.
fn fp_has_proper_factor(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    for k in 1..=deg / 2 {
        let count = p.pow(k as u32);
        for code in 0..count {
            let mut d: Vec<u64> = Vec::with_capacity(k + 1);
            let mut c = code;
            for _ in 0..k {
                d.push(c % p);
                c /= p;
            }
            d.push(1);
            let mut r = m.to_vec();
            fp_reduce(&mut r, &d, p);
            if r.iter().all(|&x| x == 0) {
                return true;
            }
        }
    }
    false
}

/// Monic irreducible of degree `f` over `F_p` with the smallest encoding
/// `Σ_{i<f} c_i p^i` of its lower coefficients.
fn least_irreducible(p: u64, f: usize) -> Vec<u64> {
    if f == 1 {
        return vec![0, 1];
    }
    for code in 0..p.pow(f as u32) {
        let mut m: Vec<u64> = Vec::with_capacity(f + 1);
        let mut c = code;
        for _ in 0..f {
            m.push(c % p);
            c /= p;
        }
        m.push(1);
        if !fp_has_proper_factor(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
