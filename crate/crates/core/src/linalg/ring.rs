use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Largest prime accepted as the residue characteristic.
pub const MAX_PRIME: u64 = 10_000;
/// Largest precision exponent.
pub const MAX_PRECISION: u32 = 16;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The chain ring Z/p^N. Elements are canonical residues in `0..p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RingSpec", into = "RingSpec")]
pub struct PrimePowerRing {
    p: u64,
    precision: u32,
    modulus: u64,
}

#[derive(Serialize, Deserialize)]
struct RingSpec {
    p: u64,
    #[serde(rename = "N")]
    precision: u32,
}

impl TryFrom<RingSpec> for PrimePowerRing {
    type Error = crate::Error;
    fn try_from(s: RingSpec) -> Result<Self> {
        PrimePowerRing::new(s.p, s.precision)
    }
}

impl From<PrimePowerRing> for RingSpec {
    fn from(r: PrimePowerRing) -> Self {
        RingSpec { p: r.p, precision: r.precision }
    }
}

impl PrimePowerRing {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(invalid(format!("{p} is not a prime <= {MAX_PRIME}")));
        }
        if precision == 0 || precision > MAX_PRECISION {
            return Err(invalid(format!("precision {precision} outside 1..={MAX_PRECISION}")));
        }
        let modulus = p
            .checked_pow(precision)
            .filter(|&m| m < (1u64 << 63))
            .ok_or_else(|| invalid(format!("{p}^{precision} does not fit in 63 bits")))?;
        Ok(PrimePowerRing { p, precision, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^k`, which is zero once `k >= N`.
    pub fn p_power(&self, k: u32) -> u64 {
        if k >= self.precision {
            0
        } else {
            self.p.pow(k)
        }
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.modulus;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// p-adic valuation of a residue; `N` for zero.
    pub fn valuation(&self, x: u64) -> u32 {
        if x == 0 {
            return self.precision;
        }
        let mut v = 0;
        let mut y = x;
        while y % self.p == 0 {
            y /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, x: u64) -> bool {
        x % self.p != 0
    }

    /// Inverse of a unit. Panics on non-units.
    pub fn inv(&self, x: u64) -> u64 {
        assert!(self.is_unit(x), "{x} is not a unit mod {}", self.modulus);
        let (mut r0, mut r1) = (self.modulus as i128, x as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        t0.rem_euclid(self.modulus as i128) as u64
    }

    /// Writes a nonzero `x` as `p^v * u` with `u` a unit; returns `(v, u)`.
    pub fn split(&self, x: u64) -> (u32, u64) {
        let v = self.valuation(x);
        (v, x / self.p.pow(v))
    }

    /// The same prime at another precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        PrimePowerRing::new(self.p, precision)
    }
}
