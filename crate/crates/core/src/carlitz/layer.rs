use serde::{Deserialize, Serialize};

use super::fq::FqContext;
use super::module::{carlitz_polynomial, reduce_at};
use super::poly::FqPoly;
use crate::error::{invalid, Error, Result};
use crate::linalg::{factorize, AbelianGroupStructure};

/// Cap on `q^{n deg 𝔭}` for [`torsion_layer`].
pub const MAX_LAYER_SIZE: u64 = 1_000_000;
/// Cap on `|A/𝔭^n|` for the brute-force unit census.
pub const MAX_RESIDUE_SIZE: u64 = 100_000;
/// Cap on `q^{n deg 𝔭}` for the explicit root count.
pub const MAX_ROOT_COUNT_DEGREE: u64 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionLayer {
    pub torsion_count: u64,
    pub galois_order: u64,
    pub zp_part_order: u64,
    pub prime_to_p_order: u64,
}

fn layer_sizes(ctx: &FqContext, prime: &FqPoly, n: u32, cap: u64) -> Result<(u64, u64)> {
    ctx.check_prime(prime)?;
    if n == 0 {
        return Err(invalid("level n must be >= 1"));
    }
    let d = prime.degree().expect("primes are nonconstant") as u32;
    let size = n
        .checked_mul(d)
        .and_then(|e| ctx.q().checked_pow(e))
        .filter(|&s| s <= cap)
        .ok_or_else(|| Error::SizeCap(format!("|A/P^n| = {}^({n}*{d}) exceeds {cap}", ctx.q())))?;
    Ok((size, ctx.q().pow(d)))
}

/// Sizes attached to `F(Φ[𝔭^n])/F`: `|Φ[𝔭^n]|` and `|(A/𝔭^n)^*|` with its
/// split into the `q^{(n-1) deg 𝔭}` and `q^{deg 𝔭} - 1` parts.
pub fn torsion_layer(ctx: &FqContext, prime: &FqPoly, n: u32) -> Result<TorsionLayer> {
    let (size, norm) = layer_sizes(ctx, prime, n, MAX_LAYER_SIZE)?;
    let zp_part_order = size / norm;
    let prime_to_p_order = norm - 1;
    Ok(TorsionLayer { torsion_count: size, galois_order: zp_part_order * prime_to_p_order, zp_part_order, prime_to_p_order })
}

/// `A/(m)` for monic `m` of degree `D`, elements encoded as `Σ c_i q^i`.
struct ResidueRing<'a> {
    ctx: &'a FqContext,
    modulus: Vec<u32>,
    degree: usize,
}

impl ResidueRing<'_> {
    fn decode(&self, mut x: u64, out: &mut [u32]) {
        let q = self.ctx.q();
        for slot in out.iter_mut() {
            *slot = (x % q) as u32;
            x /= q;
        }
    }

    fn encode(&self, digits: &[u32]) -> u64 {
        let q = self.ctx.q();
        digits.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    /// `out = a * b mod m`; `buf` has length `2D - 1`.
    fn mul_into(&self, a: &[u32], b: &[u32], buf: &mut [u32], out: &mut [u32]) {
        let k = self.ctx;
        let d = self.degree;
        buf.iter_mut().for_each(|x| *x = 0);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    buf[i + j] = k.add(buf[i + j], k.mul(x, y));
                }
            }
        }
        for top in (d..buf.len()).rev() {
            let c = buf[top];
            if c != 0 {
                buf[top] = 0;
                for (j, &mj) in self.modulus[..d].iter().enumerate() {
                    let slot = top - d + j;
                    buf[slot] = k.sub(buf[slot], k.mul(c, mj));
                }
            }
        }
        out.copy_from_slice(&buf[..d]);
    }
}

/// Element orders of `(A/𝔭^n)^*`, indexed by encoding (0 for non-units), from
/// walking the cyclic subgroup of every element not yet seen.
fn unit_orders(ctx: &FqContext, prime: &FqPoly, n: u32, size: u64) -> Vec<u64> {
    let m = ctx.poly_pow(prime, n as u64);
    let d = m.degree().unwrap();
    let ring = ResidueRing { ctx, modulus: m.coeffs().to_vec(), degree: d };
    let mut order = vec![0u64; size as usize];
    let mut is_unit = vec![true; size as usize];
    let dp = prime.degree().unwrap();
    let cofactor_count = ctx.q().pow((d - dp) as u32);
    let mut y = vec![0u32; d - dp];
    for code in 0..cofactor_count {
        ring.decode(code, &mut y);
        let multiple = ctx.poly_mul(prime, &FqPoly::new(y.clone()));
        let mut digits = vec![0u32; d];
        for (i, &c) in multiple.coeffs().iter().enumerate() {
            digits[i] = c;
        }
        is_unit[ring.encode(&digits) as usize] = false;
    }
    let mut buf = vec![0u32; 2 * d - 1];
    let mut x = vec![0u32; d];
    let mut acc = vec![0u32; d];
    let mut next = vec![0u32; d];
    let mut powers: Vec<u64> = Vec::new();
    for code in 1..size {
        if !is_unit[code as usize] || order[code as usize] != 0 {
            continue;
        }
        ring.decode(code, &mut x);
        acc.copy_from_slice(&x);
        powers.clear();
        powers.push(code);
        // walk x, x^2, ... until 1
        loop {
            let e = ring.encode(&acc);
            if e == 1 {
                break;
            }
            ring.mul_into(&acc, &x, &mut buf, &mut next);
            std::mem::swap(&mut acc, &mut next);
            powers.push(ring.encode(&acc));
        }
        let o = powers.len() as u64;
        for (k, &e) in powers.iter().enumerate() {
            let exp = k as u64 + 1;
            order[e as usize] = o / gcd(exp, o);
        }
    }
    order
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Invariant factors of a finite abelian group from its element-order census:
/// for each prime `r`, `|G[r^j]| = r^{L_j}` and `L_j - L_{j-1}` counts the
/// cyclic factors of exponent at least `j`.
pub fn structure_from_orders(orders: impl IntoIterator<Item = u64>) -> Result<AbelianGroupStructure> {
    let orders: Vec<u64> = orders.into_iter().collect();
    let total = orders.len() as u64;
    let mut cyclic = Vec::new();
    for (r, e) in factorize(total) {
        let log_count = |j: u32| -> Result<u32> {
            let rj = r.pow(j);
            let count = orders.iter().filter(|&&o| rj % o == 0).count() as u64;
            let fac = factorize(count);
            match fac.as_slice() {
                [] => Ok(0),
                [(prime, k)] if *prime == r => Ok(*k),
                _ => Err(invalid(format!("|G[{r}^{j}]| = {count} is not a power of {r}"))),
            }
        };
        let mut prev = 0;
        let mut at_least = Vec::new();
        for j in 1..=e {
            let l = log_count(j)?;
            at_least.push(l - prev);
            prev = l;
            if l == e {
                break;
            }
        }
        // at_least[j-1] = number of factors with exponent >= j
        for (j, &count) in at_least.iter().enumerate() {
            let beyond = at_least.get(j + 1).copied().unwrap_or(0);
            for _ in 0..count - beyond {
                cyclic.push(r.pow(j as u32 + 1));
            }
        }
    }
    Ok(AbelianGroupStructure::from_cyclic_orders(cyclic))
}

/// `(A/𝔭^n)^*` by brute-force element-order census.
pub fn unit_group_structure(ctx: &FqContext, prime: &FqPoly, n: u32) -> Result<AbelianGroupStructure> {
    let (size, _) = layer_sizes(ctx, prime, n, MAX_RESIDUE_SIZE)?;
    let orders = unit_orders(ctx, prime, n, size);
    structure_from_orders(orders.into_iter().filter(|&o| o != 0))
}

/// Result of counting roots of `Φ_{𝔭^n}` after reducing at a degree-one place `T = c`
/// (with `𝔭(c) != 0`): the reduction splits over `F_{q^m}`, `m` the order of
/// `T - c` in `(A/𝔭^n)^*`, and its roots there are counted as
/// `deg gcd(x^{q^m} - x, Φ_{𝔭^n}(x))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootCount {
    pub reduction_point: u32,
    pub extension_degree: u64,
    pub roots: u64,
}

pub fn torsion_root_count(ctx: &FqContext, prime: &FqPoly, n: u32) -> Result<RootCount> {
    let (size, _) = layer_sizes(ctx, prime, n, MAX_ROOT_COUNT_DEGREE)?;
    let c = (0..ctx.q() as u32)
        .find(|&c| ctx.poly_eval(prime, c) != 0)
        .ok_or_else(|| invalid("no degree-one place prime to the modulus"))?;
    let modulus = ctx.poly_pow(prime, n as u64);
    let t_minus_c = FqPoly::new(vec![ctx.neg(c), 1]);
    let one = ctx.poly_rem(&FqPoly::one(), &modulus);
    let mut m = 1u64;
    let mut power = ctx.poly_rem(&t_minus_c, &modulus);
    while power != one {
        power = ctx.poly_mulmod(&power, &t_minus_c, &modulus);
        m += 1;
        if m > size {
            return Err(invalid("T - c is not a unit modulo the prime power"));
        }
    }
    let phi = carlitz_polynomial(ctx, &modulus)?;
    let reduced = reduce_at(ctx, &phi, c);
    let x = FqPoly::t();
    let mut frob = ctx.poly_rem(&x, &reduced);
    for _ in 0..m {
        frob = ctx.poly_powmod(&frob, ctx.q(), &reduced);
    }
    let g = ctx.poly_gcd(&ctx.poly_sub(&frob, &x), &reduced);
    Ok(RootCount { reduction_point: c, extension_degree: m, roots: g.degree().unwrap_or(0) as u64 })
}
