//! Deterministic inputs shared by the benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use iwasawa_core::algebra::{FiniteAbelianPGroup, FiniteLevelRing};
use iwasawa_core::carlitz::{FqContext, FqPoly};
use iwasawa_core::cohomology::GModuleData;
use iwasawa_core::module::ModulePresentation;
use iwasawa_core::{AbelianGroupStructure, PrimePowerMatrix, PrimePowerRing};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random `rows x cols` matrix over `Z/p^n`.
pub fn random_matrix(p: u64, n: u32, rows: usize, cols: usize, seed: u64) -> PrimePowerMatrix {
    let ring = PrimePowerRing::new(p, n).unwrap();
    let mut r = rng(seed);
    let entries = (0..rows * cols).map(|_| r.gen_range(0..ring.modulus())).collect();
    PrimePowerMatrix::new(ring, rows, cols, entries).unwrap()
}

/// `(Z/p)^d` acting on `Z/p^2 + Z/p^2` through commuting unipotent matrices.
pub fn unipotent_module(p: u64, d: usize) -> GModuleData {
    let group = FiniteAbelianPGroup::new(p, vec![1; d]).unwrap();
    let module = AbelianGroupStructure::from_prime_power_exponents(p, [2, 2]);
    let pp = p as i64;
    let base = [[1, pp], [0, 1]];
    let actions = (0..d)
        .map(|k| {
            // powers of one unipotent matrix commute
            let mut m = [[1i64, 0], [0, 1]];
            for _ in 0..=k {
                m = [
                    [m[0][0] * base[0][0] + m[0][1] * base[1][0], m[0][0] * base[0][1] + m[0][1] * base[1][1]],
                    [m[1][0] * base[0][0] + m[1][1] * base[1][0], m[1][0] * base[0][1] + m[1][1] * base[1][1]],
                ];
            }
            m.iter().map(|r| r.to_vec()).collect()
        })
        .collect();
    GModuleData::new(group, p, module, actions).unwrap()
}

/// A random `b x b` presentation over `Z/p^n[T_1..T_d]/(T_i^m)`.
pub fn random_presentation(p: u64, n: u32, d: usize, m: u32, b: usize, seed: u64) -> ModulePresentation {
    let ring = FiniteLevelRing::truncated_poly(PrimePowerRing::new(p, n).unwrap(), d, m).unwrap();
    let modulus = ring.coeff_ring().modulus();
    let mut r = rng(seed);
    let rows = (0..b)
        .map(|_| (0..b).map(|_| (0..ring.basis_len()).map(|_| r.gen_range(0..modulus)).collect()).collect())
        .collect();
    ModulePresentation::new(&ring, b, rows).unwrap()
}

/// `F_q` and a monic irreducible of the given degree.
pub fn carlitz_prime(q: u64, degree: usize) -> (FqContext, FqPoly) {
    let ctx = FqContext::of_order(q).unwrap();
    let prime = ctx.monic_irreducibles(degree).into_iter().next().unwrap();
    (ctx, prime)
}
