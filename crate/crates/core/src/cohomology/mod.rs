//! Cohomology of finite abelian p-groups with coefficients in finite abelian
//! l-groups, computed from explicit periodic complexes.

mod complex;
mod gmodule;

pub use complex::{multi_indices, PeriodicComplex};
pub use gmodule::GModuleData;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{AbelianGroupStructure, PrimePowerMatrix, PrimePowerRing};
use complex::preimage;

/// `H^i(G, B)` for `i` in `0..=2`.
pub fn cohomology_groups(gm: &GModuleData, i: usize) -> Result<AbelianGroupStructure> {
    if i > 2 {
        return Err(invalid(format!("degree {i} is not computed; use 0, 1 or 2")));
    }
    PeriodicComplex::new(gm).cohomology(i)
}

/// `B^G`.
pub fn invariants(gm: &GModuleData) -> Result<AbelianGroupStructure> {
    cohomology_groups(gm, 0)
}

/// `B / (γ_1 - 1, ..., γ_d - 1) B`.
pub fn coinvariants(gm: &GModuleData) -> Result<AbelianGroupStructure> {
    let mut sub = gm.relations(1);
    for a in gm.actions() {
        sub = sub.vstack(&gm.minus_identity(a))?;
    }
    AbelianGroupStructure::quotient(&sub, &gm.identity())
}

/// Tate `Ĥ^0 = B^G / N B` for cyclic `G`.
pub fn tate_h0(gm: &GModuleData) -> Result<AbelianGroupStructure> {
    if gm.group().rank() != 1 {
        return Err(invalid("Tate H^0 is implemented for cyclic groups"));
    }
    if gm.rank() == 0 {
        return Ok(AbelianGroupStructure::trivial());
    }
    let c = PeriodicComplex::new(gm);
    let norm_image = gm.norm(0).vstack(&gm.relations(1))?;
    AbelianGroupStructure::quotient(&norm_image, &c.cocycles(0))
}

/// `H^i(Z_p^d, B)` for an action factoring through the finite quotient
/// carried by `gm`. For `l != p` this vanishes; for `d = 1` it is `B_Γ` in
/// degree 1 and zero in degree 2; for `d >= 2` it is the colimit of the
/// finite-level groups along inflation, checked for stability at two
/// consecutive levels.
pub fn cohomology_profinite(gm: &GModuleData, i: usize) -> Result<AbelianGroupStructure> {
    if !(1..=2).contains(&i) {
        return Err(invalid(format!("profinite degree must be 1 or 2, got {i}")));
    }
    let d = gm.group().rank();
    if gm.l() != gm.p() || d == 0 || gm.rank() == 0 {
        return Ok(AbelianGroupStructure::trivial());
    }
    if d == 1 {
        return if i == 1 { coinvariants(gm) } else { Ok(AbelianGroupStructure::trivial()) };
    }
    inflation_colimit(gm, i)
}

/// The colimit computation used for `d >= 2` (valid for any `d`).
pub fn inflation_colimit(gm: &GModuleData, i: usize) -> Result<AbelianGroupStructure> {
    let a = gm.ring().precision();
    let mut level = a;
    let mut current = inflation_image(gm, i, level, a)?;
    for _ in 0..2 {
        let next = inflation_image(gm, i, level + 1, a)?;
        if next == current {
            return Ok(current);
        }
        level += 1;
        current = next;
    }
    Err(Error::StabilizationFailure { level: level - 1, next: level })
}

/// Image of `H^i(G_s) -> H^i(G_{s+gap})`, where `G_s` raises every cyclic
/// exponent by `s`. At cochain level inflation multiplies the component
/// `j` by `p^{gap * sum floor(j_k / 2)}`.
fn inflation_image(gm: &GModuleData, i: usize, s: u32, gap: u32) -> Result<AbelianGroupStructure> {
    let r = gm.ring();
    let p = gm.p();
    let at_level = |shift: u32| -> Result<PeriodicComplex> {
        let factor = p_power_mod(r, p, shift);
        let norms: Vec<PrimePowerMatrix> = (0..gm.group().rank()).map(|k| gm.scale(&gm.norm(k), factor)).collect();
        Ok(PeriodicComplex::with_norms(gm, &norms))
    };
    let low = at_level(s)?;
    let high = at_level(s + gap)?;
    let n = gm.rank();
    let scalars: Vec<u64> = low
        .components(i)
        .iter()
        .map(|j| p_power_mod(r, p, gap * j.iter().map(|x| x / 2).sum::<u32>()))
        .collect();
    let z = low.cocycles(i);
    let mut rows = Vec::with_capacity(z.rows());
    for row in z.row_vecs() {
        rows.push(row.iter().enumerate().map(|(c, &x)| r.mul(x, scalars[c / n])).collect());
    }
    let image = PrimePowerMatrix::from_row_vecs(r, z.cols(), rows);
    let bd = high.coboundaries(i);
    AbelianGroupStructure::quotient(&bd, &image.vstack(&bd)?)
}

fn p_power_mod(r: PrimePowerRing, p: u64, e: u32) -> u64 {
    r.pow(p % r.modulus(), e as u64)
}

/// The contragredient module on the Pontryagin dual.
pub fn pontryagin_dual(gm: &GModuleData) -> GModuleData {
    gm.dual()
}

/// Both sides of `M^∨ / l I M^∨ ≅ (M^Γ + M[l])^∨` for `l != p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualPair {
    pub left: AbelianGroupStructure,
    pub right: AbelianGroupStructure,
}

impl DualPair {
    pub fn isomorphic(&self) -> bool {
        self.left == self.right
    }
}

pub fn li_dual_pair(gm: &GModuleData) -> Result<DualPair> {
    if gm.l() == gm.p() {
        return Err(invalid("the duality pair needs a coefficient prime different from the group prime"));
    }
    let n = gm.rank();
    if n == 0 {
        return Ok(DualPair { left: AbelianGroupStructure::trivial(), right: AbelianGroupStructure::trivial() });
    }
    let l = gm.l() % gm.ring().modulus();

    let dual = gm.dual();
    let mut sub = dual.relations(1);
    for c in dual.actions() {
        sub = sub.vstack(&dual.scale(&dual.minus_identity(c), l))?;
    }
    let left = AbelianGroupStructure::quotient(&sub, &dual.identity())?;

    let rel = gm.relations(1);
    let fixed = if gm.actions().is_empty() {
        gm.identity()
    } else {
        let d = gm.actions().len();
        let mut wide = PrimePowerMatrix::zeros(gm.ring(), n, n * d);
        for (k, a) in gm.actions().iter().enumerate() {
            let shift = gm.minus_identity(a);
            for x in 0..n {
                for y in 0..n {
                    wide.set(x, k * n + y, shift.get(x, y));
                }
            }
        }
        preimage(&wide, &gm.relations(d))
    };
    let l_torsion = preimage(&gm.scale(&gm.identity(), l), &rel);
    let sum = fixed.vstack(&l_torsion)?.vstack(&rel)?;
    let right = AbelianGroupStructure::quotient(&rel, &sum)?;
    Ok(DualPair { left, right })
}

/// `(Q_p/Z_p)^{d_v}` truncated at level `p^N`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedCorank {
    pub structure: AbelianGroupStructure,
    pub corank: usize,
}

pub fn corank_of_h2_trivial(p: u64, precision: u32, gamma_rank: usize) -> Result<TruncatedCorank> {
    let r = PrimePowerRing::new(p, precision)?;
    Ok(TruncatedCorank {
        structure: AbelianGroupStructure::from_prime_power_exponents(r.p(), vec![precision; gamma_rank]),
        corank: gamma_rank,
    })
}

/// `log_l |H^1| <= d * log_l |B|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1BoundCheck {
    pub h1_log_order: u32,
    pub bound_log_order: u32,
    pub holds: bool,
}

pub fn h1_bound_check(gm: &GModuleData, h1: &AbelianGroupStructure) -> H1BoundCheck {
    let h1_log_order = h1.log_order(gm.l());
    let bound_log_order = gm.group().rank() as u32 * gm.module().log_order(gm.l());
    H1BoundCheck { h1_log_order, bound_log_order, holds: h1_log_order <= bound_log_order }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub h0: Vec<u64>,
    pub h1: Vec<u64>,
    pub h2: Vec<u64>,
    pub h1_bound: H1BoundCheck,
}

pub fn cohomology_report(gm: &GModuleData) -> Result<CohomologyReport> {
    let c = PeriodicComplex::new(gm);
    let h = [c.cohomology(0)?, c.cohomology(1)?, c.cohomology(2)?];
    let h1_bound = h1_bound_check(gm, &h[1]);
    let [h0, h1, h2] = h.map(|g| g.invariant_factors().to_vec());
    Ok(CohomologyReport { h0, h1, h2, h1_bound })
}
