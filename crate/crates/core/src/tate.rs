//! Local data at places of an elliptic curve over a function field, as far as
//! the control bounds consume it: Tate-curve component groups, ramification,
//! and the p-power level of the j-invariant.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::carlitz::{FqContext, FqPoly};
use crate::error::{invalid, Error, Result};
use crate::linalg::{factorize, AbelianGroupStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    Good,
    SplitMultiplicative,
}

/// Behaviour of the place in the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PlaceBehavior {
    SplitsCompletely,
    UnramifiedInert,
    /// `d_v`: rank of the decomposition group; `e`: ramification index.
    Ramified { d_v: u32, e: u64 },
}

impl PlaceBehavior {
    pub fn is_ramified(&self) -> bool {
        matches!(self, PlaceBehavior::Ramified { .. })
    }

    pub fn ramification_index(&self) -> u64 {
        match *self {
            PlaceBehavior::Ramified { e, .. } => e,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TateLocalSpec")]
pub struct TateLocalData {
    ord_v_j: i64,
    residue_size: u64,
    reduction: Reduction,
    place_behavior: PlaceBehavior,
    #[serde(skip)]
    p: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TateLocalSpec {
    ord_v_j: i64,
    residue_size: u64,
    reduction: Reduction,
    place_behavior: PlaceBehavior,
}

impl TryFrom<TateLocalSpec> for TateLocalData {
    type Error = Error;

    fn try_from(s: TateLocalSpec) -> Result<Self> {
        TateLocalData::new(s.ord_v_j, s.residue_size, s.reduction, s.place_behavior)
    }
}

fn is_power_of(n: u64, p: u64) -> bool {
    n >= 1 && factorize(n).iter().all(|&(r, _)| r == p)
}

impl TateLocalData {
    pub fn new(ord_v_j: i64, residue_size: u64, reduction: Reduction, place_behavior: PlaceBehavior) -> Result<Self> {
        let fac = factorize(residue_size);
        let [(p, _)] = fac.as_slice() else {
            return Err(invalid(format!("residue_size {residue_size} is not a prime power")));
        };
        let p = *p;
        match (reduction, ord_v_j < 0) {
            (Reduction::SplitMultiplicative, false) => {
                return Err(invalid(format!("split multiplicative reduction needs ord_v_j < 0, got {ord_v_j}")))
            }
            (Reduction::Good, true) => {
                return Err(invalid(format!("good reduction needs ord_v_j >= 0, got {ord_v_j}")))
            }
            _ => {}
        }
        if let PlaceBehavior::Ramified { e, .. } = place_behavior {
            if e < 2 || !is_power_of(e, p) {
                return Err(invalid(format!("ramification index {e} is not a nontrivial power of {p}")));
            }
        }
        Ok(TateLocalData { ord_v_j, residue_size, reduction, place_behavior, p })
    }

    pub fn split_multiplicative(ord_v_j: i64, residue_size: u64, place_behavior: PlaceBehavior) -> Result<Self> {
        Self::new(ord_v_j, residue_size, Reduction::SplitMultiplicative, place_behavior)
    }

    pub fn good(residue_size: u64, place_behavior: PlaceBehavior) -> Result<Self> {
        Self::new(0, residue_size, Reduction::Good, place_behavior)
    }

    pub fn ord_v_j(&self) -> i64 {
        self.ord_v_j
    }

    pub fn residue_size(&self) -> u64 {
        self.residue_size
    }

    pub fn reduction(&self) -> Reduction {
        self.reduction
    }

    pub fn place_behavior(&self) -> PlaceBehavior {
        self.place_behavior
    }

    /// Characteristic of the residue field.
    pub fn p(&self) -> u64 {
        self.p
    }

    fn require_split(&self) -> Result<u64> {
        match self.reduction {
            Reduction::SplitMultiplicative => Ok(self.ord_v_j.unsigned_abs()),
            Reduction::Good => Err(Error::HypothesisViolation(
                "component group and Tate period need split multiplicative reduction".into(),
            )),
        }
    }

    /// The same curve over a totally ramified extension of index `e`:
    /// `ord_w(j) = e ord_v(j)`, residue field unchanged.
    pub fn in_extension(&self, e: u64) -> Result<Self> {
        if !is_power_of(e, self.p) {
            return Err(invalid(format!("ramification index {e} is not a power of {}", self.p)));
        }
        let ord = i64::try_from(e).ok().and_then(|e| self.ord_v_j.checked_mul(e)).ok_or_else(|| {
            Error::SizeCap(format!("ord_v_j * {e} overflows"))
        })?;
        Ok(TateLocalData { ord_v_j: ord, ..self.clone() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalInvariants {
    pub component_order: u64,
    pub tate_index: u64,
    pub h1_e0: AbelianGroupStructure,
}

/// `|T_v| = -ord_v(j)`, `[F_v^* : q_E^Z O_v^*] = -ord_v(j) (q_v - 1)` and
/// `H^1(G, E_0) = Z/e`.
pub fn local_invariants(t: &TateLocalData) -> Result<LocalInvariants> {
    let component_order = t.require_split()?;
    let tate_index = component_order
        .checked_mul(t.residue_size - 1)
        .ok_or_else(|| Error::SizeCap("tate_index overflows u64".into()))?;
    Ok(LocalInvariants {
        component_order,
        tate_index,
        h1_e0: AbelianGroupStructure::cyclic(t.place_behavior.ramification_index()),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerComponent {
    pub order: u64,
    /// `T_{v_m}^Γ / T_{v_n} ≅ Z/e`.
    pub quotient: AbelianGroupStructure,
}

/// `|T_{v_m}| = |T_{v_n}| e` for a step of ramification index `e`.
pub fn tower_component_order(t: &TateLocalData, e: u64) -> Result<TowerComponent> {
    t.require_split()?;
    let up = t.in_extension(e)?;
    let order = local_invariants(&up)?.component_order;
    Ok(TowerComponent { order, quotient: AbelianGroupStructure::cyclic(e) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum KernelClass {
    Zero,
    FiniteBounded { bound: u64 },
    CorankAtMost { corank: u32 },
}

impl fmt::Display for KernelClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelClass::Zero => write!(f, "Zero"),
            KernelClass::FiniteBounded { bound } => write!(f, "FiniteBounded({bound})"),
            KernelClass::CorankAtMost { corank } => write!(f, "CorankAtMost({corank})"),
        }
    }
}

fn p_part(n: u64, p: u64) -> u64 {
    let mut out = 1;
    let mut n = n;
    while n % p == 0 {
        n /= p;
        out *= p;
    }
    out
}

/// Kernel of the local restriction map at a place above `v` in a tower of rank `d`.
pub fn ker_dw_classify(t: &TateLocalData, l: u64, d: u32) -> KernelClass {
    if l != t.p || t.reduction == Reduction::Good {
        return KernelClass::Zero;
    }
    match t.place_behavior {
        PlaceBehavior::SplitsCompletely => KernelClass::Zero,
        PlaceBehavior::UnramifiedInert => KernelClass::FiniteBounded { bound: p_part(t.ord_v_j.unsigned_abs(), t.p) },
        PlaceBehavior::Ramified { d_v, .. } => KernelClass::CorankAtMost { corank: d_v.min(d) },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JPowerLevel {
    pub level: u32,
    pub torsion_bound: String,
}

/// Largest `n` with `f` a `p^n`-th power, for nonconstant `f`.
fn power_level(ctx: &FqContext, f: &FqPoly) -> u32 {
    let mut n = 0;
    let mut g = f.clone();
    while let Some(r) = ctx.poly_pth_root(&g) {
        g = r;
        n += 1;
    }
    n
}

/// The `n` with `j ∈ (F^*)^{p^n} - (F^*)^{p^{n+1}}` for `j = num / den`, so
/// that `E[p^∞](F^sep) ⊆ E[p^n]`.
pub fn j_power_level(ctx: &FqContext, num: &FqPoly, den: &FqPoly) -> Result<JPowerLevel> {
    ctx.check_poly(num)?;
    ctx.check_poly(den)?;
    if den.is_zero() {
        return Err(invalid("denominator of j is zero"));
    }
    if num.is_zero() {
        return Err(Error::Isotrivial);
    }
    let g = ctx.poly_gcd(num, den);
    let (num, _) = ctx.poly_divrem(num, &g);
    let (den, _) = ctx.poly_divrem(den, &g);
    let level = [&num, &den].into_iter().filter(|f| !f.is_constant()).map(|f| power_level(ctx, f)).min();
    let level = level.ok_or(Error::Isotrivial)?;
    Ok(JPowerLevel { level, torsion_bound: format!("E[p^inf] ⊆ E[p^{level}]") })
}
