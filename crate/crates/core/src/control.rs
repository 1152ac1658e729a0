//! Quantitative control bounds for Selmer groups up a `Z_p^d`-tower.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::is_prime;
use crate::tate::{ker_dw_classify, KernelClass, PlaceBehavior, Reduction, TateLocalData};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlInput {
    pub p: u64,
    /// Rank of the tower.
    pub d: u32,
    /// `|E[p^∞](F_d)|`.
    pub torsion_order: u64,
    pub places: Vec<TateLocalData>,
    /// Indices into `places` of the excised set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
    /// `Sel_E(F)_p` is known to be cofinitely generated.
    #[serde(default)]
    pub selmer_cofinitely_generated: bool,
    /// The base Σ-Selmer group is known to be finite.
    #[serde(default)]
    pub base_sigma_selmer_finite: bool,
    /// Level `n` with `E[p^∞] ⊆ E[p^n]`, for a consistency check on `torsion_order`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j_level: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    FinitelyGenerated,
    FiniteKernelsCokernels,
    Unbounded,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::FinitelyGenerated => "FinitelyGenerated",
            Verdict::FiniteKernelsCokernels => "FiniteKernelsCokernels",
            Verdict::Unbounded => "Unbounded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceReport {
    pub index: usize,
    pub classification: KernelClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ControlReport {
    pub ker_a_bound: u64,
    pub ker_b_bound: u64,
    pub coker_b_bound: u64,
    pub places: Vec<PlaceReport>,
    pub total_corank_bound: u64,
    pub verdict: Verdict,
    /// Set by [`sigma_report`] when the base Σ-Selmer group is flagged finite.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dual_torsion: Option<bool>,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

fn checked_power(t: u64, e: u64) -> Result<u64> {
    u32::try_from(e)
        .ok()
        .and_then(|e| t.checked_pow(e))
        .ok_or_else(|| Error::SizeCap(format!("{t}^{e} overflows u64")))
}

fn validate(input: &ControlInput) -> Result<()> {
    let p = input.p;
    if !is_prime(p) {
        return Err(invalid(format!("p = {p} is not prime")));
    }
    if input.d == 0 {
        return Err(invalid("tower rank d must be >= 1"));
    }
    let mut t = input.torsion_order;
    if t == 0 {
        return Err(invalid("torsion_order must be >= 1"));
    }
    while t % p == 0 {
        t /= p;
    }
    if t != 1 {
        return Err(invalid(format!("torsion_order {} is not a power of {p}", input.torsion_order)));
    }
    for (i, place) in input.places.iter().enumerate() {
        if place.p() != p {
            return Err(invalid(format!("places[{i}]: residue characteristic {} differs from p = {p}", place.p())));
        }
        if let PlaceBehavior::Ramified { d_v, .. } = place.place_behavior() {
            if d_v > input.d {
                return Err(invalid(format!("places[{i}]: d_v = {d_v} exceeds d = {}", input.d)));
            }
            if place.reduction() == Reduction::Good {
                return Err(Error::HypothesisViolation(format!(
                    "places[{i}] is ramified in the tower but has good reduction"
                )));
            }
        }
    }
    if let Some(sigma) = &input.sigma {
        let mut seen = vec![false; input.places.len()];
        for &i in sigma {
            match seen.get_mut(i) {
                None => return Err(invalid(format!("sigma index {i} out of range"))),
                Some(true) => return Err(invalid(format!("sigma index {i} repeated"))),
                Some(s) => *s = true,
            }
        }
    }
    Ok(())
}

fn warnings(input: &ControlInput) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(n) = input.j_level {
        let cap = (2 * n as u64).try_into().ok().and_then(|e| input.p.checked_pow(e));
        if cap.is_some_and(|cap| input.torsion_order > cap) {
            out.push(format!("torsion_order {} exceeds p^(2n) = {}^{}", input.torsion_order, input.p, 2 * n));
        }
    }
    if input.d >= 2 {
        for (i, place) in input.places.iter().enumerate() {
            if place.reduction() == Reduction::SplitMultiplicative
                && place.place_behavior() == PlaceBehavior::UnramifiedInert
            {
                out.push(format!("places[{i}]: inert bad place, the number of places above it is unbounded"));
            }
        }
    }
    out
}

fn bounds(input: &ControlInput) -> Result<(u64, u64)> {
    let d = input.d as u64;
    Ok((checked_power(input.torsion_order, d)?, checked_power(input.torsion_order, d * (d - 1) / 2)?))
}

/// Bounds `t^d` on `Ker a_n` and `Ker b_n`, `t^{d(d-1)/2}` on `Coker b_n`, and the
/// corank budget `Σ d_v` over ramified bad places.
pub fn control_report(input: &ControlInput) -> Result<ControlReport> {
    validate(input)?;
    let (ker, coker) = bounds(input)?;
    let places: Vec<PlaceReport> = input
        .places
        .iter()
        .enumerate()
        .map(|(index, t)| PlaceReport { index, classification: ker_dw_classify(t, input.p, input.d) })
        .collect();
    let total_corank_bound = places
        .iter()
        .map(|r| match r.classification {
            KernelClass::CorankAtMost { corank } => corank as u64,
            _ => 0,
        })
        .sum();
    let any_corank = places.iter().any(|r| matches!(r.classification, KernelClass::CorankAtMost { .. }));
    let verdict = if input.selmer_cofinitely_generated {
        Verdict::FinitelyGenerated
    } else if any_corank {
        Verdict::Unbounded
    } else {
        Verdict::FiniteKernelsCokernels
    };
    Ok(ControlReport {
        ker_a_bound: ker,
        ker_b_bound: ker,
        coker_b_bound: coker,
        places,
        total_corank_bound,
        verdict,
        dual_torsion: None,
        warnings: warnings(input),
    })
}

/// The Σ-Selmer variant: places in `sigma` are excised. Falls back to
/// [`control_report`] when `sigma` misses a ramified place.
pub fn sigma_report(input: &ControlInput) -> Result<ControlReport> {
    validate(input)?;
    let sigma = input.sigma.clone().unwrap_or_default();
    let missing: Vec<usize> = input
        .places
        .iter()
        .enumerate()
        .filter(|(i, t)| t.place_behavior().is_ramified() && !sigma.contains(i))
        .map(|(i, _)| i)
        .collect();
    if !missing.is_empty() {
        let mut report = control_report(input)?;
        report.warnings.push(format!("sigma misses ramified places {missing:?}; ordinary report returned"));
        return Ok(report);
    }
    let (ker, coker) = bounds(input)?;
    let places = input
        .places
        .iter()
        .enumerate()
        .filter(|(i, _)| !sigma.contains(i))
        .map(|(index, t)| PlaceReport { index, classification: ker_dw_classify(t, input.p, input.d) })
        .collect();
    Ok(ControlReport {
        ker_a_bound: ker,
        ker_b_bound: ker,
        coker_b_bound: coker,
        places,
        total_corank_bound: 0,
        verdict: Verdict::FiniteKernelsCokernels,
        dual_torsion: input.base_sigma_selmer_finite.then_some(true),
        warnings: warnings(input),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(p: u64, d: u32, t: u64, places: Vec<TateLocalData>) -> ControlInput {
        ControlInput {
            p,
            d,
            torsion_order: t,
            places,
            sigma: None,
            selmer_cofinitely_generated: false,
            base_sigma_selmer_finite: false,
            j_level: None,
        }
    }

    fn ramified(d_v: u32, e: u64, q: u64) -> TateLocalData {
        TateLocalData::split_multiplicative(-1, q, PlaceBehavior::Ramified { d_v, e }).unwrap()
    }

    #[test]
    fn rank_one_ramified() {
        let inp = input(3, 1, 3, vec![ramified(1, 3, 3)]);
        let r = control_report(&inp).unwrap();
        assert_eq!((r.ker_a_bound, r.ker_b_bound, r.coker_b_bound, r.total_corank_bound), (3, 3, 1, 1));
        assert_eq!(r.places[0].classification, KernelClass::CorankAtMost { corank: 1 });
        assert_eq!(r.verdict, Verdict::Unbounded);
        let mut inp = inp;
        inp.sigma = Some(vec![0]);
        let s = sigma_report(&inp).unwrap();
        assert_eq!(s.verdict, Verdict::FiniteKernelsCokernels);
        assert!(s.places.is_empty());
        assert_eq!(s.dual_torsion, None);
        inp.base_sigma_selmer_finite = true;
        assert_eq!(sigma_report(&inp).unwrap().dual_torsion, Some(true));
        inp.sigma = Some(vec![]);
        assert_eq!(sigma_report(&inp).unwrap().verdict, Verdict::Unbounded);
    }

    #[test]
    fn trivial_torsion() {
        let r = control_report(&input(2, 3, 1, vec![])).unwrap();
        assert_eq!((r.ker_a_bound, r.coker_b_bound, r.total_corank_bound), (1, 1, 0));
        assert_eq!(r.verdict, Verdict::FiniteKernelsCokernels);
    }

    #[test]
    fn rank_two_mixed() {
        let inert = TateLocalData::split_multiplicative(-10, 4, PlaceBehavior::UnramifiedInert).unwrap();
        let r = control_report(&input(2, 2, 4, vec![inert, ramified(2, 2, 4)])).unwrap();
        assert_eq!((r.ker_a_bound, r.coker_b_bound, r.total_corank_bound), (16, 4, 2));
        let classes: Vec<KernelClass> = r.places.iter().map(|p| p.classification).collect();
        assert_eq!(classes, [KernelClass::FiniteBounded { bound: 2 }, KernelClass::CorankAtMost { corank: 2 }]);
        assert_eq!(r.warnings.len(), 1);
        let keys: Vec<String> = match serde_json::to_value(&r).unwrap() {
            serde_json::Value::Object(m) => m.keys().cloned().collect(),
            _ => unreachable!(),
        };
        assert_eq!(keys, ["coker_b_bound", "ker_a_bound", "ker_b_bound", "places", "total_corank_bound", "verdict"]);
    }

    #[test]
    fn sigma_empty_coincides() {
        let places = vec![
            TateLocalData::split_multiplicative(-3, 3, PlaceBehavior::UnramifiedInert).unwrap(),
            TateLocalData::good(9, PlaceBehavior::SplitsCompletely).unwrap(),
        ];
        let mut inp = input(3, 1, 9, places);
        inp.sigma = Some(vec![]);
        assert_eq!(sigma_report(&inp).unwrap(), control_report(&inp).unwrap());
    }

    #[test]
    fn rejections() {
        let good_ramified = TateLocalData::good(4, PlaceBehavior::Ramified { d_v: 1, e: 2 }).unwrap();
        assert!(matches!(control_report(&input(2, 1, 2, vec![good_ramified])), Err(Error::HypothesisViolation(_))));
        assert!(control_report(&input(2, 1, 6, vec![])).is_err());
        assert!(control_report(&input(2, 1, 2, vec![ramified(2, 2, 2)])).is_err());
        assert!(control_report(&input(3, 1, 3, vec![ramified(1, 2, 2)])).is_err());
        let mut inp = input(2, 1, 2, vec![]);
        inp.sigma = Some(vec![0]);
        assert!(sigma_report(&inp).is_err());
        let mut inp = input(2, 1, 16, vec![]);
        inp.j_level = Some(1);
        assert_eq!(control_report(&inp).unwrap().warnings.len(), 1);
    }

    #[test]
    fn bounds_monotone_in_d() {
        for t in [1u64, 2, 4, 8] {
            let mut last = (0, 0);
            for d in 1..=5 {
                let r = control_report(&input(2, d, t, vec![])).unwrap();
                assert!(r.ker_a_bound >= last.0 && r.coker_b_bound >= last.1);
                assert_eq!(r.ker_a_bound, t.pow(d));
                assert_eq!(r.coker_b_bound, t.pow(d * (d - 1) / 2));
                last = (r.ker_a_bound, r.coker_b_bound);
            }
        }
    }
}
