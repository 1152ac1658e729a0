use super::fitting::fitting_ideal;
use super::presentation::ModulePresentation;
use crate::algebra::{FiniteLevelRing, RingElement, RingIdeal, RingKind};
use crate::error::{invalid, Error, Result};

fn trunc_params(ring: &FiniteLevelRing) -> Result<(usize, u32)> {
    match *ring.kind() {
        RingKind::TruncatedPoly { vars, cap } => Ok((vars, cap)),
        RingKind::GroupRing(_) => Err(Error::RingMismatch("projection needs truncated polynomial rings".into())),
    }
}

/// `Λ_d` sitting under `ring = Λ_e` (same coefficients and truncation).
pub fn projected_ring(ring: &FiniteLevelRing, keep: usize) -> Result<FiniteLevelRing> {
    let (vars, cap) = trunc_params(ring)?;
    if keep >= vars {
        return Err(invalid(format!("must drop at least one of {vars} variables, keeping {keep}")));
    }
    FiniteLevelRing::truncated_poly(ring.coeff_ring(), keep, cap)
}

fn check_tower(lower: &FiniteLevelRing, upper: &FiniteLevelRing) -> Result<()> {
    let (d, m_lo) = trunc_params(lower)?;
    let (e, m_hi) = trunc_params(upper)?;
    if lower.coeff_ring() != upper.coeff_ring() || m_lo != m_hi {
        return Err(Error::RingMismatch("rings differ in coefficients or truncation".into()));
    }
    if d >= e {
        return Err(invalid(format!("target has {e} variables, source {d}; need more")));
    }
    Ok(())
}

/// `π^e_d`: sends `T_{d+1}, ..., T_e` to zero.
pub fn project_element(from: &FiniteLevelRing, to: &FiniteLevelRing, x: &[u64]) -> Result<RingElement> {
    check_tower(to, from)?;
    from.check_element(x)?;
    let d = to.vars();
    let mut out = to.zero();
    for (i, &c) in x.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let exps = from.multi_index(i);
        if exps[d..].iter().all(|&e| e == 0) {
            let j = to.index_of(&exps[..d]).expect("same truncation");
            out[j] = c;
        }
    }
    Ok(out)
}

/// The section `Λ_d -> Λ_e` taking `T_i` to `T_i`.
pub fn lift_element(from: &FiniteLevelRing, to: &FiniteLevelRing, x: &[u64]) -> Result<RingElement> {
    check_tower(from, to)?;
    from.check_element(x)?;
    let extra = to.vars() - from.vars();
    let mut out = to.zero();
    for (i, &c) in x.iter().enumerate() {
        if c != 0 {
            let mut exps = from.multi_index(i);
            exps.extend(std::iter::repeat(0).take(extra));
            out[to.index_of(&exps).expect("same truncation")] = c;
        }
    }
    Ok(out)
}

/// Image of an ideal of `Λ_e` in `Λ_keep`.
pub fn project_ideal(ideal: &RingIdeal, keep: usize) -> Result<RingIdeal> {
    let from = ideal.ring();
    let to = projected_ring(from, keep)?;
    let gens = ideal
        .span_basis()
        .row_vecs()
        .iter()
        .map(|x| project_element(from, &to, x))
        .collect::<Result<Vec<_>>>()?;
    RingIdeal::span(&to, gens)
}

/// `π^{-1}(J) = (lifted generators of J) + (T_{d+1}, ..., T_e)`.
pub fn preimage_ideal(ideal: &RingIdeal, target: &FiniteLevelRing) -> Result<RingIdeal> {
    let from = ideal.ring();
    check_tower(from, target)?;
    let mut gens = ideal
        .span_basis()
        .row_vecs()
        .iter()
        .map(|x| lift_element(from, target, x))
        .collect::<Result<Vec<_>>>()?;
    for v in from.vars()..target.vars() {
        gens.push(target.variable(v));
    }
    RingIdeal::span(target, gens)
}

/// Intersection of ideals sharing an ambient ring.
pub fn pro_fitting_intersection(ideals: &[RingIdeal]) -> Result<RingIdeal> {
    let (first, rest) = ideals.split_first().ok_or_else(|| invalid("no ideals to intersect"))?;
    let mut acc = first.clone();
    for ideal in rest {
        if ideal.ring() != acc.ring() {
            return Err(Error::RingMismatch("ideals live in different ambient rings".into()));
        }
        acc = acc.intersection(ideal)?;
    }
    Ok(acc)
}

/// The presentation over `Λ_keep` obtained by projecting every entry.
pub fn project_presentation(pres: &ModulePresentation, keep: usize) -> Result<ModulePresentation> {
    let from = pres.ring();
    let to = projected_ring(from, keep)?;
    let mut rows = Vec::with_capacity(pres.relations());
    for i in 0..pres.relations() {
        let row = pres.row(i).iter().map(|x| project_element(from, &to, x)).collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    ModulePresentation::new(&to, pres.generators(), rows)
}

/// Comparison of `π^e_d(Fitt(S_e))` with `Fitt(S_d)` for a module `S_d` over `Λ_d`.
#[derive(Clone, Debug)]
pub struct TowerFittingComparison {
    pub projected: RingIdeal,
    pub lower: RingIdeal,
    pub contained: bool,
    pub equal: bool,
    /// Caller's assertion that the torsion-vanishing or principality hypothesis holds.
    pub hypothesis_flag: bool,
}

impl TowerFittingComparison {
    /// The inclusion is only claimed when the hypothesis flag is set.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_flag || self.contained
    }
}

pub fn tower_fitting_comparison(
    upper: &ModulePresentation,
    lower: &ModulePresentation,
    hypothesis_flag: bool,
) -> Result<TowerFittingComparison> {
    let keep = lower.ring().vars();
    let projected = project_ideal(&fitting_ideal(upper), keep)?;
    if projected.ring() != lower.ring() {
        return Err(Error::RingMismatch("lower presentation is not over the projected ring".into()));
    }
    let lower_fitt = fitting_ideal(lower);
    let contained = lower_fitt.contains_ideal(&projected);
    let equal = projected == lower_fitt;
    Ok(TowerFittingComparison { projected, lower: lower_fitt, contained, equal, hypothesis_flag })
}
