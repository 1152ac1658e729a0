use serde::{Deserialize, Serialize};

use super::presentation::{elementary_presentation, ElementaryModuleSpec, ModulePresentation};
use crate::algebra::{FiniteLevelRing, RingElement, RingIdeal, RingKind};
use crate::error::{invalid, Error, Result};
use crate::linalg::{PrimePowerMatrix, PrimePowerRing};

/// Determinant by cofactor expansion along the first row.
pub fn determinant(ring: &FiniteLevelRing, m: &[Vec<RingElement>]) -> RingElement {
    let n = m.len();
    match n {
        0 => ring.one(),
        1 => m[0][0].clone(),
        2 => ring.sub(&ring.mul(&m[0][0], &m[1][1]), &ring.mul(&m[0][1], &m[1][0])),
        _ => {
            let mut acc = ring.zero();
            for j in 0..n {
                if ring.is_zero(&m[0][j]) {
                    continue;
                }
                let minor: Vec<Vec<RingElement>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = ring.mul(&m[0][j], &determinant(ring, &minor));
                acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
            }
            acc
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All maximal (`b x b`) minors of the relation matrix; empty when `a < b`.
pub fn maximal_minors(pres: &ModulePresentation) -> Vec<RingElement> {
    let (a, b) = (pres.relations(), pres.generators());
    if a < b {
        return Vec::new();
    }
    combinations(a, b)
        .into_iter()
        .map(|rows| {
            let sub: Vec<Vec<RingElement>> = rows.iter().map(|&i| pres.row(i).to_vec()).collect();
            determinant(pres.ring(), &sub)
        })
        .collect()
}

/// Zero ideal when there are fewer relations than generators, otherwise the
/// ideal generated by the `b x b` minors.
pub fn fitting_ideal(pres: &ModulePresentation) -> RingIdeal {
    let ring = pres.ring();
    if pres.relations() < pres.generators() {
        return RingIdeal::zero(ring);
    }
    RingIdeal::span(ring, maximal_minors(pres)).expect("minors are ring elements")
}

/// `(0)` for non-torsion modules, `(prod g_i^{e_i})` otherwise.
pub fn characteristic_ideal(ring: &FiniteLevelRing, spec: &ElementaryModuleSpec) -> Result<RingIdeal> {
    spec.validate(ring)?;
    if !spec.is_torsion() {
        return Ok(RingIdeal::zero(ring));
    }
    let mut prod = ring.one();
    for (g, e) in &spec.torsion_factors {
        prod = ring.mul(&prod, &ring.pow(g, *e as u64));
    }
    RingIdeal::span(ring, vec![prod])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FittCharOutcome {
    Equal,
    FittInsideChar,
    Other,
}

/// Either an elementary module, or a presentation with a claimed elementary
/// decomposition supplying its characteristic ideal.
#[derive(Clone, Debug)]
pub enum FittCharInput {
    Elementary(ElementaryModuleSpec),
    Presented { presentation: ModulePresentation, claimed: ElementaryModuleSpec },
}

#[derive(Clone, Debug)]
pub struct FittCharComparison {
    pub fitting: RingIdeal,
    pub characteristic: RingIdeal,
    pub outcome: FittCharOutcome,
}

pub fn fitt_char_compare(ring: &FiniteLevelRing, input: &FittCharInput) -> Result<FittCharComparison> {
    let (fitting, characteristic) = match input {
        FittCharInput::Elementary(spec) => {
            let pres = elementary_presentation(ring, spec)?;
            (fitting_ideal(&pres), characteristic_ideal(ring, spec)?)
        }
        FittCharInput::Presented { presentation, claimed } => {
            if presentation.ring() != ring {
                return Err(Error::RingMismatch("presentation over a different ring".into()));
            }
            (fitting_ideal(presentation), characteristic_ideal(ring, claimed)?)
        }
    };
    let outcome = if fitting == characteristic {
        FittCharOutcome::Equal
    } else if characteristic.contains_ideal(&fitting) {
        FittCharOutcome::FittInsideChar
    } else {
        FittCharOutcome::Other
    };
    Ok(FittCharComparison { fitting, characteristic, outcome })
}

/// `dim_{F_l} M / mM` for the maximal ideal `m = (l, T_i)` or `(l, γ_i - 1)`:
/// the minimal number of generators of the presented module.
pub fn min_generators(pres: &ModulePresentation) -> Result<usize> {
    let ring = pres.ring();
    if !ring.is_local() {
        return Err(Error::NotLocal("group ring with coefficient prime different from the group prime".into()));
    }
    let field = PrimePowerRing::new(ring.coeff_ring().p(), 1)?;
    let mut rows = Vec::with_capacity(pres.relations());
    for i in 0..pres.relations() {
        rows.push(pres.row(i).iter().map(|x| ring.residue(x).expect("ring is local")).collect());
    }
    let m = PrimePowerMatrix::from_row_vecs(field, pres.generators(), rows);
    Ok(pres.generators() - m.howell_form().rows())
}

/// Outcome of checking a caller-supplied pseudo-nullity witness `(f, g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoNullWitness {
    pub annihilates: bool,
    pub coprime_supports: bool,
}

impl PseudoNullWitness {
    pub fn accepted(&self) -> bool {
        self.annihilates && self.coprime_supports
    }
}

/// The monomial content of `x` in a truncated ring: `(v_p(content), min exponent of each T_i)`.
fn leading_support(ring: &FiniteLevelRing, x: &[u64]) -> Vec<u32> {
    let coeff = ring.coeff_ring();
    let mut support = vec![u32::MAX; ring.vars() + 1];
    for (i, &c) in x.iter().enumerate() {
        if c == 0 {
            continue;
        }
        support[0] = support[0].min(coeff.valuation(c));
        for (v, e) in ring.multi_index(i).into_iter().enumerate() {
            support[v + 1] = support[v + 1].min(e as u32);
        }
    }
    support
}

/// Checks that `f` and `g` annihilate the module and that they share no common
/// monomial factor (`p` or some `T_i`) dividing every term of both.
pub fn check_pseudo_null_witness(
    pres: &ModulePresentation,
    f: &[u64],
    g: &[u64],
) -> Result<PseudoNullWitness> {
    let ring = pres.ring();
    if !matches!(ring.kind(), RingKind::TruncatedPoly { .. }) {
        return Err(invalid("pseudo-null witnesses are checked in truncated rings"));
    }
    ring.check_element(f)?;
    ring.check_element(g)?;
    let (f, g) = (ring.reduce(f), ring.reduce(g));
    if ring.is_zero(&f) || ring.is_zero(&g) {
        return Ok(PseudoNullWitness { annihilates: false, coprime_supports: false });
    }
    let annihilates = pres.annihilated_by(&f) && pres.annihilated_by(&g);
    let (sf, sg) = (leading_support(ring, &f), leading_support(ring, &g));
    let coprime_supports = sf.iter().zip(&sg).all(|(&a, &b)| a.min(b) == 0);
    Ok(PseudoNullWitness { annihilates, coprime_supports })
}
