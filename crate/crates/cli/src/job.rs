use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use iwasawa_core::algebra::{FiniteLevelRing, RingDescriptor, RingElement, RingIdeal};
use iwasawa_core::carlitz::{torsion_layer, unit_group_structure, FqContext, FqPoly, MAX_RESIDUE_SIZE};
use iwasawa_core::cohomology::{cohomology_report, GModuleData};
use iwasawa_core::control::{control_report, sigma_report, ControlInput};
use iwasawa_core::module::{fitting_ideal, maximal_minors, min_generators, preimage_ideal, pro_fitting_intersection, ModulePresentation};
use iwasawa_core::tate::{j_power_level, ker_dw_classify, local_invariants, Reduction, TateLocalData};
use iwasawa_core::Error;

/// Environment variable overriding [`DEFAULT_MAX_RING_CARDINALITY`].
pub const MAX_RING_CARD_VAR: &str = "IWASAWA_MAX_RING_CARD";
pub const DEFAULT_MAX_RING_CARDINALITY: u128 = 10_000_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("invalid job: {0}")]
    Schema(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    /// 1 I/O, 2 validation, 3 mathematical hypothesis, 4 size cap, 5 non-stabilization.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Core(e) => match e {
                Error::InvalidParameter(_)
                | Error::DimensionMismatch(_)
                | Error::RingMismatch(_)
                | Error::NonCommutingActions(..)
                | Error::InvalidAction { .. } => 2,
                Error::Reducible(_) | Error::Isotrivial | Error::NotLocal(_) | Error::HypothesisViolation(_) => 3,
                Error::SizeCap(_) => 4,
                Error::StabilizationFailure { .. } => 5,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JobCommand {
    Cohomology,
    Fitting,
    Carlitz,
    Tate,
    ControlReport,
    Intersect,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub command: JobCommand,
    pub payload: Value,
    #[serde(default)]
    pub output: OutputFormat,
}

fn from_value<T: DeserializeOwned>(v: &Value, root: &str) -> Result<T, CliError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." { root.to_string() } else { format!("{root}.{path}") };
        CliError::Schema(format!("at `{at}`: {}", e.into_inner()))
    })
}

pub fn parse_job(text: &str) -> Result<Job, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Schema(format!("not JSON: {e}")))?;
    let mut de = v;
    if let Some(obj) = de.as_object_mut() {
        // normalize a missing payload so the path points at it
        obj.entry("payload").or_insert(Value::Null);
    }
    let job: Job = from_value(&de, "job")?;
    if job.payload.is_null() {
        return Err(CliError::Schema("at `payload`: missing job payload".into()));
    }
    Ok(job)
}

pub fn max_ring_cardinality() -> Result<u128, CliError> {
    match std::env::var(MAX_RING_CARD_VAR) {
        Ok(s) => s
            .trim()
            .parse::<u128>()
            .map_err(|_| CliError::Schema(format!("{MAX_RING_CARD_VAR}={s:?} is not a nonnegative integer"))),
        Err(_) => Ok(DEFAULT_MAX_RING_CARDINALITY),
    }
}

fn check_cap(what: &str, base: u64, log: u64, cap: u128) -> Result<(), CliError> {
    let card = u32::try_from(log).ok().and_then(|e| (base as u128).checked_pow(e));
    match card {
        Some(c) if c <= cap => Ok(()),
        _ => Err(Error::SizeCap(format!("{what} has cardinality {base}^{log}, above the cap {cap} ({MAX_RING_CARD_VAR})")).into()),
    }
}

/// A report body plus warnings, which are kept out of the JSON body.
pub struct Report {
    pub body: Value,
    pub warnings: Vec<String>,
}

pub fn dispatch(job: &Job, cap: u128) -> Result<Report, CliError> {
    let p = &job.payload;
    let body = match job.command {
        JobCommand::Cohomology => cohomology(p, cap)?,
        JobCommand::Fitting => fitting(p, cap)?,
        JobCommand::Carlitz => carlitz(p, cap)?,
        JobCommand::Tate => tate(p)?,
        JobCommand::ControlReport => return control(p),
        JobCommand::Intersect => intersect(p, cap)?,
    };
    Ok(Report { body, warnings: Vec::new() })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn cohomology(payload: &Value, cap: u128) -> Result<Value, CliError> {
    let gm: GModuleData = from_value(payload, "payload")?;
    let log = gm.module().log_order(gm.l()) as u64;
    check_cap("the coefficient module", gm.l(), log, cap)?;
    check_cap("the group", gm.p(), gm.group().exponents().iter().map(|&k| k as u64).sum(), cap)?;
    Ok(to_value(&cohomology_report(&gm)?))
}

/// Ring elements as `[[coefficient, [exponents...]], ...]`.
type Terms = Vec<(i64, Vec<u64>)>;

fn element(ring: &FiniteLevelRing, terms: &Terms) -> Result<RingElement, CliError> {
    Ok(ring.from_terms(terms)?)
}

fn terms(ring: &FiniteLevelRing, x: &[u64]) -> Vec<(u64, Vec<u64>)> {
    x.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (c, ring.multi_index(i))).collect()
}

fn build_ring(desc: &RingDescriptor, cap: u128) -> Result<FiniteLevelRing, CliError> {
    let ring = FiniteLevelRing::from_descriptor(desc)?;
    check_cap("the ring", ring.coeff_ring().p(), ring.log_cardinality(), cap)?;
    Ok(ring)
}

fn ideal_report(ideal: &RingIdeal) -> Value {
    let ring = ideal.ring();
    let l = ring.coeff_ring().p();
    let log = ideal.log_cardinality();
    let card = (l as u128).checked_pow(log);
    json!({
        "span_basis": ideal.span_basis().row_vecs().iter().map(|x| terms(ring, x)).collect::<Vec<_>>(),
        "span_log_cardinality": log,
        "span_cardinality": card.map(|c| c.to_string()),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FittingPayload {
    ring: RingDescriptor,
    generators: usize,
    relations: Vec<Vec<Terms>>,
}

fn fitting(payload: &Value, cap: u128) -> Result<Value, CliError> {
    let f: FittingPayload = from_value(payload, "payload")?;
    let ring = build_ring(&f.ring, cap)?;
    let rows = f
        .relations
        .iter()
        .map(|row| row.iter().map(|t| element(&ring, t)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let pres = ModulePresentation::new(&ring, f.generators, rows)?;
    let mut minors: Vec<RingElement> = maximal_minors(&pres).into_iter().filter(|m| !ring.is_zero(m)).collect();
    minors.sort();
    minors.dedup();
    let ideal = fitting_ideal(&pres);
    let mut out = ideal_report(&ideal);
    let obj = out.as_object_mut().unwrap();
    obj.insert("generators".into(), to_value(&minors.iter().map(|m| terms(&ring, m)).collect::<Vec<_>>()));
    let mingen = match min_generators(&pres) {
        Ok(n) => Some(n),
        Err(Error::NotLocal(_)) => None,
        Err(e) => return Err(e.into()),
    };
    obj.insert("min_generators".into(), to_value(&mingen));
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CarlitzPayload {
    q: u64,
    prime: FqPoly,
    n: u32,
}

fn carlitz(payload: &Value, cap: u128) -> Result<Value, CliError> {
    let c: CarlitzPayload = from_value(payload, "payload")?;
    let ctx = FqContext::of_order(c.q)?;
    ctx.check_poly(&c.prime)?;
    let deg = c.prime.degree().unwrap_or(0) as u64;
    check_cap("A/P^n", c.q, deg * c.n as u64, cap)?;
    let mut layers = Vec::new();
    for m in 1..=c.n {
        let layer = torsion_layer(&ctx, &c.prime, m)?;
        let mut row = to_value(&layer);
        let row_obj = row.as_object_mut().unwrap();
        row_obj.insert("n".into(), json!(m));
        if layer.torsion_count <= MAX_RESIDUE_SIZE {
            let units = unit_group_structure(&ctx, &c.prime, m)?;
            row_obj.insert("unit_group".into(), to_value(&units.invariant_factors()));
        }
        layers.push(row);
    }
    let last = layers.last().cloned().unwrap_or(Value::Null);
    Ok(json!({
        "q": c.q,
        "prime": c.prime.to_string(),
        "n": c.n,
        "galois_order": last["galois_order"],
        "torsion_count": last["torsion_count"],
        "layers": layers,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JInvariant {
    q: u64,
    num: FqPoly,
    #[serde(default = "FqPoly::one")]
    den: FqPoly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TatePayload {
    places: Vec<TateLocalData>,
    #[serde(default = "one")]
    d: u32,
    #[serde(default)]
    l: Option<u64>,
    #[serde(default)]
    j: Option<JInvariant>,
}

fn one() -> u32 {
    1
}

fn tate(payload: &Value) -> Result<Value, CliError> {
    let t: TatePayload = from_value(payload, "payload")?;
    let mut rows = Vec::new();
    for (index, place) in t.places.iter().enumerate() {
        let l = t.l.unwrap_or(place.p());
        let mut row = json!({
            "index": index,
            "reduction": to_value(&place.reduction()),
            "ord_v_j": place.ord_v_j(),
            "residue_size": place.residue_size(),
            "ker_dw": ker_dw_classify(place, l, t.d).to_string(),
        });
        if place.reduction() == Reduction::SplitMultiplicative {
            let inv = local_invariants(place)?;
            let obj = row.as_object_mut().unwrap();
            obj.insert("component_order".into(), json!(inv.component_order));
            obj.insert("tate_index".into(), json!(inv.tate_index));
            obj.insert("h1_e0".into(), to_value(&inv.h1_e0.invariant_factors()));
        }
        rows.push(row);
    }
    let mut out = json!({ "places": rows });
    if let Some(j) = &t.j {
        let ctx = FqContext::of_order(j.q)?;
        let level = j_power_level(&ctx, &j.num, &j.den)?;
        out.as_object_mut().unwrap().insert("j_power_level".into(), to_value(&level));
    }
    Ok(out)
}

fn control(payload: &Value) -> Result<Report, CliError> {
    let input: ControlInput = from_value(payload, "payload")?;
    let report = if input.sigma.is_some() { sigma_report(&input)? } else { control_report(&input)? };
    Ok(Report { body: to_value(&report), warnings: report.warnings })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealSpec {
    ring: RingDescriptor,
    generators: Vec<Terms>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntersectPayload {
    ideals: Vec<IdealSpec>,
    /// Ring to pull every ideal back to before intersecting; defaults to the first ring.
    #[serde(default)]
    target: Option<RingDescriptor>,
}

fn intersect(payload: &Value, cap: u128) -> Result<Value, CliError> {
    let p: IntersectPayload = from_value(payload, "payload")?;
    let first = p.ideals.first().ok_or_else(|| CliError::Schema("at `payload.ideals`: empty list".into()))?;
    let target = build_ring(p.target.as_ref().unwrap_or(&first.ring), cap)?;
    let mut pulled = Vec::new();
    for spec in &p.ideals {
        let ring = build_ring(&spec.ring, cap)?;
        let gens = spec.generators.iter().map(|t| element(&ring, t)).collect::<Result<Vec<_>, _>>()?;
        let ideal = RingIdeal::span(&ring, gens)?;
        pulled.push(if ring == target { ideal } else { preimage_ideal(&ideal, &target)? });
    }
    Ok(ideal_report(&pro_fitting_intersection(&pulled)?))
}
