//! arborkit: JSON command-line surface over the arborkit library.
//!
//! One command per invocation; reports are key-sorted JSON on standard
//! output, errors are structured JSON on standard error. Exit codes:
//! 0 success, 2 invalid input, 3 computation limit exceeded, 1 internal.

mod expr;
mod report;

use arborkit::disjoint::{self, DisjointError, DisjointnessVerdict, MapPointSystem, Orientation};
use arborkit::dynamics::{
    BaseField, DynError, OrbitProof, OrbitStatus, OrbitVerdict, UnicriticalMap,
};
use arborkit::factor::FactorError;
use arborkit::galois::{
    self, GaloisError, IndexBound, LayerOutcome, LayerRankProfile, RankProvenance,
    StabilityVerdict,
};
use arborkit::heights::{self, HeightError};
use arborkit::rational::Rational;
use arborkit::specialize::{self, SpecializeError};
use arborkit::wreath::{self, WreathError};
use arborkit::RatFunc;
use clap::{Args, Parser, Subcommand};
use expr::ExprError;
use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(name = "arborkit", version, about = "Exact arithmetic for unicritical polynomials over Q and Q(t)")]
struct Cli {
    /// JSON configuration file mirroring the flags; flags win on conflict.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Include wall-clock timings in the report (breaks byte-identical
    /// output across runs).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full dichotomy report: periodicity, postcriticality, stability,
    /// layer ranks, and index bound.
    Analyze(MapArgs),
    /// Eventual-stability verdict from factor counts of f^n(x) - beta.
    Stability(StabilityArgs),
    /// Per-level Kummer layer certificates, rank profile, and index bound.
    Layers(MapArgs),
    /// Weil and canonical heights of a point.
    Height(HeightArgs),
    /// Orbit of a point with periodicity status.
    Orbit(OrbitArgs),
    /// Periodic-curve disjointness check over a system of (map, point) pairs.
    Disjoint(DisjointArgs),
    /// Specialization t -> a: single instance, convergence table,
    /// height-window filter, or orbit-hit search.
    Specialize(SpecializeArgs),
    /// Iterated wreath product orders and subgroup indices.
    Wreath(WreathArgs),
}

#[derive(Args)]
struct MapArgs {
    /// Prime power degree of x^q + c.
    #[arg(long)]
    q: Option<u32>,
    /// Expression for c in t.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Expression for the basepoint beta.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Tree depth N.
    #[arg(long)]
    depth: Option<u32>,
}

#[derive(Args)]
struct StabilityArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Base field: "Q(t)" (default) or "Q".
    #[arg(long)]
    base: Option<String>,
    /// Compute factor counts even for a periodic basepoint.
    #[arg(long)]
    allow_periodic: bool,
}

#[derive(Args)]
struct HeightArgs {
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    /// Point whose heights are computed.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long)]
    base: Option<String>,
    /// Accuracy for the numeric height over Q.
    #[arg(long)]
    eps: Option<f64>,
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Number of iterations.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    base: Option<String>,
}

#[derive(Args)]
struct DisjointArgs {
    #[arg(long)]
    q: Option<u32>,
    /// "c_expr;alpha_expr" pair; repeat for each system entry.
    #[arg(long, allow_hyphen_values = true)]
    entry: Vec<String>,
}

#[derive(Args)]
struct SpecializeArgs {
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Specialization point a (single-instance mode).
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    /// Comma-separated specialization points (convergence mode).
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// Target beta2(t) for the orbit-hit search over Q.
    #[arg(long, allow_hyphen_values = true)]
    beta2: Option<String>,
    /// Iteration bound for the orbit-hit search.
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated heights to filter (window-filter mode).
    #[arg(long, allow_hyphen_values = true)]
    filter: Option<String>,
    /// Window center constant C8.
    #[arg(long)]
    c8: Option<f64>,
    /// Window half-width constant C9.
    #[arg(long)]
    c9: Option<f64>,
}

#[derive(Args)]
struct WreathArgs {
    /// Arity of the tree.
    #[arg(long)]
    d: Option<usize>,
    /// Depth of the tree.
    #[arg(long)]
    n: Option<u32>,
    /// Cyclic wreath product [C_d]^n instead of [S_d]^n.
    #[arg(long)]
    cyclic: bool,
    /// Subgroup order (decimal) whose index in [C_d]^n to compute.
    #[arg(long)]
    subgroup_order: Option<String>,
}

enum CliError {
    Invalid { message: String, detail: Option<Value> },
    Limit { message: String },
    Internal { message: String },
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError::Invalid {
            message: message.into(),
            detail: None,
        }
    }

    fn limit(message: impl Into<String>) -> Self {
        CliError::Limit {
            message: message.into(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid { .. } => 2,
            CliError::Limit { .. } => 3,
            CliError::Internal { .. } => 1,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Invalid { message, detail } => {
                report::error_object("invalid_input", message, detail.clone())
            }
            CliError::Limit { message } => report::error_object("limit_exceeded", message, None),
            CliError::Internal { message } => report::error_object("internal", message, None),
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        let detail = match &e {
            ExprError::Parse(p) => json!({
                "position": p.position,
                "expected": p.expected,
                "found": p.found,
            }),
            ExprError::DivisionByZero { position } | ExprError::XNotAllowed { position } => {
                json!({ "position": position })
            }
        };
        CliError::Invalid {
            message: format!("expression error: {e}"),
            detail: Some(detail),
        }
    }
}

impl From<DynError> for CliError {
    fn from(e: DynError) -> Self {
        match e {
            DynError::IterateOverflow => CliError::limit(e.to_string()),
            _ => CliError::invalid(e.to_string()),
        }
    }
}

impl From<FactorError> for CliError {
    fn from(e: FactorError) -> Self {
        match e {
            FactorError::DegreeBoundExceeded { .. } => CliError::limit(e.to_string()),
            FactorError::ZeroPolynomial => CliError::invalid(e.to_string()),
        }
    }
}

impl From<HeightError> for CliError {
    fn from(e: HeightError) -> Self {
        CliError::limit(e.to_string())
    }
}

impl From<GaloisError> for CliError {
    fn from(e: GaloisError) -> Self {
        match e {
            GaloisError::Factor(e) => e.into(),
            GaloisError::Dynamics(e) => e.into(),
            _ => CliError::invalid(e.to_string()),
        }
    }
}

impl From<SpecializeError> for CliError {
    fn from(e: SpecializeError) -> Self {
        match e {
            SpecializeError::Dynamics(e) => e.into(),
            SpecializeError::Height(e) => e.into(),
            _ => CliError::invalid(e.to_string()),
        }
    }
}

impl From<DisjointError> for CliError {
    fn from(e: DisjointError) -> Self {
        match e {
            DisjointError::Dynamics(e) => e.into(),
            DisjointError::Height(e) => e.into(),
            DisjointError::InvalidSystem => CliError::invalid(e.to_string()),
        }
    }
}

impl From<WreathError> for CliError {
    fn from(e: WreathError) -> Self {
        CliError::invalid(e.to_string())
    }
}

/// Caps read from the environment.
struct Limits {
    max_degree: usize,
    max_iter: u32,
}

fn read_limits() -> Result<Limits, CliError> {
    let get = |name: &str, default: u64| -> Result<u64, CliError> {
        match std::env::var(name) {
            Ok(s) => s
                .parse()
                .map_err(|_| CliError::invalid(format!("{name} must be a positive integer"))),
            Err(_) => Ok(default),
        }
    };
    Ok(Limits {
        max_degree: get("ARBORKIT_MAX_DEGREE", arborkit::DEFAULT_MAX_DEGREE as u64)? as usize,
        max_iter: get("ARBORKIT_MAX_ITER", arborkit::DEFAULT_MAX_ITER as u64)? as u32,
    })
}

/// Configuration file values; flags win on conflict.
struct Cfg(Map<String, Value>);

impl Cfg {
    fn load(path: Option<&PathBuf>) -> Result<Cfg, CliError> {
        let Some(path) = path else {
            return Ok(Cfg(Map::new()));
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::invalid(format!("config is not valid JSON: {e}")))?;
        match v {
            Value::Object(map) => Ok(Cfg(map)),
            _ => Err(CliError::invalid("config must be a JSON object")),
        }
    }

    fn string(&self, key: &str) -> Option<String> {
        self.0.get(key).and_then(|v| v.as_str()).map(String::from)
    }

    fn u64(&self, key: &str) -> Option<u64> {
        self.0.get(key).and_then(|v| v.as_u64())
    }

    fn f64(&self, key: &str) -> Option<f64> {
        self.0.get(key).and_then(|v| v.as_f64())
    }

    fn flag(&self, key: &str) -> bool {
        self.0.get(key).and_then(|v| v.as_bool()).unwrap_or(false)
    }

    fn strings(&self, key: &str) -> Option<Vec<String>> {
        let arr = self.0.get(key)?.as_array()?;
        arr.iter()
            .map(|v| v.as_str().map(String::from))
            .collect()
    }
}

fn require<T>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::invalid(format!("missing required --{name} (flag or config)")))
}

fn parse_base(s: Option<String>) -> Result<BaseField, CliError> {
    match s.as_deref() {
        None | Some("Q(t)") | Some("Qt") => Ok(BaseField::Qt),
        Some("Q") => Ok(BaseField::Q),
        Some(other) => Err(CliError::invalid(format!(
            "base must be \"Q\" or \"Q(t)\", got \"{other}\""
        ))),
    }
}

fn parse_points(s: &str) -> Result<Vec<Rational>, CliError> {
    s.split(',')
        .map(|part| Ok(expr::parse_rational(part.trim())?))
        .collect()
}

fn parse_floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse()
                .map_err(|_| CliError::invalid(format!("not a number: \"{part}\"")))
        })
        .collect()
}

fn check_depth(q: u32, depth: u32, limits: &Limits) -> Result<(), CliError> {
    if depth > limits.max_iter {
        return Err(CliError::limit(format!(
            "depth {depth} exceeds ARBORKIT_MAX_ITER = {}",
            limits.max_iter
        )));
    }
    let mut deg: u64 = 1;
    for _ in 0..depth {
        deg = deg.saturating_mul(q as u64);
    }
    if deg > limits.max_degree as u64 {
        return Err(CliError::limit(format!(
            "level-{depth} polynomial degree {deg} exceeds ARBORKIT_MAX_DEGREE = {}",
            limits.max_degree
        )));
    }
    Ok(())
}

fn rational_json(r: &Rational) -> Value {
    report::rational(r)
}

fn orbit_status_json(st: &OrbitStatus) -> Value {
    let verdict = match &st.verdict {
        OrbitVerdict::Periodic(p) => json!({ "kind": "Periodic", "period": p }),
        OrbitVerdict::Preperiodic { tail, period } => {
            json!({ "kind": "Preperiodic", "tail": tail, "period": period })
        }
        OrbitVerdict::Wandering => json!({ "kind": "Wandering" }),
    };
    let proof = match &st.proof {
        OrbitProof::PositiveCanonicalHeight(h) => {
            json!({ "kind": "PositiveCanonicalHeight", "height": rational_json(h) })
        }
        OrbitProof::Cycle { first, again } => {
            json!({ "kind": "Cycle", "first": first, "again": again })
        }
        OrbitProof::Escape { step } => json!({ "kind": "Escape", "step": step }),
    };
    json!({ "verdict": verdict, "proof": proof })
}

fn stability_json(v: &StabilityVerdict) -> Value {
    match v {
        StabilityVerdict::CertifiedStable { place, levels } => json!({
            "kind": "CertifiedStable",
            "place": report::place(place),
            "levels": levels,
        }),
        StabilityVerdict::ObservedStable { levels, counts } => json!({
            "kind": "ObservedStable",
            "levels": levels,
            "counts": counts,
        }),
        StabilityVerdict::UnstableWitness { level, counts } => json!({
            "kind": "UnstableWitness",
            "level": level,
            "counts": counts,
        }),
    }
}

fn provenance_str(p: RankProvenance) -> &'static str {
    match p {
        RankProvenance::Certified => "certified",
        RankProvenance::OracleExact => "oracle_exact",
        RankProvenance::LowerBound => "lower_bound",
    }
}

fn profile_json(p: &LayerRankProfile) -> Value {
    Value::Array(
        p.ranks
            .iter()
            .enumerate()
            .map(|(i, (r, prov))| {
                json!({
                    "level": i + 1,
                    "rank": report::big(r),
                    "provenance": provenance_str(*prov),
                })
            })
            .collect(),
    )
}

fn index_bound_json(b: &IndexBound) -> Value {
    json!({
        "index_upper": report::big(&b.index_upper),
        "group_order_lower": report::big(&b.group_lower),
    })
}

struct MapInput {
    f: UnicriticalMap,
    beta: RatFunc,
    depth: u32,
    inputs: Value,
}

fn resolve_map_qt(args: &MapArgs, cfg: &Cfg, limits: &Limits) -> Result<MapInput, CliError> {
    let q = require(args.q.or(cfg.u64("q").map(|v| v as u32)), "q")?;
    let c_src = require(args.c.clone().or(cfg.string("c")), "c")?;
    let beta_src = require(args.beta.clone().or(cfg.string("beta")), "beta")?;
    let depth = args.depth.or(cfg.u64("depth").map(|v| v as u32)).unwrap_or(4);
    if depth == 0 {
        return Err(CliError::invalid("depth must be at least 1"));
    }
    let c = expr::parse_ratfunc(&c_src)?;
    let beta = expr::parse_ratfunc(&beta_src)?;
    let f = UnicriticalMap::over_qt(q, c)?;
    check_depth(q, depth, limits)?;
    let inputs = json!({
        "q": q,
        "c": report::ratfunc(f.c()),
        "beta": report::ratfunc(&beta),
        "depth": depth,
        "base": "Q(t)",
    });
    Ok(MapInput { f, beta, depth, inputs })
}

fn cmd_analyze(args: &MapArgs, cfg: &Cfg, limits: &Limits) -> Result<(Value, Value), CliError> {
    let m = resolve_map_qt(args, cfg, limits)?;
    let report = galois::analyze(&m.f, &m.beta, m.depth)?;
    let dichotomy = match &report.dichotomy {
        galois::Dichotomy::FiniteIndexEvidence => json!({ "kind": "FiniteIndexEvidence" }),
        galois::Dichotomy::ConditionBViolated { postcritical_level } => json!({
            "kind": "ConditionBViolated",
            "postcritical_level": postcritical_level,
        }),
        galois::Dichotomy::ConditionPeriodic => json!({ "kind": "ConditionPeriodic" }),
    };
    let results = json!({
        "periodic": orbit_status_json(&report.periodic),
        "postcritical_level": report.postcritical,
        "stability": report.stability.as_ref().map(stability_json),
        "layer_ranks": report.profile.as_ref().map(profile_json),
        "index_bound": report.index_bound_at_n.as_ref().map(index_bound_json),
        "dichotomy": dichotomy,
    });
    Ok((m.inputs, results))
}

fn cmd_stability(
    args: &StabilityArgs,
    cfg: &Cfg,
    limits: &Limits,
) -> Result<(Value, Value), CliError> {
    let base = parse_base(args.base.clone().or(cfg.string("base")))?;
    let allow_periodic = args.allow_periodic || cfg.flag("allow_periodic");
    let q = require(args.map.q.or(cfg.u64("q").map(|v| v as u32)), "q")?;
    let c_src = require(args.map.c.clone().or(cfg.string("c")), "c")?;
    let beta_src = require(args.map.beta.clone().or(cfg.string("beta")), "beta")?;
    let depth = args
        .map
        .depth
        .or(cfg.u64("depth").map(|v| v as u32))
        .unwrap_or(4);
    if depth == 0 {
        return Err(CliError::invalid("depth must be at least 1"));
    }
    let c = expr::parse_ratfunc(&c_src)?;
    let beta = expr::parse_ratfunc(&beta_src)?;
    let f = match base {
        BaseField::Qt => UnicriticalMap::over_qt(q, c)?,
        BaseField::Q => {
            let c = c
                .as_constant()
                .ok_or_else(|| CliError::invalid("c must be constant over base Q"))?;
            if beta.as_constant().is_none() {
                return Err(CliError::invalid("beta must be constant over base Q"));
            }
            UnicriticalMap::over_q(q, c)?
        }
    };
    check_depth(q, depth, limits)?;
    let verdict = if allow_periodic {
        galois::eventual_stability_unchecked(&f, &beta, depth)?
    } else {
        galois::eventual_stability(&f, &beta, depth)?
    };
    let inputs = json!({
        "q": q,
        "c": report::ratfunc(f.c()),
        "beta": report::ratfunc(&beta),
        "depth": depth,
        "base": if base == BaseField::Qt { "Q(t)" } else { "Q" },
        "allow_periodic": allow_periodic,
    });
    Ok((inputs, json!({ "stability": stability_json(&verdict) })))
}

fn cmd_layers(args: &MapArgs, cfg: &Cfg, limits: &Limits) -> Result<(Value, Value), CliError> {
    let m = resolve_map_qt(args, cfg, limits)?;
    let mut certificates = Vec::new();
    for level in 1..=m.depth {
        let entry = match galois::certify_layer(&m.f, &m.beta, level)? {
            LayerOutcome::Certified(cert) => json!({
                "level": level,
                "outcome": "certified",
                "witness": report::place(&cert.witness),
                "valuation": cert.valuation,
                "freshness": cert.freshness.iter().map(|f| json!({
                    "check": f.check,
                    "ok": f.ok,
                })).collect::<Vec<_>>(),
            }),
            LayerOutcome::Inconclusive => json!({
                "level": level,
                "outcome": "inconclusive",
            }),
        };
        certificates.push(entry);
    }
    let oracle = if m.f.q() == 2 {
        match galois::kummer_rank_level2_oracle(&m.f, &m.beta) {
            Ok((r1, r2)) => json!({ "r1": r1, "r2": r2 }),
            Err(GaloisError::DegenerateBeta | GaloisError::PostcriticalDegenerate) => Value::Null,
            Err(e) => return Err(e.into()),
        }
    } else {
        Value::Null
    };
    let (profile, bound) = galois::layer_profile_and_index(&m.f, &m.beta, m.depth)?;
    let results = json!({
        "certificates": certificates,
        "rank_oracle_level2": oracle,
        "layer_ranks": profile_json(&profile),
        "index_bound": index_bound_json(&bound),
    });
    Ok((m.inputs, results))
}

fn cmd_height(args: &HeightArgs, cfg: &Cfg) -> Result<(Value, Value), CliError> {
    let base = parse_base(args.base.clone().or(cfg.string("base")))?;
    let q = require(args.q.or(cfg.u64("q").map(|v| v as u32)), "q")?;
    let c_src = require(args.c.clone().or(cfg.string("c")), "c")?;
    let z_src = require(args.z.clone().or(cfg.string("z")), "z")?;
    let eps = args.eps.or(cfg.f64("eps")).unwrap_or(1e-4);
    if !(eps > 0.0) {
        return Err(CliError::invalid("eps must be positive"));
    }
    let c = expr::parse_ratfunc(&c_src)?;
    let z = expr::parse_ratfunc(&z_src)?;
    let (inputs, results) = match base {
        BaseField::Qt => {
            let f = UnicriticalMap::over_qt(q, c)?;
            let weil = heights::weil_height_fn(&z);
            let canonical = heights::canonical_height_fn(&f, &z)?;
            (
                json!({
                    "q": q,
                    "c": report::ratfunc(f.c()),
                    "z": report::ratfunc(&z),
                    "base": "Q(t)",
                }),
                json!({
                    "weil_height": weil,
                    "canonical_height": rational_json(&canonical),
                }),
            )
        }
        BaseField::Q => {
            let c = c
                .as_constant()
                .ok_or_else(|| CliError::invalid("c must be constant over base Q"))?;
            let z = z
                .as_constant()
                .ok_or_else(|| CliError::invalid("z must be constant over base Q"))?;
            let f = UnicriticalMap::over_q(q, c.clone())?;
            let weil = heights::weil_height_rat(&z);
            let canonical = heights::canonical_height_num(&f, &z, eps)?;
            (
                json!({
                    "q": q,
                    "c": rational_json(&c),
                    "z": rational_json(&z),
                    "base": "Q",
                    "eps": eps,
                }),
                json!({
                    "weil_height": report::numeric(weil, 0.0),
                    "canonical_height": report::numeric(canonical, eps),
                }),
            )
        }
    };
    Ok((inputs, results))
}

fn cmd_orbit(args: &OrbitArgs, cfg: &Cfg, limits: &Limits) -> Result<(Value, Value), CliError> {
    let base = parse_base(args.base.clone().or(cfg.string("base")))?;
    let q = require(args.q.or(cfg.u64("q").map(|v| v as u32)), "q")?;
    let c_src = require(args.c.clone().or(cfg.string("c")), "c")?;
    let z_src = require(args.z.clone().or(cfg.string("z")), "z")?;
    let n = args.n.or(cfg.u64("n").map(|v| v as u32)).unwrap_or(8);
    if n > limits.max_iter {
        return Err(CliError::limit(format!(
            "n {n} exceeds ARBORKIT_MAX_ITER = {}",
            limits.max_iter
        )));
    }
    let c = expr::parse_ratfunc(&c_src)?;
    let z = expr::parse_ratfunc(&z_src)?;
    match base {
        BaseField::Qt => {
            let f = UnicriticalMap::over_qt(q, c)?;
            let orbit = f.orbit(&z, n)?;
            let status = arborkit::dynamics::periodicity_status(&f, &z)?;
            let inputs = json!({
                "q": q,
                "c": report::ratfunc(f.c()),
                "z": report::ratfunc(&z),
                "n": n,
                "base": "Q(t)",
            });
            let results = json!({
                "orbit": orbit.iter().map(report::ratfunc).collect::<Vec<_>>(),
                "status": orbit_status_json(&status),
            });
            Ok((inputs, results))
        }
        BaseField::Q => {
            let c = c
                .as_constant()
                .ok_or_else(|| CliError::invalid("c must be constant over base Q"))?;
            let z0 = z
                .as_constant()
                .ok_or_else(|| CliError::invalid("z must be constant over base Q"))?;
            let f = UnicriticalMap::over_q(q, c.clone())?;
            let mut orbit = vec![z0.clone()];
            for _ in 0..n {
                let next = f.evaluate_rat(orbit.last().unwrap());
                arborkit::dynamics::check_size_rat(&next).map_err(CliError::from)?;
                orbit.push(next);
            }
            let status = arborkit::dynamics::periodicity_status(&f, &z)?;
            let inputs = json!({
                "q": q,
                "c": rational_json(&c),
                "z": rational_json(&z0),
                "n": n,
                "base": "Q",
            });
            let results = json!({
                "orbit": orbit.iter().map(rational_json).collect::<Vec<_>>(),
                "status": orbit_status_json(&status),
            });
            Ok((inputs, results))
        }
    }
}

fn cmd_disjoint(args: &DisjointArgs, cfg: &Cfg) -> Result<(Value, Value), CliError> {
    let q = require(args.q.or(cfg.u64("q").map(|v| v as u32)), "q")?;
    let raw = if args.entry.is_empty() {
        cfg.strings("entry").unwrap_or_default()
    } else {
        args.entry.clone()
    };
    if raw.len() < 2 {
        return Err(CliError::invalid(
            "need at least two --entry \"c_expr;alpha_expr\" pairs",
        ));
    }
    let mut entries = Vec::new();
    let mut echoed = Vec::new();
    for item in &raw {
        let (c_src, a_src) = item.split_once(';').ok_or_else(|| {
            CliError::invalid(format!("entry \"{item}\" must be \"c_expr;alpha_expr\""))
        })?;
        let c = expr::parse_ratfunc(c_src.trim())?;
        let alpha = expr::parse_ratfunc(a_src.trim())?;
        let f = UnicriticalMap::over_qt(q, c)?;
        echoed.push(json!({
            "c": report::ratfunc(f.c()),
            "alpha": report::ratfunc(&alpha),
        }));
        entries.push((f, alpha));
    }
    let system = MapPointSystem::new(entries)?;
    let verdict = disjoint::disjointness_hypothesis(&system)?;
    let results = match verdict {
        DisjointnessVerdict::Ok => json!({ "verdict": "ok" }),
        DisjointnessVerdict::Violation(w) => json!({
            "verdict": "violation",
            "witness": {
                "i": w.i,
                "j": w.j,
                "zeta": rational_json(&w.zeta),
                "n": w.n,
                "orientation": match w.orientation {
                    Orientation::Forward => "forward",
                    Orientation::Backward => "backward",
                },
            },
        }),
    };
    let inputs = json!({ "q": q, "entries": echoed });
    Ok((inputs, results))
}

fn cmd_specialize(
    args: &SpecializeArgs,
    cfg: &Cfg,
    limits: &Limits,
) -> Result<(Value, Value), CliError> {
    let at = args.at.clone().or(cfg.string("at"));
    let points = args.points.clone().or(cfg.string("points"));
    let beta2 = args.beta2.clone().or(cfg.string("beta2"));
    let filter = args.filter.clone().or(cfg.string("filter"));
    let modes = [at.is_some(), points.is_some(), beta2.is_some(), filter.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if modes != 1 {
        return Err(CliError::invalid(
            "exactly one of --at, --points, --beta2, --filter is required",
        ));
    }

    if let Some(filter) = filter {
        let q = require(args.q.or(cfg.u64("q").map(|v| v as u32)), "q")?;
        if arborkit::dynamics::UnicriticalMap::over_q(q, Rational::from_integer(0.into())).is_err()
        {
            return Err(CliError::invalid("q must be a prime power"));
        }
        let c8 = require(args.c8.or(cfg.f64("c8")), "c8")?;
        let c9 = require(args.c9.or(cfg.f64("c9")), "c9")?;
        if !(c8 > 0.0) || c9 < 0.0 {
            return Err(CliError::invalid("need c8 > 0 and c9 >= 0"));
        }
        let heights = parse_floats(&filter)?;
        let kept = specialize::height_window_filter(&heights, c8, c9, q);
        let inputs = json!({ "q": q, "filter": heights, "c8": c8, "c9": c9 });
        return Ok((inputs, json!({ "kept": kept })));
    }

    let q = require(args.q.or(cfg.u64("q").map(|v| v as u32)), "q")?;
    let c_src = require(args.c.clone().or(cfg.string("c")), "c")?;
    let beta_src = require(args.beta.clone().or(cfg.string("beta")), "beta")?;
    let c = expr::parse_ratfunc(&c_src)?;
    let beta = expr::parse_ratfunc(&beta_src)?;

    if let Some(beta2_src) = beta2 {
        let n = args.n.or(cfg.u64("n").map(|v| v as u32)).unwrap_or(4);
        if n > limits.max_iter || n > 12 {
            return Err(CliError::limit(format!("n {n} exceeds the iteration cap")));
        }
        let c = c
            .as_constant()
            .ok_or_else(|| CliError::invalid("c must be constant for the orbit-hit search"))?;
        let beta1 = beta
            .as_constant()
            .ok_or_else(|| CliError::invalid("beta must be constant for the orbit-hit search"))?;
        let beta2 = expr::parse_ratfunc(&beta2_src)?;
        let f = UnicriticalMap::over_q(q, c.clone())?;
        let report_hits = specialize::find_orbit_hits(&f, &beta1, &beta2, n)?;
        let inputs = json!({
            "q": q,
            "c": rational_json(&c),
            "beta": rational_json(&beta1),
            "beta2": report::ratfunc(&beta2),
            "n": n,
        });
        let results = json!({
            "hits": report_hits.hits.iter().map(|h| json!({
                "n": h.n,
                "gamma": rational_json(&h.gamma),
                "height": report::numeric(h.height, 0.0),
            })).collect::<Vec<_>>(),
            "c8_estimate": report_hits.c8_estimate,
        });
        return Ok((inputs, results));
    }

    let f = UnicriticalMap::over_qt(q, c)?;
    if let Some(at_src) = at {
        let a = expr::parse_rational(&at_src)?;
        let inst = specialize::specialize(&f, &beta, &a)?;
        let inputs = json!({
            "q": q,
            "c": report::ratfunc(f.c()),
            "beta": report::ratfunc(&beta),
            "at": rational_json(&a),
        });
        let results = json!({
            "c_a": rational_json(&inst.map.c_rational().expect("base Q")),
            "beta_a": rational_json(&inst.beta),
            "h_a": report::numeric(inst.h_a, 0.0),
        });
        return Ok((inputs, results));
    }

    let points = parse_points(&points.expect("mode checked"))?;
    let conv = specialize::convergence_experiment(&f, &beta, &points)?;
    let inputs = json!({
        "q": q,
        "c": report::ratfunc(f.c()),
        "beta": report::ratfunc(&beta),
        "points": points.iter().map(rational_json).collect::<Vec<_>>(),
    });
    let results = json!({
        "rows": conv.rows.iter().map(|r| json!({
            "a": rational_json(&r.a),
            "h_a": report::numeric(r.h_a, 0.0),
            "canonical_height": report::numeric(r.hhat, specialize::DEFAULT_EPS),
            "ratio": r.ratio,
        })).collect::<Vec<_>>(),
        "limit": rational_json(&conv.limit),
    });
    Ok((inputs, results))
}

fn cmd_wreath(args: &WreathArgs, cfg: &Cfg) -> Result<(Value, Value), CliError> {
    let d = require(args.d.or(cfg.u64("d").map(|v| v as usize)), "d")?;
    let n = require(args.n.or(cfg.u64("n").map(|v| v as u32)), "n")?;
    if d < 2 || n < 1 {
        return Err(CliError::invalid("need d >= 2 and n >= 1"));
    }
    let cyclic = args.cyclic || cfg.flag("cyclic");
    let order = wreath::iterated_wreath_order(d, n, cyclic);
    let mut results = Map::new();
    results.insert("order".into(), report::big(&order));
    // cross-check the formula against a stabilizer chain when the leaf
    // count is small enough for that to be cheap
    if (d as u64).pow(n) <= 64 {
        let gens = if cyclic {
            wreath::cyclic_generators(d, n)
        } else {
            wreath::aut_generators(d, n)
        };
        let by_chain = wreath::group_order(&gens)?;
        results.insert("generator_order".into(), report::big(&by_chain));
    }
    let subgroup = args.subgroup_order.clone().or(cfg.string("subgroup_order"));
    if let Some(s) = subgroup {
        if !cyclic {
            return Err(CliError::invalid("--subgroup-order requires --cyclic"));
        }
        let so: BigUint = s
            .parse()
            .map_err(|_| CliError::invalid("subgroup order must be a decimal integer"))?;
        let index = wreath::index_in_cyclic_wreath(&so, d, n)?;
        results.insert("index".into(), report::big(&index));
    }
    let inputs = json!({ "d": d, "n": n, "cyclic": cyclic });
    Ok((inputs, Value::Object(results)))
}

fn run(cli: &Cli) -> Result<Value, CliError> {
    let limits = read_limits()?;
    let cfg = Cfg::load(cli.config.as_ref())?;
    let start = Instant::now();
    let (name, (inputs, results)) = match &cli.cmd {
        Cmd::Analyze(a) => ("analyze", cmd_analyze(a, &cfg, &limits)?),
        Cmd::Stability(a) => ("stability", cmd_stability(a, &cfg, &limits)?),
        Cmd::Layers(a) => ("layers", cmd_layers(a, &cfg, &limits)?),
        Cmd::Height(a) => ("height", cmd_height(a, &cfg)?),
        Cmd::Orbit(a) => ("orbit", cmd_orbit(a, &cfg, &limits)?),
        Cmd::Disjoint(a) => ("disjoint", cmd_disjoint(a, &cfg)?),
        Cmd::Specialize(a) => ("specialize", cmd_specialize(a, &cfg, &limits)?),
        Cmd::Wreath(a) => ("wreath", cmd_wreath(a, &cfg)?),
    };
    let timings = cli
        .timings
        .then(|| json!({ "total_ms": start.elapsed().as_secs_f64() * 1e3 }));
    Ok(report::envelope(name, inputs, results, timings))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let obj = report::error_object("invalid_input", &e.to_string(), None);
            eprintln!("{obj}");
            return ExitCode::from(2);
        }
    };
    // internal failures must surface as structured JSON, not a backtrace
    std::panic::set_hook(Box::new(|_| {}));
    let outcome = std::panic::catch_unwind(|| run(&cli)).unwrap_or_else(|payload| {
        let message = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "unexpected internal error".into());
        Err(CliError::Internal { message })
    });
    match outcome {
        Ok(report) => {
            println!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
