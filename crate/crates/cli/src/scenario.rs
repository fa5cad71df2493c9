//! Named scenarios, their configuration schemas and the sweep driver.
//!
//! A scenario file is one JSON document:
//! ```json
//! {"name": "ab-sweep", "config": {"eta": 0.3}, "output": {"path": "ab.csv", "format": "csv"},
//!  "sweep": {"axis": "eta", "values": [0.0, 0.3, 0.5]}}
//! ```
//! Missing config fields take their defaults. A sweep re-runs the scenario
//! once per value of `axis` and stacks the rows, with the axis value as the
//! first column unless the scenario already reports it.

use std::f64::consts::PI;
use std::path::PathBuf;

use geophase_core::ab_box::{ab_geometric_phase, uniform_sweep, ABConfig};
use geophase_core::experiment::{extract_gamma_mod_pi, polarization_analytic, polarization_oracle, uniform_schedule};
use geophase_core::oracle::{checkpoints, default_dt, oracle_geometric_phase, propagate};
use geophase_core::phase::{circular_distance, PhaseEngine};
use geophase_core::sphere::{closure_phase, closure_phase_with, octant_path, SpherePath, SphericalPoint};
use geophase_core::{ParameterPath, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;
use crate::formats::{ModelSpec, PathSource};
use crate::table::{Cell, Table};

pub const SCENARIOS: [&str; 6] =
    ["conical-sign-change", "ab-sweep", "spin-experiment", "geodesic-closure", "oracle-convergence", "custom"];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default = "empty_object")]
    pub config: Value,
    #[serde(default)]
    pub output: Option<OutputSpec>,
    #[serde(default)]
    pub sweep: Option<Sweep>,
}

fn empty_object() -> Value {
    Value::Object(Default::default())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: String,
    pub values: Vec<Value>,
}

/// What a runner needs besides its config.
#[derive(Debug, Clone)]
pub struct Context {
    /// Directory against which relative file names are resolved.
    pub base: PathBuf,
    /// Seed for shot noise; sweep row `k` uses `seed + k`.
    pub seed: u64,
}

impl Default for Context {
    fn default() -> Self {
        Context { base: PathBuf::from("."), seed: 0 }
    }
}

// ---------------------------------------------------------------------------
// configs

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConicalConfig {
    pub radius: f64,
    pub phi_start: f64,
    pub phi_end: f64,
    pub samples: usize,
    /// 1 is the upper level.
    pub level: usize,
}

impl Default for ConicalConfig {
    fn default() -> Self {
        // 400 samples keep Φ = π off the grid
        ConicalConfig { radius: 1.0, phi_start: 0.0, phi_end: 2.0 * PI, samples: 400, level: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AbSweepConfig {
    pub eta: f64,
    pub delta_theta: f64,
    pub mode: u32,
    pub steps: usize,
    pub nodes: usize,
}

impl Default for AbSweepConfig {
    fn default() -> Self {
        AbSweepConfig { eta: 0.3, delta_theta: 1.5 * PI, mode: 1, steps: 401, nodes: 4096 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinExperimentConfig {
    pub theta0: f64,
    pub omega_b: f64,
    /// Exit time; the path is traversed uniformly in sample index over `[0, t]`.
    pub t: f64,
    /// Field directions `R = (Θ, Φ)`; defaults to `Θ = theta0`, `Φ: 0 → π/2`.
    pub path: Option<PathSource>,
    pub shots: Option<u64>,
    /// Extra exit times for fitting `γ mod π` from the oracle polarization.
    pub exit_times: Vec<f64>,
    pub dt: Option<f64>,
}

impl Default for SpinExperimentConfig {
    fn default() -> Self {
        SpinExperimentConfig {
            theta0: PI / 4.0,
            omega_b: 1.0,
            t: 200.0,
            path: None,
            shots: None,
            exit_times: Vec::new(),
            dt: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClosureConfig {
    /// `R = (Θ, Φ)`; defaults to the octant path.
    pub path: Option<PathSource>,
    pub arc_samples: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub model: ModelSpec,
    /// Polyline in parameter space, traversed with zero velocity at vertices.
    pub vertices: Vec<Vec<f64>>,
    pub duration: f64,
    pub samples_per_leg: usize,
    pub level: usize,
    pub dt: Option<f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            model: ModelSpec::default(),
            vertices: vec![vec![PI / 4.0, 0.0], vec![PI / 3.0, PI / 2.0]],
            duration: 50.0,
            samples_per_leg: 400,
            level: 0,
            dt: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EngineKind {
    /// Closed-form frames and connection where the model has them.
    #[default]
    Auto,
    /// Numerical eigenframes and the discrete connection.
    Numeric,
}

impl EngineKind {
    pub fn engine(self) -> PhaseEngine {
        match self {
            EngineKind::Auto => PhaseEngine::default(),
            EngineKind::Numeric => PhaseEngine::numeric(Tolerances::default()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CustomConfig {
    pub model: ModelSpec,
    pub path: Option<PathSource>,
    pub level: usize,
    pub engine: EngineKind,
}

impl Default for CustomConfig {
    fn default() -> Self {
        CustomConfig { model: ModelSpec::default(), path: None, level: 0, engine: EngineKind::Auto }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PropagateConfig {
    pub model: ModelSpec,
    pub path: Option<PathSource>,
    pub level: usize,
    pub dt: Option<f64>,
    /// Stretches the schedule in time; larger is more adiabatic.
    pub duration_multiplier: f64,
    /// Emit every `stride`-th step (and the last).
    pub stride: usize,
}

impl Default for PropagateConfig {
    fn default() -> Self {
        PropagateConfig { model: ModelSpec::default(), path: None, level: 0, dt: None, duration_multiplier: 1.0, stride: 1 }
    }
}

// ---------------------------------------------------------------------------
// runners

pub const CONICAL_COLUMNS: [&str; 5] = ["t", "phi", "overlap_magnitude", "gamma_wrapped", "gamma_unwrapped"];
pub const AB_COLUMNS: [&str; 4] = ["theta", "gamma_wrapped", "gamma_unwrapped", "overlap_magnitude"];
pub const SPIN_COLUMNS: [&str; 7] =
    ["p_z_analytic", "p_z_oracle", "p_z_flipped", "p_z_measured", "f", "gamma", "gamma_mod_pi_class"];
pub const CLOSURE_COLUMNS: [&str; 4] = ["omega_gc", "omega_raw", "phase_plus", "phase_minus"];
pub const ORACLE_COLUMNS: [&str; 6] =
    ["duration", "metric", "gamma_adiabatic", "gamma_adiabatic_unwrapped", "gamma_oracle", "deviation"];
pub const TRACE_COLUMNS: [&str; 8] = [
    "t",
    "overlap_magnitude",
    "energy_phase",
    "connection_phase",
    "overlap_phase",
    "gamma_wrapped",
    "gamma_unwrapped",
    "total_phase",
];

fn num(x: f64) -> Cell {
    Cell::Num(x)
}

pub fn run_conical(cfg: &ConicalConfig) -> Result<Table, CliError> {
    let model = geophase_core::ConicalModel::new(cfg.radius)?;
    let (a, b) = (cfg.phi_start, cfg.phi_end);
    let path = ParameterPath::uniform(0.0, 1.0, cfg.samples, |s| vec![a + (b - a) * s])?;
    let trace = PhaseEngine::default().phase_trace(&model, &path, cfg.level)?;
    let mut t = Table::new(&CONICAL_COLUMNS);
    for (c, s) in trace.iter().zip(path.samples()) {
        let (w, u) = c.phases.map_or((f64::NAN, f64::NAN), |p| (p.geometric_phase, p.geometric_unwrapped));
        t.push(vec![num(c.time), num(s.point[0]), num(c.overlap_magnitude), num(w), num(u)]);
    }
    Ok(t)
}

pub fn run_ab(cfg: &AbSweepConfig) -> Result<Table, CliError> {
    let c = ABConfig::new(cfg.eta, cfg.delta_theta, cfg.mode)?.with_nodes(cfg.nodes);
    let points = ab_geometric_phase(&c, &uniform_sweep(cfg.steps))?;
    let mut t = Table::new(&AB_COLUMNS);
    for p in points {
        t.push(vec![num(p.theta), num(p.wrapped), num(p.unwrapped), num(p.overlap_magnitude)]);
    }
    Ok(t)
}

fn sphere_path(source: &PathSource, ctx: &Context) -> Result<SpherePath, CliError> {
    source.load(&ctx.base)?.to_sphere()
}

pub fn run_spin(cfg: &SpinExperimentConfig, ctx: &Context) -> Result<Table, CliError> {
    let path = match &cfg.path {
        Some(src) => sphere_path(src, ctx)?,
        None => SpherePath::sampled(201, |s| SphericalPoint::new(cfg.theta0, s * PI / 2.0))?,
    };
    let p_z_at = |t: f64| -> Result<f64, CliError> {
        Ok(polarization_oracle(&uniform_schedule(&path, t)?, cfg.omega_b, cfg.dt)?)
    };
    let mut r = polarization_analytic(cfg.theta0, &path, cfg.omega_b, cfg.t)?;
    r.p_z_oracle = p_z_at(cfg.t)?;

    let measured = match cfg.shots {
        None => f64::NAN,
        Some(0) => return Err(CliError::schema("shots must be positive")),
        Some(n) => {
            let p_up = ((1.0 + r.p_z_oracle) / 2.0).clamp(0.0, 1.0);
            let dist = Binomial::new(n, p_up).map_err(|e| CliError::schema(format!("shot noise: {e}")))?;
            let up = dist.sample(&mut ChaCha8Rng::seed_from_u64(ctx.seed)) as f64;
            (2.0 * up - n as f64) / n as f64
        }
    };
    let class = if cfg.exit_times.is_empty() {
        r.gamma.rem_euclid(PI)
    } else {
        let samples = cfg.exit_times.iter().map(|&t| Ok((t, p_z_at(t)?))).collect::<Result<Vec<_>, CliError>>()?;
        extract_gamma_mod_pi(cfg.theta0, path.last().theta, r.f_value, cfg.omega_b, &samples)?
    };
    let mut t = Table::new(&SPIN_COLUMNS);
    t.push(
        [r.p_z_analytic, r.p_z_oracle, r.p_z_flipped, measured, r.f_value, r.gamma, class].into_iter().map(num).collect(),
    );
    Ok(t)
}

pub fn run_closure(cfg: &ClosureConfig, ctx: &Context) -> Result<Table, CliError> {
    let path = match &cfg.path {
        Some(src) => sphere_path(src, ctx)?,
        None => octant_path(200)?,
    };
    let r = match cfg.arc_samples {
        Some(n) => closure_phase_with(&path, n)?,
        None => closure_phase(&path)?,
    };
    let mut t = Table::new(&CLOSURE_COLUMNS);
    t.push(vec![num(r.omega_gc), num(r.omega_raw), num(r.phase_plus), num(r.phase_minus)]);
    Ok(t)
}

pub fn run_oracle(cfg: &OracleConfig, ctx: &Context) -> Result<Table, CliError> {
    let model = cfg.model.build(&ctx.base)?;
    let schedule = ParameterPath::smooth_polyline(&cfg.vertices, cfg.duration, cfg.samples_per_leg)?;
    let engine = PhaseEngine::default();
    let adiabatic = engine.geometric_phase(model.as_ref(), &schedule, cfg.level)?;
    let metric = engine.adiabaticity_metric(model.as_ref(), &schedule, cfg.level)?.metric;
    let dt = match cfg.dt {
        Some(dt) => dt,
        None => default_dt(model.as_ref(), &schedule)?,
    };
    let exact = oracle_geometric_phase(&engine, model.as_ref(), &schedule, cfg.level, dt)?;
    let mut t = Table::new(&ORACLE_COLUMNS);
    t.push(vec![
        num(cfg.duration),
        num(metric),
        num(adiabatic.geometric_phase),
        num(adiabatic.geometric_unwrapped),
        num(exact),
        num(circular_distance(adiabatic.geometric_phase, exact)),
    ]);
    Ok(t)
}

fn required_path(path: &Option<PathSource>, ctx: &Context) -> Result<ParameterPath, CliError> {
    path.as_ref().ok_or_else(|| CliError::schema("config needs a path"))?.load(&ctx.base)?.to_path()
}

/// Phase decomposition at every sample of a path.
pub fn run_custom(cfg: &CustomConfig, ctx: &Context) -> Result<Table, CliError> {
    let model = cfg.model.build(&ctx.base)?;
    let path = required_path(&cfg.path, ctx)?;
    let trace = cfg.engine.engine().phase_trace(model.as_ref(), &path, cfg.level)?;
    let mut t = Table::new(&TRACE_COLUMNS);
    for c in trace {
        let row = match c.phases {
            Some(p) => [
                p.energy_phase,
                p.connection_phase,
                p.overlap_phase,
                p.geometric_phase,
                p.geometric_unwrapped,
                p.total_phase,
            ],
            None => [f64::NAN; 6],
        };
        let mut cells = vec![num(c.time), num(c.overlap_magnitude)];
        cells.extend(row.into_iter().map(num));
        t.push(cells);
    }
    Ok(t)
}

/// Exact trajectory from the instantaneous eigenstate `level`.
pub fn run_propagate(cfg: &PropagateConfig, ctx: &Context) -> Result<Table, CliError> {
    let model = cfg.model.build(&ctx.base)?;
    let mut schedule = required_path(&cfg.path, ctx)?;
    if !(cfg.duration_multiplier > 0.0) {
        return Err(CliError::schema("duration_multiplier must be positive"));
    }
    if schedule.len() > 1 && cfg.duration_multiplier != 1.0 {
        schedule = schedule.rescaled(schedule.duration() * cfg.duration_multiplier)?;
    }
    let engine = PhaseEngine::default();
    let start = engine.frame(model.as_ref(), &schedule.samples()[0].point, cfg.level)?;
    let dt = match cfg.dt {
        Some(dt) => dt,
        None => default_dt(model.as_ref(), &schedule)?,
    };
    let traj = propagate(model.as_ref(), &schedule, &start.vector, dt)?;
    let rows = checkpoints(&engine, model.as_ref(), &schedule, &traj, cfg.level, cfg.stride)?;

    let dim = model.dimension();
    let mut columns = vec!["t".to_string()];
    for i in 0..dim {
        columns.push(format!("re_{i}"));
        columns.push(format!("im_{i}"));
    }
    columns.extend(["norm".to_string(), "eigen_overlap".to_string()]);
    let mut t = Table { columns, rows: Vec::with_capacity(rows.len()) };
    for c in rows {
        let mut cells = vec![num(c.time)];
        for z in &c.state {
            cells.extend([num(z.re), num(z.im)]);
        }
        cells.extend([num(c.norm), num(c.eigen_overlap)]);
        t.push(cells);
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// dispatch

fn parse<T: DeserializeOwned>(name: &str, config: &Value) -> Result<T, CliError> {
    serde_json::from_value(config.clone()).map_err(|e| CliError::schema(format!("{name} config: {e}")))
}

fn unknown(name: &str) -> CliError {
    CliError::schema(format!("unknown scenario {name:?}; expected one of {}", SCENARIOS.join(", ")))
}

/// Output columns of a named scenario.
pub fn columns(name: &str) -> Result<&'static [&'static str], CliError> {
    Ok(match name {
        "conical-sign-change" => &CONICAL_COLUMNS,
        "ab-sweep" => &AB_COLUMNS,
        "spin-experiment" => &SPIN_COLUMNS,
        "geodesic-closure" => &CLOSURE_COLUMNS,
        "oracle-convergence" => &ORACLE_COLUMNS,
        "custom" => &TRACE_COLUMNS,
        _ => return Err(unknown(name)),
    })
}

fn normalized<T: DeserializeOwned + Serialize>(name: &str, config: &Value) -> Result<Value, CliError> {
    let typed: T = parse(name, config)?;
    Ok(serde_json::to_value(typed).expect("configs serialize"))
}

/// Validates `config` and fills in every default.
pub fn normalize(name: &str, config: &Value) -> Result<Value, CliError> {
    match name {
        "conical-sign-change" => normalized::<ConicalConfig>(name, config),
        "ab-sweep" => normalized::<AbSweepConfig>(name, config),
        "spin-experiment" => normalized::<SpinExperimentConfig>(name, config),
        "geodesic-closure" => normalized::<ClosureConfig>(name, config),
        "oracle-convergence" => normalized::<OracleConfig>(name, config),
        "custom" => normalized::<CustomConfig>(name, config),
        _ => Err(unknown(name)),
    }
}

pub fn run_config(name: &str, config: &Value, ctx: &Context) -> Result<Table, CliError> {
    match name {
        "conical-sign-change" => run_conical(&parse(name, config)?),
        "ab-sweep" => run_ab(&parse(name, config)?),
        "spin-experiment" => run_spin(&parse(name, config)?, ctx),
        "geodesic-closure" => run_closure(&parse(name, config)?, ctx),
        "oracle-convergence" => run_oracle(&parse(name, config)?, ctx),
        "custom" => run_custom(&parse(name, config)?, ctx),
        _ => Err(unknown(name)),
    }
}

/// One run per value of `axis`, fanned out over the rayon pool and gathered
/// in input order. The first failing value (in input order) decides the error.
pub fn sweep(name: &str, config: &Value, axis: &str, values: &[Value], ctx: &Context) -> Result<Table, CliError> {
    let base = normalize(name, config)?;
    if base.get(axis).is_none() {
        return Err(CliError::schema(format!("unknown sweep axis {axis:?} for scenario {name}")));
    }
    let tables: Vec<Result<Table, CliError>> = values
        .par_iter()
        .enumerate()
        .map(|(k, v)| {
            let mut cfg = base.clone();
            cfg[axis] = v.clone();
            let row_ctx = Context { seed: ctx.seed.wrapping_add(k as u64), ..ctx.clone() };
            run_config(name, &cfg, &row_ctx)
        })
        .collect();

    // an axis that is already an output column is not repeated
    let own = columns(name)?;
    let prefix = !own.contains(&axis);
    let mut cols = if prefix { vec![axis] } else { Vec::new() };
    cols.extend_from_slice(own);
    let mut out = Table::new(&cols);
    for (v, table) in values.iter().zip(tables) {
        for row in table?.rows {
            let mut r = if prefix { vec![Cell::from_json(v)] } else { Vec::new() };
            r.extend(row);
            out.push(r);
        }
    }
    Ok(out)
}

pub fn run_scenario(s: &Scenario, ctx: &Context) -> Result<Table, CliError> {
    match &s.sweep {
        Some(sw) => sweep(&s.name, &s.config, &sw.axis, &sw.values, ctx),
        None => run_config(&s.name, &s.config, ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn col(t: &Table, name: &str) -> Vec<f64> {
        let i = t.column(name).unwrap();
        t.rows
            .iter()
            .map(|r| match r[i] {
                Cell::Num(x) => x,
                Cell::Int(k) => k as f64,
                Cell::Text(_) => f64::NAN,
            })
            .collect()
    }

    #[test]
    fn defaults_are_complete_documents() {
        for name in SCENARIOS {
            let v = normalize(name, &json!({})).unwrap();
            assert!(v.is_object(), "{name}");
        }
        assert!(normalize("ab-sweep", &json!({"etta": 0.1})).is_err());
        assert!(normalize("nope", &json!({})).is_err());
    }

    #[test]
    fn conical_sign_flips_at_pi() {
        let t = run_conical(&ConicalConfig::default()).unwrap();
        let (phi, g) = (col(&t, "phi"), col(&t, "gamma_wrapped"));
        for (p, g) in phi.iter().zip(&g) {
            let expect = if *p < PI { 0.0 } else { PI };
            assert!(circular_distance(*g, expect) < 1e-9, "Φ={p} γ={g}");
        }
    }

    #[test]
    fn ab_endpoints() {
        let cfg = AbSweepConfig { steps: 41, nodes: 512, ..Default::default() };
        let u = col(&run_ab(&cfg).unwrap(), "gamma_unwrapped");
        assert!(u[0].abs() < 1e-12);
        assert!((u[u.len() - 1] - 2.0 * PI * cfg.eta).abs() < 1e-9);
    }

    #[test]
    fn sweep_keeps_order_and_rejects_unknown_axes() {
        let ctx = Context::default();
        let vals = [json!(0.5), json!(0.0), json!(0.3)];
        let cfg = json!({"steps": 9, "nodes": 256});
        let t = sweep("ab-sweep", &cfg, "eta", &vals, &ctx).unwrap();
        assert_eq!(t.columns[0], "eta");
        assert_eq!(t.rows.len(), 3 * 10);
        let eta = col(&t, "eta");
        assert_eq!((eta[0], eta[10], eta[20]), (0.5, 0.0, 0.3));

        let empty = sweep("ab-sweep", &cfg, "eta", &[], &ctx).unwrap();
        assert!(empty.rows.is_empty());
        assert_eq!(empty.columns.len(), 1 + AB_COLUMNS.len());

        assert!(matches!(sweep("ab-sweep", &cfg, "zeta", &vals, &ctx), Err(CliError::Schema(_))));
    }

    #[test]
    fn closure_default_is_the_octant() {
        let t = run_closure(&ClosureConfig::default(), &Context::default()).unwrap();
        assert!((col(&t, "omega_gc")[0] - PI / 2.0).abs() < 1e-6);
        assert!(circular_distance(col(&t, "phase_plus")[0], -PI / 4.0) < 1e-6);
    }

    #[test]
    fn shots_are_seeded() {
        let cfg = SpinExperimentConfig { t: 20.0, shots: Some(1000), ..Default::default() };
        let run = |seed| col(&run_spin(&cfg, &Context { seed, ..Default::default() }).unwrap(), "p_z_measured")[0];
        assert_eq!(run(7), run(7));
        let exact = col(&run_spin(&cfg, &Context::default()).unwrap(), "p_z_oracle")[0];
        // five binomial standard deviations
        assert!((run(7) - exact).abs() < 5.0 * 2.0 / (1000f64).sqrt() / 2.0);
    }
}
