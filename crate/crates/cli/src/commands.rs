use std::fs;
use std::path::Path;

use anyhow::{anyhow, Context};
use karamata_core::rates::{classify_rate, PhiSpec, RateBoundFn};
use karamata_core::regvar::{estimate_rv0_index, geometric_grid, DEFAULT_LAMBDAS};
use karamata_core::scenario::{
    build_setup, catalog_function, emit, parse_call, run_scenario_full, table_function,
    EmitFormat, RateReport, ScenarioConfig,
};
use karamata_core::solver::StopReason;
use karamata_core::{Point, SetDescriptor};
use serde_json::json;

/// Exit code 2 for bad input, 3 for numerical failures.
pub enum Failure {
    Config(anyhow::Error),
    Numeric(anyhow::Error),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Config(e) | Failure::Numeric(e) => e,
        }
    }
}

type CmdResult = Result<(), Failure>;

fn config<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Config(e.into())
}

fn numeric<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Numeric(e.into())
}

fn summary(report: &RateReport) -> serde_json::Value {
    json!({
        "scenario": report.scenario,
        "rows": report.rows.len(),
        "stop": format!("{:?}", report.stop),
        "regime": report.regime.tag(),
        "bound_kind": format!("{:?}", report.bound_kind),
        "crossover_k": report.crossover_k,
        "d0": report.d0,
        "last": report.rows.last().map(|r| json!({"k": r.k, "dist": r.dist, "residual": r.residual, "bound": r.bound})),
        "fits": report.fits,
    })
}

fn run_config(cfg: &ScenarioConfig, out: Option<&Path>) -> CmdResult {
    let id = cfg.validate().map_err(config)?;
    build_setup(id, &Point::new(cfg.x0(&id)))
        .with_context(|| format!("building {}", id.label()))
        .map_err(config)?;
    let run = run_scenario_full(cfg)
        .with_context(|| format!("running {}", id.label()))
        .map_err(numeric)?;
    if let Some(dir) = out {
        for format in [EmitFormat::Csv, EmitFormat::Plotdata] {
            emit(&run.report, format, dir)
                .with_context(|| format!("writing to {}", dir.display()))
                .map_err(numeric)?;
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&summary(&run.report)).expect("summary serializes")
    );
    if let StopReason::NumericFailure(msg) = &run.report.stop {
        return Err(numeric(anyhow!("iteration failed: {msg}")));
    }
    Ok(())
}

pub fn solve(path: &Path, out: Option<&Path>) -> CmdResult {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(config)?;
    let cfg: ScenarioConfig = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(config)?;
    run_config(&cfg, out)
}

pub fn bench(
    scenario: &str,
    params: &[String],
    out: &Path,
    seed: u64,
    max_iter: Option<u64>,
) -> CmdResult {
    let mut cfg = ScenarioConfig::new(scenario);
    cfg.seed = seed;
    for p in params {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| config(anyhow!("parameter '{p}' is not KEY=VALUE")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| config(anyhow!("parameter '{p}' has a non-numeric value")))?;
        cfg.params.insert(k.trim().to_string(), v);
    }
    if let Some(m) = max_iter {
        let id = cfg.id().map_err(config)?;
        let mut stop = id.default_stop();
        stop.max_iter = m;
        cfg.stop = Some(stop);
    }
    run_config(&cfg, Some(out))
}

fn parse_set(text: &str) -> anyhow::Result<SetDescriptor> {
    let text = text.trim();
    if text.starts_with('{') {
        return Ok(serde_json::from_str(text)?);
    }
    let (name, arg) = parse_call(text)?;
    let need = || arg.ok_or_else(|| anyhow!("'{name}' needs an argument"));
    Ok(match name {
        "exp_cone" => SetDescriptor::ExpCone,
        "exp_cone_face" => SetDescriptor::ExpConeFace,
        "gamma_epigraph" => SetDescriptor::GammaEpigraph,
        "dr_fix_ray" => SetDescriptor::DrFixRay,
        "x_axis" => SetDescriptor::x_axis(),
        "line" => SetDescriptor::line(need()?),
        "power_epigraph" => SetDescriptor::PowerEpigraph { p: need()? },
        "log_epigraph" => SetDescriptor::LogEpigraph { gamma: need()? },
        "origin" => SetDescriptor::origin(need()? as usize),
        _ => return Err(anyhow!("unknown set '{text}'")),
    })
}

pub fn project(set: &str, point: &str) -> CmdResult {
    let set = parse_set(set).map_err(config)?;
    set.validate().map_err(config)?;
    let coords: Vec<f64> = point
        .split(',')
        .map(|c| c.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| config(anyhow!("point must be comma-separated numbers")))?;
    let p = set.project(&Point::new(coords)).map_err(|e| match e {
        karamata_core::Error::Parameter(_) => config(e),
        _ => numeric(e),
    })?;
    let line: Vec<String> = p.coords().iter().map(|v| v.to_string()).collect();
    println!("{}", line.join(","));
    Ok(())
}

fn read_table(path: &Path) -> anyhow::Result<Vec<(f64, f64)>> {
    let text = fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split(',').map(str::trim);
        let (t, v) = (it.next(), it.next());
        match (t.map(str::parse::<f64>), v.map(str::parse::<f64>)) {
            (Some(Ok(t)), Some(Ok(v))) => rows.push((t, v)),
            // a header line
            _ if i == 0 => {}
            _ => return Err(anyhow!("line {}: expected 't,f(t)'", i + 1)),
        }
    }
    Ok(rows)
}

pub fn rv_index(function: &str) -> CmdResult {
    let path = Path::new(function);
    let f = if path.is_file() {
        let rows = read_table(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(config)?;
        table_function(rows).map_err(config)?
    } else {
        catalog_function(function).map_err(config)?
    };
    let lam_max = DEFAULT_LAMBDAS.iter().cloned().fold(1.0, f64::max);
    let grid: Vec<f64> = geometric_grid(f.domain_hi / lam_max)
        .into_iter()
        .filter(|&t| t > f.domain_lo)
        .collect();
    let idx = estimate_rv0_index(&f, &DEFAULT_LAMBDAS, &grid).map_err(numeric)?;
    println!(
        "{}",
        json!({
            "index": if idx.value.is_finite() { json!(idx.value) } else { json!(idx.value.to_string()) },
            "confidence": if idx.confidence.is_finite() { json!(idx.confidence) } else { json!(null) },
            "truncated": idx.truncated,
        })
    );
    Ok(())
}

pub fn predict(
    psi: &str,
    alpha: f64,
    nu: f64,
    s: u64,
    d0: f64,
    k_max: u64,
    points: usize,
) -> CmdResult {
    let f = catalog_function(psi).map_err(config)?;
    if !(d0 > 0.0) || k_max == 0 || points < 2 {
        return Err(config(anyhow!("need d0 > 0, k_max >= 1 and points >= 2")));
    }
    let index = f.index.ok_or_else(|| config(anyhow!("catalog entry without index")))?;
    // a regularity function is at least linear near zero, so index one
    // always comes with the linear floor
    let regime = classify_rate(index, true).map_err(config)?;
    let spec = PhiSpec::new(f, alpha, nu, s, 2.0 * d0 * d0);
    spec.factor().map_err(config)?;
    let rb = RateBoundFn::new(&spec, d0 * d0).map_err(numeric)?;
    eprintln!("regime: {}", regime.tag());
    println!("k,bound");
    let ratio = (k_max as f64).ln() / (points - 1) as f64;
    let mut last = 0;
    for j in 0..points {
        let k = ((ratio * j as f64).exp().round() as u64).clamp(1, k_max);
        if j > 0 && k == last {
            continue;
        }
        last = k;
        match rb.bound(k) {
            Ok(b) => println!("{k},{b}"),
            Err(karamata_core::Error::Underflow { .. }) => {
                eprintln!("bound underflows from k = {k}");
                break;
            }
            Err(e) => return Err(numeric(e)),
        }
    }
    Ok(())
}
