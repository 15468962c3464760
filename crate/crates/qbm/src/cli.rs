//! Command-line front end: `coeffs`, `decoherence`, `wigner` and `check`.
//!
//! Configuration comes from an optional `--config` file (flat `key = value`
//! lines, or JSON such as a previous run's `.meta.json` sidecar) with flags
//! taking precedence. Every file output gets a `<out>.meta.json` sidecar
//! holding the full configuration, so a run can be replayed from it.

use crate::bath::{BathModel, Temperature};
use crate::catstates::{
    decoherence_exponent_s, decoherence_time, decoherence_time_projected, evolve_projected_cat, evolve_two_translation,
    principal_exponent, purity_entropy, wigner_grid, GridSpec, ProjectedCatState, TwoTranslationState,
    WignerDecomposition,
};
use crate::coefficients::{sample_grid, BathStack};
use crate::error::{QbmError, Result};
use crate::oracle::{run_suite, OracleReport, SuiteOptions};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;
pub const EXIT_ORACLE: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "qbm", version, about = "Exact QBM master-equation coefficients, decoherence and Wigner functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate ω², γ, D₁, D₂, C̃₁, C̃₂ on a time grid.
    Coeffs(RunArgs),
    /// Tabulate the decoherence exponent A(t)/L₀².
    Decoherence(RunArgs),
    /// Evaluate the Wigner function on a phase-space grid at one time.
    Wigner(RunArgs),
    /// Run the oracle suite.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StateKind {
    TwoTranslation,
    ProjectedCat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// Flat `key = value` file or JSON (a `.meta.json` sidecar works).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub gamma0: Option<f64>,
    #[arg(long)]
    pub wc: Option<f64>,
    #[arg(long, conflicts_with = "zero_temperature")]
    pub beta: Option<f64>,
    #[arg(long)]
    pub zero_temperature: bool,
    #[arg(long)]
    pub tmax: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Log-spaced time grid `TMIN:POINTS` up to --tmax (t = 0 is prepended).
    #[arg(long)]
    pub log_grid: Option<String>,
    #[arg(long, value_enum)]
    pub state: Option<StateKind>,
    #[arg(long = "L0")]
    pub l0: Option<f64>,
    #[arg(long = "P0")]
    pub p0: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Time at which `wigner` evaluates the state.
    #[arg(long)]
    pub t: Option<f64>,
    /// `N`, `NR,NP` (auto-covering) or `RMIN:RMAX:NR,PMIN:PMAX:NP`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Shorthand for `--format json` (for `check`: JSON report).
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Default, Clone)]
pub struct CheckArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Perturb the main-path side of the named check (negative control).
    #[arg(long = "inject-fault")]
    pub inject_fault: Vec<String>,
    /// Run only the named checks.
    #[arg(long)]
    pub only: Vec<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Multiplies every oracle tolerance.
    #[arg(long)]
    pub tolerance_scale: Option<f64>,
}

/// Complete, explicit run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub omega0: f64,
    pub gamma0: f64,
    pub wc: f64,
    /// Inverse temperature; `null` means zero temperature.
    pub beta: Option<f64>,
    #[serde(alias = "tmax")]
    pub t_max: f64,
    pub dt: f64,
    /// Log grid start; linear grid when `null`.
    pub t_min: Option<f64>,
    pub points: Option<usize>,
    pub state: StateKind,
    #[serde(rename = "L0")]
    pub l0: f64,
    #[serde(rename = "P0")]
    pub p0: f64,
    pub delta: f64,
    pub t: f64,
    pub grid: String,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub tolerance_scale: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            omega0: 1.0,
            gamma0: 0.01,
            wc: 100.0,
            beta: None,
            t_max: 10.0,
            dt: 0.01,
            t_min: None,
            points: None,
            state: StateKind::TwoTranslation,
            l0: 5.0,
            p0: 0.0,
            delta: 1.0,
            t: 0.0,
            grid: "201".into(),
            format: Format::Csv,
            out: None,
            tolerance_scale: 1.0,
            seed: SuiteOptions::default().seed,
        }
    }
}

fn config_err(msg: impl Into<String>) -> QbmError {
    QbmError::Config(msg.into())
}

/// Parses a flat `key = value` file into JSON values.
fn parse_flat(text: &str) -> Result<Map<String, Value>> {
    let mut map = Map::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| config_err(format!("config line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim().trim_matches('"'));
        let value = match v {
            "null" | "none" => Value::Null,
            "zero" if k == "beta" => Value::Null,
            "true" => Value::Bool(true),
            "false" => Value::Bool(false),
            _ => {
                if let Ok(n) = v.parse::<u64>() {
                    if k == "grid" {
                        Value::String(v.into())
                    } else {
                        json!(n)
                    }
                } else if let Some(x) = v.parse::<f64>().ok().filter(|x| x.is_finite()) {
                    json!(x)
                } else {
                    Value::String(v.into())
                }
            }
        };
        map.insert(k.to_string(), value);
    }
    Ok(map)
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
        let map = if text.trim_start().starts_with('{') {
            let v: Value = serde_json::from_str(&text).map_err(|e| config_err(format!("config JSON: {e}")))?;
            match v.get("config") {
                Some(Value::Object(m)) => m.clone(),
                _ => v.as_object().cloned().ok_or_else(|| config_err("config JSON must be an object"))?,
            }
        } else {
            parse_flat(&text)?
        };
        serde_json::from_value(Value::Object(map)).map_err(|e| config_err(format!("config: {e}")))
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(args: &RunArgs) -> Result<Self> {
        let mut c = match &args.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        macro_rules! over {
            ($field:ident, $arg:ident) => {
                if let Some(v) = args.$arg.clone() {
                    c.$field = v;
                }
            };
        }
        over!(omega0, omega0);
        over!(gamma0, gamma0);
        over!(wc, wc);
        over!(t_max, tmax);
        over!(dt, dt);
        over!(state, state);
        over!(l0, l0);
        over!(p0, p0);
        over!(delta, delta);
        over!(t, t);
        over!(grid, grid);
        over!(format, format);
        if let Some(b) = args.beta {
            c.beta = Some(b);
        }
        if args.zero_temperature {
            c.beta = None;
        }
        if let Some(spec) = &args.log_grid {
            let (a, n) = spec.split_once(':').ok_or_else(|| config_err("--log-grid expects TMIN:POINTS"))?;
            c.t_min = Some(a.trim().parse().map_err(|_| config_err("--log-grid: bad TMIN"))?);
            c.points = Some(n.trim().parse().map_err(|_| config_err("--log-grid: bad POINTS"))?);
        }
        if args.json {
            c.format = Format::Json;
        }
        if args.out.is_some() {
            c.out = args.out.clone();
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.model()?;
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(config_err(format!("{name} must be positive, got {x}")))
            }
        };
        positive("tmax", self.t_max)?;
        positive("dt", self.dt)?;
        positive("delta", self.delta)?;
        positive("tolerance_scale", self.tolerance_scale)?;
        if !(self.t >= 0.0) {
            return Err(config_err(format!("t must be >= 0, got {}", self.t)));
        }
        if !self.l0.is_finite() || !self.p0.is_finite() {
            return Err(config_err("L0 and P0 must be finite"));
        }
        match (self.t_min, self.points) {
            (None, None) => {
                if self.t_max / self.dt > 1e7 {
                    return Err(config_err("time grid has more than 1e7 points"));
                }
            }
            (Some(a), Some(n)) => {
                if !(a > 0.0 && a < self.t_max) || n < 2 {
                    return Err(config_err("log grid needs 0 < tmin < tmax and at least 2 points"));
                }
            }
            _ => return Err(config_err("log grid needs both t_min and points")),
        }
        Ok(())
    }

    pub fn model(&self) -> Result<BathModel> {
        let temperature = match self.beta {
            None => Temperature::Zero,
            Some(b) => Temperature::Beta(b),
        };
        BathModel::new(self.omega0, self.gamma0, self.wc, temperature)
    }

    /// Monotone time grid starting at 0.
    pub fn time_grid(&self) -> Vec<f64> {
        match (self.t_min, self.points) {
            (Some(a), Some(n)) => {
                let ratio = (self.t_max / a).ln() / (n - 1) as f64;
                std::iter::once(0.0).chain((0..n).map(|k| a * (ratio * k as f64).exp())).collect()
            }
            _ => {
                let n = (self.t_max / self.dt * (1.0 + 1e-12)).floor() as usize;
                (0..=n).map(|k| k as f64 * self.dt).collect()
            }
        }
    }

    fn projected(&self) -> Result<ProjectedCatState> {
        ProjectedCatState::new(self.l0, self.p0, self.delta)
    }
}

/// Shortest round-trip decimal form.
fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x}")
}

fn csv(header: &str, rows: &[Vec<f64>]) -> String {
    let mut s = String::with_capacity(rows.len() * 64);
    s.push_str(header);
    s.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|&x| num(x)).collect();
        s.push_str(&line.join(","));
        s.push('\n');
    }
    s
}

fn json_rows(header: &str, rows: &[Vec<f64>]) -> String {
    let keys: Vec<&str> = header.split(',').collect();
    let arr: Vec<Value> = rows
        .iter()
        .map(|r| Value::Object(keys.iter().zip(r).map(|(k, v)| (k.to_string(), json!(v))).collect()))
        .collect();
    let mut s = serde_json::to_string_pretty(&arr).expect("rows serialize");
    s.push('\n');
    s
}

fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes the data (or prints it) and, for file outputs, the metadata sidecar.
fn emit(cfg: &RunConfig, command: &str, data: &str, results: Value) -> Result<()> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, data)?;
            let meta = json!({ "command": command, "config": cfg, "results": results });
            let mut text = serde_json::to_string_pretty(&meta).expect("metadata serializes");
            text.push('\n');
            std::fs::write(sidecar_path(path, ".meta.json"), text)?;
        }
        None => print!("{data}"),
    }
    Ok(())
}

pub const COEFF_HEADER: &str = "t,omega_sq,gamma,D1,D2,C1_tilde,C2_tilde";

pub fn cmd_coeffs(cfg: &RunConfig) -> Result<()> {
    let stack = BathStack::new(cfg.model()?)?;
    let samples = sample_grid(&stack, &cfg.time_grid())?;
    let rows: Vec<Vec<f64>> =
        samples.iter().map(|s| vec![s.t, s.omega_sq, s.gamma, s.d1, s.d2, s.c1_tilde, s.c2_tilde]).collect();
    let singular: Vec<f64> = samples.iter().filter(|s| s.singular).map(|s| s.t).collect();
    let data = match cfg.format {
        Format::Csv => csv(COEFF_HEADER, &rows),
        Format::Json => json_rows(COEFF_HEADER, &rows),
    };
    let eq = &stack.eq;
    emit(cfg, "coeffs", &data, json!({ "q2": eq.q2, "p2": eq.p2, "singular_times": singular }))
}

pub fn cmd_decoherence(cfg: &RunConfig) -> Result<()> {
    let stack = BathStack::new(cfg.model()?)?;
    let grid = cfg.time_grid();
    let l2 = cfg.l0 * cfg.l0;
    if l2 == 0.0 {
        return Err(config_err("L0 must be nonzero for decoherence"));
    }
    let projected = match cfg.state {
        StateKind::ProjectedCat => Some(cfg.projected()?),
        StateKind::TwoTranslation => None,
    };
    let rows: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&t| {
            let a = decoherence_exponent_s(&stack.eq, &stack.scalars(t)?.s, cfg.l0) / l2;
            let mut row = vec![t, a];
            if let Some(st) = &projected {
                row.push(principal_exponent(st, &stack, t)? / l2);
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let header = if projected.is_some() { "t,A_over_L0sq,A_ac_over_L0sq" } else { "t,A_over_L0sq" };
    let data = match cfg.format {
        Format::Csv => csv(header, &rows),
        Format::Json => json_rows(header, &rows),
    };
    let mut results = Map::new();
    results.insert("t_dec".into(), json!(decoherence_time(&stack, cfg.l0, cfg.t_max)?));
    if let Some(st) = &projected {
        results.insert("t_dec_projected".into(), json!(decoherence_time_projected(st, &stack, cfg.t_max)?));
    }
    emit(cfg, "decoherence", &data, Value::Object(results))
}

fn parse_grid(spec: &str, decomp: &WignerDecomposition) -> Result<GridSpec> {
    let bad = || config_err(format!("bad --grid '{spec}': use N, NR,NP or RMIN:RMAX:NR,PMIN:PMAX:NP"));
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let count = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 2).ok_or_else(bad);
    let axis = |s: &str| -> Result<(f64, f64, usize)> {
        let f: Vec<&str> = s.split(':').collect();
        if f.len() != 3 {
            return Err(bad());
        }
        Ok((f[0].parse().map_err(|_| bad())?, f[1].parse().map_err(|_| bad())?, count(f[2])?))
    };
    match parts.as_slice() {
        [n] if !n.contains(':') => Ok(GridSpec::covering(decomp, 8.0, count(n)?)),
        [a, b] if !a.contains(':') && !b.contains(':') => {
            let mut g = GridSpec::covering(decomp, 8.0, count(a)?);
            g.np = count(b)?;
            Ok(g)
        }
        [a, b] => {
            let (r_min, r_max, nr) = axis(a)?;
            let (p_min, p_max, np) = axis(b)?;
            Ok(GridSpec { r_min, r_max, nr, p_min, p_max, np })
        }
        _ => Err(bad()),
    }
}

pub fn cmd_wigner(cfg: &RunConfig) -> Result<()> {
    let stack = BathStack::new(cfg.model()?)?;
    let decomp = match cfg.state {
        StateKind::TwoTranslation => evolve_two_translation(&TwoTranslationState { l0: cfg.l0 }, &stack, cfg.t)?,
        StateKind::ProjectedCat => evolve_projected_cat(&cfg.projected()?, &stack, cfg.t)?,
    };
    let spec = parse_grid(&cfg.grid, &decomp)?;
    let grid = wigner_grid(&decomp, &spec)?;
    let (purity, entropy) = purity_entropy(&decomp.peaks[0].cov)?;
    let results = json!({
        "integral": decomp.integral(),
        "grid_integral": grid.integral(),
        "peak_purity": purity,
        "peak_entropy": entropy,
        "warnings": grid.warnings,
        "grid": spec,
    });
    let rs = spec.r_values();
    let ps = spec.p_values();
    let data = match cfg.format {
        Format::Csv => {
            let mut s = String::with_capacity(rs.len() * ps.len() * 48);
            s.push_str("r,p,W\n");
            for (i, &r) in rs.iter().enumerate() {
                for (j, &p) in ps.iter().enumerate() {
                    let _ = writeln!(s, "{},{},{}", num(r), num(p), num(grid.at(i, j)));
                }
            }
            s
        }
        Format::Json => {
            let mut s = serde_json::to_string(&json!({ "r": rs, "p": ps, "W": grid.values })).expect("grid serializes");
            s.push('\n');
            s
        }
    };
    if let Some(out) = &cfg.out {
        let mut text = serde_json::to_string_pretty(&decomp).expect("decomposition serializes");
        text.push('\n');
        std::fs::write(sidecar_path(out, ".decomposition.json"), text)?;
    }
    for w in &grid.warnings {
        eprintln!("warning: {w}");
    }
    emit(cfg, "wigner", &data, results)
}

fn report_table(reports: &[OracleReport]) -> String {
    let mut s = format!("{:<24} {:>6} {:>12} {:>12} {:>10}\n", "check", "status", "max_abs", "max_rel", "tolerance");
    for r in reports {
        let status = if r.pass { "PASS" } else { "FAIL" };
        let _ =
            write!(s, "{:<24} {:>6} {:>12.3e} {:>12.3e} {:>10.1e}", r.name, status, r.max_abs, r.max_rel, r.tolerance);
        if let Some(e) = r.metadata.get("error") {
            let _ = write!(s, "  ({e})");
        }
        s.push('\n');
    }
    s
}

/// Runs the oracle suite; returns whether every check passed.
pub fn cmd_check(cfg: &RunConfig, args: &CheckArgs) -> Result<bool> {
    let opts = SuiteOptions {
        faults: args.inject_fault.clone(),
        only: args.only.clone(),
        seed: args.seed.unwrap_or(cfg.seed),
        tolerance_scale: args.tolerance_scale.unwrap_or(cfg.tolerance_scale),
        ..SuiteOptions::default()
    };
    let reports = run_suite(&cfg.model()?, &opts)?;
    let all = reports.iter().all(|r| r.pass);
    let text = if cfg.format == Format::Json {
        let mut t = serde_json::to_string_pretty(&json!({ "config": cfg, "pass": all, "reports": reports }))
            .expect("report serializes");
        t.push('\n');
        t
    } else {
        report_table(&reports)
    };
    match &cfg.out {
        Some(p) => std::fs::write(p, &text)?,
        None => print!("{text}"),
    }
    Ok(all)
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = match &cli.command {
        Command::Coeffs(a) => RunConfig::resolve(a).and_then(|c| cmd_coeffs(&c)).map(|_| EXIT_OK),
        Command::Decoherence(a) => RunConfig::resolve(a).and_then(|c| cmd_decoherence(&c)).map(|_| EXIT_OK),
        Command::Wigner(a) => RunConfig::resolve(a).and_then(|c| cmd_wigner(&c)).map(|_| EXIT_OK),
        Command::Check(a) => {
            RunConfig::resolve(&a.run).and_then(|c| cmd_check(&c, a)).map(|ok| if ok { EXIT_OK } else { EXIT_ORACLE })
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_config_parses() {
        let m = parse_flat("omega0 = 1.5\n# comment\nbeta = zero\nstate = projected-cat\ngrid = 101\n").unwrap();
        let c: RunConfig = serde_json::from_value(Value::Object(m)).unwrap();
        assert_eq!(c.omega0, 1.5);
        assert_eq!(c.beta, None);
        assert_eq!(c.state, StateKind::ProjectedCat);
        assert_eq!(c.grid, "101");
    }

    #[test]
    fn linear_grid_hits_tmax() {
        let c = RunConfig { t_max: 1.0, dt: 0.1, ..RunConfig::default() };
        let g = c.time_grid();
        assert_eq!(g.len(), 11);
        assert!((g[10] - 1.0).abs() < 1e-15);
    }
}
