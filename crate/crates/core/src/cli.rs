//! Command-line front end: flags and `key = value` config files in, CSV out.
//!
//! Values given on the command line override the config file. Every float in
//! the output is written with 17 significant digits, so reruns of the same
//! configuration produce byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;

use crate::amplitudes::amplitude_set;
use crate::engines::{
    evolve_packet, gaussian_packet, sweep, Engine, KernelKind, KernelValue, PacketOptions, SampledWave,
    SweepAxis, SweepBase, SweepParameter, SweepSpec,
};
use crate::error::Error;
use crate::model::PotentialSpec;
use crate::oracle::{compare_thermal, standard_pairs, standard_potentials, GridSpec, STANDARD_BETA};
use crate::quadrature::QuadratureOptions;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_PARTIAL: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    Propagate,
    Density,
    Diffuse,
    Evolve,
    Sweep,
    OracleCompare,
    Amplitudes,
}

impl RunMode {
    fn parse(s: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(s, true).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Propagate,
    Density,
    Diffuse,
}

#[derive(Debug, Parser, Default)]
#[command(name = "rectkernel", version, allow_negative_numbers = true, about = "Kernels <x|exp(-aH)|x'> of a rectangular potential step/barrier/well")]
pub struct Cli {
    /// What to compute.
    #[arg(value_enum)]
    pub mode: Option<RunMode>,
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV destination (stdout when omitted).
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long = "U")]
    pub u: Option<f64>,
    #[arg(long = "Delta")]
    pub delta: Option<f64>,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long)]
    pub xp: Option<f64>,
    /// Real time t̃ (propagate, evolve).
    #[arg(long)]
    pub t: Option<f64>,
    /// Inverse temperature β̃ (density).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Diffusion time t̄ (diffuse).
    #[arg(long)]
    pub tbar: Option<f64>,

    /// Figure preset 1-6 (sweep).
    #[arg(long)]
    pub figure: Option<u32>,
    /// Kernel evaluated by a custom sweep.
    #[arg(long, value_enum)]
    pub kernel: Option<KernelArg>,
    /// Swept parameter: U, Delta, x, xp or time.
    #[arg(long)]
    pub parameter: Option<String>,
    #[arg(long)]
    pub lo: Option<f64>,
    #[arg(long)]
    pub hi: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,

    /// Comparison suite (oracle-compare); only `standard` exists.
    #[arg(long)]
    pub suite: Option<String>,
    /// Oracle box half-width.
    #[arg(long = "L")]
    pub box_half_width: Option<f64>,
    /// Oracle interior grid points.
    #[arg(long = "N")]
    pub grid_points: Option<usize>,

    /// Packet centre, width and mean wave number (evolve).
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub k0: Option<f64>,
    /// Energy (amplitudes); with --lo/--hi/--samples a log-free linear scan.
    #[arg(long = "E")]
    pub energy: Option<f64>,

    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub e_max_factor: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
}

/// A configuration error, naming the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error in `{}`: {}", self.field, self.message)
    }
}

fn config_error(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        message: message.into(),
    }
}

/// Parses a `key = value` file; `#` starts a comment.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(config_error(&format!("line {}", n + 1), "expected `key = value`"));
        };
        let key = k.trim();
        if key.is_empty() {
            return Err(config_error(&format!("line {}", n + 1), "empty key"));
        }
        map.insert(key.to_string(), v.trim().to_string());
    }
    Ok(map)
}

const KNOWN_KEYS: &[&str] = &[
    "mode", "output", "U", "Delta", "x", "xp", "t", "beta", "tbar", "figure", "kernel", "parameter", "lo", "hi",
    "samples", "suite", "L", "N", "x0", "sigma", "k0", "E", "rel_tol", "abs_tol", "epsilon", "levels",
    "e_max_factor", "max_subdivisions",
];

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: RunMode,
    pub output: Option<PathBuf>,
    pub values: BTreeMap<String, String>,
    pub opts: QuadratureOptions,
}

impl RunConfig {
    /// Merges the config file (if any) under the command-line flags.
    pub fn from_cli(cli: &Cli) -> Result<Self, ConfigError> {
        let mut values = match &cli.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| config_error("config", format!("cannot read {}: {e}", path.display())))?;
                parse_config_text(&text)?
            }
            None => BTreeMap::new(),
        };
        for key in values.keys() {
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(config_error(key, "unknown key"));
            }
        }
        let mut set = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                values.insert(k.to_string(), v);
            }
        };
        let f = |v: Option<f64>| v.map(|v| format!("{v:?}"));
        let u = |v: Option<usize>| v.map(|v| v.to_string());
        set("U", f(cli.u));
        set("Delta", f(cli.delta));
        set("x", f(cli.x));
        set("xp", f(cli.xp));
        set("t", f(cli.t));
        set("beta", f(cli.beta));
        set("tbar", f(cli.tbar));
        set("figure", cli.figure.map(|v| v.to_string()));
        set(
            "kernel",
            cli.kernel.map(|k| k.to_possible_value().unwrap().get_name().to_string()),
        );
        set("parameter", cli.parameter.clone());
        set("lo", f(cli.lo));
        set("hi", f(cli.hi));
        set("samples", u(cli.samples));
        set("suite", cli.suite.clone());
        set("L", f(cli.box_half_width));
        set("N", u(cli.grid_points));
        set("x0", f(cli.x0));
        set("sigma", f(cli.sigma));
        set("k0", f(cli.k0));
        set("E", f(cli.energy));
        set("rel_tol", f(cli.rel_tol));
        set("abs_tol", f(cli.abs_tol));
        set("epsilon", f(cli.epsilon));
        set("levels", u(cli.levels));
        set("e_max_factor", f(cli.e_max_factor));
        set("max_subdivisions", u(cli.max_subdivisions));
        set("output", cli.output.as_ref().map(|p| p.display().to_string()));

        let mode = match cli.mode {
            Some(m) => m,
            None => {
                let name = values.get("mode").ok_or_else(|| config_error("mode", "no mode given"))?;
                RunMode::parse(name).ok_or_else(|| config_error("mode", format!("unknown mode `{name}`")))?
            }
        };
        let output = values.get("output").map(PathBuf::from);
        let mut cfg = Self {
            mode,
            output,
            values,
            opts: QuadratureOptions::default(),
        };
        let d = QuadratureOptions::default();
        cfg.opts = QuadratureOptions {
            rel_tol: cfg.f64_or("rel_tol", d.rel_tol)?,
            abs_tol: cfg.f64_or("abs_tol", d.abs_tol)?,
            e_max_factor: cfg.f64_or("e_max_factor", d.e_max_factor)?,
            epsilon_reg: cfg.f64_or("epsilon", d.epsilon_reg)?,
            richardson_levels: cfg.usize_or("levels", d.richardson_levels)?,
            max_subdivisions: cfg.usize_or("max_subdivisions", d.max_subdivisions)?,
        };
        cfg.opts
            .validate()
            .map_err(|e| config_error("quadrature options", e.to_string()))?;
        Ok(cfg)
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.raw(key).ok_or_else(|| config_error(key, "required for this mode"))?;
        let x: f64 = v.parse().map_err(|_| config_error(key, format!("`{v}` is not a number")))?;
        if !x.is_finite() {
            return Err(config_error(key, "must be finite"));
        }
        Ok(x)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        if self.raw(key).is_some() {
            self.f64(key)
        } else {
            Ok(default)
        }
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.raw(key) {
            Some(v) => v
                .parse()
                .map_err(|_| config_error(key, format!("`{v}` is not a non-negative integer"))),
            None => Ok(default),
        }
    }

    fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.f64(key)?;
        if v <= 0.0 {
            return Err(config_error(key, "must be > 0"));
        }
        Ok(v)
    }

    fn potential(&self) -> Result<PotentialSpec, ConfigError> {
        let u = self.f64_or("U", 0.0)?;
        let delta = self.f64_or("Delta", 0.0)?;
        PotentialSpec::new(u, delta).map_err(|e| config_error("Delta", e.to_string()))
    }
}

/// Output of a run: the CSV text and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub csv: String,
    pub status: i32,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn clean(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

const KERNEL_HEADER: &str = "mode,U,Delta,x,xp,time,value_re,value_im,error_estimate,warnings,status";

#[allow(clippy::too_many_arguments)]
fn kernel_row(out: &mut String, mode: &str, u: f64, delta: f64, x: f64, xp: f64, time: f64, r: &Result<KernelValue, Error>) -> bool {
    let (re, im, err, warn, status) = match r {
        Ok(v) => (
            num(v.value.re),
            num(v.value.im),
            num(v.error_estimate),
            clean(&v.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(";")),
            "ok".to_string(),
        ),
        Err(e) => ("NaN".into(), "NaN".into(), "NaN".into(), String::new(), clean(&e.to_string())),
    };
    let _ = writeln!(
        out,
        "{mode},{},{},{},{},{},{re},{im},{err},{warn},{status}",
        num(u),
        num(delta),
        num(x),
        num(xp),
        num(time)
    );
    r.is_ok()
}

fn single_kernel(cfg: &RunConfig) -> Result<RunOutput, ConfigError> {
    let pot = cfg.potential()?;
    let x = cfg.f64("x")?;
    let xp = cfg.f64("xp")?;
    let (name, time_key) = match cfg.mode {
        RunMode::Propagate => ("propagate", "t"),
        RunMode::Density => ("density", "beta"),
        _ => ("diffuse", "tbar"),
    };
    let time = cfg.positive(time_key)?;
    let engine = Engine::new(pot, cfg.opts).map_err(|e| config_error("quadrature options", e.to_string()))?;
    let r = match cfg.mode {
        RunMode::Propagate => engine.propagator(x, xp, time),
        RunMode::Density => engine.density_matrix(x, xp, time),
        _ => engine.diffusion_kernel(x, xp, time),
    };
    if let Err(e @ (Error::BoundaryPoint(_) | Error::UnsupportedRegion { .. } | Error::InvalidParameter { .. })) = &r {
        return Err(config_error("x/xp", e.to_string()));
    }
    let mut csv = format!("{KERNEL_HEADER}\n");
    let ok = kernel_row(&mut csv, name, pot.u, pot.delta, x, xp, time, &r);
    Ok(RunOutput {
        csv,
        status: if ok { EXIT_OK } else { EXIT_PARTIAL },
    })
}

fn sweep_spec(cfg: &RunConfig) -> Result<SweepSpec, ConfigError> {
    if let Some(fig) = cfg.raw("figure") {
        let n: u32 = fig
            .parse()
            .map_err(|_| config_error("figure", "must be an integer 1-6"))?;
        return SweepSpec::figure(n).map_err(|e| config_error("figure", e.to_string()));
    }
    let kernel = match cfg.raw("kernel").unwrap_or("density") {
        "propagate" => KernelKind::Propagator,
        "density" => KernelKind::Density,
        "diffuse" => KernelKind::Diffusion,
        other => return Err(config_error("kernel", format!("`{other}` is not propagate|density|diffuse"))),
    };
    let time_key = match kernel {
        KernelKind::Propagator => "t",
        KernelKind::Density => "beta",
        KernelKind::Diffusion => "tbar",
    };
    let parameter = match cfg.raw("parameter").ok_or_else(|| config_error("parameter", "required for a custom sweep"))? {
        "U" => SweepParameter::U,
        "Delta" => SweepParameter::Delta,
        "x" => SweepParameter::X,
        "xp" => SweepParameter::Xp,
        "time" => SweepParameter::Time,
        other => return Err(config_error("parameter", format!("`{other}` is not U|Delta|x|xp|time"))),
    };
    let axis = SweepAxis::new(parameter, cfg.f64("lo")?, cfg.f64("hi")?, cfg.usize_or("samples", 100)?)
        .map_err(|e| config_error("lo/hi/samples", e.to_string()))?;
    let fixed = |key: &str| -> Result<f64, ConfigError> {
        if axis.parameter.name() == key || (key == time_key && axis.parameter == SweepParameter::Time) {
            cfg.f64_or(key, 0.0)
        } else {
            cfg.f64(key)
        }
    };
    Ok(SweepSpec {
        base: SweepBase {
            kernel,
            x: fixed("x")?,
            xp: fixed("xp")?,
            time: if parameter == SweepParameter::Time { cfg.f64_or(time_key, 1.0)? } else { cfg.positive(time_key)? },
            u: cfg.f64_or("U", 0.0)?,
            delta: cfg.f64_or("Delta", 0.0)?,
        },
        primary: axis,
        secondary: None,
    })
}

fn run_sweep(cfg: &RunConfig) -> Result<RunOutput, ConfigError> {
    let spec = sweep_spec(cfg)?;
    let rows = sweep(&spec, &cfg.opts).map_err(|e| config_error("sweep", e.to_string()))?;
    let name = match spec.base.kernel {
        KernelKind::Propagator => "propagate",
        KernelKind::Density => "density",
        KernelKind::Diffusion => "diffuse",
    };
    let mut csv = format!("{KERNEL_HEADER}\n");
    let mut all_ok = true;
    for row in &rows {
        let i = row.input;
        all_ok &= kernel_row(&mut csv, name, i.u, i.delta, i.x, i.xp, i.time, &row.result);
    }
    Ok(RunOutput {
        csv,
        status: if all_ok { EXIT_OK } else { EXIT_PARTIAL },
    })
}

fn run_evolve(cfg: &RunConfig) -> Result<RunOutput, ConfigError> {
    let pot = cfg.potential()?;
    let t = cfg.f64_or("t", 1.0)?;
    let x0 = cfg.f64_or("x0", -18.0)?;
    let sigma = cfg.f64_or("sigma", 1.5)?;
    let k0 = cfg.f64_or("k0", 5f64.sqrt())?;
    if sigma <= 0.0 {
        return Err(config_error("sigma", "must be > 0"));
    }
    let lo = cfg.f64_or("lo", x0 - 12.0 * sigma - 2.0 * k0.abs() * t)?;
    let hi = cfg.f64_or("hi", 1.0 + 2.0 * (k0.abs() + 4.0 / sigma) * t + 12.0 * sigma)?;
    let samples = cfg.usize_or("samples", 2000)?;
    if lo >= hi || samples < 2 {
        return Err(config_error("lo/hi/samples", "need lo < hi and samples >= 2"));
    }
    // Source grid: up to just left of the step.
    let src_dx = (sigma / 50.0).min(0.02);
    let src_lo = x0 - 12.0 * sigma;
    let n_src = ((-src_dx - src_lo) / src_dx).floor() as usize + 1;
    let psi0 = SampledWave::from_fn(src_lo, src_dx, n_src, |x| gaussian_packet(x, x0, sigma, k0))
        .map_err(|e| config_error("sigma", e.to_string()))?;
    let step = (hi - lo) / (samples - 1) as f64;
    let xs: Vec<f64> = (0..samples)
        .map(|j| lo + step * j as f64)
        .map(|x| if x.abs() < 1e-9 || (x - 1.0).abs() < 1e-9 { x + 1e-6 } else { x })
        .collect();
    let out = evolve_packet(&psi0, t, &xs, &pot, &PacketOptions::default()).map_err(|e| config_error("x0", e.to_string()))?;
    let mut csv = String::from("x,psi_re,psi_im,density,error_estimate\n");
    for (x, p) in out.x.iter().zip(&out.psi) {
        let _ = writeln!(csv, "{},{},{},{},{}", num(*x), num(p.re), num(p.im), num(p.norm_sqr()), num(out.error_estimate));
    }
    Ok(RunOutput { csv, status: EXIT_OK })
}

fn run_amplitudes(cfg: &RunConfig) -> Result<RunOutput, ConfigError> {
    let pot = cfg.potential()?;
    let energies: Vec<f64> = match cfg.raw("E") {
        Some(_) => vec![cfg.f64("E")?],
        None => {
            let axis = SweepAxis::new(SweepParameter::U, cfg.f64("lo")?, cfg.f64("hi")?, cfg.usize_or("samples", 100)?)
                .map_err(|e| config_error("lo/hi/samples", e.to_string()))?;
            (0..axis.samples).map(|i| axis.value(i)).collect()
        }
    };
    let mut csv = String::from("E,t_re,t_im,r_re,r_im,tp_re,tp_im,rp_re,rp_im,abs_t2,abs_r2,status\n");
    let mut all_ok = true;
    for e in energies {
        let c = |z: Complex64| format!("{},{}", num(z.re), num(z.im));
        match amplitude_set(e, &pot) {
            Ok(a) => {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{},{},ok",
                    num(e),
                    c(a.t),
                    c(a.r),
                    c(a.t_prime),
                    c(a.r_prime),
                    num(a.t.norm_sqr()),
                    num(a.r.norm_sqr())
                );
            }
            Err(err) => {
                all_ok = false;
                let _ = writeln!(csv, "{},NaN,NaN,NaN,NaN,NaN,NaN,NaN,NaN,NaN,NaN,{}", num(e), clean(&err.to_string()));
            }
        }
    }
    Ok(RunOutput {
        csv,
        status: if all_ok { EXIT_OK } else { EXIT_PARTIAL },
    })
}

fn run_oracle_compare(cfg: &RunConfig) -> Result<RunOutput, ConfigError> {
    match cfg.raw("suite").unwrap_or("standard") {
        "standard" => {}
        other => return Err(config_error("suite", format!("unknown suite `{other}` (only `standard`)"))),
    }
    let d = GridSpec::default();
    let grid = GridSpec::new(cfg.f64_or("L", d.half_width)?, cfg.usize_or("N", d.interior)?)
        .map_err(|e| config_error("L/N", e.to_string()))?;
    let mut csv = String::from(
        "U,Delta,x,xp,beta,engine,oracle_fine,oracle_coarse,oracle_extrapolated,oracle_bound,abs_diff,rel_to_max,pass\n",
    );
    let mut all_ok = true;
    for (u, delta) in standard_potentials() {
        let pot = PotentialSpec::new(u, delta).map_err(|e| config_error("U", e.to_string()))?;
        let rows = match compare_thermal(&pot, STANDARD_BETA, &standard_pairs(), &grid, &cfg.opts) {
            Ok(rows) => rows,
            Err(e) => {
                all_ok = false;
                let _ = writeln!(csv, "{},{},NaN,NaN,{},NaN,NaN,NaN,NaN,NaN,NaN,NaN,{}", num(u), num(delta), num(STANDARD_BETA), clean(&e.to_string()));
                continue;
            }
        };
        let max_oracle = rows.iter().map(|r| r.oracle.extrapolated.abs()).fold(0.0, f64::max);
        for r in &rows {
            let (engine, diff) = match (&r.engine, r.difference()) {
                (Ok(v), Some(d)) => (num(v.real()), d),
                _ => ("NaN".to_string(), f64::NAN),
            };
            let rel = diff / max_oracle;
            let pass = rel <= 1e-3;
            all_ok &= pass;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{engine},{},{},{},{},{},{},{}",
                num(u),
                num(delta),
                num(r.x),
                num(r.xp),
                num(STANDARD_BETA),
                num(r.oracle.fine),
                num(r.oracle.coarse),
                num(r.oracle.extrapolated),
                num(r.bound),
                num(diff),
                num(rel),
                if pass { "pass" } else { "fail" }
            );
        }
    }
    Ok(RunOutput {
        csv,
        status: if all_ok { EXIT_OK } else { EXIT_PARTIAL },
    })
}

/// Executes a resolved configuration.
pub fn execute(cfg: &RunConfig) -> Result<RunOutput, ConfigError> {
    match cfg.mode {
        RunMode::Propagate | RunMode::Density | RunMode::Diffuse => single_kernel(cfg),
        RunMode::Sweep => run_sweep(cfg),
        RunMode::Evolve => run_evolve(cfg),
        RunMode::Amplitudes => run_amplitudes(cfg),
        RunMode::OracleCompare => run_oracle_compare(cfg),
    }
}

/// Full command-line run: parse, execute, write. Returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| execute(&cfg).map(|out| (cfg, out)));
    match result {
        Ok((cfg, out)) => {
            match &cfg.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &out.csv) {
                        eprintln!("{}", config_error("output", format!("cannot write {}: {e}", path.display())));
                        return EXIT_CONFIG;
                    }
                }
                None => {
                    use std::io::Write;
                    // A closed pipe (e.g. `| head`) is not an error for us.
                    let _ = std::io::stdout().lock().write_all(out.csv.as_bytes());
                }
            }
            out.status
        }
        Err(e) => {
            eprintln!("{e}");
            EXIT_CONFIG
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> Result<RunConfig, ConfigError> {
        let mut v = vec!["rectkernel"];
        v.extend_from_slice(args);
        RunConfig::from_cli(&Cli::try_parse_from(v).unwrap())
    }

    #[test]
    fn config_text_parsing() {
        let m = parse_config_text("# comment\nU = -30 # well\n\n  beta=10\n").unwrap();
        assert_eq!(m.get("U").unwrap(), "-30");
        assert_eq!(m.get("beta").unwrap(), "10");
        let e = parse_config_text("U -30").unwrap_err();
        assert!(e.field.contains("line 1"));
    }

    #[test]
    fn density_single_row() {
        let c = cfg(&["density", "--U", "-30", "--Delta", "0", "--beta", "10", "--x", "-2", "--xp", "-2"]).unwrap();
        let out = execute(&c).unwrap();
        assert_eq!(out.status, EXIT_OK);
        let lines: Vec<&str> = out.csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], KERNEL_HEADER);
        assert!(lines[1].starts_with("density,-3.0000000000000000e1,"));
    }

    #[test]
    fn missing_and_bad_fields_named() {
        let e = execute(&cfg(&["density", "--x", "-2", "--xp", "-2"]).unwrap()).unwrap_err();
        assert_eq!(e.field, "beta");
        let e = execute(&cfg(&["density", "--x", "0", "--xp", "-2", "--beta", "1"]).unwrap()).unwrap_err();
        assert_eq!(e.field, "x/xp");
        let e = cfg(&["density", "--rel-tol", "-1"]).unwrap_err();
        assert_eq!(e.field, "quadrature options");
        let e = cfg(&[]).unwrap_err();
        assert_eq!(e.field, "mode");
    }

    #[test]
    fn float_format_has_17_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.0), "-2.0000000000000000e0");
    }
}
