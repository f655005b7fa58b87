//! Command-line front end. Each `cmd_*` function turns a [`RunConfig`] into
//! a data payload (CSV or JSON) and a human-readable summary.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::audit::threshold_audit;
use crate::band::{BandModel, ModelKind};
use crate::config::{Format, RunConfig};
use crate::error::{Error, Result};
use crate::io::{fmt_f64, write_series_csv, write_series_json};
use crate::oracle::{bound_states_of, build_discrete_model, Scheme};
use crate::poles::{
    real_poles_standard_sheet, resonance_poles, semicircle_onsets, semicircle_poles, Pole, PoleClass, SemicircleOnsets,
};
use crate::self_energy::{sigma_derivative_side, sigma_on_sheet_side, SheetPoint};
use crate::survival::{
    cut_series, fgr_relative_deviation, fgr_series, fgr_time, fgr_valid_until, resonance_expansion, spectral_density,
    survival_amplitude, tail_exponent, uniform_times, CutSpectrum, Method, SurvivalSeries,
};

#[derive(Debug, Parser)]
#[command(name = "greencut", version, about = "Survival amplitude of a level coupled to a continuum")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Survival amplitude g(t) and probability p(t)
    Survival(RunArgs),
    /// Pole report, optionally a Δ₀ sweep or the threshold audit
    Poles(RunArgs),
    /// Self-energy and its derivative at one point
    Sigma(RunArgs),
    /// Spectral density on an energy grid
    Spectral(RunArgs),
    /// Several methods on a common time grid
    Compare(RunArgs),
    /// Exact evolution of the discretized model
    Oracle(RunArgs),
    /// Long-time envelope exponent of the band contribution
    Tail(RunArgs),
}

#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// key = value file applied before the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// semicircle | flat | power-edge | tabulated
    #[arg(long)]
    pub model: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<f64>,
    /// CSV with header `E,delta` for the tabulated model
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub band_bottom: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub band_top: Option<f64>,
    #[arg(long)]
    pub beta_bottom: Option<f64>,
    #[arg(long)]
    pub beta_top: Option<f64>,
    /// Comma-separated: cut, resonance, oracle, fgr
    #[arg(long)]
    pub methods: Option<String>,
    /// End of the time grid in golden-rule times τ
    #[arg(long)]
    pub tmax_tau: Option<f64>,
    /// End of the time grid in absolute units (overrides --tmax-tau)
    #[arg(long)]
    pub tmax_abs: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    #[arg(long)]
    pub splitting: Option<usize>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub oracle_n: Option<usize>,
    /// chain | uniform
    #[arg(long)]
    pub scheme: Option<String>,
    /// Δ₀ sweep as from:to:count
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub w_im: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sheet: Option<i32>,
    /// above | below | none
    #[arg(long)]
    pub side: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub e_max: Option<f64>,
    /// Time window lo:hi in absolute units
    #[arg(long)]
    pub window: Option<String>,
    /// Include the oracle-checked bound-state threshold audit (poles)
    #[arg(long)]
    pub audit: bool,
}

impl RunArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let mut set = |k: &str, v: Option<String>| -> Result<()> {
            match v {
                Some(v) => cfg.set(k, &v),
                None => Ok(()),
            }
        };
        let f = |x: Option<f64>| x.map(|v| format!("{v:?}"));
        let u = |x: Option<usize>| x.map(|v| v.to_string());
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        set("model", self.model.clone())?;
        set("delta0", f(self.delta0))?;
        set("eps", f(self.eps))?;
        set("table", path(&self.table))?;
        set("band_bottom", f(self.band_bottom))?;
        set("band_top", f(self.band_top))?;
        set("beta_bottom", f(self.beta_bottom))?;
        set("beta_top", f(self.beta_top))?;
        set("methods", self.methods.clone())?;
        set("tmax_tau", f(self.tmax_tau))?;
        set("tmax_abs", f(self.tmax_abs))?;
        set("points", u(self.points))?;
        set("abs_tol", f(self.abs_tol))?;
        set("rel_tol", f(self.rel_tol))?;
        set("max_subdivisions", u(self.max_subdivisions))?;
        set("splitting", u(self.splitting))?;
        set("output", path(&self.output))?;
        set("format", self.format.clone())?;
        set("oracle_n", u(self.oracle_n))?;
        set("scheme", self.scheme.clone())?;
        set("sweep", self.sweep.clone())?;
        set("w_re", f(self.w_re))?;
        set("w_im", f(self.w_im))?;
        set("sheet", self.sheet.map(|s| s.to_string()))?;
        set("side", self.side.clone())?;
        set("e_min", f(self.e_min))?;
        set("e_max", f(self.e_max))?;
        set("window", self.window.clone())?;
        Ok(cfg)
    }
}

/// Result of a command: the file payload and a short report.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub data: Vec<u8>,
    pub summary: String,
}

fn series_payload(cfg: &RunConfig, model: &BandModel, series: &SurvivalSeries) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match cfg.format {
        Format::Csv => write_series_csv(series, &mut buf)?,
        Format::Json => write_series_json(model, cfg.eps, series, &mut buf)?,
    }
    Ok(buf)
}

fn json_payload<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(value)?;
    buf.push(b'\n');
    Ok(buf)
}

fn time_grid(cfg: &RunConfig, model: &BandModel, skip_zero: bool) -> Result<Vec<f64>> {
    let t_max = cfg.t_max(model)?;
    if skip_zero {
        Ok((1..=cfg.points).map(|i| t_max * i as f64 / cfg.points as f64).collect())
    } else {
        Ok(uniform_times(t_max, cfg.points))
    }
}

fn run_method(cfg: &RunConfig, model: &BandModel, method: Method, times: &[f64]) -> Result<SurvivalSeries> {
    match method {
        Method::CutIntegral => survival_amplitude(model, cfg.eps, times, &cfg.quadrature),
        Method::CutOnly => cut_series(model, cfg.eps, times, &cfg.quadrature),
        Method::ResonanceExpansion => resonance_expansion(model, cfg.eps, times, &cfg.quadrature),
        Method::Fgr => fgr_series(model, cfg.eps, times),
        Method::Oracle => {
            let scheme = oracle_scheme(cfg, model);
            let dm = build_discrete_model(model, cfg.eps, cfg.oracle_n, scheme)?;
            Ok(crate::oracle::evolve_survival(&dm, times))
        }
    }
}

fn oracle_scheme(cfg: &RunConfig, model: &BandModel) -> Scheme {
    if model.kind() == ModelKind::Semicircle {
        cfg.scheme
    } else {
        Scheme::UniformLevels
    }
}

fn pole_line(p: &Pole) -> String {
    let w = p.weight.map(|w| format!("{:.10}{:+.10}i", w.re, w.im)).unwrap_or_else(|| "unset".into());
    format!(
        "  sheet {:>2}  E = {:.12}{:+.12}i  order {}  weight {}  {:?}",
        p.sheet,
        p.energy.re,
        p.energy.im,
        p.order,
        w,
        p.class()
    )
}

fn fgr_summary(s: &mut String, series: &SurvivalSeries, tau: f64) {
    let dev = fgr_relative_deviation(series, tau);
    let max_dev = dev.iter().copied().fold(0.0, f64::max);
    let _ = writeln!(s, "max relative deviation from e^(-t/tau): {max_dev:.6e}");
    match fgr_valid_until(series, tau) {
        Some(t) if t < tau => {
            let _ = writeln!(s, "FGR regime absent (p leaves e^(-t/tau) by 2x at t = {:.4} tau)", t / tau);
        }
        Some(t) => {
            let _ = writeln!(s, "FGR-valid window: up to t = {:.4} tau", t / tau);
        }
        None => {
            let _ = writeln!(s, "FGR-valid window: whole series");
        }
    }
}

pub fn cmd_survival(cfg: &RunConfig) -> Result<CommandOutput> {
    let model = cfg.band_model()?;
    let method = *cfg.methods.first().ok_or_else(|| Error::Config("no method given".into()))?;
    let times = time_grid(cfg, &model, method == Method::ResonanceExpansion)?;
    let series = run_method(cfg, &model, method, &times)?;
    let mut s = String::new();
    let _ =
        writeln!(s, "model {:?}, delta0 = {}, eps = {}, method {}", model.kind(), cfg.delta0, cfg.eps, method.name());
    let tau = fgr_time(&model, cfg.eps).ok();
    if let Some(tau) = tau {
        let _ = writeln!(s, "tau = {tau:.12}");
    }
    let poles = real_poles_standard_sheet(&model, cfg.eps);
    let _ = writeln!(s, "bound states: {}", poles.len());
    for p in &poles {
        let _ = writeln!(s, "{}", pole_line(p));
    }
    if let Some(tau) = tau {
        fgr_summary(&mut s, &series, tau);
    }
    for w in &series.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    Ok(CommandOutput { data: series_payload(cfg, &model, &series)?, summary: s })
}

#[derive(Debug, Serialize)]
struct PoleEntry {
    sheet: i32,
    re: f64,
    im: f64,
    order: u8,
    weight_re: Option<f64>,
    weight_im: Option<f64>,
    class: PoleClass,
}

impl From<&Pole> for PoleEntry {
    fn from(p: &Pole) -> Self {
        Self {
            sheet: p.sheet,
            re: p.energy.re,
            im: p.energy.im,
            order: p.order,
            weight_re: p.weight.map(|w| w.re),
            weight_im: p.weight.map(|w| w.im),
            class: p.class(),
        }
    }
}

#[derive(Debug, Serialize)]
struct TrajectoryPoint {
    delta0: f64,
    poles: Vec<PoleEntry>,
    note: Option<String>,
}

#[derive(Debug, Serialize)]
struct PoleReport {
    model: BandModel,
    eps: f64,
    poles: Vec<PoleEntry>,
    notes: Vec<String>,
    thresholds: Option<SemicircleOnsets>,
    trajectory: Option<Vec<TrajectoryPoint>>,
    audit: Option<crate::audit::ThresholdAudit>,
}

fn degenerate_note(e: &Error) -> Option<String> {
    match e {
        Error::DegenerateQuadratic { linear_root } => Some(match linear_root {
            Some(r) => {
                format!("quadratic degenerates at delta0 = 1/2: one root {r} remains, the other has moved to infinity")
            }
            None => "quadratic degenerates at delta0 = 1/2 with eps = 0: both roots have moved to infinity".into(),
        }),
        _ => None,
    }
}

pub fn cmd_poles(cfg: &RunConfig, with_audit: bool) -> Result<CommandOutput> {
    let model = cfg.band_model()?;
    let mut notes = Vec::new();
    let mut poles = real_poles_standard_sheet(&model, cfg.eps);
    if model.supports_continuation() {
        poles.extend(resonance_poles(&model, cfg.eps, 1)?);
    } else {
        notes.push("tabulated density: no continuation, only standard-sheet poles".into());
    }
    let mut thresholds = None;
    let mut trajectory = None;
    if model.kind() == ModelKind::Semicircle {
        if let Err(e) = semicircle_poles(cfg.delta0, cfg.eps) {
            notes.extend(degenerate_note(&e));
        }
        thresholds = Some(semicircle_onsets(cfg.eps));
        if let Some((from, to, count)) = cfg.sweep {
            let steps = count.max(2);
            trajectory = Some(
                (0..steps)
                    .map(|i| {
                        let d = from + (to - from) * i as f64 / (steps - 1) as f64;
                        match semicircle_poles(d, cfg.eps) {
                            Ok(ps) => TrajectoryPoint {
                                delta0: d,
                                poles: ps.iter().map(PoleEntry::from).collect(),
                                note: None,
                            },
                            Err(e) => TrajectoryPoint {
                                delta0: d,
                                poles: Vec::new(),
                                note: degenerate_note(&e).or(Some(e.to_string())),
                            },
                        }
                    })
                    .collect(),
            );
        }
    }
    let audit = if with_audit { Some(threshold_audit(&[0.0, 0.4, -0.4, 0.6, -0.6], cfg.oracle_n)?) } else { None };

    let mut s = String::new();
    let _ = writeln!(s, "model {:?}, delta0 = {}, eps = {}", model.kind(), cfg.delta0, cfg.eps);
    for p in &poles {
        let _ = writeln!(s, "{}", pole_line(p));
    }
    for n in &notes {
        let _ = writeln!(s, "note: {n}");
    }
    if let Some(t) = &thresholds {
        let _ = writeln!(
            s,
            "threshold (eps^2+1)/2 = {:.6}; measured bound-state onsets: {:.6}, {:.6}",
            t.quoted_threshold, t.first_onset, t.second_onset
        );
    }
    if let Some(a) = &audit {
        for r in &a.rows {
            let _ = writeln!(
                s,
                "audit eps = {:+.2}: quoted {:.4}, measured {:.4}/{:.4}, oracle confirmed: {}",
                r.eps, r.quoted_threshold, r.first_onset, r.second_onset, r.confirmed
            );
        }
    }
    let report = PoleReport {
        model: model.clone(),
        eps: cfg.eps,
        poles: poles.iter().map(PoleEntry::from).collect(),
        notes,
        thresholds,
        trajectory,
        audit,
    };
    Ok(CommandOutput { data: json_payload(&report)?, summary: s })
}

#[derive(Debug, Serialize)]
struct SigmaReport {
    w_re: f64,
    w_im: f64,
    sheet: i32,
    sigma_re: f64,
    sigma_im: f64,
    dsigma_re: f64,
    dsigma_im: f64,
}

pub fn cmd_sigma(cfg: &RunConfig) -> Result<CommandOutput> {
    let model = cfg.band_model()?;
    let p = SheetPoint::new(Complex64::new(cfg.w_re, cfg.w_im), cfg.sheet);
    let v = sigma_on_sheet_side(&model, p, cfg.side)?;
    let d = sigma_derivative_side(&model, p, cfg.side)?;
    let r = SigmaReport {
        w_re: cfg.w_re,
        w_im: cfg.w_im,
        sheet: cfg.sheet,
        sigma_re: v.re,
        sigma_im: v.im,
        dsigma_re: d.re,
        dsigma_im: d.im,
    };
    let data = match cfg.format {
        Format::Json => json_payload(&r)?,
        Format::Csv => format!(
            "w_re,w_im,sheet,sigma_re,sigma_im,dsigma_re,dsigma_im\n{},{},{},{},{},{},{}\n",
            fmt_f64(r.w_re),
            fmt_f64(r.w_im),
            r.sheet,
            fmt_f64(r.sigma_re),
            fmt_f64(r.sigma_im),
            fmt_f64(r.dsigma_re),
            fmt_f64(r.dsigma_im)
        )
        .into_bytes(),
    };
    let summary = format!("Sigma = {v}, dSigma/dw = {d}\n");
    Ok(CommandOutput { data, summary })
}

pub fn cmd_spectral(cfg: &RunConfig) -> Result<CommandOutput> {
    let model = cfg.band_model()?;
    let lo = cfg.e_min.unwrap_or(model.band_bottom() - 0.5);
    let hi = cfg.e_max.unwrap_or(model.band_top() + 0.5);
    let n = cfg.points.max(2);
    let energies: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let points: Vec<_> = energies.iter().map(|&e| spectral_density(&model, cfg.eps, e)).collect();
    let deltas = spectral_density(&model, cfg.eps, lo).deltas;
    let spectrum = CutSpectrum::new(&model, cfg.eps, &cfg.quadrature)?;
    let total = spectrum.mass() + deltas.iter().map(|d| d.1).sum::<f64>();
    let data = match cfg.format {
        Format::Json => json_payload(&points)?,
        Format::Csv => {
            let mut s = String::from("E,A\n");
            for p in &points {
                let _ = writeln!(s, "{},{}", fmt_f64(p.energy), fmt_f64(p.continuous));
            }
            s.into_bytes()
        }
    };
    let mut s = String::new();
    for (e, w) in &deltas {
        let _ = writeln!(s, "delta at E = {e:.12} with weight {w:.12}");
    }
    let _ = writeln!(s, "continuum weight + bound-state weights = {total:.12}");
    Ok(CommandOutput { data, summary: s })
}

pub fn cmd_compare(cfg: &RunConfig) -> Result<CommandOutput> {
    if cfg.methods.len() < 2 {
        return Err(Error::Config("compare needs at least two methods".into()));
    }
    let model = cfg.band_model()?;
    let skip_zero = cfg.methods.contains(&Method::ResonanceExpansion);
    let times = time_grid(cfg, &model, skip_zero)?;
    let runs = cfg.methods.iter().map(|&m| run_method(cfg, &model, m, &times)).collect::<Result<Vec<_>>>()?;
    let in_window = |t: f64| cfg.window.is_none_or(|(a, b)| t >= a && t <= b);

    let mut csv = String::from("t");
    for m in &cfg.methods {
        let _ = write!(csv, ",p_{}", m.name());
    }
    csv.push('\n');
    for (i, t) in times.iter().enumerate() {
        csv.push_str(&fmt_f64(*t));
        for r in &runs {
            let _ = write!(csv, ",{}", fmt_f64(r.p[i]));
        }
        csv.push('\n');
    }

    let mut s = String::new();
    if let Some((a, b)) = cfg.window {
        let _ = writeln!(s, "deviations over t in [{a}, {b}]");
    }
    #[derive(Serialize)]
    struct Pair {
        a: &'static str,
        b: &'static str,
        max_abs_dp: f64,
        max_abs_dg: f64,
        max_rel_dp: f64,
    }
    let mut pairs = Vec::new();
    for i in 0..runs.len() {
        for j in i + 1..runs.len() {
            let (mut dp, mut dg, mut rel) = (0.0f64, 0.0f64, 0.0f64);
            for k in (0..times.len()).filter(|&k| in_window(times[k])) {
                let d = (runs[i].p[k] - runs[j].p[k]).abs();
                dp = dp.max(d);
                dg = dg.max((runs[i].g[k] - runs[j].g[k]).norm());
                rel = rel.max(d / runs[j].p[k].abs().max(f64::MIN_POSITIVE));
            }
            let (a, b) = (cfg.methods[i].name(), cfg.methods[j].name());
            let _ = writeln!(s, "{a} vs {b}: max |dp| = {dp:.6e}, max |dg| = {dg:.6e}, max relative dp = {rel:.6e}");
            pairs.push(Pair { a, b, max_abs_dp: dp, max_abs_dg: dg, max_rel_dp: rel });
        }
    }
    let data = match cfg.format {
        Format::Csv => csv.into_bytes(),
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                t: &'a [f64],
                p: Vec<(&'static str, &'a [f64])>,
                deviations: Vec<Pair>,
            }
            json_payload(&Doc {
                t: &times,
                p: cfg.methods.iter().zip(&runs).map(|(m, r)| (m.name(), r.p.as_slice())).collect(),
                deviations: pairs,
            })?
        }
    };
    Ok(CommandOutput { data, summary: s })
}

pub fn cmd_oracle(cfg: &RunConfig) -> Result<CommandOutput> {
    let model = cfg.band_model()?;
    let dm = build_discrete_model(&model, cfg.eps, cfg.oracle_n, oracle_scheme(cfg, &model))?;
    let times = time_grid(cfg, &model, false)?;
    let eig = dm.eigensystem();
    let series = crate::oracle::evolve_survival(&dm, &times);
    let mut s = String::new();
    let _ = writeln!(s, "{:?} with N = {}, recurrence horizon {:.3}", dm.source, dm.len(), dm.recurrence_horizon());
    for (e, o) in bound_states_of(&dm, &eig) {
        let _ = writeln!(s, "  bound state E = {e:.12}, overlap {o:.10}");
    }
    for w in &series.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    Ok(CommandOutput { data: series_payload(cfg, &model, &series)?, summary: s })
}

/// Samples per unit time used for envelope fits: eight per π.
pub const TAIL_SAMPLING: f64 = 8.0 / std::f64::consts::PI;

pub fn cmd_tail(cfg: &RunConfig) -> Result<CommandOutput> {
    let model = cfg.band_model()?;
    let (lo, hi) = cfg.window.ok_or_else(|| Error::Config("tail needs `window = lo:hi`".into()))?;
    let times = tail_grid(lo, hi);
    let series = cut_series(&model, cfg.eps, &times, &cfg.quadrature)?;
    let alpha = tail_exponent(&series, (lo, hi))?;
    let summary = format!("envelope exponent alpha = {alpha:.6} over t in [{lo}, {hi}]\n");
    Ok(CommandOutput { data: series_payload(cfg, &model, &series)?, summary })
}

/// Uniform grid covering [lo, hi] with one extra step either side.
pub fn tail_grid(lo: f64, hi: f64) -> Vec<f64> {
    let dt = 1.0 / TAIL_SAMPLING;
    let start = (lo - dt).max(dt);
    let n = ((hi + dt - start) / dt).ceil() as usize + 1;
    (0..n).map(|i| start + i as f64 * dt).collect()
}

/// Caps the global thread pool from GREENCUT_THREADS when set.
pub fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("GREENCUT_THREADS") {
        let n: usize =
            v.trim().parse().map_err(|_| Error::Config(format!("GREENCUT_THREADS must be an integer, got `{v}`")))?;
        if n > 0 {
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| Error::Config(e.to_string()))?;
        }
    }
    Ok(())
}

/// Executes a parsed command line. The payload goes to the output file if
/// one is configured (summary to stdout), else to stdout (summary to stderr).
pub fn run(cli: Cli) -> Result<()> {
    use std::io::Write;
    type Handler = Box<dyn Fn(&RunConfig, bool) -> Result<CommandOutput>>;
    let (args, f): (&RunArgs, Handler) = match &cli.command {
        Command::Survival(a) => (a, Box::new(|c, _| cmd_survival(c))),
        Command::Poles(a) => (a, Box::new(cmd_poles)),
        Command::Sigma(a) => (a, Box::new(|c, _| cmd_sigma(c))),
        Command::Spectral(a) => (a, Box::new(|c, _| cmd_spectral(c))),
        Command::Compare(a) => (a, Box::new(|c, _| cmd_compare(c))),
        Command::Oracle(a) => (a, Box::new(|c, _| cmd_oracle(c))),
        Command::Tail(a) => (a, Box::new(|c, _| cmd_tail(c))),
    };
    let cfg = args.resolve()?;
    let out = f(&cfg, args.audit)?;
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, &out.data)?;
            print!("{}", out.summary);
        }
        None => {
            std::io::stdout().write_all(&out.data)?;
            eprint!("{}", out.summary);
        }
    }
    Ok(())
}
