//! Survival amplitude g(t) = ⟨d|e^{−iHt}|d⟩ from the spectral
//! representation: the continuum part is the Fourier transform of
//! A(E) = Δ(E)/([E − ε − Σ′(E)]² + π²Δ²(E)) over the band, and each bound
//! state adds w_j e^{−iE_j t}.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band::{BandModel, ModelKind};
use crate::error::{Error, Result};
use crate::poles::{real_poles_standard_sheet, resonance_poles, Pole};
use crate::quad::{self, ChebPanel};
use crate::self_energy::{cut_real_part, sigma_off_axis};

const CHEB_POINTS: usize = 16;
/// Panels narrower than this fraction of the band width are accepted as is.
const MIN_PANEL: f64 = 1e-13;
const PANEL_FLOOR: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Sub-panels per period of e^{−iEt}.
    pub oscillation_splitting: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-10, max_subdivisions: 20_000, oscillation_splitting: 4 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if self.oscillation_splitting < 4 {
            return Err(Error::Config("oscillation_splitting must be at least 4".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::Config("max_subdivisions must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    CutIntegral,
    ResonanceExpansion,
    Oracle,
    #[serde(rename = "FGR")]
    Fgr,
    /// The band contribution I_cut(t) alone, without bound states.
    CutOnly,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::CutIntegral => "cut",
            Method::ResonanceExpansion => "resonance",
            Method::Oracle => "oracle",
            Method::Fgr => "fgr",
            Method::CutOnly => "cut-only",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivalSeries {
    pub times: Vec<f64>,
    pub g: Vec<Complex64>,
    pub p: Vec<f64>,
    pub method: Method,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SurvivalSeries {
    pub fn new(times: Vec<f64>, g: Vec<Complex64>, method: Method) -> Self {
        let p = g.iter().map(|z| z.norm_sqr()).collect();
        Self { times, g, p, method, warnings: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `points` uniform times on [0, t_max].
pub fn uniform_times(t_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect(),
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Domain("times must be finite and nonnegative".into()));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("times must be sorted".into()));
    }
    Ok(())
}

/// Continuous spectral density A(E) inside the band; zero outside.
pub fn continuum_density(model: &BandModel, eps: f64, e: f64) -> f64 {
    if !(e > model.band_bottom() && e < model.band_top()) {
        return 0.0;
    }
    let d = model.delta(e);
    if d == 0.0 {
        return 0.0;
    }
    let x = e - eps - cut_real_part(model, e);
    let v = d / (x * x + PI * PI * d * d);
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Piecewise Chebyshev interpolant of A(E) over the band. Built once and
/// reused for every t: each panel is split into pieces no longer than
/// 2π/(splitting·t) and integrated against e^{−iEt} with Gauss-Legendre.
#[derive(Debug, Clone)]
pub struct CutSpectrum {
    panels: Vec<ChebPanel>,
    splitting: usize,
    converged: bool,
    error: f64,
}

impl CutSpectrum {
    pub fn new(model: &BandModel, eps: f64, cfg: &QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        let (eb, et) = (model.band_bottom(), model.band_top());
        let width = et - eb;
        let min_width = MIN_PANEL * width;

        let mut breaks = vec![eb, et];
        // geometric grading into both edges
        let mut h = 0.5 * width;
        while h > min_width {
            breaks.push(eb + h);
            breaks.push(et - h);
            h *= 0.5;
        }
        // extra resolution around the golden-rule peak
        if eps > eb && eps < et {
            let centre = eps + cut_real_part(model, eps);
            let half = (PI * model.delta(eps)).max(1e-6 * width);
            for k in [-16.0, -4.0, -1.0, 0.0, 1.0, 4.0, 16.0] {
                breaks.push(centre + k * half);
            }
        }
        breaks.retain(|b| *b >= eb && *b <= et);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        let mut pending: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
        let mut done: Vec<(ChebPanel, bool)> = Vec::new();
        let mut converged = true;
        while !pending.is_empty() {
            if done.len() + pending.len() > cfg.max_subdivisions {
                converged = false;
                // accept what is left without refinement
            }
            let built: Vec<ChebPanel> = pending
                .par_iter()
                .map(|&(a, b)| {
                    let values: Vec<f64> = ChebPanel::nodes(a, b, CHEB_POINTS)
                        .into_iter()
                        .map(|e| continuum_density(model, eps, e))
                        .collect();
                    ChebPanel::from_samples(a, b, &values)
                })
                .collect();
            let mut next = Vec::new();
            for panel in built {
                let scale = panel.coeffs.iter().map(|c| c.abs()).fold(0.0, f64::max);
                // Near an edge the nodes carry relative rounding of order
                // ε_mach·|E|/d, so the pointwise test can stall; accept once
                // the panel's share of the integrated error is negligible.
                let ok = panel.tail() <= cfg.abs_tol + cfg.rel_tol * scale
                    || panel.tail() * (panel.b - panel.a) <= PANEL_FLOOR * cfg.abs_tol;
                if ok || panel.b - panel.a <= min_width || !converged {
                    done.push((panel, ok));
                } else {
                    let mid = 0.5 * (panel.a + panel.b);
                    next.push((panel.a, mid));
                    next.push((mid, panel.b));
                }
            }
            pending = next;
        }
        done.sort_by(|x, y| x.0.a.total_cmp(&y.0.a));
        let error = done.iter().map(|(p, _)| p.tail() * (p.b - p.a)).sum();
        Ok(Self {
            panels: done.into_iter().map(|(p, _)| p).collect(),
            splitting: cfg.oscillation_splitting,
            converged,
            error,
        })
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Estimated absolute error of any transform value.
    pub fn error_estimate(&self) -> f64 {
        self.error
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }

    /// Interpolated A(E).
    pub fn density(&self, e: f64) -> f64 {
        let k = self.panels.partition_point(|p| p.b < e);
        self.panels.get(k).filter(|p| p.a <= e).map_or(0.0, |p| p.eval(e))
    }

    /// ∫ A(E) dE.
    pub fn mass(&self) -> f64 {
        self.panels.iter().map(|p| p.integral()).sum()
    }

    /// I_cut(t) = ∫ A(E) e^{−iEt} dE.
    pub fn transform(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            return Complex64::new(self.mass(), 0.0);
        }
        let (x, w) = quad::gl20();
        let max_len = 2.0 * PI / (self.splitting as f64 * t.abs());
        let mut sum = Complex64::new(0.0, 0.0);
        for panel in &self.panels {
            let len = panel.b - panel.a;
            let pieces = (len / max_len).ceil().max(1.0) as usize;
            let h = len / pieces as f64;
            for j in 0..pieces {
                let a = panel.a + j as f64 * h;
                let mid = a + 0.5 * h;
                let mut acc = Complex64::new(0.0, 0.0);
                for (xi, wi) in x.iter().zip(w) {
                    let e = mid + 0.5 * h * xi;
                    let (s, c) = (e * t).sin_cos();
                    acc += Complex64::new(c, -s) * (wi * panel.eval(e));
                }
                sum += acc * (0.5 * h);
            }
        }
        sum
    }
}

fn accuracy(spectrum: &CutSpectrum, estimate: Complex64) -> Error {
    Error::Accuracy { estimate, error: spectrum.error_estimate() }
}

/// I_cut(t) for one time.
pub fn cut_integral(model: &BandModel, eps: f64, t: f64, cfg: &QuadratureConfig) -> Result<Complex64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be nonnegative, got {t}")));
    }
    let spectrum = CutSpectrum::new(model, eps, cfg)?;
    let value = spectrum.transform(t);
    if !spectrum.converged() {
        return Err(accuracy(&spectrum, value));
    }
    Ok(value)
}

fn pole_sum(poles: &[Pole], t: f64) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for p in poles {
        if p.order >= 2 {
            return Err(Error::SecondOrderPole);
        }
        let w = p.weight.ok_or(Error::SecondOrderPole)?;
        sum += w * (Complex64::new(0.0, -t) * p.energy).exp();
    }
    Ok(sum)
}

/// g(t) = I_cut(t) + Σ_j w_j e^{−iE_j t} over the bound states.
pub fn survival_amplitude(
    model: &BandModel,
    eps: f64,
    times: &[f64],
    cfg: &QuadratureConfig,
) -> Result<SurvivalSeries> {
    check_times(times)?;
    let spectrum = CutSpectrum::new(model, eps, cfg)?;
    let poles = real_poles_standard_sheet(model, eps);
    let g = times.par_iter().map(|&t| Ok(spectrum.transform(t) + pole_sum(&poles, t)?)).collect::<Result<Vec<_>>>()?;
    if !spectrum.converged() {
        return Err(accuracy(&spectrum, g.first().copied().unwrap_or_default()));
    }
    Ok(SurvivalSeries::new(times.to_vec(), g, Method::CutIntegral))
}

/// The band contribution alone, as needed for tail fits.
pub fn cut_series(model: &BandModel, eps: f64, times: &[f64], cfg: &QuadratureConfig) -> Result<SurvivalSeries> {
    check_times(times)?;
    let spectrum = CutSpectrum::new(model, eps, cfg)?;
    let g: Vec<Complex64> = times.par_iter().map(|&t| spectrum.transform(t)).collect();
    if !spectrum.converged() {
        return Err(accuracy(&spectrum, g.first().copied().unwrap_or_default()));
    }
    Ok(SurvivalSeries::new(times.to_vec(), g, Method::CutOnly))
}

/// τ = 1/(2πΔ(ε)).
pub fn fgr_time(model: &BandModel, eps: f64) -> Result<f64> {
    let d = if eps > model.band_bottom() && eps < model.band_top() { model.delta(eps) } else { 0.0 };
    if d <= 0.0 {
        return Err(Error::Domain(format!("golden-rule rate vanishes at level energy {eps}")));
    }
    Ok(1.0 / (2.0 * PI * d))
}

/// Golden-rule propagator g = exp(−i(ε + Σ′(ε))t − t/2τ).
pub fn fgr_series(model: &BandModel, eps: f64, times: &[f64]) -> Result<SurvivalSeries> {
    check_times(times)?;
    let tau = fgr_time(model, eps)?;
    let shifted = eps + cut_real_part(model, eps);
    let g = times.iter().map(|&t| Complex64::new(-0.5 * t / tau, -shifted * t).exp()).collect();
    Ok(SurvivalSeries::new(times.to_vec(), g, Method::Fgr))
}

/// J(w) = Δ̃(w)·G₀(w)·G₁(w), the integrand along the vertical lines.
fn jump_integrand(model: &BandModel, eps: f64, w: Complex64) -> Complex64 {
    let eval = || -> Result<Complex64> {
        let d = model.continue_delta(w)?;
        let g0 = 1.0 / (w - eps - sigma_off_axis(model, w, 0)?);
        let g1 = 1.0 / (w - eps - sigma_off_axis(model, w, 1)?);
        Ok(d * g0 * g1)
    };
    eval().unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

/// ∫₀^Y J(edge − is) e^{−st} ds on geometrically graded pieces; returns
/// (value, quadrature error).
fn vertical_line(
    model: &BandModel,
    eps: f64,
    edge: f64,
    t: f64,
    depth: f64,
    cfg: &QuadratureConfig,
) -> (Complex64, f64) {
    let f = |s: f64| jump_integrand(model, eps, Complex64::new(edge, -s)) * (-s * t).exp();
    let mut cuts = vec![0.0];
    let mut s = depth * 2f64.powi(-30);
    while s < depth {
        cuts.push(s);
        s *= 2.0;
    }
    cuts.push(depth);
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let r = quad::tanh_sinh(|s, _, _| f(s), w[0], w[1], 0.1 * cfg.abs_tol, cfg.rel_tol);
        value += r.value;
        error += r.error;
    }
    (value, error)
}

/// Resonance (deformed-contour) evaluation. The real-axis integral is
/// pushed into the lower half-plane: the part over the band goes onto
/// sheet 1, the rest stays on sheet 0. What remains is the bound states,
/// the sheet-1 poles below the band and two vertical lines hanging from
/// the band edges, each carrying i·e^{−iEt}∫J e^{−st}ds with opposite signs.
pub fn resonance_expansion(
    model: &BandModel,
    eps: f64,
    times: &[f64],
    cfg: &QuadratureConfig,
) -> Result<SurvivalSeries> {
    cfg.validate()?;
    check_times(times)?;
    if model.kind() == ModelKind::Tabulated {
        return Err(Error::ContinuationUnavailable(model.kind()));
    }
    if times.iter().any(|&t| t <= 0.0) {
        return Err(Error::Domain("the resonance expansion needs t > 0".into()));
    }
    let bound = real_poles_standard_sheet(model, eps);
    let resonances: Vec<Pole> = resonance_poles(model, eps, 1)?
        .into_iter()
        .filter(|p| p.energy.im < 0.0 && model.contains(p.energy.re))
        .collect();
    let deepest = resonances.iter().map(|p| -p.energy.im).fold(0.0, f64::max);
    let (eb, et) = (model.band_bottom(), model.band_top());

    let values = times
        .par_iter()
        .map(|&t| -> Result<(Complex64, f64)> {
            let mut g = pole_sum(&bound, t)? + pole_sum(&resonances, t)?;
            let mut depth = (40.0 / t).max(40.0 * deepest);
            let mut tail;
            let (mut top, mut bottom, mut err);
            loop {
                let (vt, et_err) = vertical_line(model, eps, et, t, depth, cfg);
                let (vb, eb_err) = vertical_line(model, eps, eb, t, depth, cfg);
                top = vt;
                bottom = vb;
                err = et_err + eb_err;
                // remainder bound from the integrand size at the truncation depth
                let edge_size = jump_integrand(model, eps, Complex64::new(et, -depth)).norm()
                    + jump_integrand(model, eps, Complex64::new(eb, -depth)).norm();
                tail = edge_size * (-depth * t).exp() / t;
                if tail < cfg.abs_tol || depth > 1e6 {
                    break;
                }
                depth *= 2.0;
            }
            let i = Complex64::new(0.0, 1.0);
            g += i * Complex64::new(0.0, -et * t).exp() * top;
            g -= i * Complex64::new(0.0, -eb * t).exp() * bottom;
            Ok((g, err + tail))
        })
        .collect::<Result<Vec<_>>>()?;

    let worst = values.iter().map(|v| v.1).fold(0.0, f64::max);
    if worst > 10.0 * cfg.abs_tol.max(cfg.rel_tol) {
        return Err(Error::Accuracy { estimate: values[0].0, error: worst });
    }
    Ok(SurvivalSeries::new(times.to_vec(), values.into_iter().map(|v| v.0).collect(), Method::ResonanceExpansion))
}

/// Spectral density at one energy: continuous part plus the discrete
/// bound-state weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub energy: f64,
    pub continuous: f64,
    pub deltas: Vec<(f64, f64)>,
}

pub fn spectral_density(model: &BandModel, eps: f64, w: f64) -> SpectralPoint {
    let deltas = real_poles_standard_sheet(model, eps)
        .into_iter()
        .filter_map(|p| p.weight.map(|wt| (p.energy.re, wt.re)))
        .collect();
    SpectralPoint { energy: w, continuous: continuum_density(model, eps, w), deltas }
}

/// Envelope exponent α of |g(t)| ∝ t^{−α}, from a least-squares fit of the
/// parabola-refined local maxima of |g| inside the window.
pub fn tail_exponent(series: &SurvivalSeries, window: (f64, f64)) -> Result<f64> {
    let (lo, hi) = window;
    let (first, last) = match (series.times.first(), series.times.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(Error::InsufficientData { found: 0, needed: 5 }),
    };
    if !(lo < hi && lo >= first && hi <= last && lo > 0.0) {
        return Err(Error::Domain(format!("window [{lo}, {hi}] is not inside the series range [{first}, {last}]")));
    }
    let m: Vec<f64> = series.g.iter().map(|z| z.norm()).collect();
    let t = &series.times;
    let mut pts = Vec::new();
    for i in 1..m.len().saturating_sub(1) {
        if !(t[i] >= lo && t[i] <= hi) || !(m[i] > m[i - 1] && m[i] >= m[i + 1]) {
            continue;
        }
        let (tp, mp) = parabola_peak((t[i - 1], m[i - 1]), (t[i], m[i]), (t[i + 1], m[i + 1]));
        if mp > 0.0 {
            pts.push((tp.ln(), mp.ln()));
        }
    }
    if pts.len() < 5 {
        return Err(Error::InsufficientData { found: pts.len(), needed: 5 });
    }
    Ok(-least_squares_slope(&pts))
}

fn parabola_peak(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> (f64, f64) {
    let d1 = (b.1 - a.1) / (b.0 - a.0);
    let d2 = (c.1 - b.1) / (c.0 - b.0);
    let curv = (d2 - d1) / (c.0 - a.0);
    if curv >= 0.0 {
        return b;
    }
    // p(x) = b.1 + slope_b (x − b.0) + curv (x − b.0)²
    let slope_b = d1 + curv * (b.0 - a.0);
    let x = b.0 - slope_b / (2.0 * curv);
    if x < a.0 || x > c.0 {
        return b;
    }
    (x, b.1 + slope_b * (x - b.0) + curv * (x - b.0) * (x - b.0))
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

/// Dominant angular frequency of p(t) for t ≥ `from`. The segment is
/// detrended (mean and slope), zero-padded 256-fold and the periodogram
/// peak located by quadratic interpolation.
pub fn dominant_frequency(series: &SurvivalSeries, from: f64) -> Result<f64> {
    let idx: Vec<usize> = (0..series.len()).filter(|&i| series.times[i] >= from).collect();
    if idx.len() < 8 {
        return Err(Error::InsufficientData { found: idx.len(), needed: 8 });
    }
    let t: Vec<f64> = idx.iter().map(|&i| series.times[i]).collect();
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-6 * dt) {
        return Err(Error::Domain("frequency estimate needs a uniform time grid".into()));
    }
    let y: Vec<f64> = idx.iter().map(|&i| series.p[i]).collect();
    let pts: Vec<(f64, f64)> = t.iter().copied().zip(y.iter().copied()).collect();
    let slope = least_squares_slope(&pts);
    let (mt, my) = (t.iter().sum::<f64>() / t.len() as f64, y.iter().sum::<f64>() / y.len() as f64);
    let x: Vec<f64> = t.iter().zip(&y).map(|(ti, yi)| yi - my - slope * (ti - mt)).collect();

    let n_pad = x.len() * 256;
    let bins = n_pad / 2;
    let power = |k: usize| -> f64 {
        let w = 2.0 * PI * k as f64 / (n_pad as f64 * dt);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, xj) in x.iter().enumerate() {
            let (s, c) = (w * j as f64 * dt).sin_cos();
            acc += Complex64::new(c, -s) * *xj;
        }
        acc.norm_sqr()
    };
    let spectrum: Vec<f64> = (0..=bins).into_par_iter().map(power).collect();
    let k = (1..bins).max_by(|&a, &b| spectrum[a].total_cmp(&spectrum[b])).unwrap_or(1);
    let (a, b, c) = (spectrum[k - 1], spectrum[k], spectrum[k + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom != 0.0 { 0.5 * (a - c) / denom } else { 0.0 };
    Ok(2.0 * PI * (k as f64 + shift) / (n_pad as f64 * dt))
}

/// Relative deviation |p − e^{−t/τ}| / e^{−t/τ} per sample.
pub fn fgr_relative_deviation(series: &SurvivalSeries, tau: f64) -> Vec<f64> {
    series
        .times
        .iter()
        .zip(&series.p)
        .map(|(t, p)| {
            let f = (-t / tau).exp();
            (p - f).abs() / f
        })
        .collect()
}

/// First time at which p departs from e^{−t/τ} by more than a factor of
/// two either way; `None` if it never does on the series.
pub fn fgr_valid_until(series: &SurvivalSeries, tau: f64) -> Option<f64> {
    series
        .times
        .iter()
        .zip(&series.p)
        .find(|(t, p)| **p <= 0.0 || ((**p).ln() + **t / tau).abs() > LN_2)
        .map(|(t, _)| *t)
}
