//! Coupling spectral density Δ(E) of the continuum and its analytic
//! continuation off the real axis.

use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Semicircle,
    FlatBand,
    PowerEdge,
    Tabulated,
}

/// Coupling density of a single band.
///
/// * `Semicircle`: Δ(E) = (Δ₀/π)√(1−E²) on [−1, 1], the continuum limit of a
///   site side-coupled to a semi-infinite tight-binding chain.
/// * `FlatBand`: Δ(E) = Δ₀ on [−1, 1].
/// * `PowerEdge`: Δ(E) = Δ₀·c·(E−E_b)^β_b (E_t−E)^β_t, with `c` chosen so the
///   maximum over the band is Δ₀.
/// * `Tabulated`: shape-preserving cubic (PCHIP) through user samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBandModel", into = "RawBandModel")]
pub struct BandModel {
    kind: ModelKind,
    strength: f64,
    band_bottom: f64,
    band_top: f64,
    edge_exp_bottom: f64,
    edge_exp_top: f64,
    samples: Option<Vec<(f64, f64)>>,
    norm: f64,
    slopes: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawBandModel {
    kind: ModelKind,
    strength: f64,
    band_bottom: f64,
    band_top: f64,
    edge_exp_bottom: f64,
    edge_exp_top: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<(f64, f64)>>,
}

impl TryFrom<RawBandModel> for BandModel {
    type Error = Error;

    fn try_from(raw: RawBandModel) -> Result<Self> {
        match raw.kind {
            ModelKind::Semicircle => BandModel::semicircle(raw.strength),
            ModelKind::FlatBand => BandModel::flat_band(raw.strength),
            ModelKind::PowerEdge => BandModel::power_edge(
                raw.strength,
                raw.band_bottom,
                raw.band_top,
                raw.edge_exp_bottom,
                raw.edge_exp_top,
            ),
            ModelKind::Tabulated => BandModel::tabulated(
                raw.samples.ok_or_else(|| Error::InvalidModel("tabulated model without samples".into()))?,
            ),
        }
    }
}

impl From<BandModel> for RawBandModel {
    fn from(m: BandModel) -> Self {
        RawBandModel {
            kind: m.kind,
            strength: m.strength,
            band_bottom: m.band_bottom,
            band_top: m.band_top,
            edge_exp_bottom: m.edge_exp_bottom,
            edge_exp_top: m.edge_exp_top,
            samples: m.samples,
        }
    }
}

fn check_strength(strength: f64) -> Result<()> {
    if strength.is_finite() && strength > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("coupling strength must be positive, got {strength}")))
    }
}

impl BandModel {
    pub fn semicircle(delta0: f64) -> Result<Self> {
        check_strength(delta0)?;
        Ok(Self {
            kind: ModelKind::Semicircle,
            strength: delta0,
            band_bottom: -1.0,
            band_top: 1.0,
            edge_exp_bottom: 0.5,
            edge_exp_top: 0.5,
            samples: None,
            norm: 1.0,
            slopes: Vec::new(),
        })
    }

    pub fn flat_band(delta0: f64) -> Result<Self> {
        check_strength(delta0)?;
        Ok(Self {
            kind: ModelKind::FlatBand,
            strength: delta0,
            band_bottom: -1.0,
            band_top: 1.0,
            edge_exp_bottom: 0.0,
            edge_exp_top: 0.0,
            samples: None,
            norm: 1.0,
            slopes: Vec::new(),
        })
    }

    pub fn power_edge(delta0: f64, bottom: f64, top: f64, beta_bottom: f64, beta_top: f64) -> Result<Self> {
        check_strength(delta0)?;
        if !(bottom < top) || !bottom.is_finite() || !top.is_finite() {
            return Err(Error::InvalidModel(format!("band edges must satisfy E_b < E_t, got [{bottom}, {top}]")));
        }
        if !(beta_bottom >= 0.0 && beta_top >= 0.0) {
            return Err(Error::InvalidModel("edge exponents must be nonnegative".into()));
        }
        let width = top - bottom;
        let total = beta_bottom + beta_top;
        // maximum of (E-E_b)^bb (E_t-E)^bt over the band
        let peak = if total == 0.0 {
            1.0
        } else {
            (beta_bottom * width / total).powf(beta_bottom) * (beta_top * width / total).powf(beta_top)
        };
        Ok(Self {
            kind: ModelKind::PowerEdge,
            strength: delta0,
            band_bottom: bottom,
            band_top: top,
            edge_exp_bottom: beta_bottom,
            edge_exp_top: beta_top,
            samples: None,
            norm: 1.0 / peak,
            slopes: Vec::new(),
        })
    }

    /// Tabulated density. The band is the sample range; `strength` is
    /// reported as the largest sample.
    pub fn tabulated(samples: Vec<(f64, f64)>) -> Result<Self> {
        if samples.len() < 4 {
            return Err(Error::InvalidModel(format!(
                "tabulated density needs at least 4 samples, got {}",
                samples.len()
            )));
        }
        if samples.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InvalidModel("tabulated energies must be strictly increasing".into()));
        }
        if samples.iter().any(|&(e, d)| !e.is_finite() || !d.is_finite() || d < 0.0) {
            return Err(Error::InvalidModel("tabulated density must be finite and nonnegative".into()));
        }
        let strength = samples.iter().map(|s| s.1).fold(0.0, f64::max);
        check_strength(strength)?;
        let slopes = pchip_slopes(&samples);
        let (first, last) = (samples[0].0, samples[samples.len() - 1].0);
        Ok(Self {
            kind: ModelKind::Tabulated,
            strength,
            band_bottom: first,
            band_top: last,
            edge_exp_bottom: 0.0,
            edge_exp_top: 0.0,
            samples: Some(samples),
            norm: 1.0,
            slopes,
        })
    }

    /// Loads a two-column CSV with header `E,delta`.
    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        #[derive(Deserialize)]
        struct Row {
            #[serde(rename = "E")]
            e: f64,
            delta: f64,
        }
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
        let headers = reader.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "E" || &headers[1] != "delta" {
            return Err(Error::InvalidModel(format!(
                "expected header `E,delta`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
        let samples = reader
            .deserialize::<Row>()
            .map(|r| r.map(|r| (r.e, r.delta)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::tabulated(samples)
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }
    pub fn strength(&self) -> f64 {
        self.strength
    }
    pub fn band_bottom(&self) -> f64 {
        self.band_bottom
    }
    pub fn band_top(&self) -> f64 {
        self.band_top
    }
    pub fn width(&self) -> f64 {
        self.band_top - self.band_bottom
    }
    pub fn edge_exp_bottom(&self) -> f64 {
        self.edge_exp_bottom
    }
    pub fn edge_exp_top(&self) -> f64 {
        self.edge_exp_top
    }
    pub fn samples(&self) -> Option<&[(f64, f64)]> {
        self.samples.as_deref()
    }

    pub fn contains(&self, e: f64) -> bool {
        e >= self.band_bottom && e <= self.band_top
    }

    pub fn supports_continuation(&self) -> bool {
        self.kind != ModelKind::Tabulated
    }

    /// Δ(E); exactly zero outside the band.
    pub fn delta(&self, e: f64) -> f64 {
        if !self.contains(e) {
            return 0.0;
        }
        self.delta_with_offsets(e, e - self.band_bottom, self.band_top - e)
    }

    /// Δ evaluated from the distances to the band edges, which keeps the
    /// power-law factors accurate for points rounding onto an edge.
    pub(crate) fn delta_with_offsets(&self, e: f64, from_bottom: f64, to_top: f64) -> f64 {
        let (db, dt) = (from_bottom.max(0.0), to_top.max(0.0));
        match self.kind {
            ModelKind::Semicircle => self.strength / PI * (db * dt).sqrt(),
            ModelKind::FlatBand => self.strength,
            ModelKind::PowerEdge => {
                self.strength * self.norm * db.powf(self.edge_exp_bottom) * dt.powf(self.edge_exp_top)
            }
            ModelKind::Tabulated => pchip_eval(self.samples.as_deref().unwrap_or(&[]), &self.slopes, e).0.max(0.0),
        }
    }

    /// dΔ/dE strictly inside the band.
    pub fn delta_prime(&self, e: f64) -> f64 {
        if !(e > self.band_bottom && e < self.band_top) {
            return 0.0;
        }
        let (db, dt) = (e - self.band_bottom, self.band_top - e);
        match self.kind {
            ModelKind::Semicircle => -self.strength / PI * e / (db * dt).sqrt(),
            ModelKind::FlatBand => 0.0,
            ModelKind::PowerEdge => {
                let v = self.delta(e);
                v * (self.edge_exp_bottom / db - self.edge_exp_top / dt)
            }
            ModelKind::Tabulated => pchip_eval(self.samples.as_deref().unwrap_or(&[]), &self.slopes, e).1,
        }
    }

    /// The analytic function Δ̃(w) agreeing with Δ on the open band, with
    /// its branch cuts running outward along the real axis from the edges.
    pub fn continue_delta(&self, w: Complex64) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        match self.kind {
            ModelKind::Semicircle => Ok((one - w).sqrt() * (one + w).sqrt() * (self.strength / PI)),
            ModelKind::FlatBand => Ok(Complex64::new(self.strength, 0.0)),
            ModelKind::PowerEdge => {
                let lower = (w - self.band_bottom).powf(self.edge_exp_bottom);
                let upper = (Complex64::new(self.band_top, 0.0) - w).powf(self.edge_exp_top);
                Ok(lower * upper * (self.strength * self.norm))
            }
            ModelKind::Tabulated => Err(Error::ContinuationUnavailable(self.kind)),
        }
    }

    /// dΔ̃/dw.
    pub fn continue_delta_prime(&self, w: Complex64) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        match self.kind {
            ModelKind::Semicircle => Ok(-w / ((one - w).sqrt() * (one + w).sqrt()) * (self.strength / PI)),
            ModelKind::FlatBand => Ok(Complex64::new(0.0, 0.0)),
            ModelKind::PowerEdge => {
                let d = self.continue_delta(w)?;
                Ok(d * (self.edge_exp_bottom / (w - self.band_bottom) - self.edge_exp_top / (self.band_top - w)))
            }
            ModelKind::Tabulated => Err(Error::ContinuationUnavailable(self.kind)),
        }
    }

    /// ∫ Δ(E) dE over the band; fixes the large-|ω| decay Σ(ω) ≈ m/ω.
    pub fn first_moment(&self) -> f64 {
        match self.kind {
            ModelKind::Semicircle => 0.5 * self.strength,
            ModelKind::FlatBand => 2.0 * self.strength,
            ModelKind::PowerEdge => {
                let (v, _, _) = quad::tanh_sinh_real(
                    |e, db, dt| self.delta_with_offsets(e, db, dt),
                    self.band_bottom,
                    self.band_top,
                    1e-15,
                    1e-14,
                );
                v
            }
            ModelKind::Tabulated => {
                let s = self.samples.as_deref().unwrap_or(&[]);
                s.windows(2)
                    .zip(self.slopes.windows(2))
                    .map(|(p, d)| {
                        let h = p[1].0 - p[0].0;
                        h * (p[0].1 + p[1].1) / 2.0 + h * h * (d[0] - d[1]) / 12.0
                    })
                    .sum()
            }
        }
    }
}

pub fn evaluate_delta(model: &BandModel, e: f64) -> f64 {
    model.delta(e)
}

pub fn continue_delta(model: &BandModel, w: Complex64) -> Result<Complex64> {
    model.continue_delta(w)
}

pub fn first_moment(model: &BandModel) -> f64 {
    model.first_moment()
}

// Fritsch-Carlson monotone slopes.
fn pchip_slopes(s: &[(f64, f64)]) -> Vec<f64> {
    let n = s.len();
    let h: Vec<f64> = s.windows(2).map(|w| w[1].0 - w[0].0).collect();
    let delta: Vec<f64> = s.windows(2).zip(&h).map(|(w, h)| (w[1].1 - w[0].1) / h).collect();
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = pchip_end(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = pchip_end(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn pchip_end(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

fn pchip_eval(s: &[(f64, f64)], d: &[f64], x: f64) -> (f64, f64) {
    let k = match s.partition_point(|p| p.0 <= x) {
        0 => 0,
        i if i >= s.len() => s.len() - 2,
        i => i - 1,
    };
    let (x0, y0) = s[k];
    let (x1, y1) = s[k + 1];
    let h = x1 - x0;
    let t = (x - x0) / h;
    let (t2, t3) = (t * t, t * t * t);
    let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * h * d[k]
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * h * d[k + 1];
    let dv = ((6.0 * t2 - 6.0 * t) * y0 + (-6.0 * t2 + 6.0 * t) * y1) / h
        + (3.0 * t2 - 4.0 * t + 1.0) * d[k]
        + (3.0 * t2 - 2.0 * t) * d[k + 1];
    (v, dv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::adaptive_gk;

    #[test]
    fn flat_band_value_and_support() {
        let m = BandModel::flat_band(0.2).unwrap();
        assert_eq!(m.delta(0.5), 0.2);
        assert_eq!(m.delta(1.5), 0.0);
        assert_eq!(m.delta(-1.0000001), 0.0);
    }

    #[test]
    fn semicircle_at_band_centre() {
        let m = BandModel::semicircle(1.0).unwrap();
        assert!((m.delta(0.0) - 1.0 / PI).abs() < 1e-15);
        assert_eq!(m.delta(1.5), 0.0);
    }

    #[test]
    fn tabulated_needs_four_samples() {
        let err = BandModel::tabulated(vec![(0.0, 1.0), (0.5, 1.0), (1.0, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidModel(_)));
        let err = BandModel::tabulated(vec![(0.0, 1.0), (0.5, 1.0), (0.5, 1.0), (1.0, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidModel(_)));
    }

    #[test]
    fn continuation_examples() {
        let flat = BandModel::flat_band(0.3).unwrap();
        assert_eq!(flat.continue_delta(Complex64::new(0.2, -5.0)).unwrap(), Complex64::new(0.3, 0.0));
        let sc = BandModel::semicircle(PI).unwrap();
        assert!((sc.continue_delta(Complex64::new(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        let v = sc.continue_delta(Complex64::new(0.0, -0.5)).unwrap();
        assert!((v - 1.25f64.sqrt()).norm() < 1e-12);
        let tab = BandModel::tabulated(vec![(-1.0, 0.0), (0.0, 1.0), (0.5, 1.0), (1.0, 0.0)]).unwrap();
        assert!(matches!(tab.continue_delta(Complex64::new(0.0, 1.0)), Err(Error::ContinuationUnavailable(_))));
    }

    #[test]
    fn first_moments_match_quadrature() {
        let quadrature = |m: &BandModel| {
            adaptive_gk(|e| Complex64::new(m.delta(e), 0.0), &[m.band_bottom(), m.band_top()], 1e-13, 1e-13, 5000)
                .value
                .re
        };
        let flat = BandModel::flat_band(0.2).unwrap();
        assert!((flat.first_moment() - 0.4).abs() < 1e-15);
        let sc = BandModel::semicircle(1.0).unwrap();
        assert!((quadrature(&sc) - 0.5).abs() < 1e-9);
        assert!((sc.first_moment() - 0.5).abs() < 1e-15);
        let pe = BandModel::power_edge(1.0, -1.0, 1.0, 1.0, 1.0).unwrap();
        assert!((pe.first_moment() - 4.0 / 3.0).abs() < 1e-12);
        assert!((quadrature(&pe) - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn power_edge_peak_equals_strength() {
        let pe = BandModel::power_edge(0.7, -1.0, 2.0, 0.5, 2.0).unwrap();
        let peak = (0..30001).map(|i| pe.delta(-1.0 + 3.0 * i as f64 / 30000.0)).fold(0.0, f64::max);
        assert!((peak - 0.7).abs() < 1e-6);
    }

    #[test]
    fn power_edge_derivative_matches_difference() {
        let pe = BandModel::power_edge(1.0, -1.0, 1.0, 0.5, 2.0).unwrap();
        for &e in &[-0.9, -0.3, 0.2, 0.8] {
            let h = 1e-6;
            let fd = (pe.delta(e + h) - pe.delta(e - h)) / (2.0 * h);
            assert!((pe.delta_prime(e) - fd).abs() < 1e-6 * fd.abs().max(1.0));
        }
    }

    #[test]
    fn pchip_preserves_shape() {
        let samples = vec![(-1.0, 0.0), (-0.5, 0.2), (0.0, 1.0), (0.2, 1.0), (0.6, 0.1), (1.0, 0.0)];
        let m = BandModel::tabulated(samples.clone()).unwrap();
        for &(e, d) in &samples {
            assert!((m.delta(e) - d).abs() < 1e-15);
        }
        for i in 0..=2000 {
            let e = -1.0 + 2.0 * i as f64 / 2000.0;
            let v = m.delta(e);
            assert!((0.0..=1.0 + 1e-12).contains(&v), "{e} {v}");
        }
        // plateau between equal samples stays flat
        assert!((m.delta(0.1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip() {
        let dir = std::env::temp_dir().join(format!("greencut-band-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("delta.csv");
        std::fs::write(&path, "E,delta\n-1,0\n-0.5,0.3\n0.5,0.3\n1,0\n").unwrap();
        let m = BandModel::from_csv(&path).unwrap();
        assert_eq!(m.kind(), ModelKind::Tabulated);
        assert_eq!(m.band_bottom(), -1.0);
        assert!((m.delta(0.0) - m.delta(0.0)).abs() == 0.0);
        std::fs::write(&path, "energy,delta\n-1,0\n-0.5,0.3\n0.5,0.3\n1,0\n").unwrap();
        assert!(BandModel::from_csv(&path).is_err());
    }

    #[test]
    fn serde_round_trip_revalidates() {
        let m = BandModel::power_edge(0.3, -1.0, 1.0, 2.0, 2.0).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        let back: BandModel = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
        let bad =
            r#"{"kind":"FlatBand","strength":-1,"band_bottom":-1,"band_top":1,"edge_exp_bottom":0,"edge_exp_top":0}"#;
        assert!(serde_json::from_str::<BandModel>(bad).is_err());
    }
}
