//! Run configuration, readable from a flat `key = value` file and
//! overridable key by key.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::band::BandModel;
use crate::error::{Error, Result};
use crate::oracle::Scheme;
use crate::self_energy::Side;
use crate::survival::{fgr_time, Method, QuadratureConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelChoice {
    Semicircle,
    Flat,
    PowerEdge,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelChoice,
    pub delta0: f64,
    pub eps: f64,
    pub table: Option<PathBuf>,
    pub band_bottom: f64,
    pub band_top: f64,
    pub beta_bottom: f64,
    pub beta_top: f64,
    pub methods: Vec<Method>,
    /// End of the time grid in golden-rule units; ignored when `tmax_abs` is set.
    pub tmax_tau: f64,
    pub tmax_abs: Option<f64>,
    pub points: usize,
    pub quadrature: QuadratureConfig,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub oracle_n: usize,
    pub scheme: Scheme,
    /// Δ₀ sweep `(from, to, count)` for pole trajectories.
    pub sweep: Option<(f64, f64, usize)>,
    pub w_re: f64,
    pub w_im: f64,
    pub sheet: i32,
    pub side: Side,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub window: Option<(f64, f64)>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelChoice::Flat,
            delta0: 0.02,
            eps: -0.4,
            table: None,
            band_bottom: -1.0,
            band_top: 1.0,
            beta_bottom: 0.5,
            beta_top: 0.5,
            methods: vec![Method::CutIntegral],
            tmax_tau: 20.0,
            tmax_abs: None,
            points: 600,
            quadrature: QuadratureConfig::default(),
            output: None,
            format: Format::Csv,
            oracle_n: 2000,
            scheme: Scheme::UniformLevels,
            sweep: None,
            w_re: 0.0,
            w_im: 1.0,
            sheet: 0,
            side: Side::None,
            e_min: None,
            e_max: None,
            window: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.trim().parse().map_err(|_| Error::Config(format!("cannot parse `{value}` for `{key}`")))
}

fn parse_pair(key: &str, value: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = value.split(':').collect();
    match parts.as_slice() {
        [a, b] => Ok((parse(key, a)?, parse(key, b)?)),
        _ => Err(Error::Config(format!("`{key}` expects `lo:hi`, got `{value}`"))),
    }
}

pub fn parse_method(s: &str) -> Result<Method> {
    match s.trim() {
        "cut" => Ok(Method::CutIntegral),
        "resonance" => Ok(Method::ResonanceExpansion),
        "oracle" => Ok(Method::Oracle),
        "fgr" => Ok(Method::Fgr),
        "cut-only" => Ok(Method::CutOnly),
        other => Err(Error::Config(format!("unknown method `{other}`"))),
    }
}

pub fn parse_model(s: &str) -> Result<ModelChoice> {
    match s.trim() {
        "semicircle" => Ok(ModelChoice::Semicircle),
        "flat" => Ok(ModelChoice::Flat),
        "power-edge" => Ok(ModelChoice::PowerEdge),
        "tabulated" => Ok(ModelChoice::Tabulated),
        other => Err(Error::Config(format!("unknown model `{other}`"))),
    }
}

fn model_name(m: ModelChoice) -> &'static str {
    match m {
        ModelChoice::Semicircle => "semicircle",
        ModelChoice::Flat => "flat",
        ModelChoice::PowerEdge => "power-edge",
        ModelChoice::Tabulated => "tabulated",
    }
}

fn side_name(s: Side) -> &'static str {
    match s {
        Side::Above => "above",
        Side::Below => "below",
        Side::None => "none",
    }
}

impl RunConfig {
    /// Sets one key. Unknown keys are an error.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "model" => self.model = parse_model(v)?,
            "delta0" => self.delta0 = parse(key, v)?,
            "eps" => self.eps = parse(key, v)?,
            "table" => self.table = (!v.is_empty()).then(|| PathBuf::from(v)),
            "band_bottom" => self.band_bottom = parse(key, v)?,
            "band_top" => self.band_top = parse(key, v)?,
            "beta_bottom" => self.beta_bottom = parse(key, v)?,
            "beta_top" => self.beta_top = parse(key, v)?,
            "methods" => self.methods = v.split(',').map(parse_method).collect::<Result<_>>()?,
            "tmax_tau" => {
                self.tmax_tau = parse(key, v)?;
                self.tmax_abs = None;
            }
            "tmax_abs" => self.tmax_abs = if v.is_empty() { None } else { Some(parse(key, v)?) },
            "points" => self.points = parse(key, v)?,
            "abs_tol" => self.quadrature.abs_tol = parse(key, v)?,
            "rel_tol" => self.quadrature.rel_tol = parse(key, v)?,
            "max_subdivisions" => self.quadrature.max_subdivisions = parse(key, v)?,
            "splitting" => self.quadrature.oscillation_splitting = parse(key, v)?,
            "output" => self.output = (!v.is_empty()).then(|| PathBuf::from(v)),
            "format" => {
                self.format = match v {
                    "csv" => Format::Csv,
                    "json" => Format::Json,
                    _ => return Err(Error::Config(format!("unknown format `{v}`"))),
                }
            }
            "oracle_n" => self.oracle_n = parse(key, v)?,
            "scheme" => {
                self.scheme = match v {
                    "chain" => Scheme::ChainOfSites,
                    "uniform" => Scheme::UniformLevels,
                    _ => return Err(Error::Config(format!("unknown scheme `{v}`"))),
                }
            }
            "sweep" => {
                self.sweep = if v.is_empty() {
                    None
                } else {
                    let parts: Vec<&str> = v.split(':').collect();
                    match parts.as_slice() {
                        [a, b, n] => Some((parse(key, a)?, parse(key, b)?, parse(key, n)?)),
                        _ => return Err(Error::Config(format!("`sweep` expects `from:to:count`, got `{v}`"))),
                    }
                }
            }
            "w_re" => self.w_re = parse(key, v)?,
            "w_im" => self.w_im = parse(key, v)?,
            "sheet" => self.sheet = parse(key, v)?,
            "side" => {
                self.side = match v {
                    "above" => Side::Above,
                    "below" => Side::Below,
                    "none" => Side::None,
                    _ => return Err(Error::Config(format!("unknown side `{v}`"))),
                }
            }
            "e_min" => self.e_min = if v.is_empty() { None } else { Some(parse(key, v)?) },
            "e_max" => self.e_max = if v.is_empty() { None } else { Some(parse(key, v)?) },
            "window" => self.window = if v.is_empty() { None } else { Some(parse_pair(key, v)?) },
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    /// Serializes every key; parsing the result gives back the same config.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let opt = |v: Option<f64>| v.map(|x| format!("{x:?}")).unwrap_or_default();
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let _ = writeln!(s, "model = {}", model_name(self.model));
        let _ = writeln!(s, "delta0 = {:?}", self.delta0);
        let _ = writeln!(s, "eps = {:?}", self.eps);
        let _ = writeln!(s, "table = {}", path(&self.table));
        let _ = writeln!(s, "band_bottom = {:?}", self.band_bottom);
        let _ = writeln!(s, "band_top = {:?}", self.band_top);
        let _ = writeln!(s, "beta_bottom = {:?}", self.beta_bottom);
        let _ = writeln!(s, "beta_top = {:?}", self.beta_top);
        let methods: Vec<&str> = self.methods.iter().map(|m| m.name()).collect();
        let _ = writeln!(s, "methods = {}", methods.join(","));
        let _ = writeln!(s, "tmax_tau = {:?}", self.tmax_tau);
        let _ = writeln!(s, "tmax_abs = {}", opt(self.tmax_abs));
        let _ = writeln!(s, "points = {}", self.points);
        let _ = writeln!(s, "abs_tol = {:?}", self.quadrature.abs_tol);
        let _ = writeln!(s, "rel_tol = {:?}", self.quadrature.rel_tol);
        let _ = writeln!(s, "max_subdivisions = {}", self.quadrature.max_subdivisions);
        let _ = writeln!(s, "splitting = {}", self.quadrature.oscillation_splitting);
        let _ = writeln!(s, "output = {}", path(&self.output));
        let _ = writeln!(s, "format = {}", if self.format == Format::Csv { "csv" } else { "json" });
        let _ = writeln!(s, "oracle_n = {}", self.oracle_n);
        let _ = writeln!(s, "scheme = {}", if self.scheme == Scheme::ChainOfSites { "chain" } else { "uniform" });
        let _ = writeln!(s, "sweep = {}", self.sweep.map(|(a, b, n)| format!("{a:?}:{b:?}:{n}")).unwrap_or_default());
        let _ = writeln!(s, "w_re = {:?}", self.w_re);
        let _ = writeln!(s, "w_im = {:?}", self.w_im);
        let _ = writeln!(s, "sheet = {}", self.sheet);
        let _ = writeln!(s, "side = {}", side_name(self.side));
        let _ = writeln!(s, "e_min = {}", opt(self.e_min));
        let _ = writeln!(s, "e_max = {}", opt(self.e_max));
        let _ = writeln!(s, "window = {}", self.window.map(|(a, b)| format!("{a:?}:{b:?}")).unwrap_or_default());
        s
    }

    pub fn band_model(&self) -> Result<BandModel> {
        match self.model {
            ModelChoice::Semicircle => BandModel::semicircle(self.delta0),
            ModelChoice::Flat => BandModel::flat_band(self.delta0),
            ModelChoice::PowerEdge => {
                BandModel::power_edge(self.delta0, self.band_bottom, self.band_top, self.beta_bottom, self.beta_top)
            }
            ModelChoice::Tabulated => {
                let path = self.table.as_ref().ok_or_else(|| Error::Config("tabulated model needs `table`".into()))?;
                BandModel::from_csv(path)
            }
        }
    }

    /// End of the time grid in absolute units.
    pub fn t_max(&self, model: &BandModel) -> Result<f64> {
        match self.tmax_abs {
            Some(t) => Ok(t),
            None => Ok(self.tmax_tau * fgr_time(model, self.eps)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_fixed_point() {
        let mut cfg = RunConfig::default();
        cfg.apply_text(
            "model = semicircle\ndelta0 = 0.05 # comment\nmethods = cut,resonance\nwindow = 5:20\nsweep = 0.1:2:40\n",
        )
        .unwrap();
        let text = cfg.to_text();
        let back = RunConfig::from_text(&text).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(RunConfig::from_text("colour = blue").is_err());
        assert!(RunConfig::from_text("delta0 0.1").is_err());
        assert!(RunConfig::from_text("methods = cut,magic").is_err());
    }
}
