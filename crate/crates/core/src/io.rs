//! CSV and JSON encodings of survival series.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::band::BandModel;
use crate::error::{Error, Result};
use crate::survival::{Method, SurvivalSeries};

/// 17 significant digits, enough to round-trip an f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `t,re_g,im_g,p` rows with LF line endings.
pub fn write_series_csv<W: Write>(series: &SurvivalSeries, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["t", "re_g", "im_g", "p"])?;
    for i in 0..series.len() {
        let g = series.g[i];
        w.write_record([fmt_f64(series.times[i]), fmt_f64(g.re), fmt_f64(g.im), fmt_f64(series.p[i])])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series_csv<R: Read>(input: R, method: Method) -> Result<SurvivalSeries> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "re_g", "im_g", "p"] {
        return Err(Error::Config("expected header `t,re_g,im_g,p`".into()));
    }
    let (mut times, mut g) = (Vec::new(), Vec::new());
    for rec in r.deserialize::<(f64, f64, f64, f64)>() {
        let (t, re, im, _) = rec?;
        times.push(t);
        g.push(Complex64::new(re, im));
    }
    Ok(SurvivalSeries::new(times, g, method))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub model: BandModel,
    pub eps: f64,
    pub method: Method,
    pub t: Vec<f64>,
    pub re_g: Vec<f64>,
    pub im_g: Vec<f64>,
    pub p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl SeriesDocument {
    pub fn new(model: &BandModel, eps: f64, series: &SurvivalSeries) -> Self {
        Self {
            model: model.clone(),
            eps,
            method: series.method,
            t: series.times.clone(),
            re_g: series.g.iter().map(|z| z.re).collect(),
            im_g: series.g.iter().map(|z| z.im).collect(),
            p: series.p.clone(),
            warnings: series.warnings.clone(),
        }
    }

    pub fn series(&self) -> SurvivalSeries {
        let g = self.re_g.iter().zip(&self.im_g).map(|(re, im)| Complex64::new(*re, *im)).collect();
        let mut s = SurvivalSeries::new(self.t.clone(), g, self.method);
        s.warnings = self.warnings.clone();
        s
    }
}

pub fn write_series_json<W: Write>(model: &BandModel, eps: f64, series: &SurvivalSeries, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &SeriesDocument::new(model, eps, series))?;
    out.write_all(b"\n")?;
    Ok(())
}
