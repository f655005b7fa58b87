//! Self-energy Σ(ω) = ∫ Δ(E)/(ω−E) dE on the standard sheet, its boundary
//! values on the cut, and its continuation to other Riemann sheets.
//!
//! Sheet `n` is defined by Σ_n(w) = Σ_0(w) + 2πi·n·sgn(Im w)·Δ̃(w). For
//! `n = 1` this is the continuation of Σ_0 through the band from either
//! half-plane, so sheet 1 below the axis joins sheet 0 above it and the
//! Schwarz mirror of a sheet-1 pole is again on sheet 1. The semicircle has
//! only two sheets; `±1` both select Δ₀(w + √(w²−1)).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::band::{BandModel, ModelKind};
use crate::error::{Error, Result};
use crate::quad;

/// Distance from a band edge inside which evaluation is refused.
pub const BRANCH_GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Side {
    Above,
    Below,
    #[default]
    None,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Above => 1.0,
            Side::Below => -1.0,
            Side::None => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SheetPoint {
    pub w: Complex64,
    pub sheet: i32,
}

impl SheetPoint {
    pub fn new(w: Complex64, sheet: i32) -> Self {
        Self { w, sheet }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfEnergySample {
    pub value: Complex64,
    pub derivative: Complex64,
    pub point: SheetPoint,
}

/// Boundary values Σ(E ± i0) = Σ′ ∓ iπΔ inside the band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutValues {
    pub real: f64,
    pub imag_above: f64,
    pub imag_below: f64,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn check_branch(model: &BandModel, w: Complex64) -> Result<()> {
    if (w - model.band_bottom()).norm() < BRANCH_GUARD || (w - model.band_top()).norm() < BRANCH_GUARD {
        Err(Error::BranchPoint { w })
    } else {
        Ok(())
    }
}

/// Which side of the real axis the evaluation refers to: +1 above, −1
/// below, 0 on the real axis outside the band.
fn resolve_side(model: &BandModel, w: Complex64, side: Side) -> Result<f64> {
    if w.im != 0.0 {
        return Ok(w.im.signum());
    }
    let e = w.re;
    if e > model.band_bottom() && e < model.band_top() {
        match side {
            Side::None => Err(Error::OnCut(e)),
            s => Ok(s.sign()),
        }
    } else {
        Ok(0.0)
    }
}

fn sheet_valid(model: &BandModel, sheet: i32) -> Result<()> {
    match model.kind() {
        ModelKind::Semicircle if sheet.abs() > 1 => Err(Error::InvalidSheet { sheet, kind: model.kind() }),
        ModelKind::Tabulated if sheet != 0 => Err(Error::ContinuationUnavailable(model.kind())),
        _ => Ok(()),
    }
}

/// √(w²−1) as √(w−1)·√(w+1); on the real axis `s` picks the side.
fn semicircle_root(w: Complex64, s: f64) -> Complex64 {
    if w.im == 0.0 && w.re.abs() < 1.0 {
        c(0.0, s * (1.0 - w.re * w.re).sqrt())
    } else {
        (w - 1.0).sqrt() * (w + 1.0).sqrt()
    }
}

/// Log(w−E_b) − Log(w−E_t) with the boundary value selected by `s` on the cut.
fn log_ratio(model: &BandModel, w: Complex64, s: f64) -> Complex64 {
    let (eb, et) = (model.band_bottom(), model.band_top());
    if w.im == 0.0 {
        let e = w.re;
        let re = ((e - eb).abs() / (e - et).abs()).ln();
        if e > eb && e < et {
            c(re, -PI * s)
        } else {
            c(re, 0.0)
        }
    } else {
        (w - eb).ln() - (w - et).ln()
    }
}

fn log_ratio_prime(model: &BandModel, w: Complex64) -> Complex64 {
    (w - model.band_bottom()).inv() - (w - model.band_top()).inv()
}

/// Σ and dΣ/dω on the standard sheet by direct quadrature of the Cauchy
/// integral. Inside the band the linear Taylor part of Δ at Re w is taken
/// out and integrated analytically, leaving a bounded integrand.
fn quadrature_sigma(model: &BandModel, w: Complex64, s: f64, derivative: bool) -> Complex64 {
    let (eb, et) = (model.band_bottom(), model.band_top());
    let scale = model.strength();
    let (abs_tol, rel_tol) = (1e-14 * scale, 1e-13);
    let x0 = w.re;
    let subtract = x0 > eb && x0 < et;
    let (d0, d1) = if subtract { (model.delta(x0), model.delta_prime(x0)) } else { (0.0, 0.0) };
    let power = if derivative { 2 } else { 1 };

    // integrand given E, E−E_b, E_t−E and E−x0
    let kernel = |e: f64, db: f64, dt: f64, from_x0: f64| -> Complex64 {
        let num = model.delta_with_offsets(e, db, dt) - d0 - d1 * from_x0;
        let den = c(-from_x0, w.im);
        let v = num / den.powi(power);
        if derivative {
            -v
        } else {
            v
        }
    };

    let integral = if model.kind() == ModelKind::Tabulated {
        let mut breaks: Vec<f64> = model.samples().unwrap_or(&[]).iter().map(|p| p.0).collect();
        if subtract {
            let k = breaks.partition_point(|&b| b < x0);
            if breaks[k] != x0 {
                breaks.insert(k, x0);
            }
        }
        quad::adaptive_gk(|e| kernel(e, e - eb, et - e, e - x0), &breaks, abs_tol, rel_tol, 4000).value
    } else if subtract {
        let left = quad::tanh_sinh(|e, da, db| kernel(e, da, et - e, -db), eb, x0, abs_tol, rel_tol);
        let right = quad::tanh_sinh(|e, da, db| kernel(e, e - eb, db, da), x0, et, abs_tol, rel_tol);
        left.value + right.value
    } else {
        quad::tanh_sinh(|e, da, db| kernel(e, da, db, e - x0), eb, et, abs_tol, rel_tol).value
    };

    if !subtract {
        return integral;
    }
    let lg = log_ratio(model, w, s);
    let offset = c(0.0, w.im);
    if derivative {
        let lgp = log_ratio_prime(model, w);
        integral + lgp * d0 + (lg + offset * lgp) * d1
    } else {
        integral + lg * d0 + (offset * lg - model.width()) * d1
    }
}

fn standard(model: &BandModel, w: Complex64, s: f64) -> Complex64 {
    let d0 = model.strength();
    match model.kind() {
        ModelKind::Semicircle => (w - semicircle_root(w, s)) * d0,
        ModelKind::FlatBand => log_ratio(model, w, s) * d0,
        _ => quadrature_sigma(model, w, s, false),
    }
}

fn standard_prime(model: &BandModel, w: Complex64, s: f64) -> Complex64 {
    let d0 = model.strength();
    match model.kind() {
        ModelKind::Semicircle => (c(1.0, 0.0) - w / semicircle_root(w, s)) * d0,
        ModelKind::FlatBand => log_ratio_prime(model, w) * d0,
        _ => quadrature_sigma(model, w, s, true),
    }
}

/// Σ on the standard sheet. Real `w` inside the band needs a side hint and
/// returns the boundary value Σ(E ± i0).
pub fn sigma_standard(model: &BandModel, w: Complex64, side: Side) -> Result<Complex64> {
    check_branch(model, w)?;
    let s = resolve_side(model, w, side)?;
    Ok(standard(model, w, s))
}

pub fn sigma_cut_values(model: &BandModel, e: f64) -> Result<CutValues> {
    if !(e > model.band_bottom() && e < model.band_top()) {
        return Err(Error::Domain(format!("energy {e} is not inside the band")));
    }
    check_branch(model, c(e, 0.0))?;
    let real = cut_real_part(model, e);
    let half_width = PI * model.delta(e);
    Ok(CutValues { real, imag_above: -half_width, imag_below: half_width })
}

/// Σ′(E), the principal value, assuming E lies strictly inside the band.
pub(crate) fn cut_real_part(model: &BandModel, e: f64) -> f64 {
    let d0 = model.strength();
    match model.kind() {
        ModelKind::Semicircle => d0 * e,
        ModelKind::FlatBand => d0 * ((e - model.band_bottom()) / (model.band_top() - e)).ln(),
        _ => quadrature_sigma(model, c(e, 0.0), 1.0, false).re,
    }
}

fn sheet_shift(model: &BandModel, w: Complex64, sheet: i32, s: f64) -> Result<Complex64> {
    if sheet == 0 || s == 0.0 {
        return Ok(c(0.0, 0.0));
    }
    let dt = if w.im == 0.0 { c(model.delta(w.re), 0.0) } else { model.continue_delta(w)? };
    Ok(c(0.0, 2.0 * PI * sheet as f64 * s) * dt)
}

fn sheet_shift_prime(model: &BandModel, w: Complex64, sheet: i32, s: f64) -> Result<Complex64> {
    if sheet == 0 || s == 0.0 {
        return Ok(c(0.0, 0.0));
    }
    let dt = if w.im == 0.0 { c(model.delta_prime(w.re), 0.0) } else { model.continue_delta_prime(w)? };
    Ok(c(0.0, 2.0 * PI * sheet as f64 * s) * dt)
}

fn check_sheet_point(model: &BandModel, p: SheetPoint, side: Side) -> Result<f64> {
    sheet_valid(model, p.sheet)?;
    check_branch(model, p.w)?;
    let s = resolve_side(model, p.w, side)?;
    if s == 0.0 && p.sheet != 0 && model.kind() != ModelKind::Semicircle {
        return Err(Error::SheetAmbiguous { sheet: p.sheet, w: p.w.re });
    }
    Ok(s)
}

/// Σ on an arbitrary sheet, with a side hint for real `w` inside the band.
pub fn sigma_on_sheet_side(model: &BandModel, p: SheetPoint, side: Side) -> Result<Complex64> {
    let s = check_sheet_point(model, p, side)?;
    if model.kind() == ModelKind::Semicircle && p.sheet != 0 {
        return Ok((p.w + semicircle_root(p.w, s)) * model.strength());
    }
    Ok(standard(model, p.w, s) + sheet_shift(model, p.w, p.sheet, s)?)
}

pub fn sigma_on_sheet(model: &BandModel, p: SheetPoint) -> Result<Complex64> {
    sigma_on_sheet_side(model, p, Side::None)
}

pub fn sigma_derivative_side(model: &BandModel, p: SheetPoint, side: Side) -> Result<Complex64> {
    let s = check_sheet_point(model, p, side)?;
    if model.kind() == ModelKind::Semicircle && p.sheet != 0 {
        return Ok((c(1.0, 0.0) + p.w / semicircle_root(p.w, s)) * model.strength());
    }
    Ok(standard_prime(model, p.w, s) + sheet_shift_prime(model, p.w, p.sheet, s)?)
}

pub fn sigma_derivative(model: &BandModel, p: SheetPoint) -> Result<Complex64> {
    sigma_derivative_side(model, p, Side::None)
}

/// Σ_sheet off the real axis without the branch-point guard.
pub(crate) fn sigma_off_axis(model: &BandModel, w: Complex64, sheet: i32) -> Result<Complex64> {
    sheet_valid(model, sheet)?;
    let s = w.im.signum();
    if model.kind() == ModelKind::Semicircle && sheet != 0 {
        return Ok((w + semicircle_root(w, s)) * model.strength());
    }
    Ok(standard(model, w, s) + sheet_shift(model, w, sheet, s)?)
}

pub fn sample(model: &BandModel, p: SheetPoint) -> Result<SelfEnergySample> {
    Ok(SelfEnergySample { value: sigma_on_sheet(model, p)?, derivative: sigma_derivative(model, p)?, point: p })
}
