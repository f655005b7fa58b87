//! Poles of g(ω) = 1/(ω − ε − Σ(ω)): real bound states on the standard
//! sheet and complex resonances on the continued sheets.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band::{BandModel, ModelKind};
use crate::error::{Error, Result};
use crate::self_energy::{
    cut_real_part, sigma_derivative, sigma_on_sheet, sigma_standard, SheetPoint, Side, BRANCH_GUARD,
};

/// Residual accepted when sorting quadratic roots onto sheets.
pub const CLASSIFY_TOL: f64 = 1e-9;
/// Poles closer than this are merged.
pub const DEDUP_TOL: f64 = 1e-9;
const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pole {
    pub energy: Complex64,
    pub sheet: i32,
    pub order: u8,
    /// Residue weight 1/(1 − Σ′); unset for second-order poles.
    pub weight: Option<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoleClass {
    BoundState,
    Resonance,
    AntiResonance,
    /// Real pole on a continued sheet.
    Virtual,
}

impl Pole {
    pub fn class(&self) -> PoleClass {
        match (self.sheet, self.energy.im) {
            (0, _) => PoleClass::BoundState,
            (_, im) if im < 0.0 => PoleClass::Resonance,
            (_, im) if im > 0.0 => PoleClass::AntiResonance,
            _ => PoleClass::Virtual,
        }
    }

    /// |ω − ε − Σ_sheet(ω)|.
    pub fn residual(&self, model: &BandModel, eps: f64) -> Result<f64> {
        let s = sigma_on_sheet(model, SheetPoint::new(self.energy, self.sheet))?;
        Ok((self.energy - eps - s).norm())
    }
}

fn cmp_poles(a: &Pole, b: &Pole) -> Ordering {
    a.sheet.cmp(&b.sheet).then(a.energy.re.total_cmp(&b.energy.re)).then(a.energy.im.total_cmp(&b.energy.im))
}

fn real_f(model: &BandModel, eps: f64, w: f64) -> f64 {
    w - eps - sigma_standard(model, Complex64::new(w, 0.0), Side::None).map(|s| s.re).unwrap_or(f64::NAN)
}

/// Root of the increasing function `f(edge + dir·e^x)` for x in [lo, hi],
/// where `dir = ±1` points away from the band.
fn log_offset_bisect(f: impl Fn(f64) -> f64, edge: f64, dir: f64, mut lo: f64, mut hi: f64) -> f64 {
    let at = |x: f64| edge + dir * x.exp();
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let v = dir * f(at(mid));
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if at(hi) == at(lo) || (at(hi) - at(lo)).abs() <= 2.0 * f64::EPSILON * at(mid).abs() {
            break;
        }
    }
    at(0.5 * (lo + hi))
}

/// Real solutions of ω = ε + Σ₀(ω) outside the band. On each side the
/// defining function is monotone, so a sign change over
/// [E_t + 10⁻⁹, E_t + 10(|ε|+Δ₀+1)] (and mirror) brackets exactly one root.
pub fn real_poles_standard_sheet(model: &BandModel, eps: f64) -> Vec<Pole> {
    let reach = 10.0 * (eps.abs() + model.strength() + 1.0);
    let mut out = Vec::new();
    for (edge, dir) in [(model.band_bottom(), -1.0), (model.band_top(), 1.0)] {
        let f = |w: f64| real_f(model, eps, w);
        let lo = BRANCH_GUARD.ln();
        if dir * f(edge + dir * BRANCH_GUARD) >= 0.0 {
            continue;
        }
        let mut hi = reach.ln();
        while dir * f(edge + dir * hi.exp()) < 0.0 {
            hi += std::f64::consts::LN_2;
        }
        let w = log_offset_bisect(f, edge, dir, lo, hi);
        let energy = Complex64::new(w, 0.0);
        let weight = sigma_derivative(model, SheetPoint::new(energy, 0)).ok().map(|d| 1.0 / (1.0 - d));
        out.push(Pole { energy, sheet: 0, order: 1, weight });
    }
    out.sort_by(cmp_poles);
    out
}

/// Roots of (1−2Δ₀)ω² − 2ε(1−Δ₀)ω + ε² + Δ₀² = 0, the squared pole equation
/// of the semicircle model. The roots are not yet assigned to sheets.
pub fn semicircle_pole_closed_form(delta0: f64, eps: f64) -> Result<(Complex64, Complex64)> {
    let a = 1.0 - 2.0 * delta0;
    if a == 0.0 {
        let linear_root =
            if eps != 0.0 { Some((eps * eps + delta0 * delta0) / (eps * (2.0 - 2.0 * delta0))) } else { None };
        return Err(Error::DegenerateQuadratic { linear_root });
    }
    let disc = Complex64::new(eps * eps - 1.0 + 2.0 * delta0, 0.0).sqrt();
    let b = eps * (1.0 - delta0);
    Ok(((b + disc * delta0) / a, (b - disc * delta0) / a))
}

/// Sheet on which `w` solves the semicircle pole equation to within
/// [`CLASSIFY_TOL`], by direct substitution.
pub fn classify_semicircle_root(delta0: f64, eps: f64, w: Complex64) -> Result<Option<i32>> {
    let model = BandModel::semicircle(delta0)?;
    let tol = CLASSIFY_TOL * eps.abs().max(1.0);
    let mut best: Option<(i32, f64)> = None;
    for sheet in [0, 1] {
        let r = match sigma_on_sheet(&model, SheetPoint::new(w, sheet)) {
            Ok(s) => (w - eps - s).norm(),
            Err(Error::OnCut(_)) | Err(Error::BranchPoint { .. }) => continue,
            Err(e) => return Err(e),
        };
        if r <= tol && best.is_none_or(|(_, b)| r < b) {
            best = Some((sheet, r));
        }
    }
    Ok(best.map(|b| b.0))
}

/// Closed-form semicircle poles with their sheets and weights. A zero
/// discriminant yields one order-2 pole with no weight.
pub fn semicircle_poles(delta0: f64, eps: f64) -> Result<Vec<Pole>> {
    let model = BandModel::semicircle(delta0)?;
    let (w1, w2) = semicircle_pole_closed_form(delta0, eps)?;
    let double = (w1 - w2).norm() <= 1e-12 * w1.norm().max(1.0);
    let roots: Vec<Complex64> = if double { vec![0.5 * (w1 + w2)] } else { vec![w1, w2] };
    let mut out = Vec::new();
    for w in roots {
        if let Some(sheet) = classify_semicircle_root(delta0, eps, w)? {
            let (order, weight) = if double { (2, None) } else { (1, Some(pole_weight_at(&model, w, sheet)?)) };
            out.push(Pole { energy: w, sheet, order, weight });
        }
    }
    out.sort_by(cmp_poles);
    Ok(out)
}

fn pole_weight_at(model: &BandModel, w: Complex64, sheet: i32) -> Result<Complex64> {
    Ok(1.0 / (1.0 - sigma_derivative(model, SheetPoint::new(w, sheet))?))
}

pub fn pole_weight(model: &BandModel, pole: &Pole) -> Result<Complex64> {
    if pole.order >= 2 {
        return Err(Error::SecondOrderPole);
    }
    pole_weight_at(model, pole.energy, pole.sheet)
}

/// Newton iteration for ω − ε − Σ_sheet(ω) = 0. Returns `None` when the
/// iteration leaves the domain or fails to converge.
pub fn newton_refine(model: &BandModel, eps: f64, sheet: i32, seed: Complex64) -> Option<Complex64> {
    let scale = eps.abs().max(1.0);
    // the pole equation is satisfied asymptotically at infinity when Σ grows linearly
    let reach = 1e4 * (1.0 + eps.abs() + model.strength() + model.width());
    let mut w = seed;
    for _ in 0..NEWTON_MAX_ITER {
        let p = SheetPoint::new(w, sheet);
        let f = w - eps - sigma_on_sheet(model, p).ok()?;
        let fp = 1.0 - sigma_derivative(model, p).ok()?;
        if fp.norm() == 0.0 || !f.is_finite() || !fp.is_finite() {
            return None;
        }
        let step = f / fp;
        w -= step;
        if !w.is_finite() || w.norm() > reach {
            return None;
        }
        if step.norm() <= 4.0 * f64::EPSILON * w.norm().max(1.0) {
            break;
        }
    }
    let f = w - eps - sigma_on_sheet(model, SheetPoint::new(w, sheet)).ok()?;
    (f.norm() <= 1e-10 * scale).then_some(w)
}

fn seeds(model: &BandModel, eps: f64, sheet: i32) -> Vec<Complex64> {
    let (eb, et) = (model.band_bottom(), model.band_top());
    let width = et - eb;
    let mut out = Vec::new();
    if eps > eb && eps < et {
        let shift = cut_real_part(model, eps);
        let half = PI * model.delta(eps) * sheet.abs() as f64;
        out.push(Complex64::new(eps + shift, -half));
        out.push(Complex64::new(eps + shift, half));
    }
    for i in 0..9 {
        let re = eb + width * (i as f64 + 0.5) / 9.0;
        for depth in [0.02, 0.1, 0.3, 0.8] {
            let im = depth * width;
            out.push(Complex64::new(re, -im));
            out.push(Complex64::new(re, im));
        }
    }
    if model.kind() == ModelKind::Semicircle {
        if let Ok((a, b)) = semicircle_pole_closed_form(model.strength(), eps) {
            out.extend([a, b, a.conj(), b.conj()]);
        }
    }
    out.retain(|w| w.im != 0.0 || !(w.re >= eb && w.re <= et));
    out
}

/// Complex poles on `sheet`, found by Newton from the golden-rule estimate
/// ε + Σ′(ε) − iπΔ(ε), a coarse grid over the strip below (and above) the
/// band, and for the semicircle the closed-form roots.
pub fn resonance_poles(model: &BandModel, eps: f64, sheet: i32) -> Result<Vec<Pole>> {
    if model.kind() == ModelKind::Tabulated {
        return Err(Error::ContinuationUnavailable(model.kind()));
    }
    if sheet == 0 {
        return Ok(real_poles_standard_sheet(model, eps));
    }
    if model.kind() == ModelKind::Semicircle && sheet.abs() > 1 {
        return Err(Error::InvalidSheet { sheet, kind: model.kind() });
    }
    let found: Vec<Complex64> =
        seeds(model, eps, sheet).into_par_iter().filter_map(|s| newton_refine(model, eps, sheet, s)).collect();
    let mut poles: Vec<Pole> = Vec::new();
    for mut w in found {
        if w.im.abs() <= 1e-12 {
            // real roots are only meaningful where the sheet is single-valued on the axis
            if model.kind() != ModelKind::Semicircle || model.contains(w.re) {
                continue;
            }
            w.im = 0.0;
        }
        if poles.iter().any(|p| (p.energy - w).norm() <= DEDUP_TOL) {
            continue;
        }
        let weight = pole_weight_at(model, w, sheet).ok();
        poles.push(Pole { energy: w, sheet, order: 1, weight });
    }
    poles.sort_by(cmp_poles);
    Ok(poles)
}

/// Lower-half-plane pole of `sheet` nearest the golden-rule estimate.
pub fn fgr_pole(model: &BandModel, eps: f64) -> Result<Option<Pole>> {
    let est = fgr_estimate(model, eps)?;
    let poles = resonance_poles(model, eps, 1)?;
    Ok(poles
        .into_iter()
        .filter(|p| p.energy.im < 0.0)
        .min_by(|a, b| (a.energy - est).norm().total_cmp(&(b.energy - est).norm())))
}

/// ε + Σ′(ε) − iπΔ(ε).
pub fn fgr_estimate(model: &BandModel, eps: f64) -> Result<Complex64> {
    if !(eps > model.band_bottom() && eps < model.band_top()) {
        return Err(Error::Domain(format!("level energy {eps} is outside the band")));
    }
    Ok(Complex64::new(eps + cut_real_part(model, eps), -PI * model.delta(eps)))
}

/// Standard-sheet bound-state onsets of the semicircle model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemicircleOnsets {
    pub eps: f64,
    /// (ε² + 1)/2, the threshold quoted for real poles in the literature.
    pub quoted_threshold: f64,
    /// Smallest Δ₀ with at least one bound state, from bisection over the
    /// pole finder's bound-state count.
    pub first_onset: f64,
    /// Smallest Δ₀ with two bound states.
    pub second_onset: f64,
}

fn count_bound(delta0: f64, eps: f64) -> usize {
    BandModel::semicircle(delta0).map(|m| real_poles_standard_sheet(&m, eps).len()).unwrap_or(0)
}

fn onset(eps: f64, count: usize) -> f64 {
    let (mut lo, mut hi) = (1e-6, 20.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if count_bound(mid, eps) >= count {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub fn semicircle_onsets(eps: f64) -> SemicircleOnsets {
    SemicircleOnsets {
        eps,
        quoted_threshold: 0.5 * (eps * eps + 1.0),
        first_onset: onset(eps, 1),
        second_onset: onset(eps, 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_band_symmetric_pair() {
        let m = BandModel::flat_band(0.2).unwrap();
        let p = real_poles_standard_sheet(&m, 0.0);
        assert_eq!(p.len(), 2);
        assert!((p[0].energy.re + p[1].energy.re).abs() < 1e-12);
        let w = p[1].energy.re;
        assert!((w - 0.2 * ((w + 1.0) / (w - 1.0)).ln()).abs() < 1e-13);
        assert!((w - 1.0127).abs() < 1e-3, "{w}");
        let wt = p[1].weight.unwrap();
        assert!((wt.re - 1.0 / (1.0 + 0.4 / (w * w - 1.0))).abs() < 1e-12);
        assert!(wt.im == 0.0 && wt.re > 0.0 && wt.re <= 1.0);
    }

    #[test]
    fn semicircle_bound_states() {
        let m = BandModel::semicircle(0.6).unwrap();
        assert!(real_poles_standard_sheet(&m, 0.0).is_empty());
        let m = BandModel::semicircle(1.2).unwrap();
        let p = real_poles_standard_sheet(&m, 0.0);
        assert_eq!(p.len(), 2);
        let exact = (1.44f64 / 1.4).sqrt();
        assert!((p[1].energy.re - exact).abs() < 1e-13);
        assert!((p[1].weight.unwrap().re - 1.0 / 7.0).abs() < 1e-10);
    }

    #[test]
    fn closed_form_examples() {
        let (a, b) = semicircle_pole_closed_form(2.0, 0.0).unwrap();
        let r = 2.0 * 3f64.sqrt() / 3.0;
        assert!((a.re + r).abs() < 1e-14 && (b.re - r).abs() < 1e-14);
        match semicircle_pole_closed_form(0.5, 0.0) {
            Err(Error::DegenerateQuadratic { linear_root: None }) => {}
            other => panic!("{other:?}"),
        }
        match semicircle_pole_closed_form(0.5, 0.3) {
            Err(Error::DegenerateQuadratic { linear_root: Some(x) }) => {
                assert!((x - (0.09 + 0.25) / 0.3).abs() < 1e-14)
            }
            other => panic!("{other:?}"),
        }
        let poles = semicircle_poles(0.32, 0.6).unwrap();
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].order, 2);
        assert!((poles[0].energy.re - 1.36 / 1.2).abs() < 1e-12);
        assert!(matches!(pole_weight(&BandModel::semicircle(0.32).unwrap(), &poles[0]), Err(Error::SecondOrderPole)));
    }

    #[test]
    fn quadratic_roots_at_delta_0_6_sit_on_second_sheet() {
        let poles = semicircle_poles(0.6, 0.0).unwrap();
        assert_eq!(poles.len(), 2);
        assert!(poles.iter().all(|p| p.sheet == 1 && p.energy.im == 0.0));
    }

    #[test]
    fn weak_coupling_resonance() {
        let m = BandModel::semicircle(0.01).unwrap();
        let p = fgr_pole(&m, 0.0).unwrap().unwrap();
        assert!((p.energy - Complex64::new(0.0, -0.01)).norm() < 5e-4);
        let flat = BandModel::flat_band(0.02).unwrap();
        let p = fgr_pole(&flat, -0.4).unwrap().unwrap();
        assert!((p.energy.im + 0.02 * PI).abs() < 5e-3, "{}", p.energy);
    }

    #[test]
    fn resonances_come_in_mirror_pairs() {
        for m in [BandModel::semicircle(0.1).unwrap(), BandModel::flat_band(0.05).unwrap()] {
            let poles = resonance_poles(&m, -0.3, 1).unwrap();
            assert!(!poles.is_empty());
            for p in &poles {
                assert!(poles.iter().any(|q| (q.energy - p.energy.conj()).norm() < 1e-9), "{:?}", p);
                assert!(p.residual(&m, -0.3).unwrap() <= 1e-10);
            }
        }
    }

    #[test]
    fn onsets_follow_band_edge_condition() {
        let o = semicircle_onsets(0.4);
        assert!((o.first_onset - 0.6).abs() < 1e-3, "{o:?}");
        assert!((o.second_onset - 1.4).abs() < 1e-3, "{o:?}");
        assert!((o.quoted_threshold - 0.58).abs() < 1e-15);
    }
}
