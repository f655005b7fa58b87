//! Finite discretization of the level-plus-continuum Hamiltonian, solved
//! exactly. The matrix is an arrowhead: the level couples to every band
//! level and the band levels are otherwise diagonal.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::band::{BandModel, ModelKind};
use crate::error::{Error, Result};
use crate::survival::{Method, SurvivalSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    ChainOfSites,
    UniformLevels,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    ChainOfSites(usize),
    UniformLevels(usize),
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteModel {
    pub level_energy: f64,
    pub band_levels: Vec<f64>,
    pub couplings: Vec<f64>,
    pub source: Source,
    pub band_bottom: f64,
    pub band_top: f64,
}

impl DiscreteModel {
    /// A user-supplied discretization; band levels must be nondecreasing.
    pub fn new(level_energy: f64, band_levels: Vec<f64>, couplings: Vec<f64>) -> Result<Self> {
        if band_levels.len() != couplings.len() || band_levels.is_empty() {
            return Err(Error::InvalidModel("band levels and couplings must have equal, nonzero length".into()));
        }
        if band_levels.windows(2).any(|w| !(w[1] >= w[0])) {
            return Err(Error::InvalidModel("band levels must be sorted".into()));
        }
        let (lo, hi) = (band_levels[0], band_levels[band_levels.len() - 1]);
        Ok(Self { level_energy, band_levels, couplings, source: Source::Custom, band_bottom: lo, band_top: hi })
    }

    pub fn len(&self) -> usize {
        self.band_levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.band_levels.is_empty()
    }

    /// Σ_N(w) = Σ_k V_k²/(w − ω_k).
    pub fn self_energy(&self, w: Complex64) -> Complex64 {
        self.band_levels.iter().zip(&self.couplings).map(|(e, v)| v * v / (w - e)).sum()
    }

    /// Time after which finite-size revivals may appear, N·W/4.
    pub fn recurrence_horizon(&self) -> f64 {
        self.len() as f64 * (self.band_top - self.band_bottom) / 4.0
    }

    pub fn mean_spacing(&self) -> f64 {
        (self.band_top - self.band_bottom) / self.len() as f64
    }

    pub fn eigensystem(&self) -> Eigensystem {
        arrowhead_eigen(self.level_energy, &self.band_levels, &self.couplings)
    }
}

/// ChainOfSites realizes a site side-coupled to a semi-infinite chain with
/// hopping −1/2 (semicircle only); UniformLevels puts band levels at the
/// midpoints of N equal bins with V_k² = Δ(ω_k)·h.
pub fn build_discrete_model(model: &BandModel, eps: f64, n: usize, scheme: Scheme) -> Result<DiscreteModel> {
    if n < 16 {
        return Err(Error::Domain(format!("discretization needs N >= 16, got {n}")));
    }
    let (band_levels, couplings, source) = match scheme {
        Scheme::ChainOfSites => {
            if model.kind() != ModelKind::Semicircle {
                return Err(Error::ModelMismatch("ChainOfSites realizes only the semicircle model".into()));
            }
            let v = (model.strength() / 2.0).sqrt();
            let norm = (2.0 / (n as f64 + 1.0)).sqrt();
            let angle = |k: usize| k as f64 * std::f64::consts::PI / (n as f64 + 1.0);
            let levels = (1..=n).map(|k| -angle(k).cos()).collect();
            let couplings = (1..=n).map(|k| -norm * v * angle(k).sin()).collect();
            (levels, couplings, Source::ChainOfSites(n))
        }
        Scheme::UniformLevels => {
            let h = model.width() / n as f64;
            let levels: Vec<f64> = (0..n).map(|k| model.band_bottom() + (k as f64 + 0.5) * h).collect();
            let couplings = levels.iter().map(|&e| (model.delta(e) * h).sqrt()).collect();
            (levels, couplings, Source::UniformLevels(n))
        }
    };
    Ok(DiscreteModel {
        level_energy: eps,
        band_levels,
        couplings,
        source,
        band_bottom: model.band_bottom(),
        band_top: model.band_top(),
    })
}

/// Eigenvalue stored relative to a nearby pole d[origin] for accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Root {
    origin: usize,
    offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    /// Ascending eigenvalues.
    pub values: Vec<f64>,
    /// |⟨d|m⟩|² per eigenvalue.
    pub overlaps: Vec<f64>,
    level: f64,
    poles: Vec<f64>,
    // per eigenvalue: the secular root, or `None` for deflated eigenvalues
    roots: Vec<Option<Root>>,
    // sparse band vector of each deflated eigenvalue
    deflated: Vec<Option<Vec<(usize, f64)>>>,
    zhat: Vec<f64>,
}

fn secular(level: f64, d: &[f64], z2: &[f64], origin: usize, tau: f64) -> (f64, f64) {
    let lam_minus_level = (d[origin] - level) + tau;
    let mut f = lam_minus_level;
    let mut fp = 1.0;
    for (k, (dk, zk)) in d.iter().zip(z2).enumerate() {
        let diff = if k == origin { tau } else { (d[origin] - dk) + tau };
        let r = zk / diff;
        f -= r;
        fp += r / diff;
    }
    (f, fp)
}

/// Root of the increasing secular function for τ in (lo, hi).
fn solve_secular(level: f64, d: &[f64], z2: &[f64], origin: usize, mut lo: f64, mut hi: f64) -> f64 {
    let mut tau = 0.5 * (lo + hi);
    for _ in 0..300 {
        let (f, fp) = secular(level, d, z2, origin, tau);
        if f == 0.0 {
            return tau;
        }
        if f < 0.0 {
            lo = tau;
        } else {
            hi = tau;
        }
        let newton = tau - f / fp;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - tau).abs() <= 2.0 * f64::EPSILON * next.abs().max(f64::MIN_POSITIVE)
            || hi - lo <= f64::EPSILON * tau.abs()
        {
            return next;
        }
        tau = next;
    }
    tau
}

/// Columns 1.. of the Householder reflector taking `u` (unit) to a multiple
/// of e₀: an orthonormal basis of the complement of `u`.
fn complement_basis(u: &[f64]) -> Vec<Vec<f64>> {
    let mut v = u.to_vec();
    v[0] += if u[0] >= 0.0 { 1.0 } else { -1.0 };
    let vv: f64 = v.iter().map(|x| x * x).sum();
    (1..u.len())
        .map(|j| (0..u.len()).map(|i| if i == j { 1.0 } else { 0.0 } - 2.0 * v[i] * v[j] / vv).collect())
        .collect()
}

/// Eigen-decomposition of [[ε, zᵀ], [z, diag(d)]] with `d` nondecreasing.
/// Zero couplings and repeated levels are deflated; the remaining
/// eigenvalues come from the secular equation solved in shifted form, and
/// the couplings are recomputed from the eigenvalues so the eigenvectors
/// stay orthogonal.
pub fn arrowhead_eigen(level: f64, d: &[f64], z: &[f64]) -> Eigensystem {
    let scale = d.iter().map(|x| x.abs()).fold(level.abs(), f64::max) + z.iter().map(|x| x * x).sum::<f64>().sqrt();
    let tiny = 1e-15 * scale.max(1.0);

    // coupled levels grouped by equal energy
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for k in (0..d.len()).filter(|&k| z[k].abs() > tiny) {
        match groups.last_mut() {
            Some(g) if d[g[0]] == d[k] => g.push(k),
            _ => groups.push(vec![k]),
        }
    }
    let da: Vec<f64> = groups.iter().map(|g| d[g[0]]).collect();
    let z2: Vec<f64> = groups.iter().map(|g| g.iter().map(|&k| z[k] * z[k]).sum()).collect();
    let n = da.len();

    let norm_z = z2.iter().sum::<f64>().sqrt();
    let roots: Vec<Root> = if n == 0 {
        Vec::new()
    } else {
        (0..=n)
            .into_par_iter()
            .map(|j| {
                if j == 0 {
                    let lower = level.min(da[0]) - norm_z - 1.0;
                    Root { origin: 0, offset: solve_secular(level, &da, &z2, 0, lower - da[0], 0.0) }
                } else if j == n {
                    let upper = level.max(da[n - 1]) + norm_z + 1.0;
                    Root { origin: n - 1, offset: solve_secular(level, &da, &z2, n - 1, 0.0, upper - da[n - 1]) }
                } else {
                    let gap = da[j] - da[j - 1];
                    let (f, _) = secular(level, &da, &z2, j - 1, 0.5 * gap);
                    if f >= 0.0 {
                        Root { origin: j - 1, offset: solve_secular(level, &da, &z2, j - 1, 0.0, 0.5 * gap) }
                    } else {
                        Root { origin: j, offset: solve_secular(level, &da, &z2, j, -0.5 * gap, 0.0) }
                    }
                }
            })
            .collect()
    };

    // λ_j − d_i from the shifted representation
    let gap = |j: usize, i: usize| -> f64 {
        let r = roots[j];
        if r.origin == i {
            r.offset
        } else {
            (da[r.origin] - da[i]) + r.offset
        }
    };

    let zhat: Vec<f64> = (0..n)
        .map(|i| {
            let mut v = -gap(0, i) * gap(n, i);
            for k in 0..i {
                v *= -gap(k + 1, i) / (da[i] - da[k]);
            }
            for k in i + 1..n {
                v *= gap(k, i) / (da[k] - da[i]);
            }
            v.max(0.0).sqrt()
        })
        .collect();

    let overlaps_active: Vec<f64> = (0..roots.len())
        .map(|j| {
            let s: f64 = (0..n).map(|k| (zhat[k] / gap(j, k)).powi(2)).sum();
            1.0 / (1.0 + s)
        })
        .collect();

    type Entry = (f64, f64, Option<Root>, Option<Vec<(usize, f64)>>);
    let mut entries: Vec<Entry> = roots
        .iter()
        .zip(&overlaps_active)
        .map(|(r, o)| (da[r.origin] + r.offset, *o, Some(Root { origin: groups[r.origin][0], offset: r.offset }), None))
        .collect();
    for k in (0..d.len()).filter(|k| z[*k].abs() <= tiny) {
        entries.push((d[k], 0.0, None, Some(vec![(k, 1.0)])));
    }
    let mut zfull = vec![0.0; d.len()];
    for (i, g) in groups.iter().enumerate() {
        let norm = z2[i].sqrt();
        let u: Vec<f64> = g.iter().map(|&k| z[k] / norm).collect();
        for (&k, uk) in g.iter().zip(&u) {
            zfull[k] = zhat[i] * uk;
        }
        if g.len() > 1 {
            for col in complement_basis(&u) {
                entries.push((da[i], 0.0, None, Some(g.iter().copied().zip(col).collect())));
            }
        }
    }
    if n == 0 {
        entries.push((level, 1.0, None, None));
    }
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut values = Vec::with_capacity(entries.len());
    let mut overlaps = Vec::with_capacity(entries.len());
    let mut root_list = Vec::with_capacity(entries.len());
    let mut deflated = Vec::with_capacity(entries.len());
    for (v, o, r, dv) in entries {
        values.push(v);
        overlaps.push(o);
        root_list.push(r);
        deflated.push(dv);
    }
    Eigensystem { values, overlaps, level, poles: d.to_vec(), roots: root_list, deflated, zhat: zfull }
}

impl Eigensystem {
    /// Eigenvector `m` as (level component, band components).
    pub fn vector(&self, m: usize) -> (f64, Vec<f64>) {
        match (self.roots[m], &self.deflated[m]) {
            (Some(r), _) => {
                let comps: Vec<f64> = self
                    .poles
                    .iter()
                    .enumerate()
                    .map(|(k, dk)| {
                        if self.zhat[k] == 0.0 {
                            return 0.0;
                        }
                        let diff =
                            if self.poles[r.origin] == *dk { r.offset } else { (self.poles[r.origin] - dk) + r.offset };
                        self.zhat[k] / diff
                    })
                    .collect();
                let norm = (1.0 + comps.iter().map(|c| c * c).sum::<f64>()).sqrt();
                (1.0 / norm, comps.into_iter().map(|c| c / norm).collect())
            }
            (None, Some(sparse)) => {
                let mut comps = vec![0.0; self.poles.len()];
                for &(k, v) in sparse {
                    comps[k] = v;
                }
                (0.0, comps)
            }
            (None, None) => (1.0, vec![0.0; self.poles.len()]),
        }
    }

    pub fn level_energy(&self) -> f64 {
        self.level
    }

    /// g(t) = Σ_m |⟨d|m⟩|² e^{−iλ_m t}.
    pub fn amplitude(&self, t: f64) -> Complex64 {
        if t == 0.0 {
            // ⟨d|d⟩, exact by completeness
            return Complex64::new(1.0, 0.0);
        }
        self.values
            .iter()
            .zip(&self.overlaps)
            .map(|(l, o)| {
                let (s, c) = (l * t).sin_cos();
                Complex64::new(c, -s) * *o
            })
            .sum()
    }

    /// Full state e^{−iHt}|d⟩.
    pub fn state(&self, t: f64) -> OracleState {
        let mut g = Complex64::new(0.0, 0.0);
        let mut b = vec![Complex64::new(0.0, 0.0); self.poles.len()];
        for (m, l) in self.values.iter().enumerate() {
            let (v0, vb) = self.vector(m);
            if v0 == 0.0 {
                continue;
            }
            let (s, c) = (l * t).sin_cos();
            let phase = Complex64::new(c, -s) * v0;
            g += phase * v0;
            for (bk, vk) in b.iter_mut().zip(&vb) {
                *bk += phase * *vk;
            }
        }
        OracleState { g, b }
    }
}

/// Amplitudes on the level and on each band level.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleState {
    pub g: Complex64,
    pub b: Vec<Complex64>,
}

impl OracleState {
    pub fn norm_sqr(&self) -> f64 {
        self.g.norm_sqr() + self.b.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }
}

/// Survival series of the discrete model. Times past the recurrence
/// horizon are still computed but flagged.
pub fn evolve_survival(dm: &DiscreteModel, times: &[f64]) -> SurvivalSeries {
    let eig = dm.eigensystem();
    let g: Vec<Complex64> = times.par_iter().map(|&t| eig.amplitude(t)).collect();
    let mut series = SurvivalSeries::new(times.to_vec(), g, Method::Oracle);
    let horizon = dm.recurrence_horizon();
    if times.iter().any(|&t| t > horizon) {
        series.warnings.push(format!("times beyond the recurrence horizon {horizon} may show finite-size revivals"));
    }
    series
}

/// Eigenvalues more than three mean level spacings outside the band, with
/// their overlap on the level.
pub fn discrete_bound_states(dm: &DiscreteModel) -> Vec<(f64, f64)> {
    bound_states_of(dm, &dm.eigensystem())
}

pub fn bound_states_of(dm: &DiscreteModel, eig: &Eigensystem) -> Vec<(f64, f64)> {
    let margin = 3.0 * dm.mean_spacing();
    eig.values
        .iter()
        .zip(&eig.overlaps)
        .filter(|(l, _)| **l < dm.band_bottom - margin || **l > dm.band_top + margin)
        .map(|(l, o)| (*l, *o))
        .collect()
}
