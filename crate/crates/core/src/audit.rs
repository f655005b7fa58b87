//! Bound-state threshold audit for the semicircle model: the quoted
//! threshold (ε²+1)/2 set against the onset measured by the pole finder,
//! each measured onset cross-checked by exact diagonalization.

use serde::{Deserialize, Serialize};

use crate::band::BandModel;
use crate::error::Result;
use crate::oracle::{build_discrete_model, discrete_bound_states, Scheme};
use crate::poles::{real_poles_standard_sheet, semicircle_onsets};

/// Distance in Δ₀ from an onset at which counts are compared.
pub const ONSET_MARGIN: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnsetCheck {
    pub delta0: f64,
    pub pole_count: usize,
    /// Bound states farther from the band than the oracle's outlier margin.
    pub resolvable_count: usize,
    pub oracle_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRow {
    pub eps: f64,
    pub quoted_threshold: f64,
    pub first_onset: f64,
    pub second_onset: f64,
    /// Band-edge condition: a bound state leaves the band at Δ₀ = 1 ∓ ε.
    pub edge_condition: (f64, f64),
    pub quoted_matches_measured: bool,
    pub checks: Vec<OnsetCheck>,
    pub confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdAudit {
    pub oracle_n: usize,
    pub rows: Vec<AuditRow>,
}

impl ThresholdAudit {
    pub fn all_confirmed(&self) -> bool {
        self.rows.iter().all(|r| r.confirmed)
    }
}

fn check(delta0: f64, eps: f64, n: usize) -> Result<OnsetCheck> {
    let model = BandModel::semicircle(delta0)?;
    let poles = real_poles_standard_sheet(&model, eps);
    let dm = build_discrete_model(&model, eps, n, Scheme::ChainOfSites)?;
    let margin = 3.0 * dm.mean_spacing();
    let resolvable_count = poles.iter().filter(|p| (p.energy.re.abs() - 1.0) > margin).count();
    let oracle_count = discrete_bound_states(&dm).len();
    Ok(OnsetCheck { delta0, pole_count: poles.len(), resolvable_count, oracle_count })
}

pub fn threshold_audit(eps_values: &[f64], oracle_n: usize) -> Result<ThresholdAudit> {
    let mut rows = Vec::new();
    for &eps in eps_values {
        let onsets = semicircle_onsets(eps);
        let mut probes = Vec::new();
        for o in [onsets.first_onset, onsets.second_onset] {
            for d in [o - ONSET_MARGIN, o + ONSET_MARGIN] {
                if d > 0.01 && !probes.iter().any(|p: &f64| (p - d).abs() < 1e-6) {
                    probes.push(d);
                }
            }
        }
        probes.push(onsets.quoted_threshold + 0.05);
        probes.sort_by(f64::total_cmp);
        let checks = probes.iter().map(|&d| check(d, eps, oracle_n)).collect::<Result<Vec<_>>>()?;
        let confirmed = checks.iter().all(|c| c.resolvable_count == c.oracle_count);
        rows.push(AuditRow {
            eps,
            quoted_threshold: onsets.quoted_threshold,
            first_onset: onsets.first_onset,
            second_onset: onsets.second_onset,
            edge_condition: (1.0 - eps.abs(), 1.0 + eps.abs()),
            quoted_matches_measured: (onsets.quoted_threshold - onsets.first_onset).abs() < 1e-3,
            checks,
            confirmed,
        });
    }
    Ok(ThresholdAudit { oracle_n, rows })
}
