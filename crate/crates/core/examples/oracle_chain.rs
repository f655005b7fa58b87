//! Exact evolution of the discretized models against the continuum.

use greencut::oracle::{build_discrete_model, evolve_survival, Scheme};
use greencut::poles::real_poles_standard_sheet;
use greencut::survival::{survival_amplitude, uniform_times};
use greencut::{BandModel, QuadratureConfig};

fn main() -> greencut::Result<()> {
    let times = uniform_times(100.0, 401);
    for (m, eps, scheme) in [
        (BandModel::semicircle(1.2)?, -0.4, Scheme::ChainOfSites),
        (BandModel::flat_band(0.02)?, -0.4, Scheme::UniformLevels),
    ] {
        let dm = build_discrete_model(&m, eps, 2000, scheme)?;
        let eig = dm.eigensystem();
        let oracle = evolve_survival(&dm, &times);
        let cont = survival_amplitude(&m, eps, &times, &QuadratureConfig::default())?;
        let dev = oracle.p.iter().zip(&cont.p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        println!(
            "{:?} ({scheme:?}, N = {}): horizon {}, max |dp| for t <= 100: {dev:.2e}",
            m.kind(),
            dm.len(),
            dm.recurrence_horizon()
        );
        let poles = real_poles_standard_sheet(&m, eps);
        for (e, o) in greencut::oracle::bound_states_of(&dm, &eig) {
            let p = poles.iter().min_by(|a, b| (a.energy.re - e).abs().total_cmp(&(b.energy.re - e).abs()));
            match p {
                Some(p) => println!(
                    "  outlier {e:.6} overlap {o:.5}; pole {:.6} weight {:.5}",
                    p.energy.re,
                    p.weight.unwrap_or_default().re
                ),
                None => println!("  outlier {e:.6} overlap {o:.5}; no pole"),
            }
        }
    }
    Ok(())
}
