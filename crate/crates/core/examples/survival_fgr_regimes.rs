//! p(t) for the flat band at three couplings against e^{−t/τ}: a long
//! golden-rule window at weak coupling, a short one in between, none at
//! strong coupling.

use greencut::survival::{fgr_relative_deviation, fgr_time, fgr_valid_until, survival_amplitude, uniform_times};
use greencut::{BandModel, QuadratureConfig};

fn main() -> greencut::Result<()> {
    let eps = -0.4;
    for d in [0.02, 0.1, 0.2] {
        let m = BandModel::flat_band(d)?;
        let tau = fgr_time(&m, eps)?;
        let s = survival_amplitude(&m, eps, &uniform_times(20.0 * tau, 600), &QuadratureConfig::default())?;
        let dev = fgr_relative_deviation(&s, tau);
        println!("d0 = {d}: tau = {tau:.4}");
        for k in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let i = s.times.iter().position(|t| *t >= k * tau).unwrap_or(s.len() - 1);
            println!(
                "  t = {k:>4} tau: p = {:.4e}, e^(-t/tau) = {:.4e}, rel. dev {:.3}",
                s.p[i],
                (-s.times[i] / tau).exp(),
                dev[i]
            );
        }
        match fgr_valid_until(&s, tau) {
            Some(t) if t < tau => println!("  golden-rule regime absent"),
            Some(t) => println!("  golden rule holds to within 2x up to {:.2} tau", t / tau),
            None => println!("  golden rule holds over the whole series"),
        }
    }
    Ok(())
}
