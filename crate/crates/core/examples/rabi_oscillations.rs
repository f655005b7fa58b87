//! At strong coupling two bound states carry most of the weight left at
//! long times and p(t) beats at their energy difference.

use greencut::poles::real_poles_standard_sheet;
use greencut::survival::{dominant_frequency, fgr_time, survival_amplitude, uniform_times};
use greencut::{BandModel, QuadratureConfig};

fn main() -> greencut::Result<()> {
    let (d, eps) = (0.2, -0.4);
    let m = BandModel::flat_band(d)?;
    let tau = fgr_time(&m, eps)?;
    let bound = real_poles_standard_sheet(&m, eps);
    for p in &bound {
        println!("bound state E = {:.7}, weight {:.5}", p.energy.re, p.weight.unwrap_or_default().re);
    }
    let s = survival_amplitude(&m, eps, &uniform_times(20.0 * tau, 600), &QuadratureConfig::default())?;
    let omega = dominant_frequency(&s, 10.0 * tau)?;
    let beat = (bound[1].energy.re - bound[0].energy.re).abs();
    println!("beat frequency over [10 tau, 20 tau]: {omega:.5} (|E1 - E2| = {beat:.5})");
    let w: Vec<f64> = bound.iter().map(|p| p.weight.unwrap_or_default().re).collect();
    println!(
        "late-time mean of p ~ {:.5}, oscillation amplitude ~ {:.5}",
        w[0] * w[0] + w[1] * w[1],
        2.0 * w[0] * w[1]
    );
    Ok(())
}
