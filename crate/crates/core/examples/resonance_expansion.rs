//! The same g(t) two ways: the Fourier integral over the cut, and the
//! deformed contour (bound states, resonance residues and two vertical
//! lines from the band edges).

use greencut::poles::fgr_pole;
use greencut::survival::{fgr_time, resonance_expansion, survival_amplitude};
use greencut::{BandModel, QuadratureConfig};

fn main() -> greencut::Result<()> {
    let cfg = QuadratureConfig::default();
    for (m, eps) in [(BandModel::semicircle(0.05)?, 0.0), (BandModel::flat_band(0.1)?, -0.4)] {
        let tau = fgr_time(&m, eps)?;
        if let Some(p) = fgr_pole(&m, eps)? {
            println!(
                "{:?}: resonance {:.8}, 1/(2|Im|) = {:.4}, tau = {tau:.4}",
                m.kind(),
                p.energy,
                0.5 / p.energy.im.abs()
            );
        }
        let times: Vec<f64> = [0.5, 2.0, 5.0, 10.0, 20.0].iter().map(|k| k * tau).collect();
        let cut = survival_amplitude(&m, eps, &times, &cfg)?;
        let res = resonance_expansion(&m, eps, &times, &cfg)?;
        for ((t, a), b) in times.iter().zip(&cut.g).zip(&res.g) {
            println!("  t = {t:>8.3}: cut {a:+.10}  contour {b:+.10}  |diff| {:.1e}", (a - b).norm());
        }
    }
    Ok(())
}
