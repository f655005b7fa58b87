//! A(E) of the level: a continuum over the band plus delta peaks at the
//! bound states, together carrying unit weight.

use greencut::survival::{spectral_density, CutSpectrum};
use greencut::{BandModel, QuadratureConfig};

fn main() -> greencut::Result<()> {
    let (m, eps) = (BandModel::flat_band(0.2)?, -0.4);
    for i in 0..=24 {
        let e = -1.2 + 0.1 * i as f64;
        let a = spectral_density(&m, eps, e).continuous;
        println!("{e:+.2} {a:9.5} {}", "#".repeat((a * 40.0).round() as usize));
    }
    let deltas = spectral_density(&m, eps, 0.0).deltas;
    let continuum = CutSpectrum::new(&m, eps, &QuadratureConfig::default())?.mass();
    for (e, w) in &deltas {
        println!("delta peak at {e:.6} with weight {w:.6}");
    }
    println!("continuum {continuum:.10} + peaks = {:.10}", continuum + deltas.iter().map(|d| d.1).sum::<f64>());
    Ok(())
}
