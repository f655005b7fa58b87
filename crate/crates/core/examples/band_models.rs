//! The four coupling densities and their basic moments.

use greencut::BandModel;
use num_complex::Complex64;

fn main() -> greencut::Result<()> {
    let table: Vec<(f64, f64)> =
        (0..=16).map(|i| -1.0 + i as f64 / 8.0).map(|e| (e, 0.1 * (1.0 - e * e).sqrt())).collect();
    let models = [
        BandModel::semicircle(0.2)?,
        BandModel::flat_band(0.2)?,
        BandModel::power_edge(0.2, -1.0, 1.0, 2.0, 2.0)?,
        BandModel::tabulated(table)?,
    ];
    for m in &models {
        println!(
            "{:?} on [{}, {}], integral of delta = {:.6}",
            m.kind(),
            m.band_bottom(),
            m.band_top(),
            m.first_moment()
        );
        for e in [-0.9, -0.5, 0.0, 0.5, 0.9] {
            print!("  delta({e:+.1}) = {:.5}", m.delta(e));
        }
        println!();
        match m.continue_delta(Complex64::new(0.3, -0.5)) {
            Ok(d) => println!("  continued to 0.3-0.5i: {d:.6}"),
            Err(e) => println!("  no continuation: {e}"),
        }
    }
    Ok(())
}
