//! Poles of the semicircle model as the coupling grows, and the resonance
//! poles of the flat band on its first few sheets.

use greencut::poles::{fgr_estimate, resonance_poles, semicircle_poles};
use greencut::{BandModel, Error};

fn main() -> greencut::Result<()> {
    let eps = -0.4;
    println!("semicircle, eps = {eps}");
    for i in 1..=16 {
        let d = 0.1 * i as f64;
        match semicircle_poles(d, eps) {
            Ok(poles) => {
                let list: Vec<String> = poles
                    .iter()
                    .map(|p| format!("[{}] {:.5}{:+.5}i {:?}", p.sheet, p.energy.re, p.energy.im, p.class()))
                    .collect();
                println!("  d0 = {d:.1}: {}", list.join("  "));
            }
            Err(Error::DegenerateQuadratic { linear_root }) => {
                println!("  d0 = {d:.1}: quadratic degenerates, remaining root {linear_root:?}")
            }
            Err(e) => return Err(e),
        }
    }

    let flat = BandModel::flat_band(0.1)?;
    println!("flat band, d0 = 0.1, golden-rule estimate {:.6}", fgr_estimate(&flat, eps)?);
    for sheet in [-1, 1, 2] {
        for p in resonance_poles(&flat, eps, sheet)? {
            println!("  sheet {sheet:+}: {:.6}, weight {:.4}", p.energy, p.weight.unwrap_or_default());
        }
    }
    Ok(())
}
