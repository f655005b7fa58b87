//! Long-time power laws of the band contribution, fitted to the envelope
//! of |I_cut(t)|.

use greencut::cli::tail_grid;
use greencut::survival::{cut_series, tail_exponent};
use greencut::{BandModel, QuadratureConfig};

fn main() -> greencut::Result<()> {
    let cases = [
        (BandModel::semicircle(0.1)?, (200.0, 1000.0)),
        (BandModel::power_edge(0.1, -1.0, 1.0, 2.0, 2.0)?, (40.0, 200.0)),
        (BandModel::power_edge(0.1, -1.0, 1.0, 1.0, 1.0)?, (60.0, 300.0)),
        (BandModel::flat_band(0.02)?, (300.0, 1500.0)),
    ];
    for (m, window) in cases {
        let s = cut_series(&m, 0.0, &tail_grid(window.0, window.1), &QuadratureConfig::default())?;
        let alpha = tail_exponent(&s, window)?;
        println!(
            "{:?} edges {}/{}: alpha = {alpha:.4} over {window:?}",
            m.kind(),
            m.edge_exp_bottom(),
            m.edge_exp_top()
        );
    }
    Ok(())
}
