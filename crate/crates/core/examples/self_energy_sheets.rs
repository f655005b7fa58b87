//! Σ(ω) across the cut: boundary values, the standard sheet and the
//! neighbouring sheets reached through the cut.

use std::f64::consts::PI;

use greencut::self_energy::{sigma_cut_values, sigma_derivative, sigma_on_sheet, SheetPoint};
use greencut::BandModel;
use num_complex::Complex64;

fn main() -> greencut::Result<()> {
    for m in [BandModel::semicircle(0.5)?, BandModel::flat_band(0.5)?] {
        println!("{:?}", m.kind());
        let cut = sigma_cut_values(&m, 0.3)?;
        println!(
            "  at E = 0.3: Re = {:.6}, Im above = {:.6}, Im below = {:.6}",
            cut.real, cut.imag_above, cut.imag_below
        );

        let w = Complex64::new(0.3, -0.2);
        let sheets: &[i32] = if m.kind() == greencut::ModelKind::Semicircle { &[0, 1] } else { &[-1, 0, 1, 2] };
        for &n in sheets {
            let p = SheetPoint::new(w, n);
            println!(
                "  sheet {n:+}: Sigma({w}) = {:.6}, dSigma = {:.6}",
                sigma_on_sheet(&m, p)?,
                sigma_derivative(&m, p)?
            );
        }
        // crossing the cut downward lands on the continuation of the upper side
        let jump = sigma_on_sheet(&m, SheetPoint::new(w, 1))? - sigma_on_sheet(&m, SheetPoint::new(w, 0))?;
        println!(
            "  jump / (-2 pi i) = {:.6}, continued delta = {:.6}",
            jump / Complex64::new(0.0, -2.0 * PI),
            m.continue_delta(w)?
        );
    }
    Ok(())
}
