//! Where bound states of the semicircle model appear, against the
//! (ε²+1)/2 threshold, with counts checked by exact diagonalization.

use greencut::audit::threshold_audit;

fn main() -> greencut::Result<()> {
    let audit = threshold_audit(&[0.0, 0.4, -0.4, 0.6, -0.6], 2000)?;
    for r in &audit.rows {
        println!(
            "eps {:+.1}: quoted {:.4}, onsets {:.4} / {:.4}, 1 -+ |eps| = {:.1} / {:.1}, oracle agrees: {}",
            r.eps,
            r.quoted_threshold,
            r.first_onset,
            r.second_onset,
            r.edge_condition.0,
            r.edge_condition.1,
            r.confirmed
        );
        for c in &r.checks {
            println!(
                "    d0 {:.4}: poles {} (resolvable {}), oracle {}",
                c.delta0, c.pole_count, c.resolvable_count, c.oracle_count
            );
        }
    }
    Ok(())
}
