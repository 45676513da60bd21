//! Two different coefficient pairs built from one bump, with identical spectra.

use frozen_spectra::fixtures::real_grid;
use frozen_spectra::inverse::relative_l2;
use frozen_spectra::nonuniq::{build_sr, confusable_pairs, verify_coincidence, BumpSpec};

fn main() -> frozen_spectra::Result<()> {
    let (a, b) = (1.0, 2.0);
    let bump = BumpSpec::hat(0.4)?;
    let (s, r) = build_sr(&bump, a, b)?;
    let (first, second) = confusable_pairs(&s, &r)?;
    let report = verify_coincidence(&first, &second, a, b, &real_grid(), 10)?;
    println!(
        "relative L2 distance: p {:.3}, q {:.3}",
        relative_l2(&first.0, &second.0),
        relative_l2(&first.1, &second.1)
    );
    println!(
        "max |Delta(pair 1) - Delta(pair 2)| / scale = {:.2e}",
        report.max_discrepancy
    );
    println!(
        "eigenvalue gaps (j = 0, 1): {:.2e}, {:.2e}",
        report.eigenvalue_gap_by_j[0], report.eigenvalue_gap_by_j[1]
    );
    Ok(())
}
