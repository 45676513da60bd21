//! Eigenvalue partial sums against coefficient partial sums for `p = sin t`, `q = cos t`.

use frozen_spectra::fixtures::smooth_trace_problem;
use frozen_spectra::traces::trace_compare;
use frozen_spectra::Bvp;

fn main() -> frozen_spectra::Result<()> {
    let prob = smooth_trace_problem();
    let limit = 1f64.sin() + 2f64.cos();
    for j in Bvp::BOTH {
        let rows = trace_compare(&prob, j, 120)?;
        println!("j = {} (limit {limit:.6})", j.index());
        for row in rows.iter().filter(|r| r.n % 20 == 0) {
            let eig = row.eig_partial.unwrap_or_default();
            println!(
                "  N = {:3}  eigen {:.6}  coeff {:.6}",
                row.n, eig.re, row.coeff_partial.re
            );
        }
    }
    Ok(())
}
