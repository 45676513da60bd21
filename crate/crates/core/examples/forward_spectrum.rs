//! First eigenvalues of the smooth trace fixture, with their certification.

use frozen_spectra::fixtures::smooth_trace_problem;
use frozen_spectra::spectrum::{locate_eigenvalues, winding_with_radius};
use frozen_spectra::Bvp;

fn main() -> frozen_spectra::Result<()> {
    let prob = smooth_trace_problem();
    for j in Bvp::BOTH {
        let spec = locate_eigenvalues(&prob, j, 12)?;
        let (count, radius) = winding_with_radius(&prob, j, 12)?;
        println!("j = {}: {count} zeros inside |lambda| = {radius:.2}", j.index());
        for e in &spec.eigenvalues {
            println!("  n = {:2}  lambda = {:.10}  kappa = {:.3e}", e.n, e.lambda, e.kappa);
        }
    }
    Ok(())
}
