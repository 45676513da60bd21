//! Coefficients vanishing on `[0, b]` rebuilt from both spectra.

use frozen_spectra::fixtures::right_supported_smooth;
use frozen_spectra::inverse::{reconstruct, relative_l2, SpectraPair};
use frozen_spectra::spectrum::locate_eigenvalues;
use frozen_spectra::Bvp;

fn main() -> frozen_spectra::Result<()> {
    let (a, b) = (1.0, 1.8);
    let prob = right_supported_smooth(a, b);
    let pair = SpectraPair::new(
        locate_eigenvalues(&prob, Bvp::Dirichlet, 200)?,
        locate_eigenvalues(&prob, Bvp::Neumann, 200)?,
    )?;
    let result = reconstruct(&pair, a, b, 150)?;
    println!("windows: {}", result.window_count);
    println!(
        "relative L2 error: p {:.2e}, q {:.2e}",
        relative_l2(&result.p, prob.p()),
        relative_l2(&result.q, prob.q())
    );
    for (name, value) in &result.residuals {
        println!("  {name}: {value:.2e}");
    }
    Ok(())
}
