//! `Delta_0` and its parts along a ray in the upper half plane, as CSV on stdout.

use frozen_spectra::cli::{grid_export, line_grid};
use frozen_spectra::fixtures::box_bump_pairs;
use frozen_spectra::{Bvp, Complex64};

fn main() -> frozen_spectra::Result<()> {
    let (prob, _) = box_bump_pairs();
    let grid = line_grid(Complex64::new(0.0, 0.0), Complex64::new(200.0, 200.0), 21);
    grid_export(&prob, Bvp::Dirichlet, &grid, std::io::stdout())
}
