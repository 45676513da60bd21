//! Coefficient pairs that share both spectra, built from an even bump.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::charfn::{delta_expanded, Bvp, Problem};
use crate::funcrep::{linear_combine, FunctionRep, PiecewisePoly, Rho};
use crate::spectrum::locate_with;
use crate::{Error, Result, PI};

/// Even bump `G` stored by its restriction to `[0, T]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpSpec {
    half: PiecewisePoly,
}

impl BumpSpec {
    pub fn new(half: PiecewisePoly) -> Result<BumpSpec> {
        if half.support().0 != 0.0 {
            return Err(Error::Precondition("half profile must start at t = 0".into()));
        }
        if half.l2_norm() == 0.0 {
            return Err(Error::Precondition("bump must be non-trivial".into()));
        }
        Ok(BumpSpec { half })
    }

    pub fn boxcar(t: f64) -> Result<BumpSpec> {
        BumpSpec::new(PiecewisePoly::indicator(0.0, t)?)
    }

    /// Triangle of height 1 at the origin, vanishing at `|t| = T`.
    pub fn hat(t: f64) -> Result<BumpSpec> {
        BumpSpec::new(PiecewisePoly::new(
            vec![0.0, t],
            vec![crate::funcrep::Cubic::real([1.0, -1.0 / t, 0.0, 0.0])],
        )?)
    }

    pub fn half_width(&self) -> f64 {
        self.half.support().1
    }

    pub fn half_profile(&self) -> &PiecewisePoly {
        &self.half
    }

    /// `G` on `[-T, T]`.
    pub fn even_extension(&self) -> PiecewisePoly {
        let t = self.half_width();
        let one = Complex64::new(1.0, 0.0);
        let left = self.half.reflected(0.0);
        PiecewisePoly::combine(&[(one, &left), (one, &self.half)], -t, t)
    }
}

/// Largest half-width keeping both shifted bumps inside their gaps.
pub fn admissible_t(a: f64, b: f64) -> f64 {
    a.min(b - a).min(PI - b)
}

/// `s(t) = G(b - t)` and `r(t) = -G(a - t)`.
pub fn build_sr(bump: &BumpSpec, a: f64, b: f64) -> Result<(FunctionRep, FunctionRep)> {
    if !(a > 0.0 && a < b && b < PI) {
        return Err(Error::InvalidArguments { a, b });
    }
    let limit = admissible_t(a, b);
    if bump.half_width() > limit * (1.0 + 1e-14) {
        return Err(Error::Precondition(format!(
            "bump half-width {} exceeds the admissible {limit}",
            bump.half_width()
        )));
    }
    let g = bump.even_extension();
    let s = FunctionRep::clipped(&g.reflected(b));
    let r = FunctionRep::clipped(&g.reflected(a).scaled(Complex64::new(-1.0, 0.0)));
    Ok((s, r))
}

pub type Pair = (FunctionRep, FunctionRep);

/// `(-r, s + r)` and `(-s - r, s)`.
pub fn confusable_pairs(s: &FunctionRep, r: &FunctionRep) -> Result<(Pair, Pair)> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let neg_r = linear_combine(-one, r, zero, s)?;
    let s_plus_r = linear_combine(one, s, one, r)?;
    let neg_s_minus_r = linear_combine(-one, s, -one, r)?;
    let s_copy = linear_combine(one, s, zero, r)?;
    Ok(((neg_r, s_plus_r), (neg_s_minus_r, s_copy)))
}

/// Magnitude of the leading term of `Delta_j`, used to make comparisons
/// relative without degenerating at zeros.
pub fn delta_scale(j: Bvp, rho: &Rho) -> f64 {
    let growth = (PI * rho.rho().im.abs()).cosh();
    match j {
        Bvp::Dirichlet => growth / rho.rho().norm().max(1.0),
        Bvp::Neumann => growth,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoincidenceReport {
    /// `max |Delta_j(pair1) - Delta_j(pair2)| / scale` over the grid and both `j`.
    pub max_discrepancy: f64,
    pub discrepancy_by_j: [f64; 2],
    pub eigenvalues_compared: usize,
    /// `max_n |lambda_n(pair1) - lambda_n(pair2)|` per `j`.
    pub eigenvalue_gap_by_j: [f64; 2],
}

pub fn verify_coincidence(
    pair1: &Pair,
    pair2: &Pair,
    a: f64,
    b: f64,
    grid: &[Complex64],
    eigen_count: usize,
) -> Result<CoincidenceReport> {
    let first = Problem::new(a, b, pair1.0.clone(), pair1.1.clone())?;
    let second = Problem::new(a, b, pair2.0.clone(), pair2.1.clone())?;
    let mut by_j = [0.0; 2];
    let mut gaps = [0.0; 2];
    for j in Bvp::BOTH {
        let k = j.index() as usize;
        by_j[k] = grid
            .par_iter()
            .map(|&l| {
                let rho = Rho::from_lambda(l);
                let d1 = delta_expanded(j, &rho, &first).total;
                let d2 = delta_expanded(j, &rho, &second).total;
                (d1 - d2).norm() / delta_scale(j, &rho).max(d1.norm())
            })
            .reduce(|| 0.0, f64::max);
        if eigen_count > 0 {
            let opts = crate::spectrum::LocateOptions { certify: false };
            let s1 = locate_with(&first, j, eigen_count, opts)?;
            let s2 = locate_with(&second, j, eigen_count, opts)?;
            if s1.len() != s2.len() {
                gaps[k] = f64::INFINITY;
            } else {
                gaps[k] = s1
                    .eigenvalues
                    .iter()
                    .zip(&s2.eigenvalues)
                    .map(|(x, y)| (x.lambda - y.lambda).norm())
                    .fold(0.0, f64::max);
            }
        }
    }
    Ok(CoincidenceReport {
        max_discrepancy: by_j[0].max(by_j[1]),
        discrepancy_by_j: by_j,
        eigenvalues_compared: eigen_count,
        eigenvalue_gap_by_j: gaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn admissible_examples() {
        assert_eq!(admissible_t(PI / 4.0, PI / 2.0), PI / 4.0);
        assert!((admissible_t(PI / 3.0, 2.0 * PI / 3.0) - PI / 3.0).abs() < 1e-15);
        assert_eq!(admissible_t(0.1, 3.0), 0.1);
        assert!((admissible_t(1.0, 3.0) - (PI - 3.0)).abs() < 1e-15);
    }

    #[test]
    fn box_bump_gives_the_printed_s_and_r() {
        let bump = BumpSpec::boxcar(PI / 4.0).unwrap();
        let (s, r) = build_sr(&bump, PI / 4.0, PI / 2.0).unwrap();
        for k in 1..100 {
            let t = PI * (k as f64 + 0.5) / 100.0;
            let want_s = if (PI / 4.0..3.0 * PI / 4.0).contains(&t) {
                1.0
            } else {
                0.0
            };
            let want_r = if t < PI / 2.0 { -1.0 } else { 0.0 };
            assert_eq!(s.eval(t), c(want_s));
            assert_eq!(r.eval(t), c(want_r));
        }
        let ((p1, q1), (p2, q2)) = confusable_pairs(&s, &r).unwrap();
        assert_eq!(p1.eval(0.3), c(1.0));
        assert_eq!(q1.eval(0.3), c(-1.0));
        assert_eq!(p2.eval(1.0), c(0.0));
        assert_eq!(q2.eval(1.0), c(1.0));
    }

    #[test]
    fn hat_bump_is_centered_at_b() {
        let bump = BumpSpec::hat(0.5).unwrap();
        let (s, _) = build_sr(&bump, 1.0, 2.0).unwrap();
        for t in [1.5, 1.8, 2.0, 2.3, 2.5] {
            assert!((s.eval(t) - c(1.0 - (t - 2.0f64).abs() / 0.5)).norm() < 1e-14);
        }
    }

    #[test]
    fn oversized_bump_is_rejected() {
        let bump = BumpSpec::boxcar(1.0).unwrap();
        assert!(matches!(build_sr(&bump, 1.0, 1.5), Err(Error::Precondition(_))));
    }
}
