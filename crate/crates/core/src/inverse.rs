//! Coefficients vanishing on `[0, b]` from the two spectra: the product
//! formula gives `A_j`, sampled `A_j` gives the Fourier coefficients of
//! `W_j`, and a window-by-window sweep turns `W_0, W_1` into `p, q`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::charfn::{phi, Bvp};
use crate::funcrep::{sinc, FunctionRep, PiecewisePoly, Rho, TrigBasis, TrigSeries};
use crate::spectrum::Spectrum;
use crate::{Error, Result, PI};

const MAX_WINDOWS: usize = 10_000;

/// Dirichlet and Neumann spectra sharing indices `1..=n`.
#[derive(Clone, Debug)]
pub struct SpectraPair {
    spec0: Spectrum,
    spec1: Spectrum,
    n: usize,
}

impl SpectraPair {
    pub fn new(spec0: Spectrum, spec1: Spectrum) -> Result<SpectraPair> {
        if spec0.j != Bvp::Dirichlet || spec1.j != Bvp::Neumann {
            return Err(Error::Precondition(
                "expected the j = 0 spectrum first, then j = 1".into(),
            ));
        }
        for s in [&spec0, &spec1] {
            if s.eigenvalues.iter().enumerate().any(|(k, e)| e.n != k + 1) {
                return Err(Error::Precondition("spectrum indices must run 1..N".into()));
            }
        }
        let n = spec0
            .len()
            .min(spec1.len())
            .min(spec0.certified_through)
            .min(spec1.certified_through);
        if n == 0 {
            return Err(Error::Precondition(
                "both spectra must be certified and non-empty".into(),
            ));
        }
        Ok(SpectraPair { spec0, spec1, n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spectrum(&self, j: Bvp) -> &Spectrum {
        match j {
            Bvp::Dirichlet => &self.spec0,
            Bvp::Neumann => &self.spec1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructionResult {
    pub p: FunctionRep,
    pub q: FunctionRep,
    /// Fourier truncation order, when the data came from spectra.
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub window_count: usize,
    pub residuals: BTreeMap<String, f64>,
}

/// `phi_j(rho, pi) / ((m - j/2)^2 - lambda)` without cancellation, for `rho` near `m - j/2`.
fn phi_over_factor(j: Bvp, rho: Complex64, m: usize) -> Complex64 {
    let nu = m as f64 - j.shift();
    let sign = if m.is_multiple_of(2) { -1.0 } else { 1.0 }; // -(-1)^m
    let core = sinc((rho - nu) * PI) * (sign * PI);
    match j {
        Bvp::Dirichlet => core / (rho * (rho + nu)),
        Bvp::Neumann => core / (rho + nu),
    }
}

/// `Delta_j(lambda)` from the first `N` eigenvalues, with the unperturbed
/// product standing in for the tail.
pub fn delta_from_spectrum(j: Bvp, spec: &Spectrum, lambda: Complex64) -> Complex64 {
    let rho = Rho::from_lambda(lambda);
    let r = rho.rho();
    let n_max = spec.len();
    let near = (r.re + j.shift()).round().max(1.0) as usize;
    let safe = near <= n_max && (r - (near as f64 - j.shift())).norm() < 0.5;
    let mut acc = if safe {
        phi_over_factor(j, r, near)
    } else {
        phi(j, &rho, PI)
    };
    for e in &spec.eigenvalues {
        if safe && e.n == near {
            acc *= e.lambda - lambda;
        } else {
            acc *= (e.lambda - lambda) / (j.unperturbed(e.n) - lambda);
        }
    }
    acc
}

/// `A_{j0} + A_{j1} = Delta_j - phi_j(rho, pi)`, valid when the cross term vanishes.
pub fn recover_a(j: Bvp, spec: &Spectrum, lambda: Complex64) -> Complex64 {
    delta_from_spectrum(j, spec, lambda) - phi(j, &Rho::from_lambda(lambda), PI)
}

/// Series coefficients of `W_j` from sampled `A_j` (`A` evaluated at `(m - j/2)^2`).
pub fn w_series_from_samples(j: Bvp, samples: &[Complex64]) -> FunctionRep {
    match j {
        Bvp::Dirichlet => {
            let mut coeffs = vec![Complex64::new(0.0, 0.0)];
            coeffs.extend(samples.iter().enumerate().map(|(k, a)| {
                let m = (k + 1) as f64;
                a * (2.0 / PI * 2.0 * m * m)
            }));
            FunctionRep::trig(TrigSeries::new(TrigBasis::Cosine, coeffs))
        }
        Bvp::Neumann => {
            let coeffs = samples
                .iter()
                .enumerate()
                .map(|(k, a)| a * (2.0 / PI * 2.0 * (k as f64 + 0.5)))
                .collect();
            FunctionRep::trig(TrigSeries::new(TrigBasis::HalfSine, coeffs))
        }
    }
}

pub fn recover_w(j: Bvp, spec: &Spectrum, m: usize) -> Result<FunctionRep> {
    if m < 1 || m > spec.len() {
        return Err(Error::Precondition(format!(
            "truncation order {m} must lie in 1..={}",
            spec.len()
        )));
    }
    let samples: Vec<Complex64> = (1..=m)
        .into_par_iter()
        .map(|k| recover_a(j, spec, Complex64::new(j.unperturbed(k), 0.0)))
        .collect();
    Ok(w_series_from_samples(j, &samples))
}

/// Smallest `n` with `b + n (b - a) >= pi`.
pub fn window_count(a: f64, b: f64) -> usize {
    let d = b - a;
    let mut n = ((PI - b) / d).ceil().max(1.0) as usize;
    while n > 1 && b + (n - 1) as f64 * d >= PI {
        n -= 1;
    }
    while b + n as f64 * d < PI {
        n += 1;
    }
    n
}

fn one(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn piecewise_of(f: &FunctionRep, resolution: usize) -> PiecewisePoly {
    let pieces = match f.as_trig() {
        Some(s) => (16 * s.coeffs.len()).max(resolution),
        None => resolution,
    };
    f.to_piecewise(pieces)
}

pub fn staircase_solve(w0: &FunctionRep, w1: &FunctionRep, a: f64, b: f64) -> Result<ReconstructionResult> {
    if !(a > 0.0 && a < b && b < PI) {
        return Err(Error::InvalidArguments { a, b });
    }
    let d = b - a;
    if (PI - b) / d > MAX_WINDOWS as f64 {
        return Err(Error::Resolution(format!(
            "b - a = {d:e} needs more than {MAX_WINDOWS} windows"
        )));
    }
    let windows = window_count(a, b);
    let w0 = piecewise_of(w0, 512);
    let w1 = piecewise_of(w1, 512);
    let u0 = PiecewisePoly::combine(&[(one(0.5), &w0), (one(0.5), &w1)], 0.0, PI);
    let u1 = PiecewisePoly::combine(&[(one(0.5), &w0), (one(-0.5), &w1)], 0.0, PI);

    // p(z) + q(z - d) = g0(z) on [0, pi],  p(z - d) + q(z) = g1(z) on [b, pi]
    let g0_left = u0.reflected(PI - a).laid_out_on(0.0, PI - a);
    let g0_right = u1.translated(PI - a).laid_out_on(PI - a, PI);
    let g0 = PiecewisePoly::combine(&[(one(1.0), &g0_left), (one(1.0), &g0_right)], 0.0, PI);
    let g1 = u1.reflected(PI + b).scaled(one(-1.0)).laid_out_on(b, PI);

    let mut residuals = BTreeMap::new();
    residuals.insert("junction".to_string(), (u0.eval(0.0) - u1.eval(0.0)).norm());
    residuals.insert("g0_on_zero_b".to_string(), g0.laid_out_on(0.0, b).l2_norm());

    let mut p = PiecewisePoly::constant_on(0.0, PI, one(0.0))?;
    let mut q = p.clone();
    for k in 1..=windows {
        let lo = b + (k - 1) as f64 * d;
        let hi = (b + k as f64 * d).min(PI);
        if hi <= lo {
            break;
        }
        let q_prev = q.translated(d);
        let p_prev = p.translated(d);
        let p_k = PiecewisePoly::combine(&[(one(1.0), &g0), (one(-1.0), &q_prev)], lo, hi);
        let q_k = PiecewisePoly::combine(&[(one(1.0), &g1), (one(-1.0), &p_prev)], lo, hi);
        residuals.insert(format!("window_{k}_p_l2"), p_k.l2_norm());
        residuals.insert(format!("window_{k}_q_l2"), q_k.l2_norm());
        p = PiecewisePoly::combine(&[(one(1.0), &p), (one(1.0), &p_k)], 0.0, PI);
        q = PiecewisePoly::combine(&[(one(1.0), &q), (one(1.0), &q_k)], 0.0, PI);
    }
    Ok(ReconstructionResult {
        p: FunctionRep::piecewise(p)?,
        q: FunctionRep::piecewise(q)?,
        m: None,
        window_count: windows,
        residuals,
    })
}

pub fn reconstruct(pair: &SpectraPair, a: f64, b: f64, m: usize) -> Result<ReconstructionResult> {
    if m > pair.len() {
        return Err(Error::Precondition(format!(
            "truncation order {m} exceeds the {} certified eigenvalues",
            pair.len()
        )));
    }
    let w0 = recover_w(Bvp::Dirichlet, pair.spectrum(Bvp::Dirichlet), m)?;
    let w1 = recover_w(Bvp::Neumann, pair.spectrum(Bvp::Neumann), m)?;
    let mut result = staircase_solve(&w0, &w1, a, b)?;
    result.m = Some(m);
    Ok(result)
}

/// `||f - g||_2 / ||g||_2` (absolute when `g = 0`).
pub fn relative_l2(f: &FunctionRep, g: &FunctionRep) -> f64 {
    let fp = piecewise_of(f, 2048);
    let gp = piecewise_of(g, 2048);
    let diff = PiecewisePoly::combine(&[(one(1.0), &fp), (one(-1.0), &gp)], 0.0, PI).l2_norm();
    let norm = gp.l2_norm();
    if norm == 0.0 {
        diff
    } else {
        diff / norm
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfn::{w_function, Problem};

    #[test]
    fn unperturbed_spectrum_reproduces_phi() {
        for j in Bvp::BOTH {
            let spec = Spectrum::unperturbed(j, 30);
            for l in [
                Complex64::new(10.3, 0.0),
                Complex64::new(-3.0, 2.0),
                Complex64::new(j.unperturbed(4), 0.0),
                Complex64::new(2000.0, 0.0),
            ] {
                let want = phi(j, &Rho::from_lambda(l), PI);
                let got = delta_from_spectrum(j, &spec, l);
                assert!(
                    (got - want).norm() < 1e-13 * want.norm().max(1.0),
                    "{j:?} {l}: {got} vs {want}"
                );
            }
            let w = recover_w(j, &spec, 20).unwrap();
            assert!(w.l2_norm() < 1e-11);
        }
    }

    #[test]
    fn window_counts_match_a_scan() {
        for (a, b) in [(1.0, 1.8), (1.5, 2.0), (0.3, 0.4), (1.0, 2.0), (0.5, PI - 0.01)] {
            let n = window_count(a, b);
            let scan = (1..).find(|&k| b + k as f64 * (b - a) >= PI).unwrap();
            assert_eq!(n, scan, "a = {a}, b = {b}");
        }
    }

    #[test]
    fn zero_data_gives_zero_coefficients() {
        let z = FunctionRep::zero();
        let r = staircase_solve(&z, &z, 1.0, 1.8).unwrap();
        assert_eq!(r.p.l2_norm(), 0.0);
        assert_eq!(r.q.l2_norm(), 0.0);
    }

    #[test]
    fn exact_data_round_trip() {
        for (a, b) in crate::fixtures::RIGHT_SUPPORT_ARGS {
            let prob: Problem = crate::fixtures::right_supported_indicators(a, b);
            let w0 = w_function(Bvp::Dirichlet, prob.p(), prob.q(), a, b).unwrap();
            let w1 = w_function(Bvp::Neumann, prob.p(), prob.q(), a, b).unwrap();
            let r = staircase_solve(&w0, &w1, a, b).unwrap();
            assert!(relative_l2(&r.p, prob.p()) < 1e-10);
            assert!(relative_l2(&r.q, prob.q()) < 1e-10);
            assert_eq!(r.window_count, window_count(a, b));
        }
    }
}
