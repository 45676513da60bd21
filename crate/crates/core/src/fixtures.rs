//! Reference problems, grids and closed forms shared by the examples,
//! the `verify` command and the test suites.

use num_complex::Complex64;
use rand::Rng;

use crate::charfn::{Bvp, Problem};
use crate::funcrep::{linear_combine, Cubic, FunctionRep, PiecewisePoly, Rho, TrigBasis, TrigSeries};
use crate::PI;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn chi(lo: f64, hi: f64) -> FunctionRep {
    FunctionRep::indicator(lo, hi).expect("valid interval")
}

fn sum(alpha: f64, f: &FunctionRep, beta: f64, g: &FunctionRep) -> FunctionRep {
    linear_combine(c(alpha), f, c(beta), g).expect("piecewise operands")
}

/// Frozen arguments of the box-bump pair: `a = pi/4`, `b = pi/2`.
pub const BOX_A: f64 = PI / 4.0;
pub const BOX_B: f64 = PI / 2.0;

/// The two coefficient pairs generated by the box bump `chi_[-pi/4, pi/4]`,
/// written out directly rather than constructed.
pub fn box_bump_pairs() -> (Problem, Problem) {
    let quarter = chi(PI / 4.0, 3.0 * PI / 4.0);
    let half = chi(0.0, PI / 2.0);
    let first = Problem::new(BOX_A, BOX_B, half.clone(), sum(1.0, &quarter, -1.0, &half)).unwrap();
    let second = Problem::new(BOX_A, BOX_B, sum(-1.0, &quarter, 1.0, &half), quarter).unwrap();
    (first, second)
}

fn printed_delta_rho(j: Bvp, rho: Complex64) -> Complex64 {
    let x = rho * PI;
    let s = |k: f64| (x * k).sin();
    let co = |k: f64| (x * k).cos();
    let (c4, c2) = (co(0.25), co(0.5));
    match j {
        Bvp::Dirichlet => {
            s(1.0) / rho
                + (-s(1.0) * 3.0 + s(0.75) * 5.0 - s(0.5) * 2.0 + s(0.25)) / (rho.powi(3) * 2.0)
                + (s(0.5) * (c4 - 1.0).powi(2) + s(0.25) * (c4 - 1.0) * (c2 - c4) * 2.0) / rho.powi(5)
        }
        Bvp::Neumann => {
            co(1.0)
                + (-co(1.0) * 3.0 + co(0.75) * 3.0 + c4 - 1.0) / (rho * rho * 2.0)
                + (s(0.5) * s(0.25) * (1.0 - c4) + s(0.25).powi(2) * (c4 - c2) + c4 * (c4 - c2) * (1.0 - c4))
                    / rho.powi(4)
        }
    }
}

/// Published closed form of `Delta_j` for the box-bump pairs.
///
/// The expression has removable singularities at `rho = 0`; for `|lambda| < 1/4`
/// the value is taken as the mean over a circle of radius `1/2` around `lambda`.
pub fn box_bump_delta_closed_form(j: Bvp, lambda: Complex64) -> Complex64 {
    if lambda.norm() >= 0.25 {
        return printed_delta_rho(j, Rho::from_lambda(lambda).rho());
    }
    let m = 64;
    (0..m)
        .map(|k| {
            let z = lambda + Complex64::from_polar(0.5, 2.0 * PI * (k as f64 + 0.5) / m as f64);
            printed_delta_rho(j, Rho::from_lambda(z).rho())
        })
        .sum::<Complex64>()
        / m as f64
}

/// 50 real points evenly spaced on `[-5, 400]`.
pub fn real_grid() -> Vec<Complex64> {
    (0..50).map(|k| c(-5.0 + 405.0 * k as f64 / 49.0)).collect()
}

/// 40 points with `|lambda| <= 500`: the positive axis, a band just off it,
/// and the rays `arg lambda = pi/4, pi/2` out to the same radius.
pub fn complex_grid() -> Vec<Complex64> {
    let mut g = Vec::with_capacity(40);
    for k in 0..12 {
        g.push(c(0.3 + 499.7 * (k as f64 / 11.0).powi(2)));
    }
    for k in 0..8 {
        let x = 1.0 + 498.0 * (k as f64 / 7.0).powi(2);
        let y = if k % 2 == 0 { 0.5 } else { -0.5 };
        g.push(Complex64::new(x, y));
    }
    for arg in [PI / 4.0, PI / 2.0] {
        for k in 0..10 {
            g.push(Complex64::from_polar(0.5 + 499.5 * (k as f64 / 9.0).powi(2), arg));
        }
    }
    g
}

/// `p = sin t`, `q = cos t`, `a = 1`, `b = 2`; trace limit `sin 1 + cos 2`.
pub fn smooth_trace_problem() -> Problem {
    let p = FunctionRep::trig(TrigSeries::new(TrigBasis::Sine, vec![c(1.0)]));
    let q = FunctionRep::trig(TrigSeries::new(TrigBasis::Cosine, vec![c(0.0), c(1.0)]));
    Problem::new(1.0, 2.0, p, q).unwrap()
}

/// Sine series with `int_0^pi p sin(nt) dt = pi/(2n) sgn(sin(n a))` at `a = pi/3`, truncated.
pub fn divergent_sine_coefficient(terms: usize) -> FunctionRep {
    let coeffs = (1..=terms)
        .map(|n| {
            if n % 3 == 0 {
                c(0.0)
            } else {
                c((n as f64 * PI / 3.0).sin().signum() / n as f64)
            }
        })
        .collect();
    FunctionRep::trig(TrigSeries::new(TrigBasis::Sine, coeffs))
}

/// `p = chi_[b, b+0.3]`, `q = 0.5 chi_[b+0.2, pi]`, both zero on `[0, b]`.
pub fn right_supported_indicators(a: f64, b: f64) -> Problem {
    Problem::new(a, b, chi(b, b + 0.3), chi(b + 0.2, PI).scaled(c(0.5))).unwrap()
}

/// C^1 piecewise-cubic bump on `[l, r]` peaking at `height` in the middle.
pub fn smooth_bump(l: f64, r: f64, height: f64) -> PiecewisePoly {
    let m = 0.5 * (l + r);
    let w = m - l;
    let k2 = 3.0 * height / (w * w);
    let k3 = 2.0 * height / (w * w * w);
    PiecewisePoly::new(
        vec![l, m, r],
        vec![Cubic::real([0.0, 0.0, k2, -k3]), Cubic::real([height, 0.0, -k2, k3])],
    )
    .unwrap()
}

/// Smooth coefficients vanishing on `[0, b]`.
pub fn right_supported_smooth(a: f64, b: f64) -> Problem {
    let p = FunctionRep::clipped(&smooth_bump(b + 0.1, b + 0.8, 1.0));
    let q = FunctionRep::clipped(&smooth_bump(b + 0.3, PI - 0.1, 0.5));
    Problem::new(a, b, p, q).unwrap()
}

/// Frozen arguments for the two right-support variants: `a + b < pi` and `a + b > pi`.
pub const RIGHT_SUPPORT_ARGS: [(f64, f64); 2] = [(1.0, 1.8), (1.5, 2.0)];

/// Series length of the divergent mirrored fixture.
pub const DIVERGENT_TERMS: usize = 60;

/// `p = sum sgn(sin(n pi/3)) sin(nt)/n`, `a = pi/3`, mirrored so that every `s_n0` vanishes.
pub fn divergent_mirrored_problem() -> Problem {
    crate::traces::mirrored_pair(&divergent_sine_coefficient(DIVERGENT_TERMS), PI / 3.0).unwrap()
}

/// Every named reference problem.
pub fn named_fixtures() -> Vec<(String, Problem)> {
    let (first, second) = box_bump_pairs();
    let mut out = vec![
        ("box-pair-1".to_string(), first),
        ("box-pair-2".to_string(), second),
        ("smooth-trace".to_string(), smooth_trace_problem()),
        ("divergent-mirrored".to_string(), divergent_mirrored_problem()),
    ];
    for (a, b) in RIGHT_SUPPORT_ARGS {
        out.push((format!("right-indicators-{a}-{b}"), right_supported_indicators(a, b)));
        out.push((format!("right-smooth-{a}-{b}"), right_supported_smooth(a, b)));
    }
    out
}

fn random_piecewise<R: Rng>(rng: &mut R, degree: usize, complex: bool, amplitude: f64) -> FunctionRep {
    let cuts = rng.gen_range(1..=4);
    let mut bp: Vec<f64> = (0..cuts).map(|_| rng.gen_range(0.05..PI - 0.05)).collect();
    bp.push(0.0);
    bp.push(PI);
    bp.sort_by(f64::total_cmp);
    bp.dedup_by(|x, y| (*x - *y).abs() < 1e-3);
    let pieces = (0..bp.len() - 1)
        .map(|_| {
            let mut cu = Cubic::ZERO;
            for k in 0..=degree {
                let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
                cu.0[k] = Complex64::new(rng.gen_range(-1.0..1.0), im) * amplitude;
            }
            cu
        })
        .collect();
    FunctionRep::piecewise(PiecewisePoly::new(bp, pieces).unwrap()).unwrap()
}

/// Random admissible problem with piecewise coefficients of degree at most `degree`.
pub fn random_problem<R: Rng>(rng: &mut R, degree: usize, complex: bool, amplitude: f64) -> Problem {
    let a = rng.gen_range(0.2..PI - 0.5);
    let b = rng.gen_range(a + 0.15..PI - 0.1);
    let p = random_piecewise(rng, degree, complex, amplitude);
    let q = random_piecewise(rng, degree, complex, amplitude);
    Problem::new(a, b, p, q).unwrap()
}

/// Random piecewise-linear profile on `[0, t]`, nonzero at the origin.
pub fn random_half_profile<R: Rng>(rng: &mut R, t: f64) -> PiecewisePoly {
    let nodes = rng.gen_range(2..=5);
    let xs: Vec<f64> = (0..=nodes).map(|k| t * k as f64 / nodes as f64).collect();
    let ys: Vec<f64> = (0..=nodes)
        .map(|k| if k == 0 { 1.0 } else { rng.gen_range(-1.0..1.5) })
        .collect();
    let pieces = xs
        .windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| Cubic::real([y[0], (y[1] - y[0]) / (x[1] - x[0]), 0.0, 0.0]))
        .collect();
    PiecewisePoly::new(xs, pieces).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_is_continuous_through_the_small_disc() {
        for j in Bvp::BOTH {
            let inside = box_bump_delta_closed_form(j, c(0.25 - 1e-9));
            let outside = box_bump_delta_closed_form(j, c(0.25 + 1e-9));
            assert!((inside - outside).norm() < 1e-6, "{j:?}: {inside} vs {outside}");
        }
    }

    #[test]
    fn divergent_coefficients_have_the_stated_moments() {
        let p = divergent_sine_coefficient(12);
        let s = p.as_trig().unwrap();
        assert_eq!(s.coeffs[2], c(0.0));
        assert_eq!(s.coeffs[0], c(1.0));
        assert_eq!(s.coeffs[3], c(-0.25));
    }
}
