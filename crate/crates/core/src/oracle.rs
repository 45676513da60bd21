//! Brute-force references used by the invariant suites: adaptive
//! Gauss-Kronrod quadrature on pointwise evaluations, and a Galerkin
//! eigenvalue solver in the unperturbed eigenbasis. Neither touches the
//! closed-form moment code.

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::charfn::{Bvp, Problem};
use crate::PI;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_depth: u32,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        QuadTolerance {
            abs: 1e-15,
            rel: 1e-14,
            max_depth: 40,
        }
    }
}

/// `(K15, G7, int |f|, int |f'|)` on `[a, b]`; the last two are node estimates.
fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, Complex64, f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut vals = [Complex64::new(0.0, 0.0); 15];
    vals[7] = f(c);
    for i in 0..7 {
        vals[i] = f(c - h * XGK[i]);
        vals[14 - i] = f(c + h * XGK[i]);
    }
    let mut k = vals[7] * WGK[7];
    let mut g = vals[7] * WG[3];
    let mut mass = vals[7].norm() * WGK[7];
    for i in 0..7 {
        let (f1, f2) = (vals[i], vals[14 - i]);
        k += (f1 + f2) * WGK[i];
        mass += (f1.norm() + f2.norm()) * WGK[i];
        if i % 2 == 1 {
            g += (f1 + f2) * WG[i / 2];
        }
    }
    let variation: f64 = vals.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
    (k * h, g * h, mass * h.abs(), variation)
}

fn adapt<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> (Complex64, f64) {
    let (k, g, mass, variation) = kronrod(f, a, b);
    // rounding in the integrand values and in the node positions themselves
    let floor = 100.0 * f64::EPSILON * (mass + 0.5 * (a.abs() + b.abs()) * variation);
    if (k - g).norm() <= tol.max(floor) || depth == 0 || b - a < 1e-13 {
        return (k, mass);
    }
    let m = 0.5 * (a + b);
    let (l, ml) = adapt(f, a, m, tol / 2.0, depth - 1);
    let (r, mr) = adapt(f, m, b, tol / 2.0, depth - 1);
    (l + r, ml + mr)
}

/// `int f` over `[cuts[0], cuts.last()]`, split at every interior cut.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, cuts: &[f64], tol: QuadTolerance) -> Complex64 {
    integrate_with_mass(f, cuts, tol).0
}

/// Integral together with `int |f|`, the natural conditioning scale.
pub fn integrate_with_mass<F: Fn(f64) -> Complex64>(f: F, cuts: &[f64], tol: QuadTolerance) -> (Complex64, f64) {
    let mut total = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for w in cuts.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (_, _, m0, _) = kronrod(&f, w[0], w[1]);
        let target = tol.abs.max(tol.rel * m0);
        let (v, m) = adapt(&f, w[0], w[1], target, tol.max_depth);
        total += v;
        mass += m;
    }
    (total, mass)
}

/// Sorted cut points for integrating `f` over `[c, d]`.
pub fn cuts_for(breakpoints: &[f64], c: f64, d: f64) -> Vec<f64> {
    let mut cuts = vec![c, d];
    cuts.extend(breakpoints.iter().copied().filter(|t| *t > c && *t < d));
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts
}

fn mode(j: Bvp, n: usize, t: f64) -> f64 {
    match j {
        Bvp::Dirichlet => (n as f64 * t).sin(),
        Bvp::Neumann => ((n as f64 - 0.5) * t).cos(),
    }
}

/// Smallest `count` eigenvalues of the `modes`-term Galerkin truncation,
/// ordered by real part.
pub fn galerkin_eigenvalues(prob: &Problem, j: Bvp, modes: usize, count: usize) -> Vec<Complex64> {
    let coeffs = |f: &crate::FunctionRep| -> Vec<Complex64> {
        let bp = f.breakpoints();
        let cuts = cuts_for(&bp, 0.0, PI);
        (1..=modes)
            .into_par_iter()
            .map(|n| integrate(|t| f.eval(t) * mode(j, n, t), &cuts, QuadTolerance::default()))
            .collect()
    };
    let ph = coeffs(prob.p());
    let qh = coeffs(prob.q());
    let ea: Vec<f64> = (1..=modes).map(|m| mode(j, m, prob.a())).collect();
    let eb: Vec<f64> = (1..=modes).map(|m| mode(j, m, prob.b())).collect();
    let shift = j.shift();
    let entry = |r: usize, c: usize| -> Complex64 {
        let nu = (r + 1) as f64 - shift;
        let diag = if r == c { nu * nu } else { 0.0 };
        Complex64::new(diag, 0.0) + (ph[r] * ea[c] + qh[r] * eb[c]) * (2.0 / PI)
    };
    let real = ph.iter().chain(qh.iter()).all(|c| c.im == 0.0);
    let mut eig: Vec<Complex64> = if real {
        let m = DMatrix::<f64>::from_fn(modes, modes, |r, c| entry(r, c).re);
        m.complex_eigenvalues()
            .iter()
            .map(|z| Complex64::new(z.re, z.im))
            .collect()
    } else {
        let m = DMatrix::<Complex<f64>>::from_fn(modes, modes, |r, c| {
            let z = entry(r, c);
            Complex::new(z.re, z.im)
        });
        let (_, t) = m.schur().unpack();
        (0..modes).map(|k| Complex64::new(t[(k, k)].re, t[(k, k)].im)).collect()
    };
    eig.sort_by(|x, y| x.re.total_cmp(&y.re));
    eig.truncate(count);
    eig
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_handles_oscillation_and_kinks() {
        let v = integrate(
            |t| Complex64::new((40.0 * t).cos() * t, 0.0),
            &[0.0, 2.0],
            QuadTolerance::default(),
        );
        let exact = (80.0f64.sin() * 2.0) / 40.0 + (80.0f64.cos() - 1.0) / 1600.0;
        assert!((v.re - exact).abs() < 1e-14);
        let v = integrate(
            |t| Complex64::new(t.abs(), 0.0),
            &[-1.0, 0.0, 2.0],
            QuadTolerance::default(),
        );
        assert!((v.re - 2.5).abs() < 1e-14);
    }
}
