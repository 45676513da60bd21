//! The nine acceptance criteria. Tolerances and runtime budgets are fixed here
//! and are not adjusted to make a criterion pass.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{timed, Check};
use crate::charfn::{a_term, delta_determinant, delta_expanded, w_function, Bvp, Problem};
use crate::fixtures::{self, named_fixtures, random_half_profile, random_problem, RIGHT_SUPPORT_ARGS};
use crate::funcrep::{Cubic, FunctionRep, MomentArg, MomentKind, PiecewisePoly, Rho, TrigBasis, TrigSeries};
use crate::inverse::{reconstruct, relative_l2, staircase_solve, SpectraPair};
use crate::nonuniq::{admissible_t, build_sr, delta_scale, verify_coincidence, BumpSpec};
use crate::oracle::{cuts_for, galerkin_eigenvalues, integrate_with_mass, QuadTolerance};
use crate::spectrum::{asymptotic_report, locate_eigenvalues, locate_with, winding_with_radius, LocateOptions};
use crate::traces::{trace_coefficients, trace_compare};
use crate::{Result, PI};

pub const DUAL_PATH_TOL: f64 = 1e-10;
pub const UNPERTURBED_TOL: f64 = 1e-12;
pub const CLOSED_FORM_TOL: f64 = 1e-10;
pub const PAIR_EIGEN_TOL: f64 = 1e-8;
pub const BUMP_A_TOL: f64 = 1e-11;
pub const FLATTEN_TOL: f64 = 1e-4;
pub const GALERKIN_TOL: f64 = 1e-6;
pub const TRACE_TOL: f64 = 2e-3;
pub const MIRROR_S_TOL: f64 = 1e-13;
pub const RECONSTRUCTION_TOL: f64 = 1e-2;
pub const EXACT_RECONSTRUCTION_TOL: f64 = 1e-10;
pub const ORACLE_TOL: f64 = 1e-11;

/// Runtime budgets in seconds, criterion 1 first.
pub const BUDGETS: [f64; 9] = [5.0, 1.0, 10.0, 5.0, 60.0, 60.0, 120.0, 60.0, 10.0];

pub const SPECTRUM_N: usize = 200;
pub const FOURIER_M: usize = 150;
pub const GALERKIN_MODES: usize = 400;

pub fn all() -> Vec<Check> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
    ]
}

/// `|Delta_det - Delta_exp| / (1 + |Delta_exp|)`.
pub fn dual_path_gap(prob: &Problem, j: Bvp, lambda: Complex64) -> f64 {
    let rho = Rho::from_lambda(lambda);
    let e = delta_expanded(j, &rho, prob).total;
    let d = delta_determinant(j, &rho, prob);
    (d - e).norm() / (1.0 + e.norm())
}

pub fn criterion_1() -> Check {
    timed("criterion 1: dual-path identity", Some(BUDGETS[0]), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD0A1);
        let problems: Vec<Problem> = (0..20).map(|k| random_problem(&mut rng, 2, k % 2 == 1, 1.0)).collect();
        let grid = fixtures::complex_grid();
        let worst = problems
            .par_iter()
            .map(|prob| {
                let mut w: f64 = 0.0;
                for j in Bvp::BOTH {
                    for &l in &grid {
                        w = w.max(dual_path_gap(prob, j, l));
                    }
                }
                w
            })
            .reduce(|| 0.0, f64::max);
        Ok((
            worst <= DUAL_PATH_TOL,
            format!(
                "worst relative gap {worst:.2e} over 20 problems, {} points, j = 0, 1 (tol {DUAL_PATH_TOL:e})",
                grid.len()
            ),
        ))
    })
}

pub fn criterion_2() -> Check {
    timed("criterion 2: unperturbed spectra", Some(BUDGETS[1]), || {
        let prob = Problem::zero(1.0, 2.0)?;
        let mut worst: f64 = 0.0;
        for j in Bvp::BOTH {
            let spec = locate_eigenvalues(&prob, j, 20)?;
            if spec.len() != 20 {
                return Ok((false, format!("j = {}: located {} of 20", j.index(), spec.len())));
            }
            for e in &spec.eigenvalues {
                worst = worst.max((e.lambda - j.unperturbed(e.n)).norm());
            }
        }
        Ok((
            worst <= UNPERTURBED_TOL,
            format!("max |lambda_n - (n - j/2)^2| = {worst:.2e} for n <= 20 (tol {UNPERTURBED_TOL:e})"),
        ))
    })
}

pub fn criterion_3() -> Check {
    timed("criterion 3: box-bump pairs", Some(BUDGETS[2]), || {
        let (first, second) = fixtures::box_bump_pairs();
        let grid = fixtures::real_grid();
        let report = verify_coincidence(
            &(first.p().clone(), first.q().clone()),
            &(second.p().clone(), second.q().clone()),
            first.a(),
            first.b(),
            &grid,
            20,
        )?;
        let mut closed: f64 = 0.0;
        for j in Bvp::BOTH {
            for &l in &grid {
                let rho = Rho::from_lambda(l);
                let want = fixtures::box_bump_delta_closed_form(j, l);
                for prob in [&first, &second] {
                    let got = delta_expanded(j, &rho, prob).total;
                    closed = closed.max((got - want).norm() / want.norm().max(delta_scale(j, &rho)));
                }
            }
        }
        let eig = report.eigenvalue_gap_by_j[0].max(report.eigenvalue_gap_by_j[1]);
        let passed = report.max_discrepancy <= CLOSED_FORM_TOL && closed <= CLOSED_FORM_TOL && eig <= PAIR_EIGEN_TOL;
        Ok((
            passed,
            format!(
                "pair gap {:.2e}, closed-form gap {closed:.2e} (tol {CLOSED_FORM_TOL:e}); eigenvalue gap {eig:.2e} for n <= 20 (tol {PAIR_EIGEN_TOL:e})",
                report.max_discrepancy
            ),
        ))
    })
}

pub fn criterion_4() -> Check {
    timed("criterion 4: bump pairs kill A_j", Some(BUDGETS[3]), || {
        let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
        let real = fixtures::real_grid();
        let complex = fixtures::complex_grid();
        let mut cases = Vec::new();
        for _ in 0..10 {
            let a = rng.gen_range(0.3..PI - 1.0);
            let b = rng.gen_range(a + 0.3..PI - 0.2);
            let t = admissible_t(a, b) * rng.gen_range(0.3..1.0);
            let bump = BumpSpec::new(random_half_profile(&mut rng, t))?;
            let (s, r) = build_sr(&bump, a, b)?;
            cases.push(Problem::new(a, b, s, r)?);
        }
        let a_sum = |prob: &Problem, j: Bvp, rho: &Rho| (a_term(j, 0, rho, prob) + a_term(j, 1, rho, prob)).norm();
        let (abs, rel) = cases
            .par_iter()
            .map(|prob| {
                let (mut abs, mut rel): (f64, f64) = (0.0, 0.0);
                for j in Bvp::BOTH {
                    for &l in &real {
                        abs = abs.max(a_sum(prob, j, &Rho::from_lambda(l)));
                    }
                    // off the axis the terms grow like e^{pi Im rho}, so only the relative size is resolvable
                    for &l in &complex {
                        let rho = Rho::from_lambda(l);
                        rel = rel.max(a_sum(prob, j, &rho) / delta_scale(j, &rho).max(1.0));
                    }
                }
                (abs, rel)
            })
            .reduce(|| (0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1)));
        Ok((
            abs <= BUMP_A_TOL && rel <= BUMP_A_TOL,
            format!(
                "max |A_j| = {abs:.2e} on {} real points, max |A_j|/scale = {rel:.2e} on {} complex points, 10 bumps (tol {BUMP_A_TOL:e})",
                real.len(),
                complex.len()
            ),
        ))
    })
}

/// Increase of the running `l2` norm of `kappa_n` from `n = 150` to `n = 200`.
pub fn flattening(prob: &Problem, j: Bvp) -> Result<f64> {
    let spec = locate_eigenvalues(prob, j, SPECTRUM_N)?;
    let rows = asymptotic_report(&spec);
    let at = |n: usize| rows.iter().find(|r| r.n == n).map(|r| r.running_norm);
    match (at(150), at(200)) {
        (Some(x), Some(y)) => Ok(y - x),
        _ => Ok(f64::INFINITY),
    }
}

/// Largest distance from each of the first ten located eigenvalues to the Galerkin set.
pub fn galerkin_gap(prob: &Problem, j: Bvp) -> Result<f64> {
    let spec = locate_with(prob, j, 10, LocateOptions { certify: false })?;
    let oracle = galerkin_eigenvalues(prob, j, GALERKIN_MODES, 14);
    if spec.len() < 10 {
        return Ok(f64::INFINITY);
    }
    Ok(spec
        .eigenvalues
        .iter()
        .map(|e| {
            oracle
                .iter()
                .map(|z| (z - e.lambda).norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max))
}

pub fn criterion_5() -> Check {
    timed(
        "criterion 5: kappa flattening and Galerkin agreement",
        Some(BUDGETS[4]),
        || {
            let mut rows = Vec::new();
            let mut passed = true;
            let mut worst_flat: f64 = 0.0;
            let mut worst_gal: f64 = 0.0;
            for (name, prob) in named_fixtures() {
                for j in Bvp::BOTH {
                    let flat = flattening(&prob, j)?;
                    let gal = galerkin_gap(&prob, j)?;
                    worst_flat = worst_flat.max(flat);
                    worst_gal = worst_gal.max(gal);
                    if flat >= FLATTEN_TOL || gal > GALERKIN_TOL {
                        passed = false;
                        rows.push(format!(
                            "{name} j={}: increase {flat:.2e}, galerkin {gal:.2e}",
                            j.index()
                        ));
                    }
                }
            }
            let mut detail = format!(
            "worst increase {worst_flat:.2e} (tol {FLATTEN_TOL:e}), worst Galerkin gap {worst_gal:.2e} (tol {GALERKIN_TOL:e})"
        );
            if !rows.is_empty() {
                detail.push_str("; failing: ");
                detail.push_str(&rows.join("; "));
            }
            Ok((passed, detail))
        },
    )
}

pub fn criterion_6() -> Check {
    timed("criterion 6: regularized traces", Some(BUDGETS[5]), || {
        let prob = fixtures::smooth_trace_problem();
        let target = 1f64.sin() + 2f64.cos();
        let mut passed = true;
        let mut parts = Vec::new();
        for j in Bvp::BOTH {
            let rows = trace_compare(&prob, j, SPECTRUM_N)?;
            let last = rows.last().expect("rows");
            let eig = last.eig_partial.expect("attached") - target;
            let coeff = last.coeff_partial - target;
            passed &= eig.norm() <= TRACE_TOL && coeff.norm() <= TRACE_TOL;
            parts.push(format!(
                "smooth j={}: eigen {:+.2e}, coeff {:+.2e}",
                j.index(),
                eig.re,
                coeff.re
            ));
        }
        let mirrored = fixtures::divergent_mirrored_problem();
        let rows = trace_compare(&mirrored, Bvp::Dirichlet, SPECTRUM_N)?;
        let s_max = rows.iter().map(|r| r.s_n.norm()).fold(0.0, f64::max);
        let eig_sum = rows.last().and_then(|r| r.eig_partial).expect("attached").norm();
        let a_sum: Complex64 = trace_coefficients(&mirrored, Bvp::Dirichlet, 20)?
            .iter()
            .map(|r| r.a_n)
            .sum();
        passed &= s_max <= MIRROR_S_TOL && eig_sum <= TRACE_TOL && a_sum.re > 1.0;
        parts.push(format!(
            "mirrored: max |s_n0| {s_max:.1e} (tol {MIRROR_S_TOL:e}), |eigen sum| {eig_sum:.2e}, sum a_n0 (n <= 20) {:.3}",
            a_sum.re
        ));
        Ok((passed, format!("{} (tol {TRACE_TOL:e})", parts.join("; "))))
    })
}

/// Relative `L2` errors of `p` and `q` after spectra -> reconstruction.
pub fn spectral_round_trip(prob: &Problem) -> Result<(f64, f64)> {
    let s0 = locate_eigenvalues(prob, Bvp::Dirichlet, SPECTRUM_N)?;
    let s1 = locate_eigenvalues(prob, Bvp::Neumann, SPECTRUM_N)?;
    let r = reconstruct(&SpectraPair::new(s0, s1)?, prob.a(), prob.b(), FOURIER_M)?;
    Ok((relative_l2(&r.p, prob.p()), relative_l2(&r.q, prob.q())))
}

/// Relative `L2` errors of `p` and `q` from exact `W_0`, `W_1`.
pub fn exact_round_trip(prob: &Problem) -> Result<(f64, f64)> {
    let (a, b) = (prob.a(), prob.b());
    let w0 = w_function(Bvp::Dirichlet, prob.p(), prob.q(), a, b)?;
    let w1 = w_function(Bvp::Neumann, prob.p(), prob.q(), a, b)?;
    let r = staircase_solve(&w0, &w1, a, b)?;
    Ok((relative_l2(&r.p, prob.p()), relative_l2(&r.q, prob.q())))
}

pub fn criterion_7() -> Check {
    timed("criterion 7: inverse round trip", Some(BUDGETS[6]), || {
        let mut passed = true;
        let mut parts = Vec::new();
        for (a, b) in RIGHT_SUPPORT_ARGS {
            let prob = fixtures::right_supported_indicators(a, b);
            let (sp, sq) = spectral_round_trip(&prob)?;
            let (ep, eq) = exact_round_trip(&prob)?;
            passed &= sp <= RECONSTRUCTION_TOL && sq <= RECONSTRUCTION_TOL;
            passed &= ep <= EXACT_RECONSTRUCTION_TOL && eq <= EXACT_RECONSTRUCTION_TOL;
            let (mp, mq) = spectral_round_trip(&fixtures::right_supported_smooth(a, b))?;
            parts.push(format!(
                "a={a}, b={b}: spectra p {sp:.2e} q {sq:.2e}, exact p {ep:.1e} q {eq:.1e} (smooth variant p {mp:.1e} q {mq:.1e})"
            ));
        }
        Ok((
            passed,
            format!(
                "{} (tol {RECONSTRUCTION_TOL:e} spectral, {EXACT_RECONSTRUCTION_TOL:e} exact)",
                parts.join("; ")
            ),
        ))
    })
}

pub fn criterion_8() -> Check {
    timed("criterion 8: certification soundness", Some(BUDGETS[7]), || {
        let mut mismatches = Vec::new();
        let mut cases = 0;
        for (name, prob) in named_fixtures() {
            for j in Bvp::BOTH {
                for n in [10, 50, 200] {
                    let spec = locate_with(&prob, j, n, LocateOptions { certify: false })?;
                    let (winding, radius) = winding_with_radius(&prob, j, n)?;
                    let inside = spec.eigenvalues.iter().filter(|e| e.lambda.norm() < radius).count();
                    cases += 1;
                    if inside != winding {
                        mismatches.push(format!(
                            "{name} j={} N={n}: winding {winding}, located {inside}",
                            j.index()
                        ));
                    }
                }
            }
        }
        let detail = if mismatches.is_empty() {
            format!("{cases} fixture/j/N cases agree")
        } else {
            mismatches.join("; ")
        };
        Ok((mismatches.is_empty(), detail))
    })
}

/// Radii `|rho|` of the moment test grid; each is used on the real and imaginary axis.
pub const RHO_RADII: [f64; 6] = [0.01, 0.5, 1.0, 2.5, 7.0, 15.5];

pub fn rho_grid() -> Vec<Rho> {
    RHO_RADII
        .iter()
        .flat_map(|&r| [Rho::real(r), Rho::new(Complex64::new(0.0, r))])
        .collect()
}

/// Coefficient functions exercising every closed-form path.
pub fn moment_functions() -> Vec<FunctionRep> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0AC1E);
    let mut out = vec![
        FunctionRep::piecewise(
            PiecewisePoly::new(vec![0.0, 1.0, PI], vec![Cubic::real([0.0, 1.0, 0.0, 0.0]), Cubic::ZERO]).unwrap(),
        )
        .unwrap(),
        FunctionRep::indicator(0.4, 2.1).unwrap(),
        FunctionRep::clipped(&fixtures::smooth_bump(0.5, 2.9, 1.3)),
        random_problem(&mut rng, 3, true, 1.0).p().clone(),
        random_problem(&mut rng, 3, false, 2.0).q().clone(),
    ];
    for basis in [
        TrigBasis::Sine,
        TrigBasis::Cosine,
        TrigBasis::HalfSine,
        TrigBasis::HalfCosine,
    ] {
        let coeffs = (0..6)
            .map(|k| Complex64::new(1.0 / (k + 1) as f64, 0.3 * k as f64))
            .collect();
        out.push(FunctionRep::trig(TrigSeries::new(basis, coeffs)));
    }
    out
}

fn kernel(kind: MomentKind, rho: Complex64, x: f64) -> Complex64 {
    match kind {
        MomentKind::Sin => (rho * x).sin(),
        MomentKind::Cos => (rho * x).cos(),
        MomentKind::Sinc => (rho * x).sin() / rho,
    }
}

/// Closed form against adaptive quadrature: `(gap, mass)` with `mass = int |integrand|`.
pub fn oracle_gap(f: &FunctionRep, rho: &Rho, kind: MomentKind, cd: (f64, f64), arg: MomentArg) -> (f64, f64) {
    let (lo, hi) = cd;
    let closed = f.moment(rho, kind, lo, hi, arg);
    let r = rho.rho();
    let x = |t: f64| match arg {
        MomentArg::T => t,
        MomentArg::UpperMinusT => hi - t,
        MomentArg::TMinusLower => t - lo,
    };
    let cuts = cuts_for(&f.breakpoints(), lo, hi);
    let (v, mass) = integrate_with_mass(|t| kernel(kind, r, x(t)) * f.eval(t), &cuts, QuadTolerance::default());
    ((closed - v).norm(), mass)
}

pub fn criterion_9() -> Check {
    timed(
        "criterion 9: closed-form moments vs quadrature",
        Some(BUDGETS[8]),
        || {
            let funcs = moment_functions();
            let rhos = rho_grid();
            let intervals = [(0.0, PI), (0.3, 2.2), (1.0, 1.05), (2.0, PI)];
            let kinds = [MomentKind::Sin, MomentKind::Cos, MomentKind::Sinc];
            let args = [MomentArg::T, MomentArg::UpperMinusT, MomentArg::TMinusLower];
            let mut jobs = Vec::new();
            for f in &funcs {
                for rho in &rhos {
                    for &kind in &kinds {
                        for &arg in &args {
                            for &cd in &intervals {
                                jobs.push((f, *rho, kind, arg, cd));
                            }
                        }
                    }
                }
            }
            let (worst, worst_abs) = jobs
                .par_iter()
                .map(|&(f, rho, kind, arg, cd)| {
                    let (gap, mass) = oracle_gap(f, &rho, kind, cd, arg);
                    (gap / mass.max(1.0), gap)
                })
                .reduce(|| (0.0, 0.0), |x, y| (x.0.max(y.0), x.1.max(y.1)));
            Ok((
            worst <= ORACLE_TOL,
            format!(
                "{} moments: worst gap {worst:.2e} relative to max(1, int |integrand|) (tol {ORACLE_TOL:e}); worst absolute {worst_abs:.2e}",
                jobs.len()
            ),
        ))
        },
    )
}
