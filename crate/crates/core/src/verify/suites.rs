//! Module-level invariant suites.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::acceptance::{self, moment_functions, oracle_gap, rho_grid};
use super::{timed, Check};
use crate::charfn::{a_term, b_term, delta_expanded, u_function, w_function, Bvp, Problem};
use crate::fixtures::{self, named_fixtures, random_half_profile, random_problem};
use crate::funcrep::{linear_combine, shift_reflect, Branch, MomentArg, MomentKind, Rho};
use crate::inverse::{delta_from_spectrum, recover_a, recover_w, relative_l2, SpectraPair};
use crate::nonuniq::{admissible_t, build_sr, confusable_pairs, BumpSpec};
use crate::spectrum::{locate_eigenvalues, Spectrum};
use crate::traces::{trace_compare, trend};
use crate::{Result, PI};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn grid_1000() -> Vec<f64> {
    (0..1000).map(|k| PI * (k as f64 + 0.5) / 1000.0).collect()
}

pub(super) fn funcrep() -> Vec<Check> {
    vec![
        timed("funcrep: t on [0,1] cosine moment at rho = 3.7", None, || {
            let (gap, _) = oracle_gap(
                &moment_functions()[0],
                &Rho::real(3.7),
                MomentKind::Cos,
                (0.0, PI),
                MomentArg::T,
            );
            Ok((gap <= 1e-12, format!("gap {gap:.2e} (tol 1e-12)")))
        }),
        timed("funcrep: parity in rho", None, || {
            let mut worst: f64 = 0.0;
            for f in moment_functions() {
                for rho in rho_grid() {
                    for (kind, sign) in [(MomentKind::Cos, 1.0), (MomentKind::Sin, -1.0), (MomentKind::Sinc, 1.0)] {
                        let x = f.moment(&rho, kind, 0.3, 2.9, MomentArg::UpperMinusT);
                        let y = f.moment(&rho.neg(), kind, 0.3, 2.9, MomentArg::UpperMinusT);
                        worst = worst.max((x - y * sign).norm() / x.norm().max(1.0));
                    }
                }
            }
            Ok((worst <= 1e-13, format!("worst parity defect {worst:.2e} (tol 1e-13)")))
        }),
        timed("funcrep: series and closed branches overlap", None, || {
            let mut worst: f64 = 0.0;
            for f in moment_functions().iter().filter(|f| f.as_piecewise().is_some()) {
                for r in [0.4, 0.5, 0.6] {
                    let rho = Rho::new(Complex64::from_polar(r, 0.7));
                    for kind in [MomentKind::Cos, MomentKind::Sin, MomentKind::Sinc] {
                        let s = f.moment_with(&rho, kind, 0.0, PI, MomentArg::T, Branch::Series);
                        let cl = f.moment_with(&rho, kind, 0.0, PI, MomentArg::T, Branch::Closed);
                        worst = worst.max((s - cl).norm());
                    }
                }
            }
            Ok((
                worst <= 1e-12,
                format!("worst branch disagreement {worst:.2e} for 0.4 <= |rho| <= 0.6 (tol 1e-12)"),
            ))
        }),
        timed("funcrep: reflection is an involution", None, || {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            let mut worst: f64 = 0.0;
            for _ in 0..5 {
                let g = random_problem(&mut rng, 3, true, 1.0).p().clone();
                let c0 = rng.gen_range(0.0..PI);
                let back = shift_reflect(&shift_reflect(&g, c0)?, c0)?;
                for t in grid_1000() {
                    // only points whose mirror image stays inside [0, pi] survive the clipping
                    if c0 - t > 0.0 && c0 - t < PI {
                        worst = worst.max((back.eval(t) - g.eval(t)).norm());
                    }
                }
            }
            Ok((
                worst <= 1e-13,
                format!("worst pointwise defect {worst:.2e} (tol 1e-13)"),
            ))
        }),
    ]
}

pub(super) fn charfn() -> Vec<Check> {
    vec![
        acceptance::criterion_1(),
        timed("charfn: cross term is bilinear and antisymmetric", None, || {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            let (p1, p2, q) = (
                random_problem(&mut rng, 2, true, 1.0),
                random_problem(&mut rng, 2, true, 1.0),
                random_problem(&mut rng, 2, true, 1.0),
            );
            let (a, b) = (q.a(), q.b());
            let (al, be) = (Complex64::new(0.7, -0.2), c(-1.3));
            let mix = linear_combine(al, p1.p(), be, p2.p())?;
            let mut bil: f64 = 0.0;
            let mut anti: f64 = 0.0;
            for j in Bvp::BOTH {
                for l in fixtures::complex_grid() {
                    let rho = Rho::from_lambda(l);
                    let lhs = b_term(j, &rho, &mix, q.q(), a, b);
                    let rhs = al * b_term(j, &rho, p1.p(), q.q(), a, b) + be * b_term(j, &rho, p2.p(), q.q(), a, b);
                    bil = bil.max((lhs - rhs).norm() / rhs.norm().max(1.0));
                    anti =
                        anti.max((b_term(j, &rho, p1.p(), q.q(), a, b) + b_term(j, &rho, q.q(), p1.p(), a, b)).norm());
                }
            }
            Ok((
                bil <= 1e-12 && anti == 0.0,
                format!("bilinearity {bil:.2e} (tol 1e-12), antisymmetry {anti:.1e}"),
            ))
        }),
        timed(
            "charfn: cross term vanishes for coefficients supported right of b",
            None,
            || {
                let mut worst: f64 = 0.0;
                for (a, b) in fixtures::RIGHT_SUPPORT_ARGS {
                    for prob in [
                        fixtures::right_supported_indicators(a, b),
                        fixtures::right_supported_smooth(a, b),
                    ] {
                        for j in Bvp::BOTH {
                            for l in fixtures::complex_grid() {
                                worst = worst.max(b_term(j, &Rho::from_lambda(l), prob.p(), prob.q(), a, b).norm());
                            }
                        }
                    }
                }
                Ok((worst == 0.0, format!("max |B_j| = {worst:.1e}")))
            },
        ),
        timed(
            "charfn: u0, u1 equal the half sum and difference of W0, W1",
            None,
            || {
                let mut rng = ChaCha8Rng::seed_from_u64(13);
                let mut worst: f64 = 0.0;
                for _ in 0..5 {
                    let prob = random_problem(&mut rng, 2, false, 1.0);
                    let (a, b) = (prob.a(), prob.b());
                    let w0 = w_function(Bvp::Dirichlet, prob.p(), prob.q(), a, b)?;
                    let w1 = w_function(Bvp::Neumann, prob.p(), prob.q(), a, b)?;
                    let u0 = u_function(0, prob.p(), prob.q(), a, b)?;
                    let u1 = u_function(1, prob.p(), prob.q(), a, b)?;
                    for t in grid_1000() {
                        worst = worst.max((u0.eval(t) - (w0.eval(t) + w1.eval(t)) * 0.5).norm());
                        worst = worst.max((u1.eval(t) - (w0.eval(t) - w1.eval(t)) * 0.5).norm());
                    }
                }
                Ok((worst <= 1e-14, format!("worst defect {worst:.2e} (tol 1e-14)")))
            },
        ),
    ]
}

pub(super) fn spectrum() -> Vec<Check> {
    vec![
        acceptance::criterion_2(),
        timed("spectrum: Galerkin agreement for every fixture", None, || {
            let mut worst: f64 = 0.0;
            for (_, prob) in named_fixtures() {
                for j in Bvp::BOTH {
                    worst = worst.max(acceptance::galerkin_gap(&prob, j)?);
                }
            }
            Ok((
                worst <= acceptance::GALERKIN_TOL,
                format!(
                    "worst gap over ten eigenvalues {worst:.2e} (tol {:e})",
                    acceptance::GALERKIN_TOL
                ),
            ))
        }),
        acceptance::criterion_8(),
    ]
}

pub(super) fn nonuniq() -> Vec<Check> {
    vec![
        acceptance::criterion_3(),
        acceptance::criterion_4(),
        timed("nonuniq: W0 and u0, u1 of (s, r) vanish", None, || {
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            let mut worst: f64 = 0.0;
            for _ in 0..10 {
                let a = rng.gen_range(0.3..PI - 1.0);
                let b = rng.gen_range(a + 0.3..PI - 0.2);
                let bump = BumpSpec::new(random_half_profile(&mut rng, admissible_t(a, b)))?;
                let (s, r) = build_sr(&bump, a, b)?;
                let fs = [
                    w_function(Bvp::Dirichlet, &s, &r, a, b)?,
                    u_function(0, &s, &r, a, b)?,
                    u_function(1, &s, &r, a, b)?,
                ];
                for f in &fs {
                    for t in grid_1000() {
                        worst = worst.max(f.eval(t).norm());
                    }
                }
            }
            Ok((worst < 1e-12, format!("max |W0|, |u0|, |u1| = {worst:.1e} (tol 1e-12)")))
        }),
        timed(
            "nonuniq: constructed pairs match the printed box-bump pairs",
            None,
            || {
                let (s, r) = build_sr(&BumpSpec::boxcar(PI / 4.0)?, fixtures::BOX_A, fixtures::BOX_B)?;
                let ((p1, q1), (p2, q2)) = confusable_pairs(&s, &r)?;
                let (first, second) = fixtures::box_bump_pairs();
                let worst = [
                    relative_l2(&p1, first.p()),
                    relative_l2(&q1, first.q()),
                    relative_l2(&p2, second.p()),
                    relative_l2(&q2, second.q()),
                ]
                .into_iter()
                .fold(0.0, f64::max);
                Ok((worst == 0.0, format!("L2 distance {worst:.1e}")))
            },
        ),
    ]
}

pub(super) fn traces() -> Vec<Check> {
    vec![
        acceptance::criterion_6(),
        timed("traces: smooth fixture gap trend", None, || {
            let prob = fixtures::smooth_trace_problem();
            let mut passed = true;
            let mut parts = Vec::new();
            for j in Bvp::BOTH {
                let rows = trace_compare(&prob, j, acceptance::SPECTRUM_N)?;
                let t = trend(&rows).expect("eigenvalue column attached");
                passed &= t.max_gap_from_50 < 1e-2 && t.final_gap < 2e-3;
                parts.push(format!(
                    "j={}: max gap from n = 50 {:.2e} (tol 1e-2), gap at 200 {:.2e} (tol 2e-3)",
                    j.index(),
                    t.max_gap_from_50,
                    t.final_gap
                ));
            }
            Ok((passed, parts.join("; ")))
        }),
    ]
}

pub(super) fn inverse() -> Vec<Check> {
    vec![
        acceptance::criterion_7(),
        timed("inverse: product formula converges in N", None, || {
            let l = c(10.3);
            let mut bad = Vec::new();
            for (name, prob) in named_fixtures() {
                for j in Bvp::BOTH {
                    let spec = locate_eigenvalues(&prob, j, 200)?;
                    let want = delta_expanded(j, &Rho::from_lambda(l), &prob).total;
                    let gaps: Vec<f64> = [25, 50, 100, 200]
                        .iter()
                        .map(|&n| (delta_from_spectrum(j, &truncate(&spec, n), l) - want).norm())
                        .collect();
                    // steps that stay at round-off level are not counted as increases
                    let floor = 1e-13 * (1.0 + want.norm());
                    if gaps.windows(2).any(|w| w[1] > w[0] && w[1] > floor) {
                        let shown: Vec<String> = gaps.iter().map(|g| format!("{g:.2e}")).collect();
                        bad.push(format!("{name} j={}: {}", j.index(), shown.join(" > ")));
                    }
                }
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    "monotone for every fixture".into()
                } else {
                    bad.join("; ")
                },
            ))
        }),
        timed("inverse: recovered A0 at rho = 3", None, || {
            let prob = fixtures::right_supported_indicators(1.0, 1.8);
            let spec = locate_eigenvalues(&prob, Bvp::Dirichlet, 200)?;
            let rho = Rho::real(3.0);
            let want = a_term(Bvp::Dirichlet, 0, &rho, &prob) + a_term(Bvp::Dirichlet, 1, &rho, &prob);
            let gap = (recover_a(Bvp::Dirichlet, &spec, rho.lambda()) - want).norm();
            Ok((gap <= 5e-4, format!("gap {gap:.2e} (tol 5e-4)")))
        }),
        timed("inverse: recovered W0 in L2 at M = 150", None, || {
            let prob = fixtures::right_supported_indicators(1.0, 1.8);
            let spec = locate_eigenvalues(&prob, Bvp::Dirichlet, 200)?;
            let w = recover_w(Bvp::Dirichlet, &spec, 150)?;
            let exact = w_function(Bvp::Dirichlet, prob.p(), prob.q(), prob.a(), prob.b())?;
            let gap = relative_l2(&w, &exact);
            Ok((gap <= 1e-2, format!("relative L2 {gap:.2e} (tol 1e-2)")))
        }),
        timed("inverse: reconstructions separate different fixtures", None, || {
            let (a, b) = (1.0, 1.8);
            let first = fixtures::right_supported_indicators(a, b);
            let second = fixtures::right_supported_smooth(a, b);
            let rebuilt = rebuild(&first)?;
            let other = rebuild(&second)?;
            let d = relative_l2(rebuilt.p(), second.p()).min(relative_l2(rebuilt.q(), second.q()));
            let d2 = relative_l2(other.p(), first.p()).min(relative_l2(other.q(), first.q()));
            Ok((
                d > 0.1 && d2 > 0.1,
                format!("cross distances {d:.2} and {d2:.2} (must exceed 0.1)"),
            ))
        }),
    ]
}

fn truncate(spec: &Spectrum, n: usize) -> Spectrum {
    let mut s = spec.clone();
    s.eigenvalues.truncate(n);
    s.certified_through = s.certified_through.min(n);
    s
}

fn rebuild(prob: &Problem) -> Result<Problem> {
    let s0 = locate_eigenvalues(prob, Bvp::Dirichlet, acceptance::SPECTRUM_N)?;
    let s1 = locate_eigenvalues(prob, Bvp::Neumann, acceptance::SPECTRUM_N)?;
    let r = crate::inverse::reconstruct(&SpectraPair::new(s0, s1)?, prob.a(), prob.b(), acceptance::FOURIER_M)?;
    Problem::new(prob.a(), prob.b(), r.p, r.q)
}

pub(super) fn cli() -> Vec<Check> {
    vec![
        timed("cli: problem JSON round trip is a fixed point", None, || {
            let mut worst_ok = true;
            for (_, prob) in named_fixtures() {
                let text = serde_json::to_string(&prob)?;
                let back: Problem = serde_json::from_str(&text)?;
                worst_ok &= serde_json::to_string(&back)? == text && back == prob;
            }
            Ok((
                worst_ok,
                "serialize, parse, serialize is stable for every fixture".into(),
            ))
        }),
        timed(
            "cli: grid export of the two box-bump pairs agrees to 10 digits",
            None,
            || {
                let (first, second) = fixtures::box_bump_pairs();
                let grid = crate::cli::line_grid(c(0.0), c(30.0), 301);
                let mut same = true;
                for j in Bvp::BOTH {
                    let x = crate::cli::grid_rows(&first, j, &grid);
                    let y = crate::cli::grid_rows(&second, j, &grid);
                    same &= x.iter().zip(&y).all(|(u, v)| {
                        crate::cli::round_sig(u.total.re, 10) == crate::cli::round_sig(v.total.re, 10)
                            && crate::cli::round_sig(u.total.im, 10) == crate::cli::round_sig(v.total.im, 10)
                    });
                }
                Ok((same, "Delta columns identical after rounding".into()))
            },
        ),
    ]
}
