//! Eigenvalues as zeros of `Delta_j`: damped Newton from the unperturbed
//! values, certified by the argument principle on a circle.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::charfn::{delta_expanded, Bvp, Problem};
use crate::funcrep::Rho;
use crate::{Error, Result, PI};

const MAX_ITERATIONS: usize = 100;
const CAUCHY_POINTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue {
    pub n: usize,
    pub lambda: Complex64,
    pub kappa: Complex64,
    pub residual: f64,
    pub multiplicity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonFailure {
    pub n: usize,
    pub last: Complex64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub j: Bvp,
    pub eigenvalues: Vec<Eigenvalue>,
    /// All zeros inside the contour for this index are accounted for.
    pub certified_through: usize,
    /// Zeros found by the certification search that no index claimed.
    pub extra_zeros: Vec<Complex64>,
    pub failures: Vec<NewtonFailure>,
}

#[derive(Serialize, Deserialize)]
struct EigenRecord {
    n: usize,
    lambda: [f64; 2],
    kappa: [f64; 2],
    residual: f64,
}

impl Spectrum {
    /// Spectrum with the given eigenvalues in index order, treated as certified.
    pub fn from_lambdas(j: Bvp, lambdas: &[Complex64]) -> Spectrum {
        let eigenvalues = lambdas
            .iter()
            .enumerate()
            .map(|(k, &lambda)| Eigenvalue {
                n: k + 1,
                lambda,
                kappa: lambda - j.unperturbed(k + 1),
                residual: 0.0,
                multiplicity: 1,
            })
            .collect();
        Spectrum {
            j,
            eigenvalues,
            certified_through: lambdas.len(),
            extra_zeros: vec![],
            failures: vec![],
        }
    }

    pub fn unperturbed(j: Bvp, n: usize) -> Spectrum {
        let l: Vec<Complex64> = (1..=n).map(|k| Complex64::new(j.unperturbed(k), 0.0)).collect();
        Spectrum::from_lambdas(j, &l)
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn lambdas(&self) -> Vec<Complex64> {
        self.eigenvalues.iter().map(|e| e.lambda).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.records()).expect("plain records serialize")
    }

    fn records(&self) -> Vec<EigenRecord> {
        self.eigenvalues
            .iter()
            .map(|e| EigenRecord {
                n: e.n,
                lambda: [e.lambda.re, e.lambda.im],
                kappa: [e.kappa.re, e.kappa.im],
                residual: e.residual,
            })
            .collect()
    }

    /// Inverse of [`Spectrum::to_json`]; indices must run `1..=N` without gaps.
    pub fn from_json(j: Bvp, value: &serde_json::Value) -> Result<Spectrum> {
        let records: Vec<EigenRecord> = serde_json::from_value(value.clone())?;
        for (k, r) in records.iter().enumerate() {
            if r.n != k + 1 {
                return Err(Error::Parse(format!(
                    "spectrum record {k} has index {} (indices must run 1..N)",
                    r.n
                )));
            }
        }
        let eigenvalues = records
            .iter()
            .map(|r| {
                let lambda = Complex64::new(r.lambda[0], r.lambda[1]);
                Eigenvalue {
                    n: r.n,
                    lambda,
                    kappa: lambda - j.unperturbed(r.n),
                    residual: r.residual,
                    multiplicity: 1,
                }
            })
            .collect::<Vec<_>>();
        Ok(Spectrum {
            j,
            certified_through: eigenvalues.len(),
            eigenvalues,
            extra_zeros: vec![],
            failures: vec![],
        })
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["n", "re", "im", "kappa_re", "kappa_im"])
            .map_err(csv_err)?;
        for e in &self.eigenvalues {
            w.write_record([
                e.n.to_string(),
                fmt(e.lambda.re),
                fmt(e.lambda.im),
                fmt(e.kappa.re),
                fmt(e.kappa.im),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn fmt(x: f64) -> String {
    format!("{x:.17e}")
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Radius of the certification circle for index `n`: it passes midway
/// between the `n`-th and `(n+1)`-th unperturbed eigenvalues in `rho`.
pub fn contour_radius(j: Bvp, n: usize) -> f64 {
    let r = n as f64 + 0.5 - j.shift();
    r * r
}

/// `f'(z)` by the trapezoid rule on a circle of radius `r`.
fn cauchy_derivative<F: Fn(Complex64) -> Complex64>(f: &F, z: Complex64, r: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..CAUCHY_POINTS {
        let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / CAUCHY_POINTS as f64);
        acc += f(z + w * r) / w;
    }
    acc / (r * CAUCHY_POINTS as f64)
}

struct NewtonRun {
    lambda: Complex64,
    iterations: usize,
    converged: bool,
}

fn newton<F: Fn(Complex64) -> Complex64>(f: &F, start: Complex64, width: f64, deflate: &[Complex64]) -> NewtonRun {
    // each factor is O(1) away from its zero, so long deflation lists neither overflow nor underflow
    let g = |z: Complex64| deflate.iter().fold(f(z), |acc, &d| acc * (1.0 + d.norm()) / (z - d));
    let radius = 0.05 * width;
    let mut z = start;
    let mut gz = g(z);
    for it in 1..=MAX_ITERATIONS {
        if gz.norm() == 0.0 {
            return NewtonRun {
                lambda: z,
                iterations: it,
                converged: true,
            };
        }
        let d = cauchy_derivative(&g, z, radius.min(0.5 * z.norm().max(1.0)));
        let mut step = -gz / d;
        if !step.is_finite() {
            return NewtonRun {
                lambda: z,
                iterations: it,
                converged: false,
            };
        }
        let cap = 0.5 * width;
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        let tiny = 1e-14 * z.norm().max(1.0);
        let mut accepted = false;
        for _ in 0..40 {
            let trial = z + step;
            let gt = g(trial);
            if gt.norm() < gz.norm() || step.norm() < 1e-10 * z.norm().max(1.0) {
                z = trial;
                gz = gt;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // no descent along the Newton direction: z is as good as the evaluation noise allows
            return NewtonRun {
                lambda: z,
                iterations: it,
                converged: gz.norm() < 1e-8,
            };
        }
        if step.norm() <= tiny {
            return NewtonRun {
                lambda: z,
                iterations: it,
                converged: true,
            };
        }
    }
    NewtonRun {
        lambda: z,
        iterations: MAX_ITERATIONS,
        converged: false,
    }
}

fn spacing(j: Bvp, n: usize) -> f64 {
    (2.0 * n as f64 - 2.0 * j.shift()).max(1.0)
}

fn scale_at<F: Fn(Complex64) -> Complex64>(f: &F, z: Complex64, width: f64) -> f64 {
    let d = cauchy_derivative(f, z, 0.05 * width);
    (d.norm() * z.norm().sqrt()).max(1.0)
}

#[derive(Clone, Copy, Debug)]
pub struct LocateOptions {
    pub certify: bool,
}

impl Default for LocateOptions {
    fn default() -> Self {
        LocateOptions { certify: true }
    }
}

pub fn locate_eigenvalues(prob: &Problem, j: Bvp, n_max: usize) -> Result<Spectrum> {
    locate_with(prob, j, n_max, LocateOptions::default())
}

pub fn locate_with(prob: &Problem, j: Bvp, n_max: usize, opts: LocateOptions) -> Result<Spectrum> {
    if n_max < 1 {
        return Err(Error::Precondition("need at least one eigenvalue".into()));
    }
    let f = |z: Complex64| delta_expanded(j, &Rho::from_lambda(z), prob).total;
    let runs: Vec<NewtonRun> = (1..=n_max)
        .into_par_iter()
        .map(|n| newton(&f, Complex64::new(j.unperturbed(n), 0.0), spacing(j, n), &[]))
        .collect();

    let mut zeros = Zeros::default();
    let mut failures = Vec::new();
    for (k, run) in runs.into_iter().enumerate() {
        let n = k + 1;
        let width = spacing(j, n);
        let mut found = run;
        if found.converged && zeros.position(found.lambda).is_some() {
            let mu = j.unperturbed(n);
            for sign in [1.0, -1.0] {
                found = newton(&f, Complex64::new(mu, sign * n as f64), width, &zeros.distinct());
                if found.converged && zeros.position(found.lambda).is_none() {
                    break;
                }
            }
        }
        if found.converged && zeros.position(found.lambda).is_some() {
            // another index already owns this zero; certification looks for the one this index missed
            continue;
        }
        let residual = f(found.lambda).norm();
        if !found.converged || residual > 1e-10 * scale_at(&f, found.lambda, width) {
            failures.push(NewtonFailure {
                n,
                last: found.lambda,
                residual,
                iterations: found.iterations,
            });
            continue;
        }
        zeros.push(found.lambda, residual);
    }

    let mut certified_through = 0;
    let mut radius = f64::INFINITY;
    if opts.certify {
        let (winding, r) = certify(prob, j, &mut zeros, n_max)?;
        certified_through = winding.min(n_max);
        radius = r;
    }

    // index by modulus, which is the order the circles Gamma_N count in
    zeros
        .list
        .sort_by(|x, y| x.0.norm().total_cmp(&y.0.norm()).then(x.0.re.total_cmp(&y.0.re)));
    let mut eigenvalues = Vec::with_capacity(n_max);
    let mut extra_zeros = Vec::new();
    for &(lambda, residual, multiplicity) in &zeros.list {
        for _ in 0..multiplicity {
            let n = eigenvalues.len() + 1;
            if n > n_max {
                if lambda.norm() < radius {
                    extra_zeros.push(lambda);
                }
                continue;
            }
            eigenvalues.push(Eigenvalue {
                n,
                lambda,
                kappa: lambda - j.unperturbed(n),
                residual,
                multiplicity,
            });
        }
    }
    failures.retain(|fl: &NewtonFailure| fl.n > eigenvalues.len());
    Ok(Spectrum {
        j,
        eigenvalues,
        certified_through,
        extra_zeros,
        failures,
    })
}

/// Distinct zeros found so far: `(lambda, residual, multiplicity)`.
#[derive(Default)]
struct Zeros {
    list: Vec<(Complex64, f64, usize)>,
}

impl Zeros {
    fn position(&self, z: Complex64) -> Option<usize> {
        self.list
            .iter()
            .position(|e| (e.0 - z).norm() <= 1e-8 * z.norm().max(1.0))
    }

    fn push(&mut self, z: Complex64, residual: f64) {
        self.list.push((z, residual, 1));
    }

    fn distinct(&self) -> Vec<Complex64> {
        self.list.iter().map(|e| e.0).collect()
    }

    /// Zeros inside the circle, counted with multiplicity.
    fn inside(&self, radius: f64) -> usize {
        self.list.iter().filter(|e| e.0.norm() < radius).map(|e| e.2).sum()
    }
}

/// Accounts for every zero inside `Gamma_{n_max}`; returns the winding number and the radius used.
fn certify(prob: &Problem, j: Bvp, zeros: &mut Zeros, n_max: usize) -> Result<(usize, f64)> {
    let (winding, radius) = winding_with_radius(prob, j, n_max)?;
    let mut circles: Vec<Option<(usize, f64)>> = vec![None; n_max + 1];
    circles[n_max] = Some((winding, radius));
    let mut wind = |k: usize| -> Result<(usize, f64)> {
        if let Some(c) = circles[k] {
            return Ok(c);
        }
        let c = winding_with_radius(prob, j, k)?;
        circles[k] = Some(c);
        Ok(c)
    };
    loop {
        let inside = zeros.inside(radius);
        if inside == winding {
            return Ok((winding, radius));
        }
        if inside > winding {
            return Err(Error::Certification {
                winding,
                located: inside,
                radius,
            });
        }
        // unlocated zeros inside Gamma_k never decrease in k: bisect for the first circle holding one
        let (mut lo, mut hi) = (0, n_max);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            let (w, r) = wind(mid)?;
            if w > zeros.inside(r) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let inner = if lo == 0 { 0.0 } else { wind(lo)?.1 };
        let outer = wind(hi)?.1;
        if !search_annulus(prob, j, zeros, inner, outer) && !resolve_multiplicity(prob, j, zeros, inner, outer)? {
            return Err(Error::Certification {
                winding,
                located: zeros.inside(radius),
                radius,
            });
        }
    }
}

/// Deflated Newton from a ring of starts across the annulus; true when a new zero was found.
fn search_annulus(prob: &Problem, j: Bvp, zeros: &mut Zeros, inner: f64, outer: f64) -> bool {
    let f = |z: Complex64| delta_expanded(j, &Rho::from_lambda(z), prob).total;
    let width = (outer - inner).max(1.0);
    for frac in [0.5, 0.25, 0.75, 0.1, 0.9] {
        let r = inner + frac * (outer - inner);
        for k in 0..24 {
            let start = Complex64::from_polar(r, PI * (2 * k + 1) as f64 / 24.0);
            let run = newton(&f, start, width, &zeros.distinct());
            if !run.converged || zeros.position(run.lambda).is_some() {
                continue;
            }
            let residual = f(run.lambda).norm();
            if residual <= 1e-10 * scale_at(&f, run.lambda, width) {
                zeros.push(run.lambda, residual);
                return true;
            }
        }
    }
    false
}

/// Winding on small circles around the known zeros of the annulus; true when a multiplicity grew.
fn resolve_multiplicity(prob: &Problem, j: Bvp, zeros: &mut Zeros, inner: f64, outer: f64) -> Result<bool> {
    let known = zeros.distinct();
    let mut grew = false;
    for (k, &z) in known.iter().enumerate() {
        if z.norm() < inner || z.norm() >= outer {
            continue;
        }
        let gap = known
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, w)| (w - z).norm())
            .fold(f64::INFINITY, f64::min);
        let r = (0.25 * gap).min(1e-2 * z.norm().max(1.0).sqrt());
        let m = winding_around(prob, j, z, r, 64)?;
        if m > zeros.list[k].2 {
            zeros.list[k].2 = m;
            grew = true;
        }
    }
    Ok(grew)
}

/// Number of zeros of `Delta_j` inside the certification circle for `n`.
pub fn winding_count(prob: &Problem, j: Bvp, n: usize) -> Result<usize> {
    winding_with_radius(prob, j, n).map(|(w, _)| w)
}

/// Winding number together with the radius actually used (it is nudged off zeros).
pub fn winding_with_radius(prob: &Problem, j: Bvp, n: usize) -> Result<(usize, f64)> {
    let base = n as f64 + 0.5 - j.shift();
    let mut last_err = None;
    for offset in [0.0, 0.05, -0.05] {
        let radius = (base + offset) * (base + offset);
        match winding_around(prob, j, Complex64::new(0.0, 0.0), radius, (8 * n).max(64)) {
            Ok(w) => return Ok((w, radius)),
            Err(e @ Error::NearContourZero { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

fn envelope(j: Bvp, rho: &Rho) -> f64 {
    let growth = (PI * rho.rho().im.abs()).cosh();
    match j {
        Bvp::Dirichlet => growth / rho.rho().norm().max(1.0),
        Bvp::Neumann => growth,
    }
}

/// Zeros of `Delta_j` inside the circle `|lambda - center| = radius`.
fn winding_around(prob: &Problem, j: Bvp, center: Complex64, radius: f64, samples: usize) -> Result<usize> {
    let eval = |theta: f64| -> Result<Complex64> {
        let z = center + Complex64::from_polar(radius, theta);
        let rho = Rho::from_lambda(z);
        let v = delta_expanded(j, &rho, prob).total;
        if !v.is_finite() {
            return Err(Error::Overflow(z));
        }
        // distance to the nearest zero is about |Delta| / |Delta'|, and |Delta'| ~ envelope * pi / (2|rho|)
        let dist = v.norm() / envelope(j, &rho) * 2.0 * rho.rho().norm().max(1.0) / PI;
        if dist < 1e-6 {
            return Err(Error::NearContourZero {
                radius,
                value: v.norm(),
            });
        }
        Ok(v)
    };
    let thetas: Vec<f64> = (0..=samples).map(|k| 2.0 * PI * k as f64 / samples as f64).collect();
    let values: Vec<Complex64> = thetas.par_iter().map(|&t| eval(t)).collect::<Result<_>>()?;
    let mut total = 0.0;
    for k in 0..samples {
        total += phase_step(&eval, thetas[k], values[k], thetas[k + 1], values[k + 1], 0)?;
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.1 || rounded < 0.0 {
        return Err(Error::NearContourZero {
            radius,
            value: f64::NAN,
        });
    }
    Ok(rounded as usize)
}

fn phase_step<E: Fn(f64) -> Result<Complex64>>(
    eval: &E,
    t0: f64,
    v0: Complex64,
    t1: f64,
    v1: Complex64,
    depth: u32,
) -> Result<f64> {
    // unit phasors: |v| reaches 1e154 far from the real axis, where v1 / v0 overflows
    let d = ((v1 / v1.norm()) * (v0 / v0.norm()).conj()).arg();
    if d.abs() < PI / 2.0 {
        return Ok(d);
    }
    if depth > 40 {
        return Err(Error::NearContourZero {
            radius: f64::NAN,
            value: v0.norm().min(v1.norm()),
        });
    }
    let tm = 0.5 * (t0 + t1);
    let vm = eval(tm)?;
    Ok(phase_step(eval, t0, v0, tm, vm, depth + 1)? + phase_step(eval, tm, vm, t1, v1, depth + 1)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KappaRow {
    pub n: usize,
    pub kappa: Complex64,
    /// `sum_{m <= n} |kappa_m|^2`
    pub running_sq: f64,
    pub running_norm: f64,
}

pub fn asymptotic_report(spec: &Spectrum) -> Vec<KappaRow> {
    let mut acc = 0.0;
    spec.eigenvalues
        .iter()
        .map(|e| {
            acc += e.kappa.norm_sqr();
            KappaRow {
                n: e.n,
                kappa: e.kappa,
                running_sq: acc,
                running_norm: acc.sqrt(),
            }
        })
        .collect()
}
