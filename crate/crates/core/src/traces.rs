//! Trace coefficients `a_n`, `b_n`, `s_n` and their comparison with
//! partial sums of `lambda_n - (n - j/2)^2`.

use num_complex::Complex64;
use serde::Serialize;

use crate::charfn::{Bvp, Problem};
use crate::funcrep::{fourier_coeff, Basis, FunctionRep, TrigBasis, TrigSeries};
use crate::spectrum::{csv_err, fmt, locate_eigenvalues, Spectrum};
use crate::{Error, Result, PI};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceRow {
    pub n: usize,
    pub a_n: Complex64,
    pub b_n: Complex64,
    /// `a_n + b_n`
    pub s_n: Complex64,
    /// `sum_{m <= n} (lambda_m - (m - j/2)^2)`, once a spectrum is attached.
    pub eig_partial: Option<Complex64>,
    /// `sum_{m <= n} s_m`
    pub coeff_partial: Complex64,
}

impl TraceRow {
    /// `|eig_partial - coeff_partial|`, when the eigenvalue column is present.
    pub fn gap(&self) -> Option<f64> {
        self.eig_partial.map(|e| (e - self.coeff_partial).norm())
    }
}

fn coefficient(j: Bvp, f: &FunctionRep, x: f64, n: usize) -> Complex64 {
    let (kind, weight) = match j {
        Bvp::Dirichlet => (TrigBasis::Sine, (n as f64 * x).sin()),
        Bvp::Neumann => (TrigBasis::HalfCosine, ((n as f64 - 0.5) * x).cos()),
    };
    fourier_coeff(f, Basis { kind, n }) * (2.0 / PI * weight)
}

pub fn trace_coefficients(prob: &Problem, j: Bvp, n_max: usize) -> Result<Vec<TraceRow>> {
    if n_max < 1 {
        return Err(Error::Precondition("need at least one row".into()));
    }
    let mut partial = Complex64::new(0.0, 0.0);
    Ok((1..=n_max)
        .map(|n| {
            let a_n = coefficient(j, prob.p(), prob.a(), n);
            let b_n = coefficient(j, prob.q(), prob.b(), n);
            let s_n = a_n + b_n;
            partial += s_n;
            TraceRow {
                n,
                a_n,
                b_n,
                s_n,
                eig_partial: None,
                coeff_partial: partial,
            }
        })
        .collect())
}

/// Fills the eigenvalue column from a spectrum covering indices `1..=rows.len()`.
pub fn attach_spectrum(rows: &mut [TraceRow], spec: &Spectrum) -> Result<()> {
    if spec.len() < rows.len() {
        return Err(Error::Precondition(format!(
            "spectrum has {} eigenvalues, need {}",
            spec.len(),
            rows.len()
        )));
    }
    let mut partial = Complex64::new(0.0, 0.0);
    for (row, e) in rows.iter_mut().zip(&spec.eigenvalues) {
        if e.n != row.n {
            return Err(Error::Precondition(format!(
                "spectrum index {} where {} was expected",
                e.n, row.n
            )));
        }
        partial += e.kappa;
        row.eig_partial = Some(partial);
    }
    Ok(())
}

pub fn trace_compare(prob: &Problem, j: Bvp, n_max: usize) -> Result<Vec<TraceRow>> {
    let spec = locate_eigenvalues(prob, j, n_max)?;
    let mut rows = trace_coefficients(prob, j, n_max)?;
    attach_spectrum(&mut rows, &spec)?;
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceTrend {
    pub final_gap: f64,
    /// Largest gap over the last quarter of the rows.
    pub tail_max_gap: f64,
    /// Largest gap from row 50 on (or over all rows when there are fewer).
    pub max_gap_from_50: f64,
}

pub fn trend(rows: &[TraceRow]) -> Option<TraceTrend> {
    let gaps: Vec<f64> = rows.iter().map(TraceRow::gap).collect::<Option<_>>()?;
    let last = *gaps.last()?;
    let tail = gaps[gaps.len() * 3 / 4..].iter().copied().fold(0.0, f64::max);
    let from = if gaps.len() > 50 { 49 } else { 0 };
    let mid = gaps[from..].iter().copied().fold(0.0, f64::max);
    Some(TraceTrend {
        final_gap: last,
        tail_max_gap: tail,
        max_gap_from_50: mid,
    })
}

/// `b = pi - a` and `q(t) = -p(pi - t)`, which makes every `s_n` vanish for `j = 0`.
pub fn mirrored_pair(p: &FunctionRep, a: f64) -> Result<Problem> {
    let b = PI - a;
    if !(a > 0.0 && a < b) {
        return Err(Error::InvalidArguments { a, b });
    }
    let q = if let Some(pp) = p.as_piecewise() {
        FunctionRep::clipped(&pp.reflected(PI).scaled(Complex64::new(-1.0, 0.0)))
    } else {
        let s = p.as_trig().expect("two variants");
        // sin(n(pi - t)) = (-1)^(n+1) sin(nt), cos(n(pi - t)) = (-1)^n cos(nt)
        let flip = match s.basis {
            TrigBasis::Sine => 1,
            TrigBasis::Cosine => 0,
            other => {
                return Err(Error::UnsupportedVariant(format!(
                    "reflection about pi/2 turns a {} series into another basis",
                    other.name()
                )))
            }
        };
        let coeffs = s
            .terms()
            .map(|(n, c)| if (n + flip) % 2 == 0 { -c } else { c })
            .collect();
        FunctionRep::trig(TrigSeries::new(s.basis, coeffs))
    };
    Problem::new(a, b, p.clone(), q)
}

pub fn write_csv<W: std::io::Write>(rows: &[TraceRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "n",
        "a_re",
        "a_im",
        "b_re",
        "b_im",
        "s_re",
        "s_im",
        "eig_partial_re",
        "eig_partial_im",
        "coeff_partial_re",
        "coeff_partial_im",
    ])
    .map_err(csv_err)?;
    for r in rows {
        let (er, ei) = match r.eig_partial {
            Some(e) => (fmt(e.re), fmt(e.im)),
            None => (String::new(), String::new()),
        };
        w.write_record([
            r.n.to_string(),
            fmt(r.a_n.re),
            fmt(r.a_n.im),
            fmt(r.b_n.re),
            fmt(r.b_n.im),
            fmt(r.s_n.re),
            fmt(r.s_n.im),
            er,
            ei,
            fmt(r.coeff_partial.re),
            fmt(r.coeff_partial.im),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::divergent_sine_coefficient;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn constant_coefficient_rows() {
        let prob = Problem::new(1.0, 2.0, FunctionRep::constant(c(0.7)), FunctionRep::zero()).unwrap();
        for r in trace_coefficients(&prob, Bvp::Dirichlet, 12).unwrap() {
            let n = r.n as f64;
            let want = 2.0 * 0.7 / PI * (n * 1.0).sin() * (1.0 - (n * PI).cos()) / n;
            assert!((r.a_n - c(want)).norm() < 1e-14);
            assert_eq!(r.s_n, r.a_n + r.b_n);
        }
    }

    #[test]
    fn divergent_example_rows() {
        let prob = mirrored_pair(&divergent_sine_coefficient(60), PI / 3.0).unwrap();
        for r in trace_coefficients(&prob, Bvp::Dirichlet, 50).unwrap() {
            let want = if r.n % 3 == 0 {
                0.0
            } else {
                3f64.sqrt() / (2.0 * r.n as f64)
            };
            assert!((r.a_n - c(want)).norm() < 1e-14, "n = {}", r.n);
            assert!((r.b_n + r.a_n).norm() < 1e-14);
        }
    }

    #[test]
    fn mirrored_pair_validation() {
        assert!(matches!(
            mirrored_pair(&FunctionRep::zero(), PI / 2.0),
            Err(Error::InvalidArguments { .. })
        ));
        let zero = mirrored_pair(&FunctionRep::zero(), 1.0).unwrap();
        assert_eq!(zero.q().l2_norm(), 0.0);
        let half = FunctionRep::trig(TrigSeries::new(TrigBasis::HalfSine, vec![c(1.0)]));
        assert!(matches!(mirrored_pair(&half, 1.0), Err(Error::UnsupportedVariant(_))));
    }
}
