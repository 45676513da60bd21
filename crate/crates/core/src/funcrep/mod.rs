//! Coefficient functions on `[0, pi]` and their oscillatory moments.

mod moments;
mod piecewise;
mod trig;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use moments::{cos_rho, sin_over_rho, sinc, Branch, MomentArg, MomentKind, SERIES_THRESHOLD};
pub use piecewise::{Cubic, PiecewisePoly};
pub use trig::{TrigBasis, TrigSeries};

use crate::{Error, Result, PI};

/// Spectral parameter with `lambda = rho^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rho {
    rho: Complex64,
    lambda: Complex64,
}

impl Rho {
    pub fn new(rho: Complex64) -> Self {
        Rho { rho, lambda: rho * rho }
    }

    pub fn real(rho: f64) -> Self {
        Self::new(Complex64::new(rho, 0.0))
    }

    /// Principal square root; `lambda` is recomputed from it so `lambda == rho * rho`.
    pub fn from_lambda(lambda: Complex64) -> Self {
        Self::new(lambda.sqrt())
    }

    pub fn rho(&self) -> Complex64 {
        self.rho
    }

    pub fn lambda(&self) -> Complex64 {
        self.lambda
    }

    pub fn neg(&self) -> Self {
        Rho {
            rho: -self.rho,
            lambda: self.lambda,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Repr {
    Piecewise(PiecewisePoly),
    Trig(TrigSeries),
}

/// Complex function on `[0, pi]`, zero elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct FunctionRep(Repr);

/// Basis function for [`fourier_coeff`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Basis {
    pub kind: TrigBasis,
    pub n: usize,
}

impl FunctionRep {
    pub fn zero() -> Self {
        FunctionRep(Repr::Piecewise(
            PiecewisePoly::constant_on(0.0, PI, Complex64::new(0.0, 0.0)).unwrap(),
        ))
    }

    pub fn constant(c: Complex64) -> Self {
        FunctionRep(Repr::Piecewise(PiecewisePoly::constant_on(0.0, PI, c).unwrap()))
    }

    /// Indicator of `[lo, hi]` clipped to `[0, pi]`.
    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        Ok(Self::clipped(&PiecewisePoly::indicator(lo, hi)?))
    }

    /// Piecewise polynomial whose breakpoints run from exactly 0 to exactly pi.
    pub fn piecewise(pp: PiecewisePoly) -> Result<Self> {
        let (lo, hi) = pp.support();
        if lo != 0.0 || hi != PI {
            return Err(Error::Precondition(format!(
                "piecewise breakpoints must span [0, pi], got [{lo}, {hi}]"
            )));
        }
        Ok(FunctionRep(Repr::Piecewise(pp)))
    }

    /// Any piecewise polynomial on the line, restricted to `[0, pi]`.
    pub fn clipped(pp: &PiecewisePoly) -> Self {
        FunctionRep(Repr::Piecewise(pp.laid_out_on(0.0, PI)))
    }

    pub fn trig(series: TrigSeries) -> Self {
        FunctionRep(Repr::Trig(series))
    }

    pub fn as_piecewise(&self) -> Option<&PiecewisePoly> {
        match &self.0 {
            Repr::Piecewise(p) => Some(p),
            Repr::Trig(_) => None,
        }
    }

    pub fn as_trig(&self) -> Option<&TrigSeries> {
        match &self.0 {
            Repr::Trig(t) => Some(t),
            Repr::Piecewise(_) => None,
        }
    }

    pub fn variant_name(&self) -> &'static str {
        match &self.0 {
            Repr::Piecewise(_) => "piecewise_poly",
            Repr::Trig(_) => "trig_series",
        }
    }

    /// Discontinuity candidates inside `(0, pi)`.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.0 {
            Repr::Piecewise(p) => p.breakpoints().to_vec(),
            Repr::Trig(_) => vec![0.0, PI],
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        if !(t > 0.0 && t < PI) {
            return Complex64::new(0.0, 0.0);
        }
        match &self.0 {
            Repr::Piecewise(p) => p.eval(t),
            Repr::Trig(s) => s.sum_at(t),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        match &self.0 {
            Repr::Piecewise(p) => p.l2_norm(),
            Repr::Trig(s) => s.l2_norm(),
        }
    }

    pub fn scaled(&self, s: Complex64) -> FunctionRep {
        match &self.0 {
            Repr::Piecewise(p) => FunctionRep(Repr::Piecewise(p.scaled(s))),
            Repr::Trig(t) => FunctionRep::trig(TrigSeries::new(t.basis, t.coeffs.iter().map(|c| c * s).collect())),
        }
    }

    /// Piecewise form; trigonometric series are Hermite-interpolated on `pieces` cells.
    pub fn to_piecewise(&self, pieces: usize) -> PiecewisePoly {
        match &self.0 {
            Repr::Piecewise(p) => p.clone(),
            Repr::Trig(s) => s.to_piecewise(pieces),
        }
    }

    pub fn moment(&self, rho: &Rho, kind: MomentKind, c: f64, d: f64, arg: MomentArg) -> Complex64 {
        self.moment_with(rho, kind, c, d, arg, Branch::Auto)
    }

    /// Like [`FunctionRep::moment`] with the polynomial base-moment branch forced.
    pub fn moment_with(
        &self,
        rho: &Rho,
        kind: MomentKind,
        c: f64,
        d: f64,
        arg: MomentArg,
        branch: Branch,
    ) -> Complex64 {
        match &self.0 {
            Repr::Piecewise(p) => moments::poly_moment(p, rho, kind, c, d, arg, branch),
            Repr::Trig(s) => moments::trig_moment(s, rho, kind, c, d, arg),
        }
    }
}

pub fn eval(f: &FunctionRep, t: f64) -> Complex64 {
    f.eval(t)
}

/// `int_c^d kind(rho x(t)) f(t) dt` with `x(t)` chosen by `arg`; no `1/rho` prefactor
/// except for [`MomentKind::Sinc`], whose kernel is `sin(rho x)/rho` itself.
pub fn moment_integral(
    f: &FunctionRep,
    rho: &Rho,
    kind: MomentKind,
    c: f64,
    d: f64,
    arg: MomentArg,
) -> Result<Complex64> {
    if !(c >= 0.0 && c < d && d <= PI) {
        return Err(Error::Precondition(format!(
            "moment interval [{c}, {d}] must satisfy 0 <= c < d <= pi"
        )));
    }
    Ok(f.moment(rho, kind, c, d, arg))
}

/// `t -> g(c - t)` on `[0, pi]`.
pub fn shift_reflect(g: &FunctionRep, c: f64) -> Result<FunctionRep> {
    match &g.0 {
        Repr::Piecewise(p) => Ok(FunctionRep::clipped(&p.reflected(c))),
        Repr::Trig(_) => Err(Error::UnsupportedVariant(
            "trigonometric series cannot be reflected in closed form".into(),
        )),
    }
}

/// `int_0^pi basis(t) f(t) dt`.
pub fn fourier_coeff(f: &FunctionRep, basis: Basis) -> Complex64 {
    let nu = basis.kind.frequency(basis.n);
    let kind = if basis.kind.is_sine() {
        MomentKind::Sin
    } else {
        MomentKind::Cos
    };
    f.moment(&Rho::real(nu), kind, 0.0, PI, MomentArg::T)
}

pub fn linear_combine(alpha: Complex64, f: &FunctionRep, beta: Complex64, g: &FunctionRep) -> Result<FunctionRep> {
    match (&f.0, &g.0) {
        (Repr::Piecewise(x), Repr::Piecewise(y)) => Ok(FunctionRep(Repr::Piecewise(PiecewisePoly::combine(
            &[(alpha, x), (beta, y)],
            0.0,
            PI,
        )))),
        (Repr::Trig(x), Repr::Trig(y)) if x.basis == y.basis => {
            let len = x.coeffs.len().max(y.coeffs.len());
            let at = |v: &[Complex64], k: usize| v.get(k).copied().unwrap_or_default();
            let coeffs = (0..len)
                .map(|k| alpha * at(&x.coeffs, k) + beta * at(&y.coeffs, k))
                .collect();
            Ok(FunctionRep::trig(TrigSeries::new(x.basis, coeffs)))
        }
        _ => Err(Error::IncompatibleCombination(format!(
            "cannot combine {} with {}",
            describe(f),
            describe(g)
        ))),
    }
}

fn describe(f: &FunctionRep) -> String {
    match &f.0 {
        Repr::Piecewise(_) => "a piecewise polynomial".into(),
        Repr::Trig(t) => format!("a {} series", t.basis.name()),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum FunctionRepJson {
    PiecewisePoly {
        breakpoints: Vec<f64>,
        coeffs: Vec<Vec<[f64; 2]>>,
    },
    TrigSeries {
        basis: TrigBasis,
        coeffs: Vec<[f64; 2]>,
    },
}

fn to_pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

fn from_pair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl Serialize for FunctionRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let json = match &self.0 {
            Repr::Piecewise(p) => FunctionRepJson::PiecewisePoly {
                breakpoints: p.breakpoints().to_vec(),
                coeffs: p
                    .pieces()
                    .iter()
                    .map(|c| {
                        let len =
                            c.0.iter()
                                .rposition(|x| x.re != 0.0 || x.im != 0.0)
                                .map_or(1, |k| k + 1);
                        c.0[..len].iter().copied().map(to_pair).collect()
                    })
                    .collect(),
            },
            Repr::Trig(t) => FunctionRepJson::TrigSeries {
                basis: t.basis,
                coeffs: t.coeffs.iter().copied().map(to_pair).collect(),
            },
        };
        json.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FunctionRep {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match FunctionRepJson::deserialize(d)? {
            FunctionRepJson::PiecewisePoly { breakpoints, coeffs } => {
                let mut pieces = Vec::with_capacity(coeffs.len());
                for (k, c) in coeffs.into_iter().enumerate() {
                    if c.is_empty() || c.len() > 4 {
                        return Err(D::Error::custom(format!(
                            "piece {k} needs 1 to 4 coefficients, got {}",
                            c.len()
                        )));
                    }
                    let mut cubic = Cubic::ZERO;
                    for (slot, v) in cubic.0.iter_mut().zip(c) {
                        *slot = from_pair(v);
                    }
                    pieces.push(cubic);
                }
                let pp = PiecewisePoly::new(breakpoints, pieces).map_err(D::Error::custom)?;
                FunctionRep::piecewise(pp).map_err(D::Error::custom)
            }
            FunctionRepJson::TrigSeries { basis, coeffs } => Ok(FunctionRep::trig(TrigSeries::new(
                basis,
                coeffs.into_iter().map(from_pair).collect(),
            ))),
        }
    }
}
