//! Characteristic functions `Delta_j` by the expanded sum and by the 3x3 determinant.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::funcrep::{cos_rho, sin_over_rho, FunctionRep, MomentArg, MomentKind, PiecewisePoly, Rho};
use crate::{Error, Result, PI};

use MomentArg::{TMinusLower, UpperMinusT, T};
use MomentKind::{Cos, Sinc};

/// Left boundary condition: `y(0) = 0` or `y'(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bvp {
    Dirichlet,
    Neumann,
}

impl Bvp {
    pub const BOTH: [Bvp; 2] = [Bvp::Dirichlet, Bvp::Neumann];

    pub fn from_index(j: u8) -> Result<Bvp> {
        match j {
            0 => Ok(Bvp::Dirichlet),
            1 => Ok(Bvp::Neumann),
            _ => Err(Error::Precondition(format!("j must be 0 or 1, got {j}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Bvp::Dirichlet => 0,
            Bvp::Neumann => 1,
        }
    }

    /// `j / 2`.
    pub fn shift(self) -> f64 {
        self.index() as f64 / 2.0
    }

    /// Unperturbed eigenvalue `(n - j/2)^2`.
    pub fn unperturbed(self, n: usize) -> f64 {
        let nu = n as f64 - self.shift();
        nu * nu
    }

    fn kernel(self) -> MomentKind {
        match self {
            Bvp::Dirichlet => Sinc,
            Bvp::Neumann => Cos,
        }
    }
}

/// Frozen arguments `0 < a < b < pi` and coefficients `p`, `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProblemJson", into = "ProblemJson")]
pub struct Problem {
    a: f64,
    b: f64,
    p: FunctionRep,
    q: FunctionRep,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemJson {
    a: f64,
    b: f64,
    p: FunctionRep,
    q: FunctionRep,
}

impl TryFrom<ProblemJson> for Problem {
    type Error = Error;
    fn try_from(j: ProblemJson) -> Result<Problem> {
        Problem::new(j.a, j.b, j.p, j.q)
    }
}

impl From<Problem> for ProblemJson {
    fn from(p: Problem) -> ProblemJson {
        ProblemJson {
            a: p.a,
            b: p.b,
            p: p.p,
            q: p.q,
        }
    }
}

impl Problem {
    pub fn new(a: f64, b: f64, p: FunctionRep, q: FunctionRep) -> Result<Problem> {
        if !(a > 0.0 && a < b && b < PI) {
            return Err(Error::InvalidArguments { a, b });
        }
        Ok(Problem { a, b, p, q })
    }

    pub fn zero(a: f64, b: f64) -> Result<Problem> {
        Problem::new(a, b, FunctionRep::zero(), FunctionRep::zero())
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn p(&self) -> &FunctionRep {
        &self.p
    }

    pub fn q(&self) -> &FunctionRep {
        &self.q
    }

    pub fn with_coefficients(&self, p: FunctionRep, q: FunctionRep) -> Problem {
        Problem { p, q, ..*self }
    }

    pub fn delta(&self, j: Bvp, lambda: Complex64) -> Complex64 {
        delta_expanded(j, &Rho::from_lambda(lambda), self).total
    }
}

/// One evaluation of `Delta_j = phi_pi + A0 + A1 + B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharEval {
    pub j: Bvp,
    pub lambda: Complex64,
    pub phi_pi: Complex64,
    pub a0: Complex64,
    pub a1: Complex64,
    pub b: Complex64,
    pub total: Complex64,
}

impl Serialize for CharEval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let pair = |z: Complex64| [z.re, z.im];
        let mut st = s.serialize_struct("CharEval", 7)?;
        st.serialize_field("j", &self.j.index())?;
        st.serialize_field("lambda", &pair(self.lambda))?;
        st.serialize_field("phi_pi", &pair(self.phi_pi))?;
        st.serialize_field("A0", &pair(self.a0))?;
        st.serialize_field("A1", &pair(self.a1))?;
        st.serialize_field("B", &pair(self.b))?;
        st.serialize_field("total", &pair(self.total))?;
        st.end()
    }
}

/// `phi_0 = sin(rho z)/rho`, `phi_1 = cos(rho z)`.
pub fn phi(j: Bvp, rho: &Rho, z: f64) -> Complex64 {
    match j {
        Bvp::Dirichlet => sin_over_rho(rho, z),
        Bvp::Neumann => cos_rho(rho, z),
    }
}

fn s(rho: &Rho, x: f64) -> Complex64 {
    sin_over_rho(rho, x)
}

fn single_term(j: Bvp, rho: &Rho, f: &FunctionRep, x: f64) -> Complex64 {
    phi(j, rho, x) * f.moment(rho, Sinc, x, PI, UpperMinusT) + s(rho, PI - x) * f.moment(rho, j.kernel(), 0.0, x, T)
}

/// `A_{j0}` (`which = 0`, uses `p` and `a`) or `A_{j1}` (`which = 1`, uses `q` and `b`).
pub fn a_term(j: Bvp, which: u8, rho: &Rho, prob: &Problem) -> Complex64 {
    if which == 0 {
        single_term(j, rho, &prob.p, prob.a)
    } else {
        single_term(j, rho, &prob.q, prob.b)
    }
}

/// `int_a^b K(rho (t - m)) f(t) dt` with `m` the midpoint of `[a, b]`.
fn centered(f: &FunctionRep, rho: &Rho, kind: MomentKind, a: f64, b: f64) -> Complex64 {
    let m = 0.5 * (a + b);
    let left = f.moment(rho, kind, a, m, UpperMinusT);
    let right = f.moment(rho, kind, m, b, TMinusLower);
    match kind {
        Cos => left + right,
        _ => right - left,
    }
}

/// Bilinear, antisymmetric cross term `B_j(lambda; p, q)`.
pub fn b_term(j: Bvp, rho: &Rho, p: &FunctionRep, q: &FunctionRep, a: f64, b: f64) -> Complex64 {
    let k = j.kernel();
    let pa = p.moment(rho, k, 0.0, a, T);
    let qa = q.moment(rho, k, 0.0, a, T);
    let p_from_a = p.moment(rho, Sinc, a, b, TMinusLower);
    let q_from_a = q.moment(rho, Sinc, a, b, TMinusLower);
    let p_to_pi = p.moment(rho, Sinc, b, PI, UpperMinusT);
    let q_to_pi = q.moment(rho, Sinc, b, PI, UpperMinusT);
    let p_to_b = p.moment(rho, Sinc, a, b, UpperMinusT);
    let q_to_b = q.moment(rho, Sinc, a, b, UpperMinusT);
    // int_a^b int_a^b S(xi - t) q(xi) p(t), split through sin(x - y) = sin x cos y - cos x sin y
    // about the midpoint, so no factor grows faster than the integral itself
    let double = centered(q, rho, Sinc, a, b) * centered(p, rho, Cos, a, b)
        - centered(q, rho, Cos, a, b) * centered(p, rho, Sinc, a, b);
    let phi_a = phi(j, rho, a);
    let s_pib = s(rho, PI - b);
    s_pib * (pa * q_from_a - qa * p_from_a)
        + s(rho, b - a) * (pa * q_to_pi - qa * p_to_pi)
        + phi_a * (q_to_pi * p_to_b - p_to_pi * q_to_b)
        + phi_a * s_pib * double
}

pub fn delta_expanded(j: Bvp, rho: &Rho, prob: &Problem) -> CharEval {
    let phi_pi = phi(j, rho, PI);
    let a0 = a_term(j, 0, rho, prob);
    let a1 = a_term(j, 1, rho, prob);
    let b = b_term(j, rho, &prob.p, &prob.q, prob.a, prob.b);
    CharEval {
        j,
        lambda: rho.lambda(),
        phi_pi,
        a0,
        a1,
        b,
        total: phi_pi + a0 + a1 + b,
    }
}

/// `tau (a + b)` above which the determinant is expanded in extended precision;
/// below it the f64 cancellation stays under `e^2`.
pub const EXTENDED_FROM: f64 = 2.0;

/// Cofactor expansion of the 3x3 characteristic determinant.
pub fn delta_determinant(j: Bvp, rho: &Rho, prob: &Problem) -> Complex64 {
    if rho.rho().im.abs() * (prob.a + prob.b) > EXTENDED_FROM {
        return crate::precise::determinant(j, rho, prob);
    }
    let col = |f: &FunctionRep, x: f64| f.moment(rho, Sinc, 0.0, x, UpperMinusT);
    let one = Complex64::new(1.0, 0.0);
    let m = [
        [phi(j, rho, PI), col(&prob.p, PI), col(&prob.q, PI)],
        [phi(j, rho, prob.a), col(&prob.p, prob.a) - one, col(&prob.q, prob.a)],
        [phi(j, rho, prob.b), col(&prob.p, prob.b), col(&prob.q, prob.b) - one],
    ];
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn require_piecewise<'f>(f: &'f FunctionRep, name: &str) -> Result<&'f PiecewisePoly> {
    f.as_piecewise()
        .ok_or_else(|| Error::UnsupportedVariant(format!("{name} must be piecewise polynomial to be reflected")))
}

fn one(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Shifted and reflected copies of `f`: `f(t + x - pi)`, `f(pi - t + x)`, `f(pi - x + t)`, `f(pi - x - t)`.
fn images(f: &PiecewisePoly, x: f64) -> [PiecewisePoly; 4] {
    [
        f.translated(PI - x),
        f.reflected(PI + x),
        f.translated(x - PI),
        f.reflected(PI - x),
    ]
}

fn assemble(weights: [f64; 4], p: &PiecewisePoly, q: &PiecewisePoly, a: f64, b: f64) -> FunctionRep {
    let ip = images(p, a);
    let iq = images(q, b);
    let terms: Vec<(Complex64, &PiecewisePoly)> = weights
        .iter()
        .zip(ip.iter())
        .chain(weights.iter().zip(iq.iter()))
        .filter(|(w, _)| **w != 0.0)
        .map(|(w, g)| (one(*w), g))
        .collect();
    FunctionRep::piecewise(PiecewisePoly::combine(&terms, 0.0, PI)).expect("laid out on [0, pi]")
}

/// Eight-term function `W_j` whose cosine/sine transform gives `A_{j0} + A_{j1}`.
pub fn w_function(j: Bvp, p: &FunctionRep, q: &FunctionRep, a: f64, b: f64) -> Result<FunctionRep> {
    let p = require_piecewise(p, "p")?;
    let q = require_piecewise(q, "q")?;
    let odd = if j == Bvp::Dirichlet { -1.0 } else { 1.0 };
    Ok(assemble([odd, odd, -odd, 1.0], p, q, a, b))
}

/// `u_0 = (W_0 + W_1)/2` and `u_1 = (W_0 - W_1)/2` in reduced form.
pub fn u_function(k: u8, p: &FunctionRep, q: &FunctionRep, a: f64, b: f64) -> Result<FunctionRep> {
    let p = require_piecewise(p, "p")?;
    let q = require_piecewise(q, "q")?;
    match k {
        0 => Ok(assemble([0.0, 0.0, 0.0, 1.0], p, q, a, b)),
        1 => Ok(assemble([-1.0, -1.0, 1.0, 0.0], p, q, a, b)),
        _ => Err(Error::Precondition(format!("u index must be 0 or 1, got {k}"))),
    }
}
