//! Closed-form `int_c^d K(rho x(t)) f(t) dt` for the two representations.

use num_complex::Complex64;

use super::piecewise::{Cubic, PiecewisePoly};
use super::trig::TrigSeries;
use super::Rho;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentKind {
    Sin,
    Cos,
    /// `sin(rho x) / rho`, entire in `lambda`.
    Sinc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentArg {
    /// `x = t`
    T,
    /// `x = d - t`
    UpperMinusT,
    /// `x = t - c`
    TMinusLower,
}

/// Which evaluation of the polynomial base moments to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Auto,
    Series,
    Closed,
}

/// `|rho h|` below which polynomial base moments use the Taylor series in `lambda`.
pub const SERIES_THRESHOLD: f64 = 1.0;

/// `sin(z) / z`.
pub fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 0.5 {
        let w = -z * z;
        let mut term = ONE;
        let mut sum = ONE;
        for m in 1..12 {
            term = term * w / ((2 * m * (2 * m + 1)) as f64);
            sum += term;
        }
        sum
    } else {
        z.sin() / z
    }
}

/// `sin(rho x) / rho`, computed from `lambda` near the origin so it is exactly even in `rho`.
pub fn sin_over_rho(rho: &Rho, x: f64) -> Complex64 {
    if (rho.rho() * x).norm() < 0.5 {
        let w = -rho.lambda() * (x * x);
        let mut term = ONE;
        let mut sum = ONE;
        for m in 1..12 {
            term = term * w / ((2 * m * (2 * m + 1)) as f64);
            sum += term;
        }
        sum * x
    } else {
        (rho.rho() * x).sin() / rho.rho()
    }
}

pub fn cos_rho(rho: &Rho, x: f64) -> Complex64 {
    (rho.rho() * x).cos()
}

/// `int_0^h u^k cos(rho u) du` and `int_0^h u^k sin(rho u)/rho du`, `k = 0..3`.
struct Base {
    cm: [Complex64; 4],
    sn: [Complex64; 4],
}

fn base_series(h: f64, lambda: Complex64) -> Base {
    let z = -lambda * (h * h);
    let mut cm = [ZERO; 4];
    let mut sn = [ZERO; 4];
    for k in 0..4 {
        let hk = h.powi(k as i32 + 1);
        // cos: z^m / (2m)! * h^{k+1} / (k+2m+1); sin/rho: z^m / (2m+1)! * h^{k+2} / (k+2m+2)
        let mut pc = ONE;
        let mut ps = ONE;
        let mut sc = ZERO;
        let mut ss = ZERO;
        for m in 0..60usize {
            if m > 0 {
                pc = pc * z / ((2 * m - 1) * (2 * m)) as f64;
                ps = ps * z / ((2 * m) * (2 * m + 1)) as f64;
            }
            let tc = pc * hk / (k + 2 * m + 1) as f64;
            let ts = ps * (hk * h) / (k + 2 * m + 2) as f64;
            sc += tc;
            ss += ts;
            if m > 2 && tc.norm() <= 1e-18 * sc.norm() && ts.norm() <= 1e-18 * ss.norm() {
                break;
            }
        }
        cm[k] = sc;
        sn[k] = ss;
    }
    Base { cm, sn }
}

fn base_closed(h: f64, rho: Complex64) -> Base {
    let iw = I * rho;
    let e_pos = (iw * h).exp();
    let e_neg = (-(iw * h)).exp();
    let mut jp = [ZERO; 4];
    let mut jm = [ZERO; 4];
    jp[0] = (e_pos - ONE) / iw;
    jm[0] = (e_neg - ONE) / (-iw);
    for k in 1..4 {
        let hk = h.powi(k as i32);
        jp[k] = (e_pos * hk - jp[k - 1] * k as f64) / iw;
        jm[k] = (e_neg * hk - jm[k - 1] * k as f64) / (-iw);
    }
    let mut cm = [ZERO; 4];
    let mut sn = [ZERO; 4];
    for k in 0..4 {
        cm[k] = (jp[k] + jm[k]) * 0.5;
        sn[k] = (jp[k] - jm[k]) / (I * 2.0) / rho;
    }
    Base { cm, sn }
}

/// `int_0^h P(u) K(rho (x0 + u)) du` with `x0 >= 0`.
fn piece_moment(p: &Cubic, h: f64, x0: f64, rho: &Rho, kind: MomentKind, branch: Branch) -> Complex64 {
    let series = match branch {
        Branch::Series => true,
        Branch::Closed => rho.rho() == ZERO,
        Branch::Auto => rho.rho().norm() * h < SERIES_THRESHOLD,
    };
    let base = if series {
        base_series(h, rho.lambda())
    } else {
        base_closed(h, rho.rho())
    };
    let mut cm = ZERO;
    let mut sn = ZERO;
    for k in 0..4 {
        if p.0[k] != ZERO {
            cm += p.0[k] * base.cm[k];
            sn += p.0[k] * base.sn[k];
        }
    }
    let c0 = cos_rho(rho, x0);
    let s0 = sin_over_rho(rho, x0);
    match kind {
        MomentKind::Cos => c0 * cm - rho.lambda() * s0 * sn,
        MomentKind::Sinc => s0 * cm + c0 * sn,
        MomentKind::Sin => rho.rho() * (s0 * cm + c0 * sn),
    }
}

fn arg_value(arg: MomentArg, t: f64, c: f64, d: f64) -> f64 {
    match arg {
        MomentArg::T => t,
        MomentArg::UpperMinusT => d - t,
        MomentArg::TMinusLower => t - c,
    }
}

pub(crate) fn poly_moment(
    f: &PiecewisePoly,
    rho: &Rho,
    kind: MomentKind,
    c: f64,
    d: f64,
    arg: MomentArg,
    branch: Branch,
) -> Complex64 {
    let bp = f.breakpoints();
    let mut total = ZERO;
    for (k, p) in f.pieces().iter().enumerate() {
        let lo = bp[k].max(c);
        let hi = bp[k + 1].min(d);
        if hi <= lo || p.is_zero() {
            continue;
        }
        total += poly_segment(p, bp[k], lo, hi, rho, kind, c, d, arg, branch);
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn poly_segment(
    p: &Cubic,
    origin: f64,
    lo: f64,
    hi: f64,
    rho: &Rho,
    kind: MomentKind,
    c: f64,
    d: f64,
    arg: MomentArg,
    branch: Branch,
) -> Complex64 {
    let h = hi - lo;
    let local = p.recentered(lo - origin);
    match arg {
        // orient each segment so the kernel argument grows from its smaller end
        MomentArg::UpperMinusT => piece_moment(&local.mirrored(h), h, d - hi, rho, kind, branch),
        _ => piece_moment(&local, h, arg_value(arg, lo, c, d), rho, kind, branch),
    }
}

/// `int_c^d B(nu t) K(rho x(t)) dt` for `B`, `K` in {sin, cos}, with the `rho` factors shared across `nu`.
struct ExpMoments {
    mid: f64,
    half: f64,
    /// per kernel sign `s2`: `(s2 sigma rho, e^{i s2 (sigma rho mid + tau rho)}, sin, cos of s2 sigma rho half)`
    sides: [(Complex64, Complex64, Complex64, Complex64); 2],
}

impl ExpMoments {
    fn new(rho: &Rho, c: f64, d: f64, arg: MomentArg) -> Self {
        let (sigma, tau) = match arg {
            MomentArg::T => (1.0, 0.0),
            MomentArg::UpperMinusT => (-1.0, d),
            MomentArg::TMinusLower => (1.0, -c),
        };
        let mid = 0.5 * (c + d);
        let half = 0.5 * (d - c);
        let r = rho.rho();
        let side = |s2: f64| {
            let w = r * (s2 * sigma);
            let x = w * half;
            (w, (I * (w * mid + r * (s2 * tau))).exp(), x.sin(), x.cos())
        };
        ExpMoments {
            mid,
            half,
            sides: [side(1.0), side(-1.0)],
        }
    }

    fn eval(&self, nu: f64, sine_basis: bool, sine_kernel: bool) -> Complex64 {
        let half_c = Complex64::new(0.5, 0.0);
        let half_i = Complex64::new(0.0, -0.5); // 1 / (2i)
        let (sm, cm) = (nu * self.mid).sin_cos();
        let (sh, ch) = (nu * self.half).sin_cos();
        let mut total = ZERO;
        for (k2, &(w, phase, sw, cw)) in self.sides.iter().enumerate() {
            let s2 = if k2 == 0 { 1.0 } else { -1.0 };
            let kc = if sine_kernel { half_i * s2 } else { half_c };
            for s1 in [1.0, -1.0] {
                let bc = if sine_basis { half_i * s1 } else { half_c };
                let z = (w + s1 * nu) * self.half;
                let sinc_z = if z.norm() < 0.5 {
                    sinc(z)
                } else {
                    (cw * (s1 * sh) + sw * ch) / z
                };
                total += bc * kc * Complex64::new(cm, s1 * sm) * phase * sinc_z * (2.0 * self.half);
            }
        }
        total
    }
}

#[allow(clippy::too_many_arguments)]
fn trig_term_moment(
    nu: f64,
    sine_basis: bool,
    rho: &Rho,
    kind: MomentKind,
    c: f64,
    d: f64,
    arg: MomentArg,
    exp: &ExpMoments,
    ends: (Complex64, Complex64),
) -> Complex64 {
    if nu == 0.0 {
        // cosine n = 0 is the constant 1
        let one = Cubic::constant(ONE);
        return poly_segment(&one, c, c, d, rho, kind, c, d, arg, Branch::Auto);
    }
    match kind {
        MomentKind::Cos => exp.eval(nu, sine_basis, false),
        MomentKind::Sin => exp.eval(nu, sine_basis, true),
        MomentKind::Sinc => {
            // integrate by parts against F' = basis
            let sigma = if arg == MomentArg::UpperMinusT { -1.0 } else { 1.0 };
            let antideriv = |t: f64| {
                if sine_basis {
                    -(nu * t).cos() / nu
                } else {
                    (nu * t).sin() / nu
                }
            };
            let boundary = ends.1 * antideriv(d) - ends.0 * antideriv(c);
            let inner = exp.eval(nu, !sine_basis, false);
            let inner = if sine_basis { -inner / nu } else { inner / nu };
            boundary - inner * sigma
        }
    }
}

pub(crate) fn trig_moment(f: &TrigSeries, rho: &Rho, kind: MomentKind, c: f64, d: f64, arg: MomentArg) -> Complex64 {
    let sine = f.basis.is_sine();
    let exp = ExpMoments::new(rho, c, d, arg);
    let ends = if kind == MomentKind::Sinc {
        (
            sin_over_rho(rho, arg_value(arg, c, c, d)),
            sin_over_rho(rho, arg_value(arg, d, c, d)),
        )
    } else {
        (ZERO, ZERO)
    };
    f.terms()
        .filter(|(_, coef)| *coef != ZERO)
        .map(|(n, coef)| coef * trig_term_moment(f.basis.frequency(n), sine, rho, kind, c, d, arg, &exp, ends))
        .sum()
}
