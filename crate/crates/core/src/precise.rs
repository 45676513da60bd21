//! The characteristic determinant in extended precision.
//!
//! Off the real axis every row of the matrix is dominated by the same
//! `e^{-i rho x}` direction, so the cofactor products cancel by roughly
//! `e^{tau (a + b)}`, `tau = Im rho`. Entries are rebuilt here from the f64
//! inputs in a working precision that covers that loss.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_complex::Complex64;

use crate::charfn::{Bvp, Problem};
use crate::funcrep::{Cubic, FunctionRep, Rho, TrigSeries};
use crate::PI;

const RM: RoundingMode = RoundingMode::ToEven;

/// Bits kept beyond the expected cancellation.
const GUARD_BITS: usize = 128;

#[derive(Clone, Debug)]
struct C {
    re: BigFloat,
    im: BigFloat,
}

/// `e^{i rho t}` and `e^{-i rho t}` at one abscissa.
struct Phase {
    t: f64,
    up: C,
    down: C,
}

struct Ctx {
    p: usize,
    cc: Consts,
    rho: C,
    /// `1 / (2 i rho)`
    half_inv_irho: C,
    phases: Vec<Phase>,
}

/// Working precision in bits for `rho` and frozen arguments `a`, `b`.
pub(crate) fn bits_for(rho: &Rho, a: f64, b: f64) -> usize {
    let tau = rho.rho().im.abs();
    let lost = (tau * (PI + a + b) / std::f64::consts::LN_2).ceil() as usize;
    (GUARD_BITS + lost).div_ceil(64) * 64
}

pub(crate) fn determinant(j: Bvp, rho: &Rho, prob: &Problem) -> Complex64 {
    let p = bits_for(rho, prob.a(), prob.b());
    let mut cx = Ctx::new(rho.rho(), p);
    let phi = |cx: &mut Ctx, z: f64| cx.phi(j, z);
    let one = cx.lift(Complex64::new(1.0, 0.0));
    let m = [
        [phi(&mut cx, PI), cx.column(prob.p(), PI), cx.column(prob.q(), PI)],
        [
            phi(&mut cx, prob.a()),
            cx.column(prob.p(), prob.a()),
            cx.column(prob.q(), prob.a()),
        ],
        [
            phi(&mut cx, prob.b()),
            cx.column(prob.p(), prob.b()),
            cx.column(prob.q(), prob.b()),
        ],
    ];
    let m11 = cx.sub(&m[1][1], &one);
    let m22 = cx.sub(&m[2][2], &one);
    let minor = |cx: &Ctx, w: &C, x: &C, y: &C, z: &C| {
        let l = cx.mul(w, x);
        let r = cx.mul(y, z);
        cx.sub(&l, &r)
    };
    let c0 = minor(&cx, &m11, &m22, &m[1][2], &m[2][1]);
    let c1 = minor(&cx, &m[1][0], &m22, &m[1][2], &m[2][0]);
    let c2 = minor(&cx, &m[1][0], &m[2][1], &m11, &m[2][0]);
    let t0 = cx.mul(&m[0][0], &c0);
    let t1 = cx.mul(&m[0][1], &c1);
    let t2 = cx.mul(&m[0][2], &c2);
    let d = cx.add(&cx.sub(&t0, &t1), &t2);
    Complex64::new(to_f64(&d.re), to_f64(&d.im))
}

impl Ctx {
    fn new(rho: Complex64, p: usize) -> Ctx {
        let mut cx = Ctx {
            p,
            cc: Consts::new().expect("astro-float constants cache"),
            rho: C {
                re: BigFloat::from_f64(rho.re, p),
                im: BigFloat::from_f64(rho.im, p),
            },
            half_inv_irho: C {
                re: BigFloat::from_f64(0.0, p),
                im: BigFloat::from_f64(0.0, p),
            },
            phases: Vec::new(),
        };
        let irho2 = C {
            re: cx.rho.im.mul(&cx.real(-2.0), p, RM),
            im: cx.rho.re.mul(&cx.real(2.0), p, RM),
        };
        cx.half_inv_irho = cx.div(&cx.lift(Complex64::new(1.0, 0.0)), &irho2);
        cx
    }

    fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.p)
    }

    fn lift(&self, z: Complex64) -> C {
        C {
            re: self.real(z.re),
            im: self.real(z.im),
        }
    }

    fn add(&self, x: &C, y: &C) -> C {
        C {
            re: x.re.add(&y.re, self.p, RM),
            im: x.im.add(&y.im, self.p, RM),
        }
    }

    fn sub(&self, x: &C, y: &C) -> C {
        C {
            re: x.re.sub(&y.re, self.p, RM),
            im: x.im.sub(&y.im, self.p, RM),
        }
    }

    fn mul(&self, x: &C, y: &C) -> C {
        let p = self.p;
        C {
            re: x.re.mul(&y.re, p, RM).sub(&x.im.mul(&y.im, p, RM), p, RM),
            im: x.re.mul(&y.im, p, RM).add(&x.im.mul(&y.re, p, RM), p, RM),
        }
    }

    fn scale(&self, x: &C, s: &BigFloat) -> C {
        C {
            re: x.re.mul(s, self.p, RM),
            im: x.im.mul(s, self.p, RM),
        }
    }

    fn div(&self, x: &C, y: &C) -> C {
        let p = self.p;
        let norm = y.re.mul(&y.re, p, RM).add(&y.im.mul(&y.im, p, RM), p, RM);
        let re = x.re.mul(&y.re, p, RM).add(&x.im.mul(&y.im, p, RM), p, RM);
        let im = x.im.mul(&y.re, p, RM).sub(&x.re.mul(&y.im, p, RM), p, RM);
        C {
            re: re.div(&norm, p, RM),
            im: im.div(&norm, p, RM),
        }
    }

    fn conj(&self, x: &C) -> C {
        C {
            re: x.re.clone(),
            im: x.im.neg(),
        }
    }

    /// `e^{i theta}` for real `theta`.
    fn cis(&mut self, theta: &BigFloat) -> C {
        C {
            re: theta.cos(self.p, RM, &mut self.cc),
            im: theta.sin(self.p, RM, &mut self.cc),
        }
    }

    fn phase(&mut self, t: f64) -> usize {
        if let Some(k) = self.phases.iter().position(|ph| ph.t == t) {
            return k;
        }
        let p = self.p;
        let tt = self.real(t);
        // i rho t = -tau t + i sigma t
        let decay = self.rho.im.mul(&tt, p, RM).neg().exp(p, RM, &mut self.cc);
        let growth = decay.reciprocal(p, RM);
        let turn = self.cis(&self.rho.re.mul(&tt, p, RM));
        let up = self.scale(&turn, &decay);
        let down = self.scale(&self.conj(&turn), &growth);
        self.phases.push(Phase { t, up, down });
        self.phases.len() - 1
    }

    /// `sin(rho z)/rho` or `cos(rho z)`.
    fn phi(&mut self, j: Bvp, z: f64) -> C {
        let k = self.phase(z);
        let (up, down) = (&self.phases[k].up, &self.phases[k].down);
        match j {
            Bvp::Dirichlet => self.mul(&self.sub(up, down), &self.half_inv_irho),
            Bvp::Neumann => self.scale(&self.add(up, down), &self.real(0.5)),
        }
    }

    /// `int_0^x f(t) sin(rho (x - t))/rho dt` from the two exponential moments
    /// `int_0^x f(t) e^{-/+ i rho t} dt`.
    fn column(&mut self, f: &FunctionRep, x: f64) -> C {
        let [minus, plus] = match (f.as_piecewise(), f.as_trig()) {
            (Some(pp), _) => {
                let mut acc = [self.lift(Complex64::new(0.0, 0.0)), self.lift(Complex64::new(0.0, 0.0))];
                for (w, piece) in pp.breakpoints().windows(2).zip(pp.pieces()) {
                    let hi = w[1].min(x);
                    if hi <= w[0] || piece.is_zero() {
                        continue;
                    }
                    let part = self.piece_moments(piece, w[0], hi);
                    acc = [self.add(&acc[0], &part[0]), self.add(&acc[1], &part[1])];
                }
                acc
            }
            (None, Some(series)) => self.trig_moments(series, x),
            (None, None) => unreachable!("function representation is piecewise or trig"),
        };
        let k = self.phase(x);
        let l = self.mul(&self.phases[k].up, &minus);
        let r = self.mul(&self.phases[k].down, &plus);
        self.mul(&self.sub(&l, &r), &self.half_inv_irho)
    }

    /// `int_c^hi P(t - c) e^{beta t} dt` for `beta = -i rho` and `beta = i rho`, by
    /// `int P e^{beta u} = e^{beta u} sum_k (-1)^k P^(k)(u) / beta^(k+1)`.
    fn piece_moments(&mut self, piece: &Cubic, c: f64, hi: f64) -> [C; 2] {
        let h = self.real(hi).sub(&self.real(c), self.p, RM);
        let zero = self.real(0.0);
        let lo_k = self.phase(c);
        let hi_k = self.phase(hi);
        let coeffs = piece.0.map(|z| self.lift(z));
        let mut out = Vec::with_capacity(2);
        for minus in [true, false] {
            // 1 / beta = i / rho or -i / rho
            let inv_beta = {
                let i = self.lift(Complex64::new(0.0, if minus { 1.0 } else { -1.0 }));
                self.div(&i, &self.rho)
            };
            let s_hi = self.boundary_sum(&coeffs, &h, &inv_beta);
            let s_lo = self.boundary_sum(&coeffs, &zero, &inv_beta);
            let (e_hi, e_lo) = if minus {
                (&self.phases[hi_k].down, &self.phases[lo_k].down)
            } else {
                (&self.phases[hi_k].up, &self.phases[lo_k].up)
            };
            out.push(self.sub(&self.mul(e_hi, &s_hi), &self.mul(e_lo, &s_lo)));
        }
        let plus = out.pop().unwrap();
        let minus = out.pop().unwrap();
        [minus, plus]
    }

    /// `sum_k (-1)^k P^(k)(u) / beta^(k+1)` for the local cubic `P`.
    fn boundary_sum(&self, c: &[C; 4], u: &BigFloat, inv_beta: &C) -> C {
        let n = |k: f64| self.real(k);
        let horner = |cs: &[C]| {
            let mut acc = cs[cs.len() - 1].clone();
            for z in cs[..cs.len() - 1].iter().rev() {
                acc = self.add(&self.scale(&acc, u), z);
            }
            acc
        };
        let d0 = horner(c);
        let d1 = horner(&[c[1].clone(), self.scale(&c[2], &n(2.0)), self.scale(&c[3], &n(3.0))]);
        let d2 = horner(&[self.scale(&c[2], &n(2.0)), self.scale(&c[3], &n(6.0))]);
        let d3 = self.scale(&c[3], &n(6.0));
        let mut acc = d3;
        for d in [d2, d1, d0] {
            acc = self.sub(&d, &self.mul(inv_beta, &acc));
        }
        self.mul(inv_beta, &acc)
    }

    /// Exponential moments of a trig series on `[0, x]`, term by term through
    /// `int_0^x e^{(beta + i s) t} dt = (e^{beta x} e^{i s x} - 1) / (beta + i s)`.
    fn trig_moments(&mut self, series: &TrigSeries, x: f64) -> [C; 2] {
        let p = self.p;
        let xk = self.phase(x);
        let xx = self.real(x);
        let first = series.basis.frequency(series.basis.first_index());
        let mut turn = self.cis(&self.real(first).mul(&xx, p, RM));
        let step = self.cis(&xx);
        let one = self.lift(Complex64::new(1.0, 0.0));
        let sine = series.basis.is_sine();
        let mut acc = [self.lift(Complex64::new(0.0, 0.0)), self.lift(Complex64::new(0.0, 0.0))];
        for (n, coeff) in series.terms() {
            let nu = self.real(series.basis.frequency(n));
            let c = self.lift(coeff);
            for (slot, minus) in [(0, true), (1, false)] {
                let e_beta = if minus {
                    &self.phases[xk].down
                } else {
                    &self.phases[xk].up
                };
                // beta = -/+ i rho, so beta + i s = i (s -/+ rho)
                let shifted = |s: &BigFloat| {
                    let (re, im) = if minus {
                        (s.sub(&self.rho.re, p, RM), self.rho.im.neg())
                    } else {
                        (s.add(&self.rho.re, p, RM), self.rho.im.clone())
                    };
                    C { re: im.neg(), im: re }
                };
                let pos = self.div(&self.sub(&self.mul(e_beta, &turn), &one), &shifted(&nu));
                let neg = self.div(
                    &self.sub(&self.mul(e_beta, &self.conj(&turn)), &one),
                    &shifted(&nu.neg()),
                );
                // cos = (e^{i nu t} + e^{-i nu t})/2, sin = (e^{i nu t} - e^{-i nu t})/(2i)
                let basis = if sine {
                    let d = self.sub(&pos, &neg);
                    C {
                        re: d.im,
                        im: d.re.neg(),
                    }
                } else {
                    self.add(&pos, &neg)
                };
                let term = self.mul(&c, &self.scale(&basis, &self.real(0.5)));
                acc[slot] = self.add(&acc[slot], &term);
            }
            turn = self.mul(&turn, &step);
        }
        acc
    }
}

/// Nearest f64, through the top 64 mantissa bits.
fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let mut y = x.clone();
    if y.set_precision(64, RM).is_err() {
        return f64::NAN;
    }
    match y.as_raw_parts() {
        Some((m, _, sign, e, _)) => {
            let top = *m.last().unwrap_or(&0);
            let v = top as f64 * 2f64.powi(e - 64);
            if sign == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_doubles() {
        for x in [1.0, -0.75, 3.0e-40, 123456.789, -PI] {
            assert_eq!(to_f64(&BigFloat::from_f64(x, 256)), x);
        }
    }

    #[test]
    fn phi_matches_f64_on_the_axis() {
        let rho = Complex64::new(7.3, 0.0);
        let mut cx = Ctx::new(rho, 192);
        for j in Bvp::BOTH {
            let got = cx.phi(j, 2.0);
            let got = Complex64::new(to_f64(&got.re), to_f64(&got.im));
            let want = crate::charfn::phi(j, &Rho::new(rho), 2.0);
            assert!((got - want).norm() < 1e-14, "{got} vs {want}");
        }
    }
}
