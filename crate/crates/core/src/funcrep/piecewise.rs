use num_complex::Complex64;

use crate::{Error, Result};

/// Breakpoints closer than this are treated as one when merging.
pub(crate) const SNAP: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Cubic in local powers: `c0 + c1 u + c2 u^2 + c3 u^3`, `u` measured from
/// the left end of its piece.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Cubic(pub [Complex64; 4]);

impl Cubic {
    pub const ZERO: Cubic = Cubic([ZERO; 4]);

    pub fn constant(c: Complex64) -> Self {
        Cubic([c, ZERO, ZERO, ZERO])
    }

    pub fn real(c: [f64; 4]) -> Self {
        Cubic(c.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn eval(&self, u: f64) -> Complex64 {
        let c = &self.0;
        ((c[3] * u + c[2]) * u + c[1]) * u + c[0]
    }

    pub fn derivative(&self) -> Cubic {
        let c = &self.0;
        Cubic([c[1], c[2] * 2.0, c[3] * 3.0, ZERO])
    }

    /// `v -> p(v + delta)`.
    pub fn recentered(&self, delta: f64) -> Cubic {
        if delta == 0.0 {
            return *self;
        }
        let c = &self.0;
        let d2 = delta * delta;
        Cubic([
            c[0] + c[1] * delta + c[2] * d2 + c[3] * (d2 * delta),
            c[1] + c[2] * (2.0 * delta) + c[3] * (3.0 * d2),
            c[2] + c[3] * (3.0 * delta),
            c[3],
        ])
    }

    /// `v -> p(width - v)`.
    pub fn mirrored(&self, width: f64) -> Cubic {
        let mut m = self.recentered(width);
        m.0[1] = -m.0[1];
        m.0[3] = -m.0[3];
        m
    }

    pub fn scaled(&self, s: Complex64) -> Cubic {
        Cubic(self.0.map(|c| c * s))
    }

    pub fn add(&self, other: &Cubic) -> Cubic {
        let mut out = *self;
        for (o, c) in out.0.iter_mut().zip(other.0.iter()) {
            *o += c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == ZERO)
    }

    /// `int_0^h p(u) du`.
    pub fn integral(&self, h: f64) -> Complex64 {
        let c = &self.0;
        h * (c[0] + h * (c[1] / 2.0 + h * (c[2] / 3.0 + h * c[3] / 4.0)))
    }

    /// `int_0^h |p(u)|^2 du`, exact (four-point Gauss-Legendre on a degree-6 integrand).
    pub fn norm_sq(&self, h: f64) -> f64 {
        const X: [f64; 4] = [
            -0.861_136_311_594_052_6,
            -0.339_981_043_584_856_3,
            0.339_981_043_584_856_3,
            0.861_136_311_594_052_6,
        ];
        const W: [f64; 4] = [
            0.347_854_845_137_453_8,
            0.652_145_154_862_546_2,
            0.652_145_154_862_546_2,
            0.347_854_845_137_453_8,
        ];
        let half = h / 2.0;
        X.iter()
            .zip(W.iter())
            .map(|(x, w)| w * self.eval(half * (1.0 + x)).norm_sqr())
            .sum::<f64>()
            * half
    }
}

/// Piecewise cubic on `[t_0, t_m]`, zero outside. Pieces are right-continuous.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePoly {
    breakpoints: Vec<f64>,
    pieces: Vec<Cubic>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<f64>, pieces: Vec<Cubic>) -> Result<Self> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::Precondition(format!(
                "{} breakpoints need {} pieces, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                pieces.len()
            )));
        }
        if breakpoints.iter().any(|t| !t.is_finite()) {
            return Err(Error::Precondition("non-finite breakpoint".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Precondition("breakpoints must be strictly increasing".into()));
        }
        if pieces.iter().flat_map(|p| p.0.iter()).any(|c| !c.is_finite()) {
            return Err(Error::Precondition("non-finite coefficient".into()));
        }
        Ok(PiecewisePoly { breakpoints, pieces })
    }

    pub fn constant_on(lo: f64, hi: f64, c: Complex64) -> Result<Self> {
        Self::new(vec![lo, hi], vec![Cubic::constant(c)])
    }

    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        Self::constant_on(lo, hi, Complex64::new(1.0, 0.0))
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Cubic] {
        &self.pieces
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn width(&self, k: usize) -> f64 {
        self.breakpoints[k + 1] - self.breakpoints[k]
    }

    /// Index of the piece containing `t`, using `[t_k, t_{k+1})`.
    pub fn piece_at(&self, t: f64) -> Option<usize> {
        let (lo, hi) = self.support();
        if !(t >= lo && t < hi) {
            return None;
        }
        Some(self.breakpoints.partition_point(|&x| x <= t) - 1)
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self.piece_at(t) {
            Some(k) => self.pieces[k].eval(t - self.breakpoints[k]),
            None => ZERO,
        }
    }

    pub fn derivative(&self) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(Cubic::derivative).collect(),
        }
    }

    /// `t -> g(t - s)`.
    pub fn translated(&self, s: f64) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.iter().map(|t| t + s).collect(),
            pieces: self.pieces.clone(),
        }
    }

    /// `t -> g(c - t)`.
    pub fn reflected(&self, c: f64) -> PiecewisePoly {
        let breakpoints = self.breakpoints.iter().rev().map(|t| c - t).collect();
        let pieces = self
            .pieces
            .iter()
            .enumerate()
            .rev()
            .map(|(k, p)| p.mirrored(self.width(k)))
            .collect();
        PiecewisePoly { breakpoints, pieces }
    }

    pub fn scaled(&self, s: Complex64) -> PiecewisePoly {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scaled(s)).collect(),
        }
    }

    /// `sum_k alpha_k g_k`, laid out on `[lo, hi]` with merged breakpoints.
    pub fn combine(terms: &[(Complex64, &PiecewisePoly)], lo: f64, hi: f64) -> PiecewisePoly {
        let mut cuts = vec![lo, hi];
        for (_, g) in terms.iter().filter(|(alpha, _)| *alpha != ZERO) {
            cuts.extend(g.breakpoints.iter().copied().filter(|t| *t > lo && *t < hi));
        }
        cuts.sort_by(f64::total_cmp);
        let mut merged: Vec<f64> = Vec::with_capacity(cuts.len());
        for t in cuts {
            match merged.last() {
                Some(&last) if t - last <= SNAP => {}
                _ => merged.push(t),
            }
        }
        if *merged.last().unwrap() < hi {
            // keep the exact right end even after snapping
            let n = merged.len();
            if hi - merged[n - 1] <= SNAP && n > 1 {
                merged[n - 1] = hi;
            } else {
                merged.push(hi);
            }
        }
        let pieces = merged
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                terms.iter().fold(Cubic::ZERO, |acc, (alpha, g)| {
                    if *alpha == ZERO {
                        return acc;
                    }
                    match g.piece_at(mid) {
                        Some(k) => acc.add(&g.pieces[k].recentered(w[0] - g.breakpoints[k]).scaled(*alpha)),
                        None => acc,
                    }
                })
            })
            .collect();
        PiecewisePoly {
            breakpoints: merged,
            pieces,
        }
        .compacted()
    }

    /// Restriction to `[lo, hi]`, zero-padded where `self` has no support.
    pub fn laid_out_on(&self, lo: f64, hi: f64) -> PiecewisePoly {
        Self::combine(&[(Complex64::new(1.0, 0.0), self)], lo, hi)
    }

    /// Merges adjacent pieces that continue one polynomial exactly.
    pub fn compacted(self) -> PiecewisePoly {
        let mut breakpoints = vec![self.breakpoints[0]];
        let mut pieces: Vec<Cubic> = Vec::with_capacity(self.pieces.len());
        for (k, p) in self.pieces.iter().enumerate() {
            let continues = pieces.last().is_some_and(|last: &Cubic| {
                let start = breakpoints[breakpoints.len() - 2];
                *p == last.recentered(self.breakpoints[k] - start)
            });
            if continues {
                *breakpoints.last_mut().unwrap() = self.breakpoints[k + 1];
            } else {
                pieces.push(*p);
                breakpoints.push(self.breakpoints[k + 1]);
            }
        }
        PiecewisePoly { breakpoints, pieces }
    }

    pub fn integral(&self) -> Complex64 {
        self.pieces
            .iter()
            .enumerate()
            .map(|(k, p)| p.integral(self.width(k)))
            .sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.pieces
            .iter()
            .enumerate()
            .map(|(k, p)| p.norm_sq(self.width(k)))
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn recentering_matches_direct_evaluation() {
        let p = Cubic::real([1.0, -2.0, 0.5, 3.0]);
        let q = p.recentered(0.7);
        for u in [0.0, 0.3, 1.1] {
            assert!((q.eval(u) - p.eval(u + 0.7)).norm() < 1e-13);
        }
        let m = p.mirrored(1.5);
        for u in [0.0, 0.4, 1.5] {
            assert!((m.eval(u) - p.eval(1.5 - u)).norm() < 1e-13);
        }
    }

    #[test]
    fn reflection_maps_support() {
        let g = PiecewisePoly::new(
            vec![-1.0, 0.0, 2.0],
            vec![Cubic::real([0.0, 1.0, 0.0, 0.0]), Cubic::real([1.0, 0.0, -0.25, 0.0])],
        )
        .unwrap();
        let r = g.reflected(0.5);
        assert_eq!(r.support(), (-1.5, 1.5));
        for t in [-1.2, -0.3, 0.0, 0.9, 1.4] {
            assert!((r.eval(t) - g.eval(0.5 - t)).norm() < 1e-13, "t = {t}");
        }
    }

    #[test]
    fn combine_cancels_and_compacts() {
        let f = PiecewisePoly::indicator(0.2, 1.0).unwrap();
        let z = PiecewisePoly::combine(&[(c(1.0), &f), (c(-1.0), &f)], 0.0, 3.0);
        assert_eq!(z.pieces().len(), 1);
        assert!(z.pieces()[0].is_zero());
        assert_eq!(z.support(), (0.0, 3.0));
    }

    #[test]
    fn near_duplicate_breakpoints_snap() {
        let f = PiecewisePoly::indicator(0.0, 1.0).unwrap();
        let g = PiecewisePoly::indicator(1.0 + 1e-15, 2.0).unwrap();
        let s = PiecewisePoly::combine(&[(c(1.0), &f), (c(1.0), &g)], 0.0, 2.0);
        assert_eq!(s.breakpoints(), &[0.0, 2.0]);
        assert!((s.eval(1.0) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn norms_are_exact_for_cubics() {
        let f = PiecewisePoly::new(vec![0.0, 2.0], vec![Cubic::real([0.0, 0.0, 0.0, 1.0])]).unwrap();
        // int_0^2 t^6 = 128/7
        assert!((f.l2_norm().powi(2) - 128.0 / 7.0).abs() < 1e-12);
        assert!((f.integral() - c(4.0)).norm() < 1e-14);
    }
}
