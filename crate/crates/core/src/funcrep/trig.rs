use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::piecewise::{Cubic, PiecewisePoly};
use crate::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrigBasis {
    /// `sin(n t)`, `n >= 1`
    Sine,
    /// `cos(n t)`, `n >= 0`
    Cosine,
    /// `sin((n - 1/2) t)`, `n >= 1`
    HalfSine,
    /// `cos((n - 1/2) t)`, `n >= 1`
    HalfCosine,
}

impl TrigBasis {
    /// Index `n` attached to the first stored coefficient.
    pub fn first_index(self) -> usize {
        match self {
            TrigBasis::Cosine => 0,
            _ => 1,
        }
    }

    pub fn frequency(self, n: usize) -> f64 {
        match self {
            TrigBasis::Sine | TrigBasis::Cosine => n as f64,
            TrigBasis::HalfSine | TrigBasis::HalfCosine => n as f64 - 0.5,
        }
    }

    pub fn is_sine(self) -> bool {
        matches!(self, TrigBasis::Sine | TrigBasis::HalfSine)
    }

    /// `int_0^pi basis_n(t)^2 dt`.
    pub fn norm_sq(self, n: usize) -> f64 {
        if self == TrigBasis::Cosine && n == 0 {
            PI
        } else {
            PI / 2.0
        }
    }

    pub fn eval(self, n: usize, t: f64) -> f64 {
        let x = self.frequency(n) * t;
        if self.is_sine() {
            x.sin()
        } else {
            x.cos()
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TrigBasis::Sine => "sine",
            TrigBasis::Cosine => "cosine",
            TrigBasis::HalfSine => "half_sine",
            TrigBasis::HalfCosine => "half_cosine",
        }
    }
}

/// Finite series `sum_k coeffs[k] * basis_{first_index + k}(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSeries {
    pub basis: TrigBasis,
    pub coeffs: Vec<Complex64>,
}

impl TrigSeries {
    pub fn new(basis: TrigBasis, coeffs: Vec<Complex64>) -> Self {
        TrigSeries { basis, coeffs }
    }

    /// `(n, coefficient)` pairs in increasing `n`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let first = self.basis.first_index();
        self.coeffs.iter().enumerate().map(move |(k, c)| (first + k, *c))
    }

    /// Value of the series itself, without zero extension.
    pub fn sum_at(&self, t: f64) -> Complex64 {
        let sine = self.basis.is_sine();
        self.phasors(t)
            .map(|(_, c, e)| c * if sine { e.im } else { e.re })
            .sum()
    }

    pub fn derivative_at(&self, t: f64) -> Complex64 {
        let sine = self.basis.is_sine();
        self.phasors(t)
            .map(|(w, c, e)| c * w * if sine { e.re } else { -e.im })
            .sum()
    }

    /// `(frequency, coefficient, e^{i frequency t})` per term, by rotation reseeded every 32 steps.
    fn phasors(&self, t: f64) -> impl Iterator<Item = (f64, Complex64, Complex64)> + '_ {
        let basis = self.basis;
        let step = Complex64::new(t.cos(), t.sin());
        let mut e = Complex64::new(0.0, 0.0);
        self.terms().enumerate().map(move |(k, (n, c))| {
            let w = basis.frequency(n);
            e = if k % 32 == 0 {
                let (s, c) = (w * t).sin_cos();
                Complex64::new(c, s)
            } else {
                e * step
            };
            (w, c, e)
        })
    }

    pub fn l2_norm(&self) -> f64 {
        self.terms()
            .map(|(n, c)| c.norm_sqr() * self.basis.norm_sq(n))
            .sum::<f64>()
            .sqrt()
    }

    /// Cubic Hermite interpolant on `pieces` equal cells of `[0, pi]`.
    pub fn to_piecewise(&self, pieces: usize) -> PiecewisePoly {
        let pieces = pieces.max(1);
        let h = PI / pieces as f64;
        let nodes: Vec<f64> = (0..=pieces)
            .map(|k| if k == pieces { PI } else { k as f64 * h })
            .collect();
        let vals: Vec<Complex64> = nodes.iter().map(|&t| self.sum_at(t)).collect();
        let ders: Vec<Complex64> = nodes.iter().map(|&t| self.derivative_at(t)).collect();
        let cubics = (0..pieces)
            .map(|k| {
                let w = nodes[k + 1] - nodes[k];
                let slope = (vals[k + 1] - vals[k]) / w;
                let c2 = (slope * 3.0 - ders[k] * 2.0 - ders[k + 1]) / w;
                let c3 = (ders[k] + ders[k + 1] - slope * 2.0) / (w * w);
                Cubic([vals[k], ders[k], c2, c3])
            })
            .collect();
        PiecewisePoly::new(nodes, cubics).expect("uniform grid is valid")
    }
}
