//! Truncated Fourier representation of circle vector fields f(t) d/dt.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Vector field on S¹ stored as a₀ + Σₙ (aₙ cos nt + bₙ sin nt), acting as
/// f(t) d/dt.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleVectorField {
    a0: f64,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

/// Diagnostics of a grid-projection fit.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectrumInfo {
    /// Energy fraction carried by the top retained mode.
    pub top_mode_energy_fraction: f64,
    /// Set when the top mode holds more than 1% of the total energy,
    /// suggesting the truncation is clipping real content.
    pub aliasing_warning: bool,
}

impl Serialize for CircleVectorField {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("CircleVectorField", 4)?;
        s.serialize_field("nmax", &self.nmax())?;
        s.serialize_field("a0", &self.a0)?;
        s.serialize_field("cos", &self.cos)?;
        s.serialize_field("sin", &self.sin)?;
        s.end()
    }
}

impl CircleVectorField {
    pub fn zero(nmax: usize) -> CircleVectorField {
        CircleVectorField {
            a0: 0.0,
            cos: vec![0.0; nmax],
            sin: vec![0.0; nmax],
        }
    }

    pub fn constant(a0: f64, nmax: usize) -> CircleVectorField {
        let mut f = CircleVectorField::zero(nmax);
        f.a0 = a0;
        f
    }

    /// Builder: set the cos nt coefficient (n ≥ 1).
    pub fn with_cos(mut self, n: usize, v: f64) -> CircleVectorField {
        self.cos[n - 1] = v;
        self
    }

    /// Builder: set the sin nt coefficient (n ≥ 1).
    pub fn with_sin(mut self, n: usize, v: f64) -> CircleVectorField {
        self.sin[n - 1] = v;
        self
    }

    pub fn nmax(&self) -> usize {
        self.cos.len()
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    /// aₙ for n ≥ 1 (0 beyond the truncation).
    pub fn a(&self, n: usize) -> f64 {
        assert!(n >= 1);
        self.cos.get(n - 1).copied().unwrap_or(0.0)
    }

    /// bₙ for n ≥ 1 (0 beyond the truncation).
    pub fn b(&self, n: usize) -> f64 {
        assert!(n >= 1);
        self.sin.get(n - 1).copied().unwrap_or(0.0)
    }

    /// Discrete Fourier projection of uniform-grid samples. Exact for
    /// trigonometric polynomials of degree ≤ nmax when `samples.len() > 2·nmax`.
    pub fn from_samples(samples: &[f64], nmax: usize) -> (CircleVectorField, SpectrumInfo) {
        let n = samples.len();
        assert!(n > 2 * nmax, "grid of {n} too coarse for nmax {nmax}");
        let mut f = CircleVectorField::zero(nmax);
        f.a0 = samples.iter().sum::<f64>() / n as f64;
        for k in 1..=nmax {
            let (mut ca, mut sa) = (0.0, 0.0);
            for (i, &v) in samples.iter().enumerate() {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                ca += v * (k as f64 * t).cos();
                sa += v * (k as f64 * t).sin();
            }
            f.cos[k - 1] = 2.0 * ca / n as f64;
            f.sin[k - 1] = 2.0 * sa / n as f64;
        }
        let total: f64 = f.a0 * f.a0
            + 0.5
                * f.cos
                    .iter()
                    .zip(f.sin.iter())
                    .map(|(a, b)| a * a + b * b)
                    .sum::<f64>();
        let top = 0.5 * (f.cos[nmax - 1].powi(2) + f.sin[nmax - 1].powi(2));
        let frac = if total > 0.0 { top / total } else { 0.0 };
        let info = SpectrumInfo {
            top_mode_energy_fraction: frac,
            aliasing_warning: frac > 0.01,
        };
        (f, info)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut v = self.a0;
        for (n, (a, b)) in self.cos.iter().zip(self.sin.iter()).enumerate() {
            let nt = (n + 1) as f64 * t;
            v += a * nt.cos() + b * nt.sin();
        }
        v
    }

    /// f′(t) d/dt as a field of the same truncation.
    pub fn derivative(&self) -> CircleVectorField {
        let nmax = self.nmax();
        let mut d = CircleVectorField::zero(nmax);
        for n in 1..=nmax {
            d.cos[n - 1] = n as f64 * self.sin[n - 1];
            d.sin[n - 1] = -(n as f64) * self.cos[n - 1];
        }
        d
    }

    /// Highest mode with a nonzero coefficient (0 for constants).
    pub fn degree(&self) -> usize {
        for n in (1..=self.nmax()).rev() {
            if self.cos[n - 1] != 0.0 || self.sin[n - 1] != 0.0 {
                return n;
            }
        }
        0
    }

    /// Coefficients flattened as [a0, a1, b1, a2, b2, ...].
    pub fn coeff_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(1 + 2 * self.nmax());
        v.push(self.a0);
        for n in 0..self.nmax() {
            v.push(self.cos[n]);
            v.push(self.sin[n]);
        }
        v
    }

    pub fn from_coeff_vec(v: &[f64]) -> CircleVectorField {
        assert!(v.len() % 2 == 1, "coefficient vector must have odd length");
        let nmax = (v.len() - 1) / 2;
        let mut f = CircleVectorField::zero(nmax);
        f.a0 = v[0];
        for n in 0..nmax {
            f.cos[n] = v[1 + 2 * n];
            f.sin[n] = v[2 + 2 * n];
        }
        f
    }

    /// Sup norm of f over a fine sample grid (exact enough for the low-degree
    /// fields handled here).
    pub fn sup_norm(&self) -> f64 {
        let n = (8 * (self.nmax() + 1)).max(64);
        (0..n)
            .map(|i| self.eval(std::f64::consts::TAU * i as f64 / n as f64).abs())
            .fold(0.0, f64::max)
    }

    /// Sup norm of the difference, tolerating different truncations.
    pub fn sup_distance(&self, other: &CircleVectorField) -> f64 {
        let n = (8 * (self.nmax().max(other.nmax()) + 1)).max(64);
        (0..n)
            .map(|i| {
                let t = std::f64::consts::TAU * i as f64 / n as f64;
                (self.eval(t) - other.eval(t)).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> CircleVectorField {
        let mut f = self.clone();
        f.a0 *= s;
        for v in f.cos.iter_mut().chain(f.sin.iter_mut()) {
            *v *= s;
        }
        f
    }

    pub fn add(&self, other: &CircleVectorField) -> CircleVectorField {
        let nmax = self.nmax().max(other.nmax());
        let mut f = CircleVectorField::zero(nmax);
        f.a0 = self.a0 + other.a0;
        for n in 1..=nmax {
            f.cos[n - 1] = self.a(n) + other.a(n);
            f.sin[n - 1] = self.b(n) + other.b(n);
        }
        f
    }

    /// Mean-square value over the circle (Parseval side of the identity).
    pub fn mean_square(&self) -> f64 {
        self.a0 * self.a0
            + 0.5
                * self
                    .cos
                    .iter()
                    .zip(self.sin.iter())
                    .map(|(a, b)| a * a + b * b)
                    .sum::<f64>()
    }
}
