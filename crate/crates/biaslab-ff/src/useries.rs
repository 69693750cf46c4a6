//! Truncated power series in u = q^(−s) with complex coefficients.
//!
//! L-polynomials are exact finite instances; Euler products and principal
//! L-functions are truncations. c₀ = 1 for every normalized series here.

use num_complex::Complex64;

use biaslab_core::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct USeries {
    pub q: u64,
    pub coeffs: Vec<Complex64>,
    /// True when the series is a finite polynomial with exact
    /// coefficients (an L-polynomial), false for truncations.
    pub exact: bool,
}

impl USeries {
    pub fn new(q: u64, coeffs: Vec<Complex64>, exact: bool) -> Self {
        USeries { q, coeffs, exact }
    }

    pub fn one(q: u64) -> Self {
        USeries::new(q, vec![Complex64::new(1.0, 0.0)], true)
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs
            .get(n)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Degree of the underlying polynomial after stripping negligible
    /// trailing coefficients (exact series only strip exact zeros).
    pub fn trimmed_degree(&self) -> usize {
        let eps = if self.exact { 0.0 } else { 1e-12 };
        let mut d = self.coeffs.len();
        while d > 1 && self.coeffs[d - 1].norm() <= eps {
            d -= 1;
        }
        d - 1
    }

    pub fn truncated(&self, degree: usize) -> USeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(degree + 1);
        coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
        USeries::new(self.q, coeffs, self.exact && self.coeffs.len() <= degree + 1)
    }

    pub fn mul_trunc(&self, other: &USeries, degree: usize) -> USeries {
        assert_eq!(self.q, other.q, "mixed field sizes");
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(degree + 1) {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j > degree {
                    break;
                }
                coeffs[i + j] += a * b;
            }
        }
        USeries::new(self.q, coeffs, false)
    }

    /// Formal reciprocal to the requested degree; c₀ must be invertible.
    pub fn recip_trunc(&self, degree: usize) -> Result<USeries> {
        let c0 = self.coeff(0);
        if c0.norm() < 1e-14 {
            return Err(Error::Numerical(
                "cannot invert a series with vanishing constant term".into(),
            ));
        }
        let inv0 = Complex64::new(1.0, 0.0) / c0;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); degree + 1];
        coeffs[0] = inv0;
        for n in 1..=degree {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=n {
                acc += self.coeff(j) * coeffs[n - j];
            }
            coeffs[n] = -acc * inv0;
        }
        Ok(USeries::new(self.q, coeffs, false))
    }

    pub fn eval(&self, u: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    pub fn eval_real(&self, u: f64) -> Complex64 {
        self.eval(Complex64::new(u, 0.0))
    }

    /// Human-readable form "1 + (a+bi)u + …" with 12 significant digits.
    pub fn to_display_string(&self) -> String {
        let mut parts = Vec::new();
        for (n, &c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 && n > 0 {
                continue;
            }
            let coeff = if c.im.abs() < 1e-15 {
                format!("{:.12e}", c.re)
            } else {
                format!("({:.12e}{:+.12e}i)", c.re, c.im)
            };
            let term = match n {
                0 => coeff,
                1 => format!("{coeff}u"),
                _ => format!("{coeff}u^{n}"),
            };
            parts.push(term);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
