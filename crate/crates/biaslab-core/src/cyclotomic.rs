//! Exact zero tests for sums of roots of unity.
//!
//! A finite sum Σ c_t ζ_N^t vanishes iff the integer polynomial Σ c_t x^t
//! is divisible by the N-th cyclotomic polynomial. Working in ℤ[x] keeps
//! orthogonality and vanishing-sum checks exact, with no float tolerance.

use std::collections::BTreeMap;

use crate::characters::{lcm, CharacterValue, RootOfUnity};

/// Coefficients of the n-th cyclotomic polynomial, ascending degree.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d);
            poly = divide_exact(&poly, &phi_d);
        }
    }
    poly
}

/// Exact division of integer polynomials with monic divisor.
fn divide_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c != 0 {
            quot[i - dd] = c;
            for (j, &dj) in den.iter().enumerate() {
                rem[i - dd + j] -= c * dj;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "division was not exact");
    quot
}

/// An exact accumulator of roots of unity with integer multiplicities.
#[derive(Debug, Default, Clone)]
pub struct ExactRootSum {
    counts: BTreeMap<RootOfUnity, i64>,
}

impl ExactRootSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_root(&mut self, r: RootOfUnity, multiplicity: i64) {
        *self.counts.entry(r).or_insert(0) += multiplicity;
    }

    /// Zeros contribute nothing.
    pub fn add_value(&mut self, v: &CharacterValue, multiplicity: i64) {
        if let CharacterValue::Root(r) = v {
            self.add_root(*r, multiplicity);
        }
    }

    /// Common order of every accumulated root.
    fn common_order(&self) -> u64 {
        self.counts.keys().fold(1, |acc, r| lcm(acc, r.order()))
    }

    /// Exact test: does the accumulated sum equal zero?
    pub fn is_zero(&self) -> bool {
        self.equals_integer(0)
    }

    /// Exact test against an integer value.
    pub fn equals_integer(&self, m: i64) -> bool {
        let n = self.common_order();
        assert!(n <= 1 << 20, "root order {n} too large for the exact check");
        let mut poly = vec![0i64; n as usize];
        for (r, &c) in &self.counts {
            poly[(r.numerator() * (n / r.order())) as usize] += c;
        }
        poly[0] -= m;
        // Remainder of poly modulo Φ_n must vanish.
        let phi = cyclotomic_poly(n);
        let dd = phi.len() - 1;
        if dd == 0 {
            return poly.iter().all(|&c| c == 0);
        }
        let mut rem = poly;
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c != 0 {
                for (j, &pj) in phi.iter().enumerate() {
                    rem[i - dd + j] -= c * pj;
                }
            }
        }
        rem.iter().all(|&c| c == 0)
    }
}
