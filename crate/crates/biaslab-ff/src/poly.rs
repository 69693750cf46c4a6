//! Dense univariate polynomials over a prime field F_p.
//!
//! Coefficients are stored in ascending degree order; the representation
//! is canonical (no trailing zeros, empty vector = zero polynomial).
//! The CLI wire format is "c0,c1,…,cd@p".

use std::fmt;
use std::str::FromStr;

use biaslab_core::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    p: u64,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn zero(p: u64) -> Self {
        Poly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Poly::constant(p, 1)
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Poly::from_coeffs(p, vec![c])
    }

    pub fn x(p: u64) -> Self {
        Poly::from_coeffs(p, vec![0, 1])
    }

    /// Construct from coefficients (ascending degree), reducing mod p and
    /// stripping trailing zeros.
    pub fn from_coeffs(p: u64, mut coeffs: Vec<u64>) -> Self {
        assert!(p >= 2, "field characteristic must be at least 2");
        for c in &mut coeffs {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    fn check_char(&self, other: &Poly) {
        assert_eq!(
            self.p, other.p,
            "mixed field characteristics {} and {}",
            self.p, other.p
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_char(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) + other.coeff(i)) % self.p)
            .collect();
        Poly::from_coeffs(self.p, coeffs)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.check_char(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p)
            .collect();
        Poly::from_coeffs(self.p, coeffs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_char(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.p);
        }
        let mut coeffs = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = (coeffs[i + j] + a * b) % self.p;
            }
        }
        Poly { p: self.p, coeffs }
    }

    pub fn scale(&self, c: u64) -> Poly {
        let c = c % self.p;
        Poly::from_coeffs(self.p, self.coeffs.iter().map(|&a| a * c % self.p).collect())
    }

    fn inv_mod_p(&self, a: u64) -> u64 {
        // Fermat inverse; p is prime.
        let mut result = 1u64;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        result
    }

    /// Quotient and remainder with deg r < deg divisor.
    pub fn divmod(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_char(divisor);
        if divisor.is_zero() {
            return Err(Error::InvalidArgument(
                "division by the zero polynomial".into(),
            ));
        }
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((Poly::zero(self.p), self.clone()));
        }
        let lead_inv = self.inv_mod_p(divisor.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i] * lead_inv % self.p;
            if c != 0 {
                quot[i - dd] = c;
                for (j, &dj) in divisor.coeffs.iter().enumerate() {
                    let idx = i - dd + j;
                    rem[idx] = (rem[idx] + self.p - c * dj % self.p) % self.p;
                }
            }
        }
        Ok((
            Poly::from_coeffs(self.p, quot),
            Poly::from_coeffs(self.p, rem),
        ))
    }

    pub fn rem(&self, modulus: &Poly) -> Result<Poly> {
        Ok(self.divmod(modulus)?.1)
    }

    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_char(other);
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            Ok(a)
        } else {
            Ok(a.monic().1)
        }
    }

    /// (leading unit, monic normalization).
    pub fn monic(&self) -> (u64, Poly) {
        if self.is_zero() {
            return (1, self.clone());
        }
        let lead = self.leading();
        (lead, self.scale(self.inv_mod_p(lead)))
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut acc = Poly::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn mulmod(&self, other: &Poly, modulus: &Poly) -> Result<Poly> {
        self.mul(other).rem(modulus)
    }

    pub fn powmod(&self, mut e: u64, modulus: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(self.p).rem(modulus)?;
        let mut base = self.rem(modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, modulus)?;
            }
            base = base.mulmod(&base, modulus)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let x = x % self.p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c) % self.p;
        }
        acc
    }

    /// Norm |f| = p^deg(f); 1 for nonzero constants, 0 for the zero poly.
    pub fn norm(&self) -> u64 {
        match self.degree() {
            None => 0,
            Some(d) => self.p.pow(d as u32),
        }
    }

    /// Base-p encoding Σ c_i p^i; injective on polynomials of bounded
    /// degree, used as table indices by the enumeration kernels.
    pub fn encode(&self) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = acc * self.p + c;
        }
        acc
    }

    pub fn decode(p: u64, mut code: u64) -> Poly {
        let mut coeffs = Vec::new();
        while code > 0 {
            coeffs.push(code % p);
            code /= p;
        }
        Poly::from_coeffs(p, coeffs)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0@{}", self.p);
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}@{}", parts.join(","), self.p)
    }
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (body, p) = s
            .rsplit_once('@')
            .ok_or_else(|| Error::InvalidArgument(format!("polynomial `{s}` lacks `@p`")))?;
        let p: u64 = p
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad characteristic in `{s}`")))?;
        if p < 2 {
            return Err(Error::InvalidArgument(format!(
                "characteristic must be ≥ 2 in `{s}`"
            )));
        }
        let coeffs = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidArgument(format!("bad coefficient `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(Poly::from_coeffs(p, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn characteristic_two_square() {
        let f = Poly::from_coeffs(2, vec![1, 1]); // X + 1
        let sq = f.mul(&f);
        assert_eq!(sq, Poly::from_coeffs(2, vec![1, 0, 1])); // X² + 1
    }

    #[test]
    fn gcd_over_f2() {
        let a = Poly::from_coeffs(2, vec![1, 0, 1]); // X²+1 = (X+1)²
        let b = Poly::from_coeffs(2, vec![1, 1]); // X+1
        assert_eq!(a.gcd(&b).unwrap(), b);
    }

    #[test]
    fn mul_by_zero() {
        let f = Poly::from_coeffs(5, vec![3, 1, 4]);
        assert!(f.mul(&Poly::zero(5)).is_zero());
        assert!(f.divmod(&Poly::zero(5)).is_err());
    }

    #[test]
    fn divmod_invariants() {
        let f = Poly::from_coeffs(7, vec![3, 0, 2, 5, 1]);
        let g = Poly::from_coeffs(7, vec![1, 2, 3]);
        let (q, r) = f.divmod(&g).unwrap();
        assert_eq!(q.mul(&g).add(&r), f);
        assert!(r.degree() < g.degree());
    }

    #[test]
    fn monic_normalization() {
        let f = Poly::from_coeffs(3, vec![2, 2]); // 2X + 2
        let (unit, m) = f.monic();
        assert_eq!(unit, 2);
        assert_eq!(m, Poly::from_coeffs(3, vec![1, 1])); // X + 1
    }

    #[test]
    fn string_round_trip() {
        for s in ["0,0,1@3", "1,1@2", "4@5", "0,2,0,1@7"] {
            let f: Poly = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
        assert!("1,2".parse::<Poly>().is_err());
        assert!("1,x@3".parse::<Poly>().is_err());
        // Reduction mod p and trailing-zero stripping are canonical.
        let f: Poly = "4,3,0@3".parse().unwrap();
        assert_eq!(f.to_string(), "1@3");
    }

    #[test]
    fn encode_decode() {
        for code in 0..200u64 {
            let f = Poly::decode(3, code);
            assert_eq!(f.encode(), code);
        }
    }

    #[test]
    fn eval_and_norm() {
        let f = Poly::from_coeffs(5, vec![1, 2, 1]); // 1 + 2X + X²
        assert_eq!(f.eval(0), 1);
        assert_eq!(f.eval(1), 4);
        assert_eq!(f.eval(3), (1 + 6 + 9) % 5);
        assert_eq!(f.norm(), 25);
        assert_eq!(Poly::constant(5, 3).norm(), 1);
        assert_eq!(Poly::zero(5).norm(), 0);
    }

    proptest! {
        #[test]
        fn ring_axioms_mod_5(
            a in proptest::collection::vec(0u64..5, 0..6),
            b in proptest::collection::vec(0u64..5, 0..6),
            c in proptest::collection::vec(0u64..5, 0..6),
        ) {
            let a = Poly::from_coeffs(5, a);
            let b = Poly::from_coeffs(5, b);
            let c = Poly::from_coeffs(5, c);
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.sub(&a), Poly::zero(5));
        }

        #[test]
        fn divmod_reconstructs(
            a in proptest::collection::vec(0u64..7, 0..8),
            b in proptest::collection::vec(0u64..7, 1..5),
        ) {
            let a = Poly::from_coeffs(7, a);
            let b = Poly::from_coeffs(7, b);
            prop_assume!(!b.is_zero());
            let (q, r) = a.divmod(&b).unwrap();
            prop_assert_eq!(q.mul(&b).add(&r), a);
        }
    }
}
