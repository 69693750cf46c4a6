//! Monic irreducible polynomials over F_p by a sieve on base-p encodings,
//! plus trial-division factorization against the table.
//!
//! The sieve marks every product irreducible·(monic of positive degree),
//! so survivors at each degree are exactly the irreducibles. Counts are
//! cross-checked against (1/d)·Σ_{e|d} μ(e)·p^(d/e) at build time.

use biaslab_core::error::{Error, Result};

use crate::poly::Poly;

pub struct IrreducibleTable {
    pub p: u64,
    pub max_degree: usize,
    /// by_degree[d] lists the monic irreducibles of degree d in ascending
    /// encoding order; entry 0 is empty.
    pub by_degree: Vec<Vec<Poly>>,
}

impl IrreducibleTable {
    /// All irreducibles sorted by (degree, encoding).
    pub fn iter_sorted(&self) -> impl Iterator<Item = &Poly> {
        self.by_degree.iter().flatten()
    }

    pub fn count_at(&self, degree: usize) -> usize {
        self.by_degree.get(degree).map_or(0, Vec::len)
    }
}

fn moebius(mut n: u64) -> i64 {
    let mut mu = 1i64;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Number of monic irreducibles of degree d over F_p:
/// (1/d)·Σ_{e|d} μ(e)·p^(d/e).
pub fn necklace_count(p: u64, d: u64) -> u64 {
    let mut total = 0i64;
    for e in 1..=d {
        if d % e == 0 {
            total += moebius(e) * (p as i64).pow((d / e) as u32);
        }
    }
    (total / d as i64) as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Enumerate monic irreducibles of every degree ≤ max_degree.
/// Budget: p^max_degree ≤ 2·10^7 (the mark array holds p^(max_degree+1)
/// bytes-worth of flags).
pub fn build_irreducibles(p: u64, max_degree: usize) -> Result<IrreducibleTable> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "field size must be prime, got {p}"
        )));
    }
    if max_degree == 0 {
        return Ok(IrreducibleTable {
            p,
            max_degree,
            by_degree: vec![Vec::new()],
        });
    }
    let budget = (p as u128).pow(max_degree as u32);
    if budget > 20_000_000 {
        return Err(Error::Budget(format!(
            "p^D = {p}^{max_degree} exceeds the 2·10^7 enumeration budget"
        )));
    }
    let span = (p as usize).pow(max_degree as u32 + 1);
    let mut composite = vec![false; span];
    let mut by_degree: Vec<Vec<Poly>> = vec![Vec::new(); max_degree + 1];

    for d in 1..=max_degree {
        let lo = (p as u64).pow(d as u32);
        let hi = 2 * lo;
        for code in lo..hi {
            if composite[code as usize] {
                continue;
            }
            let g = Poly::decode(p, code);
            by_degree[d].push(g.clone());
            // Mark g·h for every monic h with deg h ≥ 1 within range.
            for e in 1..=(max_degree - d) {
                let hlo = (p as u64).pow(e as u32);
                for hcode in hlo..2 * hlo {
                    let h = Poly::decode(p, hcode);
                    composite[g.mul(&h).encode() as usize] = true;
                }
            }
        }
        let expected = necklace_count(p, d as u64);
        if by_degree[d].len() as u64 != expected {
            return Err(Error::Numerical(format!(
                "irreducible count at degree {d} over F_{p}: got {}, necklace identity gives {expected}",
                by_degree[d].len()
            )));
        }
    }
    Ok(IrreducibleTable {
        p,
        max_degree,
        by_degree,
    })
}

/// Factorization f = unit · ∏ P_i^{α_i} into monic irreducibles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FfFactorization {
    pub unit: u64,
    pub factors: Vec<(Poly, u32)>,
}

impl FfFactorization {
    pub fn reconstruct(&self, p: u64) -> Poly {
        let mut acc = Poly::constant(p, self.unit);
        for (poly, alpha) in &self.factors {
            acc = acc.mul(&poly.pow(*alpha));
        }
        acc
    }
}

/// Trial division by table irreducibles. Sound for
/// deg f ≤ 2·table.max_degree: once every factor of degree ≤ deg(rem)/2
/// is removed, the remainder is irreducible.
pub fn ff_factorize(f: &Poly, table: &IrreducibleTable) -> Result<FfFactorization> {
    if f.is_zero() {
        return Err(Error::InvalidArgument(
            "cannot factorize the zero polynomial".into(),
        ));
    }
    if f.characteristic() != table.p {
        return Err(Error::InvalidArgument(format!(
            "characteristic mismatch: {} vs table {}",
            f.characteristic(),
            table.p
        )));
    }
    let deg = f.degree().unwrap_or(0);
    if deg > 2 * table.max_degree {
        return Err(Error::OutOfRange(format!(
            "degree {deg} exceeds the table's trial-division reach {}",
            2 * table.max_degree
        )));
    }
    let (unit, mut rem) = f.monic();
    let mut factors = Vec::new();
    'outer: for d in 1..=table.max_degree {
        match rem.degree() {
            None | Some(0) => break,
            Some(dr) if 2 * d > dr => break 'outer,
            _ => {}
        }
        for prime in &table.by_degree[d] {
            let mut alpha = 0u32;
            loop {
                let (q, r) = rem.divmod(prime)?;
                if !r.is_zero() {
                    break;
                }
                rem = q;
                alpha += 1;
            }
            if alpha > 0 {
                factors.push((prime.clone(), alpha));
            }
            if rem.degree().map_or(true, |dr| 2 * d > dr) {
                break 'outer;
            }
        }
    }
    if rem.degree().is_some_and(|d| d >= 1) {
        factors.push((rem, 1));
    }
    factors.sort_by_key(|(poly, _)| (poly.degree(), poly.encode()));
    Ok(FfFactorization { unit, factors })
}

/// log 𝔉_k(f) = Σ β_i · deg(P_i) · ln p, the polynomial irrational
/// factor in log space; the leading unit is immaterial.
pub fn ff_irrational_factor_log(factors: &FfFactorization, p: u64, k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    let ln_p = (p as f64).ln();
    let mut log = 0.0;
    for (poly, alpha) in &factors.factors {
        let beta = if *alpha < k {
            *alpha as f64
        } else {
            1.0 / *alpha as f64
        };
        log += beta * poly.degree().unwrap_or(0) as f64 * ln_p;
    }
    Ok(log)
}

/// 𝔉_k(f) as a value; k-free f (all α_i < k) returns |f| of the monic
/// part exactly.
pub fn ff_irrational_factor(factors: &FfFactorization, p: u64, k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    if factors.factors.iter().all(|&(_, a)| a < k) {
        let deg: usize = factors
            .factors
            .iter()
            .map(|(poly, a)| poly.degree().unwrap_or(0) * *a as usize)
            .sum();
        return Ok((p as f64).powi(deg as i32));
    }
    Ok(ff_irrational_factor_log(factors, p, k)?.exp())
}
