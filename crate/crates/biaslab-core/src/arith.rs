//! Smallest-prime-factor sieve, factorization, the irrational factor
//! function of order k, and its summatory function over residue classes.
//!
//! For n = ∏ p_i^{α_i} the function is ∏ p_i^{β_i} with β_i = α_i when
//! α_i < k and β_i = 1/α_i when α_i ≥ k. Values are held as natural logs
//! (the exponents are rational, the values irrational); k-free inputs take
//! the exact fast path value = n.

use crate::error::{Error, Result};
use crate::sum::{map_blocks, KahanSum, BLOCK_LEN};

/// Smallest-prime-factor table for 2..=limit.
///
/// Memory: 4·(limit+1) bytes for the spf array plus a 512 KiB log cache;
/// a limit of 10^8 needs ~400 MB. Callers enforce any external memory
/// budget before construction.
pub struct FactorizationTable {
    limit: u64,
    spf: Vec<u32>,
    ln_small: Vec<f64>,
}

const LN_CACHE: usize = 1 << 16;

impl FactorizationTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        debug_assert!(n >= 2 && n <= self.limit);
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf(n) == n
    }

    #[inline]
    fn ln(&self, p: u64) -> f64 {
        if (p as usize) < LN_CACHE {
            self.ln_small[p as usize]
        } else {
            (p as f64).ln()
        }
    }
}

/// Build the sieve with the linear (one write per composite) method.
pub fn build_spf_sieve(limit: u64) -> Result<FactorizationTable> {
    if limit < 2 {
        return Err(Error::InvalidArgument(format!(
            "sieve limit must be at least 2, got {limit}"
        )));
    }
    if limit > u32::MAX as u64 {
        return Err(Error::Budget(format!(
            "sieve limit {limit} exceeds the 32-bit spf representation"
        )));
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let spf_i = spf[i];
        for &p in &primes {
            if p > spf_i {
                break;
            }
            let j = i as u64 * p as u64;
            if j > limit {
                break;
            }
            spf[j as usize] = p;
        }
    }
    let ln_small = (0..LN_CACHE).map(|i| (i as f64).ln()).collect();
    Ok(FactorizationTable {
        limit,
        spf,
        ln_small,
    })
}

/// Prime-power decomposition; primes strictly increasing, exponents ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

pub fn factorize(n: u64, table: &FactorizationTable) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factorize 0".into()));
    }
    if n > table.limit() {
        return Err(Error::OutOfRange(format!(
            "{n} exceeds the sieve limit {}",
            table.limit()
        )));
    }
    let mut factors = Vec::new();
    let mut m = n;
    while m > 1 {
        let p = table.spf(m);
        let mut alpha = 0u32;
        while m % p == 0 {
            m /= p;
            alpha += 1;
        }
        factors.push((p, alpha));
    }
    Ok(Factorization { n, factors })
}

/// Value of the order-k irrational factor function, stored in log space.
#[derive(Debug, Clone, Copy)]
pub struct IrrationalFactorValue {
    pub log_value: f64,
    pub value: f64,
}

#[inline]
fn beta(alpha: u32, k: u32) -> f64 {
    if alpha < k {
        alpha as f64
    } else {
        1.0 / alpha as f64
    }
}

pub fn irrational_factor(f: &Factorization, k: u32) -> Result<IrrationalFactorValue> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    let mut log_value = 0.0;
    let mut k_free = true;
    for &(p, alpha) in &f.factors {
        log_value += beta(alpha, k) * (p as f64).ln();
        k_free &= alpha < k;
    }
    let value = if k_free { f.n as f64 } else { log_value.exp() };
    Ok(IrrationalFactorValue { log_value, value })
}

/// Characteristic function of k-free integers.
pub fn mu_k(f: &Factorization, k: u32) -> Result<u8> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    Ok(u8::from(f.factors.iter().all(|&(_, a)| a < k)))
}

/// Product of the distinct primes dividing n; 1 for n = 1.
pub fn squarefree_part(f: &Factorization) -> u64 {
    f.factors.iter().map(|&(p, _)| p).product()
}

const MAX_DISTINCT_PRIMES: usize = 16;

/// Fast in-loop evaluation of the function value, without allocating a
/// `Factorization`. k-free n returns n exactly and touches no transcendental.
#[inline]
pub fn ik_value(n: u64, k: u32, table: &FactorizationTable) -> f64 {
    debug_assert!(k >= 2);
    if n <= 1 {
        return 1.0;
    }
    let mut local = [(0u64, 0u32); MAX_DISTINCT_PRIMES];
    let mut len = 0;
    let mut m = n;
    let mut k_free = true;
    while m > 1 {
        let p = table.spf(m);
        let mut alpha = 0u32;
        while m % p == 0 {
            m /= p;
            alpha += 1;
        }
        local[len] = (p, alpha);
        len += 1;
        k_free &= alpha < k;
    }
    if k_free {
        return n as f64;
    }
    let mut log = 0.0;
    for &(p, alpha) in &local[..len] {
        log += beta(alpha, k) * table.ln(p);
    }
    log.exp()
}

/// log I_k(n), always via the log-space route.
#[inline]
pub fn ik_log_value(n: u64, k: u32, table: &FactorizationTable) -> f64 {
    debug_assert!(k >= 2);
    let mut log = 0.0;
    let mut m = n;
    while m > 1 {
        let p = table.spf(m);
        let mut alpha = 0u32;
        while m % p == 0 {
            m /= p;
            alpha += 1;
        }
        log += beta(alpha, k) * table.ln(p);
    }
    log
}

/// S_k(Q; q, a): sum of the function over n ≤ Q with n ≡ a (mod q).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummatoryResult {
    pub cutoff: u64,
    pub modulus: u64,
    pub residue: u64,
    pub k: u32,
    pub sum: f64,
    pub term_count: u64,
}

/// First n ≥ lo with n ≡ a (mod q); lo ≥ 1.
#[inline]
pub(crate) fn first_member(lo: u64, q: u64, a: u64) -> u64 {
    debug_assert!(lo >= 1 && a < q);
    let r = lo % q;
    if r <= a {
        lo + (a - r)
    } else {
        lo + q - r + a
    }
}

#[inline]
fn class_block_sum(
    block_lo: u64,
    block_hi: u64,
    q: u64,
    a: u64,
    k: u32,
    table: &FactorizationTable,
) -> (f64, u64) {
    let mut acc = KahanSum::new();
    let mut count = 0;
    let mut n = first_member(block_lo, q, a);
    while n <= block_hi {
        acc.add(ik_value(n, k, table));
        count += 1;
        n += q;
    }
    (acc.value(), count)
}

pub fn summatory(
    cutoff: u64,
    modulus: u64,
    residue: u64,
    k: u32,
    table: &FactorizationTable,
) -> Result<SummatoryResult> {
    if modulus == 0 {
        return Err(Error::InvalidArgument("modulus must be ≥ 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    if cutoff > table.limit() {
        return Err(Error::OutOfRange(format!(
            "cutoff {cutoff} exceeds the sieve limit {}",
            table.limit()
        )));
    }
    let a = residue % modulus;
    if cutoff == 0 {
        return Ok(SummatoryResult {
            cutoff,
            modulus,
            residue: a,
            k,
            sum: 0.0,
            term_count: 0,
        });
    }
    let last_block = (cutoff - 1) / BLOCK_LEN;
    let partials = map_blocks(last_block, |idx| {
        let lo = idx * BLOCK_LEN + 1;
        let hi = cutoff.min((idx + 1) * BLOCK_LEN);
        class_block_sum(lo, hi, modulus, a, k, table)
    });
    let mut acc = KahanSum::new();
    let mut term_count = 0;
    for (s, c) in partials {
        acc.add(s);
        term_count += c;
    }
    Ok(SummatoryResult {
        cutoff,
        modulus,
        residue: a,
        k,
        sum: acc.value(),
        term_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> FactorizationTable {
        build_spf_sieve(100_000).unwrap()
    }

    #[test]
    fn sieve_smallest_prime_factors() {
        let t = build_spf_sieve(30).unwrap();
        assert_eq!(t.spf(4), 2);
        assert_eq!(t.spf(9), 3);
        assert_eq!(t.spf(7), 7);
        assert_eq!(t.spf(30), 2);
        assert_eq!(t.spf(15), 3);
        let t2 = build_spf_sieve(2).unwrap();
        assert_eq!(t2.spf(2), 2);
    }

    #[test]
    fn sieve_rejects_tiny_limit() {
        assert!(matches!(build_spf_sieve(1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn sieve_invariants_hold() {
        let t = table();
        for n in 2..=1000u64 {
            let p = t.spf(n);
            assert_eq!(n % p, 0);
            assert!(t.is_prime(p));
            assert_eq!(t.is_prime(n), p == n);
        }
    }

    #[test]
    fn factorize_examples() {
        let t = table();
        assert_eq!(
            factorize(12, &t).unwrap().factors,
            vec![(2, 2), (3, 1)]
        );
        assert!(factorize(1, &t).unwrap().factors.is_empty());
        assert_eq!(
            factorize(360, &t).unwrap().factors,
            vec![(2, 3), (3, 2), (5, 1)]
        );
        assert!(matches!(
            factorize(1_000_000, &t),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn irrational_factor_examples() {
        let t = table();
        let v = irrational_factor(&factorize(12, &t).unwrap(), 2).unwrap();
        assert!((v.value - 2f64.sqrt() * 3.0).abs() < 1e-12);
        assert!((v.value - 4.242640687).abs() < 1e-8);

        let one = irrational_factor(&factorize(1, &t).unwrap(), 2).unwrap();
        assert_eq!(one.value, 1.0);
        assert_eq!(one.log_value, 0.0);

        let v72 = irrational_factor(&factorize(72, &t).unwrap(), 3).unwrap();
        assert!((v72.value - 2f64.powf(1.0 / 3.0) * 9.0).abs() < 1e-9);
        assert!((v72.value - 11.339289449).abs() < 1e-8);

        for p in [2u64, 31, 97] {
            for k in [2u32, 3, 5] {
                let v = irrational_factor(&factorize(p, &t).unwrap(), k).unwrap();
                assert_eq!(v.value, p as f64);
            }
        }
        assert!(matches!(
            irrational_factor(&factorize(12, &t).unwrap(), 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn mu_k_and_squarefree_part() {
        let t = table();
        assert_eq!(mu_k(&factorize(12, &t).unwrap(), 2).unwrap(), 0);
        assert_eq!(mu_k(&factorize(30, &t).unwrap(), 2).unwrap(), 1);
        assert_eq!(mu_k(&factorize(8, &t).unwrap(), 4).unwrap(), 1);
        assert_eq!(squarefree_part(&factorize(12, &t).unwrap()), 6);
        assert_eq!(squarefree_part(&factorize(8, &t).unwrap()), 2);
        assert_eq!(squarefree_part(&factorize(1, &t).unwrap()), 1);
    }

    #[test]
    fn ik_value_matches_factorization_route() {
        let t = table();
        for n in 1..=5000u64 {
            for k in [2u32, 3] {
                let direct = ik_value(n, k, &t);
                let via = irrational_factor(&factorize(n, &t).unwrap(), k).unwrap();
                assert_eq!(direct.to_bits(), via.value.to_bits(), "n={n} k={k}");
            }
        }
    }

    // Sum the ten definition values directly: 1+2+3+√2+5+6+7+2^(1/3)+√3+10.
    #[test]
    fn summatory_first_ten() {
        let t = table();
        let expected = 1.0
            + 2.0
            + 3.0
            + 2f64.sqrt()
            + 5.0
            + 6.0
            + 7.0
            + 2f64.powf(1.0 / 3.0)
            + 3f64.sqrt()
            + 10.0;
        let got = summatory(10, 1, 0, 2, &t).unwrap();
        assert!((got.sum - expected).abs() < 1e-12);
        assert!((got.sum - 38.406185420).abs() < 1e-8);
        assert_eq!(got.term_count, 10);
    }

    #[test]
    fn summatory_residue_class() {
        let t = table();
        // n ≡ 1 (mod 4), n ≤ 10: {1, 5, 9} with I_2(9) = √3.
        let got = summatory(10, 4, 1, 2, &t).unwrap();
        let expected = 1.0 + 5.0 + 3f64.sqrt();
        assert!((got.sum - expected).abs() < 1e-12);
        assert!((got.sum - 7.732050808).abs() < 1e-8);
        assert_eq!(got.term_count, 3);
    }

    #[test]
    fn summatory_empty() {
        let t = table();
        let got = summatory(0, 7, 3, 2, &t).unwrap();
        assert_eq!(got.sum, 0.0);
        assert_eq!(got.term_count, 0);
    }

    #[test]
    fn summatory_monotone_in_cutoff() {
        let t = table();
        let mut prev = 0.0;
        for cutoff in (0..2000).step_by(97) {
            let s = summatory(cutoff, 3, 2, 2, &t).unwrap().sum;
            assert!(s >= prev);
            prev = s;
        }
    }

    #[test]
    fn summatory_partition_over_classes() {
        let t = table();
        for q in [3u64, 4, 5, 12] {
            let total = summatory(50_000, 1, 0, 2, &t).unwrap().sum;
            let parts: f64 = (0..q)
                .map(|a| summatory(50_000, q, a, 2, &t).unwrap().sum)
                .sum();
            assert!((parts - total).abs() / total < 1e-9, "q={q}");
        }
    }
}
