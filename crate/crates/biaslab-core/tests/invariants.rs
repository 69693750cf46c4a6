//! Cross-module invariants at development scale. The acceptance suite in
//! the CLI crate reruns the heavy versions at full advertised scale.

use biaslab_core::arith::{
    build_spf_sieve, factorize, ik_log_value, ik_value, irrational_factor, mu_k, squarefree_part,
    summatory, FactorizationTable,
};
use biaslab_core::characters::build_character_group;
use biaslab_core::cyclotomic::ExactRootSum;
use biaslab_core::quad::{make_field, quad_summatory};

use proptest::prelude::*;
use std::sync::OnceLock;

fn table() -> &'static FactorizationTable {
    static TABLE: OnceLock<FactorizationTable> = OnceLock::new();
    TABLE.get_or_init(|| build_spf_sieve(1_000_000).unwrap())
}

/// Deterministic xorshift for reproducible pair sampling.
struct XorShift(u64);
impl XorShift {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[test]
fn ik_multiplicative_on_coprime_pairs() {
    let t = table();
    let mut rng = XorShift(0x9e3779b97f4a7c15);
    let mut tested = 0;
    while tested < 2000 {
        let m = rng.next() % 999 + 2;
        let n = rng.next() % (1_000_000 / m - 1) + 2;
        if gcd(m, n) != 1 || m * n > 1_000_000 {
            continue;
        }
        for k in [2u32, 3] {
            let lhs = ik_log_value(m * n, k, &t);
            let rhs = ik_log_value(m, k, &t) + ik_log_value(n, k, &t);
            assert!(
                (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                "m={m} n={n} k={k}"
            );
        }
        tested += 1;
    }
}

#[test]
fn k_free_identity() {
    let t = table();
    for n in 1..=100_000u64 {
        let f = factorize(n, &t).unwrap();
        for k in [2u32, 3, 4] {
            if mu_k(&f, k).unwrap() == 1 {
                let v = irrational_factor(&f, k).unwrap();
                assert_eq!(v.value, n as f64, "n={n} k={k}");
                assert!(
                    (v.log_value - (n as f64).ln()).abs() <= 1e-12 * (n as f64).ln().max(1.0)
                );
            }
        }
    }
}

/// |I_k(n)/n − μ_k(n)| vanishes on k-free n and is ≤ n^(−(1−1/k²)) on
/// k-full n. Enumerate k-full numbers as products of p^α with α ≥ k.
#[test]
fn approximation_bound_on_k_full_numbers() {
    let t = table();
    let limit = 1_000_000u64;
    for k in [2u32, 3] {
        let mut k_full: Vec<u64> = Vec::new();
        for n in 2..=limit {
            let f = factorize(n, &t).unwrap();
            if f.factors.iter().all(|&(_, a)| a >= k) {
                k_full.push(n);
            }
            if k_full.len() > 3000 {
                break;
            }
        }
        assert!(!k_full.is_empty());
        for &n in &k_full {
            let v = ik_value(n, k, &t);
            let lhs = (v / n as f64).abs();
            let bound = (n as f64).powf(-(1.0 - 1.0 / (k as f64 * k as f64)));
            assert!(lhs <= bound * (1.0 + 1e-12), "n={n} k={k}: {lhs} > {bound}");
        }
    }
}

/// k-free n: I(n) ≥ S(n)^(1/(k−1)); k-full n: I(n) ≤ S(n)^(1/k), with
/// I = I_2 throughout.
#[test]
fn alkan_inequalities() {
    let t = table();
    for n in 2..=200_000u64 {
        let f = factorize(n, &t).unwrap();
        let i2 = irrational_factor(&f, 2).unwrap().value;
        let s = squarefree_part(&f) as f64;
        for k in [2u32, 3] {
            let k_free = f.factors.iter().all(|&(_, a)| a < k);
            let k_full = f.factors.iter().all(|&(_, a)| a >= k);
            if k_free {
                let rhs = s.powf(1.0 / (k as f64 - 1.0));
                assert!(i2 >= rhs * (1.0 - 1e-12), "n={n} k={k}");
                let km1 = k as f64 - 1.0;
                assert!(
                    rhs >= (n as f64).powf(1.0 / (km1 * km1)) * (1.0 - 1e-12),
                    "squarefree part bound n={n} k={k}"
                );
            }
            if k_full {
                assert!(i2 <= s.powf(1.0 / k as f64) * (1.0 + 1e-12), "n={n} k={k}");
            }
        }
    }
}

#[test]
fn column_orthogonality_exact() {
    for q in [1u64, 2, 3, 4, 5, 8, 12, 16, 21, 24, 36, 45, 50] {
        let chars = build_character_group(q).unwrap();
        let phi = chars.len() as i64;
        for (i, chi) in chars.iter().enumerate() {
            for (j, psi) in chars.iter().enumerate() {
                let mut sum = ExactRootSum::new();
                for n in 0..q.max(1) {
                    let a = chi.value(n);
                    let b = psi.conjugate().value(n);
                    if let (
                        biaslab_core::characters::CharacterValue::Root(ra),
                        biaslab_core::characters::CharacterValue::Root(rb),
                    ) = (a, b)
                    {
                        sum.add_root(ra.mul(rb), 1);
                    }
                }
                let expected = if i == j { phi } else { 0 };
                assert!(sum.equals_integer(expected), "q={q} i={i} j={j}");
            }
        }
    }
}

#[test]
fn quad_ideal_factor_multiplicative() {
    // 𝓕_k is multiplicative on coprime ideals by construction of the
    // enumerator; spot-check through norm bookkeeping on two fields.
    for d in [-4i64, -7] {
        let f = make_field(d).unwrap();
        let s1 = quad_summatory(5000, 2, &f).unwrap();
        let s2 = quad_summatory(5000, 3, &f).unwrap();
        assert!(s1.sum > 0.0 && s2.sum > 0.0);
        assert_eq!(s1.ideal_count, s2.ideal_count);
        // k → ∞ recovers the full norm sum, so higher k dominates.
        assert!(s2.sum >= s1.sum);
    }
}

#[test]
fn summatory_partition_matches_total() {
    let t = table();
    for (q, k) in [(3u64, 2u32), (5, 2), (7, 3)] {
        let total = summatory(400_000, 1, 0, k, &t).unwrap().sum;
        let parts: f64 = (0..q)
            .map(|a| summatory(400_000, q, a, k, &t).unwrap().sum)
            .sum();
        assert!((parts - total).abs() / total < 1e-9, "q={q} k={k}");
    }
}

proptest! {
    #[test]
    fn factorization_reconstructs_input(n in 1u64..1_000_000) {
        let t = table();
        let f = factorize(n, &t).unwrap();
        let product: u64 = f
            .factors
            .iter()
            .map(|&(p, a)| p.pow(a))
            .product();
        prop_assert_eq!(product, n);
        for w in f.factors.windows(2) {
            prop_assert!(w[0].0 < w[1].0);
        }
        for &(_, a) in &f.factors {
            prop_assert!(a >= 1);
        }
    }

    #[test]
    fn ik_value_at_least_one(n in 1u64..1_000_000, k in 2u32..6) {
        let t = table();
        prop_assert!(ik_value(n, k, &t) >= 1.0 - 1e-12);
    }
}
