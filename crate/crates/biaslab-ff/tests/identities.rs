//! Function-field invariants at development scale: exact vanishing of
//! character sums, root classification, the functional-equation magnitude,
//! multiplicativity of the polynomial irrational factor, and the series
//! identity on a reduced grid.

use biaslab_core::characters::CharacterValue;
use biaslab_core::cyclotomic::ExactRootSum;
use biaslab_ff::characters::build_ff_characters;
use biaslab_ff::irreducible::{
    build_irreducibles, ff_factorize, ff_irrational_factor_log, IrreducibleTable,
};
use biaslab_ff::lfunc::{l_polynomial, rh_classify, series_identity_check, RootClass};
use biaslab_ff::poly::Poly;
use biaslab_ff::summatory::monic_weights;

fn monic_moduli(p: u64, max_deg: usize) -> Vec<Poly> {
    let mut out = vec![Poly::one(p)];
    for d in 1..=max_deg {
        let lo = (p as u64).pow(d as u32);
        for code in lo..2 * lo {
            out.push(Poly::decode(p, code));
        }
    }
    out
}

/// Character sums at degrees deg 𝔪 … deg 𝔪 + 3 vanish exactly, checked
/// in cyclotomic integer arithmetic rather than floats.
#[test]
fn character_sums_vanish_exactly() {
    for p in [2u64, 3] {
        for m in monic_moduli(p, 2) {
            let deg_m = m.degree().unwrap_or(0);
            if deg_m == 0 {
                continue;
            }
            for chi in build_ff_characters(&m).unwrap() {
                if chi.is_principal() {
                    continue;
                }
                for n in deg_m..=deg_m + 3 {
                    let lo = (p as u64).pow(n as u32);
                    let mut sum = ExactRootSum::new();
                    for code in lo..2 * lo {
                        sum.add_value(&chi.value(&Poly::decode(p, code)), 1);
                    }
                    assert!(sum.is_zero(), "p={p} m={m} n={n}");
                }
            }
        }
    }
}

#[test]
fn ff_orthogonality_exact() {
    for ms in ["0,0,1@3", "1,1,1@2", "2,0,1@5"] {
        let m: Poly = ms.parse().unwrap();
        let chars = build_ff_characters(&m).unwrap();
        let phi = chars.len() as i64;
        let p = m.characteristic();
        let count = (p as u64).pow(m.degree().unwrap() as u32);
        for g_code in 0..count {
            let g = Poly::decode(p, g_code);
            if g.gcd(&m).unwrap().degree() != Some(0) {
                continue;
            }
            for f_code in 0..count {
                let f = Poly::decode(p, f_code);
                if f.gcd(&m).unwrap().degree() != Some(0) {
                    continue;
                }
                let mut sum = ExactRootSum::new();
                for chi in &chars {
                    if let (CharacterValue::Root(a), CharacterValue::Root(b)) =
                        (chi.conjugate().value(&g), chi.value(&f))
                    {
                        sum.add_root(a.mul(b), 1);
                    }
                }
                let same = f.rem(&m).unwrap() == g.rem(&m).unwrap();
                assert!(
                    sum.equals_integer(if same { phi } else { 0 }),
                    "m={ms} f={f} g={g}"
                );
            }
        }
    }
}

/// Every root over the reduced grid lands on |u| = q^(−1/2) or |u| = 1,
/// and the leading coefficient magnitude equals the product of the
/// inverse-root magnitudes, q^(#critical/2).
#[test]
fn rh_and_functional_equation_reduced_grid() {
    for p in [2u64, 3] {
        for m in monic_moduli(p, 2) {
            if m.degree() == Some(0) {
                continue;
            }
            for chi in build_ff_characters(&m).unwrap() {
                if chi.is_principal() {
                    continue;
                }
                let l = l_polynomial(&chi, 8).unwrap();
                let report = rh_classify(&l).unwrap();
                assert_eq!(report.anomalous, 0, "p={p} m={m}");
                assert!(report.haselgrove_ok, "p={p} m={m}");
                let critical = report
                    .classes
                    .iter()
                    .filter(|c| **c == RootClass::Critical)
                    .count();
                let lead = l.coeff(l.trimmed_degree()).norm();
                let expected = (p as f64).powf(critical as f64 / 2.0);
                assert!(
                    (lead - expected).abs() <= 1e-8 * expected,
                    "p={p} m={m}: |lead|={lead} vs q^(crit/2)={expected}"
                );
            }
        }
    }
}

#[test]
fn irrational_factor_multiplicative_on_coprime_pairs() {
    let mut state = 0x853c49e6748fea9bu64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for p in [2u64, 3] {
        let irr = build_irreducibles(p, 6).unwrap();
        let span = (p as u64).pow(6);
        let mut tested = 0;
        while tested < 2000 {
            let a = Poly::decode(p, next() % span);
            let b = Poly::decode(p, next() % span);
            if a.is_zero() || b.is_zero() {
                continue;
            }
            if a.gcd(&b).unwrap().degree() != Some(0) {
                continue;
            }
            let fa = ff_factorize(&a, &irr).unwrap();
            let fb = ff_factorize(&b, &irr).unwrap();
            let fab = ff_factorize(&a.mul(&b), &irr).unwrap();
            for k in [2u32, 3] {
                let lhs = ff_irrational_factor_log(&fab, p, k).unwrap();
                let rhs = ff_irrational_factor_log(&fa, p, k).unwrap()
                    + ff_irrational_factor_log(&fb, p, k).unwrap();
                assert!(
                    (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0),
                    "p={p} a={a} b={b} k={k}"
                );
            }
            tested += 1;
        }
    }
}

#[test]
fn k_free_polynomials_recover_their_norm() {
    let irr = build_irreducibles(3, 5).unwrap();
    for code in 1..3u64.pow(6) {
        let f = Poly::decode(3, code);
        let fac = ff_factorize(&f, &irr).unwrap();
        for k in [2u32, 3] {
            if fac.factors.iter().all(|&(_, a)| a < k) {
                let log = ff_irrational_factor_log(&fac, 3, k).unwrap();
                let (_, monic) = f.monic();
                let expected = (monic.norm() as f64).ln();
                assert!(
                    (log - expected).abs() <= 1e-12 * expected.max(1.0),
                    "f={f} k={k}"
                );
            }
        }
    }
}

/// Reduced-depth version of the series-identity oracle over F_3.
#[test]
fn series_identity_f3_reduced() {
    let irr: IrreducibleTable = build_irreducibles(3, 9).unwrap();
    for ms in ["1@3", "0,1@3", "2,1@3", "1,0,1@3", "0,0,1@3"] {
        let m: Poly = ms.parse().unwrap();
        for k in [2u32, 3] {
            let weights = monic_weights(&m, 9, &[k], &irr).unwrap();
            for chi in build_ff_characters(&m).unwrap() {
                let disc = series_identity_check(&chi, k, &weights[0], &irr).unwrap();
                assert!(disc <= 1e-9, "m={ms} k={k}: {disc:.3e}");
            }
        }
    }
}
