use biaslab_ff::characters::build_ff_characters;
use biaslab_ff::irreducible::build_irreducibles;
use biaslab_ff::lfunc::series_identity_check;
use biaslab_ff::poly::Poly;
use biaslab_ff::summatory::monic_weights;
use std::time::Instant;

#[test]
fn dump() {
    let start = Instant::now();
    let mut worst = (0.0f64, String::new());
    for p in [2u64, 3] {
        let irr = build_irreducibles(p, 14).unwrap();
        let mut moduli = vec![Poly::one(p)];
        for d in 1..=2usize {
            let lo = (p as u64).pow(d as u32);
            for code in lo..2 * lo {
                moduli.push(Poly::decode(p, code));
            }
        }
        for m in &moduli {
            let weights = monic_weights(m, 14, &[2, 3], &irr).unwrap();
            for (ki, k) in [2u32, 3].iter().enumerate() {
                for chi in build_ff_characters(m).unwrap() {
                    let disc = series_identity_check(&chi, *k, &weights[ki], &irr).unwrap();
                    if disc > worst.0 {
                        worst = (disc, format!("p={p} m={m} k={k} principal={}", chi.is_principal()));
                    }
                }
            }
        }
        println!("p={p} done at {:?}", start.elapsed());
    }
    println!("WORST {:.3e} at {}", worst.0, worst.1);
}
