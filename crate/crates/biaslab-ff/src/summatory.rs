//! Degree/residue tables for the polynomial irrational factor, and the
//! summatory functions built from them.
//!
//! A depth-first walk over the sorted irreducible table visits every monic
//! polynomial of degree ≤ N exactly once with its factorization in hand.
//! Every value 𝔉_k(f) is a power q^(t/L) with integer numerator t over
//! the common denominator L = lcm(1..N), so the walk accumulates exact
//! integer counts per (degree, residue class, t). Character-twisted sums
//! can then cancel exactly where a symmetry forces them to vanish, instead
//! of drowning in float noise. Branch groups fold in a fixed order, so
//! thread count never changes a result.

use std::collections::{BTreeMap, HashMap};

use biaslab_core::error::{Error, Result};
use biaslab_core::sum::map_indices;

use crate::irreducible::IrreducibleTable;
use crate::poly::Poly;

/// Exact per-degree tallies: buckets[n] maps the exponent numerator t to
/// the per-residue-class counts of monic f with deg f = n and
/// 𝔉_k(f) = q^(t/L).
pub struct DegreeWeights {
    pub p: u64,
    pub modulus: Poly,
    pub n_max: usize,
    pub k: u32,
    pub residue_count: usize,
    /// Common exponent denominator L = lcm(1..=n_max).
    pub exponent_denominator: u64,
    /// buckets[n]: ascending (t, counts-by-residue-code).
    pub buckets: Vec<Vec<(u32, Vec<i64>)>>,
    /// w[n][code] = Σ_t count·q^(t/L), the float view.
    pub w: Vec<Vec<f64>>,
    /// counts[n][code], independent of k.
    pub counts: Vec<Vec<u64>>,
}

enum ResMul<'a> {
    Table { table: Vec<u64>, size: usize },
    Direct { p: u64, modulus: &'a Poly },
    Trivial,
}

impl ResMul<'_> {
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        match self {
            ResMul::Table { table, size } => table[a as usize * size + b as usize],
            ResMul::Direct { p, modulus } => Poly::decode(*p, a)
                .mulmod(&Poly::decode(*p, b), modulus)
                .expect("modulus nonzero")
                .encode(),
            ResMul::Trivial => {
                let _ = (a, b);
                0
            }
        }
    }
}

fn lcm_upto(n: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    (1..=n.max(1)).fold(1u64, |acc, x| acc / gcd(acc, x) * x)
}

struct DfsContext<'a> {
    degrees: Vec<usize>,
    residues: Vec<u64>,
    res_mul: ResMul<'a>,
    /// t_step[k_idx][d][α−1] = L·d·β(α,k), exact integers.
    t_step: Vec<Vec<Vec<u32>>>,
    n_max: usize,
    residue_count: usize,
    t_span: u64,
}

impl DfsContext<'_> {
    #[inline]
    fn key(&self, n: usize, res: u64, t: u32) -> u64 {
        (n as u64 * self.residue_count as u64 + res) * self.t_span + t as u64
    }

    fn descend(
        &self,
        start: usize,
        deg_used: usize,
        res: u64,
        ts: &[u32],
        maps: &mut [HashMap<u64, i64>],
        counts: &mut [Vec<u64>],
    ) {
        for i in start..self.degrees.len() {
            let d = self.degrees[i];
            if deg_used + d > self.n_max {
                break;
            }
            let mut res_here = res;
            let mut deg_here = deg_used;
            let mut alpha = 0usize;
            let mut ts_here = ts.to_vec();
            loop {
                deg_here += d;
                if deg_here > self.n_max {
                    break;
                }
                alpha += 1;
                res_here = self.res_mul.mul(res_here, self.residues[i]);
                for (k_idx, t) in ts_here.iter_mut().enumerate() {
                    *t = ts[k_idx] + self.t_step[k_idx][d][alpha - 1];
                }
                for (k_idx, &t) in ts_here.iter().enumerate() {
                    *maps[k_idx].entry(self.key(deg_here, res_here, t)).or_insert(0) += 1;
                }
                counts[deg_here][res_here as usize] += 1;
                self.descend(i + 1, deg_here, res_here, &ts_here, maps, counts);
            }
        }
    }
}

/// Build one exact weight table per requested k from a single walk.
pub fn monic_weights(
    modulus: &Poly,
    n_max: usize,
    ks: &[u32],
    irr: &IrreducibleTable,
) -> Result<Vec<DegreeWeights>> {
    let p = irr.p;
    if modulus.is_zero() {
        return Err(Error::InvalidArgument("modulus must be nonzero".into()));
    }
    if modulus.characteristic() != p {
        return Err(Error::InvalidArgument(
            "modulus characteristic differs from the irreducible table".into(),
        ));
    }
    for &k in ks {
        if k < 2 {
            return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
        }
    }
    if (p as u128).pow(n_max as u32 + 1) > 50_000_000 {
        return Err(Error::Budget(format!(
            "p^(N+1) = {p}^{} exceeds the 5·10^7 enumeration budget",
            n_max + 1
        )));
    }
    if irr.max_degree < n_max {
        return Err(Error::OutOfRange(format!(
            "irreducible table depth {} is below the requested degree {n_max}",
            irr.max_degree
        )));
    }
    let (_, modulus) = modulus.monic();
    let deg_m = modulus.degree().unwrap_or(0);
    let residue_count = if deg_m == 0 {
        1
    } else {
        (p as usize).pow(deg_m as u32)
    };
    let l = lcm_upto(n_max as u64);
    let t_span = l * n_max.max(1) as u64 + 1;

    let irreducibles: Vec<&Poly> = irr
        .iter_sorted()
        .filter(|q| q.degree().is_some_and(|d| d >= 1 && d <= n_max))
        .collect();
    let degrees: Vec<usize> = irreducibles.iter().map(|q| q.degree().unwrap()).collect();
    let residues: Vec<u64> = irreducibles
        .iter()
        .map(|q| {
            if deg_m == 0 {
                0
            } else {
                q.rem(&modulus).expect("modulus nonzero").encode()
            }
        })
        .collect();

    let res_mul = if deg_m == 0 {
        ResMul::Trivial
    } else if residue_count <= 1024 {
        let mut table = vec![0u64; residue_count * residue_count];
        for a in 0..residue_count as u64 {
            let fa = Poly::decode(p, a);
            for b in 0..residue_count as u64 {
                table[a as usize * residue_count + b as usize] = fa
                    .mulmod(&Poly::decode(p, b), &modulus)
                    .expect("modulus nonzero")
                    .encode();
            }
        }
        ResMul::Table {
            table,
            size: residue_count,
        }
    } else {
        ResMul::Direct {
            p,
            modulus: &modulus,
        }
    };

    // L·d·β(α,k): L·d·α below k, L·d/α at or above (α ≤ n_max divides L).
    let mut t_step = Vec::with_capacity(ks.len());
    for &k in ks {
        let mut per_degree = vec![Vec::new(); n_max + 1];
        for (d, row) in per_degree.iter_mut().enumerate().skip(1) {
            let amax = n_max / d;
            *row = (1..=amax as u64)
                .map(|alpha| {
                    if alpha < k as u64 {
                        (l * d as u64 * alpha) as u32
                    } else {
                        (l * d as u64 / alpha) as u32
                    }
                })
                .collect();
        }
        t_step.push(per_degree);
    }

    let ctx = DfsContext {
        degrees,
        residues,
        res_mul,
        t_step,
        n_max,
        residue_count,
        t_span,
    };

    // Contiguous branch groups; group results fold in group order. All
    // accumulation is integral, so the fold is exact regardless.
    let branch_count = ctx.degrees.len();
    let groups = 64usize.min(branch_count.max(1));
    let per_group = branch_count.div_ceil(groups.max(1)).max(1);
    let partials: Vec<(Vec<HashMap<u64, i64>>, Vec<Vec<u64>>)> = map_indices(groups, |g| {
        let mut maps: Vec<HashMap<u64, i64>> = (0..ks.len()).map(|_| HashMap::new()).collect();
        let mut counts = vec![vec![0u64; residue_count]; n_max + 1];
        let lo = g * per_group;
        let hi = ((g + 1) * per_group).min(branch_count);
        let root_res = if deg_m == 0 { 0 } else { 1 };
        for i in lo..hi {
            let d = ctx.degrees[i];
            if d > n_max {
                break;
            }
            let mut res_here = root_res;
            let mut deg_here = 0usize;
            let mut alpha = 0usize;
            loop {
                deg_here += d;
                if deg_here > n_max {
                    break;
                }
                alpha += 1;
                res_here = ctx.res_mul.mul(res_here, ctx.residues[i]);
                let ts: Vec<u32> = (0..ks.len())
                    .map(|k_idx| ctx.t_step[k_idx][d][alpha - 1])
                    .collect();
                for (k_idx, &t) in ts.iter().enumerate() {
                    *maps[k_idx].entry(ctx.key(deg_here, res_here, t)).or_insert(0) += 1;
                }
                counts[deg_here][res_here as usize] += 1;
                ctx.descend(i + 1, deg_here, res_here, &ts, &mut maps, &mut counts);
            }
        }
        (maps, counts)
    });

    // Fold the integer tallies.
    let mut merged: Vec<HashMap<u64, i64>> = (0..ks.len()).map(|_| HashMap::new()).collect();
    let mut counts = vec![vec![0u64; residue_count]; n_max + 1];
    let one_code = if deg_m == 0 { 0u64 } else { 1 };
    counts[0][one_code as usize] += 1;
    for k_idx in 0..ks.len() {
        // The constant polynomial 1 has 𝔉_k = 1 = q^(0/L).
        *merged[k_idx].entry(ctx.key(0, one_code, 0)).or_insert(0) += 1;
    }
    for (maps, c) in partials {
        for (k_idx, m) in maps.into_iter().enumerate() {
            for (key, v) in m {
                *merged[k_idx].entry(key).or_insert(0) += v;
            }
        }
        for (dst, src) in counts.iter_mut().zip(&c) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += s;
            }
        }
    }

    let qf = p as f64;
    let lf = l as f64;
    Ok(ks
        .iter()
        .enumerate()
        .map(|(k_idx, &k)| {
            let mut per_degree: Vec<BTreeMap<u32, Vec<i64>>> =
                vec![BTreeMap::new(); n_max + 1];
            for (&key, &cnt) in &merged[k_idx] {
                let t = (key % ctx.t_span) as u32;
                let nr = key / ctx.t_span;
                let n = (nr / residue_count as u64) as usize;
                let r = (nr % residue_count as u64) as usize;
                per_degree[n]
                    .entry(t)
                    .or_insert_with(|| vec![0i64; residue_count])[r] += cnt;
            }
            let buckets: Vec<Vec<(u32, Vec<i64>)>> = per_degree
                .into_iter()
                .map(|m| m.into_iter().collect())
                .collect();
            let mut w = vec![vec![0.0f64; residue_count]; n_max + 1];
            for (n, row) in buckets.iter().enumerate() {
                for (t, per_res) in row {
                    let value = qf.powf(*t as f64 / lf);
                    for (code, &cnt) in per_res.iter().enumerate() {
                        if cnt != 0 {
                            w[n][code] += cnt as f64 * value;
                        }
                    }
                }
            }
            DegreeWeights {
                p,
                modulus: modulus.clone(),
                n_max,
                k,
                residue_count,
                exponent_denominator: l,
                buckets,
                w,
                counts: counts.clone(),
            }
        })
        .collect())
}

/// Twisted degree sums A_n(χ) = Σ_{f monic, deg f = n} χ(f)·𝔉_k(f),
/// assembled bucket by bucket. Within each exponent bucket the character
/// sum is an integer combination of roots of unity, reduced exactly
/// modulo the cyclotomic polynomial, so a sum a symmetry forces to zero
/// is zero exactly rather than float noise.
pub fn twisted_degree_sums(
    weights: &DegreeWeights,
    chi: &crate::characters::FFCharacter,
) -> Result<Vec<num_complex::Complex64>> {
    use num_complex::Complex64;

    if chi.modulus() != &weights.modulus {
        return Err(Error::InvalidArgument(
            "character modulus differs from the weight table".into(),
        ));
    }
    let ord = chi.order().max(1);
    // Angle slot per residue code; None marks χ = 0.
    let slots: Vec<Option<usize>> = (0..weights.residue_count as u64)
        .map(|code| match chi.value_at_code(code) {
            biaslab_core::characters::CharacterValue::Zero => None,
            biaslab_core::characters::CharacterValue::Root(r) => {
                Some((r.numerator() * (ord / r.denominator())) as usize)
            }
        })
        .collect();
    let phi_poly = biaslab_core::cyclotomic::cyclotomic_poly(ord);
    let phi_deg = phi_poly.len() - 1;
    let roots: Vec<Complex64> = (0..ord)
        .map(|a| {
            let theta = 2.0 * std::f64::consts::PI * a as f64 / ord as f64;
            Complex64::new(theta.cos(), theta.sin())
        })
        .collect();
    let qf = weights.p as f64;
    let lf = weights.exponent_denominator as f64;

    let mut out = Vec::with_capacity(weights.n_max + 1);
    let mut slot_counts = vec![0i64; ord as usize];
    for row in &weights.buckets {
        let mut acc = Complex64::new(0.0, 0.0);
        for (t, per_res) in row {
            slot_counts.fill(0);
            let mut any = false;
            for (code, &cnt) in per_res.iter().enumerate() {
                if cnt != 0 {
                    if let Some(slot) = slots[code] {
                        slot_counts[slot] += cnt;
                        any = true;
                    }
                }
            }
            if !any {
                continue;
            }
            // Exact reduction mod Φ_ord; an all-zero remainder is an
            // exact zero and contributes nothing.
            if phi_deg > 0 {
                for i in (phi_deg..slot_counts.len()).rev() {
                    let c = slot_counts[i];
                    if c != 0 {
                        for (j, &pj) in phi_poly.iter().enumerate() {
                            slot_counts[i - phi_deg + j] -= c * pj;
                        }
                    }
                }
            }
            if slot_counts[..phi_deg.max(1)].iter().all(|&c| c == 0) {
                continue;
            }
            let mut inner = Complex64::new(0.0, 0.0);
            for (a, &c) in slot_counts.iter().take(phi_deg.max(1)).enumerate() {
                if c != 0 {
                    inner += roots[a] * c as f64;
                }
            }
            acc += inner * qf.powf(*t as f64 / lf);
        }
        out.push(acc);
    }
    Ok(out)
}

/// 𝔖_k(N;𝔪,𝔤) and its per-degree layers.
#[derive(Debug, Clone)]
pub struct FFSummatory {
    pub n_max: usize,
    pub modulus: Poly,
    pub target: Poly,
    pub k: u32,
    pub sum: f64,
    pub per_degree: Vec<f64>,
    pub term_count: u64,
}

fn inv_mod_p(p: u64, a: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Sum over all nonzero f (every leading unit) with deg f ≤ N and
/// f ≡ 𝔤 (mod 𝔪): each unit c contributes the monic class c^(−1)·𝔤.
pub fn summatory_from_weights(weights: &DegreeWeights, target: &Poly) -> FFSummatory {
    let p = weights.p;
    let deg_m = weights.modulus.degree().unwrap_or(0);
    let mut class_codes = Vec::new();
    if deg_m == 0 {
        for _ in 1..p {
            class_codes.push(0u64);
        }
    } else {
        for c in 1..p {
            let cinv = inv_mod_p(p, c);
            let scaled = target
                .scale(cinv)
                .rem(&weights.modulus)
                .expect("modulus nonzero");
            class_codes.push(scaled.encode());
        }
    }
    let mut per_degree = vec![0.0f64; weights.n_max + 1];
    let mut term_count = 0u64;
    for (n, row) in weights.w.iter().enumerate() {
        for &code in &class_codes {
            per_degree[n] += row[code as usize];
            term_count += weights.counts[n][code as usize];
        }
    }
    let sum = per_degree.iter().sum();
    FFSummatory {
        n_max: weights.n_max,
        modulus: weights.modulus.clone(),
        target: target.clone(),
        k: weights.k,
        sum,
        per_degree,
        term_count,
    }
}

/// Monic-only variant (the Dirichlet series in u runs over monic f).
pub fn summatory_from_weights_monic(weights: &DegreeWeights, target: &Poly) -> FFSummatory {
    let deg_m = weights.modulus.degree().unwrap_or(0);
    let code = if deg_m == 0 {
        0
    } else {
        target
            .rem(&weights.modulus)
            .expect("modulus nonzero")
            .encode()
    };
    let per_degree: Vec<f64> = weights.w.iter().map(|row| row[code as usize]).collect();
    let term_count = weights.counts.iter().map(|row| row[code as usize]).sum();
    FFSummatory {
        n_max: weights.n_max,
        modulus: weights.modulus.clone(),
        target: target.clone(),
        k: weights.k,
        sum: per_degree.iter().sum(),
        per_degree,
        term_count,
    }
}

/// One-call summatory over all f with deg ≤ n_max, f ≡ target (mod 𝔪).
pub fn ff_summatory(
    n_max: usize,
    modulus: &Poly,
    target: &Poly,
    k: u32,
    irr: &IrreducibleTable,
) -> Result<FFSummatory> {
    let weights = monic_weights(modulus, n_max, &[k], irr)?;
    Ok(summatory_from_weights(&weights[0], target))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irreducible::{build_irreducibles, ff_factorize, ff_irrational_factor};

    #[test]
    fn trivial_modulus_f2_degree_one() {
        // f ∈ {1, X, X+1}: 1 + 2 + 2 = 5.
        let irr = build_irreducibles(2, 4).unwrap();
        let m = Poly::one(2);
        let g = Poly::one(2);
        let s = ff_summatory(1, &m, &g, 2, &irr).unwrap();
        assert_eq!(s.sum, 5.0);
        assert_eq!(s.term_count, 3);
        assert_eq!(s.per_degree, vec![1.0, 4.0]);
    }

    #[test]
    fn trivial_modulus_f3_constants() {
        let irr = build_irreducibles(3, 4).unwrap();
        let m = Poly::one(3);
        let g = Poly::one(3);
        let s = ff_summatory(0, &m, &g, 2, &irr).unwrap();
        assert_eq!(s.sum, 2.0);
        assert_eq!(s.term_count, 2);
    }

    #[test]
    fn empty_class_is_zero() {
        let irr = build_irreducibles(2, 4).unwrap();
        let m: Poly = "0,0,0,1@2".parse().unwrap(); // X³
        let g: Poly = "0,1,1@2".parse().unwrap(); // X² + X: no f ≡ g of deg ≤ 1
        let s = ff_summatory(1, &m, &g, 2, &irr).unwrap();
        assert_eq!(s.sum, 0.0);
        assert_eq!(s.term_count, 0);
    }

    /// Literal enumeration over coefficient vectors with trial-division
    /// factorization — the independent route the walk must match.
    fn brute_force(
        n_max: usize,
        modulus: &Poly,
        target: &Poly,
        k: u32,
        irr: &IrreducibleTable,
    ) -> (f64, u64) {
        let p = irr.p;
        let (_, m) = modulus.monic();
        let tgt = if m.is_constant() {
            Poly::zero(p)
        } else {
            target.rem(&m).unwrap()
        };
        let mut sum = 0.0;
        let mut count = 0;
        for code in 1..(p as u64).pow(n_max as u32 + 1) {
            let f = Poly::decode(p, code);
            let r = if m.is_constant() {
                Poly::zero(p)
            } else {
                f.rem(&m).unwrap()
            };
            if r == tgt {
                let fac = ff_factorize(&f, irr).unwrap();
                sum += ff_irrational_factor(&fac, p, k).unwrap();
                count += 1;
            }
        }
        (sum, count)
    }

    #[test]
    fn dfs_matches_literal_enumeration() {
        for (p, n_max) in [(2u64, 8usize), (3, 6)] {
            let irr = build_irreducibles(p, n_max).unwrap();
            let moduli: Vec<Poly> = match p {
                2 => vec![
                    "1@2".parse().unwrap(),
                    "0,1@2".parse().unwrap(),
                    "1,1,1@2".parse().unwrap(),
                ],
                _ => vec![
                    "0,1@3".parse().unwrap(),
                    "0,0,1@3".parse().unwrap(),
                    "1,2,1@3".parse().unwrap(),
                ],
            };
            for m in &moduli {
                for k in [2u32, 3] {
                    let weights = monic_weights(m, n_max, &[k], &irr).unwrap();
                    for tcode in 1..(p as u64).pow(m.degree().unwrap_or(0) as u32).max(2) {
                        let target = Poly::decode(p, tcode);
                        let s = summatory_from_weights(&weights[0], &target);
                        let (bs, bc) = brute_force(n_max, m, &target, k, &irr);
                        assert_eq!(s.term_count, bc, "p={p} m={m} k={k} t={target}");
                        assert!(
                            (s.sum - bs).abs() <= 1e-9 * bs.abs().max(1.0),
                            "p={p} m={m} k={k} t={target}: {} vs {bs}",
                            s.sum
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn monic_and_full_sums_differ_by_unit_count_over_f3() {
        // Over F_p each monic class contributes p−1 unit translates with
        // the same 𝔉_k; with trivial modulus the full sum is (p−1)× monic.
        let irr = build_irreducibles(3, 5).unwrap();
        let m = Poly::one(3);
        let g = Poly::one(3);
        let weights = monic_weights(&m, 5, &[2], &irr).unwrap();
        let monic = summatory_from_weights_monic(&weights[0], &g);
        let full = summatory_from_weights(&weights[0], &g);
        assert!((full.sum - 2.0 * monic.sum).abs() < 1e-9);
        assert_eq!(full.term_count, 2 * monic.term_count);
    }

    #[test]
    fn counts_are_uniform_at_high_degree() {
        // For n ≥ deg 𝔪 every residue class holds exactly p^(n−deg 𝔪)
        // monic polynomials.
        let irr = build_irreducibles(3, 7).unwrap();
        let m: Poly = "1,2,1@3".parse().unwrap();
        let weights = monic_weights(&m, 7, &[2], &irr).unwrap();
        for n in 2..=7usize {
            for code in 0..9usize {
                assert_eq!(
                    weights[0].counts[n][code],
                    3u64.pow(n as u32 - 2),
                    "n={n} code={code}"
                );
            }
        }
    }

    #[test]
    fn k_free_bucket_is_exact() {
        // The k-free layer sits at t = L·n with value q^n exactly.
        let irr = build_irreducibles(2, 6).unwrap();
        let m = Poly::one(2);
        let weights = monic_weights(&m, 6, &[2], &irr).unwrap();
        let l = weights[0].exponent_denominator;
        for n in 1..=6usize {
            let squarefree_count: i64 = weights[0].buckets[n]
                .iter()
                .filter(|(t, _)| *t as u64 == l * n as u64)
                .map(|(_, counts)| counts.iter().sum::<i64>())
                .sum();
            // Squarefree monic count over F_q: q^n − q^(n−1) for n ≥ 2.
            let expected = if n == 1 { 2 } else { 2i64.pow(n as u32) - 2i64.pow(n as u32 - 1) };
            assert_eq!(squarefree_count, expected, "n={n}");
        }
    }
}
