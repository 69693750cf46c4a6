//! Basis extraction for finite abelian groups given by an element list and
//! a multiplication law.
//!
//! The decomposition is greedy: within each Sylow subgroup, repeatedly take
//! an element of maximal order among those outside the current span, reduce
//! it modulo the span (the divisibility needed for the reduction is forced
//! by maximality), and adjoin it as a new independent generator. Discrete
//! logarithms are brute force — every element is tabulated — which is
//! adequate for the group sizes this workspace touches (≤ ~10^5).

use std::collections::HashMap;

/// A direct-sum basis of a finite abelian group, with a full dlog table.
///
/// Elements are opaque `u64` encodings supplied by the caller. The product
/// of `orders` equals the group order, and every element has the unique
/// exponent vector stored in `dlog`.
#[derive(Debug, Clone)]
pub struct AbelianBasis {
    pub generators: Vec<u64>,
    pub orders: Vec<u64>,
    dlog: HashMap<u64, Vec<u64>>,
}

impl AbelianBasis {
    pub fn group_order(&self) -> u64 {
        self.orders.iter().product::<u64>().max(1)
    }

    pub fn dlog(&self, element: u64) -> Option<&[u64]> {
        self.dlog.get(&element).map(|v| v.as_slice())
    }

    pub fn contains(&self, element: u64) -> bool {
        self.dlog.contains_key(&element)
    }
}

fn pow<F: Fn(u64, u64) -> u64>(op: &F, identity: u64, mut base: u64, mut exp: u64) -> u64 {
    let mut acc = identity;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = op(acc, base);
        }
        base = op(base, base);
        exp >>= 1;
    }
    acc
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "inverse requires gcd 1");
    (old_s.rem_euclid(m as i128)) as u64
}

/// Decompose the abelian group generated by `elements` (which must be the
/// full, duplicate-free element list) under `op`.
pub fn decompose<F: Fn(u64, u64) -> u64>(elements: &[u64], identity: u64, op: F) -> AbelianBasis {
    let n = elements.len() as u64;
    if n <= 1 {
        let mut dlog = HashMap::new();
        dlog.insert(identity, Vec::new());
        return AbelianBasis {
            generators: Vec::new(),
            orders: Vec::new(),
            dlog,
        };
    }

    let mut generators = Vec::new();
    let mut orders = Vec::new();
    // Per-prime data for assembling global dlogs: (projection exponent,
    // Sylow span map, number of basis vectors in this Sylow block).
    let mut sylow_blocks = Vec::new();

    for (ell, v) in factor_u64(n) {
        let ell_pow = ell.pow(v);
        let cofactor = n / ell_pow;

        // Sylow subgroup as the image of g -> g^cofactor.
        let mut sylow: Vec<u64> = elements
            .iter()
            .map(|&g| pow(&op, identity, g, cofactor))
            .collect();
        sylow.sort_unstable();
        sylow.dedup();

        // ell-power order of each Sylow element.
        let order_of = |g: u64| -> u64 {
            let mut x = g;
            let mut ord = 1;
            while x != identity {
                x = pow(&op, identity, x, ell);
                ord *= ell;
            }
            ord
        };
        let mut candidates: Vec<(u64, u64)> =
            sylow.iter().map(|&g| (order_of(g), g)).collect();
        candidates.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

        let mut span: HashMap<u64, Vec<u64>> = HashMap::new();
        span.insert(identity, Vec::new());
        let mut block_gens: Vec<u64> = Vec::new();
        let mut block_orders: Vec<u64> = Vec::new();

        while (span.len() as u64) < sylow.len() as u64 {
            let &(_, g) = candidates
                .iter()
                .find(|(_, g)| !span.contains_key(g))
                .expect("span smaller than group but no candidate left");

            // Smallest ell-power j with g^j in the current span.
            let mut x = g;
            let mut j = 1u64;
            while !span.contains_key(&x) {
                x = pow(&op, identity, x, ell);
                j *= ell;
            }
            let t = span[&x].clone();

            // Reduce g by the span so the new generator has exact order j.
            // Maximality of ord(g) forces j | t_i for every coordinate.
            let mut reduced = g;
            for (i, &ti) in t.iter().enumerate() {
                debug_assert_eq!(ti % j, 0, "greedy divisibility violated");
                let s = (ti / j) % block_orders[i];
                let back = (block_orders[i] - s) % block_orders[i];
                reduced = op(reduced, pow(&op, identity, block_gens[i], back));
            }
            debug_assert_eq!(pow(&op, identity, reduced, j), identity);

            // Extend the span by powers of the new generator.
            let mut powers = Vec::with_capacity(j as usize);
            let mut cur = identity;
            for _ in 0..j {
                powers.push(cur);
                cur = op(cur, reduced);
            }
            let mut next_span = HashMap::with_capacity(span.len() * j as usize);
            for (&elem, vec) in &span {
                for (e, &pw) in powers.iter().enumerate() {
                    let mut v = vec.clone();
                    v.push(e as u64);
                    next_span.insert(op(elem, pw), v);
                }
            }
            span = next_span;
            block_gens.push(reduced);
            block_orders.push(j);
        }

        // Projection onto this Sylow factor: x -> x^c with c = 1 mod ell^v
        // and c = 0 mod cofactor.
        let proj = if cofactor == 1 {
            1
        } else {
            cofactor * mod_inverse(cofactor % ell_pow, ell_pow)
        };
        generators.extend_from_slice(&block_gens);
        orders.extend_from_slice(&block_orders);
        sylow_blocks.push((proj, span, block_gens.len()));
    }

    // Assemble global dlogs by projecting each element into every Sylow
    // factor and concatenating the per-factor exponent vectors.
    let mut dlog = HashMap::with_capacity(elements.len());
    for &x in elements {
        let mut vec = Vec::with_capacity(orders.len());
        for (proj, span, width) in &sylow_blocks {
            let xp = pow(&op, identity, x, *proj);
            let part = span.get(&xp).expect("projection lands in Sylow span");
            debug_assert_eq!(part.len(), *width);
            vec.extend_from_slice(part);
        }
        dlog.insert(x, vec);
    }

    let basis = AbelianBasis {
        generators,
        orders,
        dlog,
    };
    // Generator powers must reproduce every dlog entry.
    debug_assert!(verify(&basis, elements, identity, &op));
    basis
}

fn verify<F: Fn(u64, u64) -> u64>(
    basis: &AbelianBasis,
    elements: &[u64],
    identity: u64,
    op: &F,
) -> bool {
    elements.iter().all(|&x| {
        let v = basis.dlog(x).expect("missing dlog");
        let mut acc = identity;
        for (i, &e) in v.iter().enumerate() {
            acc = op(acc, pow(op, identity, basis.generators[i], e));
        }
        acc == x
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn units_mod(q: u64) -> Vec<u64> {
        (1..q.max(2))
            .filter(|&x| {
                let mut a = x;
                let mut b = q;
                while b != 0 {
                    (a, b) = (b, a % b);
                }
                a == 1
            })
            .collect()
    }

    fn check_group(q: u64, expected_orders: &[u64]) {
        let elems = units_mod(q);
        let basis = decompose(&elems, 1, |a, b| a * b % q);
        assert_eq!(basis.group_order(), elems.len() as u64);
        let mut got = basis.orders.clone();
        got.sort_unstable();
        let mut want = expected_orders.to_vec();
        want.sort_unstable();
        assert_eq!(got, want, "q={q}");
        // Exponent vectors are unique.
        let mut seen = std::collections::HashSet::new();
        for &x in &elems {
            assert!(seen.insert(basis.dlog(x).unwrap().to_vec()));
        }
    }

    #[test]
    fn cyclic_and_product_groups() {
        check_group(5, &[4]); // C4
        check_group(7, &[2, 3]); // C6 split into Sylow factors
        check_group(8, &[2, 2]); // C2 x C2
        check_group(15, &[4, 2]); // C4 x C2
        check_group(16, &[4, 2]); // C4 x C2
        check_group(24, &[2, 2, 2]);
        check_group(35, &[4, 2, 3]); // C4 x C2 x C3
    }

    #[test]
    fn trivial_groups() {
        let basis = decompose(&[1], 1, |a, b| a * b % 2);
        assert!(basis.generators.is_empty());
        assert!(basis.contains(1));
    }
}
