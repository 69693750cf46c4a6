//! Imaginary quadratic fields ℚ(√d): class numbers by reduced-form
//! counting, prime splitting through the Kronecker symbol, ideal
//! enumeration for the summatory of the ideal-norm irrational factor,
//! and the main-term constant λ·R_k(2)/(2ζ_K(k)).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::{local_factor_at_norm, small_primes, zeta_real};
use crate::sum::{map_indices, KahanSum};

/// An imaginary quadratic field of fundamental discriminant d < 0.
/// lambda = 2πh/(w√|d|) is the residue of its zeta function at s = 1.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadField {
    pub d: i64,
    pub h: u64,
    pub w: u64,
    pub lambda: f64,
}

fn squarefree(mut n: u64) -> bool {
    if n % 4 == 0 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let m = d.rem_euclid(4);
    if m == 1 {
        squarefree(d.unsigned_abs())
    } else if m == 0 {
        let q = d / 4;
        let r = q.rem_euclid(4);
        (r == 2 || r == 3) && squarefree(q.unsigned_abs())
    } else {
        false
    }
}

/// Count reduced binary quadratic forms ax²+bxy+cy² of discriminant d:
/// |b| ≤ a ≤ c with b ≥ 0 whenever |b| = a or a = c.
fn class_number(d: i64) -> u64 {
    let abs_d = d.unsigned_abs() as i64;
    let mut h = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= abs_d {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            h += 1;
        }
        a += 1;
    }
    h
}

pub fn make_field(d: i64) -> Result<QuadField> {
    if !is_fundamental(d) {
        return Err(Error::InvalidArgument(format!(
            "{d} is not a fundamental discriminant of an imaginary quadratic field"
        )));
    }
    if d.unsigned_abs() > 10_000 {
        return Err(Error::Budget(format!(
            "|d| = {} exceeds the 10^4 discriminant budget",
            d.unsigned_abs()
        )));
    }
    let h = class_number(d);
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    let lambda = 2.0 * std::f64::consts::PI * h as f64
        / (w as f64 * (d.unsigned_abs() as f64).sqrt());
    Ok(QuadField { d, h, w, lambda })
}

/// Kronecker symbol (a|n) for n ≥ 0.
pub fn kronecker(a: i64, n: u64) -> i64 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n as i64;
    let mut result = 1i64;
    // Factor out 2s of n: (a|2) is 0 for even a, ±1 by a mod 8.
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let m = a.rem_euclid(8);
        if m == 3 || m == 5 {
            result = -result;
        }
    }
    a = a.rem_euclid(n);
    // Jacobi loop with reciprocity.
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let m = n.rem_euclid(8);
            if m == 3 || m == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal above a rational prime; split primes carry two ideals
/// distinguished by `index`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PrimeIdealQ {
    pub p: u64,
    pub splitting: Splitting,
    pub norm: u64,
    pub index: u8,
}

pub fn split_prime(p: u64, field: &QuadField) -> Vec<PrimeIdealQ> {
    match kronecker(field.d, p) {
        1 => vec![
            PrimeIdealQ {
                p,
                splitting: Splitting::Split,
                norm: p,
                index: 0,
            },
            PrimeIdealQ {
                p,
                splitting: Splitting::Split,
                norm: p,
                index: 1,
            },
        ],
        -1 => vec![PrimeIdealQ {
            p,
            splitting: Splitting::Inert,
            norm: p * p,
            index: 0,
        }],
        _ => vec![PrimeIdealQ {
            p,
            splitting: Splitting::Ramified,
            norm: p,
            index: 0,
        }],
    }
}

/// All prime ideals of norm ≤ x, sorted by (norm, p, index).
fn prime_ideals_up_to(x: u64, field: &QuadField) -> Vec<PrimeIdealQ> {
    let mut ideals: Vec<PrimeIdealQ> = Vec::new();
    for p in small_primes(x) {
        for ideal in split_prime(p, field) {
            if ideal.norm <= x {
                ideals.push(ideal);
            }
        }
    }
    ideals.sort_by_key(|i| (i.norm, i.p, i.index));
    ideals
}

/// Σ over ideals of norm ≤ x of the ideal irrational factor ∏(N𝔭)^β.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuadSummatory {
    pub x: u64,
    pub k: u32,
    pub sum: f64,
    pub ideal_count: u64,
}

struct IdealDfs<'a> {
    norms: &'a [u64],
    ln_norms: &'a [f64],
    k: u32,
}

impl IdealDfs<'_> {
    /// Sum over all ideals whose support starts at `idx` or later, given
    /// the current partial product. Returns (Σ value, count).
    fn descend(
        &self,
        idx: usize,
        capacity: u64,
        norm: u64,
        log_f: f64,
        k_free: bool,
        acc: &mut KahanSum,
        count: &mut u64,
    ) {
        for i in idx..self.norms.len() {
            let nu = self.norms[i];
            if nu > capacity {
                break;
            }
            let ln_nu = self.ln_norms[i];
            let mut cap = capacity / nu;
            let mut alpha = 1u32;
            loop {
                let beta = if alpha < self.k {
                    alpha as f64
                } else {
                    1.0 / alpha as f64
                };
                let log_here = log_f + beta * ln_nu;
                let kf_here = k_free && alpha < self.k;
                // norm of the current ideal: norm · nu^alpha
                let mut norm_here = norm;
                for _ in 0..alpha {
                    norm_here *= nu;
                }
                let value = if kf_here {
                    norm_here as f64
                } else {
                    log_here.exp()
                };
                acc.add(value);
                *count += 1;
                self.descend(i + 1, cap, norm_here, log_here, kf_here, acc, count);
                if cap < nu {
                    break;
                }
                cap /= nu;
                alpha += 1;
            }
        }
    }
}

pub fn quad_summatory(x: u64, k: u32, field: &QuadField) -> Result<QuadSummatory> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    if x > 10_000_000 {
        return Err(Error::Budget(format!(
            "norm cutoff {x} exceeds the 10^7 enumeration budget"
        )));
    }
    if x == 0 {
        return Ok(QuadSummatory {
            x,
            k,
            sum: 0.0,
            ideal_count: 0,
        });
    }
    let ideals = prime_ideals_up_to(x, field);
    let norms: Vec<u64> = ideals.iter().map(|i| i.norm).collect();
    let ln_norms: Vec<f64> = norms.iter().map(|&n| (n as f64).ln()).collect();
    let dfs = IdealDfs {
        norms: &norms,
        ln_norms: &ln_norms,
        k,
    };

    // Branch on the first (lowest-index) prime ideal of the support;
    // partials are folded in branch order, so the reduction is the same
    // for any thread count.
    let partials: Vec<(f64, u64)> = map_indices(norms.len(), |i| {
        let nu = norms[i];
        if nu > x {
            return (0.0, 0);
        }
        let ln_nu = ln_norms[i];
        let mut acc = KahanSum::new();
        let mut count = 0u64;
        let mut cap = x / nu;
        let mut alpha = 1u32;
        loop {
            let beta = if alpha < k { alpha as f64 } else { 1.0 / alpha as f64 };
            let log_here = beta * ln_nu;
            let kf_here = alpha < k;
            let mut norm_here = 1u64;
            for _ in 0..alpha {
                norm_here *= nu;
            }
            let value = if kf_here {
                norm_here as f64
            } else {
                log_here.exp()
            };
            acc.add(value);
            count += 1;
            dfs.descend(i + 1, cap, norm_here, log_here, kf_here, &mut acc, &mut count);
            if cap < nu {
                break;
            }
            cap /= nu;
            alpha += 1;
        }
        (acc.value(), count)
    });

    let mut acc = KahanSum::new();
    acc.add(1.0); // the unit ideal
    let mut ideal_count = 1u64;
    for (s, c) in partials {
        acc.add(s);
        ideal_count += c;
    }
    Ok(QuadSummatory {
        x,
        k,
        sum: acc.value(),
        ideal_count,
    })
}

/// Number of ideals of norm ≤ x via the divisor identity
/// Σ_{n≤x} Σ_{m|n} χ_d(m); used as the enumeration cross-check.
pub fn ideal_count_reference(x: u64, field: &QuadField) -> u64 {
    let mut total = 0i64;
    for m in 1..=x {
        let chi = kronecker(field.d, m);
        if chi != 0 {
            total += chi * (x / m) as i64;
        }
    }
    total as u64
}

/// Ingredients of the main-term constant: ζ_K(k) = ζ(k)·L(k,χ_d) and the
/// ideal Euler product R_k(2) = ∏_𝔭 (1 + A_𝔭(2)).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FieldConstants {
    pub zeta_k_k: f64,
    pub r_k_2: f64,
    pub predicted: f64,
    pub tail_bound: f64,
}

/// L(k, χ_d) by direct summation with the Abel tail bound |d|·N^(−k).
fn l_value_kronecker(d: i64, s: f64, tol: f64) -> Result<f64> {
    let period = d.unsigned_abs() as f64;
    let n = ((2.0 * period / tol).powf(1.0 / s).ceil() as u64).max(16);
    if n > 100_000_000 {
        return Err(Error::Numerical(format!(
            "L(k, χ_d) tail bound unreachable at tol {tol}"
        )));
    }
    let mut acc = KahanSum::new();
    for i in 1..=n {
        let chi = kronecker(d, i);
        if chi != 0 {
            acc.add(chi as f64 * (i as f64).powf(-s));
        }
    }
    Ok(acc.value())
}

pub fn field_constants(field: &QuadField, k: u32, tol: f64) -> Result<FieldConstants> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    let zeta_k = zeta_real(k as f64, tol.min(1e-12))?;
    let l_k = l_value_kronecker(field.d, k as f64, tol.min(1e-12))?;
    let zeta_k_k = zeta_k * l_k;

    // Cutoff P with Σ over ideals of norm > P of |A_𝔭| ≤ tol/2; each
    // rational n carries at most two ideals of that norm.
    let a = 2.0 * k as f64 - 1.0 / k as f64;
    let budget = tol * 0.5;
    let cutoff = ((8.0 / (budget * (a - 1.0))).powf(1.0 / (a - 1.0)).ceil() as u64).max(16);
    let ideals = prime_ideals_up_to(cutoff, field);

    const CHUNK: usize = 512;
    let chunks = ideals.len().div_ceil(CHUNK);
    let partials: Vec<Result<(f64, f64)>> = map_indices(chunks, |ci| {
        let mut prod = 1.0f64;
        let mut err = 0.0f64;
        for ideal in &ideals[ci * CHUNK..((ci + 1) * CHUNK).min(ideals.len())] {
            let lf = local_factor_at_norm(
                ideal.norm as f64,
                Some(crate::characters::RootOfUnity::one()),
                2.0,
                k,
                256,
            )?;
            prod *= 1.0 + lf.value.re;
            err += lf.truncation_error;
        }
        Ok((prod, err))
    });
    let mut r_k_2 = 1.0;
    let mut err = 0.0;
    for part in partials {
        let (prod, e) = part?;
        r_k_2 *= prod;
        err += e;
    }
    let tail_bound = 8.0 * (cutoff as f64).powf(1.0 - a) / (a - 1.0) + err;
    if tail_bound > tol {
        return Err(Error::Numerical(format!(
            "ideal Euler product tail {tail_bound:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    let predicted = field.lambda * r_k_2 / (2.0 * zeta_k_k);
    Ok(FieldConstants {
        zeta_k_k,
        r_k_2,
        predicted,
        tail_bound,
    })
}

/// JSON report pairing the predicted main-term constant with the
/// empirical ratio at cutoff x.
#[derive(Debug, Clone, Serialize)]
pub struct QuadReport {
    pub d: i64,
    pub k: u32,
    pub h: u64,
    pub w: u64,
    pub lambda: f64,
    #[serde(rename = "zeta_K_k")]
    pub zeta_k_k: f64,
    #[serde(rename = "R_k_2")]
    pub r_k_2: f64,
    pub predicted: f64,
    pub empirical: f64,
    pub x: u64,
}

pub fn quad_report(field: &QuadField, k: u32, x: u64, tol: f64) -> Result<QuadReport> {
    let constants = field_constants(field, k, tol)?;
    let summatory = quad_summatory(x, k, field)?;
    let empirical = summatory.sum / (x as f64 * x as f64);
    Ok(QuadReport {
        d: field.d,
        k,
        h: field.h,
        w: field.w,
        lambda: field.lambda,
        zeta_k_k: constants.zeta_k_k,
        r_k_2: constants.r_k_2,
        predicted: constants.predicted,
        empirical,
        x,
    })
}
