//! Numerical evaluation of ζ(s), L(s,χ), the local factors A_p(s), the
//! Euler products M_{k,χ}(s), and the main-term constants they assemble.
//!
//! Every truncation carries a certified bound: ζ uses an Euler–Maclaurin
//! remainder, non-principal L-values the Abel bound q·N^(−s), local factors
//! a geometric tail, and the Euler products the integral estimate on
//! Σ_{p>P} 4·p^(−(ks−1/k)).
//!
//! The Dirichlet series of χ(n)·I_k(n) factors as
//! L(s−1,χ) / L(ks−k,χ^k) · M_{k,χ}(s) with M_{k,χ} = ∏_p (1 + A_p(s)),
//!
//!   A_p(s) = [Σ_{m≥0} χ(p^{k+m}) p^{1/(k+m) − (k+m)s}]
//!          / [Σ_{j=0}^{k−1} χ(p^j) p^{−j(s−1)}],
//!
//! and `coeffs_from_factorization` rebuilds the coefficients from that
//! factorization so they can be checked against the direct values.

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{ik_value, FactorizationTable};
use crate::characters::{principal_character, CharacterValue, DirichletCharacter};
use crate::error::{Error, Result};
use crate::sum::{map_indices, KahanSum};

/// Primes up to `limit` by plain Eratosthenes.
pub fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// ζ(s) for real s with |error| ≤ tol, via the direct series plus an
/// Euler–Maclaurin tail with a certified remainder.
pub fn zeta_real(s: f64, tol: f64) -> Result<f64> {
    if s <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "zeta evaluation requires s > 1, got {s}"
        )));
    }
    if s < 1.05 {
        return Err(Error::InvalidArgument(format!(
            "zeta evaluation restricted to s ≥ 1.05, got {s}"
        )));
    }
    // Remainder after the B_6 correction term is bounded by the first
    // omitted term, |B_8|/8! · s(s+1)…(s+6) · N^(−s−7).
    let remainder = |n: f64| -> f64 {
        let rising: f64 = (0..7).map(|i| s + i as f64).product();
        (1.0 / 30.0) / 40_320.0 * rising * n.powf(-s - 7.0)
    };
    let mut n = 16u64;
    while remainder(n as f64) > tol * 0.5 {
        n *= 2;
        if n > 100_000_000 {
            return Err(Error::Numerical(format!(
                "zeta tail bound unreachable at tol {tol}"
            )));
        }
    }
    let mut acc = KahanSum::new();
    for i in 1..=n {
        acc.add((i as f64).powf(-s));
    }
    let nf = n as f64;
    let mut value = acc.value() + nf.powf(1.0 - s) / (s - 1.0) - 0.5 * nf.powf(-s);
    // Bernoulli corrections B_2, B_4, B_6.
    value += (1.0 / 6.0) / 2.0 * s * nf.powf(-s - 1.0);
    value -= (1.0 / 30.0) / 24.0 * s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0);
    value += (1.0 / 42.0) / 720.0
        * s
        * (s + 1.0)
        * (s + 2.0)
        * (s + 3.0)
        * (s + 4.0)
        * nf.powf(-s - 5.0);
    Ok(value)
}

fn prime_factors(mut q: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            out.push(p);
            while q % p == 0 {
                q /= p;
            }
        }
        p += 1;
    }
    if q > 1 {
        out.push(q);
    }
    out
}

/// L(s,χ) for real s ≥ 2 with |error| ≤ tol.
///
/// Principal characters reduce to ζ(s)·∏_{p|q}(1 − p^(−s)); non-principal
/// ones use partial sums with the Abel tail bound q·N^(−s).
pub fn l_value(s: f64, chi: &DirichletCharacter, tol: f64) -> Result<Complex64> {
    if s < 2.0 {
        return Err(Error::InvalidArgument(format!(
            "L-value evaluation restricted to s ≥ 2, got {s}"
        )));
    }
    let q = chi.modulus();
    if chi.is_principal() {
        let mut value = zeta_real(s, tol * 0.5)?;
        for p in prime_factors(q) {
            value *= 1.0 - (p as f64).powf(-s);
        }
        return Ok(Complex64::new(value, 0.0));
    }
    let n = ((2.0 * q as f64 / tol).powf(1.0 / s).ceil() as u64).max(16);
    if n > 100_000_000 {
        return Err(Error::Numerical(format!(
            "L-value tail bound unreachable at tol {tol}"
        )));
    }
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for i in 1..=n {
        let v = chi.value(i);
        if !v.is_zero() {
            let t = (i as f64).powf(-s);
            let c = v.to_complex();
            re.add(c.re * t);
            im.add(c.im * t);
        }
    }
    Ok(Complex64::new(re.value(), im.value()))
}

/// A truncated local factor together with its certified truncation error.
#[derive(Debug, Clone, Copy)]
pub struct LocalFactor {
    pub value: Complex64,
    pub truncation_error: f64,
}

/// Core m-series evaluation shared by the Dirichlet, ideal-norm, and
/// function-field sides; `norm` is N𝔭 or |P| and `root` is χ at the
/// prime (None encodes χ(𝔭) = 0).
pub fn local_factor_at_norm(
    norm: f64,
    root: Option<crate::characters::RootOfUnity>,
    s: f64,
    k: u32,
    max_terms: usize,
) -> Result<LocalFactor> {
    let root = match root {
        None => {
            // χ vanishes on every positive power of p: numerator 0.
            return Ok(LocalFactor {
                value: Complex64::new(0.0, 0.0),
                truncation_error: 0.0,
            });
        }
        Some(r) => r,
    };
    let ln_norm = norm.ln();
    let kf = k as f64;

    let mut den = Complex64::new(0.0, 0.0);
    for j in 0..k {
        let jf = j as f64;
        den += root.pow(j as u64).to_complex() * (-jf * (s - 1.0) * ln_norm).exp();
    }
    if den.norm() < 1e-14 {
        return Err(Error::Numerical(format!(
            "singular local factor denominator at norm {norm}"
        )));
    }

    let mut num = Complex64::new(0.0, 0.0);
    let mut magnitude = 0.0;
    let mut tail = 0.0;
    for m in 0..max_terms {
        let e = kf + m as f64;
        let t = (ln_norm * (1.0 / e - e * s)).exp();
        num += root.pow(k as u64 + m as u64).to_complex() * t;
        magnitude += t;
        // Remaining terms are dominated by the geometric ratio norm^(−s).
        let ratio = norm.powf(-s);
        tail = t * ratio / (1.0 - ratio);
        if t < 1e-16 * magnitude.max(f64::MIN_POSITIVE) || t == 0.0 {
            break;
        }
    }
    Ok(LocalFactor {
        value: num / den,
        truncation_error: tail / den.norm(),
    })
}

/// A_p(s) for a Dirichlet character; the m-series truncates when the next
/// term drops below 1e−16 of the running sum, with a geometric certificate.
pub fn local_factor_a(
    p: u64,
    s: f64,
    chi: &DirichletCharacter,
    k: u32,
    max_terms: usize,
) -> Result<LocalFactor> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    let root = match chi.value(p) {
        CharacterValue::Zero => None,
        CharacterValue::Root(r) => Some(r),
    };
    local_factor_at_norm(p as f64, root, s, k, max_terms)
}

/// A numerically evaluated Euler product with a certified tail bound.
#[derive(Debug, Clone, Copy)]
pub struct EulerProductValue {
    pub s: f64,
    pub value: Complex64,
    pub prime_cutoff: u64,
    pub tail_bound: f64,
}

/// Prime cutoff P with Σ_{p>P} 4·p^(−a) ≤ budget, by the integral estimate.
fn prime_cutoff_for(a: f64, budget: f64) -> u64 {
    let p = (4.0 / (budget * (a - 1.0))).powf(1.0 / (a - 1.0));
    (p.ceil() as u64).max(16)
}

/// M_{k,χ}(s) = ∏_p (1 + A_p(s)), evaluated over p ≤ P with
/// Σ_{p>P} |A_p(s)| ≤ tol/2 certified via |A_p| ≤ 4·p^(−(ks−1/k)).
pub fn euler_product_m(
    s: f64,
    chi: &DirichletCharacter,
    k: u32,
    tol: f64,
) -> Result<EulerProductValue> {
    if s < 2.0 {
        return Err(Error::InvalidArgument(format!(
            "Euler product evaluation restricted to s ≥ 2, got {s}"
        )));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    let a = k as f64 * s - 1.0 / k as f64;
    let cutoff = prime_cutoff_for(a, tol * 0.5);
    let primes = small_primes(cutoff);

    const CHUNK: usize = 512;
    let chunks = primes.len().div_ceil(CHUNK);
    let partials: Vec<Result<(Complex64, f64)>> = map_indices(chunks, |ci| {
        let mut prod = Complex64::new(1.0, 0.0);
        let mut err = 0.0;
        for &p in &primes[ci * CHUNK..((ci + 1) * CHUNK).min(primes.len())] {
            let lf = local_factor_a(p, s, chi, k, 256)?;
            prod *= Complex64::new(1.0, 0.0) + lf.value;
            err += lf.truncation_error;
        }
        Ok((prod, err))
    });

    let mut value = Complex64::new(1.0, 0.0);
    let mut term_err = 0.0;
    for part in partials {
        let (prod, err) = part?;
        value *= prod;
        term_err += err;
    }
    let prime_tail = 4.0 * (cutoff as f64).powf(1.0 - a) / (a - 1.0);
    let tail_bound = prime_tail + term_err;
    if tail_bound > tol {
        return Err(Error::Numerical(format!(
            "Euler product tail bound {tail_bound:.3e} exceeds requested tolerance {tol:.3e}"
        )));
    }
    Ok(EulerProductValue {
        s,
        value,
        prime_cutoff: cutoff,
        tail_bound,
    })
}

/// Dirichlet-series coefficients indexed by n; entry 0 is unused.
pub type CoeffVector = Vec<Complex64>;

/// a_n = χ(n)·I_k(n) for n ≤ d, straight from the sieve.
pub fn coeffs_direct(
    d: u64,
    chi: &DirichletCharacter,
    k: u32,
    table: &FactorizationTable,
) -> Result<CoeffVector> {
    if d > table.limit() {
        return Err(Error::OutOfRange(format!(
            "coefficient depth {d} exceeds sieve limit {}",
            table.limit()
        )));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); d as usize + 1];
    for n in 1..=d {
        let v = chi.value(n);
        if !v.is_zero() {
            out[n as usize] = v.to_complex() * ik_value(n, k, table);
        }
    }
    Ok(out)
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

fn dirichlet_convolve(x: &[Complex64], y: &[Complex64], d: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); d + 1];
    for i in 1..=d {
        if x[i].norm_sqr() != 0.0 {
            let xi = x[i];
            for j in 1..=d / i {
                out[i * j] += xi * y[j];
            }
        }
    }
    out
}

/// Rebuild a_n from the series factorization: the convolution of
/// (i) χ(n)·n, (ii) the Möbius expansion of 1/L(ks−k,χ^k) supported on
/// perfect k-th powers, and (iii) the local-factor expansion of M_{k,χ}.
pub fn coeffs_from_factorization(d: u64, chi: &DirichletCharacter, k: u32) -> Result<CoeffVector> {
    if d == 0 {
        return Err(Error::InvalidArgument("depth must be ≥ 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    let d = d as usize;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);

    // (i) coefficients of L(s−1,χ).
    let mut lshift = vec![zero; d + 1];
    for n in 1..=d {
        lshift[n] = chi.value(n as u64).to_complex() * n as f64;
    }

    // (ii) coefficients of 1/L(ks−k,χ^k): support on n = m^k with value
    // μ(m)·χ^k(m)·m^k.
    let chik = chi.pow(k as u64);
    let mut inv = vec![zero; d + 1];
    inv[1] = one;
    let mut m = 2u64;
    loop {
        let mk = (m as u128).pow(k);
        if mk > d as u128 {
            break;
        }
        let mu = moebius(m);
        if mu != 0 {
            inv[mk as usize] =
                chik.value(m).to_complex() * (mu as f64) * (mk as u64 as f64);
        }
        m += 1;
    }

    // (iii) coefficients of M_{k,χ}: per prime, expand the A_p series in
    // powers of p^(−s) by long division and fold in multiplicatively.
    let mut mcoef = vec![zero; d + 1];
    mcoef[1] = one;
    for p in small_primes((d as f64).powf(1.0 / k as f64).ceil() as u64 + 1) {
        let mut pk = 1u128;
        for _ in 0..k {
            pk *= p as u128;
        }
        if pk > d as u128 {
            continue;
        }
        let root = match chi.value(p) {
            CharacterValue::Zero => continue, // A_p = 0
            CharacterValue::Root(r) => r,
        };
        let emax = {
            let mut e = 0u32;
            let mut acc = 1u128;
            while acc * p as u128 <= d as u128 {
                acc *= p as u128;
                e += 1;
            }
            e as usize
        };
        // Numerator terms χ(p^e)·p^(1/e) for e ≥ k; denominator terms
        // χ(p^j)·p^j for j < k, both as series in p^(−s).
        let mut num = vec![zero; emax + 1];
        for e in k as usize..=emax {
            num[e] = root.pow(e as u64).to_complex() * (p as f64).powf(1.0 / e as f64);
        }
        let mut den = vec![zero; emax + 1];
        for j in 0..(k as usize).min(emax + 1) {
            den[j] = root.pow(j as u64).to_complex() * (p as f64).powi(j as i32);
        }
        let mut local = vec![zero; emax + 1];
        for e in 0..=emax {
            let mut acc = num[e];
            for j in 1..=e.min(k as usize - 1) {
                acc -= den[j] * local[e - j];
            }
            local[e] = acc; // den[0] = 1
        }
        local[0] = one;

        // Multiplicative assembly: existing entries are coprime to p.
        let mut powers = Vec::new();
        let mut pe = 1usize;
        for _ in 1..=emax {
            pe *= p as usize;
            powers.push(pe);
        }
        for e in (k as usize..=emax).rev() {
            let pw = powers[e - 1];
            let le = local[e];
            if le == zero {
                continue;
            }
            for n in 1..=d / pw {
                if n % p as usize != 0 && mcoef[n] != zero {
                    let add = mcoef[n] * le;
                    mcoef[n * pw] += add;
                }
            }
        }
    }

    let step = dirichlet_convolve(&lshift, &inv, d);
    Ok(dirichlet_convolve(&step, &mcoef, d))
}

/// max_n |a_n − b_n| / n, the series-identity discrepancy measure.
pub fn coeff_discrepancy(a: &CoeffVector, b: &CoeffVector) -> f64 {
    let d = a.len().min(b.len());
    (1..d)
        .map(|n| (a[n] - b[n]).norm() / n as f64)
        .fold(0.0, f64::max)
}

/// Main-term constants for S_k(Q;q,a): the common unit-class constant, the
/// zero-class constant for prime q, and the q = 1 total.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    pub q: u64,
    pub k: u32,
    pub c_unit: f64,
    pub c_zero: Option<f64>,
    #[serde(rename = "total")]
    pub total_const: f64,
    pub zeta_k: f64,
    #[serde(rename = "L_k_chi0")]
    pub l_k_chi0: f64,
    #[serde(rename = "M_k_chi0")]
    pub m_k_chi0: f64,
    pub tail_bound: f64,
}

fn is_prime_u64(n: u64) -> bool {
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

/// Constants per the main-term formula c(q,a) = M_{k,χ₀}(2) / (2φ(q)·
/// L(k,χ₀)) · ∏_{p|q}(1−1/p); the zero class is the total minus the
/// (q−1) unit classes.
pub fn constants_report(q: u64, k: u32, tol: f64) -> Result<ConstantsReport> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    if q != 1 && !is_prime_u64(q) {
        return Err(Error::Unsupported(format!(
            "zero-class decomposition is implemented for prime moduli only, got {q}"
        )));
    }
    let zeta_k = zeta_real(k as f64, tol.min(1e-12))?;
    let trivial = principal_character(1)?;
    let m_trivial = euler_product_m(2.0, &trivial, k, tol)?;
    let total_const = m_trivial.value.re / (2.0 * zeta_k);

    let (c_unit, c_zero, l_k, m_k, tail) = if q == 1 {
        (
            total_const,
            None,
            zeta_k,
            m_trivial.value.re,
            m_trivial.tail_bound,
        )
    } else {
        let chi0 = principal_character(q)?;
        let mq = euler_product_m(2.0, &chi0, k, tol)?;
        let l = l_value(k as f64, &chi0, tol.min(1e-12))?.re;
        let phi = (q - 1) as f64;
        let c_unit = mq.value.re * (1.0 - 1.0 / q as f64) / (2.0 * phi * l);
        let c_zero = total_const - phi * c_unit;
        (
            c_unit,
            Some(c_zero),
            l,
            mq.value.re,
            m_trivial.tail_bound + mq.tail_bound,
        )
    };

    let report = ConstantsReport {
        q,
        k,
        c_unit,
        c_zero,
        total_const,
        zeta_k,
        l_k_chi0: l_k,
        m_k_chi0: m_k,
        tail_bound: tail,
    };
    if report.c_unit <= 0.0
        || report.total_const <= 0.0
        || report.zeta_k <= 0.0
        || report.l_k_chi0 <= 0.0
        || report.m_k_chi0 <= 0.0
        || report.c_zero.is_some_and(|c| c <= 0.0)
    {
        return Err(Error::Numerical(format!(
            "constants report contains a non-positive field: {report:?}"
        )));
    }
    Ok(report)
}
