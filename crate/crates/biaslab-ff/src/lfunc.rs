//! Exact L-functions in u = q^(−s), root classification against the
//! function-field Riemann hypothesis, the Euler products 𝓜_k(s,χ), the
//! coefficientwise series identity, and the main-term report.
//!
//! For non-principal χ mod 𝔪 the L-function is the polynomial
//! Σ_{n < deg 𝔪} (Σ_{deg f = n} χ(f)) u^n — the higher character sums
//! vanish, which `l_polynomial` verifies by enumeration rather than
//! assuming. The series of χ(f)𝔉_k(f) over monic f factors as
//! L_q(s−1,χ) / L_q(ks−k,χ^k) · 𝓜_k(s,χ) with local factors
//!
//!   𝒜_P(s) = [Σ_{m≥0} χ(P^{k+m}) |P|^{1/(k+m)} u^{(k+m)·deg P}]
//!          / [Σ_{j=0}^{k−1} χ(P^j) |P|^j u^{j·deg P}].

use num_complex::Complex64;
use serde::Serialize;

use biaslab_core::characters::CharacterValue;
use biaslab_core::error::{Error, Result};
use biaslab_core::euler::local_factor_at_norm;

use crate::dd::{dd_root_of_unity, Dd, DdC};

use crate::characters::{principal_ff_character, FFCharacter, FFUnitGroup};
use crate::irreducible::{build_irreducibles, ff_factorize, IrreducibleTable};
use crate::poly::Poly;
use crate::summatory::{monic_weights, summatory_from_weights, twisted_degree_sums, DegreeWeights};
use crate::useries::USeries;

/// ζ_q as a truncated series: the coefficient at u^n counts the monic
/// polynomials of degree n, q^n.
pub fn zeta_u(q: u64, degree: usize) -> USeries {
    let coeffs = (0..=degree)
        .map(|n| Complex64::new((q as f64).powi(n as i32), 0.0))
        .collect();
    USeries::new(q, coeffs, false)
}

/// Σ_{f monic, deg f = n} χ(f). Below deg 𝔪 this is a direct enumeration;
/// from deg 𝔪 on, monic polynomials of degree n cover every residue class
/// exactly q^(n−deg 𝔪) times, so the sum is 0 (non-principal) or
/// Φ(𝔪)·q^(n−deg 𝔪) (principal).
pub fn char_sum_by_degree(chi: &FFCharacter, n: usize) -> Complex64 {
    let group = chi.group();
    let p = group.p();
    let deg_m = group.deg_modulus();
    if deg_m == 0 {
        // Only the principal character exists mod a unit.
        return Complex64::new((p as f64).powi(n as i32), 0.0);
    }
    if n < deg_m {
        // Monic codes of degree n occupy [p^n, 2p^n); degree 0 is {1}.
        let lo = (p as u64).pow(n as u32);
        let hi = 2 * lo;
        let mut acc = Complex64::new(0.0, 0.0);
        for code in lo..hi {
            acc += chi.value_at_code(code).to_complex();
        }
        acc
    } else if chi.is_principal() {
        let mult = (p as f64).powi((n - deg_m) as i32);
        Complex64::new(group.phi() as f64 * mult, 0.0)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// The L-function of χ as a u-series: an exact polynomial of degree
/// < deg 𝔪 for non-principal χ (verified, not assumed), the truncated
/// ζ_q·∏_{P|𝔪}(1 − u^{deg P}) for the principal character.
pub fn l_polynomial(chi: &FFCharacter, truncation: usize) -> Result<USeries> {
    let group = chi.group();
    let p = group.p();
    let deg_m = group.deg_modulus();

    if chi.is_principal() {
        let mut acc = zeta_u(p, truncation);
        if deg_m > 0 {
            let table = build_irreducibles(p, deg_m)?;
            let fac = ff_factorize(group.modulus(), &table)?;
            for (prime, _) in &fac.factors {
                let d = prime.degree().unwrap_or(0);
                let mut coeffs = vec![Complex64::new(0.0, 0.0); truncation + 1];
                coeffs[0] = Complex64::new(1.0, 0.0);
                if d <= truncation {
                    coeffs[d] = Complex64::new(-1.0, 0.0);
                }
                acc = acc.mul_trunc(&USeries::new(p, coeffs, true), truncation);
            }
        }
        return Ok(acc);
    }

    let mut coeffs: Vec<Complex64> = (0..deg_m).map(|n| char_sum_by_degree(chi, n)).collect();
    // Truncation honesty: the next few degree sums must vanish.
    for n in deg_m..=deg_m + 3 {
        let lo = (p as u64).pow(n as u32);
        let mut acc = Complex64::new(0.0, 0.0);
        for code in lo..2 * lo {
            acc += chi.value(&Poly::decode(p, code)).to_complex();
        }
        if acc.norm() > 1e-9 * (lo as f64) {
            return Err(Error::Numerical(format!(
                "character sum at degree {n} fails to vanish: |{acc}|"
            )));
        }
    }
    while coeffs.len() > 1 && coeffs.last().map_or(false, |c| c.norm() < 1e-9) {
        coeffs.pop();
    }
    Ok(USeries::new(p, coeffs, true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RootClass {
    /// |u| = q^(−1/2), a critical zero.
    Critical,
    /// |u| = 1, from imprimitivity factors or the trivial zero of an
    /// even character.
    UnitCircle,
    Anomalous,
}

/// Root locations and the central value of one L-polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct LPolyReport {
    pub q: u64,
    pub degree: usize,
    pub roots: Vec<(f64, f64)>,
    pub classes: Vec<RootClass>,
    pub half_value: (f64, f64),
    /// |L(q^(−1/2))| > 1e−8: the sign-change hypothesis at desk scale.
    pub haselgrove_ok: bool,
    pub anomalous: usize,
}

fn durand_kerner(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = coeffs.len() - 1;
    let lead = coeffs[d];
    let monic: Vec<Complex64> = coeffs.iter().map(|&c| c / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..d).map(|j| seed.powu(j as u32 + 1)).collect();
    for _ in 0..1000 {
        let mut max_move = 0.0f64;
        for j in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for l in 0..d {
                if l != j {
                    denom *= roots[j] - roots[l];
                }
            }
            let delta = eval(roots[j]) / denom;
            roots[j] -= delta;
            max_move = max_move.max(delta.norm());
        }
        if max_move < 1e-14 {
            return Ok(roots);
        }
    }
    Err(Error::Numerical(
        "root iteration failed to converge".into(),
    ))
}

/// Roots of a complex polynomial, ascending coefficients.
fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().map_or(false, |z| z.norm() < 1e-12) {
        c.pop();
    }
    match c.len() {
        0 | 1 => Ok(Vec::new()),
        2 => Ok(vec![-c[0] / c[1]]),
        3 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = (b * b - 4.0 * a * cc).sqrt();
            Ok(vec![(-b + disc) / (2.0 * a), (-b - disc) / (2.0 * a)])
        }
        _ => durand_kerner(&c),
    }
}

/// Locate and classify every root of a finite L-polynomial; roots must
/// fall on |u| = q^(−1/2) or |u| = 1 to within 1e−8.
pub fn rh_classify(lpoly: &USeries) -> Result<LPolyReport> {
    if !lpoly.exact {
        return Err(Error::InvalidArgument(
            "root classification requires a finite L-polynomial".into(),
        ));
    }
    let roots = poly_roots(&lpoly.coeffs).map_err(|e| {
        Error::Numerical(format!("{e} for {}", lpoly.to_display_string()))
    })?;
    // Polished residual check.
    for r in &roots {
        let v = lpoly.eval(*r);
        if v.norm() > 1e-8 {
            return Err(Error::Numerical(format!(
                "root residual {:.3e} for {}",
                v.norm(),
                lpoly.to_display_string()
            )));
        }
    }
    let critical = (lpoly.q as f64).powf(-0.5);
    let classes: Vec<RootClass> = roots
        .iter()
        .map(|r| {
            let m = r.norm();
            if (m - critical).abs() <= 1e-8 {
                RootClass::Critical
            } else if (m - 1.0).abs() <= 1e-8 {
                RootClass::UnitCircle
            } else {
                RootClass::Anomalous
            }
        })
        .collect();
    let half = lpoly.eval_real(critical);
    let anomalous = classes.iter().filter(|c| **c == RootClass::Anomalous).count();
    Ok(LPolyReport {
        q: lpoly.q,
        degree: lpoly.trimmed_degree(),
        roots: roots.iter().map(|r| (r.re, r.im)).collect(),
        classes,
        half_value: (half.re, half.im),
        haselgrove_ok: half.norm() > 1e-8,
        anomalous,
    })
}

/// 𝓜_k(s,χ) = ∏_P (1 + 𝒜_P) as a formal series in u to the requested
/// degree, carried in double-double precision; only irreducibles with
/// k·deg P ≤ degree contribute.
pub(crate) fn euler_m_series_dd(
    k: u32,
    chi: &FFCharacter,
    degree: usize,
    irr: &IrreducibleTable,
) -> Result<Vec<DdC>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("order k must be ≥ 2, got {k}")));
    }
    let q = chi.group().p();
    if irr.p != q {
        return Err(Error::InvalidArgument(
            "irreducible table characteristic mismatch".into(),
        ));
    }
    let need = degree / k as usize;
    if irr.max_degree < need {
        return Err(Error::OutOfRange(format!(
            "irreducible table depth {} is below the required {need}",
            irr.max_degree
        )));
    }
    let mut acc = vec![DdC::ZERO; degree + 1];
    acc[0] = DdC::ONE;
    let mut local = vec![DdC::ZERO; degree + 1];
    for prime in irr.iter_sorted() {
        let dp = prime.degree().unwrap_or(0);
        if dp == 0 {
            continue;
        }
        if k as usize * dp > degree {
            break;
        }
        let root = match chi.value(prime) {
            CharacterValue::Zero => continue, // 𝒜_P = 0 on divisors of 𝔪
            CharacterValue::Root(r) => r,
        };
        let norm = (q as f64).powi(dp as i32);
        let mut num = vec![DdC::ZERO; degree + 1];
        let mut m = 0u32;
        loop {
            let e = (k + m) as usize * dp;
            if e > degree {
                break;
            }
            let angle = root.pow((k + m) as u64);
            num[e] = dd_root_of_unity(angle.numerator(), angle.denominator())
                .mul_dd(Dd::root(norm, k + m));
            m += 1;
        }
        let mut den = vec![DdC::ZERO; degree + 1];
        den[0] = DdC::ONE;
        for j in 1..k {
            let e = j as usize * dp;
            if e > degree {
                break;
            }
            let angle = root.pow(j as u64);
            den[e] = dd_root_of_unity(angle.numerator(), angle.denominator())
                .mul_dd(Dd::from(norm).powi(j));
        }
        // Formal division by the denominator (constant term 1).
        for e in 0..=degree {
            let mut v = num[e];
            for j in 1..=e {
                if den[j] != DdC::ZERO {
                    v = v.sub(den[j].mul(local[e - j]));
                }
            }
            local[e] = v;
        }
        local[0] = DdC::ONE; // 1 + 𝒜_P
        // acc *= local, truncated.
        let mut next = vec![DdC::ZERO; degree + 1];
        for (i, &a) in acc.iter().enumerate() {
            if a == DdC::ZERO {
                continue;
            }
            for (j, &b) in local.iter().enumerate().take(degree + 1 - i) {
                if b != DdC::ZERO {
                    next[i + j] = next[i + j].add(a.mul(b));
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// f64 view of the 𝓜_k series.
pub fn euler_m_series(
    k: u32,
    chi: &FFCharacter,
    degree: usize,
    irr: &IrreducibleTable,
) -> Result<USeries> {
    let dd = euler_m_series_dd(k, chi, degree, irr)?;
    Ok(USeries::new(
        chi.group().p(),
        dd.iter()
            .map(|c| {
                let (re, im) = c.value();
                Complex64::new(re, im)
            })
            .collect(),
        false,
    ))
}

/// 𝓜_k(s,χ) evaluated at real s by the convergent product over
/// irreducibles, with the geometric tail certificate
/// Σ_{deg P > E} |𝒜_P| ≤ 4·Σ_{e>E} q^(e(1 + 1/k − ks)).
pub fn euler_m_value(
    k: u32,
    chi: &FFCharacter,
    s: f64,
    tol: f64,
    irr: &IrreducibleTable,
) -> Result<(Complex64, f64)> {
    if s < 2.0 {
        return Err(Error::InvalidArgument(format!(
            "Euler product evaluation restricted to s ≥ 2, got {s}"
        )));
    }
    let q = chi.group().p() as f64;
    let ratio = q.powf(-(k as f64 * s - 1.0 - 1.0 / k as f64));
    let mut depth = 1usize;
    while 4.0 * ratio.powi(depth as i32 + 1) / (1.0 - ratio) > tol * 0.5 {
        depth += 1;
        if depth > 64 {
            return Err(Error::Numerical(format!(
                "tail bound unreachable at tol {tol}"
            )));
        }
    }
    if irr.max_degree < depth {
        return Err(Error::OutOfRange(format!(
            "irreducible table depth {} is below the certified cutoff {depth}",
            irr.max_degree
        )));
    }
    let mut value = Complex64::new(1.0, 0.0);
    let mut term_err = 0.0;
    for prime in irr.iter_sorted() {
        let dp = prime.degree().unwrap_or(0);
        if dp == 0 {
            continue;
        }
        if dp > depth {
            break;
        }
        let root = match chi.value(prime) {
            CharacterValue::Zero => continue,
            CharacterValue::Root(r) => Some(r),
        };
        let lf = local_factor_at_norm(q.powi(dp as i32), root, s, k, 256)?;
        value *= Complex64::new(1.0, 0.0) + lf.value;
        term_err += lf.truncation_error;
    }
    let tail = 4.0 * ratio.powi(depth as i32 + 1) / (1.0 - ratio) + term_err;
    if tail > tol {
        return Err(Error::Numerical(format!(
            "Euler product tail {tail:.3e} exceeds tolerance {tol:.3e}"
        )));
    }
    Ok((value, tail))
}

/// Σ_{f monic, deg f = n} χ(f) in double-double precision, for the
/// cancellation-sensitive identity assembly.
fn char_sum_by_degree_dd(chi: &FFCharacter, n: usize) -> DdC {
    let group = chi.group();
    let p = group.p();
    let deg_m = group.deg_modulus();
    if deg_m == 0 {
        return DdC::real(Dd::from((p as f64).powi(n as i32)));
    }
    if n < deg_m {
        let lo = (p as u64).pow(n as u32);
        let mut acc = DdC::ZERO;
        for code in lo..2 * lo {
            if let CharacterValue::Root(r) = chi.value_at_code(code) {
                acc = acc.add(dd_root_of_unity(r.numerator(), r.denominator()));
            }
        }
        acc
    } else if chi.is_principal() {
        let mult = (p as f64).powi((n - deg_m) as i32);
        DdC::real(Dd::from(group.phi() as f64 * mult))
    } else {
        DdC::ZERO
    }
}

/// 1/L_q(ks−k,χ₀) in closed form:
/// (1 − q^(k+1)·u^k) · ∏_{P|𝔪} Σ_j q^(k·deg P·j) u^(k·deg P·j),
/// with exact integer coefficients.
fn principal_lk_inverse(
    modulus: &Poly,
    p: u64,
    k: u32,
    degree: usize,
) -> Result<Vec<DdC>> {
    let mut acc = vec![0i128; degree + 1];
    acc[0] = 1;
    let deg_m = modulus.degree().unwrap_or(0);
    if deg_m > 0 {
        let table = build_irreducibles(p, deg_m)?;
        let fac = ff_factorize(modulus, &table)?;
        for (prime, _) in &fac.factors {
            let step = k as usize * prime.degree().unwrap_or(0);
            let ratio = (p as i128).pow(step as u32);
            // Multiply by the geometric series Σ_j ratio^j · u^(step·j).
            let mut next = vec![0i128; degree + 1];
            for (i, &a) in acc.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let mut weight = 1i128;
                let mut e = i;
                loop {
                    next[e] += a * weight;
                    e += step;
                    if e > degree {
                        break;
                    }
                    weight *= ratio;
                }
            }
            acc = next;
        }
    }
    // Multiply by 1 − q^(k+1)·u^k.
    let qk1 = (p as i128).pow(k + 1);
    let mut out = vec![0i128; degree + 1];
    for (i, &a) in acc.iter().enumerate() {
        out[i] += a;
        if i + k as usize <= degree {
            out[i + k as usize] -= a * qk1;
        }
    }
    const EXACT_F64: i128 = 1 << 53;
    for &c in &out {
        if c.abs() >= EXACT_F64 {
            return Err(Error::Numerical(
                "closed-form L-inverse coefficient exceeds exact f64 range".into(),
            ));
        }
    }
    Ok(out
        .into_iter()
        .map(|c| DdC::real(Dd::from(c as f64)))
        .collect())
}

/// Coefficientwise check of the factorization
/// Σ χ(f)𝔉_k(f) u^{deg f} = L_q(s−1,χ)/L_q(ks−k,χ^k) · 𝓜_k(s,χ):
/// returns max_n |A_n − RHS_n| / max(1, |A_n|).
///
/// The left side comes from the exact exponent buckets; the right side is
/// assembled in double-double with exact integer coefficients for the
/// principal 1/L factor, so coefficients that vanish by symmetry agree to
/// far below the 1e−8 gate instead of drowning in cancellation noise.
pub fn series_identity_check(
    chi: &FFCharacter,
    k: u32,
    weights: &DegreeWeights,
    irr: &IrreducibleTable,
) -> Result<f64> {
    if weights.k != k {
        return Err(Error::InvalidArgument(
            "weight table was built for a different k".into(),
        ));
    }
    if chi.modulus() != &weights.modulus {
        return Err(Error::InvalidArgument(
            "character modulus differs from the weight table".into(),
        ));
    }
    let q = chi.group().p();
    let d = weights.n_max;
    let lhs = twisted_degree_sums(weights, chi)?;
    let qf = q as f64;

    // (i) L_q(s−1,χ): the degree-n sum times q^n (exact powers).
    let shifted: Vec<DdC> = (0..=d)
        .map(|n| char_sum_by_degree_dd(chi, n).mul_dd(Dd::from(qf.powi(n as i32))))
        .collect();

    // (ii) 1/L_q(ks−k,χ^k).
    let chik = chi.pow(k as u64);
    let lk_inv: Vec<DdC> = if chik.is_principal() {
        principal_lk_inverse(&weights.modulus, q, k, d)?
    } else {
        // Small polynomial; invert by the recurrence (constant term 1).
        let mut lk = vec![DdC::ZERO; d + 1];
        let mut n = 0usize;
        while k as usize * n <= d {
            lk[k as usize * n] = char_sum_by_degree_dd(&chik, n)
                .mul_dd(Dd::from(qf.powi((k as usize * n) as i32)));
            n += 1;
        }
        let mut inv = vec![DdC::ZERO; d + 1];
        inv[0] = DdC::ONE;
        for e in 1..=d {
            let mut acc = DdC::ZERO;
            for j in 1..=e {
                if lk[j] != DdC::ZERO {
                    acc = acc.add(lk[j].mul(inv[e - j]));
                }
            }
            inv[e] = acc.sub(DdC::ZERO).mul_dd(Dd::from(-1.0));
        }
        inv
    };

    // (iii) 𝓜_k(s,χ) in dd.
    let m_series = euler_m_series_dd(k, chi, d, irr)?;

    let mut worst = 0.0f64;
    for (n, &a) in lhs.iter().enumerate() {
        let mut acc = DdC::ZERO;
        for (i, &s) in shifted.iter().enumerate().take(n + 1) {
            if s == DdC::ZERO {
                continue;
            }
            for (j, &l) in lk_inv.iter().enumerate().take(n + 1 - i) {
                if l == DdC::ZERO {
                    continue;
                }
                let m = m_series[n - i - j];
                if m == DdC::ZERO {
                    continue;
                }
                acc = acc.add(s.mul(l).mul(m));
            }
        }
        let (re, im) = acc.value();
        let diff = (a - Complex64::new(re, im)).norm();
        worst = worst.max(diff / a.norm().max(1.0));
    }
    Ok(worst)
}

/// Main-term constant of the degree-bounded summatory and its empirical
/// companions.
#[derive(Debug, Clone, Serialize)]
pub struct MainTermReport {
    pub modulus: String,
    pub target: String,
    pub k: u32,
    pub phi: u64,
    pub m_k_2: f64,
    pub l_q_k: f64,
    pub euler_factor: f64,
    pub paper_constant: f64,
    pub tail_bound: f64,
    /// (N, 𝔖_k(N)/q^(2N))
    pub empirical_ratios: Vec<(usize, f64)>,
    /// (N, (𝔖_k(N) − paper_constant·q^(2N)) / q^(N(1+1/(2k))))
    pub normalized_errors: Vec<(usize, f64)>,
}

pub fn main_term_report(
    modulus: &Poly,
    target: &Poly,
    k: u32,
    n_lo: usize,
    n_hi: usize,
    irr: &IrreducibleTable,
    tol: f64,
) -> Result<MainTermReport> {
    if n_lo > n_hi {
        return Err(Error::InvalidArgument("empty degree range".into()));
    }
    let group = FFUnitGroup::new(modulus)?;
    let p = group.p();
    if target.gcd(group.modulus())?.degree() != Some(0) && group.deg_modulus() > 0 {
        return Err(Error::InvalidArgument(
            "target class must be coprime to the modulus".into(),
        ));
    }
    let chi0 = principal_ff_character(modulus)?;
    let (m_value, tail) = euler_m_value(k, &chi0, 2.0, tol, irr)?;

    // L_q(k,χ₀) = ζ_q(k)·∏_{P|𝔪}(1 − |P|^(−k)) in closed form, and the
    // main-term Euler factor ∏_{P|𝔪}(1 − 1/|P|).
    let qf = p as f64;
    let mut l_q_k = 1.0 / (1.0 - qf.powf(1.0 - k as f64));
    let mut euler_factor = 1.0;
    if group.deg_modulus() > 0 {
        let table = build_irreducibles(p, group.deg_modulus())?;
        let fac = ff_factorize(group.modulus(), &table)?;
        for (prime, _) in &fac.factors {
            let norm = prime.norm() as f64;
            l_q_k *= 1.0 - norm.powf(-(k as f64));
            euler_factor *= 1.0 - 1.0 / norm;
        }
    }
    let phi = group.phi();
    let paper_constant =
        m_value.re * euler_factor / (2.0 * phi as f64 * l_q_k * qf.ln());

    let weights = monic_weights(modulus, n_hi, &[k], irr)?;
    let summatory = summatory_from_weights(&weights[0], target);
    let mut empirical_ratios = Vec::new();
    let mut normalized_errors = Vec::new();
    let mut prefix = 0.0f64;
    for (n, layer) in summatory.per_degree.iter().enumerate() {
        prefix += layer;
        if n < n_lo || n > n_hi {
            continue;
        }
        let scale = qf.powi(2 * n as i32);
        empirical_ratios.push((n, prefix / scale));
        let err_scale = qf.powf(n as f64 * (1.0 + 1.0 / (2.0 * k as f64)));
        normalized_errors.push((n, (prefix - paper_constant * scale) / err_scale));
    }
    Ok(MainTermReport {
        modulus: group.modulus().to_string(),
        target: target.to_string(),
        k,
        phi,
        m_k_2: m_value.re,
        l_q_k,
        euler_factor,
        paper_constant,
        tail_bound: tail,
        empirical_ratios,
        normalized_errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::build_ff_characters;

    #[test]
    fn zeta_u_counts_monic_polynomials() {
        let z = zeta_u(2, 3);
        let got: Vec<f64> = z.coeffs.iter().map(|c| c.re).collect();
        assert_eq!(got, vec![1.0, 2.0, 4.0, 8.0]);
        assert_eq!(zeta_u(3, 2).coeff(2).re, 9.0);
        // At s = 2 the truncation approaches 1/(1 − q·q^(−2)) = q/(q−1).
        let z = zeta_u(2, 40);
        assert!((z.eval_real(0.25).re - 2.0).abs() < 1e-10);
    }

    #[test]
    fn char_sums_match_enumeration() {
        let m: Poly = "1,2,1@3".parse().unwrap();
        for chi in build_ff_characters(&m).unwrap() {
            for n in 0..=5usize {
                let direct = {
                    let lo = 3u64.pow(n as u32);
                    let (lo, hi) = if n == 0 { (1, 2) } else { (lo, 2 * lo) };
                    let mut acc = Complex64::new(0.0, 0.0);
                    for code in lo..hi {
                        acc += chi.value(&Poly::decode(3, code)).to_complex();
                    }
                    acc
                };
                let formula = char_sum_by_degree(&chi, n);
                assert!(
                    (direct - formula).norm() < 1e-9,
                    "n={n}: {direct} vs {formula}"
                );
            }
        }
    }

    #[test]
    fn l_poly_mod_x_over_f3_is_one() {
        let m: Poly = "0,1@3".parse().unwrap();
        let chars = build_ff_characters(&m).unwrap();
        let chi = chars.iter().find(|c| !c.is_principal()).unwrap();
        let l = l_polynomial(chi, 8).unwrap();
        assert_eq!(l.trimmed_degree(), 0);
        assert!((l.coeff(0).re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn l_poly_mod_x_squared_over_f3() {
        // Dual group is C_6. The two order-6 characters have |c₁| = √3;
        // the order-3 characters give 1 − u (a trivial zero at u = 1);
        // the quadratic character is induced mod X and gives 1.
        let m: Poly = "0,0,1@3".parse().unwrap();
        let chars = build_ff_characters(&m).unwrap();
        let mut degree_counts = std::collections::BTreeMap::new();
        for chi in chars.iter().filter(|c| !c.is_principal()) {
            let l = l_polynomial(chi, 8).unwrap();
            let c1 = l.coeff(1);
            match chi.order() {
                6 => {
                    assert!((c1.norm() - 3f64.sqrt()).abs() < 1e-12);
                    let report = rh_classify(&l).unwrap();
                    assert_eq!(report.classes, vec![RootClass::Critical]);
                }
                3 => {
                    assert!((c1 + Complex64::new(1.0, 0.0)).norm() < 1e-12);
                    let report = rh_classify(&l).unwrap();
                    assert_eq!(report.classes, vec![RootClass::UnitCircle]);
                }
                2 => assert_eq!(l.trimmed_degree(), 0),
                o => panic!("unexpected order {o}"),
            }
            *degree_counts.entry(l.trimmed_degree()).or_insert(0) += 1;
        }
        assert_eq!(degree_counts.get(&1), Some(&4));
        assert_eq!(degree_counts.get(&0), Some(&1));
    }

    #[test]
    fn principal_l_counts_coprime_monics() {
        // mod X over F_2: (1−u)/(1−2u) = 1 + u + 2u² + 4u³ + …
        let m: Poly = "0,1@2".parse().unwrap();
        let chars = build_ff_characters(&m).unwrap();
        let l = l_polynomial(&chars[0], 5).unwrap();
        let got: Vec<f64> = l.coeffs.iter().map(|c| c.re).collect();
        assert_eq!(got, vec![1.0, 1.0, 2.0, 4.0, 8.0, 16.0]);
    }

    #[test]
    fn constant_l_poly_passes_classification() {
        let one = USeries::one(3);
        let report = rh_classify(&one).unwrap();
        assert!(report.roots.is_empty());
        assert_eq!(report.anomalous, 0);
        assert!(report.haselgrove_ok);
    }

    #[test]
    fn euler_m_series_structure() {
        let irr = build_irreducibles(2, 8).unwrap();
        let m = Poly::one(2);
        let chi0 = principal_ff_character(&m).unwrap();
        for k in [2u32, 3] {
            let series = euler_m_series(k, &chi0, 8, &irr).unwrap();
            assert!((series.coeff(0).re - 1.0).abs() < 1e-14);
            for n in 1..k as usize {
                assert!(series.coeff(n).norm() < 1e-14, "k={k} n={n}");
            }
        }
    }

    #[test]
    fn euler_m_value_agrees_with_series_eval() {
        let irr = build_irreducibles(2, 16).unwrap();
        let m = Poly::one(2);
        let chi0 = principal_ff_character(&m).unwrap();
        let (value, tail) = euler_m_value(2, &chi0, 2.0, 1e-10, &irr).unwrap();
        assert!(tail <= 1e-10);
        // Series terms at u = 1/4 decay like q^(−n(2−1/k−1/k²)) = 2^(−1.25n).
        let series = euler_m_series(2, &chi0, 28, &irr).unwrap();
        let via_series = series.eval_real(0.25);
        assert!(
            (value.re - via_series.re).abs() < 1e-7,
            "{} vs {}",
            value.re,
            via_series.re
        );
        assert!(value.re > 1.0);
    }

    #[test]
    fn identity_check_small() {
        let irr = build_irreducibles(2, 10).unwrap();
        for ms in ["1@2", "0,1@2", "1,1,1@2"] {
            let m: Poly = ms.parse().unwrap();
            for k in [2u32, 3] {
                let weights = monic_weights(&m, 10, &[k], &irr).unwrap();
                for chi in build_ff_characters(&m).unwrap() {
                    let disc = series_identity_check(&chi, k, &weights[0], &irr).unwrap();
                    assert!(disc <= 1e-9, "m={ms} k={k}: {disc:.3e}");
                }
            }
        }
    }

    #[test]
    fn main_term_euler_factor() {
        let irr = build_irreducibles(3, 9).unwrap();
        let m: Poly = "0,0,1@3".parse().unwrap();
        let g = Poly::one(3);
        let r = main_term_report(&m, &g, 2, 4, 8, &irr, 1e-9).unwrap();
        // ∏_{P|X²}(1 − 1/|X|) = 2/3.
        assert!((r.euler_factor - 2.0 / 3.0).abs() < 1e-14);
        assert!(r.paper_constant > 0.0);
        assert_eq!(r.empirical_ratios.len(), 5);
    }
}
