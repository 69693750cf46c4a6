//! Dirichlet characters mod q with exact root-of-unity values.
//!
//! A character is stored as an exponent vector against a basis of (ℤ/q)*;
//! its values are rational angles t/N, so conjugation, powers and products
//! are exact integer arithmetic. Complex floats are derived on demand.

use std::sync::Arc;

use num_complex::Complex64;

use crate::abelian::{self, AbelianBasis};
use crate::error::{Error, Result};

/// Exact root of unity exp(2πi·num/den), reduced with 0 ≤ num < den.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl RootOfUnity {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "denominator must be positive");
        let num = num % den;
        let g = gcd(num, den).max(1);
        RootOfUnity {
            num: num / g,
            den: den / g,
        }
    }

    pub fn one() -> Self {
        RootOfUnity { num: 0, den: 1 }
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Angle addition, exact.
    pub fn mul(self, other: Self) -> Self {
        let den = lcm(self.den, other.den);
        let num = (self.num * (den / self.den) + other.num * (den / other.den)) % den;
        RootOfUnity::new(num, den)
    }

    pub fn pow(self, k: u64) -> Self {
        RootOfUnity::new(self.num * (k % self.den), self.den)
    }

    pub fn conj(self) -> Self {
        RootOfUnity::new((self.den - self.num) % self.den, self.den)
    }

    /// Multiplicative order as a root of unity.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn to_complex(self) -> Complex64 {
        let theta = 2.0 * std::f64::consts::PI * self.num as f64 / self.den as f64;
        Complex64::new(theta.cos(), theta.sin())
    }
}

/// A character value: zero on non-units, an exact root of unity on units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CharacterValue {
    Zero,
    Root(RootOfUnity),
}

impl CharacterValue {
    pub fn is_zero(&self) -> bool {
        matches!(self, CharacterValue::Zero)
    }

    pub fn to_complex(self) -> Complex64 {
        match self {
            CharacterValue::Zero => Complex64::new(0.0, 0.0),
            CharacterValue::Root(r) => r.to_complex(),
        }
    }
}

/// The unit group (ℤ/q)* with a generator basis and brute-force dlogs.
///
/// Practical for q up to ~10^6; the basis comes from greedy maximal-order
/// extraction inside each Sylow subgroup.
pub struct UnitGroupZ {
    q: u64,
    phi: u64,
    basis: AbelianBasis,
}

impl UnitGroupZ {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be ≥ 1".into()));
        }
        if q > 10_000_000 {
            return Err(Error::Budget(format!(
                "unit group enumeration for q={q} exceeds the 10^7 budget"
            )));
        }
        if q == 1 {
            // The single residue 0 is the unit of the trivial ring.
            let basis = abelian::decompose(&[0], 0, |_, _| 0);
            return Ok(UnitGroupZ { q, phi: 1, basis });
        }
        let units: Vec<u64> = (1..q).filter(|&x| gcd(x, q) == 1).collect();
        let phi = units.len() as u64;
        let basis = abelian::decompose(&units, 1, move |a, b| a * b % q);
        Ok(UnitGroupZ { q, phi, basis })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn generators(&self) -> &[u64] {
        &self.basis.generators
    }

    pub fn orders(&self) -> &[u64] {
        &self.basis.orders
    }

    /// Exponent vector of a residue, or None off the unit group.
    pub fn dlog(&self, n: u64) -> Option<&[u64]> {
        self.basis.dlog(n % self.q)
    }
}

/// Dirichlet character mod q as an exponent vector over the group basis.
#[derive(Clone)]
pub struct DirichletCharacter {
    group: Arc<UnitGroupZ>,
    exponents: Vec<u64>,
}

impl std::fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "χ(mod {}; exponents {:?})", self.group.q, self.exponents)
    }
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.q == other.group.q && self.exponents == other.exponents
    }
}
impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.group.q
    }

    pub fn group(&self) -> &Arc<UnitGroupZ> {
        &self.group
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// χ(n): exact root of unity on units, zero elsewhere.
    pub fn value(&self, n: u64) -> CharacterValue {
        match self.group.dlog(n) {
            None => CharacterValue::Zero,
            Some(v) => {
                let mut angle = RootOfUnity::one();
                for (i, &vi) in v.iter().enumerate() {
                    let ord = self.group.basis.orders[i];
                    let t = self.exponents[i] % ord * (vi % ord) % ord;
                    angle = angle.mul(RootOfUnity::new(t, ord));
                }
                CharacterValue::Root(angle)
            }
        }
    }

    pub fn value_complex(&self, n: u64) -> Complex64 {
        self.value(n).to_complex()
    }

    /// χ^k by exact exponent arithmetic; k = 0 gives the principal character.
    pub fn pow(&self, k: u64) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(self.group.orders())
            .map(|(&e, &ord)| e * (k % ord) % ord)
            .collect();
        DirichletCharacter {
            group: Arc::clone(&self.group),
            exponents,
        }
    }

    pub fn conjugate(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(self.group.orders())
            .map(|(&e, &ord)| (ord - e) % ord)
            .collect();
        DirichletCharacter {
            group: Arc::clone(&self.group),
            exponents,
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.group.q != other.group.q {
            return Err(Error::InvalidArgument(
                "cannot multiply characters of different moduli".into(),
            ));
        }
        let exponents = self
            .exponents
            .iter()
            .zip(other.exponents.iter())
            .zip(self.group.orders())
            .map(|((&a, &b), &ord)| (a + b) % ord)
            .collect();
        Ok(DirichletCharacter {
            group: Arc::clone(&self.group),
            exponents,
        })
    }

    /// Order of χ in the dual group.
    pub fn order(&self) -> u64 {
        self.exponents
            .iter()
            .zip(self.group.orders())
            .map(|(&e, &ord)| ord / gcd(e, ord).max(1))
            .fold(1, lcm)
    }
}

/// All φ(q) characters mod q; the principal character comes first.
pub fn build_character_group(q: u64) -> Result<Vec<DirichletCharacter>> {
    let group = Arc::new(UnitGroupZ::new(q)?);
    let orders = group.orders().to_vec();
    let mut chars = Vec::with_capacity(group.phi() as usize);
    let mut exps = vec![0u64; orders.len()];
    loop {
        chars.push(DirichletCharacter {
            group: Arc::clone(&group),
            exponents: exps.clone(),
        });
        // Mixed-radix increment; terminates after ∏ orders characters.
        let mut i = 0;
        loop {
            if i == orders.len() {
                return Ok(chars);
            }
            exps[i] += 1;
            if exps[i] < orders[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

pub fn principal_character(q: u64) -> Result<DirichletCharacter> {
    let group = Arc::new(UnitGroupZ::new(q)?);
    let exponents = vec![0u64; group.orders().len()];
    Ok(DirichletCharacter { group, exponents })
}

/// (1/φ(q)) Σ_χ χ̄(a) χ(n): 1 on n ≡ a (mod q), 0 otherwise.
pub fn orthogonality_indicator(q: u64, a: u64, n: u64) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::InvalidArgument("modulus must be ≥ 1".into()));
    }
    if q > 1 && gcd(a % q, q) != 1 {
        return Err(Error::InvalidArgument(format!(
            "residue {a} is not a unit mod {q}"
        )));
    }
    let chars = build_character_group(q)?;
    let phi = chars.len() as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for chi in &chars {
        sum += chi.conjugate().value_complex(a) * chi.value_complex(n);
    }
    Ok(sum / phi)
}
