//! Dirichlet characters modulo a polynomial 𝔪 over F_p.
//!
//! The unit group (F_p[X]/𝔪)* is enumerated outright (budget Φ ≤ 10^5),
//! decomposed by the shared greedy basis extraction, and characters carry
//! exponent vectors exactly as on the integer side. Residues are handled
//! through their base-p encodings.

use std::sync::Arc;

use num_complex::Complex64;

use biaslab_core::abelian::{self, AbelianBasis};
use biaslab_core::characters::{CharacterValue, RootOfUnity};
use biaslab_core::error::{Error, Result};

use crate::irreducible::{build_irreducibles, ff_factorize};
use crate::poly::Poly;

/// The unit group of F_p[X]/𝔪 with dlog tables keyed by encodings.
pub struct FFUnitGroup {
    p: u64,
    modulus: Poly,
    deg_m: usize,
    phi: u64,
    basis: AbelianBasis,
}

impl FFUnitGroup {
    pub fn new(modulus: &Poly) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::InvalidArgument("modulus must be nonzero".into()));
        }
        let p = modulus.characteristic();
        let (_, modulus) = modulus.monic();
        let deg_m = modulus.degree().unwrap_or(0);

        if deg_m == 0 {
            // Trivial modulus: one residue, every polynomial is a unit.
            let basis = abelian::decompose(&[0], 0, |_, _| 0);
            return Ok(FFUnitGroup {
                p,
                modulus,
                deg_m,
                phi: 1,
                basis,
            });
        }

        let residues = (p as u128).pow(deg_m as u32);
        if residues > 200_000 {
            return Err(Error::Budget(format!(
                "residue ring size {residues} exceeds the enumeration budget"
            )));
        }
        let mut units = Vec::new();
        for code in 0..residues as u64 {
            let f = Poly::decode(p, code);
            if f.gcd(&modulus)?.degree() == Some(0) {
                units.push(code);
            }
        }
        let phi = units.len() as u64;
        if phi > 100_000 {
            return Err(Error::Budget(format!(
                "Φ(𝔪) = {phi} exceeds the 10^5 unit-group budget"
            )));
        }
        // Cross-check against Φ(𝔪) = |𝔪|·∏_{P|𝔪}(1 − 1/|P|).
        let table = build_irreducibles(p, deg_m)?;
        let fac = ff_factorize(&modulus, &table)?;
        let mut expected = modulus.norm() as f64;
        for (prime, _) in &fac.factors {
            expected *= 1.0 - 1.0 / prime.norm() as f64;
        }
        if (expected.round() as u64) != phi {
            return Err(Error::Numerical(format!(
                "unit count {phi} disagrees with the Euler-product formula {expected}"
            )));
        }

        let m = modulus.clone();
        let op = move |a: u64, b: u64| -> u64 {
            Poly::decode(p, a)
                .mulmod(&Poly::decode(p, b), &m)
                .expect("modulus is nonzero")
                .encode()
        };
        let basis = abelian::decompose(&units, 1, op);
        Ok(FFUnitGroup {
            p,
            modulus,
            deg_m,
            phi,
            basis,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn deg_modulus(&self) -> usize {
        self.deg_m
    }

    pub fn phi(&self) -> u64 {
        self.phi
    }

    pub fn orders(&self) -> &[u64] {
        &self.basis.orders
    }

    /// Encoding of f mod 𝔪.
    pub fn reduce(&self, f: &Poly) -> u64 {
        if self.deg_m == 0 {
            return 0;
        }
        f.rem(&self.modulus).expect("modulus is nonzero").encode()
    }

    pub fn dlog(&self, code: u64) -> Option<&[u64]> {
        self.basis.dlog(code)
    }

    pub fn is_unit_code(&self, code: u64) -> bool {
        self.basis.contains(code)
    }
}

/// A character of (F_p[X]/𝔪)*, zero on non-coprime polynomials.
#[derive(Clone)]
pub struct FFCharacter {
    group: Arc<FFUnitGroup>,
    exponents: Vec<u64>,
}

impl std::fmt::Debug for FFCharacter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "χ(mod {}; exponents {:?})",
            self.group.modulus, self.exponents
        )
    }
}

impl PartialEq for FFCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.group.modulus == other.group.modulus && self.exponents == other.exponents
    }
}
impl Eq for FFCharacter {}

impl FFCharacter {
    pub fn group(&self) -> &Arc<FFUnitGroup> {
        &self.group
    }

    pub fn modulus(&self) -> &Poly {
        &self.group.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn value_at_code(&self, code: u64) -> CharacterValue {
        match self.group.dlog(code) {
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

    pub fn value(&self, f: &Poly) -> CharacterValue {
        if f.is_zero() {
            return CharacterValue::Zero;
        }
        self.value_at_code(self.group.reduce(f))
    }

    pub fn value_complex(&self, f: &Poly) -> Complex64 {
        self.value(f).to_complex()
    }

    pub fn pow(&self, k: u64) -> Self {
        let exponents = self
            .exponents
            .iter()
            .zip(self.group.orders())
            .map(|(&e, &ord)| e * (k % ord) % ord)
            .collect();
        FFCharacter {
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
        FFCharacter {
            group: Arc::clone(&self.group),
            exponents,
        }
    }

    pub fn order(&self) -> u64 {
        fn gcd(mut a: u64, mut b: u64) -> u64 {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        }
        self.exponents
            .iter()
            .zip(self.group.orders())
            .map(|(&e, &ord)| ord / gcd(e, ord).max(1))
            .fold(1, biaslab_core::characters::lcm)
    }

    /// True when χ is trivial on the constants F_p^*.
    pub fn is_even(&self) -> bool {
        let p = self.group.p;
        (1..p).all(|c| {
            let code = self.group.reduce(&Poly::constant(p, c));
            matches!(self.value_at_code(code), CharacterValue::Root(r) if r.is_one())
        })
    }
}

/// The full dual group, principal character first.
pub fn build_ff_characters(modulus: &Poly) -> Result<Vec<FFCharacter>> {
    let group = Arc::new(FFUnitGroup::new(modulus)?);
    let orders = group.orders().to_vec();
    let mut chars = Vec::with_capacity(group.phi() as usize);
    let mut exps = vec![0u64; orders.len()];
    loop {
        chars.push(FFCharacter {
            group: Arc::clone(&group),
            exponents: exps.clone(),
        });
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

pub fn principal_ff_character(modulus: &Poly) -> Result<FFCharacter> {
    let group = Arc::new(FFUnitGroup::new(modulus)?);
    let exponents = vec![0u64; group.orders().len()];
    Ok(FFCharacter { group, exponents })
}

/// Sign-change theorems need χ^k ≠ χ₀ for every non-principal χ; this
/// predicate reports whether a given order k is admissible mod 𝔪.
pub fn k_admissible(chars: &[FFCharacter], k: u32) -> bool {
    chars
        .iter()
        .filter(|c| !c.is_principal())
        .all(|c| !c.pow(k as u64).is_principal())
}
