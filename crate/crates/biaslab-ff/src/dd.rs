//! Double-double arithmetic for the cancellation-heavy series algebra.
//!
//! The series-identity comparison subtracts convolutions whose terms are
//! up to ~10^13 while the true coefficient can be exactly zero; plain f64
//! leaves ~1e−8 of noise there. Carrying coefficients as unevaluated
//! (hi, lo) pairs pushes the arithmetic error to ~1e−30 of the term
//! magnitudes. Only +, −, ×, integer roots, and square roots are needed.

/// An unevaluated sum hi + lo with |lo| ≤ ulp(hi)/2.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, f64::mul_add(a, b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let (p, e) = two_prod(self.hi, other);
        let e = e + self.lo * other;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn div(self, other: Dd) -> Dd {
        let q1 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q1));
        let q2 = r.hi / other.hi;
        let r2 = r.sub(other.mul_f64(q2));
        let q3 = r2.hi / other.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::from(q3))
    }

    pub fn powi(self, mut e: u32) -> Dd {
        let mut acc = Dd::ONE;
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        acc
    }

    /// x^(1/e) for positive x by Newton iteration in dd.
    pub fn root(x: f64, e: u32) -> Dd {
        assert!(x > 0.0 && e >= 1);
        if e == 1 {
            return Dd::from(x);
        }
        let mut r = Dd::from(x.powf(1.0 / e as f64));
        let target = Dd::from(x);
        for _ in 0..3 {
            // r -= (r^e - x) / (e · r^(e-1))
            let re1 = r.powi(e - 1);
            let f = re1.mul(r).sub(target);
            r = r.sub(f.div(re1.mul_f64(e as f64)));
        }
        r
    }

    pub fn sqrt(x: f64) -> Dd {
        Dd::root(x, 2)
    }
}

/// Complex double-double.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DdC {
    pub re: Dd,
    pub im: Dd,
}

impl DdC {
    pub const ZERO: DdC = DdC {
        re: Dd::ZERO,
        im: Dd::ZERO,
    };
    pub const ONE: DdC = DdC {
        re: Dd::ONE,
        im: Dd::ZERO,
    };

    pub fn real(x: Dd) -> DdC {
        DdC { re: x, im: Dd::ZERO }
    }

    pub fn from_f64(re: f64, im: f64) -> DdC {
        DdC {
            re: Dd::from(re),
            im: Dd::from(im),
        }
    }

    pub fn value(self) -> (f64, f64) {
        (self.re.value(), self.im.value())
    }

    #[inline]
    pub fn add(self, o: DdC) -> DdC {
        DdC {
            re: self.re.add(o.re),
            im: self.im.add(o.im),
        }
    }

    #[inline]
    pub fn sub(self, o: DdC) -> DdC {
        DdC {
            re: self.re.sub(o.re),
            im: self.im.sub(o.im),
        }
    }

    #[inline]
    pub fn mul(self, o: DdC) -> DdC {
        DdC {
            re: self.re.mul(o.re).sub(self.im.mul(o.im)),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn mul_dd(self, s: Dd) -> DdC {
        DdC {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    pub fn norm_f64(self) -> f64 {
        let (re, im) = self.value();
        (re * re + im * im).sqrt()
    }
}

/// exp(2πi·num/den) in dd where the angle allows an algebraic form:
/// denominators dividing 12 or 8 use √2/2, √3/2 and halves; anything
/// else falls back to f64 trigonometry promoted to dd.
pub fn dd_root_of_unity(num: u64, den: u64) -> DdC {
    let g = {
        let mut a = num.max(1);
        let mut b = den;
        while b != 0 {
            (a, b) = (b, a % b);
        }
        if num == 0 {
            den
        } else {
            a
        }
    };
    let (num, den) = (num / g, den / g);
    let half = Dd::from(0.5);
    let s3h = Dd::sqrt(3.0).mul(half); // √3/2
    let s2h = Dd::sqrt(2.0).mul(half); // √2/2
    let table_12 = |twelfths: u64| -> DdC {
        // cos/sin at multiples of π/6.
        let quadrant = [
            (Dd::ONE, Dd::ZERO),
            (s3h, half),
            (half, s3h),
            (Dd::ZERO, Dd::ONE),
            (half.neg(), s3h),
            (s3h.neg(), half),
            (Dd::ONE.neg(), Dd::ZERO),
            (s3h.neg(), half.neg()),
            (half.neg(), s3h.neg()),
            (Dd::ZERO, Dd::ONE.neg()),
            (half, s3h.neg()),
            (s3h, half.neg()),
        ];
        let (re, im) = quadrant[(twelfths % 12) as usize];
        DdC { re, im }
    };
    if 12 % den == 0 {
        return table_12(num * (12 / den));
    }
    if den == 8 {
        let eighth = [
            (Dd::ONE, Dd::ZERO),
            (s2h, s2h),
            (Dd::ZERO, Dd::ONE),
            (s2h.neg(), s2h),
            (Dd::ONE.neg(), Dd::ZERO),
            (s2h.neg(), s2h.neg()),
            (Dd::ZERO, Dd::ONE.neg()),
            (s2h, s2h.neg()),
        ];
        let (re, im) = eighth[(num % 8) as usize];
        return DdC { re, im };
    }
    let theta = 2.0 * std::f64::consts::PI * num as f64 / den as f64;
    DdC::from_f64(theta.cos(), theta.sin())
}
