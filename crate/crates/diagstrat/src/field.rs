//! Exact ground-field arithmetic: rational numbers or a prime field GF(p).
//!
//! Every coefficient in the engine is a [`FieldElement`]; there is no floating
//! point anywhere. Elements of different fields must never meet in one
//! expression; arithmetic panics if they do, since a config fixes the field
//! once and for all.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Q(BigRational),
    /// Residue `v` in GF(p), `0 <= v < p`, `p` an odd prime (or 2 outside
    /// Brauer-flavor configs).
    Fp { p: u64, v: u64 },
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl FieldElement {
    pub fn zero_of(char_p: u64) -> Self {
        if char_p == 0 {
            FieldElement::Q(BigRational::zero())
        } else {
            FieldElement::Fp { p: char_p, v: 0 }
        }
    }

    pub fn one_of(char_p: u64) -> Self {
        if char_p == 0 {
            FieldElement::Q(BigRational::one())
        } else {
            FieldElement::Fp { p: char_p, v: 1 }
        }
    }

    pub fn from_integer(char_p: u64, n: i64) -> Self {
        if char_p == 0 {
            FieldElement::Q(BigRational::from_integer(BigInt::from(n)))
        } else {
            let p = char_p as i128;
            let v = ((n as i128 % p) + p) % p;
            FieldElement::Fp { p: char_p, v: v as u64 }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldElement::Q(_) => 0,
            FieldElement::Fp { p, .. } => *p,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Q(r) => r.is_zero(),
            FieldElement::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Q(r) => r.is_one(),
            FieldElement::Fp { v, .. } => *v == 1,
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::UnsupportedField("division by zero".into()));
        }
        Ok(match self {
            FieldElement::Q(r) => FieldElement::Q(r.recip()),
            FieldElement::Fp { p, v } => FieldElement::Fp { p: *p, v: mod_inv(*v, *p) },
        })
    }

    /// `self + n·1` for an integer `n`; the basic shift used by content
    /// arithmetic.
    pub fn add_int(&self, n: i64) -> Self {
        self.clone() + FieldElement::from_integer(self.characteristic(), n)
    }

    /// Whether `self` lies in the prime ring `Z·1` of the field, and if so a
    /// canonical integer representative. Over Q this means an integer; over
    /// GF(p) every element qualifies (representative in `0..p`).
    pub fn as_prime_integer(&self) -> Option<i64> {
        match self {
            FieldElement::Q(r) => {
                if r.denom().is_one() {
                    // desk-scale values fit i64
                    r.numer().try_into().ok()
                } else {
                    None
                }
            }
            FieldElement::Fp { v, .. } => Some(*v as i64),
        }
    }

    /// Parse "a/b", "a", or "-a/b" into a field element of the given
    /// characteristic.
    pub fn parse(s: &str, char_p: u64) -> Result<Self> {
        let s = s.trim();
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let num: BigInt = num_s
            .parse()
            .map_err(|_| Error::Config(format!("bad rational literal '{s}'")))?;
        let den: BigInt = den_s
            .parse()
            .map_err(|_| Error::Config(format!("bad rational literal '{s}'")))?;
        if den.is_zero() {
            return Err(Error::Config(format!("zero denominator in '{s}'")));
        }
        if char_p == 0 {
            Ok(FieldElement::Q(BigRational::new(num, den)))
        } else {
            let p = BigInt::from(char_p);
            let rem = |x: &BigInt| -> u64 {
                let r = ((x % &p) + &p) % &p;
                u64::try_from(r).unwrap()
            };
            let d = rem(&den);
            if d == 0 {
                return Err(Error::Config(format!("'{s}' has no meaning in GF({char_p})")));
            }
            let v = (rem(&num) as u128 * mod_inv(d, char_p) as u128 % char_p as u128) as u64;
            Ok(FieldElement::Fp { p: char_p, v })
        }
    }

    /// Reduced "p/q" form used in all serialized output.
    pub fn to_ratio_string(&self) -> String {
        match self {
            FieldElement::Q(r) => {
                if r.denom().is_one() {
                    format!("{}", r.numer())
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Fp { v, .. } => format!("{v}"),
        }
    }

    pub fn abs_q(&self) -> Self {
        match self {
            FieldElement::Q(r) => FieldElement::Q(r.abs()),
            other => other.clone(),
        }
    }
}

fn mod_inv(v: u64, p: u64) -> u64 {
    // p prime, v != 0: Fermat.
    mod_pow(v, p - 2, p)
}

fn mod_pow(b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut bb = b as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % p as u128;
        }
        bb = bb * bb % p as u128;
        e >>= 1;
    }
    acc as u64
}

macro_rules! binop {
    ($trait:ident, $fn:ident, $qop:tt, $fpop:expr) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $fn(self, rhs: FieldElement) -> FieldElement {
                match (self, rhs) {
                    (FieldElement::Q(a), FieldElement::Q(b)) => FieldElement::Q(a $qop b),
                    (FieldElement::Fp { p, v: a }, FieldElement::Fp { p: p2, v: b }) => {
                        assert_eq!(p, p2, "mixed prime fields");
                        FieldElement::Fp { p, v: $fpop(a, b, p) }
                    }
                    _ => panic!("mixed field arithmetic"),
                }
            }
        }
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $fn(self, rhs: &FieldElement) -> FieldElement {
                $trait::$fn(self.clone(), rhs.clone())
            }
        }
    };
}

binop!(Add, add, +, |a: u64, b: u64, p: u64| ((a as u128 + b as u128) % p as u128) as u64);
binop!(Sub, sub, -, |a: u64, b: u64, p: u64| ((a as u128 + p as u128 - b as u128) % p as u128) as u64);
binop!(Mul, mul, *, |a: u64, b: u64, p: u64| (a as u128 * b as u128 % p as u128) as u64);

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        self * rhs.inv().expect("division by zero")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Q(r) => FieldElement::Q(-r),
            FieldElement::Fp { p, v } => FieldElement::Fp { p, v: if v == 0 { 0 } else { p - v } },
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> FieldElement {
        FieldElement::parse(s, 0).unwrap()
    }

    #[test]
    fn rational_field_axioms_on_samples() {
        let xs = ["1/3", "-2/7", "5", "0", "9/4", "-11"];
        for a in xs.iter().map(|s| q(s)) {
            for b in xs.iter().map(|s| q(s)) {
                for c in xs.iter().map(|s| q(s)) {
                    assert_eq!(
                        (a.clone() + b.clone()) + c.clone(),
                        a.clone() + (b.clone() + c.clone())
                    );
                    assert_eq!(
                        a.clone() * (b.clone() + c.clone()),
                        a.clone() * b.clone() + a.clone() * c.clone()
                    );
                    assert_eq!(
                        (a.clone() * b.clone()) * c.clone(),
                        a.clone() * (b.clone() * c.clone())
                    );
                }
                if !b.is_zero() {
                    assert_eq!(
                        (a.clone() / b.clone()) * b.clone(),
                        a.clone(),
                        "inverse failed"
                    );
                }
            }
        }
    }

    #[test]
    fn gf_arithmetic() {
        let p = 7;
        for a in 0..p {
            let fa = FieldElement::Fp { p, v: a };
            if a != 0 {
                assert!((fa.clone() * fa.inv().unwrap()).is_one());
            }
            assert_eq!(
                fa.clone() + FieldElement::from_integer(p, -(a as i64)),
                FieldElement::zero_of(p)
            );
        }
        assert_eq!(FieldElement::parse("1/3", 7).unwrap(), FieldElement::Fp { p: 7, v: 5 });
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["1/3", "-2/7", "5", "0", "-11"] {
            let x = q(s);
            assert_eq!(q(&x.to_ratio_string()), x);
        }
        // unreduced input normalizes
        assert_eq!(q("2/6"), q("1/3"));
        assert_eq!(q("4/-2"), q("-2"));
    }

    #[test]
    fn prime_integer_detection() {
        assert_eq!(q("4").as_prime_integer(), Some(4));
        assert_eq!(q("-3").as_prime_integer(), Some(-3));
        assert_eq!(q("1/2").as_prime_integer(), None);
    }
}
