//! Exact coefficient fields: arbitrary-precision rationals and prime fields F_p.
//!
//! A `FieldSpec` is runtime data (it comes from module files), so scalars are a
//! dynamic enum rather than a type parameter. Every operation keeps scalars in
//! canonical form: rationals in lowest terms with positive denominator (the
//! `BigRational` invariant), prime-field elements reduced into `[0, p)`.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp(x) => write!(f, "{x}"),
        }
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all u64 inputs with this base set.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'base: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(_) => Scalar::Fp(1),
        }
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::from(BigInt::from(x))),
            FieldSpec::Prime(p) => Scalar::Fp((x.rem_euclid(*p as i64)) as u64),
        }
    }

    fn pair<'a>(&self, a: &'a Scalar, b: &'a Scalar) -> (&'a Scalar, &'a Scalar) {
        debug_assert!(self.owns(a) && self.owns(b), "scalar from a different field");
        (a, b)
    }

    pub fn owns(&self, s: &Scalar) -> bool {
        match (self, s) {
            (FieldSpec::Rational, Scalar::Rat(_)) => true,
            (FieldSpec::Prime(p), Scalar::Fp(x)) => x < p,
            _ => false,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.pair(a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                let p = self.modulus();
                Scalar::Fp((x + y) % p)
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.pair(a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x - y),
            (Scalar::Fp(x), Scalar::Fp(y)) => {
                let p = self.modulus();
                Scalar::Fp((x + p - y) % p)
            }
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match self.pair(a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp(mulmod(*x, *y, self.modulus())),
            _ => unreachable!(),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(-x),
            Scalar::Fp(x) => {
                let p = self.modulus();
                Scalar::Fp(if *x == 0 { 0 } else { p - x })
            }
        }
    }

    /// Multiplicative inverse. Panics on zero: callers must pivot on nonzero entries.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match a {
            Scalar::Rat(x) => Scalar::Rat(x.recip()),
            Scalar::Fp(x) => {
                let p = self.modulus();
                Scalar::Fp(powmod(*x, p - 2, p))
            }
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    fn modulus(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rational => panic!("rational field has no modulus"),
        }
    }

    /// Parses a canonical or liberal textual scalar: `a`, `-a`, `a/b`.
    /// Over F_p, `a/b` means `a * b^{-1} mod p` and any integer is reduced.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("malformed scalar {text:?}"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (text.trim(), None),
        };
        let n: BigInt = num.parse().map_err(|_| bad())?;
        let d: BigInt = match den {
            Some(d) => d.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {text:?}")));
        }
        match self {
            FieldSpec::Rational => Ok(Scalar::Rat(BigRational::new(n, d))),
            FieldSpec::Prime(p) => {
                let p_big = BigInt::from(*p);
                let rem = |x: &BigInt| -> u64 {
                    let m = x % &p_big;
                    let m = if m.is_negative() { m + &p_big } else { m };
                    u64::try_from(m).unwrap()
                };
                let dn = rem(&d);
                if dn == 0 {
                    return Err(Error::Parse(format!(
                        "denominator of {text:?} vanishes mod {p}"
                    )));
                }
                let inv = powmod(dn, p - 2, *p);
                Ok(Scalar::Fp(mulmod(rem(&n), inv, *p)))
            }
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Fp(x) => *x == 1,
        }
    }

    pub fn as_rational(&self) -> &BigRational {
        match self {
            Scalar::Rat(x) => x,
            Scalar::Fp(_) => panic!("prime-field scalar where a rational was expected"),
        }
    }
}
