//! Exact scalars over the rationals and over prime fields GF(p).
//!
//! Every value carries its [`Field`] so that mixing elements of different
//! fields is detected instead of silently producing garbage. Rationals are
//! arbitrary-precision fractions kept in lowest terms with a positive
//! denominator; prime-field elements are residues in `[0, p)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest admissible modulus (exclusive). Residue products then fit in `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Rationals,
    Prime(u32),
}

/// Descriptor of the base field: either ℚ or GF(p) for a prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field(Kind);

impl Field {
    pub const fn rationals() -> Self {
        Field(Kind::Rationals)
    }

    /// GF(p). Primality is checked by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field(Kind::Prime(p as u32)))
    }

    pub fn modulus(&self) -> Option<u32> {
        match self.0 {
            Kind::Rationals => None,
            Kind::Prime(p) => Some(p),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    /// The image of an integer in this field.
    pub fn from_i64(&self, v: i64) -> Scalar {
        let value = match self.0 {
            Kind::Rationals => Value::Rational(BigRational::from_integer(BigInt::from(v))),
            Kind::Prime(p) => Value::Residue(v.rem_euclid(p as i64) as u32),
        };
        Scalar { field: *self, value }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        let value = match self.0 {
            Kind::Rationals => Value::Rational(BigRational::from_integer(v.clone())),
            Kind::Prime(p) => {
                let r = ((v % p) + p) % p;
                Value::Residue(r.to_u32().expect("residue below modulus"))
            }
        };
        Scalar { field: *self, value }
    }

    /// The fraction `num/den`. Over GF(p) the denominator is inverted.
    pub fn fraction(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_i64(num).checked_div(&self.from_i64(den))
    }

    /// Parse a scalar token: integers everywhere, `a/b` fractions only over ℚ.
    pub fn parse_scalar(&self, token: &str) -> Result<Scalar> {
        let token = token.trim();
        let bad = || Error::BadScalar {
            token: token.to_string(),
            field: *self,
        };
        match self.0 {
            Kind::Rationals => {
                let (num, den) = match token.split_once('/') {
                    Some((n, d)) => (parse_int(n).ok_or_else(bad)?, parse_int(d).ok_or_else(bad)?),
                    None => (parse_int(token).ok_or_else(bad)?, BigInt::one()),
                };
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Ok(Scalar {
                    field: *self,
                    value: Value::Rational(BigRational::new(num, den)),
                })
            }
            Kind::Prime(_) => Ok(self.from_bigint(&parse_int(token).ok_or_else(bad)?)),
        }
    }
}

fn parse_int(s: &str) -> Option<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s.strip_prefix('+').unwrap_or(s)).ok()
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Rationals => write!(f, "Q"),
            Kind::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// `Q` or `GF(p)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::rationals());
        }
        let inner = s
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::BadField(s.to_string()))?;
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| Error::BadField(s.to_string()))?;
        Field::prime(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Rational(BigRational),
    Residue(u32),
}

/// An exact field element tagged with its field.
///
/// Equality is structural on the canonical representation, so two scalars
/// compare equal exactly when they denote the same element of the same field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    field: Field,
    value: Value,
}

impl Scalar {
    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_zero(),
            Value::Residue(v) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_one(),
            Value::Residue(v) => *v == 1,
        }
    }

    /// The rational value, if this is an element of ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            Value::Residue(_) => None,
        }
    }

    /// The canonical residue in `[0, p)`, if this is an element of GF(p).
    pub fn residue(&self) -> Option<u32> {
        match self.value {
            Value::Rational(_) => None,
            Value::Residue(v) => Some(v),
        }
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFields(self.field, other.field))
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.add_unchecked(&other.neg_ref()))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let value = match &self.value {
            Value::Rational(r) => Value::Rational(r.recip()),
            Value::Residue(v) => {
                let p = self.field.modulus().expect("residue has a modulus");
                Value::Residue(pow_mod(*v as u64, p as u64 - 2, p as u64) as u32)
            }
        };
        Ok(Scalar {
            field: self.field,
            value,
        })
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    fn neg_ref(&self) -> Scalar {
        let value = match &self.value {
            Value::Rational(r) => Value::Rational(-r),
            Value::Residue(v) => {
                let p = self.field.modulus().expect("residue has a modulus");
                Value::Residue(if *v == 0 { 0 } else { p - v })
            }
        };
        Scalar {
            field: self.field,
            value,
        }
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Value::Residue(a), Value::Residue(b)) => {
                let p = self.field.modulus().expect("residue has a modulus") as u64;
                Value::Residue(((*a as u64 + *b as u64) % p) as u32)
            }
            _ => unreachable!("field tags agree"),
        };
        Scalar {
            field: self.field,
            value,
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Value::Residue(a), Value::Residue(b)) => {
                let p = self.field.modulus().expect("residue has a modulus") as u64;
                Value::Residue(((*a as u64 * *b as u64) % p) as u32)
            }
            _ => unreachable!("field tags agree"),
        };
        Scalar {
            field: self.field,
            value,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

// Operator forms panic on mixed fields. Matrix routines check the field once
// up front and then use these; public callers wanting a `Result` use the
// `checked_*` methods.

fn expect_same(a: &Scalar, b: &Scalar) {
    if a.field != b.field {
        panic!("{}", Error::MixedFields(a.field, b.field));
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        expect_same(self, rhs);
        self.add_unchecked(rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        expect_same(self, rhs);
        self.add_unchecked(&rhs.neg_ref())
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        expect_same(self, rhs);
        self.mul_unchecked(rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

/// Token form: `-3`, `2/5` over ℚ; the canonical residue over GF(p).
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Value::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Value::Residue(v) => write!(f, "{v}"),
        }
    }
}

impl Scalar {
    /// `true` for rationals with a negative value; residues are never negative.
    pub fn is_negative(&self) -> bool {
        matches!(&self.value, Value::Rational(r) if r.is_negative())
    }
}
