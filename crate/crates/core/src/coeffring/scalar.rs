//! Exact scalars: integers, rationals, 2-local rationals and elements of the
//! Eisenstein field `Q(zeta3)`.
//!
//! Arithmetic between different kinds promotes to the larger kind in the
//! chain `Integer < TwoLocal < Rational < Eisenstein`. Equality is by value,
//! so `Integer(3) == Rational(3/1)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::CoeffError;

/// An element of `Q(zeta)` with `zeta^2 + zeta + 1 = 0`, stored as `re + zeta * im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Eisenstein {
    pub re: BigRational,
    pub zeta: BigRational,
}

impl Eisenstein {
    pub fn new(re: BigRational, zeta: BigRational) -> Self {
        Self { re, zeta }
    }

    pub fn zeta() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.zeta.is_zero()
    }

    /// Field norm `a^2 - ab + b^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re - &self.re * &self.zeta + &self.zeta * &self.zeta
    }

    /// Galois conjugate: `zeta -> zeta^2 = -1 - zeta`.
    pub fn conj(&self) -> Self {
        Self::new(&self.re - &self.zeta, -&self.zeta)
    }

    fn add(&self, other: &Self) -> Self {
        Self::new(&self.re + &other.re, &self.zeta + &other.zeta)
    }

    fn mul(&self, other: &Self) -> Self {
        // (a + b z)(c + d z) = ac + (ad + bc) z + bd z^2, z^2 = -1 - z
        let bd = &self.zeta * &other.zeta;
        let re = &self.re * &other.re - &bd;
        let zeta = &self.re * &other.zeta + &self.zeta * &other.re - bd;
        Self::new(re, zeta)
    }

    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(Self::new(c.re / &n, c.zeta / n))
    }
}

/// Exact coefficient. See the module docs for the promotion rules.
#[derive(Clone, Debug)]
pub enum Scalar {
    Integer(BigInt),
    TwoLocal(BigRational),
    Rational(BigRational),
    Eisenstein(Eisenstein),
}

/// Kind tag, ordered by promotion rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarKind {
    Integer,
    TwoLocal,
    Rational,
    Eisenstein,
}

fn is_odd(n: &BigInt) -> bool {
    n.is_odd()
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Integer(BigInt::zero())
    }

    pub fn one() -> Self {
        Scalar::Integer(BigInt::one())
    }

    pub fn int(n: i64) -> Self {
        Scalar::Integer(BigInt::from(n))
    }

    pub fn rational(num: i64, den: i64) -> Result<Self, CoeffError> {
        if den == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Scalar::Rational(BigRational::new(num.into(), den.into())))
    }

    /// A 2-local rational; the reduced denominator must be odd.
    pub fn two_local(num: i64, den: i64) -> Result<Self, CoeffError> {
        if den == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        Self::two_local_from(BigRational::new(num.into(), den.into()))
    }

    pub fn two_local_from(q: BigRational) -> Result<Self, CoeffError> {
        if is_odd(q.denom()) {
            Ok(Scalar::TwoLocal(q))
        } else {
            Err(CoeffError::NotTwoLocal(q.to_string()))
        }
    }

    pub fn zeta3() -> Self {
        Scalar::Eisenstein(Eisenstein::zeta())
    }

    pub fn eisenstein(re: BigRational, zeta: BigRational) -> Self {
        Scalar::Eisenstein(Eisenstein::new(re, zeta))
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            Scalar::Integer(_) => ScalarKind::Integer,
            Scalar::TwoLocal(_) => ScalarKind::TwoLocal,
            Scalar::Rational(_) => ScalarKind::Rational,
            Scalar::Eisenstein(_) => ScalarKind::Eisenstein,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Integer(n) => n.is_zero(),
            Scalar::TwoLocal(q) | Scalar::Rational(q) => q.is_zero(),
            Scalar::Eisenstein(e) => e.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Integer(n) => n.is_one(),
            Scalar::TwoLocal(q) | Scalar::Rational(q) => q.is_one(),
            Scalar::Eisenstein(e) => e.re.is_one() && e.zeta.is_zero(),
        }
    }

    /// The rational value, if this scalar lies in `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Scalar::Integer(n) => Some(BigRational::from_integer(n.clone())),
            Scalar::TwoLocal(q) | Scalar::Rational(q) => Some(q.clone()),
            Scalar::Eisenstein(e) if e.zeta.is_zero() => Some(e.re.clone()),
            Scalar::Eisenstein(_) => None,
        }
    }

    /// The integer value, if this scalar is an integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    /// Components `(re, zeta)` as an element of `Q(zeta3)`.
    pub fn to_eisenstein(&self) -> Eisenstein {
        match self {
            Scalar::Eisenstein(e) => e.clone(),
            other => Eisenstein::new(other.to_rational().unwrap(), BigRational::zero()),
        }
    }

    /// Whether the scalar lies in `Z_(2)` (odd denominator, no zeta part).
    pub fn is_two_integral(&self) -> bool {
        self.to_rational().is_some_and(|q| is_odd(q.denom()))
    }

    /// 2-adic valuation of a nonzero 2-local value; `None` for zero or non-rationals.
    pub fn two_valuation(&self) -> Option<u32> {
        let q = self.to_rational()?;
        if q.is_zero() {
            return None;
        }
        let mut n = q.numer().abs();
        let mut v = 0;
        while n.is_even() {
            n >>= 1;
            v += 1;
        }
        Some(v)
    }

    /// Whether the value is negative (rational values only).
    pub fn is_negative(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_negative())
    }

    fn from_kind(kind: ScalarKind, e: Eisenstein) -> Self {
        match kind {
            ScalarKind::Eisenstein => Scalar::Eisenstein(e),
            ScalarKind::Rational => Scalar::Rational(e.re),
            ScalarKind::TwoLocal => Scalar::TwoLocal(e.re),
            ScalarKind::Integer => Scalar::Integer(e.re.to_integer()),
        }
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        match self {
            Scalar::Integer(n) => {
                if n.abs().is_one() {
                    Ok(self.clone())
                } else {
                    Ok(Scalar::Rational(BigRational::new(BigInt::one(), n.clone())))
                }
            }
            Scalar::TwoLocal(q) => {
                if is_odd(q.numer()) {
                    Ok(Scalar::TwoLocal(q.recip()))
                } else {
                    Err(CoeffError::NotTwoLocallyInvertible(q.to_string()))
                }
            }
            Scalar::Rational(q) => Ok(Scalar::Rational(q.recip())),
            Scalar::Eisenstein(e) => e.inv().map(Scalar::Eisenstein).ok_or(CoeffError::DivisionByZero),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Reduce modulo a prime into `{0, .., p-1}`. Denominators must be prime to `p`.
    pub fn reduce_mod(&self, prime: u64) -> Result<Self, CoeffError> {
        let q = self.to_rational().ok_or_else(|| CoeffError::NonIntegerCoefficient(self.to_string()))?;
        let p = BigInt::from(prime);
        let den = q.denom().mod_floor(&p);
        if den.is_zero() {
            return Err(CoeffError::NonIntegerCoefficient(self.to_string()));
        }
        let inv = den.modpow(&(&p - BigInt::from(2)), &p);
        let r = (q.numer().mod_floor(&p) * inv).mod_floor(&p);
        Ok(Scalar::Integer(r))
    }

    fn binary(&self, other: &Self, op: impl Fn(&Eisenstein, &Eisenstein) -> Eisenstein) -> Self {
        let kind = self.kind().max(other.kind());
        Self::from_kind(kind, op(&self.to_eisenstein(), &other.to_eisenstein()))
    }

    /// Fast path when neither operand is an Eisenstein number.
    fn rational_binary(
        &self,
        other: &Self,
        op: impl Fn(BigRational, BigRational) -> BigRational,
    ) -> Option<Self> {
        let kind = self.kind().max(other.kind());
        if kind == ScalarKind::Eisenstein {
            return None;
        }
        let q = op(self.to_rational()?, other.to_rational()?);
        Some(match kind {
            ScalarKind::TwoLocal => Scalar::TwoLocal(q),
            _ => Scalar::Rational(q),
        })
    }

    fn value_cmp_key(&self) -> (BigRational, BigRational) {
        let e = self.to_eisenstein();
        (e.re, e.zeta)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Integer(a), Scalar::Integer(b)) => a == b,
            _ => self.value_cmp_key() == other.value_cmp_key(),
        }
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total order by value: first the rational part, then the zeta part.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Integer(a), Scalar::Integer(b)) => a.cmp(b),
            _ => self.value_cmp_key().cmp(&other.value_cmp_key()),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a + b),
            _ => self.rational_binary(rhs, |a, b| a + b).unwrap_or_else(|| self.binary(rhs, Eisenstein::add)),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Integer(a), Scalar::Integer(b)) => Scalar::Integer(a * b),
            _ => self.rational_binary(rhs, |a, b| a * b).unwrap_or_else(|| self.binary(rhs, Eisenstein::mul)),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Integer(n) => Scalar::Integer(-n),
            Scalar::TwoLocal(q) => Scalar::TwoLocal(-q),
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Eisenstein(e) => Scalar::Eisenstein(Eisenstein::new(-&e.re, -&e.zeta)),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Mul, mul);
forward_owned!(Sub, sub);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl From<BigInt> for Scalar {
    fn from(n: BigInt) -> Self {
        Scalar::Integer(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        if q.is_integer() {
            Scalar::Integer(q.to_integer())
        } else {
            Scalar::Rational(q)
        }
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Plain text. Eisenstein values print as `re + im*zeta3`, omitting zero parts.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Integer(n) => write!(f, "{n}"),
            Scalar::TwoLocal(q) | Scalar::Rational(q) => fmt_rational(q, f),
            Scalar::Eisenstein(e) => {
                if e.zeta.is_zero() {
                    return fmt_rational(&e.re, f);
                }
                if !e.re.is_zero() {
                    fmt_rational(&e.re, f)?;
                    f.write_str(if e.zeta.is_negative() { " - " } else { " + " })?;
                } else if e.zeta.is_negative() {
                    f.write_str("-")?;
                }
                let b = e.zeta.abs();
                if !b.is_one() {
                    fmt_rational(&b, f)?;
                    f.write_str("*")?;
                }
                f.write_str("zeta3")
            }
        }
    }
}

impl Scalar {
    /// True when the printed form is a sum (needs parentheses as a factor).
    pub fn is_compound(&self) -> bool {
        matches!(self, Scalar::Eisenstein(e) if !e.re.is_zero() && !e.zeta.is_zero())
    }
}
