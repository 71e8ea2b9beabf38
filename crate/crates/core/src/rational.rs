//! Exact scalars and the marked-point set.
//!
//! Every weight, parabolic degree, slope and residue in this crate is a
//! [`Rational`]: an exact fraction of unbounded size, so no arithmetic can
//! overflow and nothing is ever rounded. Values whose numerator and
//! denominator fit in an `i64` are stored inline and only spill to a
//! heap-backed big fraction when an operation would overflow.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::Error;

/// An exact fraction kept in lowest terms with a positive denominator.
#[derive(Clone)]
pub struct Rational(Repr);

/// Canonical: `Big` only holds values that do not fit `Small`.
#[derive(Clone)]
enum Repr {
    Small(Ratio<i64>),
    Big(BigRational),
}

fn to_big(r: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

impl Rational {
    fn from_big(b: BigRational) -> Self {
        match (b.numer().to_i64(), b.denom().to_i64()) {
            (Some(n), Some(d)) => Rational(Repr::Small(Ratio::new_raw(n, d))),
            _ => Rational(Repr::Big(b)),
        }
    }

    fn big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(r) => to_big(r),
            Repr::Big(b) => b.clone(),
        }
    }

    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, Error> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::from_big(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_big(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(Repr::Small(Ratio::zero()))
    }

    pub fn one() -> Self {
        Rational(Repr::Small(Ratio::one()))
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.numer()),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(*r.denom()),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Small(r) if r.is_zero())
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_integer(),
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_negative(),
            Repr::Big(b) => b.is_negative(),
        }
    }

    /// `true` when `0 <= self < 1`, the admissible range of a parabolic weight.
    pub fn is_unit_interval(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => !r.is_negative() && r.numer() < r.denom(),
            Repr::Big(b) => !b.is_negative() && *b < BigRational::one(),
        }
    }

    pub fn floor(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(r.numer().div_floor(r.denom())),
            Repr::Big(b) => b.numer().div_floor(b.denom()),
        }
    }

    pub fn ceil(&self) -> BigInt {
        match &self.0 {
            Repr::Small(r) => BigInt::from(r.numer().div_ceil(r.denom())),
            Repr::Big(b) => b.numer().div_ceil(b.denom()),
        }
    }

    /// Splits `q` as `floor + frac` with `0 <= frac < 1`.
    pub fn frac_shift(&self) -> (Rational, BigInt) {
        match &self.0 {
            Repr::Small(r) => {
                let (floor, rem) = r.numer().div_mod_floor(r.denom());
                let frac = Rational(Repr::Small(Ratio::new_raw(rem, *r.denom())));
                (frac, BigInt::from(floor))
            }
            Repr::Big(b) => {
                let floor = b.numer().div_floor(b.denom());
                let frac = Self::from_big(b - BigRational::from_integer(floor.clone()));
                (frac, floor)
            }
        }
    }

    pub fn frac(&self) -> Rational {
        self.frac_shift().0
    }

    pub fn recip(&self) -> Result<Rational, Error> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::from_big(self.big().recip()))
    }
}

/// Free-function form of [`Rational::frac_shift`].
pub fn frac_shift(q: &Rational) -> (Rational, BigInt) {
    q.frac_shift()
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

// Canonical representation makes structural equality exact.
impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.numer() == b.numer() && a.denom() == b.denom(),
            (Repr::Big(a), Repr::Big(b)) => a.numer() == b.numer() && a.denom() == b.denom(),
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.numer().hash(state);
        self.denom().hash(state);
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.big().cmp(&other.big()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Accepts `p/q` and plain integers. Decimal and symbolic forms are refused.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || Error::MalformedRational(s.to_string());
        let parse_int = |t: &str| -> Result<BigInt, Error> {
            let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            t.parse::<BigInt>().map_err(|_| malformed())
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.is_zero() {
                    return Err(malformed());
                }
                Rational::new(parse_int(p)?, q)
            }
            None => Ok(Rational::from_integer(parse_int(s)?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(Repr::Small(Ratio::from_integer(n)))
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

/// Tries the inline `i64` path first and falls back to big fractions when
/// it overflows.
macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
                    if let Some(r) = a.$checked(b) {
                        return Rational(Repr::Small(r));
                    }
                }
                Rational::from_big(self.big().$method(rhs.big()))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                (&self).$method(rhs)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

/// Panics on division by zero, like the integer types.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division of a rational by zero");
        if let (Repr::Small(a), Repr::Small(b)) = (&self.0, &rhs.0) {
            // `Ratio::checked_div` takes the gcd of the numerators, which
            // itself overflows when one of them is `i64::MIN`.
            if *a.numer() != i64::MIN && *b.numer() != i64::MIN {
                if let Some(r) = a.checked_div(b) {
                    return Rational(Repr::Small(r));
                }
            }
        }
        Rational::from_big(self.big() / rhs.big())
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        *self = &*self + rhs;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -&self
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match &self.0 {
            Repr::Small(r) => match r.numer().checked_neg() {
                Some(n) => Rational(Repr::Small(Ratio::new_raw(n, *r.denom()))),
                None => Rational::from_big(-to_big(r)),
            },
            Repr::Big(b) => Rational::from_big(-b),
        }
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, q| acc + q)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, q| acc + q)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        matches!(&self.0, Repr::Small(r) if r.is_integer() && r.numer() == other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::from(*other)))
    }
}

/// Shorthand used throughout the tests and fixtures: `q(1, 4)` is `1/4`.
///
/// Panics on a zero denominator.
pub fn q(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom).expect("nonzero denominator")
}

/// The projective line with an ordered set of distinct marked points.
///
/// Cloning is cheap; the label list is shared.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MarkedCurve {
    labels: Arc<[String]>,
}

impl MarkedCurve {
    pub fn new<I, S>(labels: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyCurve);
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicatePoint(label.clone()));
            }
        }
        Ok(MarkedCurve {
            labels: labels.into(),
        })
    }

    /// Points named `x0, x1, ...`.
    pub fn with_points(n: usize) -> Result<Self, Error> {
        Self::new((0..n).map(|i| format!("x{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

impl fmt::Debug for MarkedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}
