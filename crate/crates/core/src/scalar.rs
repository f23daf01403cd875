//! Exact scalars: arbitrary-precision rationals and the quadratic field ℚ(ω).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision fraction, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse scalar `{0}`")]
    Parse(String),
}

/// Exact field arithmetic shared by every linear-algebra routine in the crate.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + 'static
{
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn from_rational(r: Rational) -> Self;

    fn parse_str(s: &str) -> Result<Self, ScalarError>;

    fn mul_ref(&self, rhs: &Self) -> Self {
        let mut x = self.clone();
        x *= rhs;
        x
    }

    fn neg_ref(&self) -> Self {
        -self.clone()
    }

    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self) {
        let p = a.mul_ref(b);
        *self += &p;
    }

    fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    fn from_frac(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    fn checked_div(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let inv = rhs.inv().ok_or(ScalarError::DivisionByZero)?;
        Ok(self.mul_ref(&inv))
    }

    /// The rational value if the scalar lies in ℚ.
    fn to_rational(&self) -> Option<Rational>;
}

/// A field containing a primitive cube root of unity.
pub trait OmegaField: Field {
    fn omega() -> Self;
    /// The Galois conjugation ω ↦ ω².
    fn conj_omega(&self) -> Self;
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn parse_str(s: &str) -> Result<Self, ScalarError> {
        parse_rational(s)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

fn parse_rational(s: &str) -> Result<Rational, ScalarError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ScalarError::Parse(s.to_string()));
    }
    let r = Rational::from_str(t).map_err(|_| ScalarError::Parse(s.to_string()))?;
    Ok(r)
}

/// Element a + bω of ℚ(ω) with ω² = −1 − ω.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub a: Rational,
    pub b: Rational,
}

impl Scalar {
    pub fn new(a: Rational, b: Rational) -> Self {
        Scalar { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(rat_int(n), Rational::zero())
    }

    pub fn omega() -> Self {
        Scalar::new(Rational::zero(), Rational::one())
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// a² − ab + b², the product of x with its conjugate.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn conj(&self) -> Self {
        Scalar::new(&self.a - &self.b, -&self.b)
    }

    pub fn inverse(&self) -> Result<Self, ScalarError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let c = self.conj();
        Ok(Scalar::new(c.a / &n, c.b / &n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn scalar_arith(x: &Scalar, y: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
    match op {
        ArithOp::Add => Ok(x + y),
        ArithOp::Sub => Ok(x - y),
        ArithOp::Mul => Ok(x * y),
        ArithOp::Div => Ok(x * &y.inverse()?),
    }
}

pub fn conj_omega(x: &Scalar) -> Scalar {
    x.conj()
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::new(r, Rational::zero())
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.b.is_zero() && rhs.b.is_zero() {
            return Scalar::new(&self.a * &rhs.a, Rational::zero());
        }
        let bd = &self.b * &rhs.b;
        let a = &self.a * &rhs.a - &bd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a - bd;
        Scalar::new(a, b)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.a, -&self.b)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(mut self, rhs: Scalar) -> Scalar {
        self += &rhs;
        self
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(mut self, rhs: Scalar) -> Scalar {
        self -= &rhs;
        self
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
        Scalar::new(-self.a, -self.b)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.a += &rhs.a;
        if !rhs.b.is_zero() {
            self.b += &rhs.b;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.a -= &rhs.a;
        if !rhs.b.is_zero() {
            self.b -= &rhs.b;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        if self.b.is_zero() && rhs.b.is_zero() {
            self.a *= &rhs.a;
        } else {
            *self = &*self * rhs;
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::default()
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl Field for Scalar {
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }

    fn from_rational(r: Rational) -> Self {
        Scalar::from(r)
    }

    fn parse_str(s: &str) -> Result<Self, ScalarError> {
        s.parse()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn add_mul(&mut self, x: &Self, y: &Self) {
        if x.b.is_zero() && y.b.is_zero() {
            if !x.a.is_zero() && !y.a.is_zero() {
                self.a += &x.a * &y.a;
            }
        } else {
            let p = x * y;
            *self += &p;
        }
    }

    fn to_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }
}

impl OmegaField for Scalar {
    fn omega() -> Self {
        Scalar::omega()
    }
    fn conj_omega(&self) -> Self {
        self.conj()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let mag = self.b.abs();
        let coeff = if mag.is_one() {
            String::new()
        } else {
            mag.to_string()
        };
        let neg = self.b.is_negative();
        if self.a.is_zero() {
            write!(f, "{}{}w", if neg { "-" } else { "" }, coeff)
        } else {
            write!(f, "{}{}{}w", self.a, if neg { "-" } else { "+" }, coeff)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p/q`, `bw`, `a+bw`, `a-bw`; `ω` and `*w` are tolerated.
impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == 'ω' { 'w' } else { c })
            .collect();
        let err = || ScalarError::Parse(s.to_string());
        if cleaned.is_empty() {
            return Err(err());
        }
        let Some(body) = cleaned.strip_suffix('w') else {
            return Ok(Scalar::from(parse_rational(&cleaned)?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        let split = body
            .char_indices()
            .rev()
            .find(|&(i, c)| i > 0 && (c == '+' || c == '-'))
            .map(|(i, _)| i);
        let (a_part, b_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let a = if a_part.is_empty() {
            Rational::zero()
        } else {
            parse_rational(a_part)?
        };
        let b = match b_part {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            other => parse_rational(other)?,
        };
        if a_part.contains('w') || b_part.contains('w') {
            return Err(err());
        }
        Ok(Scalar::new(a, b))
    }
}

#[derive(Serialize, Deserialize)]
struct ScalarRepr {
    a: String,
    b: String,
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ScalarRepr {
            a: self.a.to_string(),
            b: self.b.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Obj(ScalarRepr),
            Text(String),
        }
        match Either::deserialize(deserializer)? {
            Either::Obj(r) => {
                let a = parse_rational(&r.a).map_err(serde::de::Error::custom)?;
                let b = parse_rational(&r.b).map_err(serde::de::Error::custom)?;
                Ok(Scalar::new(a, b))
            }
            Either::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(a: i64, b: i64) -> Scalar {
        Scalar::new(rat_int(a), rat_int(b))
    }

    #[test]
    fn omega_squared() {
        let w = Scalar::omega();
        assert_eq!(&w * &w, s(-1, -1));
        assert_eq!(&(&w * &w) * &w, Scalar::one());
    }

    #[test]
    fn one_plus_omega_squared_is_omega() {
        let x = s(1, 1);
        assert_eq!(&x * &x, Scalar::omega());
    }

    #[test]
    fn inverse_of_omega() {
        let r = scalar_arith(&Scalar::one(), &Scalar::omega(), ArithOp::Div).unwrap();
        assert_eq!(r, s(-1, -1));
    }

    #[test]
    fn division_by_zero_is_error() {
        assert_eq!(
            scalar_arith(&Scalar::one(), &Scalar::zero(), ArithOp::Div),
            Err(ScalarError::DivisionByZero)
        );
        assert!(Rational::zero().inv().is_none());
    }

    #[test]
    fn conjugation_examples() {
        assert_eq!(conj_omega(&Scalar::omega()), s(-1, -1));
        assert_eq!(conj_omega(&Scalar::from_int(5)), Scalar::from_int(5));
        assert_eq!(conj_omega(&conj_omega(&s(2, 3))), s(2, 3));
    }

    #[test]
    fn text_round_trip() {
        for text in ["0", "3/4", "-w", "w", "1/2+3/4w", "2-w", "-7/3w", "-1-w"] {
            let x: Scalar = text.parse().unwrap();
            assert_eq!(x.to_string(), text);
        }
        assert_eq!("1+ω".parse::<Scalar>().unwrap(), s(1, 1));
        assert_eq!("2*w".parse::<Scalar>().unwrap(), s(0, 2));
        assert!("w+w".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
        assert!("1/0".parse::<Scalar>().is_err());
    }

    #[test]
    fn json_form() {
        let x = Scalar::new(rat(1, 2), rat(-3, 4));
        let j = serde_json::to_string(&x).unwrap();
        assert_eq!(j, r#"{"a":"1/2","b":"-3/4"}"#);
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, x);
        let from_text: Scalar = serde_json::from_str(r#""1/2-3/4w""#).unwrap();
        assert_eq!(from_text, x);
    }

    #[test]
    fn canonical_rationals() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(Rational::zero().denom(), &BigInt::from(1));
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..9, -50i64..50, 1i64..9)
            .prop_map(|(p, q, r, t)| Scalar::new(rat(p, q), rat(r, t)))
    }

    proptest! {
        #[test]
        fn inverse_is_exact(x in arb_scalar()) {
            prop_assume!(!x.is_zero());
            prop_assert_eq!(&x * &x.inverse().unwrap(), Scalar::one());
        }

        #[test]
        fn norm_vanishes_only_at_zero(x in arb_scalar()) {
            prop_assert_eq!(x.norm().is_zero(), x.is_zero());
        }

        #[test]
        fn conjugation_is_multiplicative(x in arb_scalar(), y in arb_scalar()) {
            prop_assert_eq!(conj_omega(&(&x * &y)), &conj_omega(&x) * &conj_omega(&y));
            prop_assert_eq!(conj_omega(&(&x + &y)), &conj_omega(&x) + &conj_omega(&y));
        }

        #[test]
        fn field_axioms(x in arb_scalar(), y in arb_scalar(), z in arb_scalar()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
        }

        #[test]
        fn text_form_round_trips(x in arb_scalar()) {
            prop_assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        }
    }
}
