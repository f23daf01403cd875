//! The ring 𝒜 = ℚ[t, t⁻¹, (1−t)⁻¹] and its S₃ automorphisms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{rat, rat_int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LoopError {
    #[error("element is not a unit of the loop ring")]
    NotAUnit,
    #[error("cannot parse loop element `{0}`")]
    Parse(String),
    #[error("image of t does not define an automorphism")]
    NotAnAutomorphism,
    #[error("element is not τ-even")]
    NotEven,
}

/// Polynomial in t with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn from_coeffs(c: Vec<Rational>) -> Self {
        Poly(c).trimmed()
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::from_coeffs(c.iter().map(|&x| rat_int(x)).collect())
    }

    /// `t^k`
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        Poly(c)
    }

    /// `(1−t)^k`
    pub fn one_minus_t_pow(k: usize) -> Self {
        let base = Poly::from_ints(&[1, -1]);
        (0..k).fold(Poly::constant(Rational::one()), |acc, _| acc.mul(&base))
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.0.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.0
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect()).trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect()).trimmed()
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly(self.0.iter().map(|x| x * c).collect()).trimmed()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    /// Exact division by `t − a`; `None` if `a` is not a root.
    pub fn div_linear(&self, a: &Rational) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let n = self.0.len();
        let mut q = vec![Rational::zero(); n - 1];
        let mut carry = Rational::zero();
        for k in (0..n).rev() {
            let c = &self.0[k] + &carry * a;
            if k == 0 {
                if !c.is_zero() {
                    return None;
                }
            } else {
                q[k - 1] = c.clone();
                carry = c;
            }
        }
        Some(Poly(q).trimmed())
    }

    /// `p(1 − t)`
    pub fn reflect(&self) -> Poly {
        let base = Poly::from_ints(&[1, -1]);
        self.0.iter().rev().fold(Poly::zero(), |acc, c| {
            acc.mul(&base).add(&Poly::constant(c.clone()))
        })
    }
}

fn fmt_poly(p: &Poly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    for k in (0..p.0.len()).rev() {
        let c = &p.0[k];
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        match (k, mag.is_one()) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => write!(f, "t")?,
            (1, false) => write!(f, "{mag}*t")?,
            (_, true) => write!(f, "t^{k}")?,
            (_, false) => write!(f, "{mag}*t^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_poly(self, f)
    }
}

fn parse_poly(s: &str) -> Option<Poly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut terms = Vec::new();
    let mut start = 0;
    let bytes = s.as_bytes();
    for i in 1..bytes.len() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && bytes[i - 1] != b'^' {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    let mut out = Poly::zero();
    for term in terms {
        let (sign, body) = match term.as_bytes().first()? {
            b'-' => (-Rational::one(), &term[1..]),
            b'+' => (Rational::one(), &term[1..]),
            _ => (Rational::one(), term),
        };
        let (coeff, power) = if let Some(idx) = body.find('t') {
            let c = body[..idx].trim_end_matches('*');
            let c = if c.is_empty() {
                Rational::one()
            } else {
                Rational::from_str(c).ok()?
            };
            let rest = &body[idx + 1..];
            let k = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')?.parse::<usize>().ok()?
            };
            (c, k)
        } else {
            (Rational::from_str(body).ok()?, 0)
        };
        out = out.add(&Poly::monomial(power).scale(&(sign * coeff)));
    }
    Some(out)
}

/// `num / (t^et · (1−t)^eu)` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LoopElem {
    num: Poly,
    et: u32,
    eu: u32,
}

impl LoopElem {
    pub fn new(num: Poly, et: u32, eu: u32) -> Self {
        let mut x = LoopElem { num, et, eu };
        x.normalize();
        x
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn et(&self) -> u32 {
        self.et
    }

    pub fn eu(&self) -> u32 {
        self.eu
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.et = 0;
            self.eu = 0;
            return;
        }
        while self.et > 0 && self.num.coeff(0).is_zero() {
            self.num = Poly(self.num.0[1..].to_vec());
            self.et -= 1;
        }
        let one = Rational::one();
        while self.eu > 0 && self.num.eval(&one).is_zero() {
            self.num = self.num.div_linear(&one).expect("root at 1").neg();
            self.eu -= 1;
        }
    }

    pub fn zero() -> Self {
        LoopElem::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        LoopElem::new(Poly::constant(c), 0, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat_int(n))
    }

    pub fn poly(p: Poly) -> Self {
        LoopElem::new(p, 0, 0)
    }

    pub fn t() -> Self {
        Self::poly(Poly::monomial(1))
    }

    /// `c · t^a · (1−t)^b` for any integers a, b.
    pub fn monomial(c: Rational, a: i64, b: i64) -> Self {
        let num = Poly::monomial(a.max(0) as usize)
            .mul(&Poly::one_minus_t_pow(b.max(0) as usize))
            .scale(&c);
        LoopElem::new(num, (-a).max(0) as u32, (-b).max(0) as u32)
    }

    /// t′ = 1 − t⁻¹
    pub fn t_prime() -> Self {
        LoopElem::new(Poly::from_ints(&[-1, 1]), 1, 0)
    }

    /// t″ = 1/(1 − t)
    pub fn t_double_prime() -> Self {
        LoopElem::new(Poly::from_ints(&[1]), 0, 1)
    }

    /// s = t(1 − t)
    pub fn s() -> Self {
        Self::monomial(Rational::one(), 1, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let et = self.et.max(other.et);
        let eu = self.eu.max(other.eu);
        let lift = |x: &LoopElem| {
            x.num
                .mul(&Poly::monomial((et - x.et) as usize))
                .mul(&Poly::one_minus_t_pow((eu - x.eu) as usize))
        };
        LoopElem::new(lift(self).add(&lift(other)), et, eu)
    }

    pub fn neg(&self) -> Self {
        LoopElem {
            num: self.num.neg(),
            et: self.et,
            eu: self.eu,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        LoopElem::new(
            self.num.mul(&other.num),
            self.et + other.et,
            self.eu + other.eu,
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LoopElem::new(self.num.scale(c), self.et, self.eu)
    }

    /// Splits `num = c · t^p · (1−t)^q · rest` with `rest(0), rest(1) ≠ 0`.
    fn factor_out(&self) -> (u32, u32, Poly) {
        let mut p = self.num.clone();
        let mut a = 0;
        while !p.is_zero() && p.coeff(0).is_zero() {
            p = Poly(p.0[1..].to_vec());
            a += 1;
        }
        let one = Rational::one();
        let mut b = 0;
        while !p.is_zero() && p.eval(&one).is_zero() {
            p = p.div_linear(&one).expect("root").neg();
            b += 1;
        }
        (a, b, p)
    }

    /// Inverse if the element is a unit `c·t^a(1−t)^b`.
    pub fn inverse(&self) -> Result<Self, LoopError> {
        if self.is_zero() {
            return Err(LoopError::NotAUnit);
        }
        let (p, q, rest) = self.factor_out();
        if rest.degree() != Some(0) {
            return Err(LoopError::NotAUnit);
        }
        let c = rest.coeff(0);
        Ok(Self::monomial(
            c.recip(),
            self.et as i64 - p as i64,
            self.eu as i64 - q as i64,
        ))
    }

    pub fn pow(&self, e: i64) -> Result<Self, LoopError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        Ok((0..e.unsigned_abs()).fold(Self::one(), |acc, _| acc.mul(&base)))
    }

    /// Exact quotient by a unit.
    pub fn div_unit(&self, u: &Self) -> Result<Self, LoopError> {
        Ok(self.mul(&u.inverse()?))
    }

    /// `Some(c)` when `self = c · other` for a rational c.
    pub fn ratio(&self, other: &Self) -> Option<Rational> {
        if other.is_zero() {
            return if self.is_zero() {
                Some(Rational::zero())
            } else {
                None
            };
        }
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.et != other.et || self.eu != other.eu || self.num.0.len() != other.num.0.len() {
            return None;
        }
        let c = self.num.0.last()? / other.num.0.last()?;
        (other.num.scale(&c) == self.num).then_some(c)
    }

    /// Partial-fraction coordinates in the ℚ-basis {t^n : n ∈ ℤ} ∪ {(1−t)^(−m) : m ≥ 1}.
    pub fn partial_fractions(&self) -> BTreeMap<PfKey, Rational> {
        let mut out = BTreeMap::new();
        if self.is_zero() {
            return out;
        }
        let a = self.et as usize;
        let b = self.eu as usize;
        let series = |p: &Poly, power: usize, terms: usize| -> Vec<Rational> {
            // coefficients of p(x)·(1−x)^(−power) up to x^(terms−1)
            (0..terms)
                .map(|k| {
                    let mut c = Rational::zero();
                    for i in 0..=k {
                        let pi = p.coeff(i);
                        if !pi.is_zero() {
                            c += pi * Rational::from_integer(series_coeff(power, k - i));
                        }
                    }
                    c
                })
                .collect()
        };
        let mut principal = LoopElem::zero();
        if a > 0 {
            let cs = series(&self.num, b, a);
            for (k, c) in cs.into_iter().enumerate() {
                if !c.is_zero() {
                    let n = k as i64 - a as i64;
                    out.insert(PfKey::T(n), c.clone());
                    principal = principal.add(&LoopElem::monomial(c, n, 0));
                }
            }
        }
        if b > 0 {
            let shifted = self.num.reflect();
            let ds = series(&shifted, a, b);
            for (k, d) in ds.into_iter().enumerate() {
                if !d.is_zero() {
                    let m = (b - k) as u32;
                    out.insert(PfKey::InvOneMinusT(m), d.clone());
                    principal = principal.add(&LoopElem::monomial(d, 0, -(m as i64)));
                }
            }
        }
        let rest = self.sub(&principal);
        assert!(
            rest.et == 0 && rest.eu == 0,
            "partial fraction remainder must be polynomial"
        );
        for (k, c) in rest.num.0.iter().enumerate() {
            if !c.is_zero() {
                out.insert(PfKey::T(k as i64), c.clone());
            }
        }
        out
    }

    pub fn from_partial_fractions(pf: &BTreeMap<PfKey, Rational>) -> Self {
        pf.iter().fold(LoopElem::zero(), |acc, (k, c)| {
            acc.add(&match k {
                PfKey::T(n) => LoopElem::monomial(c.clone(), *n, 0),
                PfKey::InvOneMinusT(m) => LoopElem::monomial(c.clone(), 0, -(*m as i64)),
            })
        })
    }
}

/// Coefficient of x^k in (1−x)^(−power).
fn series_coeff(power: usize, k: usize) -> BigInt {
    if power == 0 {
        return if k == 0 {
            BigInt::one()
        } else {
            BigInt::zero()
        };
    }
    let n = power - 1 + k;
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Index of a partial-fraction basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PfKey {
    T(i64),
    InvOneMinusT(u32),
}

impl fmt::Display for LoopElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.et == 0 && self.eu == 0 {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})/(t^{}*(1-t)^{})", self.num, self.et, self.eu)
    }
}

impl FromStr for LoopElem {
    type Err = LoopError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || LoopError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Some((num, den)) = compact.split_once(")/(") {
            let num = num.strip_prefix('(').ok_or_else(err)?;
            let den = den.strip_suffix(')').ok_or_else(err)?;
            let (tp, up) = den.split_once('*').ok_or_else(err)?;
            let a: u32 = tp
                .strip_prefix("t^")
                .and_then(|x| x.parse().ok())
                .ok_or_else(err)?;
            let b: u32 = up
                .strip_prefix("(1-t)^")
                .and_then(|x| x.parse().ok())
                .ok_or_else(err)?;
            let p = parse_poly(num).ok_or_else(err)?;
            Ok(LoopElem::new(p, a, b))
        } else {
            Ok(LoopElem::poly(parse_poly(&compact).ok_or_else(err)?))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LoopRepr {
    num: Vec<String>,
    et: u32,
    eu: u32,
}

impl Serialize for LoopElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LoopRepr {
            num: self.num.0.iter().map(|c| c.to_string()).collect(),
            et: self.et,
            eu: self.eu,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LoopElem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = LoopRepr::deserialize(d)?;
        let coeffs = r
            .num
            .iter()
            .map(|c| Rational::from_str(c).map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LoopElem::new(Poly::from_coeffs(coeffs), r.et, r.eu))
    }
}

/// Substitution automorphism of 𝒜 determined by the image of t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingAuto {
    image_of_t: LoopElem,
    inv_t: LoopElem,
    inv_one_minus_t: LoopElem,
}

impl RingAuto {
    pub fn new(image_of_t: LoopElem) -> Result<Self, LoopError> {
        let inv_t = image_of_t
            .inverse()
            .map_err(|_| LoopError::NotAnAutomorphism)?;
        let inv_one_minus_t = LoopElem::one()
            .sub(&image_of_t)
            .inverse()
            .map_err(|_| LoopError::NotAnAutomorphism)?;
        Ok(RingAuto {
            image_of_t,
            inv_t,
            inv_one_minus_t,
        })
    }

    pub fn identity() -> Self {
        Self::new(LoopElem::t()).expect("identity")
    }

    /// φ_𝒜 : t ↦ 1 − t⁻¹
    pub fn phi() -> Self {
        Self::new(LoopElem::t_prime()).expect("phi")
    }

    /// τ_𝒜 : t ↦ 1 − t
    pub fn tau() -> Self {
        Self::new(LoopElem::one().sub(&LoopElem::t())).expect("tau")
    }

    pub fn image_of_t(&self) -> &LoopElem {
        &self.image_of_t
    }

    pub fn apply(&self, x: &LoopElem) -> LoopElem {
        let mut acc = LoopElem::zero();
        for c in x.num.0.iter().rev() {
            acc = acc
                .mul(&self.image_of_t)
                .add(&LoopElem::constant(c.clone()));
        }
        for _ in 0..x.et {
            acc = acc.mul(&self.inv_t);
        }
        for _ in 0..x.eu {
            acc = acc.mul(&self.inv_one_minus_t);
        }
        acc
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &RingAuto) -> RingAuto {
        RingAuto::new(self.apply(&other.image_of_t)).expect("composite of automorphisms")
    }

    pub fn pow(&self, e: u32) -> RingAuto {
        (0..e).fold(RingAuto::identity(), |acc, _| acc.compose(self))
    }

    /// Smallest e ≤ bound with self^e = id.
    pub fn order(&self, bound: u32) -> Option<u32> {
        (1..=bound).find(|&e| self.pow(e).image_of_t == LoopElem::t())
    }
}

pub fn apply_auto(a: &RingAuto, x: &LoopElem) -> LoopElem {
    a.apply(x)
}

/// `(even, odd)` with `x = even + odd`, τ_𝒜 fixing `even` and negating `odd`.
pub fn tau_split(x: &LoopElem) -> (LoopElem, LoopElem) {
    let tx = RingAuto::tau().apply(x);
    let half = rat(1, 2);
    (x.add(&tx).scale(&half), x.sub(&tx).scale(&half))
}

/// Laurent polynomial in s = t(1−t): `Σ coeffs[k] · s^(low + k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SLaurent {
    pub low: i64,
    pub coeffs: Vec<Rational>,
}

impl SLaurent {
    pub fn eval_at_one(&self) -> Rational {
        self.coeffs.iter().fold(Rational::zero(), |acc, c| acc + c)
    }

    pub fn to_loop(&self) -> LoopElem {
        self.coeffs
            .iter()
            .enumerate()
            .fold(LoopElem::zero(), |acc, (k, c)| {
                let e = self.low + k as i64;
                acc.add(&LoopElem::monomial(c.clone(), e, e))
            })
    }
}

/// Rewrites a τ-even element as a Laurent polynomial in s.
pub fn to_s_laurent(x: &LoopElem) -> Result<SLaurent, LoopError> {
    let m = x.et.max(x.eu);
    let mut p = x
        .num
        .mul(&Poly::monomial((m - x.et) as usize))
        .mul(&Poly::one_minus_t_pow((m - x.eu) as usize));
    let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
    let s_poly = Poly::from_ints(&[0, 1, -1]);
    while let Some(deg) = p.degree() {
        if deg % 2 == 1 {
            return Err(LoopError::NotEven);
        }
        let d = deg / 2;
        let sign = if d % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        let c = p.coeff(deg) * sign;
        let sd = (0..d).fold(Poly::constant(Rational::one()), |acc, _| acc.mul(&s_poly));
        p = p.sub(&sd.scale(&c));
        coeffs.insert(d, c);
    }
    let top = coeffs.keys().max().copied().unwrap_or(0);
    let dense: Vec<Rational> = (0..=top)
        .map(|k| coeffs.get(&k).cloned().unwrap_or_else(Rational::zero))
        .collect();
    Ok(SLaurent {
        low: -(m as i64),
        coeffs: dense,
    })
}

/// Membership in ℬ = ℚ[s, s⁻¹].
pub fn in_b(x: &LoopElem) -> bool {
    to_s_laurent(x).is_ok_and(|l| l.to_loop() == *x)
}

/// Writes a τ-odd element as (2t−1)·h and returns h ∈ ℬ.
pub fn odd_quotient(odd: &LoopElem) -> Result<SLaurent, LoopError> {
    let q = odd
        .num
        .div_linear(&rat(1, 2))
        .ok_or(LoopError::NotEven)?
        .scale(&rat(1, 2));
    to_s_laurent(&LoopElem::new(q, odd.et, odd.eu))
}

/// Membership in 𝒮 = ℚ[t(1−t), t′(1−t′), t″(1−t″)] = ℬ ⊕ ℬ(2t−1)(1−s).
pub fn in_s(x: &LoopElem) -> bool {
    let (even, odd) = tau_split(x);
    assert!(in_b(&even), "τ-even part must lie in ℬ");
    match odd_quotient(&odd) {
        Ok(h) => h.eval_at_one().is_zero(),
        Err(_) => unreachable!("τ-odd part is divisible by 2t−1"),
    }
}
