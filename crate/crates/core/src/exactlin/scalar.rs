use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LinAlgError;

/// Coefficient field of a computation: exact rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

/// Largest accepted prime modulus; keeps products inside `u128` comfortably and
/// residues inside JSON-safe integers.
pub const MAX_PRIME: u64 = 1 << 31;

impl Field {
    pub fn prime(p: u64) -> Result<Field, LinAlgError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(LinAlgError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Modular { residue: 0, prime: p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => {
                let r = v.rem_euclid(p as i64) as u64;
                Scalar::Modular { residue: r, prime: p }
            }
        }
    }

    pub fn from_rational(self, q: &BigRational) -> Result<Scalar, LinAlgError> {
        match self {
            Field::Rational => Ok(Scalar::Rational(q.clone())),
            Field::Prime(p) => {
                let m = BigInt::from(p);
                let num = q.numer().mod_floor_big(&m);
                let den = q.denom().mod_floor_big(&m);
                if den.is_zero() {
                    return Err(LinAlgError::NotRepresentable(q.to_string(), p));
                }
                let n = Scalar::Modular { residue: num, prime: p };
                let d = Scalar::Modular { residue: den, prime: p };
                Ok(&n * &d.inv().expect("nonzero residue"))
            }
        }
    }

    /// Number of elements, when finite.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }
}

trait ModFloorBig {
    fn mod_floor_big(&self, m: &BigInt) -> u64;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> u64 {
        let r = ((self % m) + m) % m;
        r.to_u64().expect("residue fits")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = LinAlgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Q" | "q" => Ok(Field::Rational),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .or_else(|| other.strip_prefix("fp:"))
                    .ok_or_else(|| LinAlgError::BadField(s.to_string()))?;
                let p: u64 = p.parse().map_err(|_| LinAlgError::BadField(s.to_string()))?;
                Field::prime(p)
            }
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with a positive
/// denominator; residues satisfy `residue < prime`.
///
/// Binary operations require both operands to live in the same field; mixing
/// fields is a programming error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { residue: u64, prime: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Modular { prime, .. } => Field::Prime(*prime),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { residue, .. } => *residue == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => (!q.is_zero()).then(|| Scalar::Rational(q.recip())),
            Scalar::Modular { residue, prime } => {
                if *residue == 0 {
                    return None;
                }
                Some(Scalar::Modular { residue: pow_mod(*residue, prime - 2, *prime), prime: *prime })
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Modular { .. } => None,
        }
    }

    /// Text form used in artifacts: `"num/den"` for rationals (denominator always
    /// written), decimal residue for prime fields.
    pub fn to_artifact_string(&self) -> String {
        match self {
            Scalar::Rational(q) => format!("{}/{}", q.numer(), q.denom()),
            Scalar::Modular { residue, .. } => residue.to_string(),
        }
    }

    pub fn parse_in(field: Field, s: &str) -> Result<Scalar, LinAlgError> {
        let bad = || LinAlgError::BadScalar(s.to_string());
        match field {
            Field::Rational => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s.trim(), "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
            Field::Prime(p) => {
                let r: u64 = s.trim().parse().map_err(|_| bad())?;
                if r >= p {
                    return Err(bad());
                }
                Ok(Scalar::Modular { residue: r, prime: p })
            }
        }
    }

    pub fn from_residue(field: Field, r: u64) -> Result<Scalar, LinAlgError> {
        match field {
            Field::Prime(p) if r < p => Ok(Scalar::Modular { residue: r, prime: p }),
            _ => Err(LinAlgError::BadScalar(r.to_string())),
        }
    }

    fn check_same(&self, other: &Scalar) -> u64 {
        match (self, other) {
            (Scalar::Modular { prime: p, .. }, Scalar::Modular { prime: q, .. }) if p == q => *p,
            _ => panic!("scalar operands from different fields: {} vs {}", self.field(), other.field()),
        }
    }
}

/// JSON form of a scalar: a `"num/den"` string for rationals, a bare integer
/// residue for prime fields.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarText {
    Residue(u64),
    Fraction(String),
}

impl Scalar {
    pub fn to_text(&self) -> ScalarText {
        match self {
            Scalar::Rational(_) => ScalarText::Fraction(self.to_artifact_string()),
            Scalar::Modular { residue, .. } => ScalarText::Residue(*residue),
        }
    }

    pub fn from_text(field: Field, t: &ScalarText) -> Result<Scalar, LinAlgError> {
        match (field, t) {
            (Field::Rational, ScalarText::Fraction(s)) => Scalar::parse_in(field, s),
            (Field::Prime(_), ScalarText::Residue(r)) => Scalar::from_residue(field, *r),
            (_, ScalarText::Residue(r)) => Err(LinAlgError::BadScalar(r.to_string())),
            (_, ScalarText::Fraction(s)) => Err(LinAlgError::BadScalar(s.clone())),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut base = (b % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Modular { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                let p = self.check_same(rhs);
                let (a, b) = (residue(self), residue(rhs));
                Scalar::Modular { residue: ((a as u128 + b as u128) % p as u128) as u64, prime: p }
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            _ => {
                let p = self.check_same(rhs);
                let (a, b) = (residue(self), residue(rhs));
                Scalar::Modular { residue: ((a as u128 + p as u128 - b as u128) % p as u128) as u64, prime: p }
            }
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            _ => {
                let p = self.check_same(rhs);
                let (a, b) = (residue(self), residue(rhs));
                Scalar::Modular { residue: ((a as u128 * b as u128) % p as u128) as u64, prime: p }
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { residue, prime } => Scalar::Modular { residue: (prime - residue) % prime, prime: *prime },
        }
    }
}

fn residue(s: &Scalar) -> u64 {
    match s {
        Scalar::Modular { residue, .. } => *residue,
        Scalar::Rational(_) => unreachable!("checked by check_same"),
    }
}

/// `true` when the rational's denominator is a power of `p` (including `p^0`),
/// i.e. `q` lies in the localization `p^{-∞}ℤ`.
pub fn in_prime_hull(q: &BigRational, p: u64) -> bool {
    let mut d = q.denom().abs();
    let p = BigInt::from(p);
    while !d.is_one() {
        if (&d % &p).is_zero() {
            d /= &p;
        } else {
            return false;
        }
    }
    true
}
