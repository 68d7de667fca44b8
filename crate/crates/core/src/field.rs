//! Exact scalar fields.
//!
//! Two fields are supported: the rationals (arbitrary precision, always in
//! lowest terms) and prime fields `F_p` with `2^40 < p < 2^63`. Every
//! algorithm in the crate is generic over [`Field`]; values cross module and
//! file boundaries as [`Scalar`].

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::primes::is_prime;

/// Smallest admissible modulus.
pub const MIN_PRIME: u64 = 1 << 40;

/// The default modulus, the Mersenne prime 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

/// A field with an explicit context object.
///
/// Elements carry no reference to their field; every operation goes
/// through the context, so `F_p` elements are bare `u64` residues.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn to_scalar(&self, a: &Self::Elem) -> Scalar;
    fn from_scalar(&self, s: &Scalar) -> Result<Self::Elem>;
    /// Uniform element for prime fields; a small random integer over Q.
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Elem;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|b| self.mul(a, &b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// Which field a configuration or computation lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    /// Checked constructor for a prime field.
    pub fn prime(p: u64) -> Result<Self> {
        PrimeField::new(p).map(|f| f.spec())
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime(p) => PrimeField::new(p).map(|_| ()),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) => Some(p),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<String>,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = match self {
            FieldSpec::Rational => FieldSpecRepr {
                kind: "rational".into(),
                p: None,
            },
            FieldSpec::Prime(p) => FieldSpecRepr {
                kind: "prime".into(),
                p: Some(p.to_string()),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = FieldSpecRepr::deserialize(d)?;
        match repr.kind.to_ascii_lowercase().as_str() {
            "rational" => Ok(FieldSpec::Rational),
            "prime" => {
                let p = repr
                    .p
                    .ok_or_else(|| D::Error::custom("prime field without modulus"))?
                    .parse::<u64>()
                    .map_err(D::Error::custom)?;
                FieldSpec::prime(p).map_err(D::Error::custom)
            }
            other => Err(D::Error::custom(format!("unknown field kind {other:?}"))),
        }
    }
}

/// A field-tagged exact value, used at serialization and API boundaries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue(u64),
}

impl Scalar {
    pub fn int(v: i64) -> Self {
        Scalar::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    /// Parses `"n"` or `"n/d"` and coerces it into `spec`.
    pub fn parse(text: &str, spec: FieldSpec) -> Result<Self> {
        let q = parse_rational(text)?;
        match spec {
            FieldSpec::Rational => Ok(Scalar::Rational(q)),
            FieldSpec::Prime(p) => PrimeField::new_unchecked(p)
                .reduce_rational(&q)
                .map(Scalar::Residue),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue(r) => *r == 0,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) if q.denom().is_one() => write!(f, "{}", q.numer()),
            Scalar::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Residue(r) => write!(f, "{r}"),
        }
    }
}

fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::BadScalar(text.to_string());
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn from_u64(&self, v: u64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn to_scalar(&self, a: &BigRational) -> Scalar {
        Scalar::Rational(a.clone())
    }
    fn from_scalar(&self, s: &Scalar) -> Result<BigRational> {
        match s {
            Scalar::Rational(q) => Ok(q.clone()),
            Scalar::Residue(_) => Err(Error::FieldMismatch(s.to_string())),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> BigRational {
        self.from_i64(rng.random_range(-1000..=1000))
    }
    fn characteristic(&self) -> u64 {
        0
    }
}

/// The prime field `F_p` for a 64-bit prime `p > 2^40`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < MIN_PRIME {
            return Err(Error::PrimeTooSmall(p));
        }
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    /// Skips the primality check; callers must already hold a validated modulus.
    pub fn new_unchecked(p: u64) -> Self {
        Self { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_int(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits in u64")
    }

    pub fn reduce_rational(&self, q: &BigRational) -> Result<u64> {
        let n = self.reduce_int(q.numer());
        let d = self.reduce_int(q.denom());
        self.inv(&d)
            .map(|d| self.mul(&n, &d))
            .ok_or_else(|| Error::NonInvertible(q.to_string()))
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        Some(t0.rem_euclid(self.p as i128) as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn to_scalar(&self, a: &u64) -> Scalar {
        Scalar::Residue(*a)
    }
    fn from_scalar(&self, s: &Scalar) -> Result<u64> {
        match s {
            Scalar::Residue(r) if *r < self.p => Ok(*r),
            Scalar::Residue(_) => Err(Error::FieldMismatch(s.to_string())),
            Scalar::Rational(q) => self.reduce_rational(q),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> u64 {
        rng.random_range(0..self.p)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
}

/// Runs `$body` with `$f` bound to the concrete field named by a [`FieldSpec`].
///
/// ```
/// use hyperlocus_core::{with_field, field::{Field, FieldSpec}};
/// let spec = FieldSpec::Rational;
/// let two = with_field!(spec, |f| f.to_scalar(&f.from_i64(2)).to_string());
/// assert_eq!(two, "2");
/// ```
#[macro_export]
macro_rules! with_field {
    ($spec:expr, |$f:ident| $body:expr) => {
        match $spec {
            $crate::field::FieldSpec::Rational => {
                let $f = $crate::field::Rationals;
                $body
            }
            $crate::field::FieldSpec::Prime(p) => {
                let $f = $crate::field::PrimeField::new_unchecked(p);
                $body
            }
        }
    };
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize<F: Field>(field: &F, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let lead = v.iter().find(|x| !field.is_zero(x))?;
    let inv = field.inv(lead)?;
    Some(v.iter().map(|x| field.mul(x, &inv)).collect())
}

pub fn rational_to_string(q: &BigRational) -> String {
    Scalar::Rational(q.clone()).to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn fp() -> PrimeField {
        PrimeField::new(DEFAULT_PRIME).unwrap()
    }

    #[test]
    fn default_prime_is_mersenne_61() {
        assert_eq!(DEFAULT_PRIME, 2305843009213693951);
        assert!(PrimeField::new(DEFAULT_PRIME).is_ok());
    }

    #[test]
    fn rejects_small_and_composite_moduli() {
        assert!(matches!(PrimeField::new(101), Err(Error::PrimeTooSmall(101))));
        assert!(matches!(
            PrimeField::new(DEFAULT_PRIME - 2),
            Err(Error::NotPrime(_))
        ));
    }

    #[test]
    fn rationals_stay_reduced() {
        let s = Scalar::parse("6/-4", FieldSpec::Rational).unwrap();
        assert_eq!(s.to_string(), "-3/2");
        let Scalar::Rational(q) = s else { panic!() };
        assert!(num_traits::Signed::is_positive(q.denom()));
    }

    #[test]
    fn parse_into_prime_field() {
        let s = Scalar::parse("1/2", FieldSpec::Prime(DEFAULT_PRIME)).unwrap();
        let f = fp();
        let Scalar::Residue(r) = s else { panic!() };
        assert_eq!(f.mul(&r, &2), 1);
        assert!(Scalar::parse("1/0", FieldSpec::Rational).is_err());
        assert!(Scalar::parse("x", FieldSpec::Rational).is_err());
    }

    #[test]
    fn field_spec_json() {
        let spec = FieldSpec::Prime(DEFAULT_PRIME);
        let j = serde_json::to_string(&spec).unwrap();
        assert_eq!(j, r#"{"kind":"prime","p":"2305843009213693951"}"#);
        let back: FieldSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, spec);
        assert!(serde_json::from_str::<FieldSpec>(r#"{"kind":"prime","p":"15"}"#).is_err());
    }

    fn check_axioms<F: Field>(f: &F, a: &F::Elem, b: &F::Elem, c: &F::Elem) {
        assert_eq!(f.add(&f.add(a, b), c), f.add(a, &f.add(b, c)));
        assert_eq!(f.mul(&f.mul(a, b), c), f.mul(a, &f.mul(b, c)));
        assert_eq!(f.mul(a, &f.add(b, c)), f.add(&f.mul(a, b), &f.mul(a, c)));
        assert_eq!(f.add(a, &f.neg(a)), f.zero());
        assert_eq!(f.sub(a, b), f.add(a, &f.neg(b)));
        if !f.is_zero(a) {
            assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
        }
    }

    proptest! {
        #[test]
        fn prime_field_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let f = fp();
            let (a, b, c) = (f.from_u64(a), f.from_u64(b), f.from_u64(c));
            check_axioms(&f, &a, &b, &c);
        }

        #[test]
        fn rational_axioms(an in -50i64..50, ad in 1i64..20, bn in -50i64..50, bd in 1i64..20, cn in -50i64..50) {
            let f = Rationals;
            let a = BigRational::new(an.into(), ad.into());
            let b = BigRational::new(bn.into(), bd.into());
            let c = f.from_i64(cn);
            check_axioms(&f, &a, &b, &c);
        }

        #[test]
        fn rational_representation_independent(n in -1000i64..1000, d in 1i64..1000, k in 1i64..50) {
            let a = Scalar::parse(&format!("{n}/{d}"), FieldSpec::Rational).unwrap();
            let b = Scalar::parse(&format!("{}/{}", n * k, d * k), FieldSpec::Rational).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn sampling_is_in_range() {
        let f = fp();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert!(f.sample(&mut rng) < DEFAULT_PRIME);
        }
    }
}
