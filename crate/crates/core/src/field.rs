//! Exact scalars: arbitrary-precision rationals and residues modulo a word-sized prime.
//!
//! A [`Scalar`] always knows which field it lives in. Checked arithmetic
//! (`try_add`, `try_mul`, ...) reports mixed-field operands as
//! [`Error::FieldMismatch`]; the `std::ops` impls on references are for code
//! that has already validated a common field and panic on a mismatch.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exclusive upper bound on prime moduli.
pub const MAX_MODULUS: u64 = 1 << 62;

/// The ground field: the rationals or `GF(p)` for a checked prime `p < 2^62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldSpec(Kind);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Kind {
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub const fn rational() -> Self {
        FieldSpec(Kind::Rational)
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p >= MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldSpec(Kind::Prime(p)))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.0, Kind::Rational)
    }

    /// The modulus for a prime field, `None` for the rationals.
    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            Kind::Rational => None,
            Kind::Prime(p) => Some(p),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self.0 {
            Kind::Rational => Scalar(Repr::Q(BigRational::from_integer(BigInt::from(n)))),
            Kind::Prime(p) => Scalar(Repr::Fp {
                v: n.rem_euclid(p as i64) as u64,
                p,
            }),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self.0 {
            Kind::Rational => Scalar(Repr::Q(BigRational::from_integer(n.clone()))),
            Kind::Prime(p) => {
                let r = ((n % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                Scalar(Repr::Fp {
                    v: r.to_u64().expect("residue fits in u64"),
                    p,
                })
            }
        }
    }

    /// `num / den` in this field. Fails when `den` vanishes in the field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        self.from_bigint(&BigInt::from(num))
            .try_div(&self.from_bigint(&BigInt::from(den)))
    }

    /// Map a rational into this field (reduction mod p for prime fields).
    pub fn from_rational(&self, r: &BigRational) -> Result<Scalar> {
        match self.0 {
            Kind::Rational => Ok(Scalar(Repr::Q(r.clone()))),
            Kind::Prime(_) => self.from_bigint(r.numer()).try_div(&self.from_bigint(r.denom())),
        }
    }

    /// Parse the textual scalar form: `"a"` or `"a/b"` with optional sign.
    ///
    /// Prime-field values accept the same syntax and are reduced.
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let bad = |why: &str| Error::ParseScalar(s.to_string(), why.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad("bad numerator"))?;
        let den: BigInt = den.parse().map_err(|_| bad("bad denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        self.from_rational(&BigRational::new(num, den))
            .map_err(|_| bad("denominator vanishes in this field"))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Rational => write!(f, "Q"),
            Kind::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

/// An element of a [`FieldSpec`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self.0 {
            Repr::Q(_) => FieldSpec(Kind::Rational),
            Repr::Fp { p, .. } => FieldSpec(Kind::Prime(p)),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => r.is_zero(),
            Repr::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Q(r) => r.is_one(),
            Repr::Fp { v, .. } => *v == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Q(r) => Some(r),
            Repr::Fp { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match self.0 {
            Repr::Q(_) => None,
            Repr::Fp { v, .. } => Some(v),
        }
    }

    pub(crate) fn from_residue(v: u64, p: u64) -> Scalar {
        debug_assert!(v < p);
        Scalar(Repr::Fp { v, p })
    }

    pub(crate) fn from_big_rational(r: BigRational) -> Scalar {
        Scalar(Repr::Q(r))
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::FieldMismatch(self.field().to_string(), other.field().to_string())
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => Ok(Scalar(Repr::Q(a + b))),
            (Repr::Fp { v: a, p }, Repr::Fp { v: b, p: q }) if p == q => {
                Ok(Scalar::from_residue(add_mod(*a, *b, *p), *p))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        match (&self.0, &other.0) {
            (Repr::Q(a), Repr::Q(b)) => Ok(Scalar(Repr::Q(a * b))),
            (Repr::Fp { v: a, p }, Repr::Fp { v: b, p: q }) if p == q => {
                Ok(Scalar::from_residue(mul_mod(*a, *b, *p), *p))
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match &self.0 {
            Repr::Q(r) => Ok(Scalar(Repr::Q(r.recip()))),
            Repr::Fp { v, p } => Ok(Scalar::from_residue(inv_mod(*v, *p), *p)),
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        if self.field() != other.field() {
            return Err(self.mismatch(other));
        }
        self.try_mul(&other.inverse()?)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Q(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Q(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Q(r) => Scalar(Repr::Q(-r)),
            Repr::Fp { v, p } => Scalar::from_residue(if *v == 0 { 0 } else { p - v }, *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! checked_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;

            fn $method(self, rhs: &Scalar) -> Scalar {
                match self.$checked(rhs) {
                    Ok(s) => s,
                    Err(e) => panic!("{e}"),
                }
            }
        }

        impl $trait<Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

checked_op!(Add, add, try_add);
checked_op!(Sub, sub, try_sub);
checked_op!(Mul, mul, try_mul);

/// Sign of a rational scalar (`None` for prime-field values).
pub fn rational_sign(s: &Scalar) -> Option<i8> {
    s.as_rational().map(|r| {
        if r.is_zero() {
            0
        } else if r.is_positive() {
            1
        } else {
            -1
        }
    })
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    // a, b < p < 2^62 so the sum cannot overflow.
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo a prime.
#[inline]
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin; the witness set is exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut odd = n - 1;
    let mut twos = 0;
    while odd % 2 == 0 {
        odd /= 2;
        twos += 1;
    }
    'witness: for &w in &WITNESSES {
        let mut x = pow_mod(w, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..twos {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        FieldSpec::rational().from_ratio(n, d).unwrap()
    }

    fn gf7(n: i64) -> Scalar {
        FieldSpec::prime(7).unwrap().from_i64(n)
    }

    #[test]
    fn rational_basics() {
        assert_eq!(q(1, 2).try_add(&q(1, 3)).unwrap(), q(5, 6));
        assert_eq!(q(1, 2).to_string(), "1/2");
        assert_eq!((q(3, 1) * q(0, 1)), q(0, 1));
        assert_eq!(q(2, 3).inverse().unwrap(), q(3, 2));
        assert_eq!(q(1, 1).inverse().unwrap(), q(1, 1));
        assert_eq!(q(4, -6).to_string(), "-2/3");
    }

    #[test]
    fn prime_basics() {
        assert_eq!(gf7(5) + gf7(4), gf7(2));
        assert_eq!(gf7(3).inverse().unwrap(), gf7(5));
        assert_eq!(gf7(-1).residue(), Some(6));
        assert_eq!((-gf7(0)).residue(), Some(0));
        assert_eq!(gf7(3) - gf7(5), gf7(5));
    }

    #[test]
    fn errors() {
        assert_eq!(q(0, 1).inverse(), Err(Error::DivisionByZero));
        assert_eq!(gf7(0).inverse(), Err(Error::DivisionByZero));
        assert!(matches!(q(1, 1).try_add(&gf7(1)), Err(Error::FieldMismatch(..))));
        assert!(matches!(
            gf7(1).try_mul(&FieldSpec::prime(11).unwrap().one()),
            Err(Error::FieldMismatch(..))
        ));
        assert_eq!(FieldSpec::prime(32001), Err(Error::NotPrime(32001)));
        assert_eq!(FieldSpec::prime(1), Err(Error::NotPrime(1)));
        assert!(matches!(FieldSpec::prime(u64::MAX), Err(Error::ModulusTooLarge(_))));
        assert!(FieldSpec::rational().from_ratio(1, 0).is_err());
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime(32003));
        assert!(is_prime(4_611_686_018_427_387_847)); // largest prime below 2^62
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(FieldSpec::prime(4_611_686_018_427_387_847).is_ok());
    }

    #[test]
    fn parsing() {
        let f = FieldSpec::rational();
        assert_eq!(f.parse_scalar("-3/6").unwrap(), q(-1, 2));
        assert_eq!(f.parse_scalar(" 7 ").unwrap(), q(7, 1));
        assert!(f.parse_scalar("1/0").is_err());
        assert!(f.parse_scalar("x").is_err());
        let g = FieldSpec::prime(7).unwrap();
        assert_eq!(g.parse_scalar("1/3").unwrap(), gf7(5));
        assert_eq!(g.parse_scalar("-1").unwrap(), gf7(6));
        assert!(g.parse_scalar("1/7").is_err());
    }

    #[test]
    fn huge_modulus_products() {
        let p = 4_611_686_018_427_387_847;
        let f = FieldSpec::prime(p).unwrap();
        let a = f.from_i64(-2);
        assert_eq!((&a * &a), f.from_i64(4));
        assert!((a.inverse().unwrap() * a).is_one());
    }

    fn small_q() -> impl Strategy<Value = (i64, i64)> {
        (-50i64..50, 1i64..20)
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in small_q(), b in small_q(), c in small_q()) {
            let (a, b, c) = (q(a.0, a.1), q(b.0, b.1), q(c.0, c.1));
            prop_assert_eq!((&a + &b) + c.clone(), &a + &(&b + &c));
            prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
            let s = &a + &b;
            let r = s.as_rational().unwrap();
            prop_assert!(r.denom().is_positive());
            prop_assert!(num_integer::Integer::gcd(r.numer(), r.denom()).is_one());
        }

        #[test]
        fn prime_field_axioms(a in 0u64..32003, b in 0u64..32003, c in 0u64..32003) {
            let f = FieldSpec::prime(32003).unwrap();
            let (a, b, c) = (f.from_i64(a as i64), f.from_i64(b as i64), f.from_i64(c as i64));
            prop_assert_eq!((&a + &b) + c.clone(), &a + &(&b + &c));
            prop_assert_eq!((&a * &b) * c.clone(), &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inverse().unwrap()).is_one());
            }
            prop_assert!(a.residue().unwrap() < 32003);
        }
    }
}
