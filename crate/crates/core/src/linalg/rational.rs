use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LinalgError;

/// Exact rational number, always stored reduced with a positive denominator.
///
/// Two rationals with the same value have the same representation, so derived
/// `Eq`/`Hash` are value equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, LinalgError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(LinalgError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    /// Panicking constructor for literals in code; `denom` must be nonzero.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("zero denominator in rational literal")
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, LinalgError> {
        if self.is_zero() {
            return Err(LinalgError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, LinalgError> {
        if rhs.is_zero() {
            return Err(LinalgError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// `self^exp` for any integer exponent; negative exponents of zero fail.
    pub fn pow(&self, exp: i32) -> Result<Self, LinalgError> {
        if exp < 0 && self.is_zero() {
            return Err(LinalgError::DivisionByZero);
        }
        Ok(Rational(num_traits::Pow::pow(&self.0, exp)))
    }

    /// Bit length of the larger of |numerator| and denominator.
    pub fn bits(&self) -> u64 {
        self.numer()
            .magnitude()
            .bits()
            .max(self.denom().magnitude().bits())
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
        values
            .into_iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
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

impl FromStr for Rational {
    type Err = LinalgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| LinalgError::Parse(s.to_string()))
        };
        match s.split_once('/') {
            Some((n, d)) => Rational::new(parse_int(n)?, parse_int(d)?),
            None => Ok(Rational::integer(parse_int(s)?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::integer(n)
    }
}

// Integer operands skip the gcd reduction, which dominates on long integers.
macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                if self.0.is_integer() && rhs.0.is_integer() {
                    return Rational(BigRational::from_integer(
                        self.0.numer().$method(rhs.0.numer()),
                    ));
                }
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as \"p/q\", \"p\", or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational::integer(v))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = Rational::frac(2, 4);
        let b = Rational::frac(1, 2);
        assert_eq!(a, b);
        assert_eq!(a.numer(), b.numer());
        assert_eq!(a.denom(), b.denom());

        let c = Rational::frac(1, -2);
        assert_eq!(c.numer(), &BigInt::from(-1));
        assert_eq!(c.denom(), &BigInt::from(2));
    }

    #[test]
    fn zero_denominator_and_division() {
        assert_eq!(Rational::new(3, 0), Err(LinalgError::ZeroDenominator));
        assert_eq!(
            Rational::one().checked_div(&Rational::zero()),
            Err(LinalgError::DivisionByZero)
        );
        assert_eq!(Rational::zero().recip(), Err(LinalgError::DivisionByZero));
        assert_eq!("1/0".parse::<Rational>(), Err(LinalgError::ZeroDenominator));
    }

    #[test]
    fn string_form() {
        assert_eq!(Rational::frac(-3, 10).to_string(), "-3/10");
        assert_eq!(Rational::frac(4, 2).to_string(), "2");
        assert_eq!("-3/10".parse::<Rational>().unwrap(), Rational::frac(-3, 10));
        assert_eq!(" 6/-4 ".parse::<Rational>().unwrap(), Rational::frac(-3, 2));
        assert!("x".parse::<Rational>().is_err());
        assert!("1/2/3".parse::<Rational>().is_err());
    }

    #[test]
    fn serde_accepts_strings_and_integers() {
        let v: Vec<Rational> = serde_json::from_str(r#"["1/2", 3, "-4"]"#).unwrap();
        assert_eq!(
            v,
            vec![Rational::frac(1, 2), Rational::from(3), Rational::from(-4)]
        );
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","3","-4"]"#);
    }

    #[test]
    fn bits_and_pow() {
        assert_eq!(Rational::zero().bits(), 1);
        assert_eq!(Rational::from(2).bits(), 2);
        assert_eq!(Rational::frac(1, 8).bits(), 4);
        assert_eq!(Rational::from(2).pow(-3).unwrap(), Rational::frac(1, 8));
        assert!(Rational::zero().pow(-1).is_err());
    }

    fn reference(x: &Rational) -> BigRational {
        x.0.clone()
    }

    proptest::proptest! {
        #[test]
        fn operators_match_reference(
            a in -10_000i64..10_000, b in 1i64..6, c in -10_000i64..10_000, d in 1i64..6,
        ) {
            let (x, y) = (Rational::frac(a, b), Rational::frac(c, d));
            let (rx, ry) = (reference(&x), reference(&y));
            proptest::prop_assert_eq!(reference(&(&x + &y)), &rx + &ry);
            proptest::prop_assert_eq!(reference(&(&x - &y)), &rx - &ry);
            proptest::prop_assert_eq!(reference(&(&x * &y)), &rx * &ry);
            let sum = &x + &y;
            proptest::prop_assert!(sum.denom() > &BigInt::zero());
            proptest::prop_assert!(sum.numer().gcd(sum.denom()).is_one());
        }
    }
}
