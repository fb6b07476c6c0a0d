//! Exact nonnegative integers and the binomial / exact-division primitives
//! used by every counting formula.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An arbitrary-precision nonnegative count.
///
/// Serializes as a decimal string so machine-readable output never
/// truncates.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn one() -> Self {
        BigCount(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    /// Subtraction that refuses to go negative.
    pub fn checked_sub(&self, rhs: &BigCount) -> Option<BigCount> {
        (self.0 >= rhs.0).then(|| BigCount(&self.0 - &rhs.0))
    }

    /// Converts a signed integer, failing on negative input.
    pub fn from_bigint(value: &BigInt) -> Option<BigCount> {
        value.to_biguint().map(BigCount)
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<usize> for BigCount {
    fn from(v: usize) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<u32> for BigCount {
    fn from(v: u32) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl PartialEq<u64> for BigCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for BigCount {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .parse::<BigUint>()
            .map(BigCount)
            .map_err(|e| Error::BadParameters(format!("not a nonnegative integer {s:?}: {e}")))
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0.to_str_radix(10))
    }
}

impl<'de> Deserialize<'de> for BigCount {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn add(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 + &rhs.0)
    }
}

impl AddAssign for BigCount {
    fn add_assign(&mut self, rhs: BigCount) {
        self.0 += rhs.0;
    }
}

impl AddAssign<&BigCount> for BigCount {
    fn add_assign(&mut self, rhs: &BigCount) {
        self.0 += &rhs.0;
    }
}

impl Mul for BigCount {
    type Output = BigCount;
    fn mul(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn mul(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 * &rhs.0)
    }
}

impl MulAssign for BigCount {
    fn mul_assign(&mut self, rhs: BigCount) {
        self.0 *= rhs.0;
    }
}

impl Sum for BigCount {
    fn sum<I: Iterator<Item = BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a BigCount> for BigCount {
    fn sum<I: Iterator<Item = &'a BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::zero(), |acc, x| acc + x.clone())
    }
}

impl Product for BigCount {
    fn product<I: Iterator<Item = BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::one(), |acc, x| acc * x)
    }
}

/// `C(m, j)`, with every out-of-range argument (`j < 0`, `j > m`, `m < 0`)
/// mapped to zero.
pub fn binomial(m: i64, j: i64) -> BigCount {
    if m < 0 || j < 0 || j > m {
        return BigCount::zero();
    }
    let j = j.min(m - j) as u64;
    let m = m as u64;
    let mut acc = BigUint::one();
    // acc = C(m - j + i, i) after step i; each division is exact.
    for i in 1..=j {
        acc *= m - j + i;
        acc /= i;
    }
    BigCount(acc)
}

/// Divides and insists that nothing is left over.
pub fn exact_div(numerator: &BigCount, divisor: &BigCount) -> Result<BigCount> {
    if divisor.is_zero() {
        return Err(Error::BadParameters("division by zero".into()));
    }
    let (q, r) = numerator.0.div_rem(&divisor.0);
    if !r.is_zero() {
        return Err(Error::NonDivisible {
            numerator: numerator.to_string(),
            divisor: divisor.to_string(),
        });
    }
    Ok(BigCount(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(4, 1), 4);
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(60, 30), 118264581564861424u64);
    }

    #[test]
    fn out_of_range_is_zero() {
        assert!(binomial(3, -1).is_zero());
        assert!(binomial(3, 4).is_zero());
        assert!(binomial(-2, 1).is_zero());
        assert!(binomial(-1, -1).is_zero());
    }

    #[test]
    fn exact_division() {
        assert_eq!(exact_div(&12u64.into(), &3u64.into()).unwrap(), 4);
        assert_eq!(exact_div(&10u64.into(), &2u64.into()).unwrap(), 5);
        assert!(matches!(
            exact_div(&7u64.into(), &2u64.into()),
            Err(Error::NonDivisible { .. })
        ));
        assert!(exact_div(&7u64.into(), &BigCount::zero()).is_err());
    }

    #[test]
    fn pascal_rule_up_to_64() {
        for m in 1..=64i64 {
            for j in 0..=m {
                assert_eq!(binomial(m, j), binomial(m - 1, j) + binomial(m - 1, j - 1));
            }
        }
    }

    #[test]
    fn decimal_serialization() {
        let c = binomial(100, 50);
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, "\"100891344545564193334812497256\"");
        let back: BigCount = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    proptest! {
        #[test]
        fn symmetric(m in 0i64..80, j in 0i64..80) {
            prop_assume!(j <= m);
            prop_assert_eq!(binomial(m, j), binomial(m, m - j));
        }

        #[test]
        fn division_undoes_multiplication(m in 0i64..60, j in 0i64..60, d in 1u64..100) {
            let b = binomial(m, j);
            let scaled = &b * &BigCount::from(d);
            prop_assert_eq!(exact_div(&scaled, &d.into()).unwrap(), b);
        }
    }
}
