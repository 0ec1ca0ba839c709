//! Exact dyadic rationals `mantissa * 2^exponent`.
//!
//! The relative subuniverse count sigma(A) = |Sub(A)| * 2^(8-n) is dyadic for
//! every finite algebra, and comparisons against thresholds like 83 must be
//! exact: binary floating point would lose digits as soon as n grows past the
//! mantissa width, and the report format prints 16 fractional decimal digits.
//! All comparisons here cross-multiply, so equality and ordering are value
//! based and independent of representation.

use num_bigint::BigUint;
use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;

/// A nonnegative dyadic rational, kept unnormalized as `mantissa * 2^exponent`.
#[derive(Clone, Debug)]
pub struct DyadicValue {
    mantissa: BigUint,
    exponent: i64,
}

impl DyadicValue {
    pub fn new(mantissa: BigUint, exponent: i64) -> Self {
        DyadicValue { mantissa, exponent }
    }

    pub fn from_count(count: u64, exponent: i64) -> Self {
        DyadicValue::new(BigUint::from(count), exponent)
    }

    pub fn from_integer(value: u64) -> Self {
        DyadicValue::new(BigUint::from(value), 0)
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Compares against a rational `num/den` exactly (den must be nonzero).
    pub fn cmp_ratio(&self, num: &BigUint, den: &BigUint) -> Ordering {
        assert!(!den.is_zero(), "threshold denominator must be nonzero");
        // m*2^e vs num/den  <=>  m*den*2^e vs num, shifting whichever side
        // keeps the exponent nonnegative.
        let lhs = &self.mantissa * den;
        if self.exponent >= 0 {
            (lhs << self.exponent as u64).cmp(num)
        } else {
            lhs.cmp(&(num << (-self.exponent) as u64))
        }
    }

    /// Exact base-10 rendering with at least `min_frac` fractional digits,
    /// extended as needed so no digit is ever rounded away.
    pub fn to_decimal(&self, min_frac: usize) -> String {
        let ten = BigUint::from(10u32);
        let (int_part, mut rem, shift) = if self.exponent >= 0 {
            (&self.mantissa << self.exponent as u64, BigUint::zero(), 0u64)
        } else {
            let shift = (-self.exponent) as u64;
            let int_part = &self.mantissa >> shift;
            let rem = &self.mantissa - (&int_part << shift);
            (int_part, rem, shift)
        };
        let mut digits = String::new();
        // A dyadic fraction r/2^shift terminates within `shift` decimal digits.
        while !rem.is_zero() {
            rem *= &ten;
            let digit = &rem >> shift;
            digits.push(char::from(b'0' + digit.to_u32_digits().first().copied().unwrap_or(0) as u8));
            rem -= digit << shift;
        }
        while digits.len() < min_frac {
            digits.push('0');
        }
        if digits.is_empty() {
            int_part.to_string()
        } else {
            format!("{}.{}", int_part, digits)
        }
    }
}

impl PartialEq for DyadicValue {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for DyadicValue {}

impl PartialOrd for DyadicValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicValue {
    fn cmp(&self, other: &Self) -> Ordering {
        // Align to the smaller exponent; only the difference matters.
        let (a, b) = if self.exponent >= other.exponent {
            (
                &self.mantissa << (self.exponent - other.exponent) as u64,
                other.mantissa.clone(),
            )
        } else {
            (
                self.mantissa.clone(),
                &other.mantissa << (other.exponent - self.exponent) as u64,
            )
        };
        a.cmp(&b)
    }
}

impl fmt::Display for DyadicValue {
    /// Shortest exact form: integers print without a point, fractions with
    /// exactly as many digits as they need.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(0))
    }
}

impl serde::Serialize for DyadicValue {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format!("{}*2^{}", self.mantissa, self.exponent))
    }
}
