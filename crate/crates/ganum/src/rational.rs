//! Exact rationals carrying quantities like `sigma(n)/n` without rounding.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::Signed;

use crate::hp::HpReal;

/// A reduced fraction of arbitrary-size integers with positive denominator.
pub type ExactRational = num_rational::BigRational;

pub fn rational_from_u64(num: u64, den: u64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_from_biguint(num: BigUint, den: BigUint) -> ExactRational {
    ExactRational::new(
        BigInt::from_biguint(Sign::Plus, num),
        BigInt::from_biguint(Sign::Plus, den),
    )
}

/// Convert to a tagged-precision real by dividing the rounded parts.
pub fn rational_to_hp(r: &ExactRational, digits: u32) -> HpReal {
    let num = HpReal::from_biguint(r.numer().magnitude(), digits);
    let den = HpReal::from_biguint(r.denom().magnitude(), digits);
    let q = num.div(&den);
    if r.numer().is_negative() {
        q.neg()
    } else {
        q
    }
}

/// Exact decimal rendering truncated toward zero at `places` decimals,
/// via integer long division (no floating point involved).
pub fn rational_decimal_truncated(r: &ExactRational, places: usize) -> String {
    let neg = r.numer().is_negative();
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let (int_part, rem) = num.div_rem(den);
    let scaled = rem * BigUint::from(10u32).pow(places as u32);
    let frac = scaled / den;
    let mut frac_s = frac.to_string();
    while frac_s.len() < places {
        frac_s.insert(0, '0');
    }
    let sign = if neg { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_and_truncated() {
        let r = rational_from_u64(28, 12);
        assert_eq!(r.numer().to_string(), "7");
        assert_eq!(r.denom().to_string(), "3");
        assert_eq!(rational_decimal_truncated(&r, 3), "2.333");
        let r = rational_from_u64(31, 16);
        assert_eq!(rational_decimal_truncated(&r, 3), "1.937");
        let r = rational_from_u64(7, 4);
        assert_eq!(rational_decimal_truncated(&r, 3), "1.750");
    }

    #[test]
    fn to_hp_matches() {
        let r = rational_from_u64(7, 4);
        let hp = rational_to_hp(&r, 40);
        assert!((hp.to_f64() - 1.75).abs() < 1e-15);
    }
}
