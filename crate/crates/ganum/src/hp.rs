//! Arbitrary-precision reals tagged with a decimal-digit precision, plus the
//! staged-precision policy used by every comparison-critical decision.
//!
//! Values are backed by [`astro_float::BigFloat`] with a binary precision
//! comfortably above the tagged decimal precision, so the short operation
//! chains used in this crate (sums of logarithms, a handful of products and
//! quotients) keep at least the tagged number of correct significant digits.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigUint;

use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Smallest precision tag accepted anywhere.
pub const MIN_DIGITS: u32 = 20;

/// Euler-Mascheroni constant, 125 decimal digits.
const EULER_GAMMA_125: &str = "0.5772156649015328606065120900824024310421593359399235988057672348848677267776646709369470632917467495146314472498070824809605";

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Binary precision backing a decimal-digit tag. The 64 extra bits absorb
/// rounding across the operation chains used here.
fn bits_for(digits: u32) -> usize {
    (digits as usize * 3322 + 999) / 1000 + 64
}

/// Outcome of a comparison under a guard band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuardedOrd {
    Less,
    Greater,
    /// The operands differ by less than the guard band at the current
    /// precision; re-run at higher precision to separate them.
    Indeterminate,
}

/// The staged-precision protocol: screen at `stage1_digits` with an absolute
/// guard of `stage1_guard`, confirm at `stage2_digits`, then double the digit
/// count while a comparison stays inside the guard band, up to `max_digits`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionPolicy {
    pub stage1_digits: u32,
    pub stage1_guard: f64,
    pub stage2_digits: u32,
    pub max_digits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            stage1_digits: 20,
            stage1_guard: 1e-5,
            stage2_digits: 40,
            max_digits: 640,
        }
    }
}

impl PrecisionPolicy {
    pub fn new(stage1_digits: u32, stage1_guard: f64, stage2_digits: u32, max_digits: u32) -> Result<Self> {
        if stage1_digits < MIN_DIGITS {
            return Err(Error::domain(format!(
                "stage-1 precision must be at least {MIN_DIGITS} digits, got {stage1_digits}"
            )));
        }
        if stage1_digits >= stage2_digits {
            return Err(Error::domain(format!(
                "stage-1 precision ({stage1_digits}) must be below stage-2 ({stage2_digits})"
            )));
        }
        if !(stage1_guard > 0.0) {
            return Err(Error::domain("stage-1 guard must be positive".to_string()));
        }
        if max_digits < stage2_digits {
            return Err(Error::domain(format!(
                "precision cap ({max_digits}) must be at least stage-2 ({stage2_digits})"
            )));
        }
        Ok(PrecisionPolicy { stage1_digits, stage1_guard, stage2_digits, max_digits })
    }

    /// Digit counts for the confirmation stages: stage-2, then doubling up
    /// to the cap.
    pub fn escalation_digits(&self) -> impl Iterator<Item = u32> + '_ {
        let mut d = self.stage2_digits;
        let cap = self.max_digits;
        std::iter::from_fn(move || {
            if d > cap {
                None
            } else {
                let cur = d;
                d = d.saturating_mul(2);
                Some(cur)
            }
        })
    }
}

/// An arbitrary-precision real carrying an explicit decimal-digit precision.
#[derive(Clone, Debug)]
pub struct HpReal {
    v: BigFloat,
    digits: u32,
}

impl HpReal {
    fn wrap(v: BigFloat, digits: u32) -> Self {
        HpReal { v, digits: digits.max(MIN_DIGITS) }
    }

    pub fn from_u64(x: u64, digits: u32) -> Self {
        Self::wrap(BigFloat::from_u64(x, bits_for(digits)), digits)
    }

    pub fn from_u128(x: u128, digits: u32) -> Self {
        Self::wrap(BigFloat::from_u128(x, bits_for(digits)), digits)
    }

    pub fn from_i64(x: i64, digits: u32) -> Self {
        Self::wrap(BigFloat::from_i64(x, bits_for(digits)), digits)
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        Self::wrap(BigFloat::from_f64(x, bits_for(digits)), digits)
    }

    /// Exact conversion of a big natural number, then rounded to precision.
    pub fn from_biguint(x: &BigUint, digits: u32) -> Self {
        let words = x.to_u64_digits();
        if words.is_empty() {
            return Self::from_u64(0, digits);
        }
        let e = (words.len() * 64) as astro_float::Exponent;
        let v = BigFloat::from_words(&words, Sign::Pos, e);
        let p = bits_for(digits);
        let rounded = v.add(&BigFloat::from_u64(0, p), p, RM);
        Self::wrap(rounded, digits)
    }

    pub fn parse_decimal(s: &str, digits: u32) -> Result<Self> {
        let v = with_consts(|cc| BigFloat::parse(s, Radix::Dec, bits_for(digits), RM, cc));
        if v.is_nan() {
            return Err(Error::parse(format!("invalid decimal literal {s:?}")));
        }
        Ok(Self::wrap(v, digits))
    }

    /// Euler-Mascheroni constant at the requested precision (at most 125
    /// digits are meaningful, which is plenty for the 640-digit cap on
    /// derived quantities that only need gamma to leading accuracy).
    pub fn euler_gamma(digits: u32) -> Self {
        Self::parse_decimal(EULER_GAMMA_125, digits).expect("gamma literal")
    }

    pub fn infinity() -> Self {
        let one = BigFloat::from_u64(1, 64);
        let zero = BigFloat::from_u64(0, 64);
        Self::wrap(one.div(&zero, 64, RM), MIN_DIGITS)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Re-round to a (typically lower) precision tag.
    pub fn with_digits(&self, digits: u32) -> Self {
        let p = bits_for(digits);
        Self::wrap(self.v.add(&BigFloat::from_u64(0, p), p, RM), digits)
    }

    fn op_digits(&self, other: &Self) -> u32 {
        self.digits.max(other.digits)
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = self.op_digits(other);
        Self::wrap(self.v.add(&other.v, bits_for(d), RM), d)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let d = self.op_digits(other);
        Self::wrap(self.v.sub(&other.v, bits_for(d), RM), d)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.op_digits(other);
        Self::wrap(self.v.mul(&other.v, bits_for(d), RM), d)
    }

    pub fn div(&self, other: &Self) -> Self {
        let d = self.op_digits(other);
        Self::wrap(self.v.div(&other.v, bits_for(d), RM), d)
    }

    pub fn neg(&self) -> Self {
        Self::wrap(self.v.neg(), self.digits)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.digits)
    }

    pub fn powi(&self, n: u64) -> Self {
        Self::wrap(self.v.powi(n as usize, bits_for(self.digits), RM), self.digits)
    }

    /// Natural logarithm. Errors on non-positive input.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(Error::domain(format!("ln of non-positive value {self}")));
        }
        let p = bits_for(self.digits);
        let r = with_consts(|cc| self.v.ln(p, RM, cc));
        Ok(Self::wrap(r, self.digits))
    }

    pub fn exp(&self) -> Self {
        let p = bits_for(self.digits);
        let r = with_consts(|cc| self.v.exp(p, RM, cc));
        Self::wrap(r, self.digits)
    }

    /// k-th root of a positive value, via exp(ln(x)/k).
    pub fn root(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("zeroth root".to_string()));
        }
        let ln = self.ln()?;
        Ok(ln.div(&Self::from_u64(k as u64, self.digits)).exp())
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.v.is_nan() && self.v.is_positive() && !self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn is_infinite(&self) -> bool {
        self.v.is_inf()
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.v.is_zero() {
            return 0.0;
        }
        let (words, _n, sign, e, _) = self.v.as_raw_parts().expect("finite value");
        let mut frac = 0.0f64;
        for (i, w) in words.iter().rev().take(2).enumerate() {
            frac += (*w as f64) * (2f64).powi(-64 * (i as i32 + 1));
        }
        let mag = frac * (2f64).powi(e);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Compare under a guard band of roughly `10^-(digits-2)` relative to the
    /// larger operand, using the smaller precision tag of the two.
    pub fn cmp_guarded(&self, other: &Self) -> GuardedOrd {
        let d = self.digits.min(other.digits);
        let diff = self.sub(other);
        if diff.is_zero() {
            return GuardedOrd::Indeterminate;
        }
        // band in binary exponent terms: 10^-(d-2) ~ 2^-(3.322 (d-2))
        let band_bits = ((d.saturating_sub(2)) as i64 * 3322) / 1000;
        let scale_exp = match (self.v.exponent(), other.v.exponent()) {
            (Some(a), Some(b)) => a.max(b) as i64,
            (Some(a), None) => a as i64,
            (None, Some(b)) => b as i64,
            (None, None) => 0,
        };
        let diff_exp = diff.v.exponent().unwrap_or(astro_float::EXPONENT_MIN) as i64;
        if diff_exp <= scale_exp - band_bits {
            return GuardedOrd::Indeterminate;
        }
        if diff.is_negative() {
            GuardedOrd::Less
        } else {
            GuardedOrd::Greater
        }
    }

    /// Decimal rendering with `places` digits after the point, truncated
    /// toward zero (the rounding convention of the reference tables).
    pub fn decimal_truncated(&self, places: usize) -> String {
        self.decimal_places(places, true)
    }

    fn decimal_places(&self, places: usize, truncate: bool) -> String {
        if self.v.is_nan() {
            return "NaN".to_string();
        }
        if self.v.is_inf() {
            return if self.v.is_inf_neg() { "-inf".to_string() } else { "inf".to_string() };
        }
        if self.v.is_zero() {
            return format!("{:.*}", places, 0.0);
        }
        let (sign, mantissa, exp) =
            with_consts(|cc| self.v.convert_to_radix(Radix::Dec, RM, cc)).expect("radix conversion");
        // value = 0.m[0]m[1]... * 10^exp
        let neg = sign == Sign::Neg;
        let mut int_part = String::new();
        let mut frac_digits: Vec<u8> = Vec::new();
        if exp <= 0 {
            int_part.push('0');
            for _ in 0..(-exp) as usize {
                frac_digits.push(0);
            }
            frac_digits.extend(mantissa.iter().copied());
        } else {
            let e = exp as usize;
            for i in 0..e {
                int_part.push(char::from(b'0' + mantissa.get(i).copied().unwrap_or(0)));
            }
            frac_digits.extend(mantissa.iter().skip(e).copied());
        }
        frac_digits.resize(places.max(frac_digits.len()), 0);
        let mut kept: Vec<u8> = frac_digits[..places].to_vec();
        if !truncate {
            // round half away from zero on the digit after the cut
            if frac_digits.get(places).copied().unwrap_or(0) >= 5 {
                let mut i = places;
                loop {
                    if i == 0 {
                        // carry into the integer part
                        let mut carry = true;
                        let mut chars: Vec<u8> = int_part.bytes().collect();
                        for c in chars.iter_mut().rev() {
                            if carry {
                                if *c == b'9' {
                                    *c = b'0';
                                } else {
                                    *c += 1;
                                    carry = false;
                                }
                            }
                        }
                        if carry {
                            chars.insert(0, b'1');
                        }
                        int_part = String::from_utf8(chars).unwrap();
                        break;
                    }
                    i -= 1;
                    if kept[i] == 9 {
                        kept[i] = 0;
                    } else {
                        kept[i] += 1;
                        break;
                    }
                }
            }
        }
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int_part);
        if places > 0 {
            out.push('.');
            for d in kept {
                out.push(char::from(b'0' + d));
            }
        }
        out
    }

    /// Decimal string with `sig` significant digits in scientific-free form
    /// when reasonable, falling back to exponent notation.
    pub fn decimal_significant(&self, sig: usize) -> String {
        if self.v.is_nan() {
            return "NaN".to_string();
        }
        if self.v.is_inf() {
            return if self.v.is_inf_neg() { "-inf".to_string() } else { "inf".to_string() };
        }
        if self.v.is_zero() {
            return "0".to_string();
        }
        let (sign, mantissa, exp) =
            with_consts(|cc| self.v.convert_to_radix(Radix::Dec, RM, cc)).expect("radix conversion");
        let neg = sign == Sign::Neg;
        let mut digits: Vec<u8> = mantissa;
        digits.resize(sig.max(1) + 1, 0);
        // round the last kept digit
        if digits[sig] >= 5 {
            let mut i = sig;
            let mut carried_out = false;
            loop {
                if i == 0 {
                    carried_out = true;
                    break;
                }
                i -= 1;
                if digits[i] == 9 {
                    digits[i] = 0;
                } else {
                    digits[i] += 1;
                    break;
                }
            }
            if carried_out {
                digits.insert(0, 1);
            }
        }
        digits.truncate(sig.max(1));
        let exp = exp as i64 + if digits.len() > sig.max(1) { 1 } else { 0 };
        let body: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
        let s = if exp >= 1 && (exp as usize) <= sig.max(1) {
            let (ip, fp) = body.split_at(exp as usize);
            if fp.is_empty() {
                ip.to_string()
            } else {
                format!("{ip}.{fp}")
            }
        } else if exp <= 0 && exp > -6 {
            format!("0.{}{}", "0".repeat((-exp) as usize), body)
        } else {
            let (first, rest) = body.split_at(1);
            format!("{first}.{rest}e{}", exp - 1)
        };
        if neg {
            format!("-{s}")
        } else {
            s
        }
    }
}

impl fmt::Display for HpReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.decimal_significant(self.digits as usize))
    }
}

impl PartialEq for HpReal {
    fn eq(&self, other: &Self) -> bool {
        self.v == other.v
    }
}

impl PartialOrd for HpReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.partial_cmp(&other.v)
    }
}

/// Run a guarded comparison at stage-2 precision, escalating by doubling
/// until determinate or the policy cap is exhausted.
pub(crate) fn decide_with_escalation(
    policy: &PrecisionPolicy,
    context: impl Fn() -> String,
    mut eval: impl FnMut(u32) -> Result<(HpReal, HpReal)>,
) -> Result<(Ordering, u32)> {
    let mut last = policy.stage2_digits;
    for digits in policy.escalation_digits() {
        last = digits;
        let (a, b) = eval(digits)?;
        match a.cmp_guarded(&b) {
            GuardedOrd::Less => return Ok((Ordering::Less, digits)),
            GuardedOrd::Greater => return Ok((Ordering::Greater, digits)),
            GuardedOrd::Indeterminate => continue,
        }
    }
    Err(Error::Indeterminate { context: context(), digits: last })
}
