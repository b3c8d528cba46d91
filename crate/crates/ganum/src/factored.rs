//! Integers represented by their ordered prime factorization — the universal
//! currency of this crate. Logarithms are always taken from the exponents,
//! so a value never has to be expanded to decide anything about its size.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::hp::HpReal;

/// An integer `> 0` as a list of `(prime, exponent)` pairs with strictly
/// increasing primes and positive exponents. The empty list is `1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    factors: Vec<(u128, u32)>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger { factors: Vec::new() }
    }

    pub fn from_prime(p: u128) -> Result<Self> {
        Self::from_factors(vec![(p, 1)])
    }

    /// Validates primality of every base, strict ordering, and positive
    /// exponents.
    pub fn from_factors(factors: Vec<(u128, u32)>) -> Result<Self> {
        let mut prev = 0u128;
        for &(p, e) in &factors {
            if e == 0 {
                return Err(Error::parse(format!("exponent of {p} must be positive")));
            }
            if p <= prev {
                return Err(Error::parse(format!(
                    "primes must be strictly increasing; {p} follows {prev}"
                )));
            }
            if !is_prime_u128(p) {
                return Err(Error::parse(format!("{p} is not prime")));
            }
            prev = p;
        }
        Ok(FactoredInteger { factors })
    }

    /// Skips validation; for internal construction from already-checked data.
    pub(crate) fn from_factors_unchecked(factors: Vec<(u128, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|&(_, e)| e > 0));
        FactoredInteger { factors }
    }

    /// Parse either a plain decimal integer or a factorization of the form
    /// `p1^e1*p2^e2*...` (exponents optional).
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::parse("empty input".to_string()));
        }
        if !t.contains('^') && !t.contains('*') {
            let n = u128::from_str(t).map_err(|_| {
                if t.bytes().all(|b| b.is_ascii_digit()) {
                    Error::TooLargeToFactor(t.to_string())
                } else {
                    Error::parse(format!("{t:?} is neither an integer nor a factorization"))
                }
            })?;
            return Self::factorize(n);
        }
        let mut factors = Vec::new();
        for part in t.split('*') {
            let part = part.trim();
            let (base_s, exp_s) = match part.split_once('^') {
                Some((b, e)) => (b.trim(), Some(e.trim())),
                None => (part, None),
            };
            let p = u128::from_str(base_s)
                .map_err(|_| Error::parse(format!("invalid prime base {base_s:?}")))?;
            let e = match exp_s {
                Some(s) => u32::from_str(s)
                    .map_err(|_| Error::parse(format!("invalid exponent {s:?}")))?,
                None => 1,
            };
            factors.push((p, e));
        }
        Self::from_factors(factors)
    }

    /// Factor an integer by trial division up to 10^6 followed by
    /// Pollard-Brent rho; inputs with prime factors far beyond 64 bits can
    /// take long, supply those pre-factored.
    pub fn factorize(mut n: u128) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("0 has no prime factorization".to_string()));
        }
        let mut map: HashMap<u128, u32> = HashMap::new();
        for &p in small_primes() {
            let p = p as u128;
            if p * p > n {
                break;
            }
            while n % p == 0 {
                *map.entry(p).or_insert(0) += 1;
                n /= p;
            }
        }
        if n > 1 {
            let mut stack = vec![n];
            while let Some(m) = stack.pop() {
                if is_prime_u128(m) {
                    *map.entry(m).or_insert(0) += 1;
                } else {
                    let d = pollard_brent(m);
                    stack.push(d);
                    stack.push(m / d);
                }
            }
        }
        let mut factors: Vec<(u128, u32)> = map.into_iter().collect();
        factors.sort_unstable();
        Ok(FactoredInteger { factors })
    }

    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of prime factors counted with multiplicity.
    pub fn omega(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    /// At least two prime factors counted with multiplicity.
    pub fn is_composite(&self) -> bool {
        self.omega() >= 2
    }

    pub fn is_prime(&self) -> bool {
        self.omega() == 1
    }

    /// Largest prime factor; errors on 1.
    pub fn largest_prime(&self) -> Result<u128> {
        self.factors
            .last()
            .map(|&(p, _)| p)
            .ok_or_else(|| Error::domain("P(1) is undefined".to_string()))
    }

    pub fn exponent_of(&self, p: u128) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// Multiply by a prime, preserving canonical form. The caller vouches
    /// for primality (checked in debug builds).
    pub fn mul_prime(&self, p: u128) -> Self {
        debug_assert!(is_prime_u128(p), "{p} is not prime");
        let mut factors = self.factors.clone();
        match factors.binary_search_by_key(&p, |&(q, _)| q) {
            Ok(i) => factors[i].1 += 1,
            Err(i) => factors.insert(i, (p, 1)),
        }
        FactoredInteger { factors }
    }

    /// Divide by a prime; errors if `p` does not divide the value.
    pub fn div_prime(&self, p: u128) -> Result<Self> {
        let mut factors = self.factors.clone();
        match factors.binary_search_by_key(&p, |&(q, _)| q) {
            Ok(i) => {
                if factors[i].1 == 1 {
                    factors.remove(i);
                } else {
                    factors[i].1 -= 1;
                }
                Ok(FactoredInteger { factors })
            }
            Err(_) => Err(Error::domain(format!("{p} does not divide {self}"))),
        }
    }

    pub fn value_biguint(&self) -> BigUint {
        let mut v = BigUint::from(1u32);
        for &(p, e) in &self.factors {
            v *= BigUint::from(p).pow(e);
        }
        v
    }

    pub fn value_u128(&self) -> Option<u128> {
        let mut v: u128 = 1;
        for &(p, e) in &self.factors {
            for _ in 0..e {
                v = v.checked_mul(p)?;
            }
        }
        Some(v)
    }

    /// `ln n` as a fast double, from the exponents.
    pub fn ln_f64(&self) -> f64 {
        self.factors
            .iter()
            .map(|&(p, e)| e as f64 * (p as f64).ln())
            .sum()
    }

    /// `ln n` at tagged precision, computed as a sum of `e_p ln p` so the
    /// value itself is never expanded.
    pub fn ln_value(&self, digits: u32) -> HpReal {
        let mut acc = HpReal::from_u64(0, digits);
        for &(p, e) in &self.factors {
            let term = ln_prime(p, digits).mul(&HpReal::from_u64(e as u64, digits));
            acc = acc.add(&term);
        }
        acc
    }

    /// `ln ln n`; requires `n >= 2`.
    pub fn lnln_value(&self, digits: u32) -> Result<HpReal> {
        if self.is_one() {
            return Err(Error::domain("log log n undefined for n = 1".to_string()));
        }
        self.ln_value(digits).ln()
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        if self.factors == other.factors {
            return Ordering::Equal;
        }
        let (a, b) = (self.ln_f64(), other.ln_f64());
        if (a - b).abs() > 1e-9 {
            return a.partial_cmp(&b).unwrap();
        }
        self.value_biguint().cmp(&other.value_biguint())
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for &(p, e) in &self.factors {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

impl PartialOrd for FactoredInteger {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Ord for FactoredInteger {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cmp_value(other)
    }
}

/// Per-thread cache of `ln p` at each precision; prime logarithms dominate
/// every hot loop in the crate.
pub(crate) fn ln_prime(p: u128, digits: u32) -> HpReal {
    use std::cell::RefCell;
    thread_local! {
        static CACHE: RefCell<HashMap<(u128, u32), HpReal>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|c| {
        if let Some(v) = c.borrow().get(&(p, digits)) {
            return v.clone();
        }
        let v = HpReal::from_u128(p, digits).ln().expect("prime is positive");
        c.borrow_mut().insert((p, digits), v.clone());
        v
    })
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        const LIMIT: usize = 1_000_000;
        let mut sieve = vec![true; LIMIT + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2usize;
        while i * i <= LIMIT {
            if sieve[i] {
                let mut j = i * i;
                while j <= LIMIT {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (2..=LIMIT).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

fn mul_mod(mut a: u128, mut b: u128, m: u128) -> u128 {
    if let (Some(sa), Some(sb)) = (u64::try_from(a).ok(), u64::try_from(b).ok()) {
        return (sa as u128 * sb as u128) % m;
    }
    let mut acc: u128 = 0;
    a %= m;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc: u128 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller-Rabin. Deterministic for n < 3.3e24 with the first twelve prime
/// bases; beyond that, extra bases derived from n push the error probability
/// below 2^-64.
pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let witness = |a: u128| -> bool {
        // true when a proves n composite
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            return false;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                return false;
            }
        }
        true
    };
    for a in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if witness(a) {
            return false;
        }
    }
    if n < 318_665_857_834_031_151_167_461 {
        return true;
    }
    let mut seed = (n as u64) ^ ((n >> 64) as u64) ^ 0x9e37_79b9_7f4a_7c15;
    for _ in 0..32 {
        seed = seed.wrapping_mul(0xd129_0b2e_8f29_52e5).wrapping_add(1);
        let a = 2 + (seed as u128) % (n - 3);
        if witness(a) {
            return false;
        }
    }
    true
}

/// Pollard rho with Brent's cycle detection; returns a nontrivial factor of
/// a composite input.
fn pollard_brent(n: u128) -> u128 {
    debug_assert!(n > 1 && !is_prime_u128(n));
    if n % 2 == 0 {
        return 2;
    }
    let mut c: u128 = 1;
    loop {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let mut x: u128 = 2;
        let mut y = x;
        let mut d: u128 = 1;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u128(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 26 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_grammar() {
        let n = FactoredInteger::parse("2^4*3^2*5*7").unwrap();
        assert_eq!(n.factors(), &[(2, 4), (3, 2), (5, 1), (7, 1)]);
        assert_eq!(n.value_u128(), Some(5040));

        let six = FactoredInteger::parse("6").unwrap();
        assert_eq!(six.factors(), &[(2, 1), (3, 1)]);

        assert!(FactoredInteger::parse("2^2*6").is_err(), "6 is not prime");
        assert!(FactoredInteger::parse("3*2").is_err(), "order must increase");
        assert!(FactoredInteger::parse("2^0").is_err());
        assert!(FactoredInteger::parse("").is_err());
        assert!(FactoredInteger::parse("junk").is_err());
    }

    #[test]
    fn too_large_plain_integer() {
        let s = "340282366920938463463374607431768211456"; // 2^128
        match FactoredInteger::parse(s) {
            Err(Error::TooLargeToFactor(_)) => {}
            other => panic!("expected TooLargeToFactor, got {other:?}"),
        }
    }

    #[test]
    fn factorize_known() {
        let n = FactoredInteger::factorize(183783600).unwrap();
        assert_eq!(n.factors(), &[(2, 4), (3, 3), (5, 2), (7, 1), (11, 1), (13, 1), (17, 1)]);
        assert_eq!(FactoredInteger::factorize(1).unwrap(), FactoredInteger::one());
        // semiprime beyond the trial-division range
        let p = 1_000_003u128;
        let q = 1_000_033u128;
        let n = FactoredInteger::factorize(p * q).unwrap();
        assert_eq!(n.factors(), &[(p, 1), (q, 1)]);
        // large prime survives as itself
        let big = 2_305_843_009_213_693_951u128; // 2^61 - 1
        let n = FactoredInteger::factorize(big * 9).unwrap();
        assert_eq!(n.factors(), &[(3, 2), (big, 1)]);
    }

    #[test]
    fn accessors() {
        let n = FactoredInteger::parse("2^4*3^2*5*7").unwrap();
        assert_eq!(n.omega(), 8);
        assert_eq!(n.largest_prime().unwrap(), 7);
        assert_eq!(n.exponent_of(3), 2);
        assert_eq!(n.exponent_of(11), 0);
        assert!(n.is_composite());
        assert!(FactoredInteger::one().largest_prime().is_err());
    }

    #[test]
    fn mul_div_prime() {
        let n = FactoredInteger::parse("6").unwrap();
        let m = n.mul_prime(3);
        assert_eq!(m.to_string(), "2*3^2");
        let back = m.div_prime(3).unwrap();
        assert_eq!(back, n);
        assert!(n.div_prime(5).is_err());
        assert!(FactoredInteger::parse("2").unwrap().div_prime(2).unwrap().is_one());
    }

    #[test]
    fn ln_from_exponents() {
        let n = FactoredInteger::factorize(183783600).unwrap();
        let ln = n.ln_value(40);
        assert!(ln.decimal_significant(18).starts_with("19.029269536483747"));
        assert!((n.ln_f64() - 19.0292695364837477).abs() < 1e-10);
        assert!(FactoredInteger::one().lnln_value(20).is_err());
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let primes: Vec<u32> = super::small_primes().iter().copied().take_while(|&p| p < 2000).collect();
        for n in 2..2000u32 {
            assert_eq!(is_prime_u128(n as u128), primes.binary_search(&n).is_ok(), "n={n}");
        }
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(v in proptest::collection::vec((0usize..30, 1u32..4), 1..5)) {
            let small: Vec<u128> = vec![2,3,5,7,11,13,17,19,23,29,31,37,41,43,47,53,59,61,67,71,73,79,83,89,97,101,103,107,109,113];
            let mut factors: Vec<(u128, u32)> = v.into_iter().map(|(i, e)| (small[i], e)).collect();
            factors.sort_unstable();
            factors.dedup_by(|a, b| {
                if a.0 == b.0 { b.1 += a.1; true } else { false }
            });
            let n = FactoredInteger::from_factors(factors).unwrap();
            let s = n.to_string();
            let back = FactoredInteger::parse(&s).unwrap();
            prop_assert_eq!(n, back);
        }

        #[test]
        fn factorize_recomposes(n in 2u128..1_000_000_000u128) {
            let f = FactoredInteger::factorize(n).unwrap();
            prop_assert_eq!(f.value_u128(), Some(n));
        }
    }
}
