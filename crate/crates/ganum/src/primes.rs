//! Prime sieve, Chebyshev theta, and primorial products.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::factored::FactoredInteger;
use crate::hp::HpReal;

/// All primes up to a limit, from a segmented sieve. Queries beyond the
/// limit are errors, never silent truncation.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

const SEGMENT: usize = 1 << 20;

impl PrimeTable {
    pub fn up_to(limit: u64) -> Self {
        let mut primes: Vec<u64> = Vec::new();
        if limit < 2 {
            return PrimeTable { limit, primes };
        }
        let root = (limit as f64).sqrt() as u64 + 1;
        let mut base = vec![true; (root + 1) as usize];
        let mut i = 2u64;
        while i * i <= root {
            if base[i as usize] {
                let mut j = i * i;
                while j <= root {
                    base[j as usize] = false;
                    j += i;
                }
            }
            i += 1;
        }
        let base_primes: Vec<u64> = (2..=root).filter(|&i| base[i as usize]).collect();
        let mut seg = vec![true; SEGMENT];
        let mut lo = 2u64;
        while lo <= limit {
            let hi = (lo + SEGMENT as u64 - 1).min(limit);
            let len = (hi - lo + 1) as usize;
            seg[..len].fill(true);
            for &p in &base_primes {
                if p * p > hi {
                    break;
                }
                let mut start = (lo + p - 1) / p * p;
                if start < p * p {
                    start = p * p;
                }
                let mut j = start;
                while j <= hi {
                    seg[(j - lo) as usize] = false;
                    j += p;
                }
            }
            for k in 0..len {
                if seg[k] {
                    primes.push(lo + k as u64);
                }
            }
            lo = hi + 1;
        }
        PrimeTable { limit, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The primes `<= x`, erroring when `x` is beyond the sieved range.
    pub fn primes_at_most(&self, x: f64) -> Result<&[u64]> {
        if x > self.limit as f64 {
            return Err(Error::SieveRange { x, limit: self.limit });
        }
        let cut = self.primes.partition_point(|&p| p as f64 <= x);
        Ok(&self.primes[..cut])
    }

    /// Chebyshev `theta(x) = sum of ln p over p <= x` at the given decimal
    /// precision. Primes are batched into exact chunk products so the cost
    /// is one high-precision logarithm per chunk rather than per prime.
    pub fn theta(&self, x: f64, digits: u32) -> Result<HpReal> {
        if x < 2.0 {
            return Err(Error::domain(format!("theta requires x >= 2, got {x}")));
        }
        let ps = self.primes_at_most(x)?;
        let mut acc = HpReal::from_u64(0, digits);
        for chunk in ps.chunks(16) {
            let mut prod = BigUint::from(1u32);
            for &p in chunk {
                prod *= BigUint::from(p);
            }
            acc = acc.add(&HpReal::from_biguint(&prod, digits).ln()?);
        }
        Ok(acc)
    }

    /// Fast compensated-summation theta for wide scans.
    pub fn theta_f64(&self, x: f64) -> Result<f64> {
        let ps = self.primes_at_most(x)?;
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for &p in ps {
            let term = (p as f64).ln() - comp;
            let t = sum + term;
            comp = (t - sum) - term;
            sum = t;
        }
        Ok(sum)
    }

    /// Product of all primes `< x` (or `<= x` when `strict` is off), as a
    /// squarefree factored integer.
    pub fn primorial_below(&self, x: f64, strict: bool) -> Result<FactoredInteger> {
        if x < 2.0 {
            return Err(Error::domain(format!("primorial requires x >= 2, got {x}")));
        }
        let ps = self.primes_at_most(x)?;
        let keep: Vec<(u128, u32)> = ps
            .iter()
            .copied()
            .filter(|&p| !strict || (p as f64) < x)
            .map(|p| (p as u128, 1))
            .collect();
        Ok(FactoredInteger::from_factors_unchecked(keep))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_counts() {
        let t = PrimeTable::up_to(100);
        assert_eq!(t.primes().len(), 25);
        assert_eq!(t.primes()[0], 2);
        assert_eq!(*t.primes().last().unwrap(), 97);
        let t = PrimeTable::up_to(1_000_000);
        assert_eq!(t.primes().len(), 78_498);
    }

    #[test]
    fn range_errors() {
        let t = PrimeTable::up_to(100);
        assert!(t.primes_at_most(101.0).is_err());
        assert!(t.theta(200.0, 40).is_err());
        assert!(t.theta(1.5, 40).is_err());
        assert!(t.primorial_below(1.0, false).is_err());
    }

    #[test]
    fn theta_small_values() {
        let t = PrimeTable::up_to(100);
        let th2 = t.theta(2.0, 40).unwrap();
        assert!(th2.decimal_significant(10).starts_with("0.693147180"));
        let th10 = t.theta(10.0, 40).unwrap();
        // ln 210
        assert!(th10.decimal_significant(12).starts_with("5.3471075307"));
    }

    #[test]
    fn theta_20000() {
        let t = PrimeTable::up_to(20_000);
        let th = t.theta(20_000.0, 40).unwrap();
        let s = th.decimal_significant(15);
        assert!(s.starts_with("19805.3096243"), "{s}");
        assert!(th.to_f64() > 19747.0 && th.to_f64() < 20000.0);
        let fast = t.theta_f64(20_000.0).unwrap();
        assert!((fast - th.to_f64()).abs() < 1e-6);
    }

    #[test]
    fn theta_steps_at_primes() {
        let t = PrimeTable::up_to(100);
        let a = t.theta(28.9, 40).unwrap();
        let b = t.theta(29.0, 40).unwrap();
        let diff = b.sub(&a);
        assert!(diff.sub(&HpReal::from_u64(29, 40).ln().unwrap()).abs().to_f64() < 1e-30);
        let c = t.theta(30.0, 40).unwrap();
        assert!(b.sub(&c).is_zero());
    }

    #[test]
    fn primorials() {
        let t = PrimeTable::up_to(100);
        let two = t.primorial_below(3.0, true).unwrap();
        assert_eq!(two.value_u128(), Some(2));
        let p210 = t.primorial_below(10.0, false).unwrap();
        assert_eq!(p210.value_u128(), Some(210));
        let m = t.primorial_below(19.03, false).unwrap();
        assert_eq!(m.value_u128(), Some(9_699_690));
        let strict19 = t.primorial_below(19.0, true).unwrap();
        assert_eq!(strict19.value_u128(), Some(510_510));
    }
}
