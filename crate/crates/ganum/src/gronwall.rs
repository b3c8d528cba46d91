//! Gronwall's function, the Gronwall quotient with its candidate-prime
//! reduction, and the GA1 membership test.

use std::cmp::Ordering;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::factored::FactoredInteger;
use crate::hp::{decide_with_escalation, HpReal, PrecisionPolicy};
use crate::rational::{rational_from_biguint, rational_to_hp, ExactRational};

/// `sigma(n)/n` exactly, as the product of `(p^(e+1)-1) / (p^e (p-1))`
/// over the factorization.
pub fn sigma_ratio(n: &FactoredInteger) -> ExactRational {
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for &(p, e) in n.factors() {
        let p = BigUint::from(p);
        num *= p.pow(e + 1) - 1u32;
        den *= p.pow(e) * (p - 1u32);
    }
    rational_from_biguint(num, den)
}

/// `G(n) = sigma(n) / (n log log n)` at the policy's stage-2 precision.
/// Defined for `n >= 2`; negative for `n = 2`.
pub fn gronwall_g(n: &FactoredInteger, policy: &PrecisionPolicy) -> Result<HpReal> {
    gronwall_g_at(n, policy.stage2_digits)
}

pub(crate) fn gronwall_g_at(n: &FactoredInteger, digits: u32) -> Result<HpReal> {
    if n.is_one() {
        return Err(Error::domain("G(n) is undefined for n <= 1 (got n = 1)".to_string()));
    }
    let ratio = rational_to_hp(&sigma_ratio(n), digits);
    let lnln = n.lnln_value(digits)?;
    Ok(ratio.div(&lnln))
}

/// The candidate-prime set `S(n)`, largest first: the largest prime factor,
/// then inductively the largest smaller prime whose exponent exceeds the
/// previous candidate's. Only meaningful as a reduction of the quotient for
/// `Omega(n) >= 3`; errors unless `n` is composite.
pub fn candidate_primes(n: &FactoredInteger) -> Result<Vec<u128>> {
    if !n.is_composite() {
        return Err(Error::domain(format!(
            "candidate primes require a composite argument, got {n}"
        )));
    }
    let factors = n.factors();
    let mut out = Vec::new();
    let (mut q, mut vq) = *factors.last().expect("composite");
    out.push(q);
    loop {
        let next = factors
            .iter()
            .rev()
            .find(|&&(p, v)| p < q && v > vq)
            .copied();
        match next {
            Some((p, v)) => {
                out.push(p);
                q = p;
                vq = v;
            }
            None => break,
        }
    }
    Ok(out)
}

/// One term of the quotient: `G(n/p)/G(n)` in closed form,
/// `(p^(v+1) - p)/(p^(v+1) - 1) * log log n / log log (n/p)`.
fn quotient_term(n: &FactoredInteger, ln_n: &HpReal, lnln_n: &HpReal, p: u128, digits: u32) -> Result<HpReal> {
    let v = n.exponent_of(p);
    debug_assert!(v >= 1);
    let pw = BigUint::from(p).pow(v + 1);
    let rat = rational_from_biguint(&pw - BigUint::from(p), &pw - BigUint::from(1u32));
    let ln_np = ln_n.sub(&crate::factored::ln_prime(p, digits));
    let lnln_np = ln_np.ln()?;
    Ok(rational_to_hp(&rat, digits).mul(lnln_n).div(&lnln_np))
}

/// Quotient evaluation at an explicit precision, returning the value and the
/// maximizing prime. Uses `S(n)` when `Omega(n) >= 3`; for `Omega(n) = 2`
/// the reduction lemma does not apply (removing the smaller prime can leave
/// `log log` negative), so both prime divisors are examined.
pub(crate) fn quotient_at(n: &FactoredInteger, digits: u32) -> Result<(HpReal, u128)> {
    if !n.is_composite() {
        return Err(Error::domain(format!(
            "the Gronwall quotient requires a composite argument, got {n}"
        )));
    }
    let candidates: Vec<u128> = if n.omega() >= 3 {
        candidate_primes(n)?
    } else {
        n.factors().iter().rev().map(|&(p, _)| p).collect()
    };
    let ln_n = n.ln_value(digits);
    let lnln_n = ln_n.ln()?;
    let mut best: Option<(HpReal, u128)> = None;
    for p in candidates {
        let term = quotient_term(n, &ln_n, &lnln_n, p, digits)?;
        match &best {
            Some((b, _)) if !(term > *b) => {}
            _ => best = Some((term, p)),
        }
    }
    Ok(best.expect("composite numbers have at least one prime factor"))
}

/// The Gronwall quotient `Q(n) = max G(n/p)/G(n)` over prime divisors, at
/// the policy's stage-2 precision. Requires composite `n >= 4`.
pub fn gronwall_quotient(n: &FactoredInteger, policy: &PrecisionPolicy) -> Result<HpReal> {
    Ok(quotient_at(n, policy.stage2_digits)?.0)
}

/// Certificate accompanying a GA1 decision.
#[derive(Clone, Debug)]
pub struct Ga1Witness {
    /// The prime maximizing `G(n/p)/G(n)`.
    pub prime: u128,
    /// The quotient value at the final precision used.
    pub quotient: HpReal,
}

/// Outcome of the GA1 membership test.
#[derive(Clone, Debug)]
pub struct Ga1Verdict {
    pub is_ga1: bool,
    /// False for 1 and primes, which are never GA1.
    pub composite: bool,
    /// GA1 with at least three prime factors counted with multiplicity.
    pub proper: bool,
    pub witness: Option<Ga1Witness>,
    /// The stage-2 precision did not separate `Q(n)` from 1 and escalation
    /// was needed.
    pub borderline: bool,
}

/// Decide whether `n` is a GA1 number: composite with `Q(n) <= 1`.
///
/// Stage 1 screens at the policy's first precision, keeping candidates with
/// `Q <= 1 + guard`; survivors are decided at stage-2 precision, doubling
/// while the comparison stays inside the guard band. Hitting the precision
/// cap is an error, never a guess.
pub fn is_ga1(n: &FactoredInteger, policy: &PrecisionPolicy) -> Result<Ga1Verdict> {
    if !n.is_composite() {
        return Ok(Ga1Verdict {
            is_ga1: false,
            composite: false,
            proper: false,
            witness: None,
            borderline: false,
        });
    }
    let proper_omega = n.omega() >= 3;
    let (q1, p1) = quotient_at(n, policy.stage1_digits)?;
    let threshold = HpReal::from_u64(1, policy.stage1_digits)
        .add(&HpReal::from_f64(policy.stage1_guard, policy.stage1_digits));
    if q1 > threshold {
        return Ok(Ga1Verdict {
            is_ga1: false,
            composite: true,
            proper: false,
            witness: Some(Ga1Witness { prime: p1, quotient: q1 }),
            borderline: false,
        });
    }
    let mut final_witness: Option<Ga1Witness> = None;
    let (ord, digits_used) = decide_with_escalation(
        policy,
        || format!("Q({n}) against 1"),
        |digits| {
            let (q, p) = quotient_at(n, digits)?;
            final_witness = Some(Ga1Witness { prime: p, quotient: q.clone() });
            Ok((q, HpReal::from_u64(1, digits)))
        },
    )?;
    Ok(Ga1Verdict {
        is_ga1: ord == Ordering::Less,
        composite: true,
        proper: ord == Ordering::Less && proper_omega,
        witness: final_witness,
        borderline: digits_used > policy.stage2_digits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fac(n: u128) -> FactoredInteger {
        FactoredInteger::factorize(n).unwrap()
    }

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn sigma_ratio_values() {
        assert_eq!(sigma_ratio(&FactoredInteger::one()).to_string(), "1");
        assert_eq!(sigma_ratio(&fac(4)).to_string(), "7/4");
        let r5040 = sigma_ratio(&fac(5040));
        assert_eq!(crate::rational::rational_decimal_truncated(&r5040, 3), "3.838");
    }

    #[test]
    fn g_values_match_reference() {
        let g4 = gronwall_g(&fac(4), &policy()).unwrap();
        assert_eq!(g4.decimal_truncated(3), "5.357");
        let g2 = gronwall_g(&fac(2), &policy()).unwrap();
        assert!(g2.is_negative());
        let g12 = gronwall_g(&fac(12), &policy()).unwrap();
        assert_eq!(g12.decimal_truncated(3), "2.563");
        assert!(g12.decimal_significant(16).starts_with("2.563440313761713"));
        assert!(gronwall_g(&FactoredInteger::one(), &policy()).is_err());
    }

    #[test]
    fn candidate_prime_sets() {
        assert_eq!(candidate_primes(&fac(9)).unwrap(), vec![3]);
        assert_eq!(candidate_primes(&fac(30)).unwrap(), vec![5]);
        assert_eq!(candidate_primes(&fac(5040)).unwrap(), vec![7, 3, 2]);
        assert_eq!(candidate_primes(&fac(183783600)).unwrap(), vec![17, 5, 3, 2]);
        assert!(candidate_primes(&fac(7)).is_err());
        assert!(candidate_primes(&FactoredInteger::one()).is_err());
    }

    #[test]
    fn quotient_values_match_reference() {
        let q4 = gronwall_quotient(&fac(4), &policy()).unwrap();
        assert_eq!(q4.decimal_truncated(3), "-0.763");
        let q30 = gronwall_quotient(&fac(30), &policy()).unwrap();
        assert_eq!(q30.decimal_truncated(3), "1.749");
        let q2520 = gronwall_quotient(&fac(2520), &policy()).unwrap();
        assert_eq!(q2520.decimal_truncated(3), "1.015");
        assert!(gronwall_quotient(&fac(7), &policy()).is_err());
    }

    #[test]
    fn two_factor_quotient_uses_both_primes() {
        // For n = 2p the candidate reduction would only see the removal of p,
        // whose quotient is negative; the decision needs G(p)/G(2p) as well.
        let q14 = gronwall_quotient(&fac(14), &policy()).unwrap();
        assert!(q14.is_positive());
        assert!(q14 < HpReal::from_u64(1, 40));
        let q6 = gronwall_quotient(&fac(6), &policy()).unwrap();
        assert!(q6 > HpReal::from_u64(1, 40));
        assert_eq!(q6.decimal_truncated(3), "4.134");
    }

    #[test]
    fn ga1_examples() {
        let v = is_ga1(&fac(4), &policy()).unwrap();
        assert!(v.is_ga1 && v.composite && !v.proper);
        assert_eq!(v.witness.as_ref().unwrap().prime, 2);

        assert!(is_ga1(&fac(14), &policy()).unwrap().is_ga1);
        assert!(!is_ga1(&fac(105), &policy()).unwrap().is_ga1);

        let nu = is_ga1(&fac(183783600), &policy()).unwrap();
        assert!(nu.is_ga1 && nu.proper);

        let prime = is_ga1(&fac(13), &policy()).unwrap();
        assert!(!prime.is_ga1 && !prime.composite);
        let one = is_ga1(&FactoredInteger::one(), &policy()).unwrap();
        assert!(!one.is_ga1 && !one.composite);
    }

    #[test]
    fn ga1_small_two_factor_numbers() {
        assert!(!is_ga1(&fac(6), &policy()).unwrap().is_ga1);
        assert!(!is_ga1(&fac(10), &policy()).unwrap().is_ga1);
        assert!(is_ga1(&fac(22), &policy()).unwrap().is_ga1);
        assert!(!is_ga1(&fac(9), &policy()).unwrap().is_ga1);
        assert!(!is_ga1(&fac(8), &policy()).unwrap().is_ga1);
    }

    #[test]
    fn odd_ga1_witness() {
        let omega = FactoredInteger::parse(
            "3^4*5^3*7^2*11^2*13*17*19*23*29*31*37*41*43*47*53*59*61*67*71*73",
        )
        .unwrap();
        let v = is_ga1(&omega, &policy()).unwrap();
        assert!(v.is_ga1 && v.proper && !v.borderline);
        let w = v.witness.unwrap();
        assert_eq!(w.prime, 73);
        assert!(w.quotient.decimal_significant(12).starts_with("0.9998936357"));
    }

    #[test]
    fn decisions_stable_under_higher_precision() {
        let tighter = PrecisionPolicy::new(40, 1e-10, 80, 640).unwrap();
        for n in [4u128, 6, 14, 105, 360, 5040, 183783600] {
            let a = is_ga1(&fac(n), &policy()).unwrap();
            let b = is_ga1(&fac(n), &tighter).unwrap();
            assert_eq!(a.is_ga1, b.is_ga1, "n = {n}");
        }
    }
}
