pub mod error;
pub mod factored;
pub mod gronwall;
pub mod hp;
pub mod primes;
pub mod rational;
mod exec;
pub use error::{Error, Result};
pub use factored::{is_prime_u128, FactoredInteger};
pub use gronwall::{candidate_primes, gronwall_g, gronwall_quotient, is_ga1, Ga1Verdict, Ga1Witness};
pub use hp::{GuardedOrd, HpReal, PrecisionPolicy};
pub use primes::PrimeTable;
pub use rational::ExactRational;
