//! Small combinatorial helpers shared across modules.

use num_bigint::BigUint;
use num_traits::One;

/// Binomial coefficient C(n, k) in u128, saturating at `u128::MAX`.
///
/// Saturation only matters far beyond any enumerable range; callers that
/// partition enumeration ranges first check the value against a budget,
/// which a saturated value always exceeds.
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k {
        // c * (n - k + i) / i is exact at every step.
        let factor = (n - k + i) as u128;
        match c.checked_mul(factor) {
            Some(v) => c = v / i as u128,
            None => {
                // Try dividing first; if it still overflows, saturate.
                let g = gcd(c, i as u128);
                let c2 = c / g;
                let i2 = i as u128 / g;
                match c2.checked_mul(factor) {
                    Some(v) => c = v / i2,
                    None => return u128::MAX,
                }
            }
        }
    }
    c
}

/// Exact binomial coefficient as a big integer.
pub fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 1..=k {
        c = c * (n - k + i) / i;
    }
    c
}

/// k! as a big integer.
pub fn factorial_big(k: u64) -> BigUint {
    let mut f = BigUint::one();
    for i in 2..=k {
        f *= i;
    }
    f
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}
