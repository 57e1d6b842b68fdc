//! Arithmetic substrate for `frobrel`.
//!
//! Finite fields `F_{p^n}`, polynomials over prime fields with a complete
//! factorisation routine, exact integer linear algebra (Hermite normal form,
//! integer kernels), integral LLL reduction, integer/rational polynomials
//! with Sturm sequences, and a small fixed-point ball arithmetic for
//! certified high-precision real and complex values.

pub mod ball;
pub mod error;
pub mod field;
pub mod intmat;
pub mod lll;
pub mod modpoly;
pub mod zpoly;

pub use ball::{Ball, CBall};
pub use error::ArithError;
pub use field::FieldCtx;
pub use intmat::IntMatrix;
pub use modpoly::ModPoly;
pub use zpoly::ZPoly;

/// Default cap on field size for exhaustive enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 200_000_000;

/// Deterministic trial-division primality test; arguments here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Odd primes in increasing order starting at 3.
pub fn odd_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| is_prime(n))
}

/// If `q` is a prime power `p^e` returns `(p, e)`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some((q, 1));
    }
    let mut e = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

pub(crate) fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

pub(crate) fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(t.rem_euclid(m as i128) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_powers() {
        assert!(is_prime(541));
        assert!(!is_prime(1));
        assert!(!is_prime(561));
        assert_eq!(odd_primes().take(4).collect::<Vec<_>>(), vec![3, 5, 7, 11]);
        assert_eq!(prime_power(25), Some((5, 2)));
        assert_eq!(prime_power(343), Some((7, 3)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(13), Some((13, 1)));
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(mod_pow(3, 4, 7), 4);
        assert_eq!(mod_inv(3, 7), Some(5));
        assert_eq!(mod_inv(4, 8), None);
    }
}
