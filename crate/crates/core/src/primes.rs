//! Primality and roots of unity in `F_p`.

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};

const WITNESSES: [u64; 64] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293,
    307, 311,
];

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Miller-Rabin with the first 64 primes as bases.
///
/// The first twelve bases alone already make the test deterministic on `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &WITNESSES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `p >= 2^(bits-1)` with `p = 1 (mod order)`.
pub fn find_prime_with_unity(order: u64, bits: u32) -> Result<u64> {
    if order == 0 {
        return Err(Error::InvalidArgument("order must be positive".into()));
    }
    if !(40..=62).contains(&bits) {
        return Err(Error::InvalidArgument(format!(
            "bits = {bits} outside 40..=62"
        )));
    }
    let lo = 1u64 << (bits - 1);
    // first candidate >= lo that is 1 mod order
    let r = (lo - 1) % order;
    let mut p = if r == 0 { lo } else { lo - 1 + (order - r) + 1 };
    loop {
        if is_prime(p) {
            return Ok(p);
        }
        p += order;
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            out.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A primitive `n`-th root of unity in `F_p`.
///
/// Deterministic: tries `g = 2, 3, ...` and returns the first `g^((p-1)/n)`
/// of exact order `n`.
pub fn primitive_root_of_unity(p: u64, n: u64) -> Result<u64> {
    if n == 0 || p < 2 || (p - 1) % n != 0 {
        return Err(Error::NoSuchRoot { p, order: n });
    }
    let f = PrimeField::new_unchecked(p);
    let qs = prime_factors(n);
    let e = (p - 1) / n;
    for g in 2..p {
        let x = f.pow(&g, e);
        if qs.iter().all(|q| f.pow(&x, n / q) != 1) {
            return Ok(x);
        }
    }
    Err(Error::NoSuchRoot { p, order: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        let ps: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            ps,
            [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        // strong pseudoprime to many small bases
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
    }

    #[test]
    fn frozen_prime_searches() {
        let p60 = (1u64 << 60) + 33;
        for order in [1, 3, 4, 6, 8, 12, 16] {
            assert_eq!(find_prime_with_unity(order, 61).unwrap(), p60);
        }
        assert_eq!(find_prime_with_unity(2, 41).unwrap(), (1 << 40) + 15);
        assert_eq!(find_prime_with_unity(5, 61).unwrap(), (1 << 60) + 105);
        assert_eq!(find_prime_with_unity(8, 62).unwrap(), (1 << 61) + 57);
        assert_eq!(find_prime_with_unity(12, 62).unwrap(), (1 << 61) + 65);
        assert!(find_prime_with_unity(4, 39).is_err());
        assert!(find_prime_with_unity(4, 63).is_err());
    }

    #[test]
    fn roots_have_exact_order() {
        let p = find_prime_with_unity(12, 61).unwrap();
        let f = PrimeField::new(p).unwrap();
        let z = primitive_root_of_unity(p, 12).unwrap();
        assert_eq!(f.pow(&z, 12), 1);
        for k in 1..12 {
            assert_ne!(f.pow(&z, k), 1);
        }
        assert_eq!(primitive_root_of_unity(p, 1).unwrap(), 1);
        assert_eq!(primitive_root_of_unity(p, 2).unwrap(), p - 1);
        let z6 = primitive_root_of_unity(p, 6).unwrap();
        assert_eq!(f.pow(&z6, 3), p - 1);
    }

    #[test]
    fn missing_root_is_an_error() {
        let p = crate::field::DEFAULT_PRIME;
        // 2^61 - 2 = 2 * 3^2 * 5^2 * 7 * 11 * 13 * 31 * 41 * 61 * 151 * 331 * 1321
        assert!(matches!(
            primitive_root_of_unity(p, 4),
            Err(Error::NoSuchRoot { order: 4, .. })
        ));
        assert!(primitive_root_of_unity(p, 6).is_ok());
    }
}
