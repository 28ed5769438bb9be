//! Small number-theoretic helpers: primality, prime powers, binomials and
//! modular arithmetic over word-sized primes.

/// Deterministic trial-division primality test; fine for the word-sized
/// inputs used here (moduli and vertex counts, not cryptographic material).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// If `n = p^e` for a prime `p` and `e >= 1`, returns `(p, e)`.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    loop {
        if p.saturating_mul(p) > n {
            // n itself is prime.
            return Some((n, 1));
        }
        if n % p == 0 {
            let mut m = n;
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            return if m == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
}

/// All prime powers `t` with `2 <= t <= bound`, in increasing order.
pub fn prime_powers_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&t| prime_power(t).is_some()).collect()
}

/// Binomial coefficient as u128, saturating on overflow.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// `x^e mod m` by square-and-multiply.
pub fn pow_mod(x: u64, mut e: u64, m: u64) -> u64 {
    debug_assert!(m > 1);
    let mut acc = 1u128;
    let mut b = (x % m) as u128;
    let m128 = m as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Multiplicative inverse of `a` modulo the prime `p`, or `None` if `p | a`.
pub fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Canonical residue of a signed value modulo `m`.
pub fn rem_euclid_i128(v: i128, m: u64) -> u64 {
    (v.rem_euclid(m as i128)) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_powers_up_to(9), vec![2, 3, 4, 5, 7, 8, 9]);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(42, 6), 5_245_786);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(4, 5), 0);
    }

    #[test]
    fn inverses() {
        for p in [2u64, 3, 5, 7] {
            for a in 1..p {
                let inv = mod_inverse(a, p).unwrap();
                assert_eq!(a * inv % p, 1);
            }
            assert_eq!(mod_inverse(p, p), None);
        }
    }
}
