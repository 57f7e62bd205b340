//! Integer helpers: gcd, integer roots, square-free tests, trial factorization.
//!
//! Everything here works on machine integers. Inputs up to `i64::MAX` are
//! supported; square-free testing trial-divides only up to the cube root and
//! then checks whether the cofactor is a perfect square.

use num_integer::Integer;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Floor of the square root of `n`.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    while x.checked_mul(x).is_none_or(|sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Floor of the cube root of `n`.
pub fn icbrt(n: u64) -> u64 {
    let mut x = (n as f64).cbrt() as u64;
    let cube = |v: u64| v.checked_mul(v).and_then(|s| s.checked_mul(v));
    while x > 0 && cube(x).is_none_or(|c| c > n) {
        x -= 1;
    }
    while cube(x + 1).is_some_and(|c| c <= n) {
        x += 1;
    }
    x
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Whether `|n|` is square-free. Zero is not square-free; ±1 are.
pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n.unsigned_abs();
    if m.is_multiple_of(4) {
        return false;
    }
    if m.is_multiple_of(2) {
        m /= 2;
    }
    let limit = icbrt(m);
    let mut p = 3u64;
    while p <= limit && p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return false;
            }
        }
        p += 2;
    }
    // Whatever is left has no prime factor <= cbrt of the original value, so
    // it is either 1, a prime, a product of two distinct primes, or a square.
    m == 1 || !is_perfect_square(m)
}

/// Prime factorization of `|n|` as `(prime, exponent)` pairs, by trial division.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// The square-free part of `n`, keeping its sign: `n = sqf(n) * k^2`.
pub fn squarefree_part(n: i64) -> i64 {
    assert!(n != 0, "square-free part of zero");
    let sign = n.signum();
    let core: u64 = factorize(n.unsigned_abs())
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    sign * core as i64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut p = 3;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 2;
    }
    true
}

/// Writes a prime `p ≡ 1 (mod 4)` as `a^2 + b^2` with `a` odd, via Cornacchia.
pub fn two_squares(p: u64) -> Option<(u64, u64)> {
    if p == 2 {
        return Some((1, 1));
    }
    if p % 4 != 1 || !is_prime(p) {
        return None;
    }
    // A square root of -1 mod p from any quadratic non-residue.
    let pow = |mut b: u128, mut e: u64, m: u128| {
        let mut r = 1u128;
        b %= m;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % m;
            }
            b = b * b % m;
            e >>= 1;
        }
        r
    };
    let m = p as u128;
    let mut x = 0u128;
    for c in 2..p {
        if pow(c as u128, (p - 1) / 2, m) == m - 1 {
            x = pow(c as u128, (p - 1) / 4, m);
            break;
        }
    }
    let (mut a, mut b) = (m, x);
    let bound = isqrt(p) as u128;
    while b > bound {
        let t = a % b;
        a = b;
        b = t;
    }
    let rest = m - b * b;
    let c = isqrt(rest as u64) as u128;
    if c * c != rest {
        return None;
    }
    let (b, c) = (b as u64, c as u64);
    Some(if b % 2 == 1 { (b, c) } else { (c, b) })
}

/// Catalan number `binom(2k, k) / (k + 1)`.
pub fn catalan(k: u32) -> i128 {
    let mut c: i128 = 1;
    for i in 0..k as i128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// Positive remainder of `a` modulo `m`.
pub fn rem(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squarefree_naive(n: i64) -> bool {
        let m = n.unsigned_abs();
        m != 0 && (2..).take_while(|p| p * p <= m).all(|p| !m.is_multiple_of(p * p))
    }

    #[test]
    fn squarefree_matches_naive() {
        for n in -2000..2000 {
            assert_eq!(is_squarefree(n), squarefree_naive(n), "n = {n}");
        }
    }

    #[test]
    fn squarefree_large_semiprimes_and_squares() {
        let p = 1_000_003i64;
        let q = 999_983i64;
        assert!(is_squarefree(p * q));
        assert!(!is_squarefree(p * p));
        assert!(!is_squarefree(3 * p * p));
        assert!(is_squarefree(6 * p));
    }

    #[test]
    fn squarefree_part_examples() {
        assert_eq!(squarefree_part(12), 3);
        assert_eq!(squarefree_part(-18), -2);
        assert_eq!(squarefree_part(36), 1);
    }

    #[test]
    fn roots() {
        for n in 0..10_000u64 {
            let r = isqrt(n);
            assert!(r * r <= n && (r + 1) * (r + 1) > n);
            let c = icbrt(n);
            assert!(c * c * c <= n && (c + 1) * (c + 1) * (c + 1) > n);
        }
        assert_eq!(isqrt(u64::MAX), 4294967295);
    }

    #[test]
    fn catalan_prefix() {
        let t: Vec<i128> = (0..8).map(catalan).collect();
        assert_eq!(t, vec![1, 1, 2, 5, 14, 42, 132, 429]);
    }

    #[test]
    fn two_squares_small_primes() {
        assert_eq!(two_squares(173), Some((13, 2)));
        assert_eq!(two_squares(5), Some((1, 2)));
        assert_eq!(two_squares(7), None);
        for p in (5..2000).filter(|&p| p % 4 == 1 && is_prime(p)) {
            let (a, b) = two_squares(p).unwrap();
            assert_eq!(a * a + b * b, p);
            assert_eq!(a % 2, 1);
        }
    }
}
