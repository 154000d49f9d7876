//! Small exact integer helpers shared by every module.

/// Greatest common divisor.
pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factor(mut n: u128) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d: u128 = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d as u64, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n as u64, 1));
    }
    out
}

/// `p`-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation(n: u128, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let p = p as u128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// Split `n` into its `p`-part and prime-to-`p` part.
pub fn split_p_part(n: u128, p: u64) -> (u128, u128) {
    let mut pp = 1u128;
    let mut rest = n;
    while rest % p as u128 == 0 {
        rest /= p as u128;
        pp *= p as u128;
    }
    (pp, rest)
}

pub fn checked_pow(base: u64, exp: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base as u128)?;
    }
    Some(acc)
}

/// `a * b mod m` without overflow for any `m < 2^127`.
pub fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let mut a = a % m;
    let mut b = b % m;
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = addmod(acc, a, m);
        }
        a = addmod(a, a, m);
        b >>= 1;
    }
    acc
}

pub fn addmod(a: u128, b: u128, m: u128) -> u128 {
    let s = a + b;
    if s >= m {
        s - m
    } else {
        s
    }
}

pub fn submod(a: u128, b: u128, m: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn powmod(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn invmod(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    if old_r < 0 {
        old_r += m as i128;
    }
    // Extended Euclid on signed values; m < 2^127 keeps everything in range.
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        let t = old_r - q * r;
        old_r = r;
        r = t;
        let t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u128)
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_signed(x: i128, m: u128) -> u128 {
    if m == 0 {
        panic!("modulus zero");
    }
    x.rem_euclid(m as i128) as u128
}

/// Least primitive root modulo an odd prime.
pub fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fs = factor((p - 1) as u128);
    'outer: for g in 2..p {
        for &(q, _) in &fs {
            if powmod(g as u128, ((p - 1) / q) as u128, p as u128) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

/// Teichmüller lift of `a` modulo `p^n`, by iterating `x -> x^p`.
pub fn teichmuller(a: u64, p: u64, n: u32) -> u128 {
    let m = checked_pow(p, n).expect("modulus fits");
    let mut x = a as u128 % m;
    for _ in 0..=n {
        x = powmod(x, p as u128, m);
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_and_valuation() {
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(valuation(63, 3), Some(2));
        assert_eq!(valuation(0, 3), None);
    }

    #[test]
    fn teichmuller_is_root_of_unity() {
        for p in [3u64, 5, 7, 11, 13] {
            let g = least_primitive_root(p);
            let w = teichmuller(g, p, 10);
            let m = checked_pow(p, 10).unwrap();
            assert_eq!(powmod(w, (p - 1) as u128, m), 1);
            assert_eq!(w % p as u128, g as u128);
        }
    }

    #[test]
    fn big_mulmod_matches_small() {
        let m = (1u128 << 100) + 7;
        assert_eq!(mulmod(3, 5, m), 15);
        let a = (1u128 << 99) + 12345;
        assert_eq!(mulmod(a, 2, m), (2 * a) % m);
    }
}
