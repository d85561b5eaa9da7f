//! Primality certification and Pollard-rho (Brent) splitting on `u128`.

/// Bases proving Miller-Rabin exact for every n < 2^64.
const MR_BASES_U64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

/// The first thirteen primes; as Miller-Rabin bases they are exact below
/// `PSI_13`.
const MR_PRIME_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const PSI_13: u128 = 3_317_044_064_679_887_385_961_981;

#[inline]
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `a * b mod m` for any `m > 0`. Native when `m < 2^64`, shift-and-add above.
#[inline]
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut r = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            r = add_mod(r, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    r
}

pub fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            r = mul_mod(r, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    r
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn strong_probable_prime(n: u128, base: u128) -> bool {
    let a = base % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
        if x == 1 {
            return false;
        }
    }
    false
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    if n < 41 * 41 {
        return true;
    }
    MR_BASES_U64
        .iter()
        .all(|&b| strong_probable_prime(n as u128, b as u128))
}

/// Primality for `n < 2^128`.
///
/// Exact below 3.3e24 (Miller-Rabin with the first 13 prime bases). Above
/// that the answer is Baillie-PSW combined with those 13 bases, which has
/// no known counterexample but is not a proof.
pub fn is_prime_u128(n: u128) -> bool {
    if n <= u64::MAX as u128 {
        return is_prime_u64(n as u64);
    }
    if n % 2 == 0 {
        return false;
    }
    let mr = MR_PRIME_BASES.iter().all(|&b| strong_probable_prime(n, b));
    if !mr {
        return false;
    }
    n < PSI_13 || strong_lucas_probable_prime(n)
}

fn jacobi(mut a: u128, mut n: u128) -> i32 {
    debug_assert!(n % 2 == 1);
    a %= n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn signed_mod(v: i64, n: u128) -> u128 {
    if v >= 0 {
        (v as u128) % n
    } else {
        let r = (v.unsigned_abs() as u128) % n;
        if r == 0 {
            0
        } else {
            n - r
        }
    }
}

fn half_mod(x: u128, n: u128) -> u128 {
    if x % 2 == 0 {
        x / 2
    } else {
        (x >> 1) + (n >> 1) + 1
    }
}

/// Strong Lucas test with Selfridge parameters; `n` odd and large.
fn strong_lucas_probable_prime(n: u128) -> bool {
    if let Some(r) = integer_root(n, 2) {
        if r * r == n {
            return false;
        }
    }
    let mut d_abs = 5i64;
    let d = loop {
        let d = if (d_abs / 2) % 2 == 0 { d_abs } else { -d_abs };
        match jacobi(signed_mod(d, n), n) {
            -1 => break d,
            0 if (d.unsigned_abs() as u128) != n => return false,
            _ => {}
        }
        d_abs += 2;
    };
    let dm = signed_mod(d, n);
    let q = signed_mod((1 - d) / 4, n);

    let k = n + 1;
    let s = k.trailing_zeros();
    let odd = k >> s;

    // U_1 = 1, V_1 = P = 1, Q^1 = Q.
    let (mut u, mut v, mut qk) = (1u128, 1u128, q);
    let top = 127 - odd.leading_zeros();
    for bit in (0..top).rev() {
        u = mul_mod(u, v, n);
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        qk = mul_mod(qk, qk, n);
        if (odd >> bit) & 1 == 1 {
            let nu = half_mod(add_mod(u, v, n), n);
            let nv = half_mod(add_mod(mul_mod(dm, u, n), v, n), n);
            u = nu;
            v = nv;
            qk = mul_mod(qk, q, n);
        }
    }
    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = sub_mod(mul_mod(v, v, n), add_mod(qk, qk, n), n);
        qk = mul_mod(qk, qk, n);
        if v == 0 {
            return true;
        }
    }
    false
}

/// `floor(n^(1/k))`.
pub fn integer_root(n: u128, k: u32) -> Option<u128> {
    if k == 0 {
        return None;
    }
    if n < 2 || k == 1 {
        return Some(n);
    }
    let mut r = (n as f64).powf(1.0 / k as f64) as u128;
    let pow_le = |r: u128| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..k {
            match acc.checked_mul(r) {
                Some(v) if v <= n => acc = v,
                _ => return false,
            }
        }
        true
    };
    while r > 0 && !pow_le(r) {
        r -= 1;
    }
    while pow_le(r + 1) {
        r += 1;
    }
    Some(r)
}

/// If `n = r^k` for some `k >= 2`, the pair with the largest such `k`.
pub fn perfect_power(n: u128) -> Option<(u128, u32)> {
    if n < 4 {
        return None;
    }
    let max_k = 127 - n.leading_zeros();
    for k in (2..=max_k).rev() {
        if let Some(r) = integer_root(n, k) {
            if r > 1 && r.checked_pow(k) == Some(n) {
                return Some((r, k));
            }
        }
    }
    None
}

/// A nontrivial divisor of the odd composite `n` via Brent's cycle finding.
pub fn pollard_brent(n: u128) -> Option<u128> {
    if n % 2 == 0 {
        return Some(2);
    }
    const BATCH: u64 = 128;
    for c in 1u128..64 {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
        let (mut x, mut ys);
        let mut g;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            loop {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u128(q, n);
                k += BATCH;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 || r > (1 << 40) {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != 1 && g != n {
            return Some(g);
        }
    }
    None
}
