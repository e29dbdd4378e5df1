//! Exact integer and modular arithmetic on `u64` moduli.
//!
//! Every modulus and intermediate value is bounded by [`MAX_VALUE`]
//! (`2^63 - 1`); products are formed in `u128` so nothing wraps. Operations
//! that would leave that range return [`Error::OutOfRange`] or
//! [`Error::Overflow`].

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Largest supported modulus or factorization input.
pub const MAX_VALUE: u64 = i64::MAX as u64;

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

/// Prime factorization `value = p_1^a_1 * ... * p_t^a_t`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
    value: u64,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, multiplicity)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// The `a` with `p^a || value` (zero when `p` does not divide).
    pub fn multiplicity(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, a)| a)
    }

    /// `Some((p, j))` when the value is `p^j` with `j >= 1`.
    pub fn as_prime_power(&self) -> Option<(u64, u32)> {
        match self.factors.as_slice() {
            [single] => Some(*single),
            _ => None,
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` for an already-reduced or arbitrary unsigned base.
/// Requires `m >= 1`.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m >= 1);
    if m == 1 {
        return 0;
    }
    let mut result = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// `base^exp mod m` in `[0, m)`, for any signed base.
pub fn mod_pow(base: i64, exp: u64, m: u64) -> Result<u64> {
    check_modulus(m)?;
    Ok(pow_mod(reduce(base, m), exp, m))
}

/// Least nonnegative residue of `k` modulo `m` (`m >= 1`).
#[inline]
pub fn reduce(k: i64, m: u64) -> u64 {
    (k as i128).rem_euclid(m as i128) as u64
}

pub(crate) fn check_modulus(m: u64) -> Result<()> {
    match m {
        0 => Err(Error::ZeroModulus),
        m if m > MAX_VALUE => Err(Error::OutOfRange(m as u128)),
        _ => Ok(()),
    }
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = ((a % m) as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// `p^e`, or an overflow error if it exceeds [`MAX_VALUE`].
pub fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .filter(|&v| v <= MAX_VALUE)
        .ok_or(Error::Overflow("prime power"))
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factor `value` by trial division up to 10^6, then Pollard rho (Brent).
pub fn factorize(value: u64) -> Result<Factorization> {
    if value == 0 || value > MAX_VALUE {
        return Err(Error::OutOfRange(value as u128));
    }
    let mut primes = Vec::new();
    let mut rest = value;
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= rest {
        while rest % d == 0 {
            primes.push(d);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        split_large(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, a)) if *q == p => *a += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { factors, value })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut q, mut g) = (2u64, 2u64, 1u64, 1u64);
        let mut ys = y;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("some constant splits every composite")
}

/// Exponent of the exact power of `p` dividing `value`.
pub fn valuation(p: u64, value: i128) -> Result<u32> {
    if p < 2 {
        return Err(Error::Domain("valuation base must be prime"));
    }
    if value == 0 {
        return Err(Error::Domain("valuation of zero is infinite"));
    }
    let mut v = value.unsigned_abs();
    let p = p as u128;
    let mut count = 0;
    while v % p == 0 {
        v /= p;
        count += 1;
    }
    Ok(count)
}

/// Exponent of `p` in `C(n, i)`, by Legendre's formula.
pub fn binomial_valuation(n: u64, i: u64, p: u64) -> Result<u32> {
    if i < 1 || i > n {
        return Err(Error::Domain("binomial index must lie in 1..=n"));
    }
    if !is_prime(p) {
        return Err(Error::Domain("binomial valuation needs a prime"));
    }
    Ok(factorial_valuation(n, p) - factorial_valuation(i, p) - factorial_valuation(n - i, p))
}

/// `a - b` for `p^a || n` (`a >= 1`) and `p^b || i` (`b <= a`): a lower
/// bound on the exponent of `p` in `C(n, i)`, from `C(n, i) = (n / i) C(n-1, i-1)`.
///
/// This is what lifting needs. Equality can fail: `C(6, 3) = 20` carries
/// `2^2` while the bound gives `2^1`.
pub fn binomial_valuation_bound(n: u64, i: u64, p: u64) -> Result<u32> {
    if i < 1 || i > n {
        return Err(Error::Domain("binomial index must lie in 1..=n"));
    }
    let a = valuation(p, n as i128)?;
    let b = valuation(p, i as i128)?;
    if a == 0 || b > a {
        return Err(Error::Inapplicable("bound needs p | n and v_p(i) <= v_p(n)"));
    }
    Ok(a - b)
}

fn factorial_valuation(n: u64, p: u64) -> u32 {
    let mut total = 0u64;
    let mut q = n;
    while q > 0 {
        q /= p;
        total += q;
    }
    total as u32
}

/// Combine `x = r_i (mod m_i)` for pairwise coprime moduli into one residue
/// modulo the product.
pub fn crt(congruences: &[(u64, u64)]) -> Result<(u64, u64)> {
    let mut acc = (0u64, 1u64);
    for &(r, m) in congruences {
        check_modulus(m)?;
        let (r0, m0) = acc;
        let inv = mod_inverse(m0 % m, m).ok_or(Error::Domain("CRT moduli must be pairwise coprime"))?;
        let modulus = m0
            .checked_mul(m)
            .filter(|&v| v <= MAX_VALUE)
            .ok_or(Error::Overflow("CRT modulus"))?;
        // x = r0 + m0 * t with t = (r - r0) / m0 mod m
        let diff = (r % m + m - r0 % m) % m;
        let t = mul_mod(diff, inv, m);
        let x = (r0 as u128 + m0 as u128 * t as u128) % modulus as u128;
        acc = (x as u64, modulus);
    }
    Ok(acc)
}

/// Largest `x >= 0` with `x^n <= v`.
pub fn nth_root_floor(v: u64, n: u32) -> u64 {
    if n == 1 || v < 2 {
        return v;
    }
    let fits = |x: u64| (x as u128).checked_pow(n).is_some_and(|p| p <= v as u128);
    let bits = 64 - v.leading_zeros();
    // x < 2^(ceil(bits / n)), so the search space is small
    let (mut lo, mut hi) = (1u64, 1u64 << bits.div_ceil(n).min(63));
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}
