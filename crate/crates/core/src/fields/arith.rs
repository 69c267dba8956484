//! Integer and rational number theory: factoring, square-free parts,
//! Legendre symbols and modular square roots.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const SMALL_PRIME_LIMIT: u64 = 1000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Prime factorization of a positive 64-bit integer, sorted by prime.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in 2..SMALL_PRIME_LIMIT.min(n.max(2)) {
        if p * p > n {
            break;
        }
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    factor_u64_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Prime factorization of `|n|`. Inputs beyond 64 bits are factored by
/// trial division up to 10^6; an unfactored cofactor is an error.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::Domain("cannot factor zero".into()));
    }
    let mut m = n.abs();
    if let Some(small) = m.to_u64() {
        return Ok(factor_u64(small));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < 1_000_000 {
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        if let Some(small) = m.to_u64() {
            for (q, f) in factor_u64(small) {
                match out.iter_mut().find(|(r, _)| *r == q) {
                    Some((_, g)) => *g += f,
                    None => out.push((q, f)),
                }
            }
            out.sort_unstable();
            return Ok(out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Err(Error::Unsupported(format!(
        "integer {n} has a cofactor beyond 64 bits that could not be factored"
    )))
}

/// The distinct primes dividing `n`.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    Ok(factor(n)?.into_iter().map(|(p, _)| p).collect())
}

/// Writes `n = s * r^2` with `s` square-free (sign carried by `s`), `r > 0`.
pub fn squarefree_int(n: &BigInt) -> Result<(BigInt, BigInt)> {
    let mut s = BigInt::one();
    let mut r = BigInt::one();
    for (p, e) in factor(n)? {
        let bp = BigInt::from(p);
        if e % 2 == 1 {
            s *= &bp;
        }
        r *= num_traits::pow(bp, (e / 2) as usize);
    }
    if n.sign() == Sign::Minus {
        s = -s;
    }
    Ok((s, r))
}

/// Writes a nonzero rational `q = s * r^2` with `s` a square-free integer.
pub fn squarefree_rat(q: &BigRational) -> Result<(BigInt, BigRational)> {
    if q.is_zero() {
        return Err(Error::Domain("zero has no square class".into()));
    }
    let prod = q.numer() * q.denom();
    let (s, r) = squarefree_int(&prod)?;
    Ok((s, BigRational::new(r, q.denom().clone())))
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn is_square_rat(q: &BigRational) -> bool {
    is_square_int(q.numer()) && is_square_int(q.denom())
}

/// Exact square root of a rational square.
pub fn sqrt_rat(q: &BigRational) -> Option<BigRational> {
    if !is_square_rat(q) {
        return None;
    }
    Some(BigRational::new(q.numer().sqrt(), q.denom().sqrt()))
}

/// p-adic valuation of a nonzero integer.
pub fn val_int(n: &BigInt, p: u64) -> i64 {
    debug_assert!(!n.is_zero());
    let bp = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &bp).is_zero() {
        m /= &bp;
        v += 1;
    }
    v
}

pub fn val_rat(q: &BigRational, p: u64) -> i64 {
    val_int(q.numer(), p) - val_int(q.denom(), p)
}

/// Unit part `q / p^v(q)` of a nonzero rational.
pub fn unit_part(q: &BigRational, p: u64) -> BigRational {
    let v = val_rat(q, p);
    let pp = BigRational::from_integer(BigInt::from(p));
    if v >= 0 {
        q / num_traits::pow(pp, v as usize)
    } else {
        q * num_traits::pow(pp, (-v) as usize)
    }
}

/// Reduction of a p-integral rational modulo `m` (which must be a power of p).
pub fn rat_mod(q: &BigRational, m: u64) -> Option<u64> {
    let bm = BigInt::from(m);
    let den = q.denom().mod_floor(&bm).to_u64()?;
    let inv = inv_mod(den, m)?;
    let num = q.numer().mod_floor(&bm).to_u64()?;
    Some(mul_mod(num, inv, m))
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Legendre symbol `(a / p)` for an odd prime `p`; 0 when `p | a`.
pub fn legendre(a: u64, p: u64) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol of a p-adic unit rational.
pub fn legendre_rat(q: &BigRational, p: u64) -> i8 {
    match rat_mod(q, p) {
        Some(r) => legendre(r, p),
        None => 0,
    }
}

/// Tonelli-Shanks square root modulo an odd prime (or 2).
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| legendre(z, p) == -1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r.min(p - r))
}

/// Square root of `a` modulo a square-free modulus `m`, via CRT.
pub fn sqrt_mod_squarefree(a: &BigInt, m: &BigInt) -> Result<Option<BigInt>> {
    let m = m.abs();
    if m.is_one() {
        return Ok(Some(BigInt::zero()));
    }
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for (p, e) in factor(&m)? {
        debug_assert_eq!(e, 1);
        let bp = BigInt::from(p);
        let ar = a.mod_floor(&bp).to_u64().unwrap_or(0);
        let Some(r) = sqrt_mod_prime(ar, p) else {
            return Ok(None);
        };
        // combine acc (mod modulus) with r (mod p)
        let inv = inv_mod(modulus.mod_floor(&bp).to_u64().unwrap_or(0), p)
            .ok_or_else(|| Error::Domain("modulus is not square-free".into()))?;
        let diff = (BigInt::from(r) - &acc).mod_floor(&bp);
        let k = (diff * BigInt::from(inv)).mod_floor(&bp);
        acc += &modulus * k;
        modulus *= &bp;
    }
    Ok(Some(acc.mod_floor(&modulus)))
}

/// Smallest positive quadratic non-residue modulo an odd prime.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p).find(|&u| legendre(u, p) == -1).unwrap_or(1)
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn int_of(q: &BigRational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

/// Representation of a positive integer as a sum of two integer squares,
/// via Gaussian-integer products of the prime representations.
pub fn two_squares_int(n: &BigInt) -> Result<Option<(BigInt, BigInt)>> {
    if n.is_negative() {
        return Ok(None);
    }
    if n.is_zero() {
        return Ok(Some((BigInt::zero(), BigInt::zero())));
    }
    let mut x = BigInt::one();
    let mut y = BigInt::zero();
    for (p, e) in factor(n)? {
        let bp = BigInt::from(p);
        let (u, v) = if p == 2 {
            (BigInt::one(), BigInt::one())
        } else if p % 4 == 1 {
            prime_two_squares(p)
        } else {
            if e % 2 == 1 {
                return Ok(None);
            }
            let scale = num_traits::pow(bp, (e / 2) as usize);
            x *= &scale;
            y *= &scale;
            continue;
        };
        for _ in 0..e {
            let nx = &x * &u - &y * &v;
            let ny = &x * &v + &y * &u;
            x = nx;
            y = ny;
        }
    }
    let (x, y) = (x.abs(), y.abs());
    Ok(Some(if x <= y { (x, y) } else { (y, x) }))
}

fn prime_two_squares(p: u64) -> (BigInt, BigInt) {
    // Cornacchia: start from a square root of -1 and run Euclid until below sqrt(p).
    let r = sqrt_mod_prime(p - 1, p).expect("p = 1 mod 4");
    let (mut a, mut b) = (p, r);
    let limit = (p as f64).sqrt() as u64;
    while b > limit || b * b > p {
        let t = a % b;
        a = b;
        b = t;
    }
    let rest = p - b * b;
    let c = (rest as f64).sqrt().round() as u64;
    debug_assert_eq!(c * c, rest);
    (BigInt::from(b), BigInt::from(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_and_composite() {
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(
            factor_u64(1_000_003 * 999_983),
            vec![(999_983, 1), (1_000_003, 1)]
        );
        assert!(is_prime_u64(2_147_483_647));
        assert!(!is_prime_u64(3_215_031_751));
    }

    #[test]
    fn squarefree_parts() {
        let (s, r) = squarefree_int(&BigInt::from(-72)).unwrap();
        assert_eq!((s, r), (BigInt::from(-2), BigInt::from(6)));
        let (s, r) = squarefree_rat(&BigRational::new(18.into(), 4.into())).unwrap();
        assert_eq!(s, BigInt::from(2));
        assert_eq!(
            &r * &r * BigRational::from_integer(s),
            BigRational::new(9.into(), 2.into())
        );
    }

    #[test]
    fn tonelli_shanks_roots() {
        for p in [3u64, 5, 7, 13, 17, 41, 97, 1_000_003] {
            for a in 1..40u64.min(p) {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(mul_mod(r, r, p), a % p);
                } else {
                    assert_eq!(legendre(a, p), -1);
                }
            }
        }
        let r = sqrt_mod_squarefree(&BigInt::from(2), &BigInt::from(7 * 17))
            .unwrap()
            .unwrap();
        assert_eq!((&r * &r - 2) % 119, BigInt::zero());
    }

    #[test]
    fn sums_of_two_squares() {
        for n in 1..500i64 {
            let rep = two_squares_int(&BigInt::from(n)).unwrap();
            let brute = (0..=n).any(|x| (0..=n).any(|y| x * x + y * y == n));
            assert_eq!(rep.is_some(), brute, "n = {n}");
            if let Some((x, y)) = rep {
                assert_eq!(&x * &x + &y * &y, BigInt::from(n));
            }
        }
    }
}
