//! Rational scalars and the integer number theory they lean on.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from_big(n: BigInt) -> Rat {
    Rat::from_integer(n)
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let t = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Formats as `"a"` for integers and `"a/b"` otherwise.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn big_pow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn val_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// p-adic valuation of a rational; `None` for zero.
pub fn val(r: &Rat, p: u64) -> Option<i64> {
    let vn = val_int(r.numer(), p)?;
    Some(vn - val_int(r.denom(), p).unwrap_or(0))
}

/// Splits a nonzero rational as `p^v * u` with `u` a p-adic unit.
pub fn split_unit(r: &Rat, p: u64) -> (i64, Rat) {
    let v = val(r, p).expect("split_unit of zero");
    let u = if v >= 0 {
        r / rat_from_big(big_pow(p, v as u32))
    } else {
        r * rat_from_big(big_pow(p, (-v) as u32))
    };
    (v, u)
}

/// Inverse of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn inv_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Reduces a p-adic rational modulo `p^k`, returning the canonical representative
/// `p^v * t` with `0 <= t < p^(k-v)`. Terms of valuation at least `k` vanish.
pub fn reduce_mod_pk(r: &Rat, p: u64, k: i64) -> Rat {
    let Some(v) = val(r, p) else {
        return Rat::zero();
    };
    if v >= k {
        return Rat::zero();
    }
    let (_, u) = split_unit(r, p);
    let m = big_pow(p, (k - v) as u32);
    let dinv = inv_mod(u.denom(), &m).expect("unit denominator");
    let t = (u.numer() * dinv).mod_floor(&m);
    let scale = if v >= 0 {
        rat_from_big(big_pow(p, v as u32))
    } else {
        Rat::new(BigInt::one(), big_pow(p, (-v) as u32))
    };
    rat_from_big(t) * scale
}

/// Residue of a p-integral rational in `F_p`.
pub fn residue(r: &Rat, p: u64) -> Result<u64> {
    if r.is_zero() {
        return Ok(0);
    }
    if val(r, p).unwrap() < 0 {
        return Err(Error::Domain(format!(
            "{} is not {p}-integral",
            fmt_rat(r)
        )));
    }
    let m = BigInt::from(p);
    let dinv = inv_mod(r.denom(), &m).unwrap();
    Ok((r.numer() * dinv).mod_floor(&m).to_u64().unwrap())
}

/// Symmetric representative of `n mod m` in `(-m/2, m/2]`.
pub fn symmetric_mod(n: &BigInt, m: &BigInt) -> BigInt {
    let r = n.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Rational `a/b` with `a = n b mod m` and `|a|, b <= sqrt(m/2)`, when one exists.
pub fn rational_reconstruct(n: &BigInt, m: &BigInt) -> Option<Rat> {
    let bound: BigInt = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), n.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rat::new(r1, t1))
}

pub fn is_prime(p: u64) -> bool {
    num_prime::nt_funcs::is_prime64(p)
}

/// Prime factorization of |n| (n nonzero).
pub fn factorize(n: &BigInt) -> BTreeMap<BigUint, usize> {
    let m = n.abs().to_biguint().unwrap();
    if m.is_one() {
        return BTreeMap::new();
    }
    if let Some(small) = m.to_u64() {
        return num_prime::nt_funcs::factorize64(small)
            .into_iter()
            .map(|(q, e)| (BigUint::from(q), e))
            .collect();
    }
    num_prime::nt_funcs::factorize(m)
}

/// Squarefree integer representative of the square class of a nonzero rational.
pub fn squarefree_class(r: &Rat) -> BigInt {
    let n = r.numer() * r.denom();
    let mut out = BigInt::one();
    for (q, e) in factorize(&n) {
        if e % 2 == 1 {
            out *= BigInt::from_biguint(Sign::Plus, q);
        }
    }
    if n.is_negative() {
        -out
    } else {
        out
    }
}

/// Primes dividing the numerator or denominator of a nonzero rational.
pub fn prime_support(r: &Rat) -> Vec<u64> {
    let mut out: Vec<u64> = factorize(r.numer())
        .into_keys()
        .chain(factorize(r.denom()).into_keys())
        .map(|q| q.to_u64().expect("prime exceeds u64"))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Legendre symbol (a/p) for odd prime p and a coprime to p.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let m = BigInt::from(p);
    let r = a.mod_floor(&m);
    if r.is_zero() {
        return 0;
    }
    let e = BigInt::from((p - 1) / 2);
    if r.modpow(&e, &m).is_one() {
        1
    } else {
        -1
    }
}

/// Legendre symbol of a p-adic unit rational.
pub fn legendre_rat(u: &Rat, p: u64) -> i32 {
    legendre(u.numer(), p) * legendre(u.denom(), p)
}

/// Value of a 2-adic unit rational modulo 8.
pub fn mod8_of_unit(u: &Rat) -> u64 {
    let m = BigInt::from(8);
    let dinv = inv_mod(u.denom(), &m).expect("odd denominator");
    (u.numer() * dinv).mod_floor(&m).to_u64().unwrap()
}

/// Decides whether a nonzero rational is a square in `Q_p`.
pub fn is_padic_square(r: &Rat, p: u64) -> bool {
    let (v, u) = split_unit(r, p);
    if v % 2 != 0 {
        return false;
    }
    if p == 2 {
        mod8_of_unit(&u) == 1
    } else {
        legendre_rat(&u, p) == 1
    }
}

/// Multiplicative order of `a` modulo `m` (gcd(a, m) = 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    let mut x = a % m;
    let mut k = 1;
    while x != 1 {
        x = x * a % m;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_small_fractions() {
        let m = big_pow(5, 20);
        for (a, b) in [(1i64, 3i64), (-7, 9), (12, 1), (0, 1)] {
            let n = (BigInt::from(a) * inv_mod(&BigInt::from(b), &m).unwrap()).mod_floor(&m);
            assert_eq!(rational_reconstruct(&n, &m), Some(ratio(a, b)));
        }
    }

    #[test]
    fn parse_and_format_round_trip() {
        let r = parse_rat(" -6/4 ").unwrap();
        assert_eq!(r, ratio(-3, 2));
        assert_eq!(fmt_rat(&r), "-3/2");
        assert_eq!(fmt_rat(&rat(7)), "7");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(val(&ratio(50, 3), 5), Some(2));
        assert_eq!(val(&ratio(3, 25), 5), Some(-2));
        assert_eq!(val(&rat(0), 5), None);
    }

    #[test]
    fn reduction_mod_prime_powers() {
        // 1/3 mod 5^2 = 17 since 3 * 17 = 51
        assert_eq!(reduce_mod_pk(&ratio(1, 3), 5, 2), rat(17));
        assert_eq!(reduce_mod_pk(&rat(125), 5, 3), rat(0));
        assert_eq!(reduce_mod_pk(&ratio(32, 5), 5, 1), ratio(7, 5));
    }

    #[test]
    fn square_classes() {
        assert_eq!(squarefree_class(&rat(-20)), BigInt::from(-5));
        assert_eq!(squarefree_class(&ratio(3, 2)), BigInt::from(6));
        assert_eq!(squarefree_class(&ratio(125, 16)), BigInt::from(5));
        assert!(is_padic_square(&rat(17), 2));
        assert!(!is_padic_square(&rat(2), 5));
        assert!(is_padic_square(&rat(4), 5));
    }
}
