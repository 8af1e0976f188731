//! Finite fields `F_q = F_p[t]/(m)` and Berlekamp factorization over `F_p`.

use super::matrix::{ops, Matrix};
use super::poly::{Poly, PolyRing};
use super::ring::{Field, PrimeField, Ring};
use crate::error::{Error, Result};

pub type FpPoly = Poly<u64>;

pub fn fp_poly_ring(p: u64) -> PolyRing<PrimeField> {
    PolyRing::new(PrimeField::new(p))
}

/// Factors a monic squarefree polynomial over `F_p` into monic irreducibles,
/// sorted by (degree, coefficients).
pub fn berlekamp(f: &FpPoly, p: u64) -> Result<Vec<FpPoly>> {
    let r = fp_poly_ring(p);
    let fp = *r.base();
    let n = match f.degree() {
        None | Some(0) => return Ok(Vec::new()),
        Some(n) => n,
    };
    if !r.is_monic(f) {
        return Err(Error::Domain("berlekamp needs a monic polynomial".into()));
    }
    if !r.is_squarefree(f) {
        return Err(Error::Refusal("polynomial is not squarefree mod p".into()));
    }
    if n == 1 {
        return Ok(vec![f.clone()]);
    }
    // rows: x^{ip} mod f
    let xp = r.pow_mod(&r.x(), p as u128, f);
    let mut cur = r.one();
    let mut q = Matrix::from_fn(n, n, |_, _| 0u64);
    for i in 0..n {
        for j in 0..n {
            q.set(i, j, *cur.coeff(j).unwrap_or(&0));
        }
        cur = r.mul_mod(&cur, &xp, f);
    }
    let mo = ops(&fp);
    // v Q = v  <=>  (Q^T - I) v^T = 0
    let m = mo.sub(&q.transpose(), &mo.identity(n));
    let basis = mo.kernel(&m);
    let k = basis.len();
    let mut factors = vec![f.clone()];
    if k > 1 {
        for v in basis.iter() {
            let vp = r.from_coeffs(v.clone());
            if vp.degree().unwrap_or(0) == 0 {
                continue;
            }
            let mut next = Vec::new();
            for g in factors {
                if g.degree() == Some(1) {
                    next.push(g);
                    continue;
                }
                let mut rest = g.clone();
                for s in 0..p {
                    if rest.degree() == Some(0) {
                        break;
                    }
                    let h = r.gcd(&rest, &r.sub(&vp, &r.constant(s)));
                    let d = h.degree().unwrap_or(0);
                    if d > 0 && d < rest.degree().unwrap() {
                        rest = r.div_rem(&rest, &h).0;
                        next.push(h);
                    }
                }
                if rest.degree().unwrap_or(0) > 0 {
                    next.push(rest);
                }
            }
            factors = next;
            if factors.len() == k {
                break;
            }
        }
    }
    if factors.len() != k {
        return Err(Error::Consistency(format!(
            "berlekamp found {} factors, expected {k}",
            factors.len()
        )));
    }
    factors.sort_by(|a, b| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
    });
    Ok(factors)
}

/// Irreducibility over `F_p` (monic input of positive degree).
pub fn is_irreducible(f: &FpPoly, p: u64) -> bool {
    let r = fp_poly_ring(p);
    if f.degree().unwrap_or(0) == 0 || !r.is_monic(f) || !r.is_squarefree(f) {
        return false;
    }
    matches!(berlekamp(f, p), Ok(v) if v.len() == 1)
}

/// The finite field `F_p[t]/(m)` for an irreducible monic `m`.
#[derive(Clone, Debug)]
pub struct GaloisField {
    ring: PolyRing<PrimeField>,
    modulus: FpPoly,
    p: u64,
    f: usize,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl GaloisField {
    pub fn new(p: u64, modulus: FpPoly) -> Result<Self> {
        if !is_irreducible(&modulus, p) {
            return Err(Error::Domain("residue modulus is not irreducible mod p".into()));
        }
        let f = modulus.degree().unwrap();
        Ok(GaloisField {
            ring: fp_poly_ring(p),
            modulus,
            p,
            f,
        })
    }

    pub fn prime(p: u64) -> Self {
        let r = fp_poly_ring(p);
        let modulus = r.x();
        GaloisField { ring: r, modulus, p, f: 1 }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.f
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.f as u32)
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.modulus
    }

    pub fn poly_ring(&self) -> &PolyRing<PrimeField> {
        &self.ring
    }

    pub fn from_coeffs(&self, c: Vec<u64>) -> FpPoly {
        let c = c.into_iter().map(|x| x % self.p).collect();
        self.ring.rem_monic(&self.ring.from_coeffs(c), &self.modulus)
    }

    pub fn generator(&self) -> FpPoly {
        self.ring.rem_monic(&self.ring.x(), &self.modulus)
    }

    pub fn frobenius(&self, a: &FpPoly) -> FpPoly {
        self.pow(a, self.p)
    }

    pub fn is_square(&self, a: &FpPoly) -> bool {
        if self.is_zero(a) || self.p == 2 {
            return true;
        }
        let e = (self.order() - 1) / 2;
        self.is_one(&self.ring.pow_mod(a, e, &self.modulus))
    }

    /// Element with index `i` in base-`p` digit order; `0 <= i < q`.
    pub fn element(&self, mut i: u128) -> FpPoly {
        let mut c = Vec::with_capacity(self.f);
        for _ in 0..self.f {
            c.push((i % self.p as u128) as u64);
            i /= self.p as u128;
        }
        self.ring.from_coeffs(c)
    }

    pub fn index(&self, a: &FpPoly) -> u128 {
        let mut i = 0u128;
        for k in (0..self.f).rev() {
            i = i * self.p as u128 + *a.coeff(k).unwrap_or(&0) as u128;
        }
        i
    }

    pub fn elements(&self) -> impl Iterator<Item = FpPoly> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    /// Some non-square, for odd `p`.
    pub fn non_square(&self) -> Option<FpPoly> {
        if self.p == 2 {
            return None;
        }
        self.elements().find(|a| !self.is_zero(a) && !self.is_square(a))
    }
}

impl Ring for GaloisField {
    type Elem = FpPoly;

    fn zero(&self) -> FpPoly {
        self.ring.zero()
    }
    fn one(&self) -> FpPoly {
        self.ring.one()
    }
    fn from_i64(&self, n: i64) -> FpPoly {
        self.ring.from_i64(n)
    }
    fn add(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        self.ring.add(a, b)
    }
    fn neg(&self, a: &FpPoly) -> FpPoly {
        self.ring.neg(a)
    }
    fn mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        self.ring.mul_mod(a, b, &self.modulus)
    }
    fn is_zero(&self, a: &FpPoly) -> bool {
        self.ring.is_zero(a)
    }
    fn pow(&self, a: &FpPoly, k: u64) -> FpPoly {
        self.ring.pow_mod(a, k as u128, &self.modulus)
    }
}

impl Field for GaloisField {
    fn inv(&self, a: &FpPoly) -> Option<FpPoly> {
        if self.is_zero(a) {
            return None;
        }
        self.ring.inv_mod(a, &self.modulus)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[u64]) -> FpPoly {
        fp_poly_ring(p).from_coeffs(c.to_vec())
    }

    #[test]
    fn berlekamp_splits_x2_plus_1_mod_5() {
        let f = fp(5, &[1, 0, 1]);
        let fs = berlekamp(&f, 5).unwrap();
        assert_eq!(fs, vec![fp(5, &[2, 1]), fp(5, &[3, 1])]);
    }

    #[test]
    fn berlekamp_mixed_degrees() {
        // (x^2 + x + 1)(x + 1)(x) over F_2 = x^4 + x
        let f = fp(2, &[0, 1, 0, 0, 1]);
        let fs = berlekamp(&f, 2).unwrap();
        assert_eq!(fs, vec![fp(2, &[0, 1]), fp(2, &[1, 1]), fp(2, &[1, 1, 1])]);
        let r = fp_poly_ring(2);
        let prod = fs.iter().fold(r.one(), |a, b| r.mul(&a, b));
        assert_eq!(prod, f);
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&fp(3, &[1, 0, 1]), 3));
        assert!(!is_irreducible(&fp(5, &[1, 0, 1]), 5));
        assert!(!is_irreducible(&fp(2, &[1, 0, 1]), 2));
        assert!(is_irreducible(&fp(2, &[1, 1, 0, 1]), 2));
    }

    #[test]
    fn gf9_squares() {
        let k = GaloisField::new(3, fp(3, &[1, 0, 1])).unwrap();
        assert_eq!(k.order(), 9);
        let squares = k.elements().filter(|a| !k.is_zero(a) && k.is_square(a)).count();
        assert_eq!(squares, 4);
        // every element of F_3 is a square in F_9
        assert!(k.is_square(&k.from_i64(2)));
        let t = k.generator();
        assert_eq!(k.mul(&t, &k.inv(&t).unwrap()), k.one());
        assert_eq!(k.index(&k.element(7)), 7);
    }
}
