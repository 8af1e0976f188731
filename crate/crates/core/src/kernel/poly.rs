//! Dense univariate polynomials over any [`Ring`].

use super::rat::{fmt_rat, Rat};
use super::ring::{Field, Rationals, Ring};

/// Dense polynomial, coefficients from the constant term upward. The zero
/// polynomial has no coefficients; otherwise the leading coefficient is nonzero.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }

    pub fn map<F: Clone, R: Ring<Elem = F>>(&self, target: &PolyRing<R>, f: impl Fn(&E) -> F) -> Poly<F> {
        target.from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<Rat> {
    /// Human-readable form in the variable `var`.
    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            let cs = fmt_rat(c);
            parts.push(if mono.is_empty() {
                cs
            } else if cs == "1" {
                mono
            } else if cs == "-1" {
                format!("-{mono}")
            } else {
                format!("{cs}*{mono}")
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// Polynomial ring over a base ring.
#[derive(Clone, Debug)]
pub struct PolyRing<R> {
    base: R,
}

pub type QPolyRing = PolyRing<Rationals>;

pub fn qpoly() -> QPolyRing {
    PolyRing::new(Rationals)
}

/// Rational polynomial from integer coefficients (constant term first).
pub fn qpoly_from_ints(c: &[i64]) -> Poly<Rat> {
    qpoly().from_coeffs(c.iter().map(|&n| super::rat::rat(n)).collect())
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R) -> Self {
        PolyRing { base }
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn from_coeffs(&self, mut coeffs: Vec<R::Elem>) -> Poly<R::Elem> {
        while let Some(c) = coeffs.last() {
            if self.base.is_zero(c) {
                coeffs.pop();
            } else {
                break;
            }
        }
        Poly { coeffs }
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(vec![c])
    }

    pub fn x(&self) -> Poly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn monomial(&self, c: R::Elem, k: usize) -> Poly<R::Elem> {
        let mut v = vec![self.base.zero(); k];
        v.push(c);
        self.from_coeffs(v)
    }

    pub fn eval(&self, f: &Poly<R::Elem>, x: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        for c in f.coeffs.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self, f: &Poly<R::Elem>) -> Poly<R::Elem> {
        let v = f
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.base.mul(&self.base.from_i64(i as i64), c))
            .collect();
        self.from_coeffs(v)
    }

    pub fn scale(&self, f: &Poly<R::Elem>, c: &R::Elem) -> Poly<R::Elem> {
        self.from_coeffs(f.coeffs.iter().map(|a| self.base.mul(a, c)).collect())
    }

    /// `f(g(x))`.
    pub fn compose(&self, f: &Poly<R::Elem>, g: &Poly<R::Elem>) -> Poly<R::Elem> {
        let mut acc = self.zero();
        for c in f.coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, g), &self.constant(c.clone()));
        }
        acc
    }

    pub fn is_monic(&self, f: &Poly<R::Elem>) -> bool {
        f.lead().map(|c| self.base.is_one(c)).unwrap_or(false)
    }

    /// Division by a monic polynomial; works over any ring.
    pub fn div_rem_monic(&self, a: &Poly<R::Elem>, m: &Poly<R::Elem>) -> (Poly<R::Elem>, Poly<R::Elem>) {
        assert!(self.is_monic(m), "div_rem_monic needs a monic divisor");
        let dm = m.degree().unwrap();
        let mut rem = a.coeffs.clone();
        if rem.len() <= dm {
            return (self.zero(), self.from_coeffs(rem));
        }
        let mut quot = vec![self.base.zero(); rem.len() - dm];
        for k in (dm..rem.len()).rev() {
            let c = rem[k].clone();
            if self.base.is_zero(&c) {
                continue;
            }
            quot[k - dm] = c.clone();
            for (j, mc) in m.coeffs.iter().enumerate() {
                let t = self.base.mul(&c, mc);
                rem[k - dm + j] = self.base.sub(&rem[k - dm + j], &t);
            }
        }
        rem.truncate(dm);
        (self.from_coeffs(quot), self.from_coeffs(rem))
    }

    pub fn rem_monic(&self, a: &Poly<R::Elem>, m: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.div_rem_monic(a, m).1
    }

    pub fn mul_mod(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>, m: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.rem_monic(&self.mul(a, b), m)
    }

    pub fn pow_mod(&self, a: &Poly<R::Elem>, mut k: u128, m: &Poly<R::Elem>) -> Poly<R::Elem> {
        let mut base = self.rem_monic(a, m);
        let mut acc = self.rem_monic(&self.one(), m);
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_mod(&acc, &base, m);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul_mod(&base, &base, m);
            }
        }
        acc
    }

    /// `f(g(x)) mod m`.
    pub fn compose_mod(&self, f: &Poly<R::Elem>, g: &Poly<R::Elem>, m: &Poly<R::Elem>) -> Poly<R::Elem> {
        let g = self.rem_monic(g, m);
        let mut acc = self.zero();
        for c in f.coeffs.iter().rev() {
            acc = self.add(&self.mul_mod(&acc, &g, m), &self.constant(c.clone()));
        }
        acc
    }
}

impl<R: Field> PolyRing<R> {
    pub fn div_rem(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> (Poly<R::Elem>, Poly<R::Elem>) {
        let lc = b.lead().expect("division by zero polynomial");
        let inv = self.base.inv(lc).expect("leading coefficient not invertible");
        let bm = self.scale(b, &inv);
        let (q, r) = self.div_rem_monic(a, &bm);
        (self.scale(&q, &inv), r)
    }

    pub fn monic(&self, f: &Poly<R::Elem>) -> Poly<R::Elem> {
        match f.lead() {
            None => f.clone(),
            Some(lc) => self.scale(f, &self.base.inv(lc).unwrap()),
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Poly<R::Elem> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.div_rem(&a, &b).1;
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// Returns `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(
        &self,
        a: &Poly<R::Elem>,
        b: &Poly<R::Elem>,
    ) -> (Poly<R::Elem>, Poly<R::Elem>, Poly<R::Elem>) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut t0, mut t1) = (self.zero(), self.one());
        while !r1.is_zero() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.lead().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = self.base.inv(&lc).unwrap();
                (self.scale(&r0, &inv), self.scale(&s0, &inv), self.scale(&t0, &inv))
            }
        }
    }

    /// Inverse of `a` modulo `m`, if it exists.
    pub fn inv_mod(&self, a: &Poly<R::Elem>, m: &Poly<R::Elem>) -> Option<Poly<R::Elem>> {
        let (g, s, _) = self.xgcd(a, m);
        if g.degree() == Some(0) {
            Some(self.div_rem(&s, m).1)
        } else {
            None
        }
    }

    pub fn is_squarefree(&self, f: &Poly<R::Elem>) -> bool {
        self.gcd(f, &self.derivative(f)).degree() == Some(0)
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn zero(&self) -> Self::Elem {
        Poly { coeffs: Vec::new() }
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.constant(self.base.from_i64(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.base.zero();
        let v = (0..n)
            .map(|i| {
                self.base
                    .add(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z))
            })
            .collect();
        self.from_coeffs(v)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.from_coeffs(a.coeffs.iter().map(|c| self.base.neg(c)).collect())
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut v = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if self.base.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                v[i + j] = self.base.add(&v[i + j], &self.base.mul(x, y));
            }
        }
        self.from_coeffs(v)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.iter().all(|c| self.base.is_zero(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::rat;

    #[test]
    fn division_and_gcd_over_q() {
        let r = qpoly();
        let f = qpoly_from_ints(&[-1, 0, 1]); // x^2 - 1
        let g = qpoly_from_ints(&[1, 1]); // x + 1
        let (q, rem) = r.div_rem(&f, &g);
        assert_eq!(q, qpoly_from_ints(&[-1, 1]));
        assert!(rem.is_zero());
        let h = qpoly_from_ints(&[-1, 0, 0, 1]); // x^3 - 1
        assert_eq!(r.gcd(&f, &h), qpoly_from_ints(&[-1, 1]));
    }

    #[test]
    fn xgcd_bezout_identity() {
        let r = qpoly();
        let a = qpoly_from_ints(&[1, 0, 1]);
        let b = qpoly_from_ints(&[2, 1]);
        let (g, s, t) = r.xgcd(&a, &b);
        assert_eq!(g, r.one());
        assert_eq!(r.add(&r.mul(&s, &a), &r.mul(&t, &b)), g);
    }

    #[test]
    fn compose_and_eval() {
        let r = qpoly();
        let f = qpoly_from_ints(&[0, 0, 1]);
        let g = qpoly_from_ints(&[1, 1]);
        let fg = r.compose(&f, &g);
        assert_eq!(fg, qpoly_from_ints(&[1, 2, 1]));
        assert_eq!(r.eval(&fg, &rat(2)), rat(9));
        assert_eq!(qpoly_from_ints(&[-5, 0, 1]).display("x"), "x^2 - 5");
    }
}
