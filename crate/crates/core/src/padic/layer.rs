//! The unramified layer `Q_p(zeta) = Q_p[x]/(g)` with `g` irreducible mod p,
//! its residue field and the Frobenius lift.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::finite_field::{fp_poly_ring, FpPoly, GaloisField};
use crate::kernel::hensel::reduce_poly_mod_p;
use crate::kernel::poly::{qpoly, Poly, QPolyRing};
use crate::kernel::rat::{big_pow, fmt_rat, is_prime, rat, rat_from_big, rational_reconstruct, reduce_mod_pk, residue, symmetric_mod, val, Rat};
use crate::kernel::ring::{Field, Ring};

/// Element of the unramified layer: coordinates on `1, zeta, ..., zeta^{f-1}`
/// and an absolute precision (`None` when exact).
#[derive(Clone, Debug, PartialEq)]
pub struct LayerElem {
    pub c: Vec<Rat>,
    pub prec: Option<i64>,
}

impl LayerElem {
    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.c
    }

    /// The element as a rational scalar, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.c.iter().skip(1).all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    pub fn display(&self) -> String {
        let p = qpoly().from_coeffs(self.c.clone());
        let s = p.display("z");
        match self.prec {
            None => s,
            Some(n) => format!("{s} + O(p^{n})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Layer {
    p: u64,
    f: usize,
    g: Poly<Rat>,
    residue: GaloisField,
    precision: u32,
    frob: LayerElem,
    /// Powers `zeta^k` for `k < 2f - 1` reduced mod g.
    zeta_pows: Vec<Vec<Rat>>,
    q: QPolyRing,
}

impl PartialEq for Layer {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.g == other.g
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl Layer {
    /// Builds the layer for a monic integer polynomial irreducible mod p.
    pub fn new(p: u64, g: Poly<Rat>, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not a prime")));
        }
        if precision == 0 {
            return Err(Error::Domain("precision must be positive".into()));
        }
        let q = qpoly();
        let f = match g.degree() {
            Some(f) if f >= 1 => f,
            _ => return Err(Error::rejected("unram-degree", "unramified polynomial must have degree >= 1")),
        };
        if !q.is_monic(&g) || g.coeffs().iter().any(|c| !c.is_integer()) {
            return Err(Error::rejected("unram-monic-integer", "unramified polynomial must be monic with integer coefficients"));
        }
        let gbar = reduce_poly_mod_p(&g, p)?;
        let residue = GaloisField::new(p, gbar).map_err(|_| {
            Error::rejected("unram-irreducible", format!("{} is reducible mod {p}", g.display("x")))
        })?;
        let mut zeta_pows = Vec::new();
        for k in 0..(2 * f).saturating_sub(1).max(1) {
            let r = q.rem_monic(&q.monomial(rat(1), k), &g);
            let mut v = r.into_coeffs();
            v.resize(f, rat(0));
            zeta_pows.push(v);
        }
        let mut layer = Layer {
            p,
            f,
            g,
            residue,
            precision,
            frob: LayerElem { c: vec![], prec: None },
            zeta_pows,
            q,
        };
        layer.frob = layer.lift_frobenius()?;
        Ok(layer)
    }

    /// The layer `Q_p` itself, presented by `x - 1`.
    pub fn trivial(p: u64, precision: u32) -> Result<Self> {
        Self::new(p, crate::kernel::poly::qpoly_from_ints(&[-1, 1]), precision)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn poly(&self) -> &Poly<Rat> {
        &self.g
    }

    pub fn residue_field(&self) -> &GaloisField {
        &self.residue
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn frobenius_is_exact(&self) -> bool {
        self.frob.is_exact()
    }

    /// Image of the generator under Frobenius.
    pub fn frobenius_image(&self) -> &LayerElem {
        &self.frob
    }

    pub fn exact(&self, mut c: Vec<Rat>) -> LayerElem {
        if c.len() > self.f {
            let r = self.q.rem_monic(&self.q.from_coeffs(c), &self.g);
            c = r.into_coeffs();
        }
        c.resize(self.f, rat(0));
        LayerElem { c, prec: None }
    }

    pub fn from_rat(&self, r: Rat) -> LayerElem {
        self.exact(vec![r])
    }

    pub fn generator(&self) -> LayerElem {
        self.exact(vec![rat(0), rat(1)])
    }

    pub fn with_precision(&self, mut a: LayerElem, prec: Option<i64>) -> LayerElem {
        a.prec = prec;
        if let Some(n) = prec {
            for x in a.c.iter_mut() {
                *x = reduce_mod_pk(x, self.p, n);
            }
        }
        a
    }

    /// Valuation with v(p) = 1; `None` when zero or indistinguishable from zero.
    pub fn valuation(&self, a: &LayerElem) -> Option<i64> {
        a.c.iter().filter_map(|x| val(x, self.p)).min()
    }

    /// Lower bound on the valuation, accounting for precision.
    fn val_bound(&self, a: &LayerElem) -> Option<i64> {
        match (self.valuation(a), a.prec) {
            (Some(v), Some(n)) => Some(v.min(n)),
            (Some(v), None) => Some(v),
            (None, n) => n,
        }
    }

    /// Residue in `F_q` of a p-integral element.
    pub fn residue(&self, a: &LayerElem) -> Result<FpPoly> {
        if let Some(n) = a.prec {
            if n < 1 {
                return Err(Error::Precision("element not known mod p".into()));
            }
        }
        let c = a.c.iter().map(|x| residue(x, self.p)).collect::<Result<Vec<_>>>()?;
        Ok(self.residue.from_coeffs(c))
    }

    /// Lift of a residue-field element with digits in `[0, p)`.
    pub fn lift_residue(&self, r: &FpPoly) -> LayerElem {
        self.exact(r.coeffs().iter().map(|&x| rat(x as i64)).collect())
    }

    /// Digit representative with index `i` in `[0, q)`.
    pub fn digit(&self, i: u128) -> LayerElem {
        self.lift_residue(&self.residue.element(i))
    }

    fn mul_coeffs(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut prod = vec![rat(0); 2 * self.f - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out = vec![rat(0); self.f];
        for (k, c) in prod.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, z) in self.zeta_pows[k].iter().enumerate() {
                if !z.is_zero() {
                    out[m] += c * z;
                }
            }
        }
        out
    }

    fn as_poly(&self, a: &LayerElem) -> Poly<Rat> {
        self.q.from_coeffs(a.c.clone())
    }

    /// Evaluates a rational polynomial at a layer element.
    pub fn eval_poly(&self, h: &Poly<Rat>, x: &LayerElem) -> LayerElem {
        let mut acc = self.zero();
        for c in h.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.from_rat(c.clone()));
        }
        acc
    }

    /// Frobenius: the automorphism lifting `t -> t^p` on the residue field.
    pub fn frobenius(&self, a: &LayerElem) -> LayerElem {
        if self.f == 1 {
            return a.clone();
        }
        let mut acc = self.zero();
        for c in a.c.iter().rev() {
            acc = self.add(&self.mul(&acc, &self.frob), &self.from_rat(c.clone()));
        }
        let prec = match (a.prec, self.frob.prec) {
            (x, None) => x,
            (x, Some(n)) => {
                let vmin = a.c.iter().filter_map(|c| val(c, self.p)).min().unwrap_or(0).min(0);
                min_opt(x, Some(n + vmin))
            }
        };
        self.with_precision(acc, prec)
    }

    pub fn frobenius_pow(&self, a: &LayerElem, k: usize) -> LayerElem {
        let mut x = a.clone();
        for _ in 0..k % self.f.max(1) {
            x = self.frobenius(&x);
        }
        x
    }

    fn lift_frobenius(&self) -> Result<LayerElem> {
        let f = self.f;
        if f == 1 {
            return Ok(self.generator());
        }
        let n = self.precision as i64;
        let mut x = self.exact(
            self.q
                .pow_mod(&self.q.x(), self.p as u128, &self.g)
                .into_coeffs(),
        );
        let dg = self.q.derivative(&self.g);
        let mut k = 1i64;
        loop {
            k = (2 * k).min(n);
            let gx = self.as_poly(&self.eval_poly(&self.g, &x));
            let dgx = self.as_poly(&self.eval_poly(&dg, &x));
            let inv = self
                .q
                .inv_mod(&dgx, &self.g)
                .ok_or_else(|| Error::Consistency("derivative not invertible in the layer".into()))?;
            let step = self.q.mul_mod(&gx, &inv, &self.g);
            let next = self.q.sub(&self.as_poly(&x), &step);
            x = self.with_precision(self.exact(next.into_coeffs()), Some(k));
            x.prec = None;
            if k == n {
                break;
            }
        }
        // an integral candidate that is an exact root of g is the exact Frobenius
        let m = big_pow(self.p, n as u32);
        let cand: Vec<Rat> = x
            .c
            .iter()
            .map(|c| {
                let num: BigInt = c.to_integer();
                rat_from_big(symmetric_mod(&num, &m))
            })
            .collect();
        let cand = self.exact(cand);
        if self.eval_poly(&self.g, &cand).c.iter().all(|c| c.is_zero()) {
            return Ok(cand);
        }
        // small denominators prime to p, as for Gaussian periods
        let recon: Option<Vec<Rat>> = x
            .c
            .iter()
            .map(|c| rational_reconstruct(&c.to_integer(), &m))
            .collect();
        if let Some(c) = recon {
            let cand = self.exact(c);
            if self.eval_poly(&self.g, &cand).c.iter().all(|c| c.is_zero()) {
                return Ok(cand);
            }
        }
        Ok(LayerElem { c: x.c, prec: Some(n) })
    }

    pub fn describe(&self, a: &LayerElem) -> String {
        a.display()
    }

    pub fn fmt_coords(a: &LayerElem) -> Vec<String> {
        a.c.iter().map(fmt_rat).collect()
    }

    /// Reduction of the defining polynomial mod p.
    pub fn residue_poly(&self) -> FpPoly {
        reduce_poly_mod_p(&self.g, self.p).unwrap_or_else(|_| fp_poly_ring(self.p).zero())
    }
}

impl Ring for Layer {
    type Elem = LayerElem;

    fn zero(&self) -> LayerElem {
        self.exact(vec![])
    }
    fn one(&self) -> LayerElem {
        self.from_rat(Rat::one())
    }
    fn from_i64(&self, n: i64) -> LayerElem {
        self.from_rat(rat(n))
    }
    fn add(&self, a: &LayerElem, b: &LayerElem) -> LayerElem {
        let c = a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect();
        self.with_precision(LayerElem { c, prec: None }, min_opt(a.prec, b.prec))
    }
    fn neg(&self, a: &LayerElem) -> LayerElem {
        let c = a.c.iter().map(|x| -x).collect();
        self.with_precision(LayerElem { c, prec: None }, a.prec)
    }
    fn mul(&self, a: &LayerElem, b: &LayerElem) -> LayerElem {
        let c = self.mul_coeffs(&a.c, &b.c);
        let exact_zero = |x: &LayerElem| x.is_exact() && x.c.iter().all(|c| c.is_zero());
        if exact_zero(a) || exact_zero(b) {
            return self.zero();
        }
        let prec = match (a.prec, b.prec) {
            (None, None) => None,
            (Some(pa), None) => Some(pa + self.val_bound(b).unwrap()),
            (None, Some(pb)) => Some(pb + self.val_bound(a).unwrap()),
            (Some(pa), Some(pb)) => {
                Some((pa + self.val_bound(b).unwrap()).min(pb + self.val_bound(a).unwrap()))
            }
        };
        self.with_precision(LayerElem { c, prec: None }, prec)
    }
    fn is_zero(&self, a: &LayerElem) -> bool {
        a.c.iter().all(|x| x.is_zero())
    }
}

impl Field for Layer {
    fn inv(&self, a: &LayerElem) -> Option<LayerElem> {
        if self.is_zero(a) {
            return None;
        }
        let inv = self.q.inv_mod(&self.as_poly(a), &self.g)?;
        let r = self.exact(inv.into_coeffs());
        match a.prec {
            None => Some(r),
            Some(n) => {
                let v = self.valuation(a).unwrap();
                if v >= n {
                    return None;
                }
                Some(self.with_precision(r, Some(n - 2 * v)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::qpoly_from_ints;

    #[test]
    fn frobenius_on_quadratic_over_q3() {
        let l = Layer::new(3, qpoly_from_ints(&[1, 0, 1]), 30).unwrap();
        assert!(l.frobenius_is_exact());
        let z = l.generator();
        let fz = l.frobenius(&z);
        assert_eq!(fz, l.neg(&z));
        // congruent to zeta^3 mod 3
        assert_eq!(l.residue(&fz).unwrap(), l.residue(&l.pow(&z, 3)).unwrap());
        assert_eq!(l.frobenius(&l.from_rat(rat(7))), l.from_rat(rat(7)));
    }

    #[test]
    fn frobenius_has_order_f() {
        let l = Layer::new(2, qpoly_from_ints(&[1, 1, 1, 1, 1]), 40).unwrap();
        let z = l.generator();
        let x = l.add(&z, &l.mul(&z, &z));
        assert_eq!(l.frobenius_pow(&x, 4), x);
        assert_ne!(l.frobenius(&x), x);
    }

    #[test]
    fn inexact_frobenius_for_non_galois_cubic() {
        // x^3 - 2 is irreducible mod 5? no; mod 7 yes (2 is not a cube mod 7)
        let l = Layer::new(7, qpoly_from_ints(&[-2, 0, 0, 1]), 20).unwrap();
        assert!(!l.frobenius_is_exact());
        let z = l.generator();
        assert_eq!(l.frobenius_pow(&z, 3), z);
        let z3 = l.frobenius(&l.frobenius(&l.frobenius(&z)));
        assert_eq!(z3.prec, Some(20));
        assert!(l.is_zero(&l.sub(&z3, &z)));
        // phi(zeta) is a root of g up to precision
        let gz = l.eval_poly(l.poly(), &l.frobenius(&z));
        assert!(l.is_zero(&gz));
    }

    #[test]
    fn rejects_reducible() {
        assert!(matches!(
            Layer::new(5, qpoly_from_ints(&[1, 0, 1]), 10),
            Err(Error::Rejected { .. })
        ));
    }

    #[test]
    fn precision_propagation() {
        let l = Layer::trivial(5, 10).unwrap();
        let a = l.with_precision(l.from_rat(rat(5)), Some(4));
        let b = l.with_precision(l.from_rat(rat(25)), Some(6));
        assert_eq!(l.mul(&a, &b).prec, Some(6));
        assert_eq!(l.add(&a, &b).prec, Some(4));
        let ai = l.inv(&a).unwrap();
        assert_eq!(ai.prec, Some(2));
    }
}
