//! Towers `Q_p ⊂ Q_p(zeta) ⊂ Q_p(zeta, pi)` with an exact global model
//! `Q[zeta, y]/(g(zeta), E(y))`. Coordinates are indexed `j*f + i` for the
//! basis element `zeta^i pi^j`.

use num_traits::{One, Zero};

use super::layer::{Layer, LayerElem};
use crate::error::{Error, Result};
use crate::kernel::finite_field::FpPoly;
use crate::kernel::matrix::{ops, Matrix};
use crate::kernel::poly::{qpoly, qpoly_from_ints, Poly};
use crate::kernel::rat::{big_pow, fmt_rat, rat, rat_from_big, val, Rat};
use crate::kernel::ring::{Field, Rationals, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct TowerElem {
    pub c: Vec<Rat>,
}

impl TowerElem {
    pub fn coords(&self) -> &[Rat] {
        &self.c
    }
}

#[derive(Clone, Debug)]
pub struct PadicTower {
    layer: Layer,
    e: usize,
    d: usize,
    /// Non-leading Eisenstein coefficients `a_0, ..., a_{e-1}`.
    eis: Vec<LayerElem>,
    /// `y^k` reduced mod E for `k < 2e - 1`, as layer coordinates.
    y_pows: Vec<Vec<LayerElem>>,
    /// Residue of `-p / a_0`, so that `pi^e / p` has residue its inverse.
    res_neg_p_over_a0: FpPoly,
    pi_inv: Option<TowerElem>,
}

impl PartialEq for PadicTower {
    fn eq(&self, other: &Self) -> bool {
        self.layer == other.layer && self.eis == other.eis
    }
}

/// Unramified polynomial of degree `f` for `p`, preferring presentations whose
/// Frobenius is an exact polynomial map.
pub fn standard_unram_poly(p: u64, f: usize) -> Result<Poly<Rat>> {
    use crate::kernel::finite_field::{fp_poly_ring, is_irreducible};
    use crate::kernel::hensel::reduce_poly_mod_p;
    let irr = |g: &Poly<Rat>| is_irreducible(&reduce_poly_mod_p(g, p).unwrap(), p);
    let mut cands: Vec<Poly<Rat>> = Vec::new();
    match f {
        0 => return Err(Error::Domain("residue degree must be positive".into())),
        1 => return Ok(qpoly_from_ints(&[-1, 1])),
        2 => {
            if p == 2 {
                cands.push(qpoly_from_ints(&[1, 1, 1]));
            } else if p % 4 == 3 {
                cands.push(qpoly_from_ints(&[1, 0, 1]));
            } else {
                let n = (2..p as i64)
                    .find(|&n| crate::kernel::rat::legendre(&n.into(), p) == -1)
                    .unwrap();
                cands.push(qpoly_from_ints(&[-n, 0, 1]));
            }
        }
        3 => {
            cands.push(qpoly_from_ints(&[-1, -2, 1, 1]));
            cands.push(qpoly_from_ints(&[1, -3, 0, 1]));
        }
        4 => {
            cands.push(qpoly_from_ints(&[1, 1, 1, 1, 1]));
            cands.push(qpoly_from_ints(&[1, -1, 1, -1, 1]));
            // periods of conductor 13, cyclic quartic
            cands.push(qpoly_from_ints(&[3, -4, 2, 1, 1]));
        }
        _ => {}
    }
    if let Some(g) = cands.into_iter().find(|g| irr(g)) {
        return Ok(g);
    }
    // first irreducible in lexicographic order of low coefficients
    let r = fp_poly_ring(p);
    let total = (p as u128).pow(f as u32);
    for idx in 0..total {
        let mut c = Vec::with_capacity(f + 1);
        let mut t = idx;
        for _ in 0..f {
            c.push((t % p as u128) as u64);
            t /= p as u128;
        }
        c.push(1);
        let h = r.from_coeffs(c.clone());
        if is_irreducible(&h, p) {
            return Ok(qpoly().from_coeffs(c.into_iter().map(|x| rat(x as i64)).collect()));
        }
    }
    Err(Error::Consistency("no irreducible polynomial found".into()))
}

impl PadicTower {
    /// Builds the tower from an unramified polynomial of degree `f` and an
    /// Eisenstein polynomial whose coefficients (constant term first) are
    /// given as layer coordinates.
    pub fn new(p: u64, f: usize, unram_poly: Poly<Rat>, eis_poly: &[Vec<Rat>], precision: u32) -> Result<Self> {
        if unram_poly.degree() != Some(f) {
            return Err(Error::rejected(
                "unram-degree",
                format!("unramified polynomial has degree {:?}, expected {f}", unram_poly.degree()),
            ));
        }
        let layer = Layer::new(p, unram_poly, precision)?;
        let coeffs: Vec<LayerElem> = eis_poly.iter().map(|c| layer.exact(c.clone())).collect();
        Self::with_layer(layer, coeffs)
    }

    pub fn with_layer(layer: Layer, eis_coeffs: Vec<LayerElem>) -> Result<Self> {
        let p = layer.p();
        let mut coeffs = eis_coeffs;
        while coeffs.last().map(|c| layer.is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::rejected("eisenstein-degree", "Eisenstein polynomial must have degree >= 1"));
        }
        let e = coeffs.len() - 1;
        if !layer.is_one(&coeffs[e]) {
            return Err(Error::rejected("eisenstein-monic", "Eisenstein polynomial must be monic"));
        }
        for (j, a) in coeffs[..e].iter().enumerate() {
            if let Some(v) = layer.valuation(a) {
                if v < 1 {
                    return Err(Error::rejected(
                        "eisenstein-coefficients",
                        format!("coefficient of y^{j} has valuation {v} < 1"),
                    ));
                }
            }
        }
        match layer.valuation(&coeffs[0]) {
            Some(1) => {}
            v => {
                return Err(Error::rejected(
                    "eisenstein-constant",
                    format!("constant coefficient has valuation {v:?}, expected exactly 1"),
                ))
            }
        }
        let eis: Vec<LayerElem> = coeffs[..e].to_vec();
        // y^k mod E for k < 2e - 1
        let mut y_pows: Vec<Vec<LayerElem>> = Vec::new();
        let mut cur: Vec<LayerElem> = vec![layer.zero(); e];
        cur[0] = layer.one();
        for k in 0..(2 * e - 1).max(1) {
            y_pows.push(cur.clone());
            if k + 1 == (2 * e - 1).max(1) {
                break;
            }
            // multiply by y: shift, then fold y^e = -sum a_j y^j
            let top = cur[e - 1].clone();
            let mut next = vec![layer.zero(); e];
            for j in (1..e).rev() {
                next[j] = cur[j - 1].clone();
            }
            for j in 0..e {
                next[j] = layer.sub(&next[j], &layer.mul(&top, &eis[j]));
            }
            cur = next;
        }
        let b = layer.mul(&eis[0], &layer.from_rat(Rat::new(1.into(), p.into())));
        let res_b = layer.residue(&b)?;
        let k = layer.residue_field();
        use crate::kernel::ring::Field as _;
        let res_neg_p_over_a0 = k.neg(&k.inv(&res_b).unwrap());
        let d = e * layer.f();
        let mut tower = PadicTower {
            layer,
            e,
            d,
            eis,
            y_pows,
            res_neg_p_over_a0,
            pi_inv: None,
        };
        tower.pi_inv = Some(
            tower
                .inv(&tower.uniformizer())
                .ok_or_else(|| Error::Consistency("uniformizer not invertible".into()))?,
        );
        Ok(tower)
    }

    /// The tower `Q_p(zeta)(sqrt-type root of y^e - p)` over the standard layer.
    pub fn standard(p: u64, f: usize, e: usize, precision: u32) -> Result<Self> {
        let g = standard_unram_poly(p, f)?;
        let mut eis = vec![vec![rat(-(p as i64))]];
        eis.extend((1..e).map(|_| vec![rat(0)]));
        eis.push(vec![rat(1)]);
        Self::new(p, f, g, &eis, precision)
    }

    pub fn layer(&self) -> &Layer {
        &self.layer
    }

    pub fn p(&self) -> u64 {
        self.layer.p()
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn f(&self) -> usize {
        self.layer.f()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn precision(&self) -> u32 {
        self.layer.precision()
    }

    /// Non-leading Eisenstein coefficients.
    pub fn eisenstein_coeffs(&self) -> &[LayerElem] {
        &self.eis
    }

    /// Eisenstein coefficients including the leading 1.
    pub fn eisenstein_poly(&self) -> Vec<LayerElem> {
        let mut v = self.eis.clone();
        v.push(self.layer.one());
        v
    }

    pub fn elem(&self, mut c: Vec<Rat>) -> TowerElem {
        c.resize(self.d, rat(0));
        TowerElem { c }
    }

    pub fn from_rat(&self, r: Rat) -> TowerElem {
        self.elem(vec![r])
    }

    pub fn from_layer(&self, a: &LayerElem) -> TowerElem {
        self.elem(a.c.clone())
    }

    /// `sum_j a_j pi^j` from layer coordinates.
    pub fn from_layer_coeffs(&self, a: &[LayerElem]) -> TowerElem {
        let mut c = vec![rat(0); self.d];
        let f = self.f();
        for (j, x) in a.iter().enumerate().take(self.e) {
            for (i, y) in x.c.iter().enumerate() {
                c[j * f + i] = y.clone();
            }
        }
        TowerElem { c }
    }

    pub fn layer_coeffs(&self, x: &TowerElem) -> Vec<LayerElem> {
        let f = self.f();
        (0..self.e).map(|j| self.layer.exact(x.c[j * f..(j + 1) * f].to_vec())).collect()
    }

    pub fn basis(&self, k: usize) -> TowerElem {
        let mut c = vec![rat(0); self.d];
        c[k] = rat(1);
        TowerElem { c }
    }

    pub fn zeta(&self) -> TowerElem {
        self.from_layer(&self.layer.generator())
    }

    /// The uniformizer `pi`, the class of `y`.
    pub fn uniformizer(&self) -> TowerElem {
        if self.e == 1 {
            self.from_layer(&self.layer.neg(&self.eis[0]))
        } else {
            self.basis(self.f())
        }
    }

    pub fn pi_pow(&self, n: i64) -> TowerElem {
        if n >= 0 {
            self.pow(&self.uniformizer(), n as u64)
        } else {
            self.pow(self.pi_inv.as_ref().unwrap(), (-n) as u64)
        }
    }

    /// Maps a layer element through `zeta -> image`.
    pub fn map_layer(&self, a: &LayerElem, image: &TowerElem) -> TowerElem {
        let mut acc = self.zero();
        for c in a.c.iter().rev() {
            acc = self.add(&self.mul(&acc, image), &self.from_rat(c.clone()));
        }
        acc
    }

    /// Valuation with v(p) = 1.
    pub fn valuation(&self, x: &TowerElem) -> Option<Rat> {
        self.vpi(x).map(|n| Rat::new(n.into(), (self.e as i64).into()))
    }

    /// Valuation in units of `v(pi)`.
    pub fn vpi(&self, x: &TowerElem) -> Option<i64> {
        let f = self.f();
        let e = self.e as i64;
        (0..self.e)
            .filter_map(|j| {
                x.c[j * f..(j + 1) * f]
                    .iter()
                    .filter_map(|c| val(c, self.p()))
                    .min()
                    .map(|k| k * e + j as i64)
            })
            .min()
    }

    /// Residue of the unit part `x / pi^{v(x)}`.
    pub fn unit_residue(&self, x: &TowerElem) -> Result<FpPoly> {
        let n = self.vpi(x).ok_or_else(|| Error::Domain("unit part of zero".into()))?;
        let e = self.e as i64;
        let (k0, j0) = (n.div_euclid(e), n.rem_euclid(e) as usize);
        let f = self.f();
        let scale = if k0 >= 0 {
            Rat::new(1.into(), big_pow(self.p(), k0 as u32))
        } else {
            rat_from_big(big_pow(self.p(), (-k0) as u32))
        };
        let l = self
            .layer
            .exact(x.c[j0 * f..(j0 + 1) * f].iter().map(|c| c * &scale).collect());
        let k = self.layer.residue_field();
        let r = self.layer.residue(&l)?;
        let t = if k0 >= 0 {
            k.pow(&self.res_neg_p_over_a0, k0 as u64)
        } else {
            k.pow(&k.inv(&self.res_neg_p_over_a0).unwrap(), (-k0) as u64)
        };
        Ok(k.mul(&r, &t))
    }

    /// Residue of an integral element (zero for positive valuation).
    pub fn residue(&self, x: &TowerElem) -> Result<FpPoly> {
        match self.vpi(x) {
            None => Ok(self.layer.residue_field().zero()),
            Some(n) if n > 0 => Ok(self.layer.residue_field().zero()),
            Some(0) => self.unit_residue(x),
            Some(_) => Err(Error::Domain("residue of a non-integral element".into())),
        }
    }

    /// Digit representative `sum d_i zeta^i` of residue index `i`.
    pub fn digit(&self, i: u128) -> TowerElem {
        self.from_layer(&self.layer.digit(i))
    }

    pub fn residue_order(&self) -> u128 {
        self.layer.residue_field().order()
    }

    /// Matrix of multiplication by `x` on the Q-basis (column k = x * b_k).
    pub fn mult_matrix(&self, x: &TowerElem) -> Matrix<Rat> {
        let cols: Vec<TowerElem> = (0..self.d).map(|k| self.mul(x, &self.basis(k))).collect();
        Matrix::from_fn(self.d, self.d, |i, k| cols[k].c[i].clone())
    }

    pub fn trace_base(&self, x: &TowerElem) -> Rat {
        ops(&Rationals).trace(&self.mult_matrix(x))
    }

    pub fn norm_base(&self, x: &TowerElem) -> Rat {
        ops(&Rationals).det(&self.mult_matrix(x)).unwrap()
    }

    /// Matrix of multiplication by `x` over the layer on the basis `pi^j`.
    pub fn layer_mult_matrix(&self, x: &TowerElem) -> Matrix<LayerElem> {
        let cols: Vec<Vec<LayerElem>> = (0..self.e)
            .map(|j| self.layer_coeffs(&self.mul(x, &self.basis(j * self.f()))))
            .collect();
        Matrix::from_fn(self.e, self.e, |i, j| cols[j][i].clone())
    }

    pub fn trace_layer(&self, x: &TowerElem) -> LayerElem {
        ops(&self.layer).trace(&self.layer_mult_matrix(x))
    }

    pub fn norm_layer(&self, x: &TowerElem) -> LayerElem {
        ops(&self.layer).det(&self.layer_mult_matrix(x)).unwrap()
    }

    /// Minimal-degree test: characteristic polynomial of multiplication over Q.
    pub fn char_poly(&self, x: &TowerElem) -> Poly<Rat> {
        ops(&Rationals).char_poly(&self.mult_matrix(x)).unwrap()
    }

    /// Square test. For odd p the residue criterion; for p = 2 a digit search
    /// for `w` with `v(u - w^2) >= 2e + 1`, which certifies `u` a square.
    pub fn is_square(&self, x: &TowerElem) -> Result<bool> {
        let n = self.vpi(x).ok_or_else(|| Error::Domain("square test of zero".into()))?;
        if n % 2 != 0 {
            return Ok(false);
        }
        if self.p() != 2 {
            let r = self.unit_residue(x)?;
            return Ok(self.layer.residue_field().is_square(&r));
        }
        let u = self.mul(x, &self.pi_pow(-n));
        let target = 2 * self.e as i64 + 1;
        Ok(self.sqrt_search(&u, &self.zero(), 0, target))
    }

    fn sqrt_search(&self, u: &TowerElem, w: &TowerElem, k: i64, target: i64) -> bool {
        let e = self.e as i64;
        let need = (2 * k).min(e + k).min(target);
        let diff = self.sub(u, &self.mul(w, w));
        let v = self.vpi(&diff).unwrap_or(i64::MAX);
        if v < need {
            return false;
        }
        if v >= target {
            return true;
        }
        let pik = self.pi_pow(k);
        for i in 0..self.residue_order() {
            if k == 0 && i == 0 {
                continue;
            }
            let next = self.add(w, &self.mul(&self.digit(i), &pik));
            if self.sqrt_search(u, &next, k + 1, target) {
                return true;
            }
        }
        false
    }

    /// Random element with integer coordinates in `[-bound, bound]`.
    pub fn random_elem<R: rand::Rng>(&self, rng: &mut R, bound: i64) -> TowerElem {
        self.elem((0..self.d).map(|_| rat(rng.gen_range(-bound..=bound))).collect())
    }

    /// Random nonzero element scaled by a random power of the uniformizer.
    pub fn random_nonzero<R: rand::Rng>(&self, rng: &mut R, bound: i64, max_shift: i64) -> TowerElem {
        loop {
            let x = self.random_elem(rng, bound);
            if !self.is_zero(&x) {
                let s = rng.gen_range(-max_shift..=max_shift);
                return self.mul(&x, &self.pi_pow(s));
            }
        }
    }

    pub fn display(&self, x: &TowerElem) -> String {
        let f = self.f();
        let mut parts = Vec::new();
        for j in 0..self.e {
            let l = qpoly().from_coeffs(x.c[j * f..(j + 1) * f].to_vec());
            if l.is_zero() {
                continue;
            }
            let s = l.display("z");
            let s = if l.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 && j > 0 {
                format!("({s})")
            } else {
                s
            };
            parts.push(match j {
                0 => s,
                1 => format!("{s}*pi"),
                _ => format!("{s}*pi^{j}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn fmt_coords(x: &TowerElem) -> Vec<String> {
        x.c.iter().map(fmt_rat).collect()
    }
}

impl Ring for PadicTower {
    type Elem = TowerElem;

    fn zero(&self) -> TowerElem {
        self.elem(vec![])
    }
    fn one(&self) -> TowerElem {
        self.from_rat(Rat::one())
    }
    fn from_i64(&self, n: i64) -> TowerElem {
        self.from_rat(rat(n))
    }
    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem {
            c: a.c.iter().zip(&b.c).map(|(x, y)| x + y).collect(),
        }
    }
    fn neg(&self, a: &TowerElem) -> TowerElem {
        TowerElem {
            c: a.c.iter().map(|x| -x).collect(),
        }
    }
    fn sub(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        TowerElem {
            c: a.c.iter().zip(&b.c).map(|(x, y)| x - y).collect(),
        }
    }
    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        let l = &self.layer;
        let (la, lb) = (self.layer_coeffs(a), self.layer_coeffs(b));
        let mut prod = vec![l.zero(); 2 * self.e - 1];
        for (i, x) in la.iter().enumerate() {
            if l.is_zero(x) {
                continue;
            }
            for (j, y) in lb.iter().enumerate() {
                if !l.is_zero(y) {
                    prod[i + j] = l.add(&prod[i + j], &l.mul(x, y));
                }
            }
        }
        let mut out = vec![l.zero(); self.e];
        for (k, c) in prod.iter().enumerate() {
            if l.is_zero(c) {
                continue;
            }
            for (m, yk) in self.y_pows[k].iter().enumerate() {
                if !l.is_zero(yk) {
                    out[m] = l.add(&out[m], &l.mul(c, yk));
                }
            }
        }
        self.from_layer_coeffs(&out)
    }
    fn is_zero(&self, a: &TowerElem) -> bool {
        a.c.iter().all(|x| x.is_zero())
    }
}

impl Field for PadicTower {
    fn inv(&self, a: &TowerElem) -> Option<TowerElem> {
        if self.is_zero(a) {
            return None;
        }
        let m = self.mult_matrix(a);
        let mut rhs = vec![rat(0); self.d];
        rhs[0] = rat(1);
        ops(&Rationals).solve(&m, &rhs).ok().map(|c| TowerElem { c })
    }
}

pub fn random_rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

/// Random Eisenstein polynomial over the layer: `a_j = p * (small layer
/// element)`, `a_0 = p * unit`; when `f > 1` the constant term involves zeta.
pub fn random_eisenstein<R: rand::Rng>(layer: &Layer, e: usize, rng: &mut R) -> Vec<LayerElem> {
    let p = layer.p() as i64;
    let f = layer.f();
    let mut out = Vec::with_capacity(e + 1);
    loop {
        let mut c: Vec<Rat> = (0..f).map(|_| rat(rng.gen_range(-2..=2))).collect();
        if f > 1 && c[1].is_zero() {
            c[1] = rat(1);
        }
        let unit = layer.exact(c);
        if layer.valuation(&unit) == Some(0) {
            out.push(layer.mul(&unit, &layer.from_i64(p)));
            break;
        }
    }
    for _ in 1..e {
        let c: Vec<Rat> = (0..f).map(|_| rat(p * rng.gen_range(-2..=2))).collect();
        out.push(layer.exact(c));
    }
    out.push(layer.one());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt5() -> PadicTower {
        PadicTower::new(5, 1, qpoly_from_ints(&[-1, 1]), &[vec![rat(-5)], vec![rat(0)], vec![rat(1)]], 40).unwrap()
    }

    #[test]
    fn build_examples() {
        let t = sqrt5();
        assert_eq!((t.e(), t.f(), t.d()), (2, 1, 2));
        let u = PadicTower::new(2, 4, qpoly_from_ints(&[1, 1, 1, 1, 1]), &[vec![rat(-2)], vec![rat(1)]], 60).unwrap();
        assert_eq!((u.e(), u.f()), (1, 4));
        let bad = PadicTower::new(5, 1, qpoly_from_ints(&[-1, 1]), &[vec![rat(-25)], vec![rat(-10)], vec![rat(1)]], 40);
        assert!(matches!(bad, Err(Error::Rejected { .. })));
        let bad = PadicTower::new(5, 1, qpoly_from_ints(&[-1, 1]), &[vec![rat(-5)], vec![rat(1)], vec![rat(1)]], 40);
        assert!(matches!(bad, Err(Error::Rejected { .. })));
    }

    #[test]
    fn traces_and_norms() {
        let t = sqrt5();
        let pi = t.uniformizer();
        assert_eq!(t.norm_base(&pi), rat(-5));
        assert_eq!(t.trace_base(&pi), rat(0));
        assert_eq!(t.norm_base(&t.one()), rat(1));
        let u = PadicTower::new(2, 4, qpoly_from_ints(&[1, 1, 1, 1, 1]), &[vec![rat(-2)], vec![rat(1)]], 60).unwrap();
        assert_eq!(u.trace_base(&u.zeta()), rat(-1));
    }

    #[test]
    fn valuations_and_residues() {
        let t = sqrt5();
        let pi = t.uniformizer();
        assert_eq!(t.vpi(&pi), Some(1));
        assert_eq!(t.valuation(&t.from_i64(10)), Some(rat(1)));
        // pi^2 = 5, so unit part of 5 relative to pi^2 is 1
        assert_eq!(t.unit_residue(&t.from_i64(5)).unwrap(), t.layer().residue_field().one());
        let x = t.mul(&pi, &t.from_i64(3));
        assert_eq!(t.unit_residue(&x).unwrap(), t.layer().residue_field().from_i64(3));
        let pinv = t.pi_pow(-1);
        assert_eq!(t.mul(&pinv, &pi), t.one());
    }

    #[test]
    fn squares() {
        let q5 = PadicTower::standard(5, 1, 1, 20).unwrap();
        assert!(q5.is_square(&q5.from_i64(4)).unwrap());
        assert!(!q5.is_square(&q5.from_i64(2)).unwrap());
        let q2 = PadicTower::standard(2, 1, 1, 20).unwrap();
        assert!(q2.is_square(&q2.from_i64(17)).unwrap());
        assert!(!q2.is_square(&q2.from_i64(5)).unwrap());
        assert!(!q2.is_square(&q2.from_i64(2)).unwrap());
        assert!(q2.is_square(&q2.from_i64(36)).unwrap());
        // in Q2(sqrt 2), 2 is a square
        let t = PadicTower::standard(2, 1, 2, 20).unwrap();
        assert!(t.is_square(&t.from_i64(2)).unwrap());
        assert!(!t.is_square(&t.from_i64(-1)).unwrap());
    }
}
