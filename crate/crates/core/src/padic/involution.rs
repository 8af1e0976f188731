//! Order-two automorphisms of a tower, their fixed fields, and relative
//! traces and norms.

use rand::Rng as _;

use super::tower::{random_rng, PadicTower, TowerElem};
use crate::error::{Error, Result};
use crate::kernel::matrix::{ops, Matrix};
use crate::kernel::poly::{qpoly, Poly};
use crate::kernel::rat::{rat, Rat};
use crate::kernel::ring::{Rationals, Ring};

#[derive(Clone, Debug)]
pub struct Involution {
    zeta_image: TowerElem,
    pi_image: TowerElem,
    /// Matrix of the involution on the Q-basis (column k = sigma(b_k)).
    matrix: Matrix<Rat>,
    fixed: FixedField,
}

/// Presentation of the fixed field `F_0`.
#[derive(Clone, Debug)]
pub struct FixedField {
    /// Q-basis of `F_0`, each vector with a 1 in its own free coordinate.
    pub basis: Vec<TowerElem>,
    free_cols: Vec<usize>,
    pub primitive: TowerElem,
    /// Characteristic polynomial of the primitive element acting on `F_0`.
    pub min_poly: Poly<Rat>,
    /// True when `F/F_0` is ramified.
    pub ramified: bool,
    pub e0: usize,
    pub f0: usize,
}

impl FixedField {
    /// Coordinates of a fixed element on `basis`.
    pub fn coords(&self, x: &TowerElem) -> Vec<Rat> {
        self.free_cols.iter().map(|&k| x.c[k].clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

impl Involution {
    /// Validates the images of `zeta` and `pi` as an order-two automorphism.
    pub fn new(tower: &PadicTower, zeta_image: TowerElem, pi_image: TowerElem) -> Result<Self> {
        let d = tower.d();
        if zeta_image.c.len() != d || pi_image.c.len() != d {
            return Err(Error::rejected("shape", format!("images must have {d} coordinates")));
        }
        let layer = tower.layer();
        let g = layer.poly();
        // g(sigma zeta) = 0
        let mut acc = tower.zero();
        for c in g.coeffs().iter().rev() {
            acc = tower.add(&tower.mul(&acc, &zeta_image), &tower.from_rat(c.clone()));
        }
        if !tower.is_zero(&acc) {
            return Err(Error::rejected(
                "ring-map",
                "image of zeta is not a root of the unramified polynomial",
            ));
        }
        // E^sigma(sigma pi) = 0
        let mut acc = tower.zero();
        for a in tower.eisenstein_poly().iter().rev() {
            let a_sigma = tower.map_layer(a, &zeta_image);
            acc = tower.add(&tower.mul(&acc, &pi_image), &a_sigma);
        }
        if !tower.is_zero(&acc) {
            return Err(Error::rejected(
                "ring-map",
                "image of pi is not a root of the conjugated Eisenstein polynomial",
            ));
        }
        let f = tower.f();
        let mut cols = Vec::with_capacity(d);
        for j in 0..tower.e() {
            let pij = tower.pow(&pi_image, j as u64);
            for i in 0..f {
                cols.push(tower.mul(&tower.pow(&zeta_image, i as u64), &pij));
            }
        }
        let matrix = Matrix::from_fn(d, d, |r, k| cols[k].c[r].clone());
        let o = ops(&Rationals);
        let apply = |x: &TowerElem| TowerElem { c: o.mul_vec(&matrix, &x.c) };
        if apply(&zeta_image) != tower.zeta() || apply(&pi_image) != tower.uniformizer() {
            return Err(Error::rejected("order-two", "the map does not square to the identity"));
        }
        if o.equal(&matrix, &o.identity(d)) {
            return Err(Error::rejected("non-trivial", "the map is the identity"));
        }
        let kernel = o.kernel(&o.sub(&matrix, &o.identity(d)));
        if kernel.len() * 2 != d {
            return Err(Error::rejected(
                "fixed-dimension",
                format!("fixed space has dimension {}, expected {}", kernel.len(), d / 2),
            ));
        }
        let free_cols = free_columns(&kernel);
        let basis: Vec<TowerElem> = kernel.into_iter().map(|c| TowerElem { c }).collect();

        let ramified = {
            let diff = tower.sub(&zeta_image, &tower.zeta());
            tower.vpi(&diff).map(|v| v > 0).unwrap_or(true)
        };
        let (e0, f0) = if ramified {
            (tower.e() / 2, f)
        } else {
            (tower.e(), f / 2)
        };
        let mut inv = Involution {
            zeta_image,
            pi_image,
            matrix,
            fixed: FixedField {
                basis,
                free_cols,
                primitive: tower.zero(),
                min_poly: qpoly().zero(),
                ramified,
                e0,
                f0,
            },
        };
        let (prim, mp) = inv.find_primitive(tower)?;
        inv.fixed.primitive = prim;
        inv.fixed.min_poly = mp;
        Ok(inv)
    }

    /// `zeta -> zeta^{-1}`-style involutions are given by images; this helper
    /// builds the common case of an involution fixing zeta and negating pi.
    pub fn negate_pi(tower: &PadicTower) -> Result<Self> {
        Self::new(tower, tower.zeta(), tower.neg(&tower.uniformizer()))
    }

    pub fn zeta_image(&self) -> &TowerElem {
        &self.zeta_image
    }

    pub fn pi_image(&self) -> &TowerElem {
        &self.pi_image
    }

    pub fn matrix(&self) -> &Matrix<Rat> {
        &self.matrix
    }

    pub fn fixed(&self) -> &FixedField {
        &self.fixed
    }

    pub fn apply(&self, x: &TowerElem) -> TowerElem {
        TowerElem {
            c: ops(&Rationals).mul_vec(&self.matrix, &x.c),
        }
    }

    pub fn is_fixed(&self, x: &TowerElem) -> bool {
        self.apply(x) == *x
    }

    /// `x * x^*`, the norm to the fixed field.
    pub fn norm(&self, tower: &PadicTower, x: &TowerElem) -> TowerElem {
        tower.mul(x, &self.apply(x))
    }

    /// `x + x^*`, the trace to the fixed field.
    pub fn trace(&self, tower: &PadicTower, x: &TowerElem) -> TowerElem {
        tower.add(x, &self.apply(x))
    }

    /// Valuation normalized so that a uniformizer of `F_0` has valuation 1.
    pub fn v_f0(&self, tower: &PadicTower, x: &TowerElem) -> Option<i64> {
        let n = tower.vpi(x)?;
        let ratio = (tower.e() / self.fixed.e0) as i64;
        Some(n / ratio)
    }

    fn restricted_char_poly(&self, tower: &PadicTower, theta: &TowerElem) -> Poly<Rat> {
        let k = self.fixed.dim();
        let cols: Vec<Vec<Rat>> = self
            .fixed
            .basis
            .iter()
            .map(|b| self.fixed.coords(&tower.mul(theta, b)))
            .collect();
        let m = Matrix::from_fn(k, k, |i, j| cols[j][i].clone());
        ops(&Rationals).char_poly(&m).unwrap()
    }

    fn find_primitive(&self, tower: &PadicTower) -> Result<(TowerElem, Poly<Rat>)> {
        let q = qpoly();
        let k = self.fixed.dim();
        let ok = |cp: &Poly<Rat>| cp.degree() == Some(k) && q.is_squarefree(cp);
        let pi = tower.uniformizer();
        let z = tower.zeta();
        for c in 0..=(tower.d() as i64 + 2) {
            let m = tower.add(&pi, &tower.mul(&tower.from_i64(c), &z));
            let theta = self.trace(tower, &m);
            let cp = self.restricted_char_poly(tower, &theta);
            if ok(&cp) {
                return Ok((theta, cp));
            }
        }
        let theta = self.norm(tower, &pi);
        let cp = self.restricted_char_poly(tower, &theta);
        if ok(&cp) {
            return Ok((theta, cp));
        }
        let mut rng = random_rng(0);
        for _ in 0..200 {
            let mut theta = tower.zero();
            for b in &self.fixed.basis {
                theta = tower.add(&theta, &tower.mul(&tower.from_i64(rng.gen_range(-3..=3)), b));
            }
            let cp = self.restricted_char_poly(tower, &theta);
            if ok(&cp) {
                return Ok((theta, cp));
            }
        }
        Err(Error::Consistency("no primitive element found for the fixed field".into()))
    }
}

// kernel() puts a 1 in each vector's free column and zeros in the other
// vectors' free columns
fn free_columns(kernel: &[Vec<Rat>]) -> Vec<usize> {
    kernel
        .iter()
        .enumerate()
        .map(|(k, v)| {
            (0..v.len())
                .find(|&c| v[c] == rat(1) && kernel.iter().enumerate().all(|(j, w)| j == k || w[c] == rat(0)))
                .expect("echelon kernel basis")
        })
        .collect()
}

/// Which subfield a relative trace or norm lands in.
#[derive(Clone, Copy, Debug)]
pub enum Subfield<'a> {
    Base,
    Layer,
    Fixed(&'a Involution),
}

/// Relative trace and norm of `x` to a subfield, embedded in the tower.
pub fn trace_norm(tower: &PadicTower, x: &TowerElem, sub: Subfield<'_>) -> Result<(TowerElem, TowerElem)> {
    Ok(match sub {
        Subfield::Base => (tower.from_rat(tower.trace_base(x)), tower.from_rat(tower.norm_base(x))),
        Subfield::Layer => (tower.from_layer(&tower.trace_layer(x)), tower.from_layer(&tower.norm_layer(x))),
        Subfield::Fixed(inv) => {
            if inv.matrix.rows() != tower.d() {
                return Err(Error::Domain("involution belongs to another tower".into()));
            }
            (inv.trace(tower, x), inv.norm(tower, x))
        }
    })
}
