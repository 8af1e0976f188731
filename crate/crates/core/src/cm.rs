//! CM quadratic spaces: one-dimensional F-spaces with `q(x) = Tr_{F_0}(a x x^*)`.

use crate::error::{Error, Result};
use crate::kernel::matrix::{ops, Matrix};
use crate::kernel::rat::{ratio, Rat};
use crate::kernel::ring::{Field, Rationals, Ring};
use crate::padic::norms::is_norm;
use crate::padic::{Involution, PadicTower, TowerElem};
use crate::qform::{epsilon, invariants, Invariants, Place, QuadraticFormQ};

#[derive(Clone, Debug)]
pub struct CmSpace {
    tower: PadicTower,
    star: Involution,
    gauge: TowerElem,
}

impl CmSpace {
    pub fn new(tower: PadicTower, star: Involution, gauge: TowerElem) -> Result<Self> {
        if gauge.c.len() != tower.d() {
            return Err(Error::rejected("gauge", "gauge has the wrong number of coordinates"));
        }
        if tower.is_zero(&gauge) {
            return Err(Error::rejected("gauge", "gauge is zero"));
        }
        if !star.is_fixed(&gauge) {
            return Err(Error::rejected("gauge", "gauge is not fixed by the involution"));
        }
        Ok(CmSpace { tower, star, gauge })
    }

    pub fn tower(&self) -> &PadicTower {
        &self.tower
    }

    pub fn star(&self) -> &Involution {
        &self.star
    }

    pub fn gauge(&self) -> &TowerElem {
        &self.gauge
    }

    pub fn with_gauge(&self, gauge: TowerElem) -> Result<Self> {
        CmSpace::new(self.tower.clone(), self.star.clone(), gauge)
    }

    /// `q(x) = Tr_{F_0/Q}(a x^* x)`.
    pub fn q(&self, x: &TowerElem) -> Rat {
        let t = &self.tower;
        t.trace_base(&t.mul(&self.gauge, &self.star.norm(t, x))) * ratio(1, 2)
    }
}

fn standard_basis(tower: &PadicTower) -> Vec<TowerElem> {
    (0..tower.d()).map(|k| tower.basis(k)).collect()
}

fn basis_matrix(tower: &PadicTower, basis: &[TowerElem]) -> Result<Matrix<Rat>> {
    let d = tower.d();
    if basis.len() != d || basis.iter().any(|b| b.c.len() != d) {
        return Err(Error::Domain(format!("basis must have {d} vectors of length {d}")));
    }
    let m = Matrix::from_fn(d, d, |r, k| basis[k].c[r].clone());
    if ops(&Rationals).rank(&m) != d {
        return Err(Error::Domain("basis vectors do not span".into()));
    }
    Ok(m)
}

/// Gram matrix `(1/2) Tr_{F/Q}(a e_i^* e_j)` on `basis` (the standard
/// `zeta^i pi^j` basis when `None`).
pub fn trace_form_gram(space: &CmSpace, basis: Option<&[TowerElem]>) -> Result<QuadraticFormQ> {
    let t = &space.tower;
    let owned;
    let basis = match basis {
        Some(b) => b,
        None => {
            owned = standard_basis(t);
            &owned
        }
    };
    basis_matrix(t, basis)?;
    let half = ratio(1, 2);
    let stars: Vec<TowerElem> = basis.iter().map(|b| space.star.apply(b)).collect();
    let n = basis.len();
    let gram = Matrix::from_fn(n, n, |i, j| {
        let x = t.mul(&space.gauge, &t.mul(&stars[i], &basis[j]));
        t.trace_base(&x) * half.clone()
    });
    QuadraticFormQ::new(gram).map_err(|e| match e {
        Error::Degenerate(d) => Error::rejected("nondegenerate", d),
        other => other,
    })
}

/// Matrices of multiplication by `zeta` and `pi` and by their conjugates, on
/// `basis` (columns are images).
pub fn action_matrices(
    tower: &PadicTower,
    star: &Involution,
    basis: Option<&[TowerElem]>,
) -> Result<Vec<(Matrix<Rat>, Matrix<Rat>)>> {
    let owned;
    let basis = match basis {
        Some(b) => b,
        None => {
            owned = standard_basis(tower);
            &owned
        }
    };
    let o = ops(&Rationals);
    let p = basis_matrix(tower, basis)?;
    let pinv = o.inverse(&p).expect("spanning basis");
    let on_basis = |x: &TowerElem| o.mul(&o.mul(&pinv, &tower.mult_matrix(x)), &p);
    let mut gens = vec![tower.uniformizer()];
    if tower.f() > 1 {
        gens.insert(0, tower.zeta());
    }
    Ok(gens
        .iter()
        .map(|g| (on_basis(g), on_basis(&star.apply(g))))
        .collect())
}

/// True iff `b(alpha x, y) = b(x, alpha^* y)` for every pair `(alpha, alpha^*)`
/// of action matrices, i.e. `A^T G = G A^*`.
pub fn adjoint_check(gram: &QuadraticFormQ, actions: &[(Matrix<Rat>, Matrix<Rat>)]) -> bool {
    let o = ops(&Rationals);
    let g = gram.gram();
    actions.iter().all(|(a, a_star)| {
        a.rows() == g.rows()
            && a_star.rows() == g.rows()
            && o.equal(&o.mul(&a.transpose(), g), &o.mul(g, a_star))
    })
}

/// The gauge `a` of a CM form: the fixed element with `b(1, y) = Tr_{F_0/Q}(a y)`
/// for every `y` in `F_0`. Only its class modulo norms is basis independent.
pub fn gauge_recover(
    tower: &PadicTower,
    star: &Involution,
    gram: &QuadraticFormQ,
    basis: Option<&[TowerElem]>,
) -> Result<TowerElem> {
    let owned;
    let basis = match basis {
        Some(b) => b,
        None => {
            owned = standard_basis(tower);
            &owned
        }
    };
    let o = ops(&Rationals);
    let pm = basis_matrix(tower, basis)?;
    if gram.dim() != tower.d() {
        return Err(Error::Domain("Gram matrix and tower dimensions differ".into()));
    }
    let pinv = o.inverse(&pm).expect("spanning basis");
    let coords = |x: &TowerElem| o.mul_vec(&pinv, &x.c);
    let g = gram.gram();
    let bil = |u: &[Rat], v: &[Rat]| -> Rat {
        let gv = o.mul_vec(g, v);
        u.iter().zip(&gv).fold(Rat::from_integer(0.into()), |acc, (a, b)| acc + a * b)
    };
    let one = coords(&tower.one());
    let fb = &star.fixed().basis;
    let k = fb.len();
    let half = ratio(1, 2);
    // rows m: sum_k a_k Tr_{F_0}(f_k f_m) = b(1, f_m)
    let mut lhs = Matrix::from_fn(k, k, |_, _| Rat::from_integer(0.into()));
    let mut rhs = Vec::with_capacity(k);
    for m in 0..k {
        for kk in 0..k {
            lhs.set(m, kk, tower.trace_base(&tower.mul(&fb[kk], &fb[m])) * half.clone());
        }
        rhs.push(bil(&one, &coords(&fb[m])));
    }
    let sol = o
        .solve(&lhs, &rhs)
        .map_err(|_| Error::Consistency("trace pairing on the fixed field is singular".into()))?;
    let mut a = tower.zero();
    for (c, f) in sol.iter().zip(fb) {
        a = tower.add(&a, &tower.mul(&tower.from_rat(c.clone()), f));
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmClass {
    Trivial,
    Nontrivial,
}

impl CmClass {
    pub fn name(&self) -> &'static str {
        match self {
            CmClass::Trivial => "trivial",
            CmClass::Nontrivial => "nontrivial",
        }
    }
}

pub fn cm_classify(space: &CmSpace) -> Result<CmClass> {
    Ok(if is_norm(&space.tower, &space.star, &space.gauge)? {
        CmClass::Trivial
    } else {
        CmClass::Nontrivial
    })
}

#[derive(Clone, Debug)]
pub struct CmCompareReport {
    pub isomorphic: bool,
    pub disc_equal: bool,
    pub invariants_1: Invariants,
    pub invariants_2: Invariants,
    pub eps_1: i32,
    pub eps_2: i32,
}

fn same_star(a: &Involution, b: &Involution) -> bool {
    a.zeta_image() == b.zeta_image() && a.pi_image() == b.pi_image()
}

/// Compares two CM spaces over the same `(F, *)` by the gauge-ratio norm test
/// and, independently, by discriminant and `epsilon_p` of their trace forms.
pub fn cm_compare(s1: &CmSpace, s2: &CmSpace) -> Result<CmCompareReport> {
    if s1.tower != s2.tower || !same_star(&s1.star, &s2.star) {
        return Err(Error::Domain("spaces live over different (F, *)".into()));
    }
    let t = &s1.tower;
    let ratio_ = t.div(&s1.gauge, &s2.gauge).expect("nonzero gauge");
    let isomorphic = is_norm(t, &s1.star, &ratio_)?;
    let g1 = trace_form_gram(s1, None)?;
    let g2 = trace_form_gram(s2, None)?;
    let i1 = invariants(&g1)?;
    let i2 = invariants(&g2)?;
    let disc_equal = i1.discriminant == i2.discriminant;
    let place = Place::Prime(t.p());
    let eps_1 = epsilon(&g1, place)?;
    let eps_2 = epsilon(&g2, place)?;
    if !disc_equal {
        return Err(Error::Consistency(format!(
            "CM trace forms with different discriminants {} and {}",
            i1.discriminant, i2.discriminant
        )));
    }
    if isomorphic != (eps_1 == eps_2) {
        return Err(Error::Consistency(format!(
            "gauge test says isomorphic = {isomorphic} but epsilon_p gives {eps_1} vs {eps_2}"
        )));
    }
    Ok(CmCompareReport {
        isomorphic,
        disc_equal,
        invariants_1: i1,
        invariants_2: i2,
        eps_1,
        eps_2,
    })
}

/// A random nonzero element of the fixed field, `x + x^*` or `x x^*`.
pub fn random_fixed<R: rand::Rng>(tower: &PadicTower, star: &Involution, rng: &mut R) -> TowerElem {
    loop {
        let x = tower.random_nonzero(rng, 4, 2);
        let y = if rng.gen_bool(0.5) {
            star.trace(tower, &x)
        } else {
            tower.mul(&star.trace(tower, &x), &star.norm(tower, &x))
        };
        if !tower.is_zero(&y) {
            return y;
        }
    }
}
