//! Splitting a global algebra with involution `Q[x]/(g)` at a prime into local
//! factors, their orbits under the involution, and the orthogonal block plan.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::finite_field::{berlekamp, fp_poly_ring, FpPoly};
use crate::kernel::hensel::{hensel_factor, product_congruent, reduce_poly_mod_p};
use crate::kernel::poly::{qpoly, Poly};
use crate::kernel::rat::{is_prime, rat, reduce_mod_pk, val, Rat};
use crate::kernel::ring::Ring;
use crate::padic::{standard_unram_poly, Involution, Layer, PadicTower};

#[derive(Clone, Debug, PartialEq)]
pub struct GlobalCmAlgebra {
    g: Poly<Rat>,
    r: Poly<Rat>,
}

fn is_integral(f: &Poly<Rat>) -> bool {
    f.coeffs().iter().all(|c| c.is_integer())
}

impl GlobalCmAlgebra {
    pub fn new(g: Poly<Rat>, r: Poly<Rat>) -> Result<Self> {
        let q = qpoly();
        if g.degree().unwrap_or(0) < 1 || !q.is_monic(&g) || !is_integral(&g) {
            return Err(Error::rejected("monic-integer", "g must be monic with integer coefficients"));
        }
        if !is_integral(&r) {
            return Err(Error::rejected("integer", "r must have integer coefficients"));
        }
        if !q.is_squarefree(&g) {
            return Err(Error::rejected("squarefree", "g is not squarefree over Q"));
        }
        let r = q.rem_monic(&r, &g);
        if !q.rem_monic(&q.compose(&g, &r), &g).is_zero() {
            return Err(Error::rejected("ring-map", "g(r(x)) is not divisible by g"));
        }
        if q.compose_mod(&r, &r, &g) != q.x() {
            return Err(Error::rejected("order-two", "r(r(x)) is not x mod g"));
        }
        if r == q.x() {
            return Err(Error::rejected("non-trivial", "r is the identity"));
        }
        Ok(GlobalCmAlgebra { g, r })
    }

    pub fn from_ints(g: &[i64], r: &[i64]) -> Result<Self> {
        let q = qpoly();
        Self::new(
            q.from_coeffs(g.iter().map(|&c| rat(c)).collect()),
            q.from_coeffs(r.iter().map(|&c| rat(c)).collect()),
        )
    }

    pub fn g(&self) -> &Poly<Rat> {
        &self.g
    }

    pub fn r(&self) -> &Poly<Rat> {
        &self.r
    }

    pub fn degree(&self) -> usize {
        self.g.degree().unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orbit {
    Pending,
    Fixed,
    Swapped(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactor {
    pub poly: Poly<Rat>,
    pub degree: usize,
    pub e: Option<usize>,
    pub f: Option<usize>,
    /// For a totally ramified factor: `a` with `factor(y + a)` Eisenstein.
    pub shift: Option<Rat>,
    pub orbit: Orbit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactorSet {
    pub p: u64,
    pub precision: u32,
    pub factors: Vec<LocalFactor>,
    pub supplied: bool,
}

/// Coefficients reduced to `[0, p^k)`.
fn reduce_poly(f: &Poly<Rat>, p: u64, k: u32) -> Poly<Rat> {
    qpoly().from_coeffs(f.coeffs().iter().map(|c| reduce_mod_pk(c, p, k as i64)).collect())
}

fn is_zero_mod(f: &Poly<Rat>, p: u64, k: u32) -> bool {
    f.coeffs().iter().all(|c| c.is_zero() || val(c, p).unwrap() >= k as i64)
}

/// `f(h) mod (m, p^k)` for monic `m`.
fn compose_mod_pk(f: &Poly<Rat>, h: &Poly<Rat>, m: &Poly<Rat>, p: u64, k: u32) -> Poly<Rat> {
    let q = qpoly();
    let h = reduce_poly(&q.rem_monic(h, m), p, k);
    let mut acc = q.zero();
    for c in f.coeffs().iter().rev() {
        acc = q.add(&q.mul_mod(&acc, &h, m), &q.constant(c.clone()));
        acc = reduce_poly(&acc, p, k);
    }
    acc
}

fn lift_fp(f: &FpPoly) -> Poly<Rat> {
    qpoly().from_coeffs(f.coeffs().iter().map(|&c| rat(c as i64)).collect())
}

fn is_eisenstein(f: &Poly<Rat>, p: u64) -> bool {
    let c = f.coeffs();
    let n = c.len() - 1;
    c[n].is_one()
        && c[..n].iter().all(|a| a.is_zero() || val(a, p).unwrap() >= 1)
        && val(&c[0], p) == Some(1)
}

/// `(e, f, shift)` of a factor when determinable: squarefree irreducible
/// reduction means unramified; a linear reduction power `(x - a)^n` with
/// `factor(y + a)` Eisenstein means totally ramified.
fn ramification(factor: &Poly<Rat>, p: u64) -> (Option<usize>, Option<usize>, Option<Rat>) {
    let q = qpoly();
    let n = factor.degree().unwrap();
    let fb = match reduce_poly_mod_p(factor, p) {
        Ok(x) => x,
        Err(_) => return (None, None, None),
    };
    let r = fp_poly_ring(p);
    if r.is_squarefree(&fb) {
        if let Ok(fs) = berlekamp(&fb, p) {
            if fs.len() == 1 {
                return (Some(1), Some(n), None);
            }
        }
        return (None, None, None);
    }
    // look for a root a with fb = (x - a)^n
    for a in 0..p {
        let lin = r.from_coeffs(vec![(p - a) % p, 1]);
        let pw = r.pow(&lin, n as u64);
        if pw == fb {
            let shift = rat(a as i64);
            let shifted = q.compose(factor, &q.from_coeffs(vec![shift.clone(), rat(1)]));
            if is_eisenstein(&shifted, p) {
                return (Some(n), Some(1), Some(shift));
            }
            break;
        }
    }
    (None, None, None)
}

/// Local factorization of `g` over `Q_p` to precision `p^precision`.
/// Refuses when `g mod p` is not squarefree unless `supplied` factors are
/// given; supplied factors are verified before acceptance.
pub fn local_factors(
    alg: &GlobalCmAlgebra,
    p: u64,
    precision: u32,
    supplied: Option<&[Poly<Rat>]>,
) -> Result<LocalFactorSet> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if precision == 0 {
        return Err(Error::Domain("precision must be positive".into()));
    }
    let q = qpoly();
    let r = fp_poly_ring(p);
    if let Some(fs) = supplied {
        return verify_supplied(alg, p, precision, fs);
    }
    let gb = reduce_poly_mod_p(&alg.g, p)?;
    if !r.is_squarefree(&gb) {
        let w = r.gcd(&gb, &r.derivative(&gb));
        return Err(Error::Refusal(format!(
            "g mod {p} is not squarefree: gcd(g, g') = {} mod {p}",
            lift_fp(&w).display("x")
        )));
    }
    let seeds = berlekamp(&gb, p)?;
    let lifted = hensel_factor(&alg.g, &seeds, p, precision)?;
    let factors = lifted
        .into_iter()
        .map(|f| {
            let n = f.degree().unwrap();
            LocalFactor {
                poly: if q.is_monic(&f) { f } else { q.monic(&f) },
                degree: n,
                e: Some(1),
                f: Some(n),
                shift: None,
                orbit: Orbit::Pending,
            }
        })
        .collect();
    Ok(LocalFactorSet {
        p,
        precision,
        factors,
        supplied: false,
    })
}

fn verify_supplied(alg: &GlobalCmAlgebra, p: u64, precision: u32, fs: &[Poly<Rat>]) -> Result<LocalFactorSet> {
    let q = qpoly();
    let r = fp_poly_ring(p);
    if fs.is_empty() {
        return Err(Error::rejected("supplied-factors", "no factors supplied"));
    }
    for (i, f) in fs.iter().enumerate() {
        if f.degree().unwrap_or(0) < 1 || !q.is_monic(f) || !is_integral(f) {
            return Err(Error::rejected(
                "supplied-factors",
                format!("factor {i} must be monic of positive degree with integer coefficients"),
            ));
        }
    }
    if !product_congruent(&alg.g, fs, p, precision)? {
        return Err(Error::rejected(
            "product-congruence",
            format!("product of supplied factors differs from g mod {p}^{precision}"),
        ));
    }
    // Res(g_i, g_j) is a unit iff the reductions are coprime
    let red: Vec<FpPoly> = fs.iter().map(|f| reduce_poly_mod_p(f, p)).collect::<Result<_>>()?;
    for i in 0..red.len() {
        for j in i + 1..red.len() {
            if r.gcd(&red[i], &red[j]).degree() != Some(0) {
                return Err(Error::rejected(
                    "resultant-unit",
                    format!("factors {i} and {j} have a resultant divisible by {p}"),
                ));
            }
        }
    }
    let factors = fs
        .iter()
        .map(|f| {
            let (e, ff, shift) = ramification(f, p);
            LocalFactor {
                poly: f.clone(),
                degree: f.degree().unwrap(),
                e,
                f: ff,
                shift,
                orbit: Orbit::Pending,
            }
        })
        .collect();
    Ok(LocalFactorSet {
        p,
        precision,
        factors,
        supplied: true,
    })
}

/// Fills in the orbit of each factor: `i -> j` when `g_j(r(x)) = 0` mod
/// `(g_i, p^N)`. Fixed factors must carry a nontrivial induced involution.
pub fn involution_orbits(set: &LocalFactorSet, alg: &GlobalCmAlgebra) -> Result<LocalFactorSet> {
    let q = qpoly();
    let (p, n) = (set.p, set.precision);
    let k = set.factors.len();
    let mut image = vec![0usize; k];
    for i in 0..k {
        let gi = &set.factors[i].poly;
        let hits: Vec<usize> = (0..k)
            .filter(|&j| {
                set.factors[j].degree == set.factors[i].degree
                    && is_zero_mod(&compose_mod_pk(&set.factors[j].poly, &alg.r, gi, p, n), p, n)
            })
            .collect();
        if hits.len() != 1 {
            return Err(Error::Precision(format!(
                "factor {i} maps to {} candidate factors at precision {p}^{n}",
                hits.len()
            )));
        }
        image[i] = hits[0];
    }
    let mut out = set.clone();
    for i in 0..k {
        let j = image[i];
        if image[j] != i {
            return Err(Error::Structural(format!("orbit map is not an involution at factor {i}")));
        }
        if j == i {
            let gi = &set.factors[i].poly;
            let diff = q.sub(&alg.r, &q.x());
            let dr = reduce_poly(&q.rem_monic(&diff, gi), p, n);
            if is_zero_mod(&dr, p, n) {
                return Err(Error::Structural(format!(
                    "fixed factor {i} carries the trivial involution"
                )));
            }
            out.factors[i].orbit = Orbit::Fixed;
        } else {
            out.factors[i].orbit = Orbit::Swapped(j);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    /// A swapped pair of factors of degree `degree` each.
    Hyperbolic { pair: (usize, usize), degree: usize, rank: usize },
    /// A fixed factor.
    Cm { factor: usize, degree: usize, e: Option<usize>, f: Option<usize> },
}

impl Block {
    pub fn rank(&self) -> usize {
        match self {
            Block::Hyperbolic { rank, .. } => *rank,
            Block::Cm { degree, .. } => *degree,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Block::Hyperbolic { .. } => "hyperbolic",
            Block::Cm { .. } => "cm",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockPlan {
    pub blocks: Vec<Block>,
    /// Number of local factors.
    pub n: usize,
    /// Number of swapped pairs.
    pub s: usize,
}

/// Swapped pairs first (ascending by smaller index), then fixed factors.
pub fn orthogonal_blocks(set: &LocalFactorSet) -> Result<BlockPlan> {
    let mut blocks = Vec::new();
    for (i, f) in set.factors.iter().enumerate() {
        match f.orbit {
            Orbit::Swapped(j) if i < j => blocks.push(Block::Hyperbolic {
                pair: (i, j),
                degree: f.degree,
                rank: 2 * f.degree,
            }),
            Orbit::Pending => return Err(Error::Domain("orbits have not been computed".into())),
            _ => {}
        }
    }
    let s = blocks.len();
    for (i, f) in set.factors.iter().enumerate() {
        if f.orbit == Orbit::Fixed {
            blocks.push(Block::Cm {
                factor: i,
                degree: f.degree,
                e: f.e,
                f: f.f,
            });
        }
    }
    Ok(BlockPlan {
        blocks,
        n: set.factors.len(),
        s,
    })
}

/// How a fixed factor was turned into a tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerModel {
    /// The factor divides `g` over Q and presents the local field itself.
    Factor,
    /// The standard unramified layer, with the Frobenius power of order two.
    Standard,
}

/// A tower with involution for fixed factor `i`, when one can be built:
/// exact unramified factors, exact factors whose shift is Eisenstein, or
/// (unramified, even degree) the standard layer.
pub fn fixed_block_tower(
    alg: &GlobalCmAlgebra,
    set: &LocalFactorSet,
    i: usize,
    precision: u32,
) -> Result<Option<(PadicTower, Involution, TowerModel)>> {
    let q = qpoly();
    let fac = &set.factors[i];
    let p = set.p;
    if fac.orbit != Orbit::Fixed {
        return Err(Error::Domain(format!("factor {i} is not fixed")));
    }
    let exact = q.rem_monic(&alg.g, &fac.poly).is_zero();
    match (fac.e, fac.f) {
        (Some(1), Some(f)) if exact => {
            let eis = vec![vec![rat(-(p as i64))], vec![rat(1)]];
            let t = PadicTower::new(p, f, fac.poly.clone(), &eis, precision)?;
            let rc = q.rem_monic(&alg.r, &fac.poly);
            let mut c = rc.coeffs().to_vec();
            c.resize(f, rat(0));
            let z_img = t.from_layer(&t.layer().exact(c));
            let inv = Involution::new(&t, z_img, t.uniformizer())?;
            Ok(Some((t, inv, TowerModel::Factor)))
        }
        (Some(e), Some(1)) if exact && fac.shift.is_some() => {
            let a = fac.shift.clone().unwrap();
            let shifted = q.compose(&fac.poly, &q.from_coeffs(vec![a.clone(), rat(1)]));
            let eis: Vec<Vec<Rat>> = shifted.coeffs().iter().map(|c| vec![c.clone()]).collect();
            let t = PadicTower::new(p, 1, standard_unram_poly(p, 1)?, &eis, precision)?;
            debug_assert_eq!(t.e(), e);
            // x = pi + a; x -> r(x) gives pi -> r(pi + a) - a
            let x = t.add(&t.uniformizer(), &t.from_rat(a.clone()));
            let mut img = t.zero();
            for c in alg.r.coeffs().iter().rev() {
                img = t.add(&t.mul(&img, &x), &t.from_rat(c.clone()));
            }
            let pi_img = t.sub(&img, &t.from_rat(a));
            let inv = Involution::new(&t, t.zeta(), pi_img)?;
            Ok(Some((t, inv, TowerModel::Factor)))
        }
        (Some(1), Some(f)) if f % 2 == 0 => {
            let layer = Layer::new(p, standard_unram_poly(p, f)?, precision)?;
            if !layer.frobenius_is_exact() {
                return Ok(None);
            }
            let eis = vec![layer.from_i64(-(p as i64)), layer.one()];
            let t = PadicTower::with_layer(layer, eis)?;
            let z = t.layer().frobenius_pow(&t.layer().generator(), f / 2);
            let inv = Involution::new(&t, t.from_layer(&z), t.uniformizer())?;
            Ok(Some((t, inv, TowerModel::Standard)))
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::qpoly_from_ints;
    use crate::kernel::rat::mult_order;

    fn x2p1() -> GlobalCmAlgebra {
        GlobalCmAlgebra::from_ints(&[1, 0, 1], &[0, -1]).unwrap()
    }

    fn phi5() -> GlobalCmAlgebra {
        GlobalCmAlgebra::from_ints(&[1, 1, 1, 1, 1], &[0, 0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn algebra_validation() {
        assert!(GlobalCmAlgebra::from_ints(&[1, 0, 1], &[0, 1]).is_err());
        assert!(GlobalCmAlgebra::from_ints(&[1, 2, 1], &[0, -1]).is_err());
        assert!(GlobalCmAlgebra::from_ints(&[1, 0, 1], &[1, 1]).is_err());
        // x^3 mod x^2 + 1 is -x
        let a = GlobalCmAlgebra::from_ints(&[1, 0, 1], &[0, 0, 0, 1]).unwrap();
        assert_eq!(a.r(), &qpoly_from_ints(&[0, -1]));
    }

    #[test]
    fn split_at_five() {
        let a = x2p1();
        let s = local_factors(&a, 5, 10, None).unwrap();
        assert_eq!(s.factors.len(), 2);
        let o = involution_orbits(&s, &a).unwrap();
        assert_eq!(o.factors[0].orbit, Orbit::Swapped(1));
        let plan = orthogonal_blocks(&o).unwrap();
        assert_eq!(plan.blocks.len(), 1);
        assert_eq!(plan.blocks[0].rank(), 2);
        assert_eq!((plan.n, plan.s), (2, 1));
    }

    #[test]
    fn inert_at_three() {
        let a = x2p1();
        let s = local_factors(&a, 3, 10, None).unwrap();
        assert_eq!(s.factors.len(), 1);
        assert_eq!(s.factors[0].f, Some(2));
        let o = involution_orbits(&s, &a).unwrap();
        assert_eq!(o.factors[0].orbit, Orbit::Fixed);
        let (t, inv, model) = fixed_block_tower(&a, &o, 0, 20).unwrap().unwrap();
        assert_eq!(model, TowerModel::Factor);
        assert_eq!(t.f(), 2);
        assert!(!inv.fixed().ramified);
    }

    #[test]
    fn ramified_at_two() {
        let a = x2p1();
        let err = local_factors(&a, 2, 10, None).unwrap_err();
        assert!(matches!(err, Error::Refusal(ref m) if m.contains("gcd")));
        let s = local_factors(&a, 2, 10, Some(&[qpoly_from_ints(&[1, 0, 1])])).unwrap();
        assert_eq!((s.factors[0].e, s.factors[0].f), (Some(2), Some(1)));
        let o = involution_orbits(&s, &a).unwrap();
        assert_eq!(o.factors[0].orbit, Orbit::Fixed);
        let (t, inv, _) = fixed_block_tower(&a, &o, 0, 20).unwrap().unwrap();
        assert_eq!(t.e(), 2);
        assert!(inv.fixed().ramified);
        assert!(local_factors(&a, 2, 10, Some(&[qpoly_from_ints(&[1, 1]), qpoly_from_ints(&[1, 1])])).is_err());
        assert!(local_factors(&a, 2, 10, Some(&[qpoly_from_ints(&[3, 0, 1])])).is_err());
    }

    #[test]
    fn phi5_at_two() {
        let a = phi5();
        let s = local_factors(&a, 2, 20, None).unwrap();
        assert_eq!(s.factors.len(), 1);
        let o = involution_orbits(&s, &a).unwrap();
        let plan = orthogonal_blocks(&o).unwrap();
        assert_eq!(plan.blocks, vec![Block::Cm { factor: 0, degree: 4, e: Some(1), f: Some(4) }]);
        let (t, inv, _) = fixed_block_tower(&a, &o, 0, 20).unwrap().unwrap();
        assert_eq!(t.d(), 4);
        assert_eq!(inv.fixed().dim(), 2);
    }

    #[test]
    fn mixed_at_thirteen() {
        let q = qpoly();
        let g = q.mul(&qpoly_from_ints(&[1, 1, 1, 1, 1]), &qpoly_from_ints(&[1, 0, 1]));
        // involution: x -> x^4 on the Phi_5 part and -x on the x^2+1 part,
        // glued by CRT; found by interpolation below
        let a = crt_involution(&g);
        let s = local_factors(&a, 13, 12, None).unwrap();
        // 13 has order 4 mod 5: Phi_5 stays irreducible; x^2+1 splits
        assert_eq!(s.factors.iter().map(|f| f.degree).collect::<Vec<_>>().iter().sum::<usize>(), 6);
        assert_eq!(s.factors.len(), 3);
        let o = involution_orbits(&s, &a).unwrap();
        let plan = orthogonal_blocks(&o).unwrap();
        assert_eq!(plan.blocks.len(), plan.n - plan.s);
        assert_eq!(plan.blocks[0].kind(), "hyperbolic");
        assert_eq!(plan.blocks[1].kind(), "cm");
        assert_eq!(mult_order(13, 5), 4);
    }

    fn crt_involution(g: &Poly<Rat>) -> GlobalCmAlgebra {
        let q = qpoly();
        let a = qpoly_from_ints(&[1, 1, 1, 1, 1]);
        let b = qpoly_from_ints(&[1, 0, 1]);
        let (_, u, v) = q.xgcd(&a, &b);
        // u a + v b = 1; r = x^4 * v b + (-x) * u a mod g
        let r1 = q.mul(&qpoly_from_ints(&[0, 0, 0, 0, 1]), &q.mul(&v, &b));
        let r2 = q.mul(&qpoly_from_ints(&[0, -1]), &q.mul(&u, &a));
        let r = q.rem_monic(&q.add(&r1, &r2), g);
        // the CRT lift has denominators; clear them by an integral representative
        let den = r.coeffs().iter().fold(num_bigint::BigInt::one(), |acc, c| {
            num_integer::Integer::lcm(&acc, c.denom())
        });
        assert!(den.is_one(), "CRT lift is not integral: {}", r.display("x"));
        GlobalCmAlgebra::new(g.clone(), r).unwrap()
    }
}
