//! Norm groups of quadratic extensions `F/F_0`, the norm-residue symbol and
//! the tame non-norm witness.

use super::involution::Involution;
use super::tower::{PadicTower, TowerElem};
use crate::error::{Error, Result};
use crate::kernel::finite_field::FpPoly;
use crate::kernel::ring::{Field, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtKind {
    Unramified,
    TameRamified,
    WildRamified,
}

impl ExtKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExtKind::Unramified => "unramified",
            ExtKind::TameRamified => "tame-ramified",
            ExtKind::WildRamified => "wild-ramified",
        }
    }
}

pub fn ext_kind(tower: &PadicTower, inv: &Involution) -> ExtKind {
    if !inv.fixed().ramified {
        ExtKind::Unramified
    } else if tower.p() == 2 {
        ExtKind::WildRamified
    } else {
        ExtKind::TameRamified
    }
}

/// A nonzero anti-fixed `w` (so `F = F_0(w)`) and `delta = w^2` in `F_0`.
pub fn anti_fixed_generator(tower: &PadicTower, inv: &Involution) -> (TowerElem, TowerElem) {
    for k in 0..tower.d() {
        let m = tower.basis(k);
        let w = tower.sub(&m, &inv.apply(&m));
        if !tower.is_zero(&w) {
            let delta = tower.mul(&w, &w);
            return (w, delta);
        }
    }
    unreachable!("a nontrivial involution moves some basis vector")
}

fn check_fixed_nonzero(tower: &PadicTower, inv: &Involution, x: &TowerElem) -> Result<()> {
    if tower.is_zero(x) {
        return Err(Error::Domain("norm test of zero".into()));
    }
    if !inv.is_fixed(x) {
        return Err(Error::Domain("element is not in the fixed field".into()));
    }
    Ok(())
}

/// Decides whether `x` in `F_0^x` is a norm from `F`.
pub fn is_norm(tower: &PadicTower, inv: &Involution, x: &TowerElem) -> Result<bool> {
    check_fixed_nonzero(tower, inv, x)?;
    let alpha = inv.v_f0(tower, x).unwrap();
    match ext_kind(tower, inv) {
        ExtKind::Unramified => Ok(alpha % 2 == 0),
        ExtKind::TameRamified => {
            let (_, delta) = anti_fixed_generator(tower, inv);
            let beta = inv.v_f0(tower, &delta).unwrap();
            // (-1)^{alpha beta} x^beta delta^{-alpha} is a unit of F_0
            let xb = pow_signed(tower, x, beta)?;
            let da = pow_signed(tower, &delta, -alpha)?;
            let mut z = tower.mul(&xb, &da);
            if (alpha * beta) % 2 != 0 {
                z = tower.neg(&z);
            }
            let r = tower.unit_residue(&z)?;
            if tower.vpi(&z) != Some(0) {
                return Err(Error::Consistency("tame symbol argument is not a unit".into()));
            }
            Ok(tower.layer().residue_field().is_square(&r))
        }
        ExtKind::WildRamified => wild_norm_search(tower, inv, x),
    }
}

fn pow_signed(tower: &PadicTower, x: &TowerElem, k: i64) -> Result<TowerElem> {
    if k >= 0 {
        Ok(tower.pow(x, k as u64))
    } else {
        let xi = tower
            .inv(x)
            .ok_or_else(|| Error::Domain("inverse of zero".into()))?;
        Ok(tower.pow(&xi, (-k) as u64))
    }
}

/// Residue-characteristic 2, ramified `F/F_0`: `x` is a norm iff some
/// `y = pi^k u` has `x / N(y) = 1 mod pi_0^K` with `K = 2 e_0 + 3`, since
/// `1 + 4 pi_0 O_0` consists of squares. `u` runs over unit digit
/// expansions, pruned by `N(u + pi^j t) = N(u) mod pi_0^{ceil(j/2)}`.
fn wild_norm_search(tower: &PadicTower, inv: &Involution, x: &TowerElem) -> Result<bool> {
    let e0 = inv.fixed().e0 as i64;
    let target = 2 * e0 + 3;
    let k = inv.v_f0(tower, x).unwrap();
    let pi = tower.uniformizer();
    let n_pi_k = pow_signed(tower, &inv.norm(tower, &pi), k)?;
    let xu = tower.mul(x, &tower.inv(&n_pi_k).unwrap());
    debug_assert_eq!(inv.v_f0(tower, &xu), Some(0));
    // u only matters modulo pi^{2 target}
    let depth = 2 * target;
    Ok(norm_dfs(tower, inv, &xu, &tower.zero(), 0, depth, target))
}

fn norm_dfs(
    tower: &PadicTower,
    inv: &Involution,
    xu: &TowerElem,
    u: &TowerElem,
    j: i64,
    depth: i64,
    target: i64,
) -> bool {
    if j > 0 {
        let diff = tower.sub(xu, &inv.norm(tower, u));
        let v = inv.v_f0(tower, &diff).unwrap_or(i64::MAX);
        if v >= target {
            return true;
        }
        let need = ((j + 1) / 2).min(target);
        if v < need || j >= depth {
            return false;
        }
    }
    let pij = tower.pi_pow(j);
    for i in 0..tower.residue_order() {
        if j == 0 && i == 0 {
            continue;
        }
        let next = tower.add(u, &tower.mul(&tower.digit(i), &pij));
        if norm_dfs(tower, inv, xu, &next, j + 1, depth, target) {
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reciprocity {
    Identity,
    Star,
}

impl Reciprocity {
    pub fn sign(&self) -> i32 {
        match self {
            Reciprocity::Identity => 1,
            Reciprocity::Star => -1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Reciprocity::Identity => "identity",
            Reciprocity::Star => "star",
        }
    }
}

/// Image of `x` under the reciprocity map of `F/F_0`.
pub fn reciprocity_symbol(tower: &PadicTower, inv: &Involution, x: &TowerElem) -> Result<Reciprocity> {
    Ok(if is_norm(tower, inv, x)? {
        Reciprocity::Identity
    } else {
        Reciprocity::Star
    })
}

/// A uniformizer of `F_0`.
pub fn fixed_uniformizer(tower: &PadicTower, inv: &Involution) -> Result<TowerElem> {
    let pi = tower.uniformizer();
    if inv.fixed().ramified {
        return Ok(inv.norm(tower, &pi));
    }
    if inv.is_fixed(&pi) {
        return Ok(pi);
    }
    let z = tower.zeta();
    for i in 0..tower.f() as u64 {
        let m = tower.mul(&tower.pow(&z, i), &pi);
        let t = inv.trace(tower, &m);
        if inv.v_f0(tower, &t) == Some(1) {
            return Ok(t);
        }
    }
    Err(Error::Consistency("no uniformizer of the fixed field found".into()))
}

/// Fixed units with pairwise distinct residues covering the residue field of
/// `F_0` (for odd p, via `(r + r^*)/2`).
pub fn fixed_residue_reps(tower: &PadicTower, inv: &Involution) -> Vec<(FpPoly, TowerElem)> {
    let mut out: Vec<(FpPoly, TowerElem)> = Vec::new();
    let half = tower.from_rat(crate::kernel::rat::ratio(1, 2));
    for i in 1..tower.residue_order() {
        let r = tower.digit(i);
        let c = if tower.p() == 2 {
            inv.norm(tower, &r)
        } else {
            tower.mul(&inv.trace(tower, &r), &half)
        };
        if tower.vpi(&c) != Some(0) {
            continue;
        }
        let res = tower.unit_residue(&c).unwrap();
        if !out.iter().any(|(s, _)| *s == res) {
            out.push((res, c));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct DworkReport {
    pub u: TowerElem,
    pub u_residue: FpPoly,
    /// Sign `s` with `phi^f(sqrt u) = s * sqrt u`.
    pub frobenius_sign: i32,
    /// `c * c^*` in `F[c]/(c^2 - u)` with `c^* = c`.
    pub c_cstar: TowerElem,
    pub c_cstar_is_u: bool,
    pub u_is_norm: bool,
    pub pass: bool,
}

/// For a tamely ramified `F/F_0` with `pi^* = -pi`: picks a unit `u` of `F_0`
/// with non-square residue, checks that Frobenius negates `sqrt u` (Euler's
/// criterion on the residue), that `c c^* = u`, and that `u` is not a norm.
pub fn dwork_tame_witness(tower: &PadicTower, inv: &Involution) -> Result<DworkReport> {
    if tower.p() == 2 {
        return Err(Error::Unsupported("the wild case p = 2 has no tame witness".into()));
    }
    let pi = tower.uniformizer();
    if inv.apply(&pi) != tower.neg(&pi) {
        return Err(Error::Refusal("precondition pi^* = -pi fails".into()));
    }
    if ext_kind(tower, inv) != ExtKind::TameRamified {
        return Err(Error::Refusal("extension is not tamely ramified".into()));
    }
    let k = tower.layer().residue_field();
    let p = tower.p() as i64;
    let mut cands: Vec<TowerElem> = (2..p).map(|a| tower.from_i64(a)).collect();
    cands.extend(fixed_residue_reps(tower, inv).into_iter().map(|(_, c)| c));
    let u = cands
        .into_iter()
        .find(|c| inv.is_fixed(c) && tower.vpi(c) == Some(0) && !k.is_square(&tower.unit_residue(c).unwrap()))
        .ok_or_else(|| Error::Consistency("no non-square unit in the fixed field".into()))?;
    let u_residue = tower.unit_residue(&u)?;
    // phi^f(c) = c^q = c * u^{(q-1)/2} mod p
    let e = ((k.order() - 1) / 2) as u64;
    let euler = k.pow(&u_residue, e);
    let frobenius_sign = if k.is_one(&euler) {
        1
    } else if k.equal(&euler, &k.from_i64(-1)) {
        -1
    } else {
        return Err(Error::Consistency("Euler criterion gave neither 1 nor -1".into()));
    };
    // F[c]/(c^2 - u): c^* = c, so c c^* = c^2 = u
    let c_cstar = u.clone();
    let c_cstar_is_u = c_cstar == u;
    let u_is_norm = is_norm(tower, inv, &u)?;
    let pass = frobenius_sign == -1 && c_cstar_is_u && !u_is_norm;
    Ok(DworkReport {
        u,
        u_residue,
        frobenius_sign,
        c_cstar,
        c_cstar_is_u,
        u_is_norm,
        pass,
    })
}
