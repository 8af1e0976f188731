//! The Lubin-Tate filtered phi-module `D_pi` of a tower and its verification.

use rand::Rng;

use crate::error::{Error, Result};
use crate::kernel::matrix::{ops, Matrix};
use crate::kernel::polygon::LowerPolygon;
use crate::kernel::rat::{rat, Rat};
use crate::kernel::ring::Ring;
use crate::padic::tower::random_rng;
use crate::padic::{Layer, LayerElem, PadicTower};
use crate::phi::{
    admissibility_certificate, det_valuation, frobenius_matrix, hodge_polygon, newton_polygon_module,
    phi_power_matrix, Admissibility, FilteredPhiModule,
};
use crate::qform::CheckItem;

#[derive(Clone, Debug)]
pub struct LubinTateModule {
    tower: PadicTower,
    module: FilteredPhiModule,
    companion: Matrix<LayerElem>,
    pub filtration_line_tag: String,
}

/// Companion matrix of the Eisenstein polynomial: ones below the diagonal,
/// last column `-a_0, ..., -a_{e-1}`.
pub fn companion(tower: &PadicTower) -> Matrix<LayerElem> {
    let l = tower.layer();
    let e = tower.e();
    let a = tower.eisenstein_coeffs();
    Matrix::from_fn(e, e, |i, j| {
        if j == e - 1 {
            l.neg(&a[i])
        } else if i == j + 1 {
            l.one()
        } else {
            l.zero()
        }
    })
}

pub fn build_d_pi(tower: &PadicTower) -> Result<LubinTateModule> {
    let l = tower.layer().clone();
    let e = tower.e();
    let f = tower.f();
    let n = e * f;
    let c = companion(tower);
    let mut a = ops(&l).zeros(n, n);
    for i in 0..e {
        for j in 0..e {
            a.set(i, e * (f - 1) + j, c.get(i, j).clone());
        }
    }
    for k in 0..e * (f - 1) {
        a.set(e + k, k, l.one());
    }
    let jumps: Vec<(i64, u64)> = if n > 1 { vec![(0, n as u64 - 1), (1, 1)] } else { vec![(1, 1)] };
    let module = FilteredPhiModule::new(l, a, &jumps)?;
    Ok(LubinTateModule {
        tower: tower.clone(),
        module,
        companion: c,
        filtration_line_tag: "W: the F-line on which the left and right F-actions agree (jump data only)".into(),
    })
}

impl LubinTateModule {
    pub fn tower(&self) -> &PadicTower {
        &self.tower
    }

    pub fn module(&self) -> &FilteredPhiModule {
        &self.module
    }

    pub fn companion(&self) -> &Matrix<LayerElem> {
        &self.companion
    }

    pub fn layer(&self) -> &Layer {
        self.module.layer()
    }
}

/// `Diag(M, phi(M), ..., phi^{f-1}(M))`.
pub fn f_action_embed(layer: &Layer, m: &Matrix<LayerElem>) -> Matrix<LayerElem> {
    let blocks: Vec<Matrix<LayerElem>> = (0..layer.f()).map(|k| frobenius_matrix(layer, m, k)).collect();
    ops(layer).block_diag(&blocks)
}

fn commutes_with_frobenius(lt: &LubinTateModule, m: &Matrix<LayerElem>) -> bool {
    let l = lt.layer();
    let o = ops(l);
    let em = f_action_embed(l, m);
    let a = lt.module.frob_matrix();
    o.equal(&o.mul(&em, a), &o.mul(a, &frobenius_matrix(l, &em, 1)))
}

/// A matrix not commuting with the companion matrix (`None` when `e = 1`).
fn non_commutant<R: Rng>(lt: &LubinTateModule, rng: &mut R) -> Option<Matrix<LayerElem>> {
    let l = lt.layer();
    let e = lt.tower.e();
    if e == 1 {
        return None;
    }
    let o = ops(l);
    let c = &lt.companion;
    for _ in 0..50 {
        let m = Matrix::from_fn(e, e, |_, _| l.from_i64(rng.gen_range(-3..=3)));
        if !o.equal(&o.mul(&m, c), &o.mul(c, &m)) {
            return Some(m);
        }
    }
    let mut m = o.identity(e);
    m.set(0, 1, l.one());
    Some(m)
}

/// The commutation laws of the F-action, the identity `pi = phi^f`, and a
/// negative control.
pub fn structure_checks(lt: &LubinTateModule, seed: u64) -> Vec<CheckItem> {
    let l = lt.layer();
    let o = ops(l);
    let c = &lt.companion;
    let c2 = o.mul(c, c);
    let c1 = o.add(c, &o.identity(c.rows()));
    let mut items = Vec::new();
    for (name, m) in [("commutes[C]", c), ("commutes[C^2]", &c2), ("commutes[C+1]", &c1)] {
        let ok = commutes_with_frobenius(lt, m);
        items.push(CheckItem::new(name, ok, "Diag(M, phi M, ...) A = A phi(Diag(M, phi M, ...))"));
    }
    let pf = phi_power_matrix(&lt.module);
    let ok = o.equal(&pf, &f_action_embed(l, c));
    items.push(CheckItem::new("pi-equals-phi^f", ok, "phi^f = Diag(C, phi C, ...)"));
    let mut rng = random_rng(seed);
    match non_commutant(lt, &mut rng) {
        Some(m) => {
            let fails = !commutes_with_frobenius(lt, &m);
            items.push(CheckItem::new(
                "negative-control",
                fails,
                "a matrix outside the commutant of C breaks the commutation law",
            ));
        }
        None => items.push(CheckItem::info(
            "negative-control",
            true,
            "not applicable for e = 1: every 1x1 matrix commutes with C",
        )),
    }
    items
}

pub fn verify_structure(lt: &LubinTateModule, seed: u64) -> Result<Vec<CheckItem>> {
    let items = structure_checks(lt, seed);
    if let Some(bad) = items.iter().find(|i| !i.pass) {
        return Err(Error::Structural(format!("identity {} fails", bad.name)));
    }
    Ok(items)
}

#[derive(Clone, Debug)]
pub struct PolygonReport {
    pub newton: LowerPolygon,
    pub hodge: LowerPolygon,
    pub det_valuation: i64,
    pub certificate: Admissibility,
    pub items: Vec<CheckItem>,
}

impl PolygonReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

pub fn verify_polygons(lt: &LubinTateModule) -> Result<PolygonReport> {
    let e = lt.tower.e() as u64;
    let f = lt.tower.f() as u64;
    let n = e * f;
    let newton = newton_polygon_module(&lt.module)?;
    let hodge = hodge_polygon(&lt.module);
    let dv = det_valuation(&lt.module)?;
    let cert = admissibility_certificate(&lt.module)?;
    let slope = Rat::new(1.into(), (n as i64).into());
    let expect_newton = LowerPolygon::from_segments((0, rat(0)), &[(slope, n)]);
    let mut hsegs = vec![(rat(1), 1)];
    if n > 1 {
        hsegs.insert(0, (rat(0), n - 1));
    }
    let expect_hodge = LowerPolygon::from_segments((0, rat(0)), &hsegs);
    let items = vec![
        CheckItem::new(
            "newton-slope",
            newton == expect_newton,
            format!("Newton {} expected slope 1/{n} x{n}", newton.describe()),
        ),
        CheckItem::new(
            "hodge",
            hodge == expect_hodge,
            format!("Hodge {} expected 0 x{} then 1 x1", hodge.describe(), n - 1),
        ),
        CheckItem::new("det-valuation", dv == f as i64, format!("v(det phi^f) = {dv}, expected {f}")),
        CheckItem::new(
            "lattice-points",
            newton.is_primitive_segment(),
            "Newton polygon meets no interior lattice point",
        ),
        CheckItem::new(
            "certificate",
            cert.verdict == Admissibility::CertifiedAdmissible,
            format!("{}: {}", cert.verdict.name(), cert.reason),
        ),
    ];
    Ok(PolygonReport {
        newton,
        hodge,
        det_valuation: dv,
        certificate: cert.verdict,
        items,
    })
}

/// Dimension of the space of `e x e` layer matrices commuting with `C`.
pub fn commutant_dimension(lt: &LubinTateModule) -> usize {
    let l = lt.layer();
    let o = ops(l);
    let c = &lt.companion;
    let e = c.rows();
    // (MC - CM)_{ij} is linear in the entries m_{kl}, unknown index k*e+l
    let mut sys = o.zeros(e * e, e * e);
    for i in 0..e {
        for j in 0..e {
            let row = i * e + j;
            for k in 0..e {
                // (MC)_{ij} = sum_k m_{ik} c_{kj}
                let u = i * e + k;
                let cur = sys.get(row, u).clone();
                sys.set(row, u, l.add(&cur, c.get(k, j)));
                // (CM)_{ij} = sum_k c_{ik} m_{kj}
                let u = k * e + j;
                let cur = sys.get(row, u).clone();
                sys.set(row, u, l.sub(&cur, c.get(i, k)));
            }
        }
    }
    o.kernel(&sys).len()
}

/// True when `v = e_0 + e_e + ... ` generates the module under the F-action:
/// the vectors `Diag(z^i C^j, ...) v` span the layer space of rank `ef`.
pub fn has_cyclic_vector(lt: &LubinTateModule) -> bool {
    let l = lt.layer();
    let o = ops(l);
    let e = lt.tower.e();
    let f = lt.tower.f();
    let n = e * f;
    let mut v = vec![l.zero(); n];
    for k in 0..f {
        v[k * e] = l.one();
    }
    let c = &lt.companion;
    let z = l.generator();
    let mut cols = Vec::new();
    let mut cj = o.identity(e);
    for _ in 0..e {
        for i in 0..f {
            let m = o.scale(&cj, &l.pow(&z, i as u64));
            cols.push(o.mul_vec(&f_action_embed(l, &m), &v));
        }
        cj = o.mul(&cj, c);
    }
    let m = Matrix::from_fn(n, n, |r, k| cols[k][r].clone());
    o.rank(&m) == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::qpoly_from_ints;
    use crate::padic::tower::random_eisenstein;
    use crate::padic::standard_unram_poly;

    fn qmat(l: &Layer, rows: &[&[i64]]) -> Matrix<LayerElem> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| l.from_i64(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn build_examples() {
        let t = PadicTower::standard(5, 1, 1, 20).unwrap();
        let lt = build_d_pi(&t).unwrap();
        assert_eq!(lt.module().frob_matrix(), &qmat(t.layer(), &[&[5]]));

        let t = PadicTower::standard(5, 1, 2, 20).unwrap();
        let lt = build_d_pi(&t).unwrap();
        assert_eq!(lt.module().frob_matrix(), &qmat(t.layer(), &[&[0, 5], &[1, 0]]));

        let t = PadicTower::standard(3, 2, 1, 20).unwrap();
        let lt = build_d_pi(&t).unwrap();
        assert_eq!(lt.module().frob_matrix(), &qmat(t.layer(), &[&[0, 3], &[1, 0]]));
        let o = ops(t.layer());
        assert_eq!(phi_power_matrix(lt.module()), o.scale(&o.identity(2), &t.layer().from_i64(3)));
    }

    #[test]
    fn companion_shape() {
        let t = PadicTower::new(
            5,
            1,
            qpoly_from_ints(&[-1, 1]),
            &[vec![rat(10)], vec![rat(-5)], vec![rat(15)], vec![rat(1)]],
            20,
        )
        .unwrap();
        let c = companion(&t);
        assert_eq!(c, qmat(t.layer(), &[&[0, 0, -10], &[1, 0, 5], &[0, 1, -15]]));
    }

    #[test]
    fn structure_and_polygons() {
        for (p, f, e) in [(5, 1, 2), (3, 2, 1), (3, 2, 2), (2, 3, 2), (5, 1, 1)] {
            let l = Layer::new(p, standard_unram_poly(p, f).unwrap(), 30).unwrap();
            let mut rng = random_rng(7);
            let t = PadicTower::with_layer(l.clone(), random_eisenstein(&l, e, &mut rng)).unwrap();
            let lt = build_d_pi(&t).unwrap();
            verify_structure(&lt, 1).unwrap();
            let r = verify_polygons(&lt).unwrap();
            assert!(r.pass(), "{p} {f} {e}: {:?}", r.items);
            assert_eq!(commutant_dimension(&lt), e);
            assert!(has_cyclic_vector(&lt));
        }
    }

    #[test]
    fn negative_control_fails_commutation() {
        let t = PadicTower::standard(5, 1, 2, 20).unwrap();
        let lt = build_d_pi(&t).unwrap();
        let m = qmat(t.layer(), &[&[1, 1], &[0, 1]]);
        assert!(!commutes_with_frobenius(&lt, &m));
        let items = structure_checks(&lt, 3);
        assert!(items.iter().all(|i| i.pass));
    }
}
