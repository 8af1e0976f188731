//! Filtered phi-modules over an unramified layer: the linearized `phi^f`,
//! Newton and Hodge polygons, and a weak-admissibility certificate.

use crate::error::{Error, Result};
use crate::filtered::FilteredCmSpace;
use crate::kernel::matrix::{ops, Matrix};
use crate::kernel::polygon::LowerPolygon;
use crate::kernel::rat::{rat, Rat};
use crate::kernel::ring::Ring;
use crate::padic::{Layer, LayerElem};

/// Digits of slack required above a coefficient known only to precision.
pub const VALUATION_MARGIN: i64 = 2;

#[derive(Clone, Debug)]
pub struct FilteredPhiModule {
    layer: Layer,
    frob: Matrix<LayerElem>,
    /// `(weight, multiplicity)`, sorted by weight.
    jumps: Vec<(i64, u64)>,
    /// Set when the module comes from a symmetric filtered CM space.
    cm_tag: bool,
}

impl FilteredPhiModule {
    pub fn new(layer: Layer, frob: Matrix<LayerElem>, jumps: &[(i64, u64)]) -> Result<Self> {
        let r = frob.rows();
        if !frob.is_square() || r == 0 {
            return Err(Error::rejected("shape", "Frobenius matrix must be square and nonempty"));
        }
        if ops(&layer).det(&frob).map(|d| layer.is_zero(&d)).unwrap_or(true) {
            return Err(Error::rejected("invertible", "Frobenius matrix is singular"));
        }
        let mut js: Vec<(i64, u64)> = Vec::new();
        for &(w, m) in jumps {
            if m == 0 {
                return Err(Error::rejected("jumps", "jump multiplicities must be positive"));
            }
            match js.iter_mut().find(|(x, _)| *x == w) {
                Some(e) => e.1 += m,
                None => js.push((w, m)),
            }
        }
        js.sort();
        let total: u64 = js.iter().map(|j| j.1).sum();
        if total != r as u64 {
            return Err(Error::rejected(
                "jumps",
                format!("jump multiplicities sum to {total}, rank is {r}"),
            ));
        }
        Ok(FilteredPhiModule {
            layer,
            frob,
            jumps: js,
            cm_tag: false,
        })
    }

    /// Rational matrix, embedded in the layer.
    pub fn from_rational(layer: Layer, a: &Matrix<Rat>, jumps: &[(i64, u64)]) -> Result<Self> {
        let frob = a.map(|x| layer.from_rat(x.clone()));
        Self::new(layer, frob, jumps)
    }

    /// The module of a filtered CM space: phi-invariant basis, one jump per
    /// embedding.
    pub fn from_filtered_cm(layer: Layer, space: &FilteredCmSpace) -> Result<Self> {
        if !space.is_symmetric() {
            return Err(Error::Domain("filtered CM space is not symmetric".into()));
        }
        let d = space.d();
        let frob = ops(&layer).identity(d);
        let jumps: Vec<(i64, u64)> = space.weights().iter().map(|&w| (w, 1)).collect();
        let mut m = Self::new(layer, frob, &jumps)?;
        m.cm_tag = true;
        Ok(m)
    }

    pub fn layer(&self) -> &Layer {
        &self.layer
    }

    pub fn rank(&self) -> usize {
        self.frob.rows()
    }

    pub fn frob_matrix(&self) -> &Matrix<LayerElem> {
        &self.frob
    }

    pub fn hodge_jumps(&self) -> &[(i64, u64)] {
        &self.jumps
    }

    pub fn cm_tag(&self) -> bool {
        self.cm_tag
    }

    /// The same module on the basis `B`: `A' = B^{-1} A phi(B)`.
    pub fn base_change(&self, b: &Matrix<LayerElem>) -> Result<Self> {
        let o = ops(&self.layer);
        let binv = o.inverse(b)?;
        let a = o.mul(&o.mul(&binv, &self.frob), &frobenius_matrix(&self.layer, b, 1));
        let mut m = self.clone();
        m.frob = a;
        Ok(m)
    }
}

/// `phi^k` applied entrywise.
pub fn frobenius_matrix(layer: &Layer, m: &Matrix<LayerElem>, k: usize) -> Matrix<LayerElem> {
    m.map(|x| layer.frobenius_pow(x, k))
}

/// `A phi(A) ... phi^{f-1}(A)`.
pub fn phi_power_matrix(d: &FilteredPhiModule) -> Matrix<LayerElem> {
    let l = &d.layer;
    let o = ops(l);
    let mut acc = d.frob.clone();
    for k in 1..l.f() {
        acc = o.mul(&acc, &frobenius_matrix(l, &d.frob, k));
    }
    acc
}

fn certified_newton(layer: &Layer, coeffs: &[LayerElem]) -> Result<LowerPolygon> {
    let mut pts = Vec::new();
    let mut unknown = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        match (layer.valuation(c), c.prec) {
            (Some(v), None) => pts.push((i as i64, rat(v))),
            (Some(v), Some(n)) if v <= n - VALUATION_MARGIN => pts.push((i as i64, rat(v))),
            (None, None) => {}
            (_, Some(n)) => unknown.push((i as i64, n - VALUATION_MARGIN)),
        }
    }
    let r = coeffs.len() as i64 - 1;
    if pts.last().map(|p| p.0) != Some(r) {
        return Err(Error::Precision("leading coefficient not certified".into()));
    }
    if pts.first().map(|p| p.0) != Some(0) {
        return Err(Error::Precision("constant coefficient not certified".into()));
    }
    let poly = LowerPolygon::lower_hull(&pts)?;
    // an uncertified coefficient is harmless when its lower bound already
    // lies on or above the hull
    for (i, bound) in unknown {
        if poly.eval(i).unwrap() > rat(bound) {
            return Err(Error::Precision(format!(
                "coefficient {i} is known only to valuation >= {bound}, below the hull"
            )));
        }
    }
    Ok(poly)
}

/// Newton polygon of the module: root valuations of the characteristic
/// polynomial of `phi^f`, divided by `f`, as slopes starting at the origin.
pub fn newton_polygon_module(d: &FilteredPhiModule) -> Result<LowerPolygon> {
    let l = &d.layer;
    let m = phi_power_matrix(d);
    let cp = ops(l).char_poly(&m)?;
    let poly = certified_newton(l, cp.coeffs())?;
    let f = rat(l.f() as i64);
    let mut segs: Vec<(Rat, u64)> = poly
        .root_valuations()
        .into_iter()
        .map(|(v, n)| (v / f.clone(), n))
        .collect();
    segs.sort();
    Ok(LowerPolygon::from_segments((0, rat(0)), &segs))
}

pub fn hodge_polygon(d: &FilteredPhiModule) -> LowerPolygon {
    let segs: Vec<(Rat, u64)> = d.jumps.iter().map(|&(w, m)| (rat(w), m)).collect();
    LowerPolygon::from_segments((0, rat(0)), &segs)
}

/// `v(det phi^f)`, with `v(p) = 1`.
pub fn det_valuation(d: &FilteredPhiModule) -> Result<i64> {
    let l = &d.layer;
    let det = ops(l).det(&phi_power_matrix(d))?;
    match (l.valuation(&det), det.prec) {
        (Some(v), None) => Ok(v),
        (Some(v), Some(n)) if v <= n - VALUATION_MARGIN => Ok(v),
        _ => Err(Error::Precision("determinant valuation not certified".into())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Admissibility {
    CertifiedAdmissible,
    CertifiedInadmissible,
    Unknown,
}

impl Admissibility {
    pub fn name(&self) -> &'static str {
        match self {
            Admissibility::CertifiedAdmissible => "certified_admissible",
            Admissibility::CertifiedInadmissible => "certified_inadmissible",
            Admissibility::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub verdict: Admissibility,
    pub reason: String,
    pub newton: LowerPolygon,
    pub hodge: LowerPolygon,
    pub t_n: Rat,
    pub t_h: Rat,
}

pub fn admissibility_certificate(d: &FilteredPhiModule) -> Result<Certificate> {
    let newton = newton_polygon_module(d)?;
    let hodge = hodge_polygon(d);
    let t_n = newton.end().1.clone();
    let t_h = hodge.end().1.clone();
    let (verdict, reason) = if t_n != t_h {
        (
            Admissibility::CertifiedInadmissible,
            format!("t_N = {} differs from t_H = {}", t_n, t_h),
        )
    } else if !newton.lies_on_or_above(&hodge) {
        (
            Admissibility::CertifiedInadmissible,
            "Newton polygon dips below the Hodge polygon".to_string(),
        )
    } else if newton.is_primitive_segment() {
        (
            Admissibility::CertifiedAdmissible,
            "Newton polygon is one segment through no interior lattice point, so no proper subobject has integral Newton endpoint".to_string(),
        )
    } else if d.cm_tag && newton.slope_list().iter().all(|s| *s == rat(0)) {
        (
            Admissibility::CertifiedAdmissible,
            "module comes from a symmetric filtered CM space and its Newton polygon is flat".to_string(),
        )
    } else {
        (
            Admissibility::Unknown,
            "Newton polygon is reducible; subobjects were not enumerated".to_string(),
        )
    };
    Ok(Certificate {
        verdict,
        reason,
        newton,
        hodge,
        t_n,
        t_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::qpoly_from_ints;
    use crate::padic::standard_unram_poly;

    fn qmat(rows: &[&[i64]]) -> Matrix<Rat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn phi_power() {
        let l1 = Layer::trivial(5, 20).unwrap();
        let m = FilteredPhiModule::from_rational(l1.clone(), &qmat(&[&[5]]), &[(1, 1)]).unwrap();
        assert_eq!(phi_power_matrix(&m), *m.frob_matrix());

        let l2 = Layer::new(3, standard_unram_poly(3, 2).unwrap(), 20).unwrap();
        let m = FilteredPhiModule::from_rational(l2.clone(), &qmat(&[&[0, 3], &[1, 0]]), &[(0, 1), (1, 1)]).unwrap();
        let o = ops(&l2);
        assert_eq!(phi_power_matrix(&m), o.scale(&o.identity(2), &l2.from_i64(3)));

        let z = l2.generator();
        let a = Matrix::from_rows(vec![vec![z.clone(), l2.one()], vec![l2.one(), l2.zero()]]).unwrap();
        let m = FilteredPhiModule::new(l2.clone(), a.clone(), &[(0, 2)]).unwrap();
        assert!(!o.equal(&phi_power_matrix(&m), &o.mul(&a, &a)));
    }

    #[test]
    fn polygons() {
        let l = Layer::trivial(5, 20).unwrap();
        let m = FilteredPhiModule::from_rational(l.clone(), &qmat(&[&[5]]), &[(1, 1)]).unwrap();
        assert_eq!(newton_polygon_module(&m).unwrap().slope_list(), vec![rat(1)]);
        let m = FilteredPhiModule::from_rational(l.clone(), &qmat(&[&[0, 5], &[1, 0]]), &[(0, 1), (1, 1)]).unwrap();
        let np = newton_polygon_module(&m).unwrap();
        assert_eq!(np.slope_list(), vec![Rat::new(1.into(), 2.into()); 2]);
        let m = FilteredPhiModule::from_rational(l.clone(), &qmat(&[&[1, 0], &[0, 5]]), &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(newton_polygon_module(&m).unwrap().slope_list(), vec![rat(0), rat(1)]);
        let h = FilteredPhiModule::from_rational(l, &qmat(&[&[1, 0], &[0, 1]]), &[(1, 1), (-1, 1)]).unwrap();
        let hp = hodge_polygon(&h);
        assert_eq!(hp.slope_list(), vec![rat(-1), rat(1)]);
        assert_eq!(hp.end().1, rat(0));
    }

    #[test]
    fn certificates() {
        let l = Layer::trivial(5, 20).unwrap();
        let m = FilteredPhiModule::from_rational(l.clone(), &qmat(&[&[0, 5], &[1, 0]]), &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(admissibility_certificate(&m).unwrap().verdict, Admissibility::CertifiedAdmissible);
        let m = FilteredPhiModule::from_rational(l.clone(), &qmat(&[&[1]]), &[(1, 1)]).unwrap();
        assert_eq!(admissibility_certificate(&m).unwrap().verdict, Admissibility::CertifiedInadmissible);
        let m = FilteredPhiModule::from_rational(l.clone(), &qmat(&[&[1, 0], &[0, 5]]), &[(0, 1), (1, 1)]).unwrap();
        assert_eq!(admissibility_certificate(&m).unwrap().verdict, Admissibility::Unknown);
        let v = crate::filtered::fundamental(vec![1, 0]).unwrap();
        let m = FilteredPhiModule::from_filtered_cm(l, &v).unwrap();
        assert_eq!(admissibility_certificate(&m).unwrap().verdict, Admissibility::CertifiedAdmissible);
    }

    #[test]
    fn inexact_layer_valuations() {
        let l = Layer::new(7, qpoly_from_ints(&[-2, 0, 0, 1]), 20).unwrap();
        let z = l.generator();
        let a = Matrix::from_rows(vec![vec![l.zero(), l.from_i64(7)], vec![z, l.zero()]]).unwrap();
        let m = FilteredPhiModule::new(l, a, &[(0, 1), (1, 1)]).unwrap();
        let np = newton_polygon_module(&m).unwrap();
        assert_eq!(np.end().1, rat(1));
        assert_eq!(det_valuation(&m).unwrap(), 3);
    }

    #[test]
    fn rejections() {
        let l = Layer::trivial(5, 20).unwrap();
        assert!(FilteredPhiModule::from_rational(l.clone(), &qmat(&[&[0]]), &[(0, 1)]).is_err());
        assert!(FilteredPhiModule::from_rational(l, &qmat(&[&[1]]), &[(0, 2)]).is_err());
    }
}
