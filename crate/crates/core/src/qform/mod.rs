//! Quadratic forms over Q and their local invariants.

pub mod hilbert;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use hilbert::{hilbert_symbol, Place};

use crate::error::{Error, Result};
use crate::kernel::matrix::{ops, Matrix};
use crate::kernel::rat::{fmt_rat, is_padic_square, prime_support, rat, rat_from_big, squarefree_class, Rat};
use crate::kernel::ring::Rationals;

/// Nondegenerate quadratic form given by a symmetric Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticFormQ {
    gram: Matrix<Rat>,
}

impl QuadraticFormQ {
    pub fn new(gram: Matrix<Rat>) -> Result<Self> {
        let o = ops(&Rationals);
        if !gram.is_square() || gram.rows() == 0 {
            return Err(Error::Domain(format!(
                "Gram matrix must be square and nonempty, got {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        if !o.is_symmetric(&gram) {
            return Err(Error::Domain("Gram matrix is not symmetric".into()));
        }
        if o.det(&gram)?.is_zero() {
            return Err(Error::Degenerate("Gram matrix is singular".into()));
        }
        Ok(QuadraticFormQ { gram })
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    pub fn diagonal(entries: &[Rat]) -> Result<Self> {
        Self::new(ops(&Rationals).diag(entries))
    }

    pub fn diagonal_ints(entries: &[i64]) -> Result<Self> {
        Self::diagonal(&entries.iter().map(|&x| rat(x)).collect::<Vec<_>>())
    }

    pub fn gram(&self) -> &Matrix<Rat> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> Rat {
        ops(&Rationals).det(&self.gram).unwrap()
    }

    /// Value `x^T G x`.
    pub fn eval(&self, x: &[Rat]) -> Rat {
        let o = ops(&Rationals);
        let gx = o.mul_vec(&self.gram, x);
        x.iter().zip(&gx).map(|(a, b)| a * b).sum()
    }

    pub fn scaled(&self, c: &Rat) -> Result<Self> {
        Self::new(ops(&Rationals).scale(&self.gram, c))
    }

    pub fn direct_sum(forms: &[QuadraticFormQ]) -> Result<Self> {
        let blocks: Vec<Matrix<Rat>> = forms.iter().map(|f| f.gram.clone()).collect();
        Self::new(ops(&Rationals).block_diag(&blocks))
    }

    /// `P G P^T` for an invertible change of basis `P` (rows are new basis vectors).
    pub fn transform(&self, p: &Matrix<Rat>) -> Result<Self> {
        let o = ops(&Rationals);
        Self::new(o.mul(&o.mul(p, &self.gram), &p.transpose()))
    }
}

/// Diagonal form with nonzero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalFormQ {
    entries: Vec<Rat>,
}

impl DiagonalFormQ {
    pub fn new(entries: Vec<Rat>) -> Result<Self> {
        if entries.iter().any(|e| e.is_zero()) {
            return Err(Error::Degenerate("zero diagonal entry".into()));
        }
        Ok(DiagonalFormQ { entries })
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn to_form(&self) -> QuadraticFormQ {
        QuadraticFormQ::diagonal(&self.entries).unwrap()
    }
}

/// Diagonalization with its change of basis: `basis * G * basis^T = diag(entries)`.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub diagonal: DiagonalFormQ,
    pub basis: Matrix<Rat>,
}

/// Symmetric Gaussian reduction, pivoting on the first nonzero diagonal entry.
pub fn diagonalize_with_basis(form: &QuadraticFormQ) -> Result<Diagonalization> {
    let o = ops(&Rationals);
    let n = form.dim();
    let mut m = form.gram.clone();
    let mut basis = o.identity(n);

    fn swap(m: &mut Matrix<Rat>, b: &mut Matrix<Rat>, i: usize, j: usize) {
        if i == j {
            return;
        }
        let n = m.rows();
        for k in 0..n {
            let t = m.get(i, k).clone();
            m.set(i, k, m.get(j, k).clone());
            m.set(j, k, t);
        }
        for k in 0..n {
            let t = m.get(k, i).clone();
            m.set(k, i, m.get(k, j).clone());
            m.set(k, j, t);
        }
        for k in 0..n {
            let t = b.get(i, k).clone();
            b.set(i, k, b.get(j, k).clone());
            b.set(j, k, t);
        }
    }

    // row_i += c * row_j and col_i += c * col_j
    fn add_multiple(m: &mut Matrix<Rat>, b: &mut Matrix<Rat>, i: usize, j: usize, c: &Rat) {
        let n = m.rows();
        for k in 0..n {
            let v = m.get(i, k) + c * m.get(j, k);
            m.set(i, k, v);
        }
        for k in 0..n {
            let v = m.get(k, i) + c * m.get(k, j);
            m.set(k, i, v);
        }
        for k in 0..n {
            let v = b.get(i, k) + c * b.get(j, k);
            b.set(i, k, v);
        }
    }

    for k in 0..n {
        if let Some(i) = (k..n).find(|&i| !m.get(i, i).is_zero()) {
            swap(&mut m, &mut basis, k, i);
        } else {
            let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !m.get(i, j).is_zero())
            else {
                return Err(Error::Degenerate("Gram matrix is singular".into()));
            };
            // all diagonal entries vanish: e_i + e_j has value 2 b(e_i, e_j) != 0
            add_multiple(&mut m, &mut basis, i, j, &Rat::one());
            swap(&mut m, &mut basis, k, i);
        }
        let piv = m.get(k, k).clone();
        for i in k + 1..n {
            let c = -(m.get(i, k) / &piv);
            if !c.is_zero() {
                add_multiple(&mut m, &mut basis, i, k, &c);
            }
        }
    }
    let entries = (0..n).map(|i| m.get(i, i).clone()).collect();
    Ok(Diagonalization {
        diagonal: DiagonalFormQ::new(entries)?,
        basis,
    })
}

pub fn diagonalize(form: &QuadraticFormQ) -> Result<DiagonalFormQ> {
    Ok(diagonalize_with_basis(form)?.diagonal)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub s_plus: usize,
    pub s_minus: usize,
    /// Squarefree integer representative of the discriminant class.
    pub discriminant: BigInt,
    pub disc_sign: i32,
}

pub fn invariants(form: &QuadraticFormQ) -> Result<Invariants> {
    let d = diagonalize(form)?;
    let s_minus = d.entries.iter().filter(|e| e.is_negative()).count();
    let det: Rat = d.entries.iter().product();
    Ok(Invariants {
        s_plus: form.dim() - s_minus,
        s_minus,
        discriminant: squarefree_class(&det),
        disc_sign: if s_minus % 2 == 0 { 1 } else { -1 },
    })
}

/// Product of pairwise Hilbert symbols of a list of nonzero entries.
pub fn epsilon_diag(entries: &[Rat], place: Place) -> Result<i32> {
    let mut e = 1;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            e *= hilbert_symbol(&entries[i], &entries[j], place)?;
        }
    }
    Ok(e)
}

pub fn epsilon(form: &QuadraticFormQ, place: Place) -> Result<i32> {
    epsilon_diag(diagonalize(form)?.entries(), place)
}

/// Places where the invariants of a diagonal form can be nontrivial.
pub fn relevant_places(entries: &[Rat]) -> Vec<Place> {
    let mut primes: Vec<u64> = vec![2];
    for e in entries {
        primes.extend(prime_support(e));
    }
    primes.sort_unstable();
    primes.dedup();
    std::iter::once(Place::Real)
        .chain(primes.into_iter().map(Place::Prime))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFormulaReport {
    pub table: Vec<(Place, i32)>,
    pub product: i32,
}

pub fn product_formula_check(form: &QuadraticFormQ) -> Result<ProductFormulaReport> {
    let d = diagonalize(form)?;
    let mut table = Vec::new();
    let mut product = 1;
    for pl in relevant_places(d.entries()) {
        let e = epsilon_diag(d.entries(), pl)?;
        product *= e;
        table.push((pl, e));
    }
    Ok(ProductFormulaReport { table, product })
}

/// Local equivalence test at a place: same discriminant square class and
/// same epsilon (plus same signature at the real place).
pub fn compare_local_at(f1: &QuadraticFormQ, f2: &QuadraticFormQ, place: Place) -> Result<bool> {
    if f1.dim() != f2.dim() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            f1.dim(),
            f2.dim()
        )));
    }
    let (d1, d2) = (diagonalize(f1)?, diagonalize(f2)?);
    let det1: Rat = d1.entries.iter().product();
    let det2: Rat = d2.entries.iter().product();
    let ratio = det1 / det2;
    let same_disc = match place {
        Place::Real => ratio.is_positive(),
        Place::Prime(p) => is_padic_square(&ratio, p),
    };
    let same_sig = match place {
        Place::Real => invariants(f1)?.s_minus == invariants(f2)?.s_minus,
        Place::Prime(_) => true,
    };
    Ok(same_disc && same_sig && epsilon_diag(d1.entries(), place)? == epsilon_diag(d2.entries(), place)?)
}

pub fn compare_local(f1: &QuadraticFormQ, f2: &QuadraticFormQ, p: u64) -> Result<bool> {
    compare_local_at(f1, f2, Place::prime(p)?)
}

/// True when two forms agree at every place (dimension, discriminant,
/// signature and all epsilons).
pub fn same_invariants_everywhere(f1: &QuadraticFormQ, f2: &QuadraticFormQ) -> Result<bool> {
    if f1.dim() != f2.dim() {
        return Ok(false);
    }
    let (d1, d2) = (diagonalize(f1)?, diagonalize(f2)?);
    let mut all = d1.entries.clone();
    all.extend(d2.entries.iter().cloned());
    for pl in relevant_places(&all) {
        if !compare_local_at(f1, f2, pl)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod4Report {
    pub disc_sign: i32,
    pub s_minus: usize,
    pub eps_real: i32,
    pub verdict_2_divides: bool,
    pub verdict_4_divides: bool,
}

/// Reads parity of `s_minus` off the discriminant sign and, for positive
/// discriminant, divisibility by 4 off the real epsilon; both readings are
/// checked against the direct count.
pub fn mod4_report(form: &QuadraticFormQ) -> Result<Mod4Report> {
    let inv = invariants(form)?;
    let eps_real = epsilon(form, Place::Real)?;
    let verdict_2_divides = inv.disc_sign == 1;
    let verdict_4_divides = verdict_2_divides && eps_real == 1;
    if verdict_2_divides != (inv.s_minus % 2 == 0) {
        return Err(Error::Consistency(format!(
            "disc sign {} disagrees with s_minus = {}",
            inv.disc_sign, inv.s_minus
        )));
    }
    if verdict_2_divides && verdict_4_divides != (inv.s_minus % 4 == 0) {
        return Err(Error::Consistency(format!(
            "real epsilon {eps_real} disagrees with s_minus = {}",
            inv.s_minus
        )));
    }
    Ok(Mod4Report {
        disc_sign: inv.disc_sign,
        s_minus: inv.s_minus,
        eps_real,
        verdict_2_divides,
        verdict_4_divides,
    })
}

/// Finitely supported Hodge numbers `i -> h_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HodgeNumbers {
    h: BTreeMap<i64, u64>,
}

impl HodgeNumbers {
    pub fn new(h: BTreeMap<i64, u64>) -> Self {
        HodgeNumbers {
            h: h.into_iter().filter(|(_, v)| *v > 0).collect(),
        }
    }

    pub fn from_pairs(pairs: &[(i64, u64)]) -> Self {
        let mut h = BTreeMap::new();
        for &(i, v) in pairs {
            *h.entry(i).or_insert(0) += v;
        }
        Self::new(h)
    }

    /// All weight in degree 0.
    pub fn concentrated(dim: u64) -> Self {
        Self::from_pairs(&[(0, dim)])
    }

    pub fn get(&self, i: i64) -> u64 {
        self.h.get(&i).copied().unwrap_or(0)
    }

    pub fn map(&self) -> &BTreeMap<i64, u64> {
        &self.h
    }

    pub fn dim(&self) -> u64 {
        self.h.values().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.h.iter().all(|(i, v)| self.get(-i) == *v)
    }

    /// `s_M`: sum of `h_i` over odd `i >= 1`.
    pub fn s_m(&self) -> u64 {
        self.h
            .iter()
            .filter(|(i, _)| **i >= 1 && *i % 2 != 0)
            .map(|(_, v)| v)
            .sum()
    }

    /// Expected negative index of the Betti form: sum of `h_i` over odd `i`.
    pub fn s_b_minus(&self) -> u64 {
        self.h.iter().filter(|(i, _)| *i % 2 != 0).map(|(_, v)| v).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub pass: bool,
    /// Informational items are reported but do not enter the verdict.
    pub informational: bool,
    pub detail: String,
}

impl CheckItem {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        CheckItem {
            name: name.into(),
            pass,
            informational: false,
            detail: detail.into(),
        }
    }

    pub fn info(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        CheckItem {
            informational: true,
            ..Self::new(name, pass, detail)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionVerdict {
    pub p: u64,
    pub s_m: u64,
    pub eps_z: i32,
    pub eps_b: i32,
    pub items: Vec<CheckItem>,
    pub pass: bool,
}

/// Compares the p-adic and Betti forms of a pair against the Hodge parity
/// `(-1)^{s_M}`.
pub fn padic_reduction_check(
    q_z: &QuadraticFormQ,
    q_b: &QuadraticFormQ,
    p: u64,
    hodge: &HodgeNumbers,
) -> Result<ReductionVerdict> {
    let place = Place::prime(p)?;
    if q_z.dim() != q_b.dim() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            q_z.dim(),
            q_b.dim()
        )));
    }
    let (iz, ib) = (invariants(q_z)?, invariants(q_b)?);
    let s_m = hodge.s_m();
    let mut items = Vec::new();
    items.push(CheckItem::new(
        "discriminant",
        iz.discriminant == ib.discriminant,
        format!("disc(q_Z) = {}, disc(q_B) = {}", iz.discriminant, ib.discriminant),
    ));
    items.push(CheckItem::new(
        "positive",
        iz.discriminant.is_positive() && ib.discriminant.is_positive(),
        format!("signs {} and {}", iz.disc_sign, ib.disc_sign),
    ));
    let eps_z = epsilon(q_z, place)?;
    let eps_b = epsilon(q_b, place)?;
    let expected = if s_m.is_multiple_of(2) { 1 } else { -1 };
    items.push(CheckItem::new(
        "epsilon",
        eps_z * eps_b == expected,
        format!("eps_{p}(q_Z)/eps_{p}(q_B) = {} vs (-1)^s_M = {expected}", eps_z * eps_b),
    ));
    items.push(CheckItem::info(
        "hodge-dimension",
        hodge.dim() as usize == q_b.dim(),
        format!("sum h_i = {}, dim = {}", hodge.dim(), q_b.dim()),
    ));
    items.push(CheckItem::info(
        "betti-signature",
        hodge.s_b_minus() as usize == ib.s_minus,
        format!("s_minus(q_B) = {}, sum of odd h_i = {}", ib.s_minus, hodge.s_b_minus()),
    ));
    let pass = items.iter().filter(|i| !i.informational).all(|i| i.pass);
    Ok(ReductionVerdict {
        p,
        s_m,
        eps_z,
        eps_b,
        items,
        pass,
    })
}

/// Formats a diagonal as `(a, b, ...)`.
pub fn fmt_entries(entries: &[Rat]) -> String {
    let v: Vec<String> = entries.iter().map(fmt_rat).collect();
    format!("({})", v.join(", "))
}

pub fn discriminant_as_rat(inv: &Invariants) -> Rat {
    rat_from_big(inv.discriminant.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::ratio;

    fn diag(e: &[i64]) -> QuadraticFormQ {
        QuadraticFormQ::diagonal_ints(e).unwrap()
    }

    #[test]
    fn diagonalize_examples() {
        assert_eq!(diagonalize(&diag(&[1, 1, 1])).unwrap().entries(), &[rat(1), rat(1), rat(1)]);
        let h = QuadraticFormQ::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]).unwrap();
        let d = diagonalize_with_basis(&h).unwrap();
        assert_eq!(d.diagonal.entries(), &[rat(2), ratio(-1, 2)]);
        assert!(same_invariants_everywhere(&h, &diag(&[1, -1])).unwrap());
        assert_eq!(h.transform(&d.basis).unwrap(), d.diagonal.to_form());
        let f = QuadraticFormQ::from_rows(vec![vec![rat(2), rat(1)], vec![rat(1), rat(2)]]).unwrap();
        assert_eq!(diagonalize(&f).unwrap().entries(), &[rat(2), ratio(3, 2)]);
        let sing = Matrix::from_rows(vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]]).unwrap();
        assert!(matches!(QuadraticFormQ::new(sing), Err(Error::Degenerate(_))));
    }

    #[test]
    fn invariants_examples() {
        let i = invariants(&diag(&[1, 1, -1, -1])).unwrap();
        assert_eq!((i.s_plus, i.s_minus, i.discriminant.clone(), i.disc_sign), (2, 2, BigInt::from(1), 1));
        let i = invariants(&diag(&[-1, -1, -1, -1])).unwrap();
        assert_eq!((i.s_minus, i.discriminant.clone(), i.disc_sign), (4, BigInt::from(1), 1));
        let i = invariants(&diag(&[2, -10])).unwrap();
        assert_eq!((i.s_plus, i.s_minus, i.discriminant.clone(), i.disc_sign), (1, 1, BigInt::from(-5), -1));
    }

    #[test]
    fn epsilon_examples() {
        assert_eq!(epsilon(&diag(&[1, 1, 1]), Place::Prime(3)).unwrap(), 1);
        assert_eq!(epsilon(&diag(&[-1, -1]), Place::Prime(2)).unwrap(), -1);
        assert_eq!(epsilon(&diag(&[-1, -1]), Place::Real).unwrap(), -1);
        assert_eq!(epsilon(&diag(&[-1, -1, -1, -1]), Place::Real).unwrap(), 1);
    }

    #[test]
    fn product_formula_examples() {
        let r = product_formula_check(&diag(&[-1, -1])).unwrap();
        assert_eq!(r.table, vec![(Place::Real, -1), (Place::Prime(2), -1)]);
        assert_eq!(r.product, 1);
        let r = product_formula_check(&diag(&[2, -10])).unwrap();
        assert_eq!(r.product, 1);
        let e5 = r.table.iter().find(|(p, _)| *p == Place::Prime(5)).unwrap().1;
        assert_eq!(e5, -1);
    }

    #[test]
    fn compare_local_examples() {
        assert!(compare_local(&diag(&[3, 7]), &diag(&[3, 7]), 7).unwrap());
        assert!(!compare_local(&diag(&[1, -5]), &diag(&[2, -10]), 5).unwrap());
        assert!(compare_local(&diag(&[1, -1]), &diag(&[2, -2]), 3).unwrap());
        assert!(compare_local(&diag(&[1]), &diag(&[1, 1]), 3).is_err());
    }

    #[test]
    fn mod4_examples() {
        let r = mod4_report(&diag(&[-1, -1, -1, -1])).unwrap();
        assert_eq!((r.disc_sign, r.s_minus, r.eps_real, r.verdict_2_divides, r.verdict_4_divides), (1, 4, 1, true, true));
        let r = mod4_report(&diag(&[1, 1, -1, -1])).unwrap();
        assert_eq!((r.disc_sign, r.s_minus, r.eps_real, r.verdict_2_divides, r.verdict_4_divides), (1, 2, -1, true, false));
        let r = mod4_report(&diag(&[1, -1])).unwrap();
        assert_eq!((r.disc_sign, r.s_minus, r.verdict_2_divides), (-1, 1, false));
    }

    #[test]
    fn reduction_check_examples() {
        let q = diag(&[1, 2, 3]);
        let v = padic_reduction_check(&q, &q, 3, &HodgeNumbers::concentrated(3)).unwrap();
        assert!(v.pass);
        assert_eq!(v.s_m, 0);

        let q_b = diag(&[1, 5, 5, 5]);
        let q_z = diag(&[2, 10, 5, 5]);
        let h = HodgeNumbers::from_pairs(&[(1, 1), (-1, 1), (0, 2)]);
        let v = padic_reduction_check(&q_z, &q_b, 2, &h).unwrap();
        assert_eq!(v.s_m, 1);
        assert_eq!((v.eps_b, v.eps_z), (1, -1));
        assert!(v.pass);

        let v = padic_reduction_check(&diag(&[1, 2]), &diag(&[1, 3]), 5, &HodgeNumbers::concentrated(2)).unwrap();
        assert!(!v.pass);
        assert!(!v.items.iter().find(|i| i.name == "discriminant").unwrap().pass);
    }
}
