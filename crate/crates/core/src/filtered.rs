//! Filtered CM spaces as integer weight vectors indexed by embeddings, with
//! the norm-class parity rule and goodness bookkeeping.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredCmSpace {
    star_perm: Vec<usize>,
    weights: Vec<i64>,
}

impl FilteredCmSpace {
    /// `star_perm` must be an involution of `0..d` that moves `0`.
    pub fn new(star_perm: Vec<usize>, weights: Vec<i64>) -> Result<Self> {
        check_star(&star_perm)?;
        if weights.len() != star_perm.len() {
            return Err(Error::rejected(
                "shape",
                format!("{} weights for {} embeddings", weights.len(), star_perm.len()),
            ));
        }
        Ok(FilteredCmSpace { star_perm, weights })
    }

    pub fn zero(star_perm: Vec<usize>) -> Result<Self> {
        let d = star_perm.len();
        Self::new(star_perm, vec![0; d])
    }

    pub fn d(&self) -> usize {
        self.weights.len()
    }

    pub fn star_perm(&self) -> &[usize] {
        &self.star_perm
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn is_symmetric(&self) -> bool {
        validate_symmetric(self)
    }

    /// The same space with weights composed with the involution.
    pub fn star_swap(&self) -> Self {
        let weights = (0..self.d()).map(|i| self.weights[self.star_perm[i]]).collect();
        FilteredCmSpace {
            star_perm: self.star_perm.clone(),
            weights,
        }
    }
}

fn check_star(star: &[usize]) -> Result<()> {
    let d = star.len();
    if d == 0 {
        return Err(Error::rejected("star", "empty index set"));
    }
    if star.iter().any(|&j| j >= d) {
        return Err(Error::rejected("star", "entry out of range"));
    }
    if (0..d).any(|i| star[star[i]] != i) {
        return Err(Error::rejected("star", "permutation does not square to the identity"));
    }
    if star[0] == 0 {
        return Err(Error::rejected("star", "the distinguished index 0 is fixed"));
    }
    Ok(())
}

pub fn validate_symmetric(v: &FilteredCmSpace) -> bool {
    (0..v.d()).all(|i| v.weights[i] == -v.weights[v.star_perm[i]])
}

pub fn tensor(v: &FilteredCmSpace, w: &FilteredCmSpace) -> Result<FilteredCmSpace> {
    if v.star_perm != w.star_perm {
        return Err(Error::Domain("tensor factors have different embedding structure".into()));
    }
    let weights = v.weights.iter().zip(&w.weights).map(|(a, b)| a + b).collect();
    Ok(FilteredCmSpace {
        star_perm: v.star_perm.clone(),
        weights,
    })
}

pub fn fundamental(star_perm: Vec<usize>) -> Result<FilteredCmSpace> {
    check_star(&star_perm)?;
    let mut weights = vec![0; star_perm.len()];
    weights[0] = 1;
    weights[star_perm[0]] = -1;
    FilteredCmSpace::new(star_perm, weights)
}

fn require_symmetric(v: &FilteredCmSpace) -> Result<()> {
    if validate_symmetric(v) {
        Ok(())
    } else {
        Err(Error::Domain(format!("weights {:?} are not antisymmetric under the involution", v.weights)))
    }
}

/// Sum of the nonnegative weights.
pub fn hodge_min(v: &FilteredCmSpace) -> Result<u64> {
    require_symmetric(v)?;
    Ok(v.weights.iter().filter(|&&n| n >= 0).map(|&n| n as u64).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PeriodClass {
    Norm,
    NonNorm,
}

impl PeriodClass {
    pub fn sign(&self) -> i32 {
        match self {
            PeriodClass::Norm => 1,
            PeriodClass::NonNorm => -1,
        }
    }

    pub fn from_sign(s: i32) -> Self {
        if s > 0 {
            PeriodClass::Norm
        } else {
            PeriodClass::NonNorm
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PeriodClass::Norm => "norm",
            PeriodClass::NonNorm => "non-norm",
        }
    }
}

pub fn period_norm_class(v: &FilteredCmSpace) -> Result<PeriodClass> {
    Ok(if hodge_min(v)? % 2 == 1 {
        PeriodClass::NonNorm
    } else {
        PeriodClass::Norm
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: u64) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodnessReport {
    pub hodge_min: u64,
    pub period_class: PeriodClass,
    pub forms_isomorphic: bool,
    pub s_m_parity: Parity,
    pub good: bool,
    pub trace: Vec<String>,
}

pub fn goodness(v: &FilteredCmSpace) -> Result<GoodnessReport> {
    let h = hodge_min(v)?;
    let class = period_norm_class(v)?;
    let iso = class == PeriodClass::Norm;
    let parity = Parity::of(h);
    let good = (iso && parity == Parity::Even) || (!iso && parity == Parity::Odd);
    let trace = vec![
        format!("weights {:?} antisymmetric under {:?}", v.weights, v.star_perm),
        format!("hodge minimum = sum of nonnegative weights = {h}"),
        format!(
            "period class {} (assumed: the fundamental period is a non-norm; classes multiply under tensor)",
            class.name()
        ),
        format!(
            "forms {} since the period is {}",
            if iso { "isomorphic" } else { "not isomorphic" },
            class.name()
        ),
        format!("s_M parity {}", parity.name()),
        format!("good = {good}"),
    ];
    Ok(GoodnessReport {
        hodge_min: h,
        period_class: class,
        forms_isomorphic: iso,
        s_m_parity: parity,
        good,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockParity {
    pub kind: &'static str,
    pub hodge_min: u64,
    pub forms_isomorphic: bool,
    pub good: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregateVerdict {
    pub blocks: Vec<BlockParity>,
    pub total_hodge_min: u64,
    pub total_parity: Parity,
    pub good: bool,
    /// Index of the first block that is not good.
    pub culprit: Option<usize>,
}

/// Combines CM blocks with hyperbolic blocks (isomorphic forms, even
/// minimum); the ratio of epsilons is multiplicative since all blocks pair
/// forms of equal discriminant.
pub fn aggregate_blocks(reports: &[GoodnessReport], hyperbolic_ranks: &[usize]) -> AggregateVerdict {
    let mut blocks: Vec<BlockParity> = reports
        .iter()
        .map(|r| BlockParity {
            kind: "cm",
            hodge_min: r.hodge_min,
            forms_isomorphic: r.forms_isomorphic,
            good: r.good,
        })
        .collect();
    blocks.extend(hyperbolic_ranks.iter().map(|_| BlockParity {
        kind: "hyperbolic",
        // only the parity enters, and it is even
        hodge_min: 0,
        forms_isomorphic: true,
        good: true,
    }));
    let total: u64 = blocks.iter().map(|b| b.hodge_min).sum();
    let culprit = blocks.iter().position(|b| !b.good);
    let iso_all = blocks.iter().filter(|b| !b.forms_isomorphic).count() % 2 == 0;
    let parity = Parity::of(total);
    let good = culprit.is_none() && (iso_all == (parity == Parity::Even));
    AggregateVerdict {
        blocks,
        total_hodge_min: total,
        total_parity: parity,
        good,
        culprit,
    }
}

/// A random involution of `0..d` moving `0` (`d >= 2`).
pub fn random_star<R: Rng>(d: usize, rng: &mut R) -> Vec<usize> {
    assert!(d >= 2);
    let mut idx: Vec<usize> = (1..d).collect();
    idx.shuffle(rng);
    let mut star: Vec<usize> = (0..d).collect();
    let partner = idx.pop().unwrap();
    star[0] = partner;
    star[partner] = 0;
    while idx.len() >= 2 {
        let a = idx.pop().unwrap();
        if rng.gen_bool(0.3) {
            continue;
        }
        let b = idx.pop().unwrap();
        star[a] = b;
        star[b] = a;
    }
    star
}

/// A random symmetric space: free weights on one index of each swapped pair,
/// zeros on fixed indices.
pub fn random_symmetric<R: Rng>(star: &[usize], bound: i64, rng: &mut R) -> FilteredCmSpace {
    let d = star.len();
    let mut w = vec![0i64; d];
    for i in 0..d {
        if star[i] > i {
            w[i] = rng.gen_range(-bound..=bound);
            w[star[i]] = -w[i];
        }
    }
    FilteredCmSpace::new(star.to_vec(), w).expect("valid involution")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_spaces() {
        assert_eq!(fundamental(vec![1, 0]).unwrap().weights(), &[1, -1]);
        let f4 = fundamental(vec![2, 3, 0, 1]).unwrap();
        assert_eq!(f4.weights(), &[1, 0, -1, 0]);
        assert!(f4.is_symmetric());
        assert!(matches!(fundamental(vec![0, 1, 3, 2]), Err(Error::Rejected { .. })));
    }

    #[test]
    fn symmetry_checks() {
        let z = FilteredCmSpace::zero(vec![1, 0, 2]).unwrap();
        assert!(validate_symmetric(&z));
        let bad = FilteredCmSpace::new(vec![1, 0], vec![1, 0]).unwrap();
        assert!(!validate_symmetric(&bad));
        assert!(hodge_min(&bad).is_err());
    }

    #[test]
    fn tensor_rules() {
        let star = vec![2, 3, 0, 1];
        let f = fundamental(star.clone()).unwrap();
        let z = FilteredCmSpace::zero(star.clone()).unwrap();
        assert_eq!(tensor(&f, &z).unwrap(), f);
        assert_eq!(tensor(&f, &f).unwrap().weights(), &[2, 0, -2, 0]);
        assert_eq!(tensor(&f, &f.star_swap()).unwrap(), z);
        assert!(tensor(&f, &FilteredCmSpace::zero(vec![1, 0, 3, 2]).unwrap()).is_err());
    }

    #[test]
    fn minima_and_classes() {
        let star = vec![1, 0];
        let f = fundamental(star.clone()).unwrap();
        let ff = tensor(&f, &f).unwrap();
        let z = FilteredCmSpace::zero(star).unwrap();
        assert_eq!(hodge_min(&z).unwrap(), 0);
        assert_eq!(hodge_min(&f).unwrap(), 1);
        assert_eq!(hodge_min(&ff).unwrap(), 2);
        assert_eq!(period_norm_class(&f).unwrap(), PeriodClass::NonNorm);
        assert_eq!(period_norm_class(&ff).unwrap(), PeriodClass::Norm);
        assert_eq!(period_norm_class(&z).unwrap(), PeriodClass::Norm);
    }

    #[test]
    fn goodness_reports() {
        let f = fundamental(vec![1, 0]).unwrap();
        let r = goodness(&f).unwrap();
        assert_eq!(
            (r.hodge_min, r.period_class, r.forms_isomorphic, r.s_m_parity, r.good),
            (1, PeriodClass::NonNorm, false, Parity::Odd, true)
        );
        let r0 = goodness(&FilteredCmSpace::zero(vec![1, 0]).unwrap()).unwrap();
        assert!(r0.forms_isomorphic && r0.good && r0.s_m_parity == Parity::Even);
    }

    #[test]
    fn aggregation() {
        let g = goodness(&fundamental(vec![1, 0]).unwrap()).unwrap();
        let v = aggregate_blocks(&[g.clone(), g.clone()], &[]);
        assert!(v.good);
        assert_eq!(v.total_parity, Parity::Even);
        assert!(aggregate_blocks(std::slice::from_ref(&g), &[2]).good);
        let e = aggregate_blocks(&[], &[]);
        assert!(e.good && e.total_hodge_min == 0);
        let mut bad = g;
        bad.good = false;
        assert_eq!(aggregate_blocks(&[bad], &[2]).culprit, Some(0));
    }
}
