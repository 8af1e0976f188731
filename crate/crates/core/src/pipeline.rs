//! End-to-end run: local decomposition, per-block CM comparison, parity
//! aggregation and the p-adic reduction check on the assembled forms.

use num_traits::Zero;
use serde_json::Value;

use crate::cm::{cm_compare, trace_form_gram, CmCompareReport, CmSpace};
use crate::decomposition::{
    fixed_block_tower, involution_orbits, local_factors, orthogonal_blocks, Block, BlockPlan, GlobalCmAlgebra,
    LocalFactorSet, TowerModel,
};
use crate::error::{Error, Result};
use crate::filtered::{aggregate_blocks, AggregateVerdict, GoodnessReport, Parity, PeriodClass};
use crate::json::{as_array, as_u64, get, parse_hodge, parse_poly, parse_rat_list, parse_rat_value};
use crate::kernel::matrix::Matrix;
use crate::kernel::poly::Poly;
use crate::kernel::rat::{rat, Rat};
use crate::padic::{default_precision, PadicTower, TowerElem};
use crate::qform::{
    diagonalize, padic_reduction_check, CheckItem, DiagonalFormQ, HodgeNumbers, QuadraticFormQ, ReductionVerdict,
};

/// A gauge given before its tower is known.
#[derive(Clone, Debug, PartialEq)]
pub enum GaugeInput {
    Rational(Rat),
    /// Flat coordinates on `zeta^i pi^j`.
    Coords(Vec<Rat>),
}

impl GaugeInput {
    pub fn resolve(&self, tower: &PadicTower) -> Result<TowerElem> {
        match self {
            GaugeInput::Rational(r) => Ok(tower.from_rat(r.clone())),
            GaugeInput::Coords(c) => {
                if c.len() > tower.d() {
                    return Err(Error::Domain(format!("gauge has {} > {} coordinates", c.len(), tower.d())));
                }
                Ok(tower.elem(c.clone()))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineRequest {
    pub algebra: GlobalCmAlgebra,
    pub p: u64,
    pub precision: u32,
    /// `(a_B, a_Z)` for each CM block, in block order.
    pub gauges: Vec<(GaugeInput, GaugeInput)>,
    /// Defaults to all weight in degree 0.
    pub hodge: Option<HodgeNumbers>,
    pub supplied_factors: Option<Vec<Poly<Rat>>>,
}

#[derive(Clone, Debug)]
pub struct BlockReport {
    pub block: Block,
    pub model: Option<TowerModel>,
    pub q_b: Option<QuadraticFormQ>,
    pub q_z: Option<QuadraticFormQ>,
    pub diag_b: Option<DiagonalFormQ>,
    pub diag_z: Option<DiagonalFormQ>,
    pub compare: Option<CmCompareReport>,
    pub forms_isomorphic: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub factors: LocalFactorSet,
    pub plan: BlockPlan,
    pub blocks: Vec<BlockReport>,
    pub aggregate: AggregateVerdict,
    pub reduction: Option<ReductionVerdict>,
    pub hodge: HodgeNumbers,
    pub items: Vec<CheckItem>,
    pub warnings: Vec<String>,
    pub pass: bool,
}

impl PipelineReport {
    /// Index of the first failing block, if any.
    pub fn failing_block(&self) -> Option<usize> {
        self.aggregate.culprit
    }
}

/// Positive-definite binary form isometric over `Q_p` to the hyperbolic plane.
pub fn hyperbolic_model(p: u64) -> QuadraticFormQ {
    let d = if p == 2 {
        7
    } else if p % 4 == 1 {
        1
    } else {
        p as i64 - 1
    };
    QuadraticFormQ::diagonal_ints(&[1, d]).expect("nonzero entries")
}

/// Diagonal in the normalized Sylvester basis when the dimension is a power
/// of 4 (so the basis is rational and orthogonal) and that basis diagonalizes
/// the form; Gram-Schmidt otherwise.
pub fn preferred_diagonal(q: &QuadraticFormQ) -> Result<DiagonalFormQ> {
    let n = q.dim();
    let k = n.trailing_zeros();
    if n.is_power_of_two() && k.is_multiple_of(2) {
        let s = Rat::new(1.into(), (1i64 << (k / 2)).into());
        let h = Matrix::from_fn(n, n, |i, j| {
            if (i & j).count_ones() % 2 == 0 {
                s.clone()
            } else {
                -s.clone()
            }
        });
        let t = q.transform(&h)?;
        let g = t.gram();
        if (0..n).all(|i| (0..n).all(|j| i == j || g.get(i, j).is_zero())) {
            return DiagonalFormQ::new((0..n).map(|i| g.get(i, i).clone()).collect());
        }
    }
    diagonalize(q)
}

pub fn run_pipeline(req: &PipelineRequest) -> Result<PipelineReport> {
    let alg = &req.algebra;
    let p = req.p;
    let set = local_factors(alg, p, req.precision, req.supplied_factors.as_deref())?;
    let set = involution_orbits(&set, alg)?;
    let plan = orthogonal_blocks(&set)?;
    let n_cm = plan.blocks.iter().filter(|b| matches!(b, Block::Cm { .. })).count();
    if req.gauges.len() != n_cm {
        return Err(Error::Domain(format!(
            "{} gauge pairs supplied for {n_cm} CM blocks",
            req.gauges.len()
        )));
    }
    let mut warnings = Vec::new();
    let mut blocks = Vec::new();
    let mut goodness = Vec::new();
    let mut hyperbolic_ranks = Vec::new();
    let mut gauge_iter = req.gauges.iter();
    for (k, block) in plan.blocks.iter().enumerate() {
        match block {
            Block::Hyperbolic { rank, .. } => {
                let h = hyperbolic_model(p);
                let q = QuadraticFormQ::direct_sum(&vec![h; rank / 2])?;
                hyperbolic_ranks.push(*rank);
                blocks.push(BlockReport {
                    block: block.clone(),
                    model: None,
                    diag_b: Some(diagonalize(&q)?),
                    diag_z: Some(diagonalize(&q)?),
                    q_b: Some(q.clone()),
                    q_z: Some(q),
                    compare: None,
                    forms_isomorphic: Some(true),
                });
            }
            Block::Cm { factor, .. } => {
                let (gb, gz) = gauge_iter.next().expect("counted above");
                match fixed_block_tower(alg, &set, *factor, req.precision)? {
                    None => {
                        warnings.push(format!("block {k}: no tower model for factor {factor}; data only"));
                        blocks.push(BlockReport {
                            block: block.clone(),
                            model: None,
                            q_b: None,
                            q_z: None,
                            diag_b: None,
                            diag_z: None,
                            compare: None,
                            forms_isomorphic: None,
                        });
                    }
                    Some((tower, star, model)) => {
                        let sb = CmSpace::new(tower.clone(), star.clone(), gb.resolve(&tower)?)?;
                        let sz = CmSpace::new(tower.clone(), star, gz.resolve(&tower)?)?;
                        let q_b = trace_form_gram(&sb, None)?;
                        let q_z = trace_form_gram(&sz, None)?;
                        let cmp = cm_compare(&sb, &sz)?;
                        let iso = cmp.isomorphic;
                        // the parity each block forces on its share of s_M
                        let h = if iso { 0 } else { 1 };
                        goodness.push(GoodnessReport {
                            hodge_min: h,
                            period_class: if iso { PeriodClass::Norm } else { PeriodClass::NonNorm },
                            forms_isomorphic: iso,
                            s_m_parity: Parity::of(h),
                            good: true,
                            trace: vec![format!(
                                "block {k}: eps_{p} {} vs {}, gauge ratio {} a norm",
                                cmp.eps_2,
                                cmp.eps_1,
                                if iso { "is" } else { "is not" }
                            )],
                        });
                        blocks.push(BlockReport {
                            block: block.clone(),
                            model: Some(model),
                            diag_b: Some(preferred_diagonal(&q_b)?),
                            diag_z: Some(preferred_diagonal(&q_z)?),
                            q_b: Some(q_b),
                            q_z: Some(q_z),
                            compare: Some(cmp),
                            forms_isomorphic: Some(iso),
                        });
                    }
                }
            }
        }
    }
    let aggregate = aggregate_blocks(&goodness, &hyperbolic_ranks);
    let qb: Vec<QuadraticFormQ> = blocks.iter().filter_map(|b| b.q_b.clone()).collect();
    let qz: Vec<QuadraticFormQ> = blocks.iter().filter_map(|b| b.q_z.clone()).collect();
    let dim: usize = qb.iter().map(|q| q.dim()).sum();
    let hodge = req
        .hodge
        .clone()
        .unwrap_or_else(|| HodgeNumbers::concentrated(dim as u64));
    let mut items = Vec::new();
    let deg_sum: usize = set.factors.iter().map(|f| f.degree).sum();
    items.push(CheckItem::new(
        "degree-accounting",
        deg_sum == alg.degree() && plan.blocks.len() == plan.n - plan.s,
        format!(
            "sum of factor degrees {deg_sum} = deg g {}; {} blocks = n - s = {} - {}",
            alg.degree(),
            plan.blocks.len(),
            plan.n,
            plan.s
        ),
    ));
    let s_m_parity = Parity::of(hodge.s_m());
    items.push(CheckItem::new(
        "parity",
        aggregate.good && aggregate.total_parity == s_m_parity,
        format!(
            "blocks force total parity {}, Hodge numbers give s_M = {} ({})",
            aggregate.total_parity.name(),
            hodge.s_m(),
            s_m_parity.name()
        ),
    ));
    let reduction = if qb.is_empty() {
        warnings.push("no block carries forms; reduction check skipped".into());
        None
    } else {
        let q_b = QuadraticFormQ::direct_sum(&qb)?;
        let q_z = QuadraticFormQ::direct_sum(&qz)?;
        let v = padic_reduction_check(&q_z, &q_b, p, &hodge)?;
        items.extend(v.items.iter().cloned());
        Some(v)
    };
    let pass = items.iter().filter(|i| !i.informational).all(|i| i.pass);
    Ok(PipelineReport {
        factors: set,
        plan,
        blocks,
        aggregate,
        reduction,
        hodge,
        items,
        warnings,
        pass,
    })
}

impl PipelineRequest {
    /// `{"g", "r", "p", "precision"?, "gauges": [[a_B, a_Z], ..], "hodge"?, "supplied_factors"?}`.
    /// Gauges are rationals or coordinate lists.
    pub fn from_json(v: &Value) -> Result<Self> {
        let algebra = GlobalCmAlgebra::new(parse_poly(get(v, "g")?)?, parse_poly(get(v, "r")?)?)?;
        let p = as_u64(get(v, "p")?, "p")?;
        let precision = match v.get("precision") {
            Some(n) => as_u64(n, "precision")? as u32,
            None => default_precision(),
        };
        let gauge = |g: &Value| -> Result<GaugeInput> {
            Ok(match g {
                Value::Array(_) => GaugeInput::Coords(parse_rat_list(g)?),
                _ => GaugeInput::Rational(parse_rat_value(g)?),
            })
        };
        let mut gauges = Vec::new();
        if let Some(gs) = v.get("gauges") {
            for pair in as_array(gs, "gauges")? {
                let pr = as_array(pair, "gauge pair")?;
                if pr.len() != 2 {
                    return Err(Error::Parse("gauge pairs are [a_B, a_Z]".into()));
                }
                gauges.push((gauge(&pr[0])?, gauge(&pr[1])?));
            }
        }
        let hodge = v.get("hodge").map(parse_hodge).transpose()?;
        let supplied_factors = match v.get("supplied_factors").or_else(|| v.get("factors")) {
            Some(fs) => Some(as_array(fs, "supplied_factors")?.iter().map(parse_poly).collect::<Result<Vec<_>>>()?),
            None => None,
        };
        Ok(PipelineRequest {
            algebra,
            p,
            precision,
            gauges,
            hodge,
            supplied_factors,
        })
    }
}

/// The worked quartic example: `Phi_5` with `x -> x^4` at 2.
pub fn phi5_request(a_b: i64, a_z: i64, hodge: &[(i64, u64)]) -> PipelineRequest {
    PipelineRequest {
        algebra: GlobalCmAlgebra::from_ints(&[1, 1, 1, 1, 1], &[0, 0, 0, 0, 1]).expect("valid algebra"),
        p: 2,
        precision: 30,
        gauges: vec![(GaugeInput::Rational(rat(a_b)), GaugeInput::Rational(rat(a_z)))],
        hodge: Some(HodgeNumbers::from_pairs(hodge)),
        supplied_factors: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::ratio;

    #[test]
    fn phi5_example_passes() {
        let r = run_pipeline(&phi5_request(1, 2, &[(1, 1), (-1, 1), (0, 2)])).unwrap();
        assert!(r.pass, "{:?}", r.items);
        let b = &r.blocks[0];
        let q = b.q_b.as_ref().unwrap();
        assert_eq!(q.gram().get(0, 0), &rat(2));
        assert_eq!(q.gram().get(0, 1), &-ratio(1, 2));
        let d = |v: &[i64]| v.iter().map(|&x| ratio(x, 2)).collect::<Vec<_>>();
        assert_eq!(b.diag_b.as_ref().unwrap().entries(), &d(&[1, 5, 5, 5])[..]);
        assert_eq!(b.diag_z.as_ref().unwrap().entries(), &d(&[2, 10, 10, 10])[..]);
        let red = r.reduction.unwrap();
        assert_eq!(red.eps_z * red.eps_b, -1);
    }

    #[test]
    fn negative_control_fails() {
        let r = run_pipeline(&phi5_request(1, 2, &[(0, 4)])).unwrap();
        assert!(!r.pass);
        assert!(r.items.iter().any(|i| i.name == "epsilon" && !i.pass));
    }

    #[test]
    fn hyperbolic_only() {
        let req = PipelineRequest {
            algebra: GlobalCmAlgebra::from_ints(&[1, 0, 1], &[0, -1]).unwrap(),
            p: 5,
            precision: 20,
            gauges: vec![],
            hodge: None,
            supplied_factors: None,
        };
        let r = run_pipeline(&req).unwrap();
        assert!(r.pass);
        assert_eq!(r.aggregate.total_parity, Parity::Even);
    }

    #[test]
    fn request_from_json() {
        let v: Value = serde_json::from_str(
            r#"{"g": [1,1,1,1,1], "r": [0,0,0,0,1], "p": 2, "precision": 30,
                "gauges": [[1, "2"]], "hodge": {"1": 1, "-1": 1, "0": 2}}"#,
        )
        .unwrap();
        let req = PipelineRequest::from_json(&v).unwrap();
        assert_eq!(req.gauges[0].1, GaugeInput::Rational(rat(2)));
        assert!(run_pipeline(&req).unwrap().pass);
    }

    #[test]
    fn gauge_count_is_checked() {
        let mut req = phi5_request(1, 2, &[(0, 4)]);
        req.gauges.clear();
        assert!(matches!(run_pipeline(&req), Err(Error::Domain(_))));
    }

    #[test]
    fn hyperbolic_models_are_split() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let h = hyperbolic_model(p);
            let plane = QuadraticFormQ::diagonal_ints(&[1, -1]).unwrap();
            assert!(crate::qform::compare_local(&h, &plane, p).unwrap(), "p = {p}");
        }
    }
}
