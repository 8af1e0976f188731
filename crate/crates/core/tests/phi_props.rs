use cmhk_core::filtered::{hodge_min, random_star, random_symmetric};
use cmhk_core::kernel::matrix::{ops, Matrix};
use cmhk_core::kernel::rat::{rat, val, Rat};
use cmhk_core::kernel::ring::Rationals;
use cmhk_core::lubin_tate::{build_d_pi, commutant_dimension, has_cyclic_vector};
use cmhk_core::padic::tower::{random_eisenstein, random_rng};
use cmhk_core::padic::{standard_unram_poly, Layer, PadicTower};
use cmhk_core::phi::{det_valuation, hodge_polygon, newton_polygon_module, FilteredPhiModule};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

const PREC: u32 = 40;

fn layer_of(p: u64, f: usize) -> Layer {
    Layer::new(p, standard_unram_poly(p, f).unwrap(), PREC).unwrap()
}

/// An invertible `r x r` integer matrix and its determinant.
fn int_matrix(r: usize, seed: u64) -> (Matrix<Rat>, Rat) {
    let mut rng = random_rng(seed);
    loop {
        let a = Matrix::from_fn(r, r, |_, _| rat(rng.gen_range(-12i64..=12)));
        let d = ops(&Rationals).det(&a).unwrap();
        if !d.is_zero() {
            return (a, d);
        }
    }
}

fn pf() -> impl Strategy<Value = (u64, usize)> {
    (prop::sample::select(vec![2u64, 3, 5]), 1usize..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn det_valuation_is_f_times_rise((p, f) in pf(), r in 1usize..=4, seed in any::<u64>()) {
        let (a, det) = int_matrix(r, seed);
        let m = FilteredPhiModule::from_rational(layer_of(p, f), &a, &[(0, r as u64)]).unwrap();
        let dv = det_valuation(&m).unwrap();
        let rise = newton_polygon_module(&m).unwrap().end().1.clone();
        prop_assert_eq!(rat(dv), rat(f as i64) * rise);
        prop_assert_eq!(dv, f as i64 * val(&det, p).unwrap());
    }

    #[test]
    fn newton_survives_base_change((p, f) in pf(), r in 1usize..=3, seed in any::<u64>()) {
        let l = layer_of(p, f);
        let (a, _) = int_matrix(r, seed);
        let m = FilteredPhiModule::from_rational(l.clone(), &a, &[(0, r as u64)]).unwrap();
        let mut rng = random_rng(seed ^ 0x5eed);
        let b = loop {
            let b = Matrix::from_fn(r, r, |_, _| l.exact((0..f).map(|_| rat(rng.gen_range(-4i64..=4))).collect()));
            if ops(&l).inverse(&b).is_ok() {
                break b;
            }
        };
        let m2 = m.base_change(&b).unwrap();
        prop_assert_eq!(newton_polygon_module(&m).unwrap(), newton_polygon_module(&m2).unwrap());
        prop_assert_eq!(det_valuation(&m).unwrap(), det_valuation(&m2).unwrap());
    }

    #[test]
    fn hodge_rise_is_weighted_sum(jumps in prop::collection::vec((-4i64..=4, 1u64..=3), 1..=4)) {
        let r: u64 = jumps.iter().map(|j| j.1).sum();
        let a = ops(&Rationals).identity(r as usize);
        let m = FilteredPhiModule::from_rational(layer_of(3, 1), &a, &jumps).unwrap();
        let h = hodge_polygon(&m);
        let expect: i64 = jumps.iter().map(|&(w, k)| w * k as i64).sum();
        prop_assert_eq!(h.end().1.clone(), rat(expect));
        prop_assert_eq!(h.length(), r);
    }

    #[test]
    fn converted_cm_space_keeps_hodge_min(half in 1usize..=4, seed in any::<u64>()) {
        let mut rng = random_rng(seed);
        let star = random_star(2 * half, &mut rng);
        let v = random_symmetric(&star, 3, &mut rng);
        let m = FilteredPhiModule::from_filtered_cm(layer_of(5, 1), &v).unwrap();
        let h = hodge_polygon(&m);
        prop_assert_eq!(h.end().1.clone(), rat(0));
        let lowest = h.vertices().iter().map(|(_, y)| y.clone()).min().unwrap();
        prop_assert_eq!(-lowest, rat(hodge_min(&v).unwrap() as i64));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(27))]

    #[test]
    fn lubin_tate_commutant_and_cyclic_vector(
        p in prop::sample::select(vec![2u64, 3, 5]),
        e in 1usize..=3,
        f in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let layer = PadicTower::standard(p, f, 1, PREC).unwrap().layer().clone();
        let mut rng = random_rng(seed);
        let t = PadicTower::with_layer(layer.clone(), random_eisenstein(&layer, e, &mut rng)).unwrap();
        let lt = build_d_pi(&t).unwrap();
        prop_assert_eq!(commutant_dimension(&lt), e);
        prop_assert!(has_cyclic_vector(&lt));
    }
}
