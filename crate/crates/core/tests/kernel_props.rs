use cmhk_core::kernel::finite_field::berlekamp;
use cmhk_core::kernel::hensel::{hensel_factor, reduce_poly_mod_p};
use cmhk_core::kernel::poly::{qpoly, qpoly_from_ints};
use cmhk_core::kernel::polygon::newton_polygon_rat;
use cmhk_core::kernel::rat::{rat, val, Rat};
use cmhk_core::kernel::ring::Ring;
use num_traits::Zero;
use proptest::prelude::*;

fn nonzero(bound: i64) -> impl Strategy<Value = i64> {
    prop_oneof![-bound..=-1i64, 1..=bound]
}

/// Integer polynomial with nonzero constant term and the given leading coefficient.
fn int_poly(lead: Option<i64>) -> impl Strategy<Value = Vec<i64>> {
    (nonzero(200), prop::collection::vec(-200i64..=200, 0..5), nonzero(50)).prop_map(move |(c0, mid, l)| {
        let mut v = vec![c0];
        v.extend(mid);
        v.push(lead.unwrap_or(l));
        v
    })
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn newton_slopes_increase_and_cover_degree(c in int_poly(None), p in prime()) {
        let f = qpoly_from_ints(&c);
        let np = newton_polygon_rat(&f, p).unwrap();
        let slopes = np.slope_list();
        prop_assert!(slopes.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(np.length() as usize, c.len() - 1);
    }

    #[test]
    fn product_polygon_concatenates(a in int_poly(Some(1)), b in int_poly(Some(1)), p in prime()) {
        let q = qpoly();
        let (f, g) = (qpoly_from_ints(&a), qpoly_from_ints(&b));
        let fg = q.mul(&f, &g);
        let mut expect: Vec<Rat> = newton_polygon_rat(&f, p).unwrap().slope_list();
        expect.extend(newton_polygon_rat(&g, p).unwrap().slope_list());
        expect.sort();
        prop_assert_eq!(newton_polygon_rat(&fg, p).unwrap().slope_list(), expect);
    }

    #[test]
    fn hensel_lifts_multiply_back(c in int_poly(Some(1)), p in prime(), k in 1u32..12) {
        let f = qpoly_from_ints(&c);
        let fbar = reduce_poly_mod_p(&f, p).unwrap();
        let rp = cmhk_core::kernel::finite_field::fp_poly_ring(p);
        prop_assume!(rp.is_squarefree(&fbar));
        let seed = berlekamp(&fbar, p).unwrap();
        let lifted = hensel_factor(&f, &seed, p, k).unwrap();
        prop_assert_eq!(lifted.len(), seed.len());
        let q = qpoly();
        let prod = lifted.iter().fold(q.one(), |acc, g| q.mul(&acc, g));
        let diff = q.sub(&prod, &f);
        for x in diff.coeffs() {
            prop_assert!(x.is_zero() || val(x, p).unwrap() >= k as i64, "coefficient {} not divisible by {}^{}", x, p, k);
        }
        for (g, s) in lifted.iter().zip(&seed) {
            prop_assert!(q.is_monic(g));
            prop_assert_eq!(&reduce_poly_mod_p(g, p).unwrap(), s);
        }
    }
}

#[test]
fn eisenstein_polygon_is_one_segment() {
    for p in [2u64, 3, 5] {
        let p = p as i64;
        let f = qpoly_from_ints(&[p, p * p, 0, 1]);
        let np = newton_polygon_rat(&f, p as u64).unwrap();
        assert_eq!(np.root_valuations(), vec![(Rat::new(1.into(), 3.into()), 3)]);
        assert_eq!(np.start().1, rat(1));
    }
}
