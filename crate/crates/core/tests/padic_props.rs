mod support;

use cmhk_core::kernel::rat::{rat, Rat};
use cmhk_core::kernel::ring::Ring;
use cmhk_core::padic::tower::random_rng;
use cmhk_core::padic::{is_norm, standard_unram_poly, trace_norm, Involution, Layer, PadicTower, Subfield, TowerElem};
use proptest::prelude::*;
use rand::Rng;

const PREC: u32 = 30;

fn layer_of(p: u64, f: usize) -> Layer {
    Layer::new(p, standard_unram_poly(p, f).unwrap(), PREC).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn frobenius_has_order_f(
        p in prop::sample::select(vec![2u64, 3, 5]),
        f in 1usize..=4,
        c in prop::collection::vec(-9i64..=9, 4),
    ) {
        let l = layer_of(p, f);
        let a = l.exact(c[..f].iter().map(|&x| rat(x)).collect());
        let mut x = a.clone();
        for _ in 0..f {
            x = l.frobenius(&x);
        }
        if l.frobenius_is_exact() {
            prop_assert!(x.is_exact());
            prop_assert_eq!(x.coords(), a.coords());
        } else {
            let d = l.sub(&x, &a);
            prop_assert!(l.valuation(&d).is_none_or(|v| v >= x.prec.unwrap()));
        }
        if f > 1 {
            // a generator is moved by every proper power
            let g = l.generator();
            let fg = l.frobenius(&g);
            prop_assert_ne!(fg.coords(), g.coords());
        }
    }

    #[test]
    fn norms_and_traces_compose(
        idx in 0usize..4,
        c in prop::collection::vec(-6i64..=6, 8),
    ) {
        let (t, star) = quartic_tower(idx);
        let x = t.elem(c[..t.d()].iter().map(|&v| rat(v)).collect());
        prop_assume!(!t.is_zero(&x));
        let (tr_b, n_b) = trace_norm(&t, &x, Subfield::Base).unwrap();
        prop_assert_eq!(tr_b, t.from_rat(t.trace_base(&x)));
        prop_assert_eq!(n_b.clone(), t.from_rat(t.norm_base(&x)));
        // through the unramified layer: N_K(N_{K/L} x) = N_K(x)^e
        let (tr_l, n_l) = trace_norm(&t, &x, Subfield::Layer).unwrap();
        let e = t.e() as u32;
        prop_assert_eq!(t.norm_base(&n_l), num_traits::pow(t.norm_base(&x), e as usize));
        prop_assert_eq!(t.trace_base(&tr_l), t.trace_base(&x) * rat(e as i64));
        // through the fixed field of the involution, of index 2
        let (tr_f, n_f) = trace_norm(&t, &x, Subfield::Fixed(&star)).unwrap();
        prop_assert!(star.is_fixed(&n_f) && star.is_fixed(&tr_f));
        prop_assert_eq!(t.norm_base(&n_f), num_traits::pow(t.norm_base(&x), 2));
        prop_assert_eq!(t.trace_base(&tr_f), t.trace_base(&x) * rat(2));
        prop_assert_eq!(n_f, star.norm(&t, &x));
    }
}

/// Degree-4 towers with an involution of order two.
fn quartic_tower(idx: usize) -> (PadicTower, Involution) {
    let (p, f, e) = [(3u64, 2usize, 2usize), (5, 2, 2), (2, 2, 2), (7, 1, 4)][idx];
    let t = PadicTower::standard(p, f, e, PREC).unwrap();
    let star = Involution::negate_pi(&t).unwrap();
    (t, star)
}

#[test]
fn norms_of_norms() {
    for (i, ext) in support::quadratic_extensions(PREC).iter().enumerate() {
        let mut rng = random_rng(90 + i as u64);
        for _ in 0..100 {
            let x = ext.tower.random_nonzero(&mut rng, 5, 2);
            let n = ext.star.norm(&ext.tower, &x);
            assert!(is_norm(&ext.tower, &ext.star, &n).unwrap(), "{}: {}", ext.name, ext.tower.display(&x));
        }
    }
}

/// Representatives of `Q_p^x / (Q_p^x)^2`.
fn square_classes(p: u64) -> Vec<i64> {
    if p == 2 {
        vec![1, 3, 5, 7, 2, 6, 10, 14]
    } else {
        let n = (2..p as i64).find(|&a| (1..p as i64).all(|b| (b * b - a) % p as i64 != 0)).unwrap();
        let p = p as i64;
        vec![1, n, p, n * p]
    }
}

#[test]
fn square_class_representatives_split_in_half() {
    for ext in support::quadratic_extensions(PREC).iter().filter(|e| e.base_is_qp) {
        let t = &ext.tower;
        let reps = square_classes(t.p());
        let cls: Vec<bool> = reps
            .iter()
            .map(|&r| is_norm(t, &ext.star, &t.from_i64(r)).unwrap())
            .collect();
        assert_eq!(cls.iter().filter(|&&c| c).count() * 2, reps.len(), "{}", ext.name);
        for i in 0..reps.len() {
            for j in 0..reps.len() {
                let xy = t.from_i64(reps[i] * reps[j]);
                assert_eq!(is_norm(t, &ext.star, &xy).unwrap(), cls[i] == cls[j], "{}", ext.name);
            }
        }
    }
}

/// All elements `sum d_k pi^k` with residue digits `d_k`, `k < n`.
fn truncated_elements(t: &PadicTower, n: usize) -> Vec<TowerElem> {
    let mut out = vec![t.zero()];
    for k in 0..n {
        let pik = t.pi_pow(k as i64);
        let mut next = Vec::with_capacity(out.len() * t.residue_order() as usize);
        for w in &out {
            for i in 0..t.residue_order() {
                next.push(t.add(w, &t.mul(&t.digit(i), &pik)));
            }
        }
        out = next;
    }
    out
}

#[test]
fn is_square_matches_exhaustive_search() {
    for (p, f, e) in [(2u64, 1usize, 1usize), (2, 1, 2), (2, 2, 1), (2, 1, 3), (3, 1, 1), (3, 1, 2), (5, 1, 1)] {
        let t = PadicTower::standard(p, f, e, PREC).unwrap();
        let n = 2 * e + 3;
        let squares: Vec<TowerElem> = truncated_elements(&t, n).iter().map(|w| t.mul(w, w)).collect();
        let mut rng = random_rng(p * 100 + 10 * f as u64 + e as u64);
        let mut seen = [0usize; 2];
        for _ in 0..40 {
            let u = t.elem((0..t.d()).map(|_| rat(rng.gen_range(-3i64..=3))).collect::<Vec<Rat>>());
            if t.vpi(&u) != Some(0) {
                continue;
            }
            let found = squares
                .iter()
                .any(|s| t.vpi(&t.sub(&u, s)).is_none_or(|v| v >= n as i64));
            assert_eq!(t.is_square(&u).unwrap(), found, "(p, f, e) = ({p}, {f}, {e}), u = {}", t.display(&u));
            seen[found as usize] += 1;
        }
        assert!(seen[0] > 0 && seen[1] > 0, "({p}, {f}, {e}): {seen:?}");
    }
}

#[test]
fn standard_layers_have_exact_frobenius() {
    for p in [2u64, 3, 5] {
        for f in 1..=4 {
            assert!(layer_of(p, f).frobenius_is_exact(), "p = {p}, f = {f}");
        }
    }
}
