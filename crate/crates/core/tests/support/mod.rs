//! Independent oracles shared by the integration tests. Nothing here calls the
//! closed-form code paths it is used to check.
#![allow(dead_code)]

use std::collections::HashMap;

use cmhk_core::kernel::rat::{rat, Rat};
use cmhk_core::kernel::ring::Ring;
use cmhk_core::padic::{standard_unram_poly, Involution, PadicTower};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

/// Squarefree integer in the square class of a nonzero rational, by trial
/// division of `num * den`.
pub fn squarefree_int(r: &Rat) -> i64 {
    assert!(!r.is_zero());
    let mut n = (r.numer() * r.denom()).to_i64().expect("small rational");
    let sign = n.signum();
    n = n.abs();
    let mut out = 1i64;
    let mut d = 2i64;
    while d * d <= n {
        let mut k = 0;
        while n % d == 0 {
            n /= d;
            k += 1;
        }
        if k % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    sign * out * n
}

/// Brute-force Hilbert symbols: searches the conic `z^2 = a x^2 + b y^2` for
/// a primitive solution modulo `p^k` (`k = 3`, or `6` for `p = 2`), which
/// lifts by Hensel for squarefree `a, b`.
#[derive(Default)]
pub struct ConicOracle {
    memo: HashMap<(u64, i64, i64), i32>,
    squares: HashMap<u64, Vec<bool>>,
}

impl ConicOracle {
    pub fn new() -> Self {
        Self::default()
    }

    /// `place = 0` is the real place.
    pub fn symbol(&mut self, a: &Rat, b: &Rat, place: u64) -> i32 {
        let (a, b) = (squarefree_int(a), squarefree_int(b));
        if place == 0 {
            // z^2 = a x^2 + b y^2 has a real point unless both are negative
            return if a < 0 && b < 0 { -1 } else { 1 };
        }
        let k = if place == 2 { 6 } else { 3 };
        let m = (place as i64).pow(k);
        let key = (place, a.rem_euclid(m), b.rem_euclid(m));
        if let Some(&s) = self.memo.get(&key) {
            return s;
        }
        let s = if self.solvable(place, m, key.1, key.2) { 1 } else { -1 };
        self.memo.insert(key, s);
        s
    }

    fn solvable(&mut self, p: u64, m: i64, a: i64, b: i64) -> bool {
        let sq = self
            .squares
            .entry(p)
            .or_insert_with(|| {
                let mut v = vec![false; m as usize];
                for z in 0..m {
                    v[(z * z % m) as usize] = true;
                }
                v
            })
            .clone();
        let p = p as i64;
        // x a unit: scale to x = 1
        if (0..m).any(|y| sq[((a + b * y % m * y) % m) as usize]) {
            return true;
        }
        // y a unit: scale to y = 1
        if (0..m).any(|x| sq[((a * x % m * x + b) % m) as usize]) {
            return true;
        }
        // x, y non-units, z a unit: scale to z = 1
        for x in (0..m).step_by(p as usize) {
            let ax = a * x % m * x % m;
            for y in (0..m).step_by(p as usize) {
                if (ax + b * y % m * y) % m == 1 {
                    return true;
                }
            }
        }
        false
    }
}

/// Euler's phi by counting.
pub fn euler_phi(m: u64) -> u64 {
    (1..=m).filter(|&k| k.gcd(&m) == 1).count() as u64
}

/// Multiplicative order of `p` mod `m` by repeated multiplication.
pub fn ord_mod(p: u64, m: u64) -> u64 {
    let mut x = p % m;
    let mut k = 1;
    while x != 1 {
        x = x * p % m;
        k += 1;
    }
    k
}

/// Whether `-1` lies in the subgroup generated by `p` mod `m`.
pub fn minus_one_in_powers(p: u64, m: u64) -> bool {
    let mut x = 1;
    for _ in 0..ord_mod(p, m) {
        if x == m - 1 {
            return true;
        }
        x = x * p % m;
    }
    false
}

/// Coefficients of the cyclotomic polynomial, constant term first, by
/// dividing `x^m - 1` by the cyclotomic polynomials of the proper divisors.
pub fn cyclotomic(m: u64) -> Vec<i64> {
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in (1..m).filter(|d| m.is_multiple_of(*d)) {
        num = exact_div(&num, &cyclotomic(d));
    }
    num
}

fn exact_div(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db];
        q[i] = c;
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= c * bj;
        }
    }
    assert!(r.iter().all(|&c| c == 0));
    q
}

/// `x^k mod g` over Z for monic integer `g`, constant term first.
pub fn x_pow_mod(k: usize, g: &[i64]) -> Vec<i64> {
    let n = g.len() - 1;
    let mut v = vec![0i64; k.max(n) + 1];
    v[k] = 1;
    for i in (n..v.len()).rev() {
        let c = v[i];
        if c != 0 {
            for j in 0..=n {
                v[i - n + j] -= c * g[j];
            }
        }
    }
    v.truncate(n);
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
    v
}

/// A random diagonal form: dimension in `2..=6`, integer entries in
/// `[-30, 30]` without zero.
pub fn random_diagonal<R: Rng>(rng: &mut R) -> Vec<Rat> {
    let dim = rng.gen_range(2..=6);
    (0..dim)
        .map(|_| {
            let n = rng.gen_range(1..=30i64);
            rat(if rng.gen_bool(0.5) { -n } else { n })
        })
        .collect()
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Unramified,
    Tame,
    Wild,
}

/// A quadratic extension `F / F_0` inside a tower, with its involution.
pub struct TestExt {
    pub name: String,
    pub tower: PadicTower,
    pub star: Involution,
    pub kind: Kind,
    /// `F_0 = Q_p`, so fixed elements are rationals.
    pub base_is_qp: bool,
}

fn eis_tower(p: u64, eis: &[i64], prec: u32) -> PadicTower {
    let coeffs: Vec<Vec<Rat>> = eis.iter().map(|&c| vec![rat(c)]).collect();
    PadicTower::new(p, 1, standard_unram_poly(p, 1).unwrap(), &coeffs, prec).unwrap()
}

/// Unramified, tamely ramified and wildly ramified quadratic extensions.
pub fn quadratic_extensions(prec: u32) -> Vec<TestExt> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7] {
        let t = PadicTower::standard(p, 2, 1, prec).unwrap();
        let z = t.from_layer(&t.layer().frobenius_pow(&t.layer().generator(), 1));
        let star = Involution::new(&t, z, t.uniformizer()).unwrap();
        out.push(TestExt {
            name: format!("Q{}/Q{p}", p * p),
            tower: t,
            star,
            kind: Kind::Unramified,
            base_is_qp: true,
        });
    }
    for (p, c) in [(3u64, -3i64), (3, 3), (5, -5), (7, -7), (7, 7)] {
        let t = eis_tower(p, &[c, 0, 1], prec);
        let star = Involution::negate_pi(&t).unwrap();
        out.push(TestExt {
            name: format!("Q{p}(sqrt {})", -c),
            tower: t,
            star,
            kind: Kind::Tame,
            base_is_qp: true,
        });
    }
    {
        let t = PadicTower::standard(5, 2, 2, prec).unwrap();
        let star = Involution::negate_pi(&t).unwrap();
        out.push(TestExt {
            name: "Q25(sqrt 5)".into(),
            tower: t,
            star,
            kind: Kind::Tame,
            base_is_qp: false,
        });
    }
    // y^2 - 2y + 2 (root 1 + i) and y^2 - 2y - 2 (root 1 + sqrt 3): pi -> 2 - pi
    for (name, c0) in [("Q2(i)", 2i64), ("Q2(sqrt 3)", -2)] {
        let t = eis_tower(2, &[c0, -2, 1], prec);
        let img = t.sub(&t.from_i64(2), &t.uniformizer());
        let star = Involution::new(&t, t.zeta(), img).unwrap();
        out.push(TestExt {
            name: name.into(),
            tower: t,
            star,
            kind: Kind::Wild,
            base_is_qp: true,
        });
    }
    for c in [-2i64, 2, -6, 6] {
        let t = eis_tower(2, &[c, 0, 1], prec);
        let star = Involution::negate_pi(&t).unwrap();
        out.push(TestExt {
            name: format!("Q2(sqrt {})", -c),
            tower: t,
            star,
            kind: Kind::Wild,
            base_is_qp: true,
        });
    }
    out
}

/// The rational value of an element of `F_0 = Q_p`.
pub fn as_rational(t: &PadicTower, x: &cmhk_core::padic::TowerElem) -> Rat {
    let c = x.coords();
    assert!(c[1..].iter().all(|v| v.is_zero()), "not in Q_p: {}", t.display(x));
    c[0].clone()
}
