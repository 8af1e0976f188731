//! Multi-factor Hensel lifting of a coprime factorization mod p.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::finite_field::{fp_poly_ring, FpPoly};
use super::poly::{qpoly, Poly};
use super::rat::{big_pow, inv_mod, rat_from_big, residue, symmetric_mod, val, Rat};
use super::ring::Ring;
use crate::error::{Error, Result};

/// Reduction of a p-integral rational polynomial mod p.
pub fn reduce_poly_mod_p(f: &Poly<Rat>, p: u64) -> Result<FpPoly> {
    let c = f.coeffs().iter().map(|c| residue(c, p)).collect::<Result<Vec<_>>>()?;
    Ok(fp_poly_ring(p).from_coeffs(c))
}

fn integer_coeffs_mod(f: &Poly<Rat>, p: u64, m: &BigInt) -> Result<Vec<BigInt>> {
    f.coeffs()
        .iter()
        .map(|c| {
            if !c.is_zero() && val(c, p).unwrap() < 0 {
                return Err(Error::Domain("coefficient is not p-integral".into()));
            }
            let d = inv_mod(c.denom(), m).unwrap();
            Ok((c.numer() * d).mod_floor(m))
        })
        .collect()
}

fn int_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out.iter().map(|c| c.mod_floor(m)).collect()
}

/// Lifts `seed` (monic, pairwise coprime mod p, multiplying to `f` mod p) to
/// monic factors whose product is congruent to `f` mod `p^precision`.
pub fn hensel_factor(f: &Poly<Rat>, seed: &[FpPoly], p: u64, precision: u32) -> Result<Vec<Poly<Rat>>> {
    let q = qpoly();
    if !q.is_monic(f) {
        return Err(Error::Domain("hensel_factor needs a monic polynomial".into()));
    }
    if precision == 0 {
        return Err(Error::Domain("precision must be positive".into()));
    }
    let r = fp_poly_ring(p);
    let fbar = reduce_poly_mod_p(f, p)?;
    if !r.is_squarefree(&fbar) {
        let g = r.gcd(&fbar, &r.derivative(&fbar));
        return Err(Error::Refusal(format!(
            "reduction mod {p} is not squarefree (gcd with derivative has degree {})",
            g.degree().unwrap_or(0)
        )));
    }
    if seed.iter().any(|g| !r.is_monic(g)) {
        return Err(Error::Refusal("seed factors must be monic".into()));
    }
    for i in 0..seed.len() {
        for j in i + 1..seed.len() {
            let g = r.gcd(&seed[i], &seed[j]);
            if g.degree() != Some(0) {
                return Err(Error::Refusal(format!(
                    "seed factors {i} and {j} share a common factor of degree {} mod {p}",
                    g.degree().unwrap_or(0)
                )));
            }
        }
    }
    let prod = seed.iter().fold(r.one(), |a, b| r.mul(&a, b));
    if prod != fbar {
        return Err(Error::Refusal("seed product differs from the reduction mod p".into()));
    }
    if seed.len() <= 1 {
        return Ok(vec![f.clone()]);
    }

    let modulus = big_pow(p, precision);
    let fz = integer_coeffs_mod(f, p, &modulus)?;
    // Bezout data: s_i * G_i = 1 mod g_i, with G_i the product of the others
    let cofactors: Vec<FpPoly> = (0..seed.len())
        .map(|i| {
            seed.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .fold(r.one(), |a, (_, b)| r.mul(&a, b))
        })
        .collect();
    let bezout: Vec<FpPoly> = seed
        .iter()
        .zip(&cofactors)
        .map(|(g, c)| r.inv_mod(&r.rem_monic(c, g), g).expect("coprime seed"))
        .collect();

    let mut lifted: Vec<Vec<BigInt>> = seed
        .iter()
        .map(|g| g.coeffs().iter().map(|&c| BigInt::from(c)).collect())
        .collect();
    let pb = BigInt::from(p);
    for k in 1..precision {
        let pk = big_pow(p, k);
        let mut prod = vec![BigInt::from(1)];
        for g in &lifted {
            prod = int_mul(&prod, g, &modulus);
        }
        let n = fz.len().max(prod.len());
        let diff: Vec<u64> = (0..n)
            .map(|i| {
                let a = fz.get(i).cloned().unwrap_or_default() - prod.get(i).cloned().unwrap_or_default();
                let a = a.mod_floor(&modulus);
                debug_assert!((&a % &pk).is_zero());
                ((a / &pk) % &pb).to_u64().unwrap()
            })
            .collect();
        let c = r.from_coeffs(diff);
        if c.is_zero() {
            continue;
        }
        for (i, g) in seed.iter().enumerate() {
            let delta = r.rem_monic(&r.mul(&c, &bezout[i]), g);
            for (j, d) in delta.coeffs().iter().enumerate() {
                lifted[i][j] = (&lifted[i][j] + &pk * BigInt::from(*d)).mod_floor(&modulus);
            }
        }
    }
    Ok(lifted
        .into_iter()
        .map(|g| q.from_coeffs(g.iter().map(|c| rat_from_big(symmetric_mod(c, &modulus))).collect()))
        .collect())
}

/// Checks that a product of rational polynomials agrees with `f` mod `p^k`.
pub fn product_congruent(f: &Poly<Rat>, factors: &[Poly<Rat>], p: u64, k: u32) -> Result<bool> {
    let q = qpoly();
    let prod = factors.iter().fold(q.one(), |a, b| q.mul(&a, b));
    let m = big_pow(p, k);
    let a = integer_coeffs_mod(f, p, &m)?;
    let b = integer_coeffs_mod(&prod, p, &m)?;
    let n = a.len().max(b.len());
    Ok((0..n).all(|i| a.get(i).cloned().unwrap_or_default() == b.get(i).cloned().unwrap_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::qpoly_from_ints;

    #[test]
    fn lift_x2_plus_1_mod_5() {
        let f = qpoly_from_ints(&[1, 0, 1]);
        let r = fp_poly_ring(5);
        let seed = vec![r.from_coeffs(vec![2, 1]), r.from_coeffs(vec![3, 1])];
        let out = hensel_factor(&f, &seed, 5, 6).unwrap();
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|g| g.degree() == Some(1) && qpoly().is_monic(g)));
        assert!(product_congruent(&f, &out, 5, 6).unwrap());
        assert!(!product_congruent(&f, &out, 5, 7).unwrap());
        assert_eq!(reduce_poly_mod_p(&out[0], 5).unwrap(), seed[0]);
    }

    #[test]
    fn single_factor_seed_is_identity() {
        let f = qpoly_from_ints(&[2, 0, 1]);
        let fbar = reduce_poly_mod_p(&f, 5).unwrap();
        assert_eq!(hensel_factor(&f, &[fbar], 5, 4).unwrap(), vec![f]);
    }

    #[test]
    fn refuses_inseparable_reduction() {
        let f = qpoly_from_ints(&[1, 0, 1]);
        let r = fp_poly_ring(2);
        let seed = vec![r.from_coeffs(vec![1, 1]), r.from_coeffs(vec![1, 1])];
        assert!(matches!(hensel_factor(&f, &seed, 2, 5), Err(Error::Refusal(_))));
        let seed = vec![r.from_coeffs(vec![1, 0, 1])];
        assert!(matches!(hensel_factor(&f, &seed, 2, 5), Err(Error::Refusal(_))));
    }

    #[test]
    fn non_monic_is_domain_error() {
        let f = qpoly_from_ints(&[1, 0, 2]);
        assert!(matches!(hensel_factor(&f, &[], 5, 3), Err(Error::Domain(_))));
    }
}
