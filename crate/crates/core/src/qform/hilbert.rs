//! Places of Q and local Hilbert symbols.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::rat::{is_prime, legendre_rat, mod8_of_unit, split_unit, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

impl Place {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(Place::Prime(p))
        } else {
            Err(Error::Domain(format!("{p} is not a prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "real" | "inf" | "infinity" | "R" => Ok(Place::Real),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::Parse(format!("bad place {s:?}")))?;
                Place::prime(p)
            }
        }
    }
}

fn sign(e: u64) -> i32 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Hilbert symbol `(a, b)_v` for nonzero rationals.
pub fn hilbert_symbol(a: &Rat, b: &Rat, place: Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("Hilbert symbol of zero".into()));
    }
    Ok(match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (al, u) = split_unit(a, 2);
            let (be, v) = split_unit(b, 2);
            let (u, v) = (mod8_of_unit(&u), mod8_of_unit(&v));
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u) * eps(v) + (al.rem_euclid(2) as u64) * omega(v) + (be.rem_euclid(2) as u64) * omega(u);
            sign(e)
        }
        Place::Prime(p) => {
            let (al, u) = split_unit(a, p);
            let (be, v) = split_unit(b, p);
            let (al, be) = (al.rem_euclid(2), be.rem_euclid(2));
            let mut s = sign((al * be) as u64 * ((p - 1) / 2));
            if be == 1 {
                s *= legendre_rat(&u, p);
            }
            if al == 1 {
                s *= legendre_rat(&v, p);
            }
            s
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat::{rat, ratio};

    #[test]
    fn examples() {
        assert_eq!(hilbert_symbol(&rat(2), &rat(5), Place::Prime(5)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), Place::Real).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&rat(-1), &rat(-1), Place::Prime(3)).unwrap(), 1);
        for pl in [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(7)] {
            assert_eq!(hilbert_symbol(&rat(1), &ratio(-14, 9), pl).unwrap(), 1);
        }
        assert!(hilbert_symbol(&rat(0), &rat(1), Place::Real).is_err());
    }

    #[test]
    fn place_parsing() {
        assert_eq!("real".parse::<Place>().unwrap(), Place::Real);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Prime(7));
        assert!("9".parse::<Place>().is_err());
        assert_eq!(Place::Prime(5).to_string(), "5");
    }
}
