//! Exact arithmetic substrate.

pub mod finite_field;
pub mod hensel;
pub mod matrix;
pub mod poly;
pub mod polygon;
pub mod rat;
pub mod ring;

pub use finite_field::{berlekamp, is_irreducible, FpPoly, GaloisField};
pub use hensel::hensel_factor;
pub use matrix::{ops, Matrix};
pub use poly::{qpoly, qpoly_from_ints, Poly, PolyRing};
pub use polygon::{newton_polygon_of_poly, newton_polygon_rat, LowerPolygon, Segment};
pub use rat::{fmt_rat, parse_rat, rat, ratio, Rat};
pub use ring::{Field, PrimeField, Rationals, Ring};
