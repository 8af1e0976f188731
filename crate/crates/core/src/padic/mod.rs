//! p-adic fields: unramified layers, Eisenstein towers, involutions and norm
//! groups.

pub mod involution;
pub mod layer;
pub mod norms;
pub mod tower;

pub use involution::{trace_norm, FixedField, Involution, Subfield};
pub use layer::{Layer, LayerElem};
pub use norms::{dwork_tame_witness, is_norm, reciprocity_symbol, DworkReport, ExtKind, Reciprocity};
pub use tower::{standard_unram_poly, PadicTower, TowerElem};

pub const DEFAULT_PRECISION: u32 = 50;

/// Working precision, overridable through `CMHK_PRECISION`.
pub fn default_precision() -> u32 {
    std::env::var("CMHK_PRECISION")
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_PRECISION)
}
