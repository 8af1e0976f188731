pub mod cli;
pub mod cm;
pub mod decomposition;
pub mod error;
pub mod filtered;
pub mod json;
pub mod kernel;
pub mod lubin_tate;
pub mod padic;
pub mod phi;
pub mod pipeline;
pub mod qform;

pub use error::{Error, Result};
