pub mod audit;
pub mod cli;
pub mod cns;
pub mod dualcert;
pub mod error;
pub mod exactnum;
pub mod galois;
pub mod graphenc;
pub mod polyring;
pub mod resolvent;
mod search;

pub use error::{Error, Result};
pub use search::SearchOptions;
