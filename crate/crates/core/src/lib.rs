//! Exact algebra for regular nilpotent Hessenberg varieties and the quantized
//! elementary symmetric presentation of their coordinate rings.

pub mod appendix;
pub mod checks;
pub mod error;
pub mod exec;
pub mod flag;
pub mod hess;
pub mod ideals;
pub mod iso;
pub mod linalg;
pub mod poly;
pub mod qsym;
pub mod report;
pub mod singular;

pub use error::{Error, Result};
