//! Exact distributions of `occ_w(n + t) - occ_w(n)`, the change in the number
//! of occurrences of a binary block `w` when `t` is added to `n`.

pub mod cache;
pub mod cfengine;
pub mod cli;
pub mod descent;
pub mod direct;
pub mod dist;
pub mod error;
pub mod gauss;
pub mod laurent;
pub mod moments;
pub mod rational;
pub mod report;
pub mod tspec;
pub mod words;

pub use dist::{IntDist, TailSide};
pub use error::{Error, Result};
pub use words::{DigitString, Pattern};
