//! Alternating-cycle decomposition of 2-digraphs, factor and route
//! enumeration, the symmetric-group residue calculus, non-Hamiltonicity
//! certification, and isomorph-free family generation.

pub mod certify;
pub mod digraph;
pub mod enumerate;
pub mod error;
pub mod factors;
pub mod fixtures;
pub mod io;
mod par;
pub mod perm;
pub mod permset;

pub use certify::{Caps, Certificate, Verdict};
pub use digraph::{AltCycle, Digraph, Labeling, SpliceMap};
pub use error::{Error, Result};
pub use factors::{Factor, ParityFamily, RouteSet};
pub use perm::{Parity, Perm};
pub use permset::{PermSet, Uniformity};
