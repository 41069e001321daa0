//! Ground-state geometric phases, geometric tensors and finite-size scaling
//! for exactly solvable many-body models near quantum phase transitions.

// `!(x > 0.0)` guards are meant to reject NaN; quadrature nodes are tabulated
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod dicke;
pub mod error;
pub mod geom_tensor;
pub mod lmg;
pub mod oracle;
pub mod phase;
pub mod pipeline;
pub mod probe;
pub mod quad;
pub mod scaling;
pub mod svg;
pub mod sweep;
pub mod xy_chain;

pub use error::{Error, Result};
pub use phase::{Method, ModelPoint, PhaseResult, SystemSize};
