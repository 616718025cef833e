//! Weighted first-order model counting with Skolemization for
//! function-free first-order logic.

pub mod encode;
pub mod ground;
pub mod logic;
pub mod parse;
pub mod propcheck;
pub mod transform;
