//! Integer-valued functions on Z^n: finite tables, separable functions,
//! conjugates and generators.

mod biconjugate;
pub mod generate;
mod separable;
mod table;

pub use biconjugate::{biconjugate_check, BiconjugateReport};
pub use separable::{Orientation, PieceShape, SeparableFunction, UnivariatePiece};
pub use table::TableFunction;
