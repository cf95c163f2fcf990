//! Exact computation of local and directed local chromatic numbers, their
//! fractional relaxations, and the universal graph families behind them.

pub mod battery;
pub mod budget;
pub mod coloring;
pub mod error;
pub mod exact;
pub mod fractional;
pub mod graph;
pub mod independent;
pub mod io;
pub mod lp;
pub mod orientation;
pub mod rational;
pub mod sampler;
mod search;
pub mod universal;
pub mod verify;

pub use budget::Budget;
pub use coloring::{Coloring, LocalityReport, MultiColoring};
pub use error::{Error, Result};
pub use graph::{Graph, OutMode, PartialOrientation, VertexSet};
pub use rational::Rational;
