//! Distributed list colouring of graphs without a fixed clique minor.

pub mod algorithm;
pub mod colouring;
pub mod deletability;
pub mod error;
pub mod generators;
pub mod graph;
pub mod io;
pub mod minors;
pub mod rng;
pub mod sim;

pub use colouring::{verify_colouring, Colour, Colouring, ListAssignment, Verdict};
pub use error::{Error, Result};
pub use graph::{Graph, Vertex, VertexSet};
pub use algorithm::{distributed_list_colour, sequential_reference_colour, AlgoParams, LevelRecord};
