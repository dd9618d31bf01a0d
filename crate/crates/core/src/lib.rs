//! Wasserstein-1 transport on finite directed graphs.
//!
//! Static distances come from the tail formula on rooted trees, the
//! Beckmann minimal-flow program and a Kantorovich coupling program. The
//! dynamic side describes mass moving along edges through a velocity `v`
//! and an edge distribution `g`, with cost `I_q`; its minimum coincides with
//! the static distance for every `q ≥ 1`.

pub mod benamou;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod lp;
pub mod measures;
pub mod methods;
pub mod transport;
pub mod worked;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, IncidenceMatrix, RootedTree};
pub use measures::{EdgePairPath, TimeGrid, Triple, VertexDistribution, VertexPath};
pub use methods::{MethodConfig, MethodRegistry, W1Method};
