//! Rainbow-substructure analysis for collections of graphs on a shared
//! labeled vertex set: detect rainbow stars and rainbow trees, build the
//! extremal rainbow-free families, certify membership in the extremal
//! classes, and confirm the exact bounds by brute force at desk scale.

pub mod certify;
pub mod extremal;
pub mod model;
pub mod oracle;
pub mod rainbow_star;
pub mod rainbow_tree;

pub use model::{
    AuxDigraph, ColoredEdge, Edge, Graph, GraphCollection, ModelError, RainbowWitness, StarGraph,
    WitnessKind,
};
