//! Toric geometry of smooth Fano polytopes: validation, fans, relation
//! lattices, Mori cone bases and the cohomology ring of the toric variety.

mod cohomology;
mod fan;
mod lattice;
pub mod linalg;
mod model;
mod polytope;

pub use cohomology::{CohClass, CohomologyRing};
pub use fan::{fan_from_polytope, FanData, Wall};
pub use lattice::{mori_basis, relation_lattice, wall_relations, MoriBasis};
pub use model::{all_tuples, sorted_tuples, ToricModel};
pub use polytope::{validate_fano, ConditionCheck, Facet, LatticePolytope, ValidationReport};
