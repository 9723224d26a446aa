//! Cohomology of torus-invariant line bundles on toric varieties, computed from formal
//! differences of lattice polyhedra through exact Čech complexes.

pub mod catalog;
pub mod cohomology;
pub mod cone;
pub mod divisor;
pub mod error;
pub mod exceptional;
pub mod fan;
pub mod lattice;
pub mod linalg;
pub mod polyhedron;

pub use cone::Cone;
pub use divisor::{ToricDivisor, VirtualPolyhedron};
pub use error::{Error, Result};
pub use fan::{Fan, RaySet};
pub use lattice::{LatticeVector, MVec, NVec, M, N};
pub use polyhedron::LatticePolyhedron;
