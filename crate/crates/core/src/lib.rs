//! Exact computation of `H^1` and `H^1_loc` for finite matrix groups acting
//! on `(Z/p^n)^m`, with the group-theoretic constructions and hypothesis
//! checkers around their vanishing.

pub mod cohomology;
pub mod counterexample;
pub mod criteria;
pub mod error;
pub mod grouptheory;
pub mod ringmat;
pub mod symplectic;

pub use cohomology::{Cocycle, CohomGroup, Cohomology, GModule};
pub use error::{Error, Result};
pub use grouptheory::{FiniteGroup, MatGroup};
pub use ringmat::{AbelianStructure, Mat, ModuleSpec, Vector, Zmod};
