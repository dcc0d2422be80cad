//! Spherical buildings of type A over finite fields and complete
//! reducibility.
//!
//! The building `X_{F_q}(GL_n)` is the flag complex of proper nonzero
//! subspaces of `F_q^n`. A group `Γ` of building automorphisms (inner
//! automorphisms, Frobenius twists, the inverse-transpose duality) acts
//! completely reducibly when every `Γ`-stable flag has a `Γ`-stable
//! opposite. The [`cr`] module decides this and its variants; [`oracle`]
//! checks it against semisimplicity of the natural module, and
//! [`topology`] against the homology of the fixed-point complex.

pub mod building;
pub mod caps;
pub mod corpus;
pub mod cr;
pub mod error;
pub mod exec;
pub mod field;
pub mod groups;
pub mod matrix;
pub mod oracle;
pub mod subspace;
pub mod topology;

pub use building::{Building, Cochar, Flag, LeviSphere, ParabolicData};
pub use caps::Caps;
pub use cr::{CrVerdict, FixedComplex};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use field::{Elem, Field};
pub use groups::{BuildingAuto, BuildingAutoSet, MatGroup};
pub use matrix::FqMatrix;
pub use subspace::Subspace;
pub use topology::{HomologyProfile, SimplicialComplex, TopoClass};
