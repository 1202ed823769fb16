//! Clones above `Clo(Z_s, +)` for squarefree `s`.
//!
//! Functions on `Z_s` are handled through their CRT components. A clone
//! containing the group addition is described by a family of linearly closed
//! clonoids, one per prime and per monomial degree class, and every
//! membership answer comes with a replayable certificate.

pub mod arith;
pub mod bounds;
pub mod clone;
pub mod clonoid;
pub mod error;
pub mod guard;
pub mod json;
pub mod lattice;
pub mod linalg;
pub mod pclonoid;
pub mod poly;
pub mod verify;

pub use arith::{crt_split, component_of, e_embed, linear_map, ComponentFn, Element, FnTable, LinearMapSpec, SquarefreeModulus};
pub use error::{Error, Result};
pub use poly::{CoeffFn, CoeffRingSig, CompositionSpec, Monomial, RPoly};
