//! Clones on `Z_s` (squarefree `s`) that contain the linear clone
//! `Clo(Z_s, +)`.

pub mod cert;
pub mod closure;
pub mod enumerate;
mod probe;
pub mod rep;
pub mod translate;

pub use cert::{CloneCertificate, CloneNode, CloneStep, CNode};
pub use closure::{from_generators, from_generators_with};
pub use enumerate::{brute_force_clg_ball, enumerate_clones, gamma, gamma_generators, generator_pool, rho_injective, EnumConfig, Pool};
pub use rep::{red, Atom, CloneConfig, CloneRep, Grade, LevelIndex, ProbeMode};
