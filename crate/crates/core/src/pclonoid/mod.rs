//! Polynomial linearly closed clonoids: closure under `Z_p`-linear
//! combinations and linear substitutions of the variables.

pub mod cert;
pub mod extract;
pub mod oracle;

pub use cert::{Builder, CertNode, Certificate, Node, Step};
pub use extract::{
    degree_shift, extract_max_degree_monomial, isolate_full_support, monomials_of, project_monomial,
};
pub use oracle::{pclonoid_member_oracle, pclonoid_member_oracle_with_composition, Verdict};

use crate::error::{Error, Result};
use crate::poly::{CoeffRingSig, RPoly};

/// Generators of a polynomial clonoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyGenSet {
    sig: CoeffRingSig,
    generators: Vec<RPoly>,
}

impl PolyGenSet {
    pub fn new(sig: CoeffRingSig, generators: Vec<RPoly>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.sig() != &sig) {
            return Err(Error::SignatureMismatch(format!("{:?} in generator set over {:?}", g.sig(), sig)));
        }
        Ok(PolyGenSet { sig, generators })
    }

    pub fn sig(&self) -> &CoeffRingSig {
        &self.sig
    }

    pub fn generators(&self) -> &[RPoly] {
        &self.generators
    }

    pub fn member(&self, f: &RPoly, var_cap: usize, step_cap: usize) -> Verdict {
        pclonoid_member_oracle(f, &self.generators, var_cap, step_cap)
    }
}
