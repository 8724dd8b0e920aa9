//! Executable models of Milnor rings mod `l`: local fields, and finite symbol
//! data for global fields with generator orders that make the associated
//! graded algebra a monomial algebra with a triangle-free or acyclic graph.

mod datum;
mod global;
mod local;
mod noroot;
mod prediction;

pub use datum::{
    datum_to_algebra, support, validate_reciprocity, GlobalSymbolDatum, OutsidePlace, PlaceKind,
    ReciprocityReport, SPlace, SymbolGenerator, Variant, OUTSIDE_KINDS,
};
pub use global::{build_annihilator, build_global_general, build_global_symplectic, GeneralParams};
pub use local::{build_local, local_algebras, LocalCase, LocalKind};
pub use noroot::{build_noroot, NorootParams};
pub use prediction::PredictedSurvivors;

use crate::algebra::DegreewiseAlgebra;
use crate::error::Result;
use crate::monomials::GeneratorOrder;

/// A generated datum with its predicted surviving quadratics.
#[derive(Clone, Debug)]
pub struct Model {
    pub datum: GlobalSymbolDatum,
    pub predicted: PredictedSurvivors,
    /// Generators `c` whose ideals `(c)` the construction covers.
    pub ideal_choices: Vec<usize>,
}

impl Model {
    pub fn order(&self) -> GeneratorOrder {
        self.datum.order().expect("builders produce distinct labels")
    }

    pub fn algebra(&self, n_max: usize) -> Result<DegreewiseAlgebra> {
        datum_to_algebra(&self.datum, n_max)
    }
}

#[cfg(test)]
mod tests;
