pub mod algebra;
pub mod assoc_graded;
pub mod check;
pub mod cli;
pub mod error;
pub mod gf_linalg;
pub mod homology;
pub mod milnor_models;
pub mod monomial_graph;
pub mod monomials;
pub mod symplectic;

pub use error::{Error, Result};
