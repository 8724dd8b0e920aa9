//! Predicted sets of surviving quadratic monomials.

use std::collections::HashSet;

use serde_json::json;

use crate::monomials::{GeneratorOrder, Monomial};

/// Monomials that must all survive, groups of which exactly one survives, and
/// monomials that may survive. Nothing else may survive.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PredictedSurvivors {
    pub all: Vec<Monomial>,
    pub exactly_one: Vec<Vec<Monomial>>,
    pub any_of: Vec<Monomial>,
}

pub(crate) fn quad(a: usize, b: usize) -> Monomial {
    Monomial::from_ranks(&[a, b])
}

impl PredictedSurvivors {
    pub fn exact(all: Vec<Monomial>) -> Self {
        Self {
            all,
            ..Self::default()
        }
    }

    /// `Ok` if `computed` realizes the prediction, else a description of the
    /// first mismatch.
    pub fn check(&self, computed: &[Monomial], order: &GeneratorOrder) -> Result<(), String> {
        let got: HashSet<&Monomial> = computed.iter().collect();
        let name = |m: &Monomial| order.format_monomial(m);
        for m in &self.all {
            if !got.contains(m) {
                return Err(format!("{} does not survive", name(m)));
            }
        }
        for g in &self.exactly_one {
            let hits = g.iter().filter(|m| got.contains(m)).count();
            if hits != 1 {
                let names: Vec<String> = g.iter().map(name).collect();
                return Err(format!("{hits} survivors among {{{}}}", names.join(", ")));
            }
        }
        let allowed: HashSet<&Monomial> = self
            .all
            .iter()
            .chain(self.exactly_one.iter().flatten())
            .chain(&self.any_of)
            .collect();
        for m in computed {
            if !allowed.contains(m) {
                return Err(format!("unexpected survivor {}", name(m)));
            }
        }
        Ok(())
    }

    pub fn to_json(&self, order: &GeneratorOrder) -> serde_json::Value {
        let names =
            |ms: &[Monomial]| -> Vec<String> { ms.iter().map(|m| order.format_monomial(m)).collect() };
        json!({
            "all": names(&self.all),
            "exactly_one": self.exactly_one.iter().map(|g| names(g)).collect::<Vec<_>>(),
            "any_of": names(&self.any_of),
        })
    }
}
