//! Milnor rings mod `l` of local fields: one place, a one-dimensional degree 2
//! given by a nondegenerate pairing, nothing above degree 2.

use std::str::FromStr;

use crate::algebra::{DegreewiseAlgebra, QuadraticPresentation};
use crate::error::{Error, Result};
use crate::gf_linalg::PrimeField;
use crate::monomials::GeneratorOrder;

use super::datum::{datum_to_algebra, GlobalSymbolDatum, PlaceKind, SPlace, SymbolGenerator, Variant};
use super::prediction::{quad, PredictedSurvivors};
use super::Model;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalKind {
    /// No primitive `l`-th root of unity: degree 2 vanishes.
    NoRoot,
    /// `l` odd or `sqrt(-1)` present: an alternating pairing.
    Symplectic,
    /// `l = 2`, `{-1} != 0`, `{-1, -1} = 0`.
    SquareZero,
    /// `l = 2`, `{-1, -1} != 0`.
    SquareNonzero,
}

impl FromStr for LocalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "noroot" => Ok(Self::NoRoot),
            "symplectic" => Ok(Self::Symplectic),
            "square-zero" => Ok(Self::SquareZero),
            "square-nonzero" => Ok(Self::SquareNonzero),
            _ => Err(Error::InvalidParameters(format!("unknown local case `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalCase {
    pub kind: LocalKind,
    pub dim: usize,
    pub l: u32,
    pub sqrt_minus1: bool,
}

impl LocalCase {
    pub fn new(kind: LocalKind, dim: usize, l: u32, sqrt_minus1: bool) -> Result<Self> {
        let c = Self {
            kind,
            dim,
            l,
            sqrt_minus1,
        };
        c.check()?;
        Ok(c)
    }

    /// The two smallest admissible dimensions.
    pub fn small_dims(kind: LocalKind) -> [usize; 2] {
        match kind {
            LocalKind::NoRoot => [1, 2],
            LocalKind::Symplectic | LocalKind::SquareZero => [2, 4],
            LocalKind::SquareNonzero => [3, 5],
        }
    }

    fn check(&self) -> Result<()> {
        PrimeField::new(self.l)?;
        let bad = |m: &str| Err(Error::InvalidParameters(m.into()));
        let two = self.l == 2;
        match self.kind {
            LocalKind::NoRoot if two => bad("l = 2 always has the root -1"),
            LocalKind::NoRoot if self.dim == 0 => bad("dimension must be positive"),
            LocalKind::Symplectic if two && !self.sqrt_minus1 => {
                bad("an alternating pairing for l = 2 needs a square root of -1")
            }
            LocalKind::Symplectic if self.dim < 2 || self.dim % 2 == 1 => {
                bad("the symplectic case needs an even dimension >= 2")
            }
            LocalKind::SquareZero | LocalKind::SquareNonzero if !two || self.sqrt_minus1 => {
                bad("this case needs l = 2 without a square root of -1")
            }
            LocalKind::SquareZero if self.dim < 2 || self.dim % 2 == 1 => {
                bad("{-1,-1} = 0 forces an even dimension >= 2")
            }
            LocalKind::SquareNonzero if self.dim < 3 || self.dim.is_multiple_of(2) => {
                bad("{-1,-1} != 0 forces an odd dimension >= 3")
            }
            _ => Ok(()),
        }
    }

    /// Coordinates of the generators in the standard basis `y_i`, for the cases
    /// where the pairing is the dot product.
    fn dot_basis(&self) -> Vec<Vec<u32>> {
        let d = self.dim;
        let y = |i: usize| {
            let mut v = vec![0u32; d];
            v[i] = 1;
            v
        };
        let w = vec![1u32; d];
        match self.kind {
            LocalKind::SquareZero => {
                let mut b = vec![w];
                b.extend((0..d - 1).map(y));
                b
            }
            LocalKind::SquareNonzero => {
                let mut y01 = y(0);
                y01[1] = 1;
                let mut b = vec![y01, w, y(0)];
                b.extend((2..d - 1).map(y));
                b
            }
            _ => unreachable!("only the l = 2 cases use the dot product"),
        }
    }

    fn gram(&self) -> Vec<Vec<u32>> {
        let d = self.dim;
        let f = PrimeField::new(self.l).expect("checked prime");
        match self.kind {
            LocalKind::NoRoot => vec![vec![0; d]; d],
            LocalKind::Symplectic => {
                let mut g = vec![vec![0; d]; d];
                for k in 0..d / 2 {
                    g[2 * k][2 * k + 1] = 1;
                    g[2 * k + 1][2 * k] = f.neg(1);
                }
                g
            }
            _ => {
                let b = self.dot_basis();
                b.iter()
                    .map(|u| b.iter().map(|v| f.dot(u, v)).collect())
                    .collect()
            }
        }
    }
}

/// The local model in the order used to exhibit a PBW basis:
/// any order in the symplectic case, `x0 = {-1}` with `x0 x1 != 0` when
/// `{-1, -1} = 0`, and `x1 = {-1}` with `x0^2 = x0 x1 = 0 != x0 x2` otherwise.
pub fn build_local(case: LocalCase) -> Result<Model> {
    case.check()?;
    let field = PrimeField::new(case.l)?;
    let d = case.dim;
    let order = GeneratorOrder::standard(d);
    let generators = (0..d)
        .map(|i| {
            let mut e = vec![0u32; d];
            e[i] = 1;
            SymbolGenerator {
                label: order.name(i).to_string(),
                images: vec![e],
                ord: Vec::new(),
                frob: Vec::new(),
            }
        })
        .collect();
    let mut minus_one = vec![0u32; d];
    let (predicted, ideal_choices) = match case.kind {
        LocalKind::NoRoot => (PredictedSurvivors::exact(Vec::new()), vec![0]),
        LocalKind::Symplectic => (PredictedSurvivors::exact(vec![quad(0, 1)]), vec![0, 1]),
        LocalKind::SquareZero => {
            minus_one[0] = 1;
            (PredictedSurvivors::exact(vec![quad(0, 1)]), vec![0, 1])
        }
        LocalKind::SquareNonzero => {
            minus_one[1] = 1;
            (PredictedSurvivors::exact(vec![quad(0, 2)]), vec![0, 1, 2])
        }
    };
    let datum = GlobalSymbolDatum {
        field,
        sqrt_minus1: case.sqrt_minus1,
        variant: Variant::Local,
        s_places: vec![SPlace {
            name: "s0".into(),
            kind: PlaceKind::Nonarch,
            gram: case.gram(),
            has_root: case.kind != LocalKind::NoRoot,
        }],
        outside_places: Vec::new(),
        generators,
        lagrangian: Vec::new(),
        minus_one,
        ideal_generator: None,
    };
    datum.validate()?;
    Ok(Model {
        datum,
        predicted,
        ideal_choices,
    })
}

/// `K^M(K)/l` truncated at `n_max`, the presentation of `Lambda(K, l)`, and the order.
pub fn local_algebras(
    case: LocalCase,
    n_max: usize,
) -> Result<(DegreewiseAlgebra, QuadraticPresentation, GeneratorOrder)> {
    let m = build_local(case)?;
    let a = datum_to_algebra(&m.datum, n_max)?;
    Ok((a, m.datum.lambda()?, m.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc_graded::{associated_graded, surviving_monomials};

    #[test]
    fn survivors_match_the_stated_sets() {
        let cases = [
            (LocalKind::Symplectic, 3, false, "x0*x1"),
            (LocalKind::Symplectic, 2, true, "x0*x1"),
            (LocalKind::SquareZero, 2, false, "x0*x1"),
            (LocalKind::SquareNonzero, 2, false, "x0*x2"),
        ];
        for (kind, l, sq, expect) in cases {
            for d in LocalCase::small_dims(kind) {
                let case = LocalCase::new(kind, d, l, sq).unwrap();
                let (a, _, order) = local_algebras(case, 4).unwrap();
                assert_eq!(a.dims(), &[1, d, 1, 0, 0], "{kind:?} {d}");
                let s = surviving_monomials(&a, 2).unwrap();
                let names: Vec<String> = s.iter().map(|m| order.format_monomial(m)).collect();
                assert_eq!(names, vec![expect.to_string()], "{kind:?} {d}");
            }
        }
    }

    #[test]
    fn square_nonzero_graded_lambda() {
        let case = LocalCase::new(LocalKind::SquareNonzero, 3, 2, false).unwrap();
        let (_, lam, order) = local_algebras(case, 3).unwrap();
        let g = associated_graded(&lam.degreewise_expand(3).unwrap()).unwrap();
        // x0^2 = x0 x1 and x2^2 = x1 x2 kill the larger monomials; x1^2 = {-1,-1} stays
        let dead: Vec<String> = crate::monomials::mono_enumerate(3, 2, false)
            .into_iter()
            .filter(|m| !g.survives(m))
            .map(|m| order.format_monomial(&m))
            .collect();
        assert_eq!(dead, vec!["x0*x1", "x2^2"]);
    }

    #[test]
    fn noroot_has_no_products() {
        let case = LocalCase::new(LocalKind::NoRoot, 2, 5, false).unwrap();
        let (a, lam, _) = local_algebras(case, 3).unwrap();
        assert_eq!(a.dims(), &[1, 2, 0, 0]);
        assert!(lam.is_free_exterior());
    }

    #[test]
    fn inconsistent_cases_are_rejected() {
        assert!(LocalCase::new(LocalKind::SquareZero, 3, 2, false).is_err());
        assert!(LocalCase::new(LocalKind::SquareNonzero, 4, 2, false).is_err());
        assert!(LocalCase::new(LocalKind::Symplectic, 2, 2, false).is_err());
        assert!(LocalCase::new(LocalKind::NoRoot, 2, 2, false).is_err());
        assert!(LocalCase::new(LocalKind::SquareZero, 2, 3, false).is_err());
    }
}
