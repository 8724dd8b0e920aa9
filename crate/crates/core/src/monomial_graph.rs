//! Graph criteria for exterior algebras modulo quadratic monomials.
//!
//! The graph `T` has the generators as vertices and an edge `x_a x_b` for each
//! quadratic monomial that is nonzero in `A`. When `A_n = 0` for `n >= 3`, `A` is
//! Koszul iff `T` has no triangle, and `A_+` is a Koszul module over the exterior
//! algebra iff `T` has no cycle.

use serde::Serialize;

use crate::algebra::{DegreewiseAlgebra, SymmetryMode};
use crate::assoc_graded::MonomialTruncation;
use crate::error::{Error, Result};
use crate::gf_linalg::PrimeField;
use crate::monomials::{GeneratorOrder, Monomial};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadGraph {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    loops: Vec<usize>,
    /// Whether the algebra the graph came from vanishes in degrees `>= 3`.
    vanishes_above_2: bool,
}

impl QuadGraph {
    /// Graph on `x0 .. x{n-1}`; edges are normalized and deduplicated, self-pairs
    /// become loops.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        Self::with_labels(GeneratorOrder::standard(n).names().to_vec(), edges)
    }

    pub fn with_labels(
        vertices: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut es = Vec::new();
        let mut loops = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::GraphPrecondition(format!("edge ({a},{b}) out of range")));
            }
            if a == b {
                loops.push(a);
            } else {
                es.push((a.min(b), a.max(b)));
            }
        }
        es.sort_unstable();
        es.dedup();
        loops.sort_unstable();
        loops.dedup();
        Ok(Self {
            vertices,
            edges: es,
            loops,
            vanishes_above_2: true,
        })
    }

    pub fn cycle(n: usize) -> Self {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are in range")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
    pub fn loops(&self) -> &[usize] {
        &self.loops
    }
    pub fn vanishes_above_2(&self) -> bool {
        self.vanishes_above_2
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.vertices.len();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertices.len())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Some triangle `a < b < c`, if any.
    pub fn find_triangle(&self) -> Option<(usize, usize, usize)> {
        let adj = self.adjacency();
        for &(a, b) in &self.edges {
            for c in b + 1..self.vertices.len() {
                if adj[a][c] && adj[b][c] {
                    return Some((a, b, c));
                }
            }
        }
        None
    }

    /// Whether the edge set is a forest (union-find).
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(a, b) in &self.edges {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra == rb {
                return false;
            }
            parent[ra] = rb;
        }
        true
    }

    /// The full subgraph on `keep` (vertex order preserved).
    pub fn induced(&self, keep: &[usize]) -> Self {
        let pos = |v: usize| keep.iter().position(|&k| k == v);
        let edges = self
            .edges
            .iter()
            .filter_map(|&(a, b)| Some((pos(a)?, pos(b)?)))
            .collect::<Vec<_>>();
        let loops = self.loops.iter().filter_map(|&v| pos(v)).collect();
        Self {
            vertices: keep.iter().map(|&k| self.vertices[k].clone()).collect(),
            edges,
            loops,
            vanishes_above_2: self.vanishes_above_2,
        }
    }

    fn precondition(&self) -> Result<()> {
        if !self.loops.is_empty() {
            return Err(Error::GraphPrecondition(format!(
                "{} loop(s); the criterion needs an exterior quotient",
                self.loops.len()
            )));
        }
        if !self.vanishes_above_2 {
            return Err(Error::GraphPrecondition(
                "the algebra is nonzero in degree 3".into(),
            ));
        }
        Ok(())
    }

    /// The exterior algebra modulo all quadratic monomials that are not edges,
    /// and all cubic monomials.
    pub fn exterior_quotient(&self, field: PrimeField, n_max: usize) -> Result<DegreewiseAlgebra> {
        if !self.loops.is_empty() {
            return Err(Error::GraphPrecondition("loops in an exterior quotient".into()));
        }
        let order = GeneratorOrder::new(self.vertices.clone())?;
        let mut surv = vec![
            vec![Monomial::one()],
            (0..self.vertices.len()).map(Monomial::generator).collect(),
            self.edges
                .iter()
                .map(|&(a, b)| Monomial::from_ranks(&[a, b]))
                .collect(),
        ];
        surv.resize(n_max.max(2) + 1, Vec::new());
        surv.truncate(n_max + 1);
        DegreewiseAlgebra::monomial_algebra(field, SymmetryMode::Supercommutative, order, &surv)
    }

    /// `{"edges": [[a, b], ...], "loops": [...], "vertices": [...]}` with labels.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct G<'a> {
            vertices: &'a [String],
            edges: Vec<[&'a str; 2]>,
            loops: Vec<&'a str>,
        }
        serde_json::to_value(G {
            vertices: &self.vertices,
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| [self.vertices[a].as_str(), self.vertices[b].as_str()])
                .collect(),
            loops: self.loops.iter().map(|&v| self.vertices[v].as_str()).collect(),
        })
        .expect("graph serializes")
    }
}

/// Edges and loops from the surviving quadratic monomials.
pub fn graph_from_truncation(g: &MonomialTruncation) -> QuadGraph {
    let mut edges = Vec::new();
    for m in g.surviving(2) {
        let r = m.ranks();
        edges.push((r[0], r[1]));
    }
    let mut t =
        QuadGraph::with_labels(g.order().names().to_vec(), edges).expect("survivor ranks are in range");
    t.vanishes_above_2 = (3..=g.n_max()).all(|n| g.surviving(n).is_empty());
    t
}

/// Koszulity of the algebra: no triangle.
pub fn algebra_verdict(t: &QuadGraph) -> Result<bool> {
    t.precondition()?;
    Ok(t.find_triangle().is_none())
}

/// Koszulity of `A_+` over the exterior algebra: no cycle.
pub fn module_verdict(t: &QuadGraph) -> Result<bool> {
    t.precondition()?;
    Ok(t.is_forest())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assoc_graded::associated_graded;

    fn path3() -> QuadGraph {
        QuadGraph::new(3, [(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn from_truncation() {
        let order = GeneratorOrder::standard(2);
        let one_edge = MonomialTruncation::new(
            order.clone(),
            SymmetryMode::Supercommutative,
            vec![
                vec![Monomial::one()],
                vec![Monomial::generator(0), Monomial::generator(1)],
                vec![Monomial::from_ranks(&[0, 1])],
            ],
        );
        let t = graph_from_truncation(&one_edge);
        assert_eq!(t.edges(), &[(0, 1)]);
        assert!(t.loops().is_empty());
        let square = MonomialTruncation::new(
            order,
            SymmetryMode::Commutative,
            vec![
                vec![Monomial::one()],
                vec![Monomial::generator(0), Monomial::generator(1)],
                vec![Monomial::from_ranks(&[0, 0])],
            ],
        );
        let t = graph_from_truncation(&square);
        assert!(t.edges().is_empty());
        assert_eq!(t.loops(), &[0]);
        assert!(matches!(algebra_verdict(&t), Err(Error::GraphPrecondition(_))));
    }

    #[test]
    fn algebra_verdict_examples() {
        assert!(algebra_verdict(&path3()).unwrap());
        assert!(!algebra_verdict(&QuadGraph::cycle(3)).unwrap());
        assert!(algebra_verdict(&QuadGraph::new(4, []).unwrap()).unwrap());
    }

    #[test]
    fn module_verdict_examples() {
        let tree = QuadGraph::new(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        assert!(module_verdict(&tree).unwrap());
        assert!(!module_verdict(&QuadGraph::cycle(4)).unwrap());
        let matching = QuadGraph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(module_verdict(&matching).unwrap());
        assert!(algebra_verdict(&QuadGraph::cycle(4)).unwrap());
    }

    #[test]
    fn quotient_round_trips_through_graded() {
        let f = PrimeField::new(3).unwrap();
        let t = QuadGraph::cycle(5);
        let a = t.exterior_quotient(f, 4).unwrap();
        assert_eq!(a.dims(), &[1, 5, 5, 0, 0]);
        let g = associated_graded(&a).unwrap();
        let back = graph_from_truncation(&g);
        assert_eq!(back.edges(), t.edges());
        assert!(back.vanishes_above_2());
    }

    #[test]
    fn induced_subgraphs() {
        let c = QuadGraph::cycle(4);
        let p = c.induced(&[0, 1, 2]);
        assert_eq!(p.edges(), &[(0, 1), (1, 2)]);
        assert!(p.is_forest());
        assert_eq!(c.max_degree(), 2);
    }

    #[test]
    fn json_export() {
        let v = path3().to_json();
        assert_eq!(v["edges"], serde_json::json!([["x0", "x1"], ["x1", "x2"]]));
    }
}
