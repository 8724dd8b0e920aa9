//! Associated graded monomial algebras for the inverse-lex filtration, and the
//! PBW criterion built on them.
//!
//! A degree-`n` monomial survives when its value in `A_n` is not a combination of
//! the values of strictly smaller monomials. The survivors form a basis of `A`
//! and span the monomial algebra `gr A`.

use std::collections::HashSet;

use serde::Serialize;

use crate::algebra::{DegreewiseAlgebra, ModuleTruncation, SymmetryMode};
use crate::error::{Error, Result};
use crate::gf_linalg::{PrimeField, RowBasis};
use crate::monomials::{divisors_degree, mono_enumerate, GeneratorOrder, Monomial};

/// Witness lists are cut at this length.
pub const WITNESS_CAP: usize = 16;

/// Surviving monomials of `gr A` in each degree `0..=n_max`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialTruncation {
    order: GeneratorOrder,
    mode: SymmetryMode,
    surviving: Vec<Vec<Monomial>>,
}

/// Outcome of one of the two PBW checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub ok: bool,
    pub witnesses: Vec<Monomial>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwVerdict {
    pub generated_in_degree_1: bool,
    pub quadratic_through_3: bool,
    pub koszul: bool,
    /// Surviving monomials per degree; a PBW basis when `koszul`.
    pub certificate: Vec<Vec<Monomial>>,
    pub failures: Vec<Monomial>,
}

impl MonomialTruncation {
    pub fn new(order: GeneratorOrder, mode: SymmetryMode, mut surviving: Vec<Vec<Monomial>>) -> Self {
        for s in surviving.iter_mut() {
            s.sort();
        }
        Self {
            order,
            mode,
            surviving,
        }
    }

    pub fn order(&self) -> &GeneratorOrder {
        &self.order
    }
    pub fn mode(&self) -> SymmetryMode {
        self.mode
    }
    pub fn n_max(&self) -> usize {
        self.surviving.len().saturating_sub(1)
    }
    pub fn surviving(&self, n: usize) -> &[Monomial] {
        self.surviving.get(n).map_or(&[], Vec::as_slice)
    }
    pub fn all_surviving(&self) -> &[Vec<Monomial>] {
        &self.surviving
    }

    pub fn survives(&self, m: &Monomial) -> bool {
        self.surviving(m.degree()).binary_search(m).is_ok()
    }

    /// Divisor closure: every degree-`(n-1)` divisor of a survivor survives.
    pub fn divisor_closure_violations(&self) -> Vec<Monomial> {
        let mut out = Vec::new();
        for n in 1..self.surviving.len() {
            for m in &self.surviving[n] {
                if divisors_degree(m, n - 1).iter().any(|d| !self.survives(d)) {
                    out.push(m.clone());
                }
            }
        }
        out
    }

    /// `gr A` as an algebra.
    pub fn to_algebra(&self, field: PrimeField) -> Result<DegreewiseAlgebra> {
        DegreewiseAlgebra::monomial_algebra(field, self.mode, self.order.clone(), &self.surviving)
    }

    /// JSON certificate: surviving monomial strings per degree.
    pub fn certificate_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Cert {
            generators: Vec<String>,
            surviving: Vec<Vec<String>>,
        }
        serde_json::to_value(Cert {
            generators: self.order.names().to_vec(),
            surviving: self
                .surviving
                .iter()
                .map(|s| s.iter().map(|m| self.order.format_monomial(m)).collect())
                .collect(),
        })
        .expect("certificate serializes")
    }
}

/// Greedy scan of degree-`n` normal monomials in ascending order.
pub fn surviving_monomials(a: &DegreewiseAlgebra, n: usize) -> Result<Vec<Monomial>> {
    let mut span = RowBasis::new(a.field(), a.dim(n));
    let mut out = Vec::new();
    for m in mono_enumerate(a.n_gens(), n, a.mode().squarefree()) {
        if span.insert(a.monomial_value(&m)?) {
            out.push(m);
        }
    }
    if out.len() != a.dim(n) {
        return Err(Error::Internal(format!(
            "degree {n}: {} survivors for dimension {}",
            out.len(),
            a.dim(n)
        )));
    }
    Ok(out)
}

pub fn associated_graded(a: &DegreewiseAlgebra) -> Result<MonomialTruncation> {
    let surviving = (0..=a.n_max())
        .map(|n| surviving_monomials(a, n))
        .collect::<Result<Vec<_>>>()?;
    let g = MonomialTruncation::new(a.order().clone(), a.mode(), surviving);
    if let Some(m) = g.divisor_closure_violations().first() {
        return Err(Error::Internal(format!(
            "surviving monomial {} has a non-surviving divisor",
            g.order.format_monomial(m)
        )));
    }
    Ok(g)
}

/// Every survivor of degree `n >= 2` is a generator times a survivor of degree `n - 1`.
pub fn check_generated_degree1(g: &MonomialTruncation) -> Check {
    let mut witnesses = Vec::new();
    for n in 2..=g.n_max() {
        for m in g.surviving(n) {
            if !divisors_degree(m, n - 1).iter().any(|d| g.survives(d)) {
                witnesses.push(m.clone());
            }
        }
    }
    let ok = witnesses.is_empty();
    witnesses.truncate(WITNESS_CAP);
    Check { ok, witnesses }
}

/// Every dead cubic normal monomial is divisible by a dead quadratic one.
pub fn check_quadratic_through3(g: &MonomialTruncation) -> Result<Check> {
    if g.n_max() < 3 {
        return Err(Error::DegreeOverflow {
            requested: 3,
            n_max: g.n_max(),
        });
    }
    let mut witnesses = Vec::new();
    for m in mono_enumerate(g.order.len(), 3, g.mode.squarefree()) {
        if g.survives(&m) {
            continue;
        }
        if divisors_degree(&m, 2).iter().all(|d| g.survives(d)) {
            witnesses.push(m);
        }
    }
    let ok = witnesses.is_empty();
    witnesses.truncate(WITNESS_CAP);
    Ok(Check { ok, witnesses })
}

pub fn pbw_verdict_from(g: &MonomialTruncation) -> Result<PbwVerdict> {
    let gen = check_generated_degree1(g);
    let quad = check_quadratic_through3(g)?;
    let mut failures = gen.witnesses.clone();
    failures.extend(quad.witnesses.iter().cloned());
    Ok(PbwVerdict {
        generated_in_degree_1: gen.ok,
        quadratic_through_3: quad.ok,
        koszul: gen.ok && quad.ok,
        certificate: g.all_surviving().to_vec(),
        failures,
    })
}

pub fn pbw_verdict(a: &DegreewiseAlgebra) -> Result<PbwVerdict> {
    pbw_verdict_from(&associated_graded(a)?)
}

/// Leading monomials of the subspaces spanned by `basis[n]` inside `A_n`.
fn ideal_leading_monomials(
    a: &DegreewiseAlgebra,
    g: &MonomialTruncation,
    basis: &[Vec<Vec<u32>>],
) -> Result<Vec<HashSet<Monomial>>> {
    let f = a.field();
    let mut out = Vec::new();
    for (n, vectors) in basis.iter().enumerate() {
        let surv = g.surviving(n);
        let mut pbw = RowBasis::new(f, a.dim(n));
        for m in surv {
            pbw.insert(a.monomial_value(m)?);
        }
        // coordinates in the PBW basis, largest survivor first
        let mut lead = RowBasis::new(f, surv.len());
        for v in vectors {
            let mut c = pbw
                .solve(v)
                .ok_or_else(|| Error::Internal("survivors do not span".into()))?;
            c.reverse();
            lead.insert(c);
        }
        let k = surv.len();
        out.push(lead.pivots().map(|p| surv[k - 1 - p].clone()).collect());
    }
    Ok(out)
}

/// Spanning vectors of `(c)_n = c * A_{n-1}` for each `n`.
fn ideal_layers(a: &DegreewiseAlgebra, c_rank: usize) -> Result<Vec<Vec<Vec<u32>>>> {
    let c = a.generator(c_rank);
    let mut basis = vec![Vec::new()];
    for n in 1..=a.n_max() {
        let layer: Vec<Vec<u32>> = (0..a.dim(n - 1))
            .map(|b| {
                let mut e = vec![0u32; a.dim(n - 1)];
                e[b] = 1;
                a.element_product(1, &c, n - 1, &e)
            })
            .collect::<Result<_>>()?;
        basis.push(layer);
    }
    Ok(basis)
}

/// Whether `gr (c)` is generated by the class of the generator `c`, i.e. the
/// leading monomials of `(c)_n` are exactly the survivors `c * s`.
pub fn ideal_graded_generated_by(
    a: &DegreewiseAlgebra,
    g: &MonomialTruncation,
    c_rank: usize,
) -> Result<Check> {
    let leads = ideal_leading_monomials(a, g, &ideal_layers(a, c_rank)?)?;
    let x = Monomial::generator(c_rank);
    let mut witnesses = Vec::new();
    for n in 1..=a.n_max() {
        let expected: HashSet<Monomial> = g
            .surviving(n - 1)
            .iter()
            .filter_map(|s| a.mode().mono_product(&x, s).map(|(p, _)| p))
            .filter(|p| g.survives(p))
            .collect();
        let mut diff: Vec<Monomial> = leads[n].symmetric_difference(&expected).cloned().collect();
        diff.sort();
        witnesses.extend(diff);
    }
    let ok = witnesses.is_empty();
    witnesses.truncate(WITNESS_CAP);
    Ok(Check { ok, witnesses })
}

/// `gr M` for the ideal `(c)` as a module over `gr A`: spanned by the leading
/// monomials, with a generator acting by multiplication when the product is
/// again a leading monomial.
pub fn graded_ideal_module(
    a: &DegreewiseAlgebra,
    g: &MonomialTruncation,
    gr_a: &DegreewiseAlgebra,
    c_rank: usize,
) -> Result<ModuleTruncation> {
    let leads = ideal_leading_monomials(a, g, &ideal_layers(a, c_rank)?)?;
    let mut sets: Vec<Vec<Monomial>> = leads
        .into_iter()
        .map(|s| {
            let mut v: Vec<Monomial> = s.into_iter().collect();
            v.sort();
            v
        })
        .collect();
    sets[0].clear();
    let f = a.field();
    let mode = a.mode();
    let mut dims = vec![0usize];
    dims.extend(sets.iter().skip(1).map(Vec::len));
    let mut action = Vec::new();
    for n in 0..a.n_max() {
        let mut per_gen = Vec::new();
        for gen in 0..a.n_gens() {
            let x = Monomial::generator(gen);
            let cols = sets[n]
                .iter()
                .map(|m| {
                    let mut col = vec![0u32; sets[n + 1].len()];
                    if let Some((p, odd)) = mode.mono_product(&x, m) {
                        if let Ok(j) = sets[n + 1].binary_search(&p) {
                            col[j] = f.sign(odd);
                        }
                    }
                    col
                })
                .collect();
            per_gen.push(cols);
        }
        action.push(per_gen);
    }
    crate::algebra::module_from_action(gr_a, dims, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QuadraticPresentation;
    use crate::gf_linalg::PrimeField;

    fn f(l: u32) -> PrimeField {
        PrimeField::new(l).unwrap()
    }

    fn mono(r: &[usize]) -> Monomial {
        Monomial::from_ranks(r)
    }

    fn ext(l: u32, n: usize, n_max: usize) -> DegreewiseAlgebra {
        QuadraticPresentation::exterior(f(l), GeneratorOrder::standard(n))
            .degreewise_expand(n_max)
            .unwrap()
    }

    fn triangle_truncation() -> MonomialTruncation {
        MonomialTruncation::new(
            GeneratorOrder::standard(3),
            SymmetryMode::Supercommutative,
            vec![
                vec![Monomial::one()],
                (0..3).map(Monomial::generator).collect(),
                vec![mono(&[0, 1]), mono(&[0, 2]), mono(&[1, 2])],
                vec![],
            ],
        )
    }

    #[test]
    fn survivors_of_exterior() {
        let a = ext(3, 2, 3);
        assert_eq!(surviving_monomials(&a, 2).unwrap(), vec![mono(&[0, 1])]);
        assert!(surviving_monomials(&a, 3).unwrap().is_empty());
        let g = associated_graded(&ext(2, 4, 4)).unwrap();
        assert_eq!(g.surviving(2).len(), 6);
        assert_eq!(g.surviving(4), &[mono(&[0, 1, 2, 3])]);
    }

    #[test]
    fn polynomial_powers_survive() {
        let a = QuadraticPresentation::polynomial(f(5), GeneratorOrder::standard(1))
            .degreewise_expand(5)
            .unwrap();
        let g = associated_graded(&a).unwrap();
        for n in 0..=5 {
            assert_eq!(g.surviving(n), &[mono(&vec![0; n])]);
        }
    }

    #[test]
    fn generation_check() {
        assert!(check_generated_degree1(&associated_graded(&ext(3, 3, 3)).unwrap()).ok);
        // strip x1 from degree 1 while keeping x0x1
        let stripped = MonomialTruncation::new(
            GeneratorOrder::standard(2),
            SymmetryMode::Supercommutative,
            vec![vec![Monomial::one()], vec![mono(&[0])], vec![]],
        );
        assert!(check_generated_degree1(&stripped).ok);
        let bad = MonomialTruncation::new(
            GeneratorOrder::standard(3),
            SymmetryMode::Supercommutative,
            vec![
                vec![Monomial::one()],
                vec![mono(&[0]), mono(&[1]), mono(&[2])],
                vec![],
                vec![mono(&[0, 1, 2])],
            ],
        );
        let c = check_generated_degree1(&bad);
        assert!(!c.ok);
        assert_eq!(c.witnesses, vec![mono(&[0, 1, 2])]);
    }

    #[test]
    fn triangle_fails_quadratic_check() {
        let c = check_quadratic_through3(&triangle_truncation()).unwrap();
        assert!(!c.ok);
        assert_eq!(c.witnesses, vec![mono(&[0, 1, 2])]);
        let v = pbw_verdict_from(&triangle_truncation()).unwrap();
        assert!(!v.koszul && v.generated_in_degree_1 && !v.quadratic_through_3);
        assert!(pbw_verdict(&ext(5, 3, 4)).unwrap().koszul);
    }

    #[test]
    fn gr_of_monomial_algebra_is_itself() {
        let t = triangle_truncation();
        let a = t.to_algebra(f(3)).unwrap();
        assert_eq!(associated_graded(&a).unwrap(), t);
    }

    #[test]
    fn order_change_keeps_counts() {
        // x0^2 = x0 x1 in a commutative algebra over F_3 on three generators
        let order = GeneratorOrder::standard(3);
        let p = QuadraticPresentation::new(
            f(3),
            SymmetryMode::Commutative,
            order.clone(),
            vec![
                vec![(mono(&[0, 0]), 1), (mono(&[0, 1]), -1)],
                vec![(mono(&[1, 2]), 1), (mono(&[2, 2]), 1)],
            ],
        )
        .unwrap();
        let a = p.degreewise_expand(4).unwrap();
        let base: Vec<usize> = associated_graded(&a)
            .unwrap()
            .all_surviving()
            .iter()
            .map(Vec::len)
            .collect();
        for perm in [[1, 0, 2], [2, 1, 0], [1, 2, 0]] {
            let o = order.permuted(&perm);
            let rels = p
                .relations()
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|(m, c)| {
                            let ranks: Vec<usize> = m
                                .ranks()
                                .iter()
                                .map(|&i| perm.iter().position(|&q| q == i).unwrap())
                                .collect();
                            (Monomial::from_ranks(&ranks), *c as i64)
                        })
                        .collect()
                })
                .collect();
            let q = QuadraticPresentation::new(f(3), SymmetryMode::Commutative, o, rels).unwrap();
            let counts: Vec<usize> = associated_graded(&q.degreewise_expand(4).unwrap())
                .unwrap()
                .all_surviving()
                .iter()
                .map(Vec::len)
                .collect();
            assert_eq!(counts, base);
        }
    }

    #[test]
    fn ideal_of_minimal_generator_in_exterior() {
        let a = ext(3, 3, 3);
        let g = associated_graded(&a).unwrap();
        assert!(ideal_graded_generated_by(&a, &g, 0).unwrap().ok);
        let gr = g.to_algebra(f(3)).unwrap();
        let m = graded_ideal_module(&a, &g, &gr, 0).unwrap();
        assert_eq!(m.dims(), &[0, 1, 2, 1]);
    }
}
