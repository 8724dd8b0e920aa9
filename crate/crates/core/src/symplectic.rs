//! Bilinear and symplectic spaces over `F_l`, Lagrangian subspaces, and
//! transversal Lagrangians in an orthogonal sum of symplectic spaces.
//!
//! Pairings valued in the `l`-th roots of unity are written additively in `F_l`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf_linalg::{kernel_basis_dense, rank_of, PrimeField, RowBasis};

/// `F_l^dim` with the pairing `(u, v) = u^T G v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearSpace {
    field: PrimeField,
    gram: Vec<Vec<u32>>,
    symplectic: bool,
    /// Orthogonal blocks of basis indices, in order.
    summands: Vec<Vec<usize>>,
}

/// A subspace given by independent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn new(field: PrimeField, dim: usize, vectors: Vec<Vec<u32>>) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: vectors.iter().map(Vec::len).find(|&n| n != dim).unwrap_or(0),
            });
        }
        if rank_of(field, dim, &vectors) != vectors.len() {
            return Err(Error::InvalidForm("subspace vectors are dependent".into()));
        }
        Ok(Self { basis: vectors })
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, field: PrimeField, v: &[u32]) -> bool {
        let mut b = RowBasis::new(field, v.len());
        for u in &self.basis {
            b.insert(u.clone());
        }
        b.contains(v)
    }
}

impl BilinearSpace {
    pub fn new(
        field: PrimeField,
        gram: Vec<Vec<u32>>,
        symplectic: bool,
        summands: Option<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidForm("Gram matrix is not square".into()));
        }
        let gram: Vec<Vec<u32>> = gram
            .into_iter()
            .map(|r| r.into_iter().map(|x| x % field.modulus()).collect())
            .collect();
        if symplectic {
            for i in 0..n {
                if gram[i][i] != 0 {
                    return Err(Error::InvalidForm(format!("nonzero diagonal entry {i}")));
                }
                for j in 0..n {
                    if field.add(gram[i][j], gram[j][i]) != 0 {
                        return Err(Error::InvalidForm("form is not skew-symmetric".into()));
                    }
                }
            }
        }
        let summands = summands.unwrap_or_else(|| vec![(0..n).collect()]);
        let mut seen = vec![false; n];
        for s in &summands {
            for &i in s {
                if i >= n || seen[i] {
                    return Err(Error::InvalidForm("summands do not partition the basis".into()));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidForm("summands do not cover the basis".into()));
        }
        for (a, sa) in summands.iter().enumerate() {
            for sb in &summands[a + 1..] {
                if sa
                    .iter()
                    .any(|&i| sb.iter().any(|&j| gram[i][j] != 0 || gram[j][i] != 0))
                {
                    return Err(Error::InvalidForm("summands are not orthogonal".into()));
                }
            }
        }
        Ok(Self {
            field,
            gram,
            symplectic,
            summands,
        })
    }

    /// Orthogonal sum of `m` hyperbolic planes with basis `e_1, f_1, e_2, f_2, ...`,
    /// `(e_k, f_k) = 1`; each plane is a summand.
    pub fn hyperbolic(field: PrimeField, m: usize) -> Self {
        let mut gram = vec![vec![0u32; 2 * m]; 2 * m];
        for k in 0..m {
            gram[2 * k][2 * k + 1] = 1;
            gram[2 * k + 1][2 * k] = field.neg(1);
        }
        let summands = (0..m).map(|k| vec![2 * k, 2 * k + 1]).collect();
        Self::new(field, gram, true, Some(summands)).expect("hyperbolic form is valid")
    }

    /// Orthogonal sum; the summands of each part become summands of the result.
    pub fn orthogonal_sum(field: PrimeField, parts: &[BilinearSpace]) -> Result<Self> {
        let n: usize = parts.iter().map(BilinearSpace::dim).sum();
        let mut gram = vec![vec![0u32; n]; n];
        let mut summands = Vec::new();
        let mut off = 0;
        for p in parts {
            for i in 0..p.dim() {
                for j in 0..p.dim() {
                    gram[off + i][off + j] = p.gram[i][j];
                }
            }
            for s in &p.summands {
                summands.push(s.iter().map(|&i| off + i).collect());
            }
            off += p.dim();
        }
        let symplectic = parts.iter().all(|p| p.symplectic);
        Self::new(field, gram, symplectic, Some(summands))
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn dim(&self) -> usize {
        self.gram.len()
    }
    pub fn gram(&self) -> &[Vec<u32>] {
        &self.gram
    }
    pub fn is_symplectic(&self) -> bool {
        self.symplectic
    }
    pub fn summands(&self) -> &[Vec<usize>] {
        &self.summands
    }

    pub fn pair(&self, u: &[u32], v: &[u32]) -> u32 {
        let f = self.field;
        let mut acc = 0u32;
        for (i, &ui) in u.iter().enumerate() {
            if ui == 0 {
                continue;
            }
            acc = f.add(acc, f.mul(ui, f.dot(&self.gram[i], v)));
        }
        acc
    }

    pub fn is_nondegenerate(&self) -> bool {
        rank_of(self.field, self.dim(), &self.gram) == self.dim()
    }

    /// Vectors pairing to zero with every vector of `s` from the left.
    pub fn orthogonal_complement(&self, s: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let f = self.field;
        let n = self.dim();
        // rows u^T G
        let rows: Vec<Vec<u32>> = s
            .iter()
            .map(|u| {
                (0..n)
                    .map(|j| {
                        let mut acc = 0;
                        for (i, &ui) in u.iter().enumerate() {
                            acc = f.add(acc, f.mul(ui, self.gram[i][j]));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        kernel_basis_dense(f, &rows, n)
    }

    /// The summand `k` as a space of its own.
    pub fn summand_space(&self, k: usize) -> Result<BilinearSpace> {
        let idx = &self.summands[k];
        let gram = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.gram[i][j]).collect())
            .collect();
        BilinearSpace::new(self.field, gram, self.symplectic, None)
    }

    /// Splits summand `k` into hyperbolic pairs `(e, f)` with `(e, f) = 1`, as
    /// ambient vectors.
    fn hyperbolic_pairs(&self, k: usize) -> Result<Vec<(Vec<u32>, Vec<u32>)>> {
        let f = self.field;
        let n = self.dim();
        let mut rest: Vec<Vec<u32>> = self.summands[k]
            .iter()
            .map(|&i| {
                let mut v = vec![0u32; n];
                v[i] = 1;
                v
            })
            .collect();
        let mut pairs = Vec::new();
        while let Some(e) = rest.first().cloned() {
            rest.remove(0);
            let Some(pos) = rest.iter().position(|u| self.pair(&e, u) != 0) else {
                return Err(Error::NotSymplectic(k));
            };
            let u = rest.remove(pos);
            let inv = f.inv(self.pair(&e, &u));
            let fv: Vec<u32> = u.iter().map(|&x| f.mul(x, inv)).collect();
            // v - (v,f) e + (v,e) f is orthogonal to both e and f
            rest = rest
                .into_iter()
                .map(|v| {
                    let mut w = v.clone();
                    f.axpy(&mut w, f.neg(self.pair(&v, &fv)), &e);
                    f.axpy(&mut w, self.pair(&v, &e), &fv);
                    w
                })
                .filter(|w| w.iter().any(|&x| x != 0))
                .collect();
            pairs.push((e, fv));
        }
        Ok(pairs)
    }
}

pub fn is_isotropic(w: &BilinearSpace, vectors: &[Vec<u32>]) -> bool {
    vectors.iter().all(|u| vectors.iter().all(|v| w.pair(u, v) == 0))
}

/// Isotropic of half the ambient dimension; always false in odd dimension.
pub fn is_lagrangian(w: &BilinearSpace, s: &Subspace) -> bool {
    w.dim().is_multiple_of(2) && 2 * s.dim() == w.dim() && is_isotropic(w, s.basis())
}

/// Lagrangians `M_v`, one per summand of `w`, whose sum is complementary to `l`.
///
/// Each summand is split into hyperbolic planes; planes are visited in order and
/// each contributes the first of the lines `<e>`, `<f>`, `<e + t f>` that keeps
/// the chosen lines independent of `l`.
pub fn lagrangian_transversal(w: &BilinearSpace, l: &Subspace) -> Result<Vec<Subspace>> {
    let f = w.field();
    for k in 0..w.summands().len() {
        let s = w.summand_space(k)?;
        if !s.is_symplectic() || !s.is_nondegenerate() {
            return Err(Error::NotSymplectic(k));
        }
    }
    if !w.is_symplectic() {
        return Err(Error::NotSymplectic(0));
    }
    if !is_lagrangian(w, l) {
        return Err(Error::NotLagrangian);
    }
    let n = w.dim();
    let mut span = RowBasis::new(f, n);
    for v in l.basis() {
        span.insert(v.clone());
    }
    let mut out = Vec::new();
    for k in 0..w.summands().len() {
        let mut lines = Vec::new();
        for (e, fv) in w.hyperbolic_pairs(k)? {
            let mut candidates = vec![e.clone(), fv.clone()];
            for t in 1..f.modulus() {
                let mut c = e.clone();
                f.axpy(&mut c, t, &fv);
                candidates.push(c);
            }
            let chosen = candidates
                .into_iter()
                .find(|c| !span.contains(c))
                .ok_or_else(|| Error::Internal("no transversal line in a hyperbolic plane".into()))?;
            span.insert(chosen.clone());
            lines.push(chosen);
        }
        out.push(Subspace::new(f, n, lines)?);
    }
    Ok(out)
}

/// A uniformly seeded random Lagrangian of a nondegenerate symplectic space.
pub fn random_lagrangian(w: &BilinearSpace, seed: u64) -> Result<Subspace> {
    if !w.is_symplectic() {
        return Err(Error::NotSymplectic(0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = extend_isotropic(w, Vec::new(), w.dim() / 2, &mut rng)?;
    Subspace::new(w.field(), w.dim(), basis)
}

/// Extends the isotropic family `start` by random vectors of `start^perp` that are
/// isotropic and independent, until it has `target` elements.
pub fn extend_isotropic(
    w: &BilinearSpace,
    start: Vec<Vec<u32>>,
    target: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Vec<u32>>> {
    let f = w.field();
    let mut basis = start;
    let mut attempts = 0usize;
    while basis.len() < target {
        let perp = w.orthogonal_complement(&basis);
        let mut v = vec![0u32; w.dim()];
        for p in &perp {
            let c = rng.gen_range(0..f.modulus());
            f.axpy(&mut v, c, p);
        }
        let mut span = RowBasis::new(f, w.dim());
        for b in &basis {
            span.insert(b.clone());
        }
        if w.pair(&v, &v) == 0 && !span.contains(&v) {
            basis.push(v);
            attempts = 0;
        } else {
            attempts += 1;
            if attempts > 10_000 {
                return Err(Error::InvalidForm("cannot extend the isotropic subspace".into()));
            }
        }
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(l: u32) -> PrimeField {
        PrimeField::new(l).unwrap()
    }

    fn sub(l: u32, vs: Vec<Vec<u32>>) -> Subspace {
        let n = vs[0].len();
        Subspace::new(f(l), n, vs).unwrap()
    }

    #[test]
    fn lagrangian_examples() {
        let h = BilinearSpace::hyperbolic(f(3), 1);
        assert!(is_lagrangian(&h, &sub(3, vec![vec![1, 0]])));
        assert!(!is_lagrangian(&h, &sub(3, vec![vec![1, 0], vec![0, 1]])));
        let h2 = BilinearSpace::hyperbolic(f(2), 2);
        let l = sub(2, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
        assert!(is_lagrangian(&h2, &l));
        let odd = BilinearSpace::new(f(2), vec![vec![1]], false, None).unwrap();
        assert!(!is_lagrangian(&odd, &sub(2, vec![vec![1]])));
    }

    #[test]
    fn transversal_in_one_plane() {
        let h = BilinearSpace::hyperbolic(f(5), 1);
        let m = lagrangian_transversal(&h, &sub(5, vec![vec![1, 0]])).unwrap();
        assert_eq!(m[0].basis(), &[vec![0, 1]]);
    }

    // every choice of one line per plane, checked for transversality by rank
    #[test]
    fn transversal_two_planes_exhaustive() {
        let fl = f(2);
        let h2 = BilinearSpace::hyperbolic(fl, 2);
        let l = sub(2, vec![vec![1, 0, 1, 0], vec![0, 1, 0, 1]]);
        let lines = [[1u32, 0], [0, 1], [1, 1]];
        let mut good = Vec::new();
        for a in lines {
            for b in lines {
                let m1 = vec![a[0], a[1], 0, 0];
                let m2 = vec![0, 0, b[0], b[1]];
                let all = vec![l.basis()[0].clone(), l.basis()[1].clone(), m1, m2];
                if rank_of(fl, 4, &all) == 4 {
                    good.push((a, b));
                }
            }
        }
        let m = lagrangian_transversal(&h2, &l).unwrap();
        let a = [m[0].basis()[0][0], m[0].basis()[0][1]];
        let b = [m[1].basis()[0][2], m[1].basis()[0][3]];
        assert!(good.contains(&(a, b)));
        assert_eq!((a, b), ([1, 0], [0, 1]));
    }

    #[test]
    fn transversal_randomized() {
        for l in [2u32, 3, 5] {
            for seed in 0..30u64 {
                let m = 1 + (seed as usize % 4);
                let w = BilinearSpace::hyperbolic(f(l), m);
                let lag = random_lagrangian(&w, seed).unwrap();
                assert!(is_lagrangian(&w, &lag));
                let ms = lagrangian_transversal(&w, &lag).unwrap();
                let mut all = lag.basis().to_vec();
                for (k, mv) in ms.iter().enumerate() {
                    let wk = w.summand_space(k).unwrap();
                    let local: Vec<Vec<u32>> = mv
                        .basis()
                        .iter()
                        .map(|v| w.summands()[k].iter().map(|&i| v[i]).collect())
                        .collect();
                    assert!(is_lagrangian(&wk, &Subspace::new(f(l), wk.dim(), local).unwrap()));
                    all.extend(mv.basis().iter().cloned());
                }
                assert_eq!(rank_of(f(l), w.dim(), &all), w.dim());
            }
        }
    }

    #[test]
    fn larger_summands_are_split() {
        // one 4-dimensional symplectic summand with a non-standard basis
        let fl = f(3);
        let g = vec![
            vec![0, 1, 1, 0],
            vec![2, 0, 0, 1],
            vec![2, 0, 0, 1],
            vec![0, 2, 2, 0],
        ];
        let w = BilinearSpace::new(fl, g, true, None).unwrap();
        assert!(!w.is_nondegenerate());
        let g = vec![
            vec![0, 1, 1, 0],
            vec![2, 0, 0, 1],
            vec![2, 0, 0, 0],
            vec![0, 2, 0, 0],
        ];
        let w = BilinearSpace::new(fl, g, true, None).unwrap();
        assert!(w.is_nondegenerate());
        let lag = random_lagrangian(&w, 7).unwrap();
        let ms = lagrangian_transversal(&w, &lag).unwrap();
        assert_eq!(ms[0].dim(), 2);
        assert!(is_lagrangian(&w, &ms[0]));
    }

    #[test]
    fn errors() {
        let h = BilinearSpace::hyperbolic(f(3), 2);
        let not_lag = sub(3, vec![vec![1, 0, 0, 0]]);
        assert_eq!(
            lagrangian_transversal(&h, &not_lag).unwrap_err(),
            Error::NotLagrangian
        );
        let sym = BilinearSpace::new(f(2), vec![vec![1, 0], vec![0, 1]], false, None).unwrap();
        assert!(matches!(
            lagrangian_transversal(&sym, &sub(2, vec![vec![1, 1]])),
            Err(Error::NotSymplectic(_))
        ));
        assert!(BilinearSpace::new(f(3), vec![vec![0, 1], vec![1, 0]], true, None).is_err());
    }

    #[test]
    fn random_lagrangian_is_deterministic() {
        let w = BilinearSpace::hyperbolic(f(2), 2);
        for seed in 0..10 {
            let a = random_lagrangian(&w, seed).unwrap();
            assert!(is_lagrangian(&w, &a));
            assert_eq!(a, random_lagrangian(&w, seed).unwrap());
        }
        let h = BilinearSpace::hyperbolic(f(3), 1);
        assert_eq!(random_lagrangian(&h, 4).unwrap().dim(), 1);
    }
}
