//! Quadratic (super)commutative algebras over `F_l`, their degreewise expansion,
//! and graded modules over them.
//!
//! A [`DegreewiseAlgebra`] stores, for each degree `n`, a basis of `A_n` and the
//! left action of every generator `A_n -> A_{n+1}`. Each basis element also
//! carries a word `[g_0, ..., g_{n-1}]` with value `x_{g_0} x_{g_1} ... x_{g_{n-1}}`,
//! so products of basis elements reduce to iterated generator actions.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf_linalg::{rank_of, rref_in_place, PrimeField, RowBasis, SparseVec};
use crate::monomials::{mono_enumerate, GeneratorOrder, Monomial};

/// Truncation degree used when none is given.
pub const DEFAULT_N_MAX: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SymmetryMode {
    #[serde(rename = "comm")]
    Commutative,
    #[serde(rename = "super")]
    Supercommutative,
}

impl SymmetryMode {
    pub fn squarefree(self) -> bool {
        self == SymmetryMode::Supercommutative
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryMode::Commutative => "comm",
            SymmetryMode::Supercommutative => "super",
        }
    }

    /// Product of normal monomials: the normal product and whether the sign is `-1`.
    pub fn mono_product(self, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
        match self {
            SymmetryMode::Commutative => Some((a.mul(b), false)),
            SymmetryMode::Supercommutative => a.super_mul(b),
        }
    }
}

/// A linear combination of monomials.
pub type Relation = Vec<(Monomial, u32)>;

/// Quadratic algebra given by generators and degree-2 relations.
#[derive(Clone, Debug)]
pub struct QuadraticPresentation {
    field: PrimeField,
    mode: SymmetryMode,
    order: GeneratorOrder,
    relations: Vec<Relation>,
}

/// Degree-`n` normal monomials, largest first; this is the column order of all
/// ambient vectors, so the first nonzero entry of a relation is its leading monomial.
#[derive(Clone, Debug)]
pub struct Component {
    columns: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    relations: RowBasis,
}

impl Component {
    pub fn dim(&self) -> usize {
        self.columns.len() - self.relations.rank()
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn position(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// Normal monomials that are not leading monomials of the relation span, ascending.
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        let mut lead = vec![false; self.columns.len()];
        for p in self.relations.pivots() {
            lead[p] = true;
        }
        let mut out: Vec<Monomial> = self
            .columns
            .iter()
            .zip(lead)
            .filter(|(_, l)| !l)
            .map(|(m, _)| m.clone())
            .collect();
        out.reverse();
        out
    }

    /// Canonical representative of `v` modulo the relations.
    pub fn reduce(&self, v: &mut [u32]) {
        self.relations.reduce(v);
    }

    pub fn is_zero_in_quotient(&self, v: &[u32]) -> bool {
        self.relations.contains(v)
    }
}

impl QuadraticPresentation {
    /// Relations are reduced, checked to be quadratic and normal, and brought to
    /// reduced echelon form pivoted on their largest monomial.
    pub fn new(
        field: PrimeField,
        mode: SymmetryMode,
        order: GeneratorOrder,
        relations: Vec<Vec<(Monomial, i64)>>,
    ) -> Result<Self> {
        let cols: Vec<Monomial> = {
            let mut v = mono_enumerate(order.len(), 2, mode.squarefree());
            v.reverse();
            v
        };
        let index: HashMap<&Monomial, usize> = cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for rel in &relations {
            let mut row = vec![0u32; cols.len()];
            for (m, c) in rel {
                if m.degree() != 2 {
                    return Err(Error::NotQuadratic(order.format_monomial(m)));
                }
                let Some(&k) = index.get(m) else {
                    return Err(Error::InvalidAlgebra(format!(
                        "`{}` is not a normal monomial in {} mode",
                        order.format_monomial(m),
                        mode.as_str()
                    )));
                };
                row[k] = field.add(row[k], field.reduce(*c));
            }
            rows.push(row);
        }
        let r = rref_in_place(field, &mut rows, cols.len()).len();
        rows.truncate(r);
        let relations = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|&(_, c)| c != 0)
                    .map(|(k, c)| (cols[k].clone(), c))
                    .collect()
            })
            .collect();
        Ok(Self {
            field,
            mode,
            order,
            relations,
        })
    }

    pub fn exterior(field: PrimeField, order: GeneratorOrder) -> Self {
        Self {
            field,
            mode: SymmetryMode::Supercommutative,
            order,
            relations: Vec::new(),
        }
    }

    pub fn polynomial(field: PrimeField, order: GeneratorOrder) -> Self {
        Self {
            field,
            mode: SymmetryMode::Commutative,
            order,
            relations: Vec::new(),
        }
    }

    /// The algebra generated by `V = F_l^gens` with `x*x = m*x` for all `x in V`,
    /// where `m` is the class of `-1` (coordinates in the generator basis).
    ///
    /// For odd `l` the class of `-1` is trivial and this is the exterior algebra.
    pub fn lambda(field: PrimeField, order: GeneratorOrder, minus_one: &[u32]) -> Result<Self> {
        if minus_one.len() != order.len() {
            return Err(Error::DimensionMismatch {
                expected: order.len(),
                got: minus_one.len(),
            });
        }
        if field.modulus() != 2 || minus_one.iter().all(|&c| c == 0) {
            return Ok(Self::exterior(field, order));
        }
        // over F_2, polarizing x^2 = m x gives xy = yx, so the squares suffice
        let mut rels = Vec::new();
        for i in 0..order.len() {
            let mut r = vec![(Monomial::from_ranks(&[i, i]), 1i64)];
            for (k, &c) in minus_one.iter().enumerate() {
                if c != 0 {
                    r.push((Monomial::from_ranks(&[k, i]), c as i64));
                }
            }
            rels.push(r);
        }
        Self::new(field, SymmetryMode::Commutative, order, rels)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn mode(&self) -> SymmetryMode {
        self.mode
    }
    pub fn order(&self) -> &GeneratorOrder {
        &self.order
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Whether this presents the free exterior algebra on its generators.
    pub fn is_free_exterior(&self) -> bool {
        self.relations.is_empty() && (self.mode == SymmetryMode::Supercommutative)
    }

    /// Degree-`n` part: normal monomials modulo the span of `m * r` over relations `r`
    /// and normal monomials `m` of degree `n - 2`.
    pub fn component(&self, n: usize) -> Component {
        let f = self.field;
        let mut columns = mono_enumerate(self.order.len(), n, self.mode.squarefree());
        columns.reverse();
        let index: HashMap<Monomial, usize> =
            columns.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let mut relations = RowBasis::new(f, columns.len());
        if n >= 2 {
            for m in mono_enumerate(self.order.len(), n - 2, self.mode.squarefree()) {
                for rel in &self.relations {
                    let mut row = vec![0u32; columns.len()];
                    for (t, c) in rel {
                        if let Some((p, odd)) = self.mode.mono_product(&m, t) {
                            let k = index[&p];
                            row[k] = f.add(row[k], f.mul(*c, f.sign(odd)));
                        }
                    }
                    relations.insert(row);
                }
            }
        }
        Component {
            columns,
            index,
            relations,
        }
    }

    /// Expands the presentation through degree `n_max`.
    pub fn degreewise_expand(&self, n_max: usize) -> Result<DegreewiseAlgebra> {
        let comps: Vec<Component> = (0..=n_max + 1).map(|n| self.component(n)).collect();
        let f = self.field;
        let mode = self.mode;
        let mul = |n: usize, g: usize, v: &[u32]| -> Vec<u32> {
            let (src, dst) = (&comps[n], &comps[n + 1]);
            let mut out = vec![0u32; dst.columns.len()];
            let x = Monomial::generator(g);
            for (k, &c) in v.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                if let Some((p, odd)) = mode.mono_product(&x, &src.columns[k]) {
                    let j = dst.index[&p];
                    out[j] = f.add(out[j], f.mul(c, f.sign(odd)));
                }
            }
            dst.reduce(&mut out);
            out
        };
        let exp = expand(f, self.order.len(), 0, vec![vec![1 % f.modulus()]], n_max, mul)?;
        let mut a = DegreewiseAlgebra::from_expansion(f, mode, self.order.clone(), n_max, exp);
        a.free_exterior = self.is_free_exterior();
        if a.dims.get(1).copied().unwrap_or(0) != self.order.len() {
            return Err(Error::Internal(
                "degree-1 part is not spanned freely by generators".into(),
            ));
        }
        Ok(a)
    }
}

/// Basis data produced by [`expand`].
pub(crate) struct Expansion {
    pub dims: Vec<usize>,
    pub words: Vec<Vec<Vec<usize>>>,
    pub action: Vec<Vec<Vec<Vec<u32>>>>,
}

/// Grows a graded space from independent vectors in degree `start` by repeatedly
/// applying generators. `mul(n, g, v)` maps an ambient degree-`n` vector to its
/// product with generator `g` in ambient degree `n + 1`; ambient vectors must be
/// canonical (equal elements have equal vectors).
pub(crate) fn expand(
    field: PrimeField,
    n_gens: usize,
    start: usize,
    start_vectors: Vec<Vec<u32>>,
    n_max: usize,
    mul: impl Fn(usize, usize, &[u32]) -> Vec<u32>,
) -> Result<Expansion> {
    let mut dims = vec![0usize; n_max + 1];
    let mut words: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n_max + 1];
    let mut action: Vec<Vec<Vec<Vec<u32>>>> = vec![vec![Vec::new(); n_gens]; n_max];
    if start > n_max {
        return Ok(Expansion { dims, words, action });
    }
    let amb_len = start_vectors.first().map_or(0, Vec::len);
    if rank_of(field, amb_len, &start_vectors) != start_vectors.len() {
        return Err(Error::Internal("starting vectors are dependent".into()));
    }
    dims[start] = start_vectors.len();
    words[start] = vec![Vec::new(); start_vectors.len()];
    let mut basis = start_vectors;
    for n in start..n_max {
        let images: Vec<Vec<Vec<u32>>> = basis
            .iter()
            .map(|v| (0..n_gens).map(|g| mul(n, g, v)).collect())
            .collect();
        let len = images.first().and_then(|im| im.first()).map_or(0, Vec::len);
        let mut span = RowBasis::new(field, len);
        let mut next = Vec::new();
        let mut next_words = Vec::new();
        for (b, ims) in images.iter().enumerate() {
            for (g, v) in ims.iter().enumerate() {
                if span.insert(v.clone()) {
                    next.push(v.clone());
                    let mut w = vec![g];
                    w.extend_from_slice(&words[n][b]);
                    next_words.push(w);
                }
            }
        }
        for g in 0..n_gens {
            action[n][g] = images
                .iter()
                .map(|ims| {
                    span.solve(&ims[g])
                        .ok_or_else(|| Error::Internal("image outside its own span".into()))
                })
                .collect::<Result<_>>()?;
        }
        dims[n + 1] = next.len();
        words[n + 1] = next_words;
        basis = next;
    }
    Ok(Expansion { dims, words, action })
}

/// A graded algebra through degree `n_max`, generated by `A_1`.
#[derive(Clone, Debug)]
pub struct DegreewiseAlgebra {
    field: PrimeField,
    mode: SymmetryMode,
    order: GeneratorOrder,
    n_max: usize,
    dims: Vec<usize>,
    /// `action[n][g][b]`: coordinates of `x_g * e_b` for basis `e_b` of `A_n`.
    action: Vec<Vec<Vec<Vec<u32>>>>,
    words: Vec<Vec<Vec<usize>>>,
    free_exterior: bool,
}

impl DegreewiseAlgebra {
    pub(crate) fn from_expansion(
        field: PrimeField,
        mode: SymmetryMode,
        order: GeneratorOrder,
        n_max: usize,
        e: Expansion,
    ) -> Self {
        Self {
            field,
            mode,
            order,
            n_max,
            dims: e.dims,
            action: e.action,
            words: e.words,
            free_exterior: false,
        }
    }

    /// Algebra spanned by generator products inside some ambient graded space.
    ///
    /// `unit` is the ambient vector of `1`; `mul(n, g, v)` multiplies an ambient
    /// degree-`n` vector by generator `g`. The result is validated for
    /// (super)commutativity.
    pub fn from_ambient(
        field: PrimeField,
        mode: SymmetryMode,
        order: GeneratorOrder,
        n_max: usize,
        unit: Vec<u32>,
        mul: impl Fn(usize, usize, &[u32]) -> Vec<u32>,
    ) -> Result<Self> {
        let exp = expand(field, order.len(), 0, vec![unit], n_max, mul)?;
        let a = Self::from_expansion(field, mode, order, n_max, exp);
        if n_max >= 1 && a.dims[1] != a.n_gens() {
            return Err(Error::InvalidAlgebra(format!(
                "generators span a space of dimension {} instead of {}",
                a.dims[1],
                a.n_gens()
            )));
        }
        a.validate()?;
        Ok(a)
    }

    /// The monomial algebra whose degree-`n` basis is `survivors[n]`: a product of
    /// surviving monomials is its (signed) product if that survives, else zero.
    pub fn monomial_algebra(
        field: PrimeField,
        mode: SymmetryMode,
        order: GeneratorOrder,
        survivors: &[Vec<Monomial>],
    ) -> Result<Self> {
        let n_max = survivors.len().saturating_sub(1);
        let index: Vec<HashMap<&Monomial, usize>> = survivors
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, m)| (m, i)).collect())
            .collect();
        let mul = |n: usize, g: usize, v: &[u32]| -> Vec<u32> {
            let mut out = vec![0u32; survivors[n + 1].len()];
            let x = Monomial::generator(g);
            for (k, &c) in v.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                if let Some((p, odd)) = mode.mono_product(&x, &survivors[n][k]) {
                    if let Some(&j) = index[n + 1].get(&p) {
                        out[j] = field.add(out[j], field.mul(c, field.sign(odd)));
                    }
                }
            }
            out
        };
        let a = Self::from_ambient(field, mode, order, n_max, vec![1 % field.modulus()], mul)?;
        Ok(a)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn mode(&self) -> SymmetryMode {
        self.mode
    }
    pub fn order(&self) -> &GeneratorOrder {
        &self.order
    }
    pub fn n_max(&self) -> usize {
        self.n_max
    }
    pub fn n_gens(&self) -> usize {
        self.order.len()
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }
    /// Word of generators whose ordered product is basis element `b` of `A_n`.
    pub fn word(&self, n: usize, b: usize) -> &[usize] {
        &self.words[n][b]
    }
    /// Whether this is the free exterior algebra on its generators.
    pub fn is_free_exterior(&self) -> bool {
        self.free_exterior
    }

    /// Marks the algebra as free exterior after checking the dimensions.
    pub fn assert_free_exterior(mut self) -> Result<Self> {
        let k = self.n_gens();
        let binom = |n: usize| -> usize {
            if n > k {
                return 0;
            }
            (0..n).fold(1usize, |acc, i| acc * (k - i) / (i + 1))
        };
        if self.mode != SymmetryMode::Supercommutative || (0..=self.n_max).any(|n| self.dims[n] != binom(n)) {
            return Err(Error::InvalidAlgebra("not a free exterior algebra".into()));
        }
        self.free_exterior = true;
        Ok(self)
    }

    /// Coordinates of `x_g * v` for `v` in `A_n`, `n < n_max`.
    pub fn apply_gen(&self, n: usize, g: usize, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; self.dims[n + 1]];
        for (b, &c) in v.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut out, c, &self.action[n][g][b]);
            }
        }
        out
    }

    pub fn unit(&self) -> Vec<u32> {
        vec![1 % self.field.modulus()]
    }

    pub fn generator(&self, g: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.dims[1]];
        v[g] = 1;
        v
    }

    /// Applies the word `x_{w_0} ... x_{w_{k-1}}` to `v` in `A_n`.
    pub fn apply_word(&self, n: usize, word: &[usize], v: &[u32]) -> Vec<u32> {
        let mut cur = v.to_vec();
        for (step, &g) in word.iter().rev().enumerate() {
            cur = self.apply_gen(n + step, g, &cur);
        }
        cur
    }

    /// Value in `A_{deg m}` of the ordered product of the generators of `m`.
    pub fn monomial_value(&self, m: &Monomial) -> Result<Vec<u32>> {
        let d = m.degree();
        if d > self.n_max {
            return Err(Error::DegreeOverflow {
                requested: d,
                n_max: self.n_max,
            });
        }
        Ok(self.apply_word(0, &m.ranks(), &self.unit()))
    }

    /// Product `u * v` of `u` in `A_n` and `v` in `A_m`.
    pub fn element_product(&self, n: usize, u: &[u32], m: usize, v: &[u32]) -> Result<Vec<u32>> {
        if n + m > self.n_max {
            return Err(Error::DegreeOverflow {
                requested: n + m,
                n_max: self.n_max,
            });
        }
        if u.len() != self.dims[n] || v.len() != self.dims[m] {
            return Err(Error::DimensionMismatch {
                expected: self.dims[n],
                got: u.len(),
            });
        }
        let f = self.field;
        let mut out = vec![0u32; self.dims[n + m]];
        for (b, &c) in u.iter().enumerate() {
            if c != 0 {
                let p = self.apply_word(m, &self.words[n][b], v);
                f.axpy(&mut out, c, &p);
            }
        }
        Ok(out)
    }

    /// `table[b][c]` = product of basis `b` of `A_n` and basis `c` of `A_m`, sparse.
    pub fn mult_table(&self, n: usize, m: usize) -> Vec<Vec<SparseVec>> {
        (0..self.dims[n])
            .map(|b| {
                (0..self.dims[m])
                    .map(|c| {
                        let mut e = vec![0u32; self.dims[m]];
                        e[c] = 1;
                        let p = self.apply_word(m, &self.words[n][b], &e);
                        p.into_iter()
                            .enumerate()
                            .filter(|&(_, x)| x != 0)
                            .map(|(i, x)| (i as u32, x))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks that generator actions (super)commute in every degree, and that
    /// squares of generators vanish in supercommutative mode.
    pub fn validate(&self) -> Result<()> {
        let f = self.field;
        for n in 0..self.n_max.saturating_sub(1) {
            for b in 0..self.dims[n] {
                let mut e = vec![0u32; self.dims[n]];
                e[b] = 1;
                let once: Vec<Vec<u32>> = (0..self.n_gens()).map(|g| self.apply_gen(n, g, &e)).collect();
                for g in 0..self.n_gens() {
                    for h in g..self.n_gens() {
                        let gh = self.apply_gen(n + 1, g, &once[h]);
                        let hg = self.apply_gen(n + 1, h, &once[g]);
                        let ok = match self.mode {
                            SymmetryMode::Commutative => gh == hg,
                            SymmetryMode::Supercommutative => {
                                gh.iter().zip(&hg).all(|(&x, &y)| f.add(x, y) == 0)
                                    && (g != h || gh.iter().all(|&x| x == 0))
                            }
                        };
                        if !ok {
                            return Err(Error::InvalidAlgebra(format!(
                                "generators {} and {} violate the {} symmetry in degree {}",
                                self.order.name(g),
                                self.order.name(h),
                                self.mode.as_str(),
                                n + 2
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A graded module `M_1, ..., M_{n_max}` with the left action of the generators.
#[derive(Clone, Debug)]
pub struct ModuleTruncation {
    field: PrimeField,
    n_gens: usize,
    n_max: usize,
    dims: Vec<usize>,
    action: Vec<Vec<Vec<Vec<u32>>>>,
}

impl ModuleTruncation {
    pub fn field(&self) -> PrimeField {
        self.field
    }
    pub fn n_gens(&self) -> usize {
        self.n_gens
    }
    pub fn n_max(&self) -> usize {
        self.n_max
    }
    /// `dims[n] = dim M_n`; `dims[0] = 0`.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    pub fn apply_gen(&self, n: usize, g: usize, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; self.dims[n + 1]];
        for (b, &c) in v.iter().enumerate() {
            if c != 0 {
                f.axpy(&mut out, c, &self.action[n][g][b]);
            }
        }
        out
    }

    pub fn apply_word(&self, n: usize, word: &[usize], v: &[u32]) -> Vec<u32> {
        let mut cur = v.to_vec();
        for (step, &g) in word.iter().rev().enumerate() {
            cur = self.apply_gen(n + step, g, &cur);
        }
        cur
    }

    /// `table[b][c]` = basis `b` of `A_k` acting on basis `c` of `M_m`, sparse.
    pub fn action_table(&self, a: &DegreewiseAlgebra, k: usize, m: usize) -> Vec<Vec<SparseVec>> {
        (0..a.dim(k))
            .map(|b| {
                (0..self.dims[m])
                    .map(|c| {
                        let mut e = vec![0u32; self.dims[m]];
                        e[c] = 1;
                        self.apply_word(m, a.word(k, b), &e)
                            .into_iter()
                            .enumerate()
                            .filter(|&(_, x)| x != 0)
                            .map(|(i, x)| (i as u32, x))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// Checks that every linear relation among degree-2 generator products in `b`
    /// acts as zero on `M`.
    pub fn check_compatible(&self, b: &DegreewiseAlgebra) -> Result<()> {
        if b.n_gens() != self.n_gens {
            return Err(Error::GeneratorMismatch);
        }
        let f = self.field;
        let k = self.n_gens;
        for n in 1..self.n_max.saturating_sub(1) {
            if b.n_max() < 2 || self.dims[n] == 0 {
                continue;
            }
            // row (g,h): [value of x_g x_h in B_2 | action of x_g x_h on each basis of M_n]
            let width_b = b.dim(2);
            let width_m = self.dims[n] * self.dims[n + 2];
            let mut rows_b = Vec::new();
            let mut rows = Vec::new();
            for g in 0..k {
                for h in 0..k {
                    let bv = b.apply_word(0, &[g, h], &b.unit());
                    let mut row = bv.clone();
                    for c in 0..self.dims[n] {
                        let mut e = vec![0u32; self.dims[n]];
                        e[c] = 1;
                        row.extend(self.apply_word(n, &[g, h], &e));
                    }
                    rows_b.push(bv);
                    rows.push(row);
                }
            }
            if rank_of(f, width_b, &rows_b) != rank_of(f, width_b + width_m, &rows) {
                return Err(Error::InvalidModule(format!(
                    "a quadratic relation of the algebra acts nontrivially on degree {n}"
                )));
            }
        }
        Ok(())
    }
}

/// `A_+ = A_1 + A_2 + ...` as a module over `b`, which acts through the
/// generator-preserving surjection `b -> a`.
pub fn augmentation_module(a: &DegreewiseAlgebra, b: &DegreewiseAlgebra) -> Result<ModuleTruncation> {
    if a.order().names() != b.order().names() {
        return Err(Error::GeneratorMismatch);
    }
    let mut dims = a.dims().to_vec();
    dims[0] = 0;
    let mut action = a.action.clone();
    if let Some(first) = action.first_mut() {
        for g in first.iter_mut() {
            g.clear();
        }
    }
    let m = ModuleTruncation {
        field: a.field(),
        n_gens: a.n_gens(),
        n_max: a.n_max(),
        dims,
        action,
    };
    m.check_compatible(b)?;
    Ok(m)
}

/// The ideal `A c` with `M_n = c A_{n-1}`.
pub fn ideal_module(a: &DegreewiseAlgebra, c: &[u32]) -> Result<ModuleTruncation> {
    if c.len() != a.dim(1) {
        return Err(Error::DimensionMismatch {
            expected: a.dim(1),
            got: c.len(),
        });
    }
    if c.iter().all(|&x| x == 0) {
        return Err(Error::ZeroElement);
    }
    // ambient degree n of the module is A_n
    let exp = expand(
        a.field(),
        a.n_gens(),
        1,
        vec![c.to_vec()],
        a.n_max(),
        |n, g, v| a.apply_gen(n, g, v),
    )?;
    Ok(ModuleTruncation {
        field: a.field(),
        n_gens: a.n_gens(),
        n_max: a.n_max(),
        dims: exp.dims,
        action: exp.action,
    })
}

/// A module given directly by dimensions and generator actions (`action[n][g][b]`).
pub fn module_from_action(
    a: &DegreewiseAlgebra,
    dims: Vec<usize>,
    action: Vec<Vec<Vec<Vec<u32>>>>,
) -> Result<ModuleTruncation> {
    let n_max = dims.len().saturating_sub(1);
    if dims.first().copied().unwrap_or(0) != 0 || action.len() != n_max {
        return Err(Error::InvalidModule("bad degree layout".into()));
    }
    for n in 0..n_max {
        if action[n].len() != a.n_gens()
            || action[n]
                .iter()
                .any(|cols| cols.len() != dims[n] || cols.iter().any(|c| c.len() != dims[n + 1]))
        {
            return Err(Error::InvalidModule(format!("action shape wrong in degree {n}")));
        }
    }
    let m = ModuleTruncation {
        field: a.field(),
        n_gens: a.n_gens(),
        n_max,
        dims,
        action,
    };
    m.check_compatible(a)?;
    Ok(m)
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    mono: String,
    coef: i64,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    l: u32,
    mode: SymmetryMode,
    generators: Vec<String>,
    relations: Vec<Vec<TermJson>>,
}

impl QuadraticPresentation {
    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let p: PresentationJson = serde_json::from_value(v)
            .map_err(|e| Error::InvalidAlgebra(format!("presentation JSON: {e}")))?;
        let field = PrimeField::new(p.l)?;
        let order = GeneratorOrder::new(p.generators)?;
        let mut rels = Vec::new();
        for r in p.relations {
            let mut rel = Vec::new();
            for t in r {
                rel.push((order.parse_monomial(&t.mono)?, t.coef));
            }
            rels.push(rel);
        }
        Self::new(field, p.mode, order, rels)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let p = PresentationJson {
            l: self.field.modulus(),
            mode: self.mode,
            generators: self.order.names().to_vec(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|(m, c)| TermJson {
                            mono: self.order.format_monomial(m),
                            coef: *c as i64,
                        })
                        .collect()
                })
                .collect(),
        };
        serde_json::to_value(p).expect("presentation serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(l: u32) -> PrimeField {
        PrimeField::new(l).unwrap()
    }

    fn ext(l: u32, n: usize) -> QuadraticPresentation {
        QuadraticPresentation::exterior(f(l), GeneratorOrder::standard(n))
    }

    #[test]
    fn component_examples() {
        assert_eq!(ext(3, 3).component(2).dim(), 3);
        let poly = QuadraticPresentation::polynomial(f(2), GeneratorOrder::standard(1));
        assert_eq!(poly.component(5).dim(), 1);
    }

    #[test]
    fn lambda_two_generators_by_hand() {
        // x0 = {-1}: relations x0^2 + x0^2 = 0 (vacuous) and x1^2 + x0 x1
        let p = QuadraticPresentation::lambda(f(2), GeneratorOrder::standard(2), &[1, 0]).unwrap();
        assert_eq!(p.relations().len(), 1);
        // brute force: span of the relation in {x0^2, x0x1, x1^2} is one row
        assert_eq!(p.component(2).dim(), 2);
        let a = p.degreewise_expand(4).unwrap();
        assert_eq!(a.dims(), &[1, 2, 2, 2, 2]);
    }

    #[test]
    fn expansion_examples() {
        assert_eq!(ext(2, 2).degreewise_expand(3).unwrap().dims(), &[1, 2, 1, 0]);
        let sym = QuadraticPresentation::polynomial(f(5), GeneratorOrder::standard(1));
        assert_eq!(sym.degreewise_expand(4).unwrap().dims(), &[1, 1, 1, 1, 1]);
        assert_eq!(ext(3, 4).degreewise_expand(4).unwrap().dims(), &[1, 4, 6, 4, 1]);
    }

    #[test]
    fn product_examples() {
        let a = ext(5, 2).degreewise_expand(3).unwrap();
        let x = a.generator(0);
        let y = a.generator(1);
        assert_eq!(a.element_product(1, &x, 0, &a.unit()).unwrap(), x);
        let xy = a.element_product(1, &x, 1, &y).unwrap();
        let yx = a.element_product(1, &y, 1, &x).unwrap();
        assert!(xy.iter().any(|&c| c != 0));
        assert!(xy.iter().zip(&yx).all(|(&p, &q)| (p + q) % 5 == 0));
        assert!(a.element_product(1, &x, 1, &x).unwrap().iter().all(|&c| c == 0));
        assert!(matches!(
            a.element_product(2, &[1], 2, &[1]),
            Err(Error::DegreeOverflow { .. })
        ));
    }

    #[test]
    fn super_mode_kills_squares_over_f2() {
        let a = ext(2, 3).degreewise_expand(3).unwrap();
        for g in 0..3 {
            let x = a.generator(g);
            assert!(a.element_product(1, &x, 1, &x).unwrap().iter().all(|&c| c == 0));
        }
        a.validate().unwrap();
    }

    #[test]
    fn augmentation_examples() {
        let b = ext(3, 3).degreewise_expand(4).unwrap();
        let m = augmentation_module(&b, &b).unwrap();
        assert_eq!(m.dims(), &[0, 3, 3, 1, 0]);
        // exterior modulo everything except x0x1 and x1x2
        let order = GeneratorOrder::standard(3);
        let surv = vec![
            vec![Monomial::one()],
            (0..3).map(Monomial::generator).collect(),
            vec![Monomial::from_ranks(&[0, 1]), Monomial::from_ranks(&[1, 2])],
            vec![],
            vec![],
        ];
        let a =
            DegreewiseAlgebra::monomial_algebra(f(3), SymmetryMode::Supercommutative, order, &surv).unwrap();
        let m = augmentation_module(&a, &b).unwrap();
        assert_eq!(m.dims(), &[0, 3, 2, 0, 0]);
        let other = ext(3, 4).degreewise_expand(4).unwrap();
        assert_eq!(
            augmentation_module(&a, &other).unwrap_err(),
            Error::GeneratorMismatch
        );
    }

    #[test]
    fn augmentation_rejects_incompatible_algebra() {
        // the polynomial ring is not a module over the exterior algebra
        let b = ext(3, 2).degreewise_expand(3).unwrap();
        let a = QuadraticPresentation::polynomial(f(3), GeneratorOrder::standard(2))
            .degreewise_expand(3)
            .unwrap();
        assert!(matches!(
            augmentation_module(&a, &b),
            Err(Error::InvalidModule(_))
        ));
    }

    #[test]
    fn ideal_examples() {
        let a = ext(3, 2).degreewise_expand(2).unwrap();
        let m = ideal_module(&a, &a.generator(0)).unwrap();
        assert_eq!(m.dims(), &[0, 1, 1]);
        assert_eq!(ideal_module(&a, &[0, 0]).unwrap_err(), Error::ZeroElement);
        let p = QuadraticPresentation::polynomial(f(2), GeneratorOrder::standard(2))
            .degreewise_expand(4)
            .unwrap();
        let m = ideal_module(&p, &p.generator(1)).unwrap();
        assert_eq!(m.dims(), &[0, 1, 2, 3, 4]);
        // c * A_1 = 0 in the square-zero quotient
        let q = QuadraticPresentation::new(
            f(2),
            SymmetryMode::Commutative,
            GeneratorOrder::standard(1),
            vec![vec![(Monomial::from_ranks(&[0, 0]), 1)]],
        )
        .unwrap()
        .degreewise_expand(3)
        .unwrap();
        assert_eq!(ideal_module(&q, &[1]).unwrap().dims(), &[0, 1, 0, 0]);
    }

    #[test]
    fn json_round_trip() {
        let v = serde_json::json!({
            "l": 2, "mode": "comm", "generators": ["a", "b"],
            "relations": [[{"mono": "b^2", "coef": 1}, {"mono": "a*b", "coef": 1}]]
        });
        let p = QuadraticPresentation::from_json_value(v).unwrap();
        let q = QuadraticPresentation::from_json_value(p.to_json_value()).unwrap();
        assert_eq!(p.relations(), q.relations());
        let bad = serde_json::json!({"l": 3, "mode": "super", "generators": ["a"],
            "relations": [[{"mono": "a^2", "coef": 1}]]});
        assert!(QuadraticPresentation::from_json_value(bad).is_err());
        let cubic = serde_json::json!({"l": 3, "mode": "comm", "generators": ["a"],
            "relations": [[{"mono": "a^3", "coef": 1}]]});
        assert!(matches!(
            QuadraticPresentation::from_json_value(cubic),
            Err(Error::NotQuadratic(_))
        ));
    }

    fn arb_presentation() -> impl Strategy<Value = QuadraticPresentation> {
        (
            prop::sample::select(vec![2u32, 3, 5]),
            1usize..=4,
            any::<bool>(),
            prop::collection::vec(prop::collection::vec(0i64..5, 10), 0..4),
        )
            .prop_map(|(l, n, sup, raw)| {
                let mode = if sup {
                    SymmetryMode::Supercommutative
                } else {
                    SymmetryMode::Commutative
                };
                let quads = mono_enumerate(n, 2, sup);
                let rels = raw
                    .into_iter()
                    .map(|coefs| quads.iter().cloned().zip(coefs).collect())
                    .collect();
                QuadraticPresentation::new(f(l), mode, GeneratorOrder::standard(n), rels).unwrap()
            })
    }

    // independent count: span of all generator products of length n after reduction
    fn brute_dim(p: &QuadraticPresentation, n: usize) -> usize {
        let comp = p.component(n);
        let fl = p.field();
        let k = p.order().len();
        let mut vecs = Vec::new();
        let total = k.pow(n as u32);
        for mut idx in 0..total {
            let mut word = Vec::new();
            for _ in 0..n {
                word.push(idx % k.max(1));
                idx /= k.max(1);
            }
            let mut m = Monomial::one();
            let mut odd = false;
            let mut zero = false;
            for &g in &word {
                match p.mode().mono_product(&m, &Monomial::generator(g)) {
                    Some((q, s)) => {
                        m = q;
                        odd ^= s;
                    }
                    None => zero = true,
                }
            }
            if zero {
                continue;
            }
            let mut v = vec![0u32; comp.columns().len()];
            v[comp.position(&m).unwrap()] = fl.sign(odd);
            comp.reduce(&mut v);
            vecs.push(v);
        }
        rank_of(fl, comp.columns().len(), &vecs)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn component_dims_match_brute_force(p in arb_presentation()) {
            let a = p.degreewise_expand(4).unwrap();
            for n in 0..=4 {
                prop_assert_eq!(a.dim(n), p.component(n).dim());
                prop_assert_eq!(brute_dim(&p, n), a.dim(n));
                prop_assert_eq!(p.component(n).standard_monomials().len(), a.dim(n));
            }
            a.validate().unwrap();
        }
    }
}
