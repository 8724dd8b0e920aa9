//! `Tor` over a graded algebra by the normalized bar complex, plus the Koszul
//! complex shortcut for modules over a free exterior algebra.
//!
//! In internal degree `j` the bar complex with coefficients in `M` is
//! `B_i(j) = sum over compositions of A_{c_1} (x) ... (x) A_{c_i} (x) M_m`,
//! `c_k >= 1`, `c_1 + ... + c_i + m = j`, with differential
//! `sum_{k=1}^{i-1} (-1)^k (merge factors k, k+1) + (-1)^i (a_i acting on m)`.
//! The algebra case uses the trivial module `M = F_l` in degree 0.

use std::collections::HashMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{DegreewiseAlgebra, ModuleTruncation};
use crate::error::{Error, Result};
use crate::gf_linalg::{PrimeField, SparseMatrix, SparseVec};
use crate::monomials::mono_enumerate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TorKind {
    Algebra,
    Module,
}

/// How to compute `Tor` of a module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorMethod {
    /// Normalized bar complex.
    Bar,
    /// `Gamma(V) (x) M` with the Koszul differential; valid only over a free exterior algebra.
    KoszulComplex,
    /// Koszul complex over a free exterior algebra, bar complex otherwise.
    Auto,
}

/// `dims[i][j] = dim H_{i,j}` for `0 <= i <= i_max`, `0 <= j <= j_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorTable {
    pub kind: TorKind,
    pub i_max: usize,
    pub j_max: usize,
    pub dims: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulVerdict {
    pub koszul_through_bound: bool,
    /// `(i, j, dim)` for nonzero entries off the expected strand.
    pub offenders: Vec<(usize, usize, usize)>,
}

impl TorTable {
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.dims.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("table serializes")
    }

    /// Rows `i`, columns `j`, right-aligned.
    pub fn to_text(&self) -> String {
        let width = self
            .dims
            .iter()
            .flatten()
            .map(|d| d.to_string().len())
            .chain([self.j_max.to_string().len(), 1])
            .max()
            .unwrap_or(1);
        let mut s = String::new();
        let _ = write!(s, "{:>4}", "i\\j");
        for j in 0..=self.j_max {
            let _ = write!(s, " {:>width$}", j);
        }
        s.push('\n');
        for (i, row) in self.dims.iter().enumerate() {
            let _ = write!(s, "{:>4}", i);
            for d in row {
                let _ = write!(s, " {:>width$}", d);
            }
            s.push('\n');
        }
        s
    }
}

/// Off-diagonal entries (algebra) or entries off `j = i + 1` (module).
pub fn koszul_scan(t: &TorTable) -> KoszulVerdict {
    let mut offenders = Vec::new();
    for (i, row) in t.dims.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            let on_strand = match t.kind {
                TorKind::Algebra => i == j,
                TorKind::Module => i + 1 == j,
            };
            if d != 0 && !on_strand {
                offenders.push((i, j, d));
            }
        }
    }
    KoszulVerdict {
        koszul_through_bound: offenders.is_empty(),
        offenders,
    }
}

/// Coefficient data for the bar complex: degrees of `M`, and basis elements of
/// `A_k` acting on basis elements of `M_m`.
struct Coefficients {
    dims: Vec<usize>,
    act: HashMap<(usize, usize), Vec<Vec<SparseVec>>>,
}

struct BarData {
    field: PrimeField,
    adims: Vec<usize>,
    mult: HashMap<(usize, usize), Vec<Vec<SparseVec>>>,
    coeff: Coefficients,
}

/// One summand of `B_i(j)`: the composition and the module degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct BlockKey {
    parts: Vec<usize>,
    m: usize,
}

struct Layer {
    keys: Vec<BlockKey>,
    offsets: HashMap<BlockKey, usize>,
    total: usize,
}

impl BarData {
    fn block_dims(&self, key: &BlockKey) -> Vec<usize> {
        let mut d: Vec<usize> = key.parts.iter().map(|&c| self.adims[c]).collect();
        d.push(self.coeff.dims[key.m]);
        d
    }

    fn layer(&self, i: usize, j: usize) -> Layer {
        let mut keys = Vec::new();
        let mut parts = Vec::new();
        self.compositions(i, j, &mut parts, &mut keys);
        let mut offsets = HashMap::new();
        let mut total = 0;
        let mut kept = Vec::new();
        for k in keys {
            let size: usize = self.block_dims(&k).iter().product();
            if size == 0 {
                continue;
            }
            offsets.insert(k.clone(), total);
            total += size;
            kept.push(k);
        }
        Layer {
            keys: kept,
            offsets,
            total,
        }
    }

    fn compositions(&self, i: usize, left: usize, parts: &mut Vec<usize>, out: &mut Vec<BlockKey>) {
        if parts.len() == i {
            if left < self.coeff.dims.len() {
                out.push(BlockKey {
                    parts: parts.clone(),
                    m: left,
                });
            }
            return;
        }
        for c in 1..=left {
            if c >= self.adims.len() {
                break;
            }
            parts.push(c);
            self.compositions(i, left - c, parts, out);
            parts.pop();
        }
    }

    /// Differential `B_i(j) -> B_{i-1}(j)` as a sparse matrix.
    fn differential(&self, src: &Layer, dst: &Layer, i: usize) -> SparseMatrix {
        let f = self.field;
        let mut columns: Vec<SparseVec> = Vec::with_capacity(src.total);
        let mut acc: Vec<(u32, u32)> = Vec::new();
        for key in &src.keys {
            let dims = self.block_dims(key);
            let size: usize = dims.iter().product();
            let mut idx = vec![0usize; dims.len()];
            for _ in 0..size {
                acc.clear();
                // merges of adjacent algebra factors
                for k in 1..i {
                    let (p, q) = (key.parts[k - 1], key.parts[k]);
                    let Some(table) = self.mult.get(&(p, q)) else {
                        continue;
                    };
                    let prod = &table[idx[k - 1]][idx[k]];
                    if prod.is_empty() {
                        continue;
                    }
                    let mut parts = key.parts.clone();
                    parts[k - 1] = p + q;
                    parts.remove(k);
                    let tkey = BlockKey { parts, m: key.m };
                    let Some(&off) = dst.offsets.get(&tkey) else {
                        continue;
                    };
                    let tdims = self.block_dims(&tkey);
                    let sign = f.sign(k % 2 == 1);
                    for &(r, v) in prod {
                        let mut t = idx.clone();
                        t[k - 1] = r as usize;
                        t.remove(k);
                        acc.push(((off + flat(&t, &tdims)) as u32, f.mul(sign, v)));
                    }
                }
                // last algebra factor acting on the coefficient
                if i >= 1 {
                    let p = key.parts[i - 1];
                    if let Some(table) = self.coeff.act.get(&(p, key.m)) {
                        let prod = &table[idx[i - 1]][idx[i]];
                        let mut parts = key.parts.clone();
                        parts.pop();
                        let tkey = BlockKey { parts, m: key.m + p };
                        if let Some(&off) = dst.offsets.get(&tkey) {
                            let tdims = self.block_dims(&tkey);
                            let sign = f.sign(i % 2 == 1);
                            for &(r, v) in prod {
                                let mut t = idx[..i - 1].to_vec();
                                t.push(r as usize);
                                acc.push(((off + flat(&t, &tdims)) as u32, f.mul(sign, v)));
                            }
                        }
                    }
                }
                columns.push(normalize(f, &mut acc));
                advance(&mut idx, &dims);
            }
        }
        SparseMatrix::from_columns(f, dst.total, columns)
    }
}

fn flat(idx: &[usize], dims: &[usize]) -> usize {
    idx.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

fn advance(idx: &mut [usize], dims: &[usize]) {
    for t in (0..idx.len()).rev() {
        idx[t] += 1;
        if idx[t] < dims[t] {
            return;
        }
        idx[t] = 0;
    }
}

fn normalize(f: PrimeField, acc: &mut [(u32, u32)]) -> SparseVec {
    acc.sort_unstable_by_key(|e| e.0);
    let mut out: SparseVec = Vec::with_capacity(acc.len());
    for &(r, v) in acc.iter() {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 = f.add(last.1, v),
            _ => out.push((r, v)),
        }
        if out.last().is_some_and(|e| e.1 == 0) {
            out.pop();
        }
    }
    out
}

fn check_bounds(n_max: usize, j_max: usize) -> Result<()> {
    if j_max > n_max {
        return Err(Error::DegreeOverflow {
            requested: j_max,
            n_max,
        });
    }
    Ok(())
}

fn bar_table(data: &BarData, kind: TorKind, i_max: usize, j_max: usize, verify: bool) -> Result<TorTable> {
    let columns: Vec<Result<Vec<usize>>> = (0..=j_max)
        .into_par_iter()
        .map(|j| {
            // layers 0 ..= i_max + 1, each B_i(j)
            let top = (i_max + 1).min(j + 1);
            let layers: Vec<Layer> = (0..=top).map(|i| data.layer(i, j)).collect();
            let mut ranks = vec![0usize; top + 2];
            let mut prev: Option<SparseMatrix> = None;
            for i in 1..=top {
                let d = data.differential(&layers[i], &layers[i - 1], i);
                if verify {
                    if let Some(p) = &prev {
                        // p = d_{i-1}
                        if !p.mul(&d)?.is_zero() {
                            return Err(Error::Internal(format!(
                                "bar differential squares to nonzero at ({i}, {j})"
                            )));
                        }
                    }
                }
                ranks[i] = d.rank();
                prev = Some(d);
            }
            Ok((0..=i_max)
                .map(|i| {
                    if i > top {
                        0
                    } else {
                        layers[i].total - ranks[i] - ranks[i + 1]
                    }
                })
                .collect())
        })
        .collect();
    let cols = columns.into_iter().collect::<Result<Vec<_>>>()?;
    let dims = (0..=i_max).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    Ok(TorTable {
        kind,
        i_max,
        j_max,
        dims,
    })
}

fn mult_tables(a: &DegreewiseAlgebra, j_max: usize) -> HashMap<(usize, usize), Vec<Vec<SparseVec>>> {
    let mut mult = HashMap::new();
    for p in 1..j_max {
        for q in 1..=j_max - p {
            mult.insert((p, q), a.mult_table(p, q));
        }
    }
    mult
}

/// `H_{i,j}(A) = Tor^A_{i,j}(k, k)`.
pub fn bar_tor_algebra(a: &DegreewiseAlgebra, i_max: usize, j_max: usize) -> Result<TorTable> {
    bar_tor_algebra_opts(a, i_max, j_max, true)
}

pub fn bar_tor_algebra_opts(
    a: &DegreewiseAlgebra,
    i_max: usize,
    j_max: usize,
    verify_d2: bool,
) -> Result<TorTable> {
    check_bounds(a.n_max(), j_max)?;
    let data = BarData {
        field: a.field(),
        adims: a.dims()[..=j_max].to_vec(),
        mult: mult_tables(a, j_max),
        coeff: Coefficients {
            dims: vec![1],
            act: HashMap::new(),
        },
    };
    bar_table(&data, TorKind::Algebra, i_max, j_max, verify_d2)
}

/// `H_{i,j}(A, M) = Tor^A_{i,j}(k, M)` by the bar complex.
pub fn bar_tor_module(
    a: &DegreewiseAlgebra,
    m: &ModuleTruncation,
    i_max: usize,
    j_max: usize,
) -> Result<TorTable> {
    bar_tor_module_opts(a, m, i_max, j_max, true)
}

pub fn bar_tor_module_opts(
    a: &DegreewiseAlgebra,
    m: &ModuleTruncation,
    i_max: usize,
    j_max: usize,
    verify_d2: bool,
) -> Result<TorTable> {
    check_bounds(a.n_max().min(m.n_max()), j_max)?;
    if a.n_gens() != m.n_gens() {
        return Err(Error::GeneratorMismatch);
    }
    let mut act = HashMap::new();
    for p in 1..=j_max {
        for q in 1..=j_max - p {
            act.insert((p, q), m.action_table(a, p, q));
        }
    }
    let data = BarData {
        field: a.field(),
        adims: a.dims()[..=j_max].to_vec(),
        mult: mult_tables(a, j_max),
        coeff: Coefficients {
            dims: m.dims()[..=j_max].to_vec(),
            act,
        },
    };
    bar_table(&data, TorKind::Module, i_max, j_max, verify_d2)
}

/// `Tor` of a module over the free exterior algebra on `V` from the complex
/// `Gamma^i(V) (x) M_{j-i}`, `d(g_e (x) m) = sum_{e_g > 0} g_{e - e_g} (x) x_g m`.
pub fn koszul_complex_tor_module(
    a: &DegreewiseAlgebra,
    m: &ModuleTruncation,
    i_max: usize,
    j_max: usize,
) -> Result<TorTable> {
    if !a.is_free_exterior() {
        return Err(Error::InvalidAlgebra(
            "the Koszul complex shortcut needs a free exterior algebra".into(),
        ));
    }
    check_bounds(m.n_max(), j_max)?;
    let f = m.field();
    let k = m.n_gens();
    let columns: Vec<Result<Vec<usize>>> = (0..=j_max)
        .into_par_iter()
        .map(|j| {
            let top = (i_max + 1).min(j);
            // divided-power basis: exponent vectors of weight i, as monomials
            let gammas: Vec<Vec<_>> = (0..=top).map(|i| mono_enumerate(k, i, false)).collect();
            let index: Vec<HashMap<_, usize>> = gammas
                .iter()
                .map(|g| g.iter().cloned().enumerate().map(|(x, y)| (y, x)).collect())
                .collect();
            let size = |i: usize| gammas[i].len() * m.dim(j - i);
            let mut ranks = vec![0usize; top + 2];
            let mut prev: Option<SparseMatrix> = None;
            for i in 1..=top {
                let (md, mt) = (j - i, j - i + 1);
                let mut cols = Vec::with_capacity(size(i));
                let mut acc = Vec::new();
                for e in &gammas[i] {
                    for b in 0..m.dim(md) {
                        acc.clear();
                        let mut unit = vec![0u32; m.dim(md)];
                        unit[b] = 1;
                        for &(g, _) in e.factors() {
                            let g = g as usize;
                            let lower = e
                                .quotient(&crate::monomials::Monomial::generator(g))
                                .expect("g divides e");
                            let row = index[i - 1][&lower];
                            let img = m.apply_gen(md, g, &unit);
                            for (r, &v) in img.iter().enumerate() {
                                if v != 0 {
                                    acc.push(((row * m.dim(mt) + r) as u32, v));
                                }
                            }
                        }
                        cols.push(normalize(f, &mut acc));
                    }
                }
                let d = SparseMatrix::from_columns(f, size(i - 1), cols);
                if let Some(p) = &prev {
                    if !p.mul(&d)?.is_zero() {
                        return Err(Error::Internal(format!(
                            "Koszul differential squares to nonzero at ({i}, {j})"
                        )));
                    }
                }
                ranks[i] = d.rank();
                prev = Some(d);
            }
            Ok((0..=i_max)
                .map(|i| {
                    if i > top {
                        0
                    } else {
                        size(i) - ranks[i] - ranks[i + 1]
                    }
                })
                .collect())
        })
        .collect();
    let cols = columns.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(TorTable {
        kind: TorKind::Module,
        i_max,
        j_max,
        dims: (0..=i_max).map(|i| cols.iter().map(|c| c[i]).collect()).collect(),
    })
}

/// Module `Tor` with the chosen method.
pub fn tor_module(
    a: &DegreewiseAlgebra,
    m: &ModuleTruncation,
    i_max: usize,
    j_max: usize,
    method: TorMethod,
) -> Result<TorTable> {
    match method {
        TorMethod::Bar => bar_tor_module(a, m, i_max, j_max),
        TorMethod::KoszulComplex => koszul_complex_tor_module(a, m, i_max, j_max),
        TorMethod::Auto if a.is_free_exterior() => koszul_complex_tor_module(a, m, i_max, j_max),
        TorMethod::Auto => bar_tor_module(a, m, i_max, j_max),
    }
}
