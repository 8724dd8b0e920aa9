//! Commutative monomials over a finite ordered generator list.
//!
//! Generator `x_i` has rank `i`; the well-ordering is `x_0 < x_1 < ...`.
//! Within a fixed degree, monomials are compared by the inverse lexicographical
//! rule: at the first rank where exponents differ, the monomial with the larger
//! exponent is the smaller one (so `x_0 x_3 < x_1 x_2` and `x_0^2 < x_0 x_1`).

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Ordered list of generator labels; position is the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorOrder {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl GeneratorOrder {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n == "1" || n.contains(['*', '^', ' ']) {
                return Err(Error::MonomialSyntax(n.clone()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateGenerator(n.clone()));
            }
        }
        Ok(Self { names, index })
    }

    /// Generators labelled `x0, x1, ...`.
    pub fn standard(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("x{i}"))).expect("standard labels are valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }
    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn name(&self, rank: usize) -> &str {
        &self.names[rank]
    }
    pub fn rank_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// The same labels reordered: new rank `k` is old rank `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self::new(perm.iter().map(|&i| self.names[i].clone())).expect("permutation of valid labels")
    }

    pub fn parse_monomial(&self, s: &str) -> Result<Monomial> {
        Monomial::parse(s, self)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        m.display(self).to_string()
    }
}

/// A commutative monomial: `(rank, exponent)` pairs, ranks strictly increasing,
/// exponents positive.
///
/// `Ord` compares degree first and then by the inverse-lex
/// rule, so it restricts to [`invlex_compare`] on each degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn generator(rank: usize) -> Self {
        Self {
            factors: vec![(rank as u32, 1)],
        }
    }

    /// From a dense exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Self {
            factors: exps
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i as u32, e))
                .collect(),
        }
    }

    /// Product of the listed generators (repeats allowed).
    pub fn from_ranks(ranks: &[usize]) -> Self {
        let mut m = Self::one();
        for &r in ranks {
            m = m.mul(&Self::generator(r));
        }
        m
    }

    pub fn factors(&self) -> &[(u32, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> usize {
        self.factors.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn exponent(&self, rank: usize) -> u32 {
        self.factors
            .iter()
            .find(|&&(r, _)| r as usize == rank)
            .map_or(0, |&(_, e)| e)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Ranks with multiplicity, ascending.
    pub fn ranks(&self) -> Vec<usize> {
        let mut v = Vec::with_capacity(self.degree());
        for &(r, e) in &self.factors {
            for _ in 0..e {
                v.push(r as usize);
            }
        }
        v
    }

    pub fn max_rank(&self) -> Option<usize> {
        self.factors.last().map(|&(r, _)| r as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i >= a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                out.push((a[i].0, a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
        Monomial { factors: out }
    }

    /// Product in the free supercommutative algebra on odd generators:
    /// `None` if a generator repeats, otherwise the product and whether the sign is `-1`.
    pub fn super_mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        debug_assert!(self.is_squarefree() && other.is_squarefree());
        let mut odd = false;
        let mut i = 0;
        // count pairs (a in self, b in other) with a > b
        for &(b, _) in &other.factors {
            while i < self.factors.len() && self.factors[i].0 < b {
                i += 1;
            }
            if i < self.factors.len() && self.factors[i].0 == b {
                return None;
            }
            if (self.factors.len() - i) % 2 == 1 {
                odd = !odd;
            }
        }
        Some((self.mul(other), odd))
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.factors.iter().all(|&(r, e)| other.exponent(r as usize) >= e)
    }

    /// `self / d`, if `d` divides `self`.
    pub fn quotient(&self, d: &Monomial) -> Option<Monomial> {
        if !d.divides(self) {
            return None;
        }
        let factors = self
            .factors
            .iter()
            .filter_map(|&(r, e)| {
                let k = e - d.exponent(r as usize);
                (k > 0).then_some((r, k))
            })
            .collect();
        Some(Monomial { factors })
    }

    pub fn parse(s: &str, order: &GeneratorOrder) -> Result<Monomial> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::one());
        }
        let mut m = Monomial::one();
        for part in s.split('*') {
            let part = part.trim();
            let (label, exp) = match part.split_once('^') {
                Some((l, e)) => {
                    let e: u32 = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::MonomialSyntax(s.to_string()))?;
                    (l.trim(), e)
                }
                None => (part, 1),
            };
            if label.is_empty() || exp == 0 {
                return Err(Error::MonomialSyntax(s.to_string()));
            }
            let r = order
                .rank_of(label)
                .ok_or_else(|| Error::UnknownGenerator(label.to_string()))?;
            m = m.mul(&Monomial {
                factors: vec![(r as u32, exp)],
            });
        }
        Ok(m)
    }

    pub fn display<'a>(&'a self, order: &'a GeneratorOrder) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, order }
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    order: &'a GeneratorOrder,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.factors.is_empty() {
            return write!(f, "1");
        }
        for (k, &(r, e)) in self.m.factors.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", self.order.name(r as usize))?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

fn invlex_unchecked(a: &Monomial, b: &Monomial) -> Ordering {
    let (fa, fb) = (&a.factors, &b.factors);
    for (x, y) in fa.iter().zip(fb) {
        if x.0 != y.0 {
            // the lower rank is present in one and absent in the other
            return if x.0 < y.0 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
        if x.1 != y.1 {
            return y.1.cmp(&x.1);
        }
    }
    // one is a prefix of the other; the longer one has an extra positive exponent
    fb.len().cmp(&fa.len())
}

/// Inverse-lex comparison of two monomials of the same degree.
pub fn invlex_compare(a: &Monomial, b: &Monomial) -> Result<Ordering> {
    let (da, db) = (a.degree(), b.degree());
    if da != db {
        return Err(Error::DegreeMismatch(da, db));
    }
    Ok(invlex_unchecked(a, b))
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| invlex_unchecked(self, other))
    }
}

pub fn mono_mul(a: &Monomial, b: &Monomial) -> Monomial {
    a.mul(b)
}

/// All degree-`n` monomials in `num_gens` generators, ascending in inverse-lex order.
pub fn mono_enumerate(num_gens: usize, n: usize, squarefree: bool) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; num_gens];
    // larger exponent at the earliest rank comes first
    fn rec(pos: usize, left: u32, sq: bool, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_exponents(exps));
            return;
        }
        if pos == exps.len() {
            return;
        }
        let hi = if sq { left.min(1) } else { left };
        for e in (0..=hi).rev() {
            exps[pos] = e;
            rec(pos + 1, left - e, sq, exps, out);
        }
        exps[pos] = 0;
    }
    rec(0, n as u32, squarefree, &mut exps, &mut out);
    out
}

/// All degree-`d` divisors of `m`, ascending.
pub fn divisors_degree(m: &Monomial, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let f = &m.factors;
    let mut cur: Vec<(u32, u32)> = Vec::new();
    fn rec(f: &[(u32, u32)], left: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial { factors: cur.clone() });
            return;
        }
        let Some((&(r, e), rest)) = f.split_first() else {
            return;
        };
        for k in (0..=e.min(left)).rev() {
            if k > 0 {
                cur.push((r, k));
            }
            rec(rest, left - k, cur, out);
            if k > 0 {
                cur.pop();
            }
        }
    }
    if d <= m.degree() {
        rec(f, d as u32, &mut cur, &mut out);
    }
    out
}
