//! Finite symbol data: local spaces at the exceptional places, divisor and
//! Frobenius tables at the outside places, and the algebra they define.
//!
//! Degree 2 of the algebra is the span of the symbol vectors inside
//! `F_l^{places}`; degree `n >= 3` lives at the real places only.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{DegreewiseAlgebra, QuadraticPresentation, SymmetryMode};
use crate::error::{Error, Result};
use crate::gf_linalg::PrimeField;
use crate::monomials::GeneratorOrder;
use crate::symplectic::{is_lagrangian, BilinearSpace, Subspace};

/// Kinds an outside place may carry.
pub const OUTSIDE_KINDS: &[&str] = &["p", "q_u", "q", "r", "r'", "r''", "p'_u", "p''_u", "q(r)", "v"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Nonarch,
    Real,
    Complex,
}

/// What the datum models: a global field (reciprocity holds), a single local
/// field, or a global field without the root of unity (no reciprocity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Global,
    Local,
    Noroot,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPlace {
    pub name: String,
    pub kind: PlaceKind,
    /// Local symbol `{x, y} = x^T G y` on the unit-class space.
    pub gram: Vec<Vec<u32>>,
    pub has_root: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutsidePlace {
    pub name: String,
    pub kind: String,
    pub has_root: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolGenerator {
    pub label: String,
    /// One vector per exceptional place.
    pub images: Vec<Vec<u32>>,
    /// Divisor coefficient at each outside place.
    pub ord: Vec<u32>,
    /// Frobenius value at each outside place.
    pub frob: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalSymbolDatum {
    pub field: PrimeField,
    pub sqrt_minus1: bool,
    pub variant: Variant,
    pub s_places: Vec<SPlace>,
    pub outside_places: Vec<OutsidePlace>,
    pub generators: Vec<SymbolGenerator>,
    /// Basis of the unit-class subspace inside `W_S` (concatenated coordinates).
    pub lagrangian: Vec<Vec<u32>>,
    /// The class of `-1` in generator coordinates.
    pub minus_one: Vec<u32>,
    /// Rank of the generator `c` whose ideal is studied, if any.
    pub ideal_generator: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReciprocityReport {
    pub ok: bool,
    /// Generator label pairs `(x, y)`, `x` not after `y`, whose symbols do not sum to zero.
    pub offenders: Vec<(String, String)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SPlaceJson {
    name: String,
    kind: PlaceKind,
    gram: Vec<Vec<u32>>,
    has_root: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutsideJson {
    name: String,
    kind: String,
    has_root: bool,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GeneratorJson {
    label: String,
    images: Vec<Vec<u32>>,
    ord: BTreeMap<String, u32>,
    frob: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumJson {
    l: u32,
    sqrt_minus1: bool,
    variant: Variant,
    s_places: Vec<SPlaceJson>,
    outside_places: Vec<OutsideJson>,
    generators: Vec<GeneratorJson>,
    lagrangian: Vec<Vec<u32>>,
    minus_one: Vec<u32>,
    ideal_generator: Option<String>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidDatum(msg.into())
}

impl GlobalSymbolDatum {
    pub fn mode(&self) -> SymmetryMode {
        if self.field.modulus() != 2 || self.sqrt_minus1 {
            SymmetryMode::Supercommutative
        } else {
            SymmetryMode::Commutative
        }
    }

    pub fn n_gens(&self) -> usize {
        self.generators.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    pub fn order(&self) -> Result<GeneratorOrder> {
        GeneratorOrder::new(self.labels())
    }

    pub fn rank_of(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    /// The exterior-type algebra `x * x = {-1} x` on the generators.
    pub fn lambda(&self) -> Result<QuadraticPresentation> {
        QuadraticPresentation::lambda(self.field, self.order()?, &self.minus_one)
    }

    fn place_dims(&self) -> Vec<usize> {
        self.s_places.iter().map(|p| p.gram.len()).collect()
    }

    /// Dimension of `W_S`, the sum of the local unit-class spaces.
    pub fn ws_dim(&self) -> usize {
        self.place_dims().iter().sum()
    }

    /// `W_S` with the orthogonal sum of the local pairings.
    pub fn w_s(&self) -> Result<BilinearSpace> {
        let parts = self
            .s_places
            .iter()
            .map(|p| {
                BilinearSpace::new(
                    self.field,
                    p.gram.clone(),
                    self.mode() == SymmetryMode::Supercommutative,
                    None,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        BilinearSpace::orthogonal_sum(self.field, &parts)
    }

    /// The image in `W_S` of the element with generator coordinates `x`.
    pub fn image(&self, x: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; self.ws_dim()];
        for (g, &c) in self.generators.iter().zip(x) {
            if c == 0 {
                continue;
            }
            let flat: Vec<u32> = g.images.iter().flatten().copied().collect();
            f.axpy(&mut out, c, &flat);
        }
        out
    }

    /// `(u, v)_S` for concatenated vectors of `W_S`.
    pub fn pair_s(&self, u: &[u32], v: &[u32]) -> u32 {
        let f = self.field;
        let mut off = 0;
        let mut s = 0;
        for p in &self.s_places {
            let d = p.gram.len();
            s = f.add(s, local_pair(f, &p.gram, &u[off..off + d], &v[off..off + d]));
            off += d;
        }
        s
    }

    /// Names of the places where symbols live, in coordinate order: exceptional
    /// places with a root of unity and nonzero local space, then outside places
    /// with a root of unity.
    pub fn target_places(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .s_places
            .iter()
            .filter(|p| p.has_root && !p.gram.is_empty())
            .map(|p| p.name.clone())
            .collect();
        out.extend(
            self.outside_places
                .iter()
                .filter(|p| p.has_root)
                .map(|p| p.name.clone()),
        );
        out
    }

    fn real_targets(&self) -> Vec<(usize, usize)> {
        // (index among s_places, index among target coordinates)
        let mut t = 0;
        let mut out = Vec::new();
        for (k, p) in self.s_places.iter().enumerate() {
            if p.has_root && !p.gram.is_empty() {
                if p.kind == PlaceKind::Real {
                    out.push((k, t));
                }
                t += 1;
            }
        }
        out
    }

    /// The symbol vector `{g, h}` of two generators.
    pub fn generator_symbol(&self, g: usize, h: usize) -> Vec<u32> {
        let f = self.field;
        let (x, y) = (&self.generators[g], &self.generators[h]);
        let mut out = Vec::new();
        for (k, p) in self.s_places.iter().enumerate() {
            if p.has_root && !p.gram.is_empty() {
                out.push(local_pair(f, &p.gram, &x.images[k], &y.images[k]));
            }
        }
        for (k, p) in self.outside_places.iter().enumerate() {
            if p.has_root {
                let a = f.mul(x.ord[k], y.frob[k]);
                let b = f.mul(y.ord[k], x.frob[k]);
                out.push(f.sub(a, b));
            }
        }
        out
    }

    /// The symbol vector `{x, y}` for generator-coordinate vectors.
    pub fn symbol(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let f = self.field;
        let mut out = vec![0u32; self.target_places().len()];
        for (g, &a) in x.iter().enumerate() {
            for (h, &b) in y.iter().enumerate() {
                if a != 0 && b != 0 {
                    f.axpy(&mut out, f.mul(a, b), &self.generator_symbol(g, h));
                }
            }
        }
        out
    }
}

fn local_pair(f: PrimeField, gram: &[Vec<u32>], u: &[u32], v: &[u32]) -> u32 {
    let mut s = 0;
    for (i, row) in gram.iter().enumerate() {
        if u[i] == 0 {
            continue;
        }
        s = f.add(s, f.mul(u[i], f.dot(row, v)));
    }
    s
}

impl GlobalSymbolDatum {
    /// Structural checks, the Lagrangian condition for global data, and the
    /// relation `{x, x} = {-1, x}` in commutative mode. Reciprocity is checked
    /// separately by [`validate_reciprocity`].
    pub fn validate(&self) -> Result<()> {
        let f = self.field;
        let l = f.modulus();
        let super_mode = self.mode() == SymmetryMode::Supercommutative;
        let mut names = std::collections::HashSet::new();
        for p in &self.s_places {
            if !names.insert(p.name.as_str()) {
                return Err(invalid(format!("duplicate place `{}`", p.name)));
            }
            let d = p.gram.len();
            if p.gram.iter().any(|r| r.len() != d || r.iter().any(|&x| x >= l)) {
                return Err(invalid(format!("bad Gram matrix at `{}`", p.name)));
            }
            match p.kind {
                PlaceKind::Real => {
                    if l != 2 || d != 1 || p.gram[0][0] != 1 || !p.has_root || self.sqrt_minus1 {
                        return Err(invalid(format!(
                            "real place `{}` needs l = 2, no square root of -1, and the form [[1]]",
                            p.name
                        )));
                    }
                }
                PlaceKind::Complex if d != 0 => {
                    return Err(invalid(format!("complex place `{}` has a nonzero space", p.name)));
                }
                _ => {}
            }
            if p.has_root {
                for i in 0..d {
                    for j in 0..d {
                        let ok = if super_mode {
                            f.add(p.gram[i][j], p.gram[j][i]) == 0 && (i != j || p.gram[i][i] == 0)
                        } else {
                            p.gram[i][j] == p.gram[j][i]
                        };
                        if !ok {
                            return Err(invalid(format!(
                                "local pairing at `{}` has the wrong symmetry for mode {}",
                                p.name,
                                self.mode().as_str()
                            )));
                        }
                    }
                }
            }
        }
        for p in &self.outside_places {
            if !names.insert(p.name.as_str()) {
                return Err(invalid(format!("duplicate place `{}`", p.name)));
            }
            if !OUTSIDE_KINDS.contains(&p.kind.as_str()) {
                return Err(invalid(format!("unknown outside kind `{}`", p.kind)));
            }
        }
        let dims = self.place_dims();
        let n_out = self.outside_places.len();
        for g in &self.generators {
            if g.images.len() != dims.len() || g.images.iter().zip(&dims).any(|(v, &d)| v.len() != d) {
                return Err(invalid(format!(
                    "images of `{}` do not match the local spaces",
                    g.label
                )));
            }
            if g.ord.len() != n_out || g.frob.len() != n_out {
                return Err(invalid(format!(
                    "tables of `{}` do not match the outside places",
                    g.label
                )));
            }
            let entries = g.images.iter().flatten().chain(&g.ord).chain(&g.frob);
            if entries.into_iter().any(|&x| x >= l) {
                return Err(invalid(format!("entry of `{}` is not reduced mod {l}", g.label)));
            }
        }
        self.order()?;
        for (k, p) in self.outside_places.iter().enumerate() {
            let with_ord: Vec<&SymbolGenerator> = self.generators.iter().filter(|g| g.ord[k] != 0).collect();
            if with_ord.len() > 1 || with_ord.iter().any(|g| g.ord[k] != 1) {
                return Err(invalid(format!(
                    "place `{}` must be the divisor of at most one generator, with coefficient 1",
                    p.name
                )));
            }
            if let Some(g) = with_ord.iter().find(|g| g.frob[k] != 0) {
                return Err(invalid(format!(
                    "`{}` has a nonzero frob at its own place `{}`",
                    g.label, p.name
                )));
            }
        }
        if self.minus_one.len() != self.n_gens() || self.minus_one.iter().any(|&x| x >= l) {
            return Err(invalid("minus_one has the wrong length"));
        }
        if super_mode && self.minus_one.iter().any(|&x| x != 0) {
            return Err(invalid("-1 must be trivial when squares vanish"));
        }
        if self.ideal_generator.is_some_and(|c| c >= self.n_gens()) {
            return Err(invalid("ideal generator out of range"));
        }
        let n = self.ws_dim();
        if self.lagrangian.iter().any(|v| v.len() != n) {
            return Err(invalid("lagrangian vectors have the wrong length"));
        }
        if self.variant == Variant::Global {
            let w = self.w_s()?;
            let l_sub = Subspace::new(f, n, self.lagrangian.clone())?;
            if !is_lagrangian(&w, &l_sub) {
                return Err(invalid("the unit-class subspace is not Lagrangian in W_S"));
            }
            for (r, g) in self.generators.iter().enumerate() {
                if g.ord.iter().all(|&x| x == 0) {
                    let mut e = vec![0u32; self.n_gens()];
                    e[r] = 1;
                    if !l_sub.contains(f, &self.image(&e)) {
                        return Err(invalid(format!(
                            "image of the unit `{}` is outside the Lagrangian",
                            g.label
                        )));
                    }
                }
            }
        }
        if !super_mode {
            for g in 0..self.n_gens() {
                let mut e = vec![0u32; self.n_gens()];
                e[g] = 1;
                if self.generator_symbol(g, g) != self.symbol(&self.minus_one, &e) {
                    return Err(invalid(format!(
                        "{{x, x}} != {{-1, x}} for `{}`",
                        self.generators[g].label
                    )));
                }
            }
        }
        Ok(())
    }

    /// Fills in the Frobenius values forced by reciprocity. For a unit `b`,
    /// `frob_P(b) = (b, a_P)_S`; for outside generators `x`, `y` with the place
    /// of `x` earlier, `frob_{P_y}(x) = frob_{P_x}(y) + (x, y)_S`; a generator's
    /// value at its own place is zero. Everything else is left as given.
    pub fn complete_frobenius(&mut self) {
        let f = self.field;
        let n = self.n_gens();
        let owner: Vec<Option<usize>> = (0..self.outside_places.len())
            .map(|k| self.generators.iter().position(|g| g.ord[k] != 0))
            .collect();
        let place_of: Vec<Option<usize>> = self
            .generators
            .iter()
            .map(|g| g.ord.iter().position(|&x| x != 0))
            .collect();
        let images: Vec<Vec<u32>> = (0..n)
            .map(|r| {
                let mut e = vec![0u32; n];
                e[r] = 1;
                self.image(&e)
            })
            .collect();
        for (k, own) in owner.iter().enumerate() {
            let Some(a) = *own else { continue };
            for x in 0..n {
                let v = match place_of[x] {
                    None => self.pair_s(&images[x], &images[a]),
                    Some(px) if px == k => 0,
                    Some(px) if px < k => {
                        let earlier = self.generators[a].frob[px];
                        f.add(earlier, self.pair_s(&images[x], &images[a]))
                    }
                    Some(_) => continue,
                };
                self.generators[x].frob[k] = v;
            }
        }
    }
}

/// Checks that the symbols of every generator pair sum to zero over all places.
/// Data that are not global carry no such law and always pass.
pub fn validate_reciprocity(d: &GlobalSymbolDatum) -> ReciprocityReport {
    let mut offenders = Vec::new();
    if d.variant == Variant::Global {
        let f = d.field;
        for g in 0..d.n_gens() {
            for h in g..d.n_gens() {
                let s = d.generator_symbol(g, h).into_iter().fold(0, |a, x| f.add(a, x));
                if s != 0 {
                    offenders.push((d.generators[g].label.clone(), d.generators[h].label.clone()));
                }
            }
        }
    }
    ReciprocityReport {
        ok: offenders.is_empty(),
        offenders,
    }
}

impl GlobalSymbolDatum {
    pub fn to_json_value(&self) -> serde_json::Value {
        let table = |vals: &[u32]| -> BTreeMap<String, u32> {
            self.outside_places
                .iter()
                .zip(vals)
                .map(|(p, &v)| (p.name.clone(), v))
                .collect()
        };
        let j = DatumJson {
            l: self.field.modulus(),
            sqrt_minus1: self.sqrt_minus1,
            variant: self.variant,
            s_places: self
                .s_places
                .iter()
                .map(|p| SPlaceJson {
                    name: p.name.clone(),
                    kind: p.kind,
                    gram: p.gram.clone(),
                    has_root: p.has_root,
                })
                .collect(),
            outside_places: self
                .outside_places
                .iter()
                .map(|p| OutsideJson {
                    name: p.name.clone(),
                    kind: p.kind.clone(),
                    has_root: p.has_root,
                })
                .collect(),
            generators: self
                .generators
                .iter()
                .map(|g| GeneratorJson {
                    label: g.label.clone(),
                    images: g.images.clone(),
                    ord: table(&g.ord),
                    frob: table(&g.frob),
                })
                .collect(),
            lagrangian: self.lagrangian.clone(),
            minus_one: self.minus_one.clone(),
            ideal_generator: self.ideal_generator.map(|c| self.generators[c].label.clone()),
        };
        serde_json::to_value(j).expect("datum serializes")
    }

    /// Parses and validates (structure only; see [`validate_reciprocity`]).
    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let j: DatumJson = serde_json::from_value(v).map_err(|e| invalid(format!("malformed datum: {e}")))?;
        let field = PrimeField::new(j.l)?;
        let outside_places: Vec<OutsidePlace> = j
            .outside_places
            .into_iter()
            .map(|p| OutsidePlace {
                name: p.name,
                kind: p.kind,
                has_root: p.has_root,
            })
            .collect();
        let read = |label: &str, what: &str, t: &BTreeMap<String, u32>| -> Result<Vec<u32>> {
            if t.len() != outside_places.len() {
                return Err(invalid(format!(
                    "`{label}`: {what} must list every outside place"
                )));
            }
            outside_places
                .iter()
                .map(|p| {
                    t.get(&p.name)
                        .copied()
                        .ok_or_else(|| invalid(format!("`{label}`: {what} misses `{}`", p.name)))
                })
                .collect()
        };
        let generators = j
            .generators
            .iter()
            .map(|g| {
                Ok(SymbolGenerator {
                    label: g.label.clone(),
                    images: g.images.clone(),
                    ord: read(&g.label, "ord", &g.ord)?,
                    frob: read(&g.label, "frob", &g.frob)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let ideal_generator = match &j.ideal_generator {
            None => None,
            Some(c) => Some(
                generators
                    .iter()
                    .position(|g| &g.label == c)
                    .ok_or_else(|| Error::UnknownGenerator(c.clone()))?,
            ),
        };
        let d = Self {
            field,
            sqrt_minus1: j.sqrt_minus1,
            variant: j.variant,
            s_places: j
                .s_places
                .into_iter()
                .map(|p| SPlace {
                    name: p.name,
                    kind: p.kind,
                    gram: p.gram,
                    has_root: p.has_root,
                })
                .collect(),
            outside_places,
            generators,
            lagrangian: j.lagrangian,
            minus_one: j.minus_one,
            ideal_generator,
        };
        d.validate()?;
        Ok(d)
    }
}

/// The algebra generated by the symbols, truncated at degree `n_max`.
///
/// Errors on an invalid datum, including a global datum violating reciprocity.
pub fn datum_to_algebra(d: &GlobalSymbolDatum, n_max: usize) -> Result<DegreewiseAlgebra> {
    d.validate()?;
    let rec = validate_reciprocity(d);
    if !rec.ok {
        let (x, y) = &rec.offenders[0];
        return Err(invalid(format!(
            "reciprocity fails for {} pair(s), first ({x}, {y})",
            rec.offenders.len()
        )));
    }
    let f = d.field;
    let n = d.n_gens();
    let sym: Vec<Vec<Vec<u32>>> = (0..n)
        .map(|g| (0..n).map(|h| d.generator_symbol(g, h)).collect())
        .collect();
    let targets = d.target_places().len();
    let reals = d.real_targets();
    let real_value = |g: usize, k: usize| d.generators[g].images[k][0];
    let mul = |deg: usize, g: usize, v: &[u32]| -> Vec<u32> {
        match deg {
            0 => {
                let mut out = vec![0u32; n];
                out[g] = v[0];
                out
            }
            1 => {
                let mut out = vec![0u32; targets];
                for (h, &c) in v.iter().enumerate() {
                    if c != 0 {
                        f.axpy(&mut out, c, &sym[g][h]);
                    }
                }
                out
            }
            2 => reals
                .iter()
                .map(|&(k, t)| f.mul(v[t], real_value(g, k)))
                .collect(),
            _ => reals
                .iter()
                .enumerate()
                .map(|(i, &(k, _))| f.mul(v[i], real_value(g, k)))
                .collect(),
        }
    };
    DegreewiseAlgebra::from_ambient(f, d.mode(), d.order()?, n_max, vec![1 % f.modulus()], mul)
}

/// Names of the places where the degree-2 ambient vector `e` is nonzero.
pub fn support(d: &GlobalSymbolDatum, e: &[u32]) -> Result<Vec<String>> {
    let names = d.target_places();
    if e.len() != names.len() {
        return Err(Error::DimensionMismatch {
            expected: names.len(),
            got: e.len(),
        });
    }
    Ok(names
        .into_iter()
        .zip(e)
        .filter(|(_, &x)| x != 0)
        .map(|(p, _)| p)
        .collect())
}
