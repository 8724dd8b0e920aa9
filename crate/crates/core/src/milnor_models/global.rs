//! Global symbol data with the generator orders of the Koszulity proofs: the
//! symplectic case (`l` odd or `sqrt(-1)` present), the general case with real
//! places, and the annihilator of one element `c` with `{c, c} = 0`.
//!
//! Chebotarev-type existence statements are replaced by choosing the Frobenius
//! tables directly; reciprocity then fixes the remaining entries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf_linalg::{kernel_basis_dense, rank_of, rref_in_place, PrimeField};
use crate::monomials::Monomial;
use crate::symplectic::{extend_isotropic, lagrangian_transversal, BilinearSpace, Subspace};

use super::datum::{GlobalSymbolDatum, OutsidePlace, PlaceKind, SPlace, SymbolGenerator, Variant};
use super::prediction::{quad, PredictedSurvivors};
use super::Model;

const MAX_ATTEMPTS: usize = 256;

fn params(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}

/// Coefficients `c` with `sum c_k vectors[k] = target`, free variables zero.
pub(crate) fn solve_combination(f: PrimeField, vectors: &[Vec<u32>], target: &[u32]) -> Option<Vec<u32>> {
    let k = vectors.len();
    let mut rows: Vec<Vec<u32>> = (0..target.len())
        .map(|t| {
            let mut r: Vec<u32> = vectors.iter().map(|v| v[t]).collect();
            r.push(target[t]);
            r
        })
        .collect();
    let pivots = rref_in_place(f, &mut rows, k + 1);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut c = vec![0u32; k];
    for (i, &p) in pivots.iter().enumerate() {
        c[p] = rows[i][k];
    }
    Some(c)
}

/// Splits a concatenated `W_S` vector into the local pieces.
fn split(v: &[u32], dims: &[usize]) -> Vec<Vec<u32>> {
    let mut off = 0;
    dims.iter()
        .map(|&d| {
            let piece = v[off..off + d].to_vec();
            off += d;
            piece
        })
        .collect()
}

fn random_vec(f: PrimeField, n: usize, rng: &mut impl Rng) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(0..f.modulus())).collect()
}

fn nonzero(f: PrimeField, rng: &mut impl Rng) -> u32 {
    rng.gen_range(1..f.modulus())
}

/// Generator records under construction: label, `W_S` image, own outside place.
struct Gen {
    label: String,
    image: Vec<u32>,
    place: Option<usize>,
}

/// Assembles the datum; `free(P, y)` gives `frob_P(a_y)` for outside places `P`
/// earlier than the place of the outside generator `y`. Other values follow
/// from reciprocity.
/// Everything but the generators.
struct Skeleton {
    field: PrimeField,
    sqrt_minus1: bool,
    s_places: Vec<SPlace>,
    outside_places: Vec<OutsidePlace>,
    lagrangian: Vec<Vec<u32>>,
    minus_one: Vec<u32>,
    ideal_generator: Option<usize>,
}

fn assemble(
    sk: Skeleton,
    gens: &[Gen],
    mut free: impl FnMut(usize, usize) -> u32,
) -> Result<GlobalSymbolDatum> {
    let Skeleton {
        field,
        sqrt_minus1,
        s_places,
        outside_places,
        lagrangian,
        minus_one,
        ideal_generator,
    } = sk;
    let dims: Vec<usize> = s_places.iter().map(|p| p.gram.len()).collect();
    let n_out = outside_places.len();
    let generators = gens
        .iter()
        .enumerate()
        .map(|(y, g)| {
            let mut ord = vec![0u32; n_out];
            let mut frob = vec![0u32; n_out];
            if let Some(py) = g.place {
                ord[py] = 1;
                for (p, slot) in frob.iter_mut().enumerate().take(py) {
                    *slot = free(p, y);
                }
            }
            SymbolGenerator {
                label: g.label.clone(),
                images: split(&g.image, &dims),
                ord,
                frob,
            }
        })
        .collect();
    let mut d = GlobalSymbolDatum {
        field,
        sqrt_minus1,
        variant: Variant::Global,
        s_places,
        outside_places,
        generators,
        lagrangian,
        minus_one,
        ideal_generator,
    };
    d.complete_frobenius();
    d.validate()?;
    Ok(d)
}

fn outside(name: String, kind: &str) -> OutsidePlace {
    OutsidePlace {
        name,
        kind: kind.into(),
        has_root: true,
    }
}

fn hyperbolic_gram(f: PrimeField) -> Vec<Vec<u32>> {
    vec![vec![0, 1], vec![f.neg(1), 0]]
}

/// The symplectic global model with `num_s` exceptional places, each a
/// hyperbolic plane, and `free_outside` outside places beyond `p_1 .. p_{#S-1}`
/// (split into `q` places, at least one, and `r` places).
///
/// A random Lagrangian `L` plays the units; transversal lines `M_v` give the
/// dual basis `b_i` of `L`, and every outside generator has its image in the sum
/// of the `M_v`. The order is `b_0, a_p.., a_q.., b_1.., a_r..`.
pub fn build_global_symplectic(
    l: u32,
    sqrt_minus1: bool,
    num_s: usize,
    free_outside: usize,
    seed: u64,
) -> Result<Model> {
    let f = PrimeField::new(l)?;
    if l == 2 && !sqrt_minus1 {
        return Err(params("the symplectic case needs l odd or a square root of -1"));
    }
    if num_s < 2 {
        return Err(params("at least two exceptional places are needed"));
    }
    if free_outside == 0 {
        return Err(params("at least one outside place besides the p_i is needed"));
    }
    let n_p = num_s - 1;
    let n_q = free_outside.div_ceil(2);
    let n_r = free_outside - n_q;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = BilinearSpace::hyperbolic(f, num_s);
    let lag = Subspace::new(f, w.dim(), extend_isotropic(&w, Vec::new(), num_s, &mut rng)?)?;
    let lines: Vec<Vec<u32>> = lagrangian_transversal(&w, &lag)?
        .into_iter()
        .map(|m| m.basis()[0].clone())
        .collect();
    // b_i = sum_k X_ik l_k with (b_i, m_j) = delta_ij, so X is the inverse of P_kj = (l_k, m_j)
    let mut aug: Vec<Vec<u32>> = lag
        .basis()
        .iter()
        .enumerate()
        .map(|(k, lk)| {
            let mut row: Vec<u32> = lines.iter().map(|m| w.pair(lk, m)).collect();
            row.extend((0..num_s).map(|j| u32::from(j == k)));
            row
        })
        .collect();
    if rref_in_place(f, &mut aug, num_s).len() != num_s {
        return Err(Error::Internal(
            "transversal lines do not pair perfectly with L".into(),
        ));
    }
    // rows of the reduced right half are the rows of P^{-1}; b_i = sum_k (P^{-1})_{ik} l_k
    let b: Vec<Vec<u32>> = (0..num_s)
        .map(|i| {
            let mut v = vec![0u32; w.dim()];
            for (k, lk) in lag.basis().iter().enumerate() {
                f.axpy(&mut v, aug[i][num_s + k], lk);
            }
            v
        })
        .collect();
    let combo = |coef: &[u32]| {
        let mut v = vec![0u32; w.dim()];
        for (c, m) in coef.iter().zip(&lines) {
            f.axpy(&mut v, *c, m);
        }
        v
    };
    let mut gens = vec![Gen {
        label: "b0".into(),
        image: b[0].clone(),
        place: None,
    }];
    let mut places = Vec::new();
    for i in 1..=n_p {
        let mut phi = vec![0u32; num_s];
        phi[0] = 1;
        phi[i] = 1;
        places.push(outside(format!("p{i}"), "p"));
        gens.push(Gen {
            label: format!("ap{i}"),
            image: combo(&phi),
            place: Some(places.len() - 1),
        });
    }
    for i in 1..=n_q {
        let mut phi = vec![0u32; num_s];
        phi[0] = 1;
        places.push(outside(format!("q{i}"), "q"));
        gens.push(Gen {
            label: format!("aq{i}"),
            image: combo(&phi),
            place: Some(places.len() - 1),
        });
    }
    for (i, bi) in b.iter().enumerate().skip(1) {
        gens.push(Gen {
            label: format!("b{i}"),
            image: bi.clone(),
            place: None,
        });
    }
    for i in 1..=n_r {
        let phi = random_vec(f, num_s, &mut rng);
        places.push(outside(format!("r{i}"), "r"));
        gens.push(Gen {
            label: format!("ar{i}"),
            image: combo(&phi),
            place: Some(places.len() - 1),
        });
    }
    let first_q = n_p;
    let first_r = n_p + n_q;
    let place_of: Vec<Option<usize>> = gens.iter().map(|g| g.place).collect();
    let free = |p: usize, y: usize| -> u32 {
        let py = place_of[y].expect("free values only for outside generators");
        if py < first_r {
            // p_i and q: trivial Frobenius in the extensions by the earlier a_p
            0
        } else if p == first_q {
            nonzero(f, &mut rng)
        } else {
            rng.gen_range(0..l)
        }
    };
    let s_places = (0..num_s)
        .map(|k| SPlace {
            name: format!("s{k}"),
            kind: PlaceKind::Nonarch,
            gram: hyperbolic_gram(f),
            has_root: true,
        })
        .collect();
    let n_gens = gens.len();
    let datum = assemble(
        Skeleton {
            field: f,
            sqrt_minus1,
            s_places,
            outside_places: places,
            lagrangian: lag.basis().to_vec(),
            minus_one: vec![0; n_gens],
            ideal_generator: None,
        },
        &gens,
        free,
    )?;
    // ranks: b0 = 0, a_{p_i} = i, a_q, then b_1.., then a_r
    let ap = |i: usize| i;
    let aq = |i: usize| n_p + 1 + i;
    let bi = |i: usize| n_p + n_q + i;
    let ar = |i: usize| n_p + n_q + num_s + i;
    let mut predicted = PredictedSurvivors::default();
    predicted.all.extend((1..=n_p).map(|i| quad(0, ap(i))));
    predicted.all.extend((0..n_q).map(|i| quad(0, aq(i))));
    for i in 1..=n_p {
        predicted
            .exactly_one
            .push(vec![quad(0, bi(i)), quad(ap(i), bi(i))]);
    }
    for r in 0..n_r {
        let mut g: Vec<Monomial> = vec![quad(0, ar(r))];
        g.extend((1..=n_p).map(|i| quad(ap(i), ar(r))));
        g.extend((0..n_q).map(|i| quad(aq(i), ar(r))));
        predicted.exactly_one.push(g);
    }
    Ok(Model {
        datum,
        predicted,
        ideal_choices: Vec::new(),
    })
}

/// Parameters of the general and annihilator constructions.
///
/// `s_places` counts all exceptional places, `real_places` of them real (only
/// for `l = 2` without `sqrt(-1)`); `free_outside` is the number of `r` places,
/// split into `r'` and `r''`. The places `p` and `q_u` are always added.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeneralParams {
    pub l: u32,
    pub sqrt_minus1: bool,
    pub s_places: usize,
    pub real_places: usize,
    pub free_outside: usize,
    pub seed: u64,
}

/// Local spaces for the general case. For `l = 2` without `sqrt(-1)` the first
/// place has the dot product on `F_2^{2 + #real}` (so that `dim W_S = 2 #S` and
/// `{-1, -1}` sums to zero), the others are hyperbolic planes; real places are
/// `[[1]]`. Otherwise all places are symplectic planes.
fn general_places(f: PrimeField, comm: bool, n_u: usize, n_real: usize) -> Vec<SPlace> {
    let mut out = Vec::new();
    for k in 0..n_u {
        let gram = if !comm {
            hyperbolic_gram(f)
        } else if k == 0 {
            let d = 2 + n_real;
            (0..d)
                .map(|i| (0..d).map(|j| u32::from(i == j)).collect())
                .collect()
        } else {
            vec![vec![0, 1], vec![1, 0]]
        };
        out.push(SPlace {
            name: format!("s{k}"),
            kind: PlaceKind::Nonarch,
            gram,
            has_root: true,
        });
    }
    for v in 0..n_real {
        out.push(SPlace {
            name: format!("real{v}"),
            kind: PlaceKind::Real,
            gram: vec![vec![1]],
            has_root: true,
        });
    }
    out
}

/// All vectors of `F_l^d` but zero.
fn all_nonzero_vectors(f: PrimeField, d: usize) -> Vec<Vec<u32>> {
    let l = f.modulus() as usize;
    (1..l.pow(d as u32))
        .map(|mut x| {
            (0..d)
                .map(|_| {
                    let c = (x % l) as u32;
                    x /= l;
                    c
                })
                .collect()
        })
        .collect()
}

/// The random choices that make one attempt.
struct Sample {
    lag: Vec<Vec<u32>>,
    /// Units positive at every real place; with an ideal, `c` comes first.
    plus: Vec<Vec<u32>>,
    /// Units negative exactly at one real place.
    a_v: Vec<Vec<u32>>,
    /// `(u, w_u)` for the places that get a `q_u`.
    w: Vec<(usize, Vec<u32>)>,
}

fn sample(
    f: PrimeField,
    w_s: &BilinearSpace,
    places: &[SPlace],
    m: &[u32],
    n_u: usize,
    with_c: bool,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Sample>> {
    let dims: Vec<usize> = places.iter().map(|p| p.gram.len()).collect();
    let offs: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let n_s = places.len();
    let n_real = n_s - n_u;
    let start = if m.iter().any(|&x| x != 0) {
        vec![m.to_vec()]
    } else {
        Vec::new()
    };
    let lag = extend_isotropic(w_s, start, n_s, rng)?;
    let real_rows: Vec<Vec<u32>> = (n_u..n_s)
        .map(|v| lag.iter().map(|l| l[offs[v]]).collect())
        .collect();
    if rank_of(f, n_s, &real_rows) != n_real {
        return Ok(None);
    }
    let comb = |coef: &[u32]| {
        let mut x = vec![0u32; w_s.dim()];
        for (c, l) in coef.iter().zip(&lag) {
            f.axpy(&mut x, *c, l);
        }
        x
    };
    let mut plus: Vec<Vec<u32>> = kernel_basis_dense(f, &real_rows, n_s)
        .iter()
        .map(|c| comb(c))
        .collect();
    let local = |x: &[u32], u: usize| x[offs[u]..offs[u] + dims[u]].to_vec();
    let pair_u = |u: usize, x: &[u32], y: &[u32]| {
        let (a, b) = (local(x, u), local(y, u));
        places[u]
            .gram
            .iter()
            .enumerate()
            .fold(0, |s, (i, row)| f.add(s, f.mul(a[i], f.dot(row, &b))))
    };
    let mut q_places: Vec<usize> = (0..n_u).collect();
    if with_c {
        let mut c = vec![0u32; w_s.dim()];
        while c.iter().all(|&x| x == 0) {
            c = vec![0u32; w_s.dim()];
            for k in &plus {
                f.axpy(&mut c, rng.gen_range(0..f.modulus()), k);
            }
        }
        let y_s: Vec<usize> = (0..n_u)
            .filter(|&u| local(&c, u).iter().any(|&x| x != 0))
            .collect();
        let phi: Vec<Vec<u32>> = plus
            .iter()
            .map(|x| y_s.iter().map(|&u| pair_u(u, &c, x)).collect())
            .collect();
        if rank_of(f, y_s.len(), &phi) + 1 != y_s.len() {
            return Ok(None);
        }
        // some unit-free image must pair nontrivially with c while staying
        // orthogonal to -1 and zero at the real places
        let nf = w_s.dim() - n_real;
        let (cf, mf) = (c[..nf].to_vec(), m[..nf].to_vec());
        if rank_of(f, nf, &[cf, mf.clone()]) != rank_of(f, nf, &[mf]) + 1 {
            return Ok(None);
        }
        let mut basis = vec![c];
        for k in &plus {
            let mut cand = basis.clone();
            cand.push(k.clone());
            if rank_of(f, w_s.dim(), &cand) == cand.len() {
                basis = cand;
            }
        }
        plus = basis;
        q_places.retain(|u| !y_s.contains(u));
    }
    let k_part = if with_c { &plus[1..] } else { &plus[..] };
    let mut w = Vec::new();
    for &u in &q_places {
        let cands: Vec<Vec<u32>> = all_nonzero_vectors(f, dims[u])
            .into_iter()
            .map(|loc| {
                let mut x = vec![0u32; w_s.dim()];
                x[offs[u]..offs[u] + dims[u]].copy_from_slice(&loc);
                x
            })
            .filter(|x| pair_u(u, m, x) == 0 && k_part.iter().any(|k| pair_u(u, k, x) != 0))
            .collect();
        if cands.is_empty() {
            return Ok(None);
        }
        w.push((u, cands[rng.gen_range(0..cands.len())].clone()));
    }
    let mut a_v = Vec::new();
    for t in 0..n_real {
        let target: Vec<u32> = (0..n_real).map(|s| u32::from(s == t)).collect();
        let cols: Vec<Vec<u32>> = (0..n_s)
            .map(|k| real_rows.iter().map(|r| r[k]).collect())
            .collect();
        let coef = solve_combination(f, &cols, &target)
            .ok_or_else(|| Error::Internal("real projection is not onto".into()))?;
        a_v.push(comb(&coef));
    }
    Ok(Some(Sample { lag, plus, a_v, w }))
}

fn build_general_family(p: GeneralParams, with_c: bool) -> Result<Model> {
    let f = PrimeField::new(p.l)?;
    let comm = p.l == 2 && !p.sqrt_minus1;
    if !comm && p.real_places > 0 {
        return Err(params(
            "real places carry symbols only for l = 2 without sqrt(-1)",
        ));
    }
    if comm && p.real_places == 0 {
        // F_2^2 with the dot product leaves no w_u orthogonal to -1 that pairs
        // nontrivially with the units
        return Err(params("l = 2 without sqrt(-1) needs at least one real place"));
    }
    if p.s_places <= p.real_places {
        return Err(params("at least one nonarchimedean exceptional place is needed"));
    }
    let n_u = p.s_places - p.real_places;
    let n_real = p.real_places;
    let places = general_places(f, comm, n_u, n_real);
    let parts = places
        .iter()
        .map(|sp| BilinearSpace::new(f, sp.gram.clone(), !comm, None))
        .collect::<Result<Vec<_>>>()?;
    let w_s = BilinearSpace::orthogonal_sum(f, &parts)?;
    let dim = w_s.dim();
    // the class of -1: the diagonal of each dot-product form
    let mut m = vec![0u32; dim];
    if comm {
        m[..2 + n_real].fill(1);
        m[dim - n_real..].fill(1);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut found = None;
    for _ in 0..MAX_ATTEMPTS {
        if let Some(s) = sample(f, &w_s, &places, &m, n_u, with_c, &mut rng)? {
            found = Some(s);
            break;
        }
    }
    let s = found.ok_or_else(|| params("no admissible exceptional data for these sizes"))?;
    let n_q = s.w.len();
    // with an ideal, the second r' links the places where c is not a power
    // to the others, so it gets an image pairing nontrivially with c
    let n_rpp = p.free_outside / 2;
    let mut n_rp = p.free_outside - n_rpp;
    if with_c {
        n_rp = (n_rp + 1).max(2);
    }
    // a generic unit-free image: zero at the real places and orthogonal to -1
    let random_image = |rng: &mut ChaCha8Rng| {
        let mut x = random_vec(f, dim, rng);
        x[dim - n_real..].fill(0);
        if comm && w_s.pair(&m, &x) != 0 {
            x[0] ^= 1;
        }
        x
    };
    let mut gens = Vec::new();
    let mut outs = vec![outside("p1".into(), "p")];
    if with_c {
        gens.push(Gen {
            label: "c".into(),
            image: s.plus[0].clone(),
            place: None,
        });
    }
    gens.push(Gen {
        label: "ap".into(),
        image: vec![0; dim],
        place: Some(0),
    });
    for (i, (u, wu)) in s.w.iter().enumerate() {
        outs.push(outside(format!("qu{}", i + 1), "q_u"));
        gens.push(Gen {
            label: format!("aq{u}"),
            image: wu.clone(),
            place: Some(outs.len() - 1),
        });
    }
    let k_part = if with_c { &s.plus[1..] } else { &s.plus[..] };
    for (j, k) in k_part.iter().enumerate() {
        gens.push(Gen {
            label: format!("k{}", j + 1),
            image: k.clone(),
            place: None,
        });
    }
    let first_rp = outs.len();
    for i in 0..n_rp {
        outs.push(outside(format!("rp{}", i + 1), "r'"));
        let image = match i {
            0 => vec![0; dim],
            1 if with_c => loop {
                let x = random_image(&mut rng);
                if w_s.pair(&s.plus[0], &x) != 0 {
                    break x;
                }
            },
            _ => random_image(&mut rng),
        };
        gens.push(Gen {
            label: format!("arp{}", i + 1),
            image,
            place: Some(outs.len() - 1),
        });
    }
    let first_rpp = outs.len();
    for i in 0..n_rpp {
        outs.push(outside(format!("rpp{}", i + 1), "r''"));
        gens.push(Gen {
            label: format!("arpp{}", i + 1),
            image: random_image(&mut rng),
            place: Some(outs.len() - 1),
        });
    }
    for (v, av) in s.a_v.iter().enumerate() {
        gens.push(Gen {
            label: format!("av{}", v + 1),
            image: av.clone(),
            place: None,
        });
    }
    let n_gens = gens.len();
    let mut minus_one = vec![0u32; n_gens];
    if comm {
        let units: Vec<usize> = (0..n_gens).filter(|&g| gens[g].place.is_none()).collect();
        let imgs: Vec<Vec<u32>> = units.iter().map(|&g| gens[g].image.clone()).collect();
        let coef = solve_combination(f, &imgs, &m)
            .ok_or_else(|| Error::Internal("-1 is not a unit combination".into()))?;
        for (&g, c) in units.iter().zip(coef) {
            minus_one[g] = c;
        }
    }
    let place_of: Vec<Option<usize>> = gens.iter().map(|g| g.place).collect();
    let free = |pl: usize, y: usize| -> u32 {
        let py = place_of[y].expect("free values only for outside generators");
        let kind_q = py < first_rp;
        let kind_rp = (first_rp..first_rpp).contains(&py);
        match (pl, kind_q, kind_rp) {
            // Frobenius of q_u and r' is nontrivial in K[a_p^{1/l}], of r'' trivial
            (0, true, _) => 1,
            (0, _, true) => nonzero(f, &mut rng),
            (0, false, false) => 0,
            // each r'' is inert in K[a_{r'_1}^{1/l}] for the first r', whose image is zero
            (q, false, false) if q == first_rp => nonzero(f, &mut rng),
            _ => rng.gen_range(0..p.l),
        }
    };
    let datum = assemble(
        Skeleton {
            field: f,
            sqrt_minus1: p.sqrt_minus1,
            s_places: places,
            outside_places: outs,
            lagrangian: s.lag.clone(),
            minus_one,
            ideal_generator: with_c.then_some(0),
        },
        &gens,
        free,
    )?;
    let c0 = usize::from(with_c);
    let ap = c0;
    let aq = |i: usize| c0 + 1 + i;
    let n_k = k_part.len();
    let k = |j: usize| c0 + 1 + n_q + j;
    let rp = |i: usize| c0 + 1 + n_q + n_k + i;
    let rpp = |i: usize| c0 + 1 + n_q + n_k + n_rp + i;
    let av = |v: usize| c0 + 1 + n_q + n_k + n_rp + n_rpp + v;
    let mut pr = PredictedSurvivors::default();
    pr.all.extend((0..n_q).map(|i| quad(ap, aq(i))));
    if with_c {
        pr.any_of.extend((0..n_k).map(|j| quad(0, k(j))));
        pr.any_of.extend((0..n_rp).map(|i| quad(0, rp(i))));
        pr.any_of.extend((0..n_rp).map(|i| quad(ap, rp(i))));
    } else {
        pr.all.extend((0..n_rp).map(|i| quad(ap, rp(i))));
    }
    pr.all.extend((0..n_real).map(|v| quad(av(v), av(v))));
    for i in 0..n_q {
        pr.exactly_one.push((0..n_k).map(|j| quad(aq(i), k(j))).collect());
    }
    for r in 0..n_rpp {
        let mut g: Vec<Monomial> = Vec::new();
        if with_c {
            g.push(quad(0, rpp(r)));
        }
        g.extend((0..n_q).map(|i| quad(aq(i), rpp(r))));
        g.extend((0..n_k).map(|j| quad(k(j), rpp(r))));
        g.extend((0..n_rp).map(|i| quad(rp(i), rpp(r))));
        pr.exactly_one.push(g);
    }
    Ok(Model {
        datum,
        predicted: pr,
        ideal_choices: if with_c { vec![0] } else { Vec::new() },
    })
}

/// The general model, order `a_p, a_{q_u}.., k_j.., a_{r'}.., a_{r''}.., a_v..`.
pub fn build_global_general(p: GeneralParams) -> Result<Model> {
    build_general_family(p, false)
}

/// The model for the ideal `(c)`, order `c, a_p, a_{q_u}.., k_j.., a_{r'}..,
/// a_{r''}.., a_v..`, where `c` is a random unit positive at every real place
/// (so `{c, c} = 0`).
pub fn build_annihilator(p: GeneralParams) -> Result<Model> {
    build_general_family(p, true)
}
