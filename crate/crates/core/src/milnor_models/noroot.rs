//! Global fields without a primitive `l`-th root of unity: degree 2 is the
//! direct sum of the local groups at the places whose completion has the root,
//! with no reciprocity law.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf_linalg::PrimeField;
use crate::monomials::Monomial;

use super::datum::{GlobalSymbolDatum, OutsidePlace, PlaceKind, SPlace, SymbolGenerator, Variant};
use super::prediction::{quad, PredictedSurvivors};
use super::Model;

/// `s_places` exceptional places with the root of unity (plus one without);
/// `free_outside` outside places with the root, each getting a partner `q(r)`
/// (plus one outside place without). `with_c` builds the model for the ideal
/// `(c)` instead of the one for `J_K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NorootParams {
    pub l: u32,
    pub s_places: usize,
    pub free_outside: usize,
    pub with_c: bool,
    pub seed: u64,
}

struct Builder {
    f: PrimeField,
    n_out: usize,
    s_dims: Vec<usize>,
    gens: Vec<SymbolGenerator>,
}

impl Builder {
    fn push(
        &mut self,
        label: String,
        images: Vec<Vec<u32>>,
        place: Option<usize>,
        rng: &mut ChaCha8Rng,
    ) -> usize {
        let mut ord = vec![0u32; self.n_out];
        let frob: Vec<u32> = (0..self.n_out)
            .map(|_| rng.gen_range(0..self.f.modulus()))
            .collect();
        let mut g = SymbolGenerator {
            label,
            images,
            ord: Vec::new(),
            frob,
        };
        if let Some(p) = place {
            ord[p] = 1;
            g.frob[p] = 0;
        }
        g.ord = ord;
        self.gens.push(g);
        self.gens.len() - 1
    }

    fn random_images(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<u32>> {
        self.s_dims
            .iter()
            .map(|&d| (0..d).map(|_| rng.gen_range(0..self.f.modulus())).collect())
            .collect()
    }

    fn local_images(&self, u: usize, v: &[u32]) -> Vec<Vec<u32>> {
        self.s_dims
            .iter()
            .enumerate()
            .map(|(k, &d)| if k == u { v.to_vec() } else { vec![0; d] })
            .collect()
    }
}

pub fn build_noroot(p: NorootParams) -> Result<Model> {
    let f = PrimeField::new(p.l)?;
    if p.l == 2 {
        return Err(Error::InvalidParameters(
            "l must be odd: -1 is a square root of unity for l = 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let n_u = p.s_places;
    let n_r = p.free_outside;
    let mut s_places: Vec<SPlace> = (0..n_u)
        .map(|k| SPlace {
            name: format!("s{k}"),
            kind: PlaceKind::Nonarch,
            gram: vec![vec![0, 1], vec![f.neg(1), 0]],
            has_root: true,
        })
        .collect();
    s_places.push(SPlace {
        name: "t0".into(),
        kind: PlaceKind::Nonarch,
        gram: vec![vec![0]],
        has_root: false,
    });
    let s_dims: Vec<usize> = s_places.iter().map(|s| s.gram.len()).collect();

    // c and the split of the root places into u' (c nonzero there) and u''
    let c_images: Option<Vec<Vec<u32>>> = p.with_c.then(|| loop {
        let im: Vec<Vec<u32>> = s_dims
            .iter()
            .map(|&d| (0..d).map(|_| rng.gen_range(0..p.l)).collect())
            .collect();
        if im.iter().flatten().any(|&x| x != 0) {
            break im;
        }
    });
    let (u1, u2): (Vec<usize>, Vec<usize>) =
        (0..n_u).partition(|&u| c_images.as_ref().is_some_and(|c| c[u].iter().any(|&x| x != 0)));

    let mut outs = Vec::new();
    let mut add_place = |name: String, kind: &str, has_root: bool| {
        outs.push(OutsidePlace {
            name,
            kind: kind.into(),
            has_root,
        });
        outs.len() - 1
    };
    let pu1: Vec<usize> = u1
        .iter()
        .map(|u| add_place(format!("pu{u}"), "p", false))
        .collect();
    let pp: Vec<(usize, usize)> = u2
        .iter()
        .map(|u| {
            (
                add_place(format!("pp{u}"), "p'_u", false),
                add_place(format!("ppp{u}"), "p''_u", false),
            )
        })
        .collect();
    let qr: Vec<usize> = (0..n_r)
        .map(|r| add_place(format!("qr{}", r + 1), "q(r)", false))
        .collect();
    let rr: Vec<usize> = (0..n_r)
        .map(|r| add_place(format!("r{}", r + 1), "r", true))
        .collect();
    let plain_v = add_place("v1".into(), "v", false);
    let n_out = outs.len();

    let mut b = Builder {
        f,
        n_out,
        s_dims,
        gens: Vec::new(),
    };
    let push_qr = |b: &mut Builder, rng: &mut ChaCha8Rng| -> Vec<usize> {
        let mut g_qr = Vec::new();
        for r in 0..n_r {
            let im = if p.with_c {
                b.random_images(rng)
            } else {
                b.s_dims.iter().map(|&d| vec![0; d]).collect()
            };
            let g = b.push(format!("aqr{}", r + 1), im, Some(qr[r]), rng);
            for (r2, &pl) in rr.iter().enumerate() {
                if r2 == r {
                    b.gens[g].frob[pl] = rng.gen_range(1..p.l);
                } else if !p.with_c {
                    // a_{q(r)} is an l-th power at every other root place
                    b.gens[g].frob[pl] = 0;
                }
            }
            g_qr.push(g);
        }
        g_qr
    };
    let c_rank = c_images.map(|im| b.push("c".into(), im, None, &mut rng));
    // without c the order starts with the a_{q(r)}
    let early_qr = if p.with_c {
        Vec::new()
    } else {
        push_qr(&mut b, &mut rng)
    };
    let mut g_pu1 = Vec::new();
    for (&u, &pl) in u1.iter().zip(&pu1) {
        let c_u = &b.gens[0].images[u];
        // w with {w, c}_u != 0 in the plane with (e, f) = 1
        let w = loop {
            let w: Vec<u32> = (0..2).map(|_| rng.gen_range(0..p.l)).collect();
            if f.sub(f.mul(w[0], c_u[1]), f.mul(w[1], c_u[0])) != 0 {
                break w;
            }
        };
        let im = b.local_images(u, &w);
        g_pu1.push(b.push(format!("apu{u}"), im, Some(pl), &mut rng));
    }
    let mut g_pp = Vec::new();
    for (&u, &(p1, p2)) in u2.iter().zip(&pp) {
        let (e, fv) = (b.local_images(u, &[1, 0]), b.local_images(u, &[0, 1]));
        let a = b.push(format!("app{u}"), e, Some(p1), &mut rng);
        let a2 = b.push(format!("appp{u}"), fv, Some(p2), &mut rng);
        g_pp.push((a, a2));
    }
    let g_qr = if p.with_c {
        push_qr(&mut b, &mut rng)
    } else {
        early_qr
    };
    for j in 0..n_u + 1 {
        let im = b.random_images(&mut rng);
        b.push(format!("k{}", j + 1), im, None, &mut rng);
    }
    let mut g_r = Vec::new();
    for (r, &pl) in rr.iter().enumerate() {
        let im = b.random_images(&mut rng);
        g_r.push(b.push(format!("av{}", r + 1), im, Some(pl), &mut rng));
    }
    let im = b.random_images(&mut rng);
    b.push(format!("av{}", n_r + 1), im, Some(plain_v), &mut rng);

    let n_gens = b.gens.len();
    let datum = GlobalSymbolDatum {
        field: f,
        sqrt_minus1: false,
        variant: Variant::Noroot,
        s_places,
        outside_places: outs,
        generators: b.gens,
        lagrangian: Vec::new(),
        minus_one: vec![0; n_gens],
        ideal_generator: c_rank,
    };
    datum.validate()?;

    let mut pr = PredictedSurvivors::default();
    if let Some(c) = c_rank {
        pr.all.extend(g_pu1.iter().map(|&a| quad(c, a)));
    }
    pr.all.extend(g_pp.iter().map(|&(a, a2)| quad(a, a2)));
    for (r, &ar) in g_r.iter().enumerate() {
        if p.with_c {
            let mut g: Vec<Monomial> = vec![quad(0, ar)];
            g.extend(g_pu1.iter().map(|&a| quad(a, ar)));
            g.extend(g_pp.iter().flat_map(|&(a, a2)| [quad(a, ar), quad(a2, ar)]));
            g.extend(g_qr.iter().map(|&a| quad(a, ar)));
            pr.exactly_one.push(g);
        } else {
            pr.all.push(quad(g_qr[r], ar));
        }
    }
    Ok(Model {
        datum,
        predicted: pr,
        ideal_choices: c_rank.into_iter().collect(),
    })
}
