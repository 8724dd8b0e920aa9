use super::*;
use crate::assoc_graded::{associated_graded, check_quadratic_through3, surviving_monomials};
use crate::monomial_graph::{graph_from_truncation, module_verdict};
use crate::symplectic::{is_lagrangian, Subspace};

fn survivors_ok(m: &Model) {
    let a = m.algebra(3).unwrap();
    let s = surviving_monomials(&a, 2).unwrap();
    if let Err(e) = m.predicted.check(&s, &m.order()) {
        let names: Vec<String> = s.iter().map(|x| m.order().format_monomial(x)).collect();
        panic!("{e}; survivors {names:?}");
    }
}

fn lagrangian_ok(d: &GlobalSymbolDatum) {
    let w = d.w_s().unwrap();
    assert_eq!(w.dim(), 2 * d.s_places.len());
    let l = Subspace::new(d.field, w.dim(), d.lagrangian.clone()).unwrap();
    assert_eq!(l.dim(), d.s_places.len());
    assert!(is_lagrangian(&w, &l));
}

#[test]
fn symplectic_example_shape() {
    let m = build_global_symplectic(3, false, 2, 2, 0).unwrap();
    assert_eq!(m.datum.labels(), vec!["b0", "ap1", "aq1", "b1", "ar1"]);
    assert!(validate_reciprocity(&m.datum).ok);
    lagrangian_ok(&m.datum);
    survivors_ok(&m);
    let a = m.algebra(3).unwrap();
    assert_eq!(a.dim(3), 0);
    let g = associated_graded(&a).unwrap();
    assert!(module_verdict(&graph_from_truncation(&g)).unwrap());
}

#[test]
fn symplectic_sweep() {
    for l in [3, 5] {
        for s in 2..=3 {
            for out in 1..=4 {
                for seed in 0..3 {
                    let m = build_global_symplectic(l, false, s, out, seed).unwrap();
                    assert!(validate_reciprocity(&m.datum).ok);
                    lagrangian_ok(&m.datum);
                    survivors_ok(&m);
                }
            }
        }
    }
    let m = build_global_symplectic(2, true, 3, 3, 1).unwrap();
    survivors_ok(&m);
}

fn gp(l: u32, s: usize, real: usize, out: usize, seed: u64) -> GeneralParams {
    GeneralParams {
        l,
        sqrt_minus1: false,
        s_places: s,
        real_places: real,
        free_outside: out,
        seed,
    }
}

#[test]
fn general_sweep() {
    for (s, real) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
        for out in 0..=3 {
            for seed in 0..3 {
                let m = build_global_general(gp(2, s, real, out, seed)).unwrap();
                assert!(validate_reciprocity(&m.datum).ok, "{s} {real} {out} {seed}");
                lagrangian_ok(&m.datum);
                survivors_ok(&m);
                let a = m.algebra(4).unwrap();
                assert_eq!(a.dim(3), real);
                assert_eq!(a.dim(4), real);
                let g = associated_graded(&a).unwrap();
                assert!(check_quadratic_through3(&g).unwrap().ok);
            }
        }
    }
    let m = build_global_general(gp(3, 3, 0, 2, 0)).unwrap();
    survivors_ok(&m);
}

#[test]
fn annihilator_sweep() {
    for (l, s, real) in [(2, 2, 1), (2, 3, 1), (2, 4, 2), (3, 2, 0), (3, 3, 0), (5, 2, 0)] {
        for out in 0..=3 {
            for seed in 0..3 {
                let m = build_annihilator(gp(l, s, real, out, seed)).unwrap();
                assert!(validate_reciprocity(&m.datum).ok);
                lagrangian_ok(&m.datum);
                survivors_ok(&m);
                let c = m.datum.ideal_generator.unwrap();
                assert_eq!(c, 0);
                let e: Vec<u32> = (0..m.datum.n_gens()).map(|g| u32::from(g == c)).collect();
                assert!(m.datum.symbol(&e, &e).iter().all(|&x| x == 0));
            }
        }
    }
}

#[test]
fn noroot_shapes() {
    for with_c in [false, true] {
        for (s, r) in [(1, 1), (2, 1), (2, 2), (0, 2)] {
            for seed in 0..3 {
                let m = build_noroot(NorootParams {
                    l: 3,
                    s_places: s,
                    free_outside: r,
                    with_c,
                    seed,
                })
                .unwrap();
                survivors_ok(&m);
                let g = associated_graded(&m.algebra(3).unwrap()).unwrap();
                let t = graph_from_truncation(&g);
                if !with_c {
                    assert_eq!(t.edges().len(), s + r);
                    assert!(t.max_degree() <= 1);
                }
                assert!(t.find_triangle().is_none());
            }
        }
    }
    assert!(build_noroot(NorootParams {
        l: 2,
        s_places: 1,
        free_outside: 1,
        with_c: false,
        seed: 0
    })
    .is_err());
}

#[test]
fn perturbed_frobenius_is_caught() {
    let mut m = build_global_symplectic(3, false, 2, 2, 4).unwrap();
    let k = m.datum.outside_places.len() - 1;
    let g = 0;
    m.datum.generators[g].frob[k] = (m.datum.generators[g].frob[k] + 1) % 3;
    let rep = validate_reciprocity(&m.datum);
    assert!(!rep.ok);
    assert!(rep.offenders.iter().all(|(x, y)| x == "b0" || y == "b0"));
    assert!(datum_to_algebra(&m.datum, 3).is_err());
}

#[test]
fn single_generator_datum_is_vacuous() {
    let mut m = build_local(LocalCase::new(LocalKind::NoRoot, 1, 3, false).unwrap()).unwrap();
    m.datum.variant = Variant::Global;
    m.datum.s_places[0].has_root = true;
    m.datum.s_places[0].gram = vec![vec![0]];
    assert!(validate_reciprocity(&m.datum).ok);
}

#[test]
fn json_round_trip() {
    let m = build_annihilator(gp(2, 3, 1, 2, 7)).unwrap();
    let v = m.datum.to_json_value();
    let back = GlobalSymbolDatum::from_json_value(v.clone()).unwrap();
    assert_eq!(back, m.datum);
    assert_eq!(back.to_json_value(), v);
    let mut bad = v;
    bad["generators"][0]["ord"] = serde_json::json!({});
    assert!(GlobalSymbolDatum::from_json_value(bad).is_err());
}

#[test]
fn supports() {
    let m = build_global_symplectic(3, false, 2, 2, 0).unwrap();
    let d = &m.datum;
    assert!(support(d, &vec![0; d.target_places().len()]).unwrap().is_empty());
    let b0 = vec![1, 0, 0, 0, 0];
    let ap1 = vec![0, 1, 0, 0, 0];
    let s = support(d, &d.symbol(&b0, &ap1)).unwrap();
    assert!(!s.is_empty());
    assert!(s.iter().all(|p| p == "s0" || p == "p1"), "{s:?}");
}

#[test]
fn deterministic_in_seed() {
    let a = build_global_general(gp(2, 3, 1, 3, 9)).unwrap();
    let b = build_global_general(gp(2, 3, 1, 3, 9)).unwrap();
    assert_eq!(a.datum, b.datum);
}
