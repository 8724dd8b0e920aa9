//! Cross-checks of the PBW and graph criteria against bar homology.

use serde_json::{json, Value};

use crate::algebra::{
    augmentation_module, ideal_module, DegreewiseAlgebra, ModuleTruncation, QuadraticPresentation,
    SymmetryMode,
};
use crate::assoc_graded::{
    associated_graded, graded_ideal_module, ideal_graded_generated_by, pbw_verdict_from, PbwVerdict,
};
use crate::error::Result;
use crate::homology::{bar_tor_algebra, koszul_scan, tor_module, KoszulVerdict, TorMethod, TorTable};
use crate::milnor_models::{datum_to_algebra, GlobalSymbolDatum};
use crate::monomial_graph::{algebra_verdict, graph_from_truncation, module_verdict, QuadGraph};
use crate::monomials::{GeneratorOrder, Monomial};

/// What to check: `A`, optionally the ambient `Lambda` with `A = Lambda / J`,
/// and optionally a generator `c` for the ideal `(c)`.
#[derive(Clone, Debug)]
pub struct CheckInput {
    pub algebra: DegreewiseAlgebra,
    pub lambda: Option<DegreewiseAlgebra>,
    pub ideal_generator: Option<usize>,
}

impl CheckInput {
    /// `A` from a presentation; `Lambda` is the free algebra of the same mode.
    pub fn from_presentation(p: &QuadraticPresentation, n_max: usize) -> Result<Self> {
        let free = match p.mode() {
            SymmetryMode::Supercommutative => QuadraticPresentation::exterior(p.field(), p.order().clone()),
            SymmetryMode::Commutative => QuadraticPresentation::polynomial(p.field(), p.order().clone()),
        };
        Ok(CheckInput {
            algebra: p.degreewise_expand(n_max)?,
            lambda: Some(free.degreewise_expand(n_max)?),
            ideal_generator: None,
        })
    }

    /// `A = Lambda / J` from a symbol datum, with its ideal generator if any.
    pub fn from_datum(d: &GlobalSymbolDatum, n_max: usize) -> Result<Self> {
        Ok(CheckInput {
            algebra: datum_to_algebra(d, n_max)?,
            lambda: Some(d.lambda()?.degreewise_expand(n_max)?),
            ideal_generator: d.ideal_generator,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub i_max: usize,
    pub j_max: usize,
}

/// One homology scan with the table of its associated graded counterpart.
#[derive(Clone, Debug)]
pub struct Scan {
    pub table: TorTable,
    pub verdict: KoszulVerdict,
    pub graded: TorTable,
    pub graded_verdict: KoszulVerdict,
}

impl Scan {
    fn new(table: TorTable, graded: TorTable) -> Self {
        Scan {
            verdict: koszul_scan(&table),
            graded_verdict: koszul_scan(&graded),
            table,
            graded,
        }
    }

    /// `(i, j)` with `dim H_{i,j} > dim H_{i,j}(gr)`.
    pub fn filtration_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.table.dims.iter().enumerate() {
            for (j, &d) in row.iter().enumerate() {
                if d > self.graded.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum GraphOutcome {
    Applies {
        graph: QuadGraph,
        algebra: bool,
        module: bool,
    },
    NotApplicable(String),
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub order: GeneratorOrder,
    pub pbw: PbwVerdict,
    pub graph: GraphOutcome,
    pub algebra: Scan,
    /// `A_+` over `Lambda`.
    pub module: Option<Scan>,
    /// `gr A_+` over the free exterior algebra; what the graph module verdict predicts.
    pub graph_module: Option<KoszulVerdict>,
    pub ideal: Option<Scan>,
    pub ideal_graded_generated: Option<bool>,
    pub disagreements: Vec<String>,
}

impl CheckReport {
    /// All applicable homology scans are clean.
    pub fn koszul(&self) -> bool {
        self.algebra.verdict.koszul_through_bound
            && self
                .module
                .as_ref()
                .is_none_or(|s| s.verdict.koszul_through_bound)
            && self.ideal.as_ref().is_none_or(|s| s.verdict.koszul_through_bound)
    }

    pub fn agree(&self) -> bool {
        self.disagreements.is_empty()
    }

    /// 0: agree and Koszul, 1: agree and not Koszul, 3: disagreement.
    pub fn exit_code(&self) -> i32 {
        match (self.agree(), self.koszul()) {
            (false, _) => 3,
            (true, true) => 0,
            (true, false) => 1,
        }
    }
}

fn free_exterior(a: &DegreewiseAlgebra) -> Result<DegreewiseAlgebra> {
    QuadraticPresentation::exterior(a.field(), a.order().clone())
        .degreewise_expand(a.n_max())?
        .assert_free_exterior()
}

fn module_tor(over: &DegreewiseAlgebra, m: &ModuleTruncation, b: Bounds) -> Result<TorTable> {
    tor_module(over, m, b.i_max, b.j_max, TorMethod::Auto)
}

pub fn run_check(input: &CheckInput, b: Bounds) -> Result<CheckReport> {
    let a = &input.algebra;
    let f = a.field();
    let g = associated_graded(a)?;
    let gr_a = g.to_algebra(f)?;
    let pbw = pbw_verdict_from(&g)?;
    let mut disagreements = Vec::new();

    let algebra = Scan::new(
        bar_tor_algebra(a, b.i_max, b.j_max)?,
        bar_tor_algebra(&gr_a, b.i_max, b.j_max)?,
    );
    if pbw.koszul && !algebra.graded_verdict.koszul_through_bound {
        disagreements.push("PBW: gr A is quadratic monomial but its scan is not clean".into());
    }
    if pbw.koszul && !algebra.verdict.koszul_through_bound {
        disagreements.push("PBW: Koszul, but the scan of A is not clean".into());
    }
    for (i, j) in algebra.filtration_violations() {
        disagreements.push(format!(
            "filtration: H_{{{i},{j}}}(A) exceeds H_{{{i},{j}}}(gr A)"
        ));
    }

    let t = graph_from_truncation(&g);
    let mut graph_module = None;
    let graph = match (algebra_verdict(&t), module_verdict(&t)) {
        (Ok(alg), Ok(module)) => {
            if alg != algebra.graded_verdict.koszul_through_bound {
                disagreements.push(format!(
                    "graph: algebra verdict {alg} disagrees with the scan of gr A"
                ));
            }
            let ext = free_exterior(a)?;
            let v = koszul_scan(&module_tor(&ext, &augmentation_module(&gr_a, &ext)?, b)?);
            if module != v.koszul_through_bound {
                disagreements.push(format!(
                    "graph: module verdict {module} disagrees with the scan of gr A_+"
                ));
            }
            graph_module = Some(v);
            GraphOutcome::Applies {
                graph: t,
                algebra: alg,
                module,
            }
        }
        (Err(e), _) | (_, Err(e)) => GraphOutcome::NotApplicable(e.to_string()),
    };

    let module = match &input.lambda {
        Some(lambda) => {
            let gr_lambda = associated_graded(lambda)?.to_algebra(f)?;
            let s = Scan::new(
                module_tor(lambda, &augmentation_module(a, lambda)?, b)?,
                module_tor(&gr_lambda, &augmentation_module(&gr_a, &gr_lambda)?, b)?,
            );
            for (i, j) in s.filtration_violations() {
                disagreements.push(format!(
                    "filtration: H_{{{i},{j}}}(Lambda, A_+) exceeds the graded value"
                ));
            }
            Some(s)
        }
        None => None,
    };

    let (ideal, ideal_graded_generated) = match input.ideal_generator {
        Some(c) => {
            let gen = ideal_graded_generated_by(a, &g, c)?.ok;
            let s = Scan::new(
                module_tor(a, &ideal_module(a, &a.generator(c))?, b)?,
                module_tor(&gr_a, &graded_ideal_module(a, &g, &gr_a, c)?, b)?,
            );
            for (i, j) in s.filtration_violations() {
                disagreements.push(format!(
                    "filtration: H_{{{i},{j}}}(A, (c)) exceeds the graded value"
                ));
            }
            (Some(s), Some(gen))
        }
        None => (None, None),
    };

    Ok(CheckReport {
        order: a.order().clone(),
        pbw,
        graph,
        algebra,
        module,
        graph_module,
        ideal,
        ideal_graded_generated,
        disagreements,
    })
}

fn scan_json(s: &Scan) -> Value {
    json!({
        "koszul": s.verdict.koszul_through_bound,
        "offenders": s.verdict.offenders,
        "table": s.table.dims,
        "graded_koszul": s.graded_verdict.koszul_through_bound,
        "graded_table": s.graded.dims,
    })
}

fn scan_line(name: &str, s: &Scan) -> String {
    let show = |v: &KoszulVerdict| {
        if v.koszul_through_bound {
            "clean".to_string()
        } else {
            let o: Vec<String> = v
                .offenders
                .iter()
                .map(|(i, j, d)| format!("H_{i},{j}={d}"))
                .collect();
            o.join(" ")
        }
    };
    format!(
        "{name}: {} (graded: {})\n",
        show(&s.verdict),
        show(&s.graded_verdict)
    )
}

impl CheckReport {
    pub fn to_json(&self, b: Bounds) -> Value {
        let order = &self.order;
        let graph = match &self.graph {
            GraphOutcome::Applies {
                graph,
                algebra,
                module,
            } => json!({
                "applies": true,
                "graph": graph.to_json(),
                "algebra_koszul": algebra,
                "module_koszul": module,
                "graded_module_scan_koszul": self.graph_module.as_ref().map(|v| v.koszul_through_bound),
            }),
            GraphOutcome::NotApplicable(why) => json!({"applies": false, "reason": why}),
        };
        let fmt = |ms: &[Monomial]| -> Vec<String> { ms.iter().map(|m| order.format_monomial(m)).collect() };
        json!({
            "bounds": {"i_max": b.i_max, "j_max": b.j_max},
            "pbw": {
                "generated_in_degree_1": self.pbw.generated_in_degree_1,
                "quadratic_through_3": self.pbw.quadratic_through_3,
                "koszul": self.pbw.koszul,
                "failures": fmt(&self.pbw.failures),
                "certificate": self.pbw.certificate.iter().map(|c| fmt(c)).collect::<Vec<_>>(),
            },
            "graph": graph,
            "homology": {
                "algebra": scan_json(&self.algebra),
                "module": self.module.as_ref().map(scan_json),
                "ideal": self.ideal.as_ref().map(scan_json),
                "ideal_graded_generated": self.ideal_graded_generated,
            },
            "agree": self.agree(),
            "disagreements": self.disagreements,
            "koszul": self.koszul(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "PBW: {} (generated in degree 1: {}, quadratic through 3: {})\n",
            if self.pbw.koszul { "Koszul" } else { "inconclusive" },
            self.pbw.generated_in_degree_1,
            self.pbw.quadratic_through_3
        ));
        match &self.graph {
            GraphOutcome::Applies { algebra, module, .. } => s.push_str(&format!(
                "graph: algebra {}, module {}\n",
                if *algebra { "Koszul" } else { "not Koszul" },
                if *module { "Koszul" } else { "not Koszul" }
            )),
            GraphOutcome::NotApplicable(why) => s.push_str(&format!("graph: n/a ({why})\n")),
        }
        s.push_str(&scan_line("homology A", &self.algebra));
        if let Some(m) = &self.module {
            s.push_str(&scan_line("homology A_+ over Lambda", m));
        }
        if let Some(m) = &self.ideal {
            s.push_str(&scan_line("homology (c) over A", m));
        }
        for d in &self.disagreements {
            s.push_str(&format!("disagreement: {d}\n"));
        }
        s.push_str(if self.agree() { "AGREE\n" } else { "DISAGREE\n" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf_linalg::PrimeField;
    use crate::milnor_models::{build_global_symplectic, build_local, LocalCase, LocalKind};
    use crate::monomials::GeneratorOrder;

    const B: Bounds = Bounds { i_max: 5, j_max: 5 };

    fn graph_input(t: &QuadGraph) -> CheckInput {
        let a = t.exterior_quotient(PrimeField::new(2).unwrap(), 6).unwrap();
        let lambda = Some(free_exterior(&a).unwrap());
        CheckInput {
            algebra: a,
            lambda,
            ideal_generator: None,
        }
    }

    #[test]
    fn exterior_is_koszul() {
        let p = QuadraticPresentation::exterior(PrimeField::new(3).unwrap(), GeneratorOrder::standard(2));
        let r = run_check(&CheckInput::from_presentation(&p, 6).unwrap(), B).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
        assert!(r.pbw.koszul);
    }

    #[test]
    fn cycle_module_is_consistently_not_koszul() {
        let r = run_check(&graph_input(&QuadGraph::cycle(4)), B).unwrap();
        assert_eq!(r.exit_code(), 1, "{}", r.to_text());
        assert!(r.algebra.verdict.koszul_through_bound);
        assert!(matches!(
            r.graph,
            GraphOutcome::Applies {
                algebra: true,
                module: false,
                ..
            }
        ));
    }

    #[test]
    fn triangle_is_consistently_not_koszul() {
        let r = run_check(&graph_input(&QuadGraph::cycle(3)), B).unwrap();
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.algebra.table.get(2, 3), 1);
    }

    #[test]
    fn local_symplectic_passes() {
        let m = build_local(LocalCase::new(LocalKind::Symplectic, 2, 3, false).unwrap()).unwrap();
        let r = run_check(&CheckInput::from_datum(&m.datum, 6).unwrap(), B).unwrap();
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    }

    #[test]
    fn global_symplectic_passes() {
        let m = build_global_symplectic(3, false, 2, 2, 1).unwrap();
        let t = std::time::Instant::now();
        let r = run_check(
            &CheckInput::from_datum(&m.datum, 6).unwrap(),
            Bounds { i_max: 5, j_max: 6 },
        )
        .unwrap();
        eprintln!("{} gens: {:?}", m.datum.n_gens(), t.elapsed());
        assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    }
}
