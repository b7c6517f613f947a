//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use laxframe::equivalence::{psi_functor, verify_theorem, KRFunctor};
use laxframe::fincat::{enumerate_transformations, FinCategory, Mode, Presheaf, TransData};
use laxframe::fixtures;
use laxframe::gen::Bounds;
use laxframe::lax::{check_psi_composition, check_psi_identity, check_tilde_of_psi, tilde};
use laxframe::ndl::{
    check_completion, complete_c, completion_onto_center, hom_order_violation, is_compact_regular, is_normal,
    sup_inverse, NormalityCertificate,
};
use laxframe::order::{check_hom, distributive_lattices_up_to, enumerate_distributive_lattices, FinDistLattice};
use laxframe::search::{self, case_rng, SearchConfig};
use laxframe::Mutation;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn run_suite(name: &str, f: search::Suite, cases: u64, seed: u64, b: &Bounds) -> Outcome {
    let k = search::SUITES.iter().position(|s| s.0 == name).unwrap() as u64;
    for case in 0..cases {
        f(&mut case_rng(seed, case, k), b).map_err(|e| format!("{name} case {case}: {e}"))?;
    }
    Ok(format!("{cases} {name} cases"))
}

fn booleans_upto_16() -> Vec<FinDistLattice> {
    (0..=4).map(fixtures::boolean).collect()
}

fn c1() -> Outcome {
    let l = fixtures::lambda5();
    match is_normal(&l) {
        NormalityCertificate::NotNormal { a, b } => {
            let mut pair = [l.name(a).to_owned(), l.name(b).to_owned()];
            pair.sort();
            if pair != ["{x,a}", "{x,b}"] {
                return Err(format!("unexpected cover {pair:?}"));
            }
        }
        _ => return Err("LAMBDA5 reported normal".into()),
    }
    let mut normal = vec![fixtures::chain3()];
    normal.extend(booleans_upto_16());
    for n in &normal {
        let cert = is_normal(n);
        if !cert.is_normal() {
            return Err(format!("{}-element lattice reported not normal", n.len()));
        }
        cert.check(n).map_err(|e| e.to_string())?;
    }
    Ok(format!("LAMBDA5 cover {{x,a}} v {{x,b}}; {} normal lattices certified", normal.len()))
}

fn normal_corpus() -> Vec<FinDistLattice> {
    (0..=4).flat_map(enumerate_distributive_lattices).filter(|l| is_normal(l).is_normal()).collect()
}

fn c2() -> Outcome {
    let corpus = normal_corpus();
    for n in &corpus {
        let c = complete_c(n).map_err(|e| e.to_string())?;
        completion_onto_center(n, &c).map_err(|e| e.to_string())?;
        check_completion(n, &c).map_err(|e| e.to_string())?;
    }
    Ok(format!("{} normal lattices with k <= 4", corpus.len()))
}

fn is_iso(dom: &FinDistLattice, cod: &FinDistLattice, map: &[usize]) -> Result<(), String> {
    check_hom(dom, cod, map).map_err(|e| e.to_string())?;
    let mut seen = vec![false; cod.len()];
    for &y in map {
        seen[y] = true;
    }
    if dom.len() != cod.len() || seen.contains(&false) {
        return Err("not bijective".into());
    }
    Ok(())
}

fn c3() -> Outcome {
    let corpus = normal_corpus();
    for n in &corpus {
        let c = complete_c(n).map_err(|e| e.to_string())?;
        let cc = complete_c(c.lattice()).map_err(|e| e.to_string())?;
        is_iso(c.lattice(), cc.lattice(), cc.doubledown_table()).map_err(|e| format!("C(C(N)) vs C(N): {e}"))?;
    }
    let bools = booleans_upto_16();
    for b in &bools {
        let c = complete_c(b).map_err(|e| e.to_string())?;
        is_iso(b, c.lattice(), c.doubledown_table())?;
        for x in b.elements() {
            let back = sup_inverse(b, c.ideal(c.doubledown(x))).map_err(|e| e.to_string())?;
            if back != x {
                return Err(format!("sup of doubledown({}) is {}", b.name(x), b.name(back)));
            }
        }
        for (i, ideal) in c.ideals().iter().enumerate() {
            if c.doubledown(sup_inverse(b, ideal).map_err(|e| e.to_string())?) != i {
                return Err(format!("doubledown of sup {} differs", ideal.name(b)));
            }
        }
        let a = KRFunctor::new(Arc::new(Presheaf::constant(Arc::new(FinCategory::terminal()), Arc::new(b.clone()))))
            .map_err(|e| e.to_string())?;
        verify_theorem(&a).map_err(|e| e.to_string())?;
    }
    Ok(format!("C idempotent on {} lattices; cu = Id on {} Boolean algebras", corpus.len(), bools.len()))
}

fn c4() -> Outcome {
    run_suite("lax-limit", search::suite_lax_limit, 100, 4, &Bounds::new(3, 6).unwrap())
}

fn c5() -> Outcome {
    let random = run_suite("tilde-adjunction", search::suite_tilde, 100, 5, &Bounds::new(3, 6).unwrap())?;
    let err = |e: laxframe::Error| e.to_string();
    let f = Arc::new(fixtures::f_ar());
    let tf = tilde(&f).map_err(err)?;
    check_psi_identity(&tf).map_err(err)?;
    let naturals = enumerate_transformations(tf.presheaf(), tf.presheaf(), Mode::Natural, None, usize::MAX);
    for alpha in &naturals {
        check_tilde_of_psi(alpha, &tf, &tf).map_err(err)?;
    }
    for alpha in &naturals {
        for beta in &naturals {
            check_psi_composition(alpha, beta, &tf, &tf, &tf).map_err(err)?;
        }
    }
    let id: TransData<_> = TransData::identity(tf.presheaf().clone());
    if !naturals.contains(&id) {
        return Err("identity missing from the F_AR enumeration".into());
    }
    Ok(format!("{random}; {} natural maps on tilde(F_AR)", naturals.len()))
}

fn c6() -> Outcome {
    let b = Bounds::new(3, 6).unwrap();
    let p = run_suite("powerset-iso", search::suite_powerset, 100, 6, &b)?;
    let i = run_suite("idl-iso", search::suite_idl, 100, 6, &b)?;
    let c = run_suite("c-iso", search::suite_c_iso, 100, 6, &b)?;
    Ok(format!("{p}; {i}; {c}"))
}

fn c7() -> Outcome {
    let b = Bounds::new(3, 6).unwrap();
    let t = run_suite("theorem", search::suite_theorem, 50, 7, &b)?;
    let h = run_suite("hom-correspondence", search::suite_hom_correspondence, 20, 7, &b)?;
    let a = KRFunctor::new(Arc::new(fixtures::a_ar())).map_err(|e| e.to_string())?;
    psi_functor(&a).map_err(|e| e.to_string())?;
    Ok(format!("{t}; {h}"))
}

fn c8() -> Outcome {
    let small = distributive_lattices_up_to(8);
    let kr: Vec<&FinDistLattice> = small.iter().filter(|l| is_compact_regular(l)).collect();
    let mut sizes: Vec<usize> = kr.iter().map(|l| l.len()).collect();
    sizes.sort();
    if sizes != [1, 2, 4, 8] {
        return Err(format!("compact regular sizes {sizes:?}"));
    }
    for l in &kr {
        for m in &kr {
            if let Some((f, g)) = hom_order_violation(l, m) {
                return Err(format!("{f:?} < {g:?} between {} and {} elements", l.len(), m.len()));
            }
        }
    }
    Ok(format!("{} lattices scanned, {} compact regular", small.len(), kr.len()))
}

fn c9() -> Outcome {
    let mut parts = Vec::new();
    for m in Mutation::ALL {
        let r = search::search(&SearchConfig { seed: 1, cases: 100, mutation: Some(m), ..Default::default() })
            .map_err(|e| e.to_string())?;
        if r.failures == 0 {
            return Err(format!("{m} went undetected"));
        }
        parts.push(format!("{m}: {} failures", r.failures));
    }
    let clean = search::search(&SearchConfig { seed: 1, cases: 100, ..Default::default() }).map_err(|e| e.to_string())?;
    if !clean.passed {
        return Err(format!("unmutated search failed: {clean}"));
    }
    Ok(parts.join(", "))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 non-normality witness", c1, 1),
        ("2 completion oracle", c2, 10),
        ("3 splitting laws", c3, 60),
        ("4 lax limits of NDL diagrams", c4, 60),
        ("5 tilde suite", c5, 300),
        ("6 internal comparisons", c6, 300),
        ("7 main theorem", c7, 600),
        ("8 hom-order discreteness", c8, 10),
        ("9 mutation sensitivity", c9, 600),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > Duration::from_secs(limit) => Err(format!("took {took:.2?}, limit {limit}s")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {name} ({took:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} ({took:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
