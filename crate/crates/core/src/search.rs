//! Randomized falsification over every invariant of the crate.
//!
//! Each case draws fresh instances for every suite from a ChaCha stream
//! determined by `(seed, case, suite)`, so reports are reproducible and
//! independent of scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::equivalence::{check_idempotence, hom_correspondence, jt_pointwise, psi_functor, verify_fixed, verify_theorem, KRFunctor};
use crate::error::{Error, Result};
use crate::fincat::{enumerate_transformations, validate_transformation, FinSet, Mode, Presheaf, TransData};
use crate::gen::{self, Bounds};
use crate::internal::{check_c_iso, check_idl_iso, check_powerset_iso, check_powerset_naturality, round_ideal_masks, set_natural_maps};
use crate::lax::{
    check_lax_naturality, check_psi_composition, check_psi_identity, check_psi_of_tilde, check_tilde_of_psi,
    check_tilde_vs_slice, check_unit_counit, lax_limit, tilde_on_lax,
};
use crate::mutation::{with_mutation, Mutation};
use crate::ndl::{check_completion, complete_c, completion_onto_center, hom_order_violation, is_normal};
use crate::order::find_isomorphism;

pub type Rng8 = ChaCha8Rng;

/// `ChaCha8` stream for one suite of one case.
pub fn case_rng(seed: u64, case: u64, suite: u64) -> Rng8 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case.wrapping_mul(64).wrapping_add(suite));
    rng
}

fn fail(msg: impl Into<String>) -> Error {
    Error::IsoFailure(msg.into())
}

pub fn suite_normality(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    let pool: Vec<_> = gen::lattice_corpus().iter().filter(|l| l.len() <= b.max_lattice).collect();
    let l = pool.choose(rng).unwrap();
    is_normal(l).check(l)
}

pub fn suite_completion(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    let pool: Vec<_> = gen::lattice_corpus()
        .iter()
        .filter(|l| l.len() <= b.max_lattice && is_normal(l).is_normal())
        .collect();
    let n = pool.choose(rng).unwrap();
    let c = complete_c(n)?;
    check_completion(n, &c)?;
    completion_onto_center(n, &c)?;
    let cc = complete_c(c.lattice())?;
    if find_isomorphism(c.lattice(), cc.lattice()).is_none() {
        return Err(fail("C is not idempotent"));
    }
    let mut fast: Vec<u64> =
        c.ideals().iter().map(|i| i.members().ones().fold(0, |acc, x| acc | 1 << x)).collect();
    fast.sort();
    let mut slow = round_ideal_masks(n)?;
    slow.sort();
    if fast != slow {
        return Err(fail("round ideals differ from the subset scan"));
    }
    Ok(())
}

pub fn suite_lax_limit(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    let d = gen::random_ndl_diagram(rng, b);
    let lim = lax_limit(&d)?;
    if !is_normal(lim.carrier()).is_normal() {
        return Err(fail("lax limit is not normal"));
    }
    lim.normality_by_recipe(&d)?;
    if !lim.joins_are_pointwise(&d) {
        return Err(fail("lax limit joins are not pointwise"));
    }
    Ok(())
}

/// Adjunction laws on a random pair `F, G` over one base.
pub fn suite_tilde(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    let p = gen::random_presheaf_pair(rng, b);
    check_tilde_vs_slice(&p.tf)?;
    check_tilde_vs_slice(&p.tg)?;
    check_unit_counit(&p.tf)?;
    check_psi_identity(&p.tf)?;

    let lax = enumerate_transformations(&p.f, &p.g, Mode::Lax, None, 16);
    let tildes = lax.iter().map(|phi| tilde_on_lax(phi, &p.tf, &p.tg)).collect::<Result<Vec<_>>>()?;
    for (i, phi) in lax.iter().enumerate() {
        validate_transformation(phi)?;
        check_psi_of_tilde(phi, &p.tf, &p.tg)?;
        for (j, chi) in lax.iter().enumerate() {
            if i != j && tildes[i] == tildes[j] {
                return Err(fail("tilde identifies distinct lax transformations"));
            }
            if phi.pointwise_leq(chi) && !tildes[i].pointwise_leq(&tildes[j]) {
                return Err(fail("tilde is not monotone"));
            }
        }
    }

    let (tfp, tgp) = (p.tf.presheaf(), p.tg.presheaf());
    let alpha = gen::random_transformation(rng, tfp, tgp, Mode::Natural);
    let self_f = gen::random_transformation(rng, tfp, tfp, Mode::Natural)
        .unwrap_or_else(|| TransData::identity(tfp.clone()));
    let self_g = gen::random_transformation(rng, tgp, tgp, Mode::Natural)
        .unwrap_or_else(|| TransData::identity(tgp.clone()));
    if let Some(alpha) = &alpha {
        check_tilde_of_psi(alpha, &p.tf, &p.tg)?;
        check_psi_composition(&self_f, alpha, &p.tf, &p.tf, &p.tg)?;
        check_psi_composition(alpha, &self_g, &p.tf, &p.tg, &p.tg)?;
    }
    check_tilde_of_psi(&self_f, &p.tf, &p.tf)?;

    if let Some(phi) = lax.choose(rng) {
        let phi_t = tilde_on_lax(phi, &p.tf, &p.tg)?;
        // φ1 = id, φ2 = φ, β = φ̃ ∘ α
        let id_f = TransData::identity(p.f.clone());
        let beta = self_f.then(&phi_t)?;
        check_lax_naturality(&id_f, phi, &self_f, &beta, &p.tf, &p.tf, &p.tf, &p.tg)?;
        // φ1 = φ, φ2 = id, α = β ∘ φ̃
        let id_g = TransData::identity(p.g.clone());
        let alpha2 = phi_t.then(&self_g)?;
        check_lax_naturality(phi, &id_g, &alpha2, &self_g, &p.tf, &p.tg, &p.tg, &p.tg)?;
    }
    Ok(())
}

pub fn suite_powerset(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    let a = Arc::new(gen::random_set_presheaf(rng, b));
    check_powerset_iso(&a)?;
    let point = Arc::new(FinSet::new(vec!["*".into()]).unwrap());
    let terminal = Arc::new(Presheaf::constant(a.base().clone(), point));
    for target in [a.clone(), terminal] {
        let maps = set_natural_maps(&a, &target, 8);
        if let Some(alpha) = maps.choose(rng) {
            check_powerset_naturality(alpha)?;
        }
    }
    Ok(())
}

pub fn suite_idl(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    check_idl_iso(&gen::random_poset_presheaf(rng, b)).map(|_| ())
}

pub fn suite_c_iso(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    check_c_iso(&gen::random_ndl_presheaf_small(rng, b)).map(|_| ())
}

pub fn suite_theorem(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    let a = KRFunctor::new(gen::random_kr_presheaf(rng, b))?;
    verify_theorem(&a)?;
    let frame = psi_functor(&a)?;
    verify_fixed(&frame)?;
    for o in a.presheaf().base().objects() {
        jt_pointwise(&frame, o)?;
    }
    Ok(())
}

pub fn suite_hom_correspondence(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    let (x, y) = gen::random_kr_pair(rng, b);
    let r = hom_correspondence(&KRFunctor::new(x)?, &KRFunctor::new(y)?)?;
    if r.natural != r.fixed {
        return Err(fail("hom sets differ in size"));
    }
    Ok(())
}

pub fn suite_idempotence(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    check_idempotence(&gen::random_ndl_presheaf_small(rng, b)).map(|_| ())
}

pub fn suite_hom_order(rng: &mut Rng8, b: &Bounds) -> Result<()> {
    let pool: Vec<_> = (0..=3).map(crate::fixtures::boolean).filter(|l| l.len() <= b.max_lattice.max(2)).collect();
    let (l, m) = (pool.choose(rng).unwrap(), pool.choose(rng).unwrap());
    match hom_order_violation(l, m) {
        None => Ok(()),
        Some(_) => Err(fail("comparable distinct homs between Boolean lattices")),
    }
}

pub type Suite = fn(&mut Rng8, &Bounds) -> Result<()>;

/// Every suite with its name; some run only on every `stride`-th case.
pub const SUITES: &[(&str, Suite, u64)] = &[
    ("normality", suite_normality, 1),
    ("completion", suite_completion, 1),
    ("lax-limit", suite_lax_limit, 1),
    ("tilde-adjunction", suite_tilde, 1),
    ("powerset-iso", suite_powerset, 1),
    ("idl-iso", suite_idl, 1),
    ("c-iso", suite_c_iso, 1),
    ("theorem", suite_theorem, 1),
    ("idempotence", suite_idempotence, 2),
    ("hom-correspondence", suite_hom_correspondence, 5),
    ("hom-order", suite_hom_order, 1),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub seed: u64,
    pub cases: u64,
    pub max_objects: usize,
    pub max_lattice: usize,
    pub mutation: Option<Mutation>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 1, cases: 100, max_objects: 3, max_lattice: 6, mutation: None }
    }
}

impl SearchConfig {
    pub fn bounds(&self) -> Result<Bounds> {
        if self.cases == 0 {
            return Err(Error::Config("case count must be positive".into()));
        }
        Bounds::new(self.max_objects, self.max_lattice)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub checked: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: u64,
    pub invariant: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub invariants: BTreeMap<String, Tally>,
    pub failures: u64,
    pub first_failure: Option<Failure>,
    pub passed: bool,
}

type CaseOutcome = Vec<(&'static str, Option<String>)>;

fn run_case(case: u64, cfg: &SearchConfig, bounds: &Bounds) -> CaseOutcome {
    with_mutation(cfg.mutation, || {
        SUITES
            .iter()
            .enumerate()
            .filter(|(_, (_, _, stride))| case.is_multiple_of(*stride))
            .map(|(k, (name, suite, _))| {
                let mut rng = case_rng(cfg.seed, case, k as u64);
                let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| suite(&mut rng, bounds)));
                let err = match outcome {
                    Ok(Ok(())) => None,
                    Ok(Err(e)) => Some(e.to_string()),
                    Err(p) => Some(format!(
                        "panic: {}",
                        p.downcast_ref::<String>().map(String::as_str).or(p.downcast_ref::<&str>().copied()).unwrap_or("?")
                    )),
                };
                (*name, err)
            })
            .collect()
    })
}

/// Runs every suite on `cases` seeded cases, in parallel.
pub fn search(cfg: &SearchConfig) -> Result<SearchReport> {
    let bounds = cfg.bounds()?;
    let results: Vec<(u64, CaseOutcome)> = (0..cfg.cases)
        .into_par_iter()
        .map(|case| (case, run_case(case, cfg, &bounds)))
        .collect();
    let mut invariants: BTreeMap<String, Tally> =
        SUITES.iter().map(|(n, _, _)| (n.to_string(), Tally::default())).collect();
    let mut first_failure = None;
    let mut failures = 0;
    for (case, outcomes) in results {
        for (name, err) in outcomes {
            let t = invariants.get_mut(name).unwrap();
            t.checked += 1;
            if let Some(message) = err {
                t.failed += 1;
                failures += 1;
                if first_failure.is_none() {
                    first_failure = Some(Failure { case, invariant: name.to_owned(), message });
                }
            }
        }
    }
    Ok(SearchReport { config: cfg.clone(), invariants, failures, passed: failures == 0, first_failure })
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "search seed={} cases={} max-objects={} max-lattice={} mutation={}",
            c.seed,
            c.cases,
            c.max_objects,
            c.max_lattice,
            c.mutation.map_or("none".to_owned(), |m| m.to_string())
        )?;
        for (name, t) in &self.invariants {
            writeln!(f, "  {name:<20} checked {:>4}  failed {:>4}", t.checked, t.failed)?;
        }
        match &self.first_failure {
            None => write!(f, "PASS"),
            Some(x) => write!(f, "FAIL: {} failure(s); first at case {} ({}): {}", self.failures, x.case, x.invariant, x.message),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_config() {
        let cfg = SearchConfig { max_objects: 0, ..Default::default() };
        assert!(matches!(search(&cfg), Err(Error::Config(_))));
        let cfg = SearchConfig { cases: 0, ..Default::default() };
        assert!(matches!(search(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn small_search_passes_and_is_deterministic() {
        let cfg = SearchConfig { cases: 6, ..Default::default() };
        let r = search(&cfg).unwrap();
        assert!(r.passed, "{r}");
        assert_eq!(r, search(&cfg).unwrap());
    }

    #[test]
    fn unit_base_is_fine() {
        let b = Bounds::new(1, 2).unwrap();
        for s in SUITES {
            (s.1)(&mut case_rng(0, 0, 0), &b).unwrap();
        }
    }
}
