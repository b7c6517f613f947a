use proptest::prelude::*;

use laxframe::gen::{self, Bounds};
use laxframe::ndl::{complete_c, is_normal, well_inside, WellInside};
use laxframe::search::{case_rng, search, SearchConfig, SUITES};

fn corpus_lattice() -> impl Strategy<Value = usize> {
    0..gen::lattice_corpus().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fast_well_inside_matches_definition(i in corpus_lattice()) {
        let l = &gen::lattice_corpus()[i];
        let wi = WellInside::new(l);
        for a in l.elements() {
            for b in l.elements() {
                prop_assert_eq!(wi.holds(a, b), well_inside(l, a, b).unwrap().is_some());
            }
        }
    }

    #[test]
    fn certificates_verify(i in corpus_lattice()) {
        let l = &gen::lattice_corpus()[i];
        prop_assert!(is_normal(l).check(l).is_ok());
    }

    #[test]
    fn completions_are_boolean(i in corpus_lattice()) {
        let l = &gen::lattice_corpus()[i];
        if is_normal(l).is_normal() {
            prop_assert!(complete_c(l).unwrap().lattice().is_boolean());
        } else {
            prop_assert!(complete_c(l).is_err());
        }
    }

    #[test]
    fn every_suite_holds(seed in any::<u64>(), k in 0..SUITES.len()) {
        let b = Bounds::new(3, 5).unwrap();
        let (name, suite, _) = SUITES[k];
        let r = suite(&mut case_rng(seed, 0, k as u64), &b);
        prop_assert!(r.is_ok(), "{}: {:?}", name, r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn search_is_reproducible(seed in any::<u64>()) {
        let cfg = SearchConfig { seed, cases: 4, ..Default::default() };
        prop_assert_eq!(search(&cfg).unwrap(), search(&cfg).unwrap());
    }
}
