use std::sync::Arc;

use rsft_core::coalgebra::TensorWord;
use rsft_core::coderivation::coderivation;
use rsft_core::invariants::*;
use rsft_core::morphism::identity;
use rsft_core::zoo::{energy_levels, exact_cobordism, novikov_h, novikov_table, novikov_torsion, order_cobordism, order_single, pair_product, singles, tilde_gap, trivial};
use rsft_core::{parse_element, AlgElement, AlgError, Ctx, GeneratorTable, Side, Truncation};

fn el(t: &Arc<GeneratorTable>, s: &str) -> AlgElement {
    parse_element(s, t, Ctx::P, Truncation::none()).unwrap()
}

fn small() -> SearchBounds {
    SearchBounds::new(3, 4)
}

fn verify_torsion(h: &AlgElement, r: &SearchResult) {
    if let SearchStatus::Found { value, certificate } = &r.status {
        assert_eq!(coderivation(h, certificate).unwrap(), TensorWord::one_l(h.table()));
        assert!(certificate.max_word_len() <= value + 1);
    }
}

#[test]
fn torsion_on_fixtures() {
    for kappa in [1, 2] {
        let s = trivial(kappa);
        let r = torsion(&s.h, Side::Mid, &small(), CandidateSpace::SingleLetters).unwrap();
        assert_eq!(r.value(), Some(0), "{}", s.name);
        verify_torsion(&s.h, &r);
    }
    let s = pair_product();
    let r = torsion(&s.h, Side::Mid, &small(), CandidateSpace::SingleLetters).unwrap();
    assert_eq!(r.value(), Some(1));
    verify_torsion(&s.h, &r);
    // one letter is not enough
    let r = torsion(&s.h, Side::Mid, &SearchBounds::new(1, 4), CandidateSpace::AllMonomials).unwrap();
    assert_eq!(r.status, SearchStatus::Unknown);

    let t = trivial(1).table;
    let zero = AlgElement::zero(&t, Ctx::P, Truncation::none());
    assert_eq!(torsion(&zero, Side::Mid, &small(), CandidateSpace::AllMonomials).unwrap().status, SearchStatus::Unknown);
}

#[test]
fn tilde_is_below_torsion() {
    for s in singles() {
        for space in [CandidateSpace::SingleLetters, CandidateSpace::AllMonomials] {
            let b = small();
            let full = torsion(&s.h, Side::Mid, &b, space).unwrap();
            let tilde = torsion_tilde(&s.h, Side::Mid, &b, space).unwrap();
            verify_torsion(&s.h, &full);
            if let Some(v) = full.value() {
                let tv = tilde.value().unwrap_or_else(|| panic!("{}: T found but T̃ not", s.name));
                assert!(tv <= v, "{}", s.name);
            }
        }
    }
    let s = tilde_gap();
    let b = small();
    assert_eq!(torsion_tilde(&s.h, Side::Mid, &b, CandidateSpace::SingleLetters).unwrap().value(), Some(0));
    assert_eq!(torsion(&s.h, Side::Mid, &b, CandidateSpace::AllMonomials).unwrap().status, SearchStatus::Unknown);
}

#[test]
fn candidate_spaces_agree_on_small_fixtures() {
    for s in [trivial(1), trivial(2), pair_product()] {
        let a = torsion(&s.h, Side::Mid, &small(), CandidateSpace::SingleLetters).unwrap();
        let b = torsion(&s.h, Side::Mid, &small(), CandidateSpace::AllMonomials).unwrap();
        assert_eq!(a.value(), b.value(), "{}", s.name);
    }
    for s in singles() {
        let a = torsion(&s.h, Side::Mid, &small(), CandidateSpace::SingleLetters).unwrap();
        let b = torsion(&s.h, Side::Mid, &small(), CandidateSpace::AllMonomials).unwrap();
        if let Some(v) = a.value() {
            assert!(b.value().is_some_and(|w| w <= v), "{}", s.name);
        }
    }
}

#[test]
fn results_are_monotone_in_bounds() {
    for s in singles() {
        let mut last: Option<usize> = None;
        for (k, q) in [(1, 2), (2, 3), (3, 4), (4, 5)] {
            let r = torsion(&s.h, Side::Mid, &SearchBounds::new(k, q), CandidateSpace::AllMonomials).unwrap();
            if let Some(prev) = last {
                assert_eq!(r.value(), Some(prev), "{} lost its value at k={k}", s.name);
            }
            last = r.value().or(last);
            assert_eq!(r.bounds.k_max, k);
        }
    }
}

#[test]
fn zero_torsion_matches_vanishing_homology() {
    let mut checked = 0;
    for s in singles() {
        let b = small();
        let t0 = torsion(&s.h, Side::Mid, &b, CandidateSpace::AllMonomials).unwrap().value() == Some(0);
        let acyclic = homology_window(&s.h, Side::Mid, &b).unwrap().iter().all(|(_, d)| *d == 0);
        assert_eq!(t0, acyclic, "{}", s.name);
        checked += 1;
    }
    assert!(checked >= 3);
}

#[test]
fn novikov_torsion_per_level() {
    let s = novikov_torsion();
    let mut b = small();
    b.energy_levels = energy_levels();
    let rs = torsion_novikov(&s.h, Side::Mid, &b, CandidateSpace::AllMonomials).unwrap();
    assert_eq!(rs.len(), 3);
    let mut sizes = Vec::new();
    for (r, e) in rs.iter().zip(energy_levels()) {
        assert_eq!(r.energy.as_ref(), Some(&e));
        assert_eq!(r.value(), Some(0));
        let cert = r.certificate().unwrap();
        let d = coderivation(&s.h, cert).unwrap().with_energy(Some(e.clone()));
        assert_eq!(d, TensorWord::one_l(&s.table).with_energy(Some(e)));
        sizes.push(cert.len());
    }
    assert!(sizes.windows(2).all(|w| w[0] <= w[1]) && sizes[0] < sizes[2], "{sizes:?}");
    // every term of this h carries q_w, so 1l is out of reach
    let t = novikov_table();
    let h = novikov_h(&t, Side::Mid);
    for r in torsion_novikov(&h, Side::Mid, &b, CandidateSpace::AllMonomials).unwrap() {
        assert_eq!(r.status, SearchStatus::Unknown);
    }
}

#[test]
fn order_preconditions() {
    let (t, h, g) = order_single();
    assert_eq!(order(&el(&t, "p:y"), &g, Side::Mid, &small()).err(), Some(AlgError::NotHat));
    assert_eq!(order(&h, &el(&t, "p:x"), Side::Mid, &small()).err(), Some(AlgError::BracketNotZero));
    assert_eq!(order(&h, &el(&t, "q:u*q:v"), Side::Mid, &small()).err(), Some(AlgError::NotOverline));
    let zero = AlgElement::zero(&t, Ctx::P, Truncation::none());
    let r = order(&h, &zero, Side::Mid, &small()).unwrap();
    assert_eq!(r.result.status, SearchStatus::Unknown);
}

#[test]
fn order_on_fixture() {
    let (_, h, g) = order_single();
    let r = order(&h, &g, Side::Mid, &small()).unwrap();
    assert_eq!(r.result.value(), Some(2));
    assert!(r.boundaries_killed && r.boundaries_tested > 0);
    let cert = r.result.certificate().unwrap();
    assert!(coderivation(&h, cert).unwrap().is_zero());
    assert!(pi(&coderivation(&g, cert).unwrap()).is_one());
    assert_eq!(order(&h, &g, Side::Mid, &SearchBounds::new(1, 4)).unwrap().result.status, SearchStatus::Unknown);
}

#[test]
fn torsion_monotone_along_exact_cobordism() {
    let c = exact_cobordism();
    let m = torsion_monotonicity(&c.f, &c.h_plus, &c.h_minus, &small(), CandidateSpace::AllMonomials).unwrap();
    assert_eq!((m.plus.value(), m.minus.value()), (Some(1), Some(0)));
    assert_eq!(m.holds, Some(true));
    assert_eq!(m.transported_verifies, Some(true));
    let swapped = torsion_monotonicity(&c.f, &c.h_plus.scale_q(&two()), &c.h_minus, &small(), CandidateSpace::AllMonomials);
    assert_eq!(swapped.err(), Some(AlgError::NotChainMap));
}

#[test]
fn order_homotopy_identity() {
    let o = order_cobordism();
    assert!(check_order_homotopy(&o.f, &o.g, &o.g_plus, &o.g_minus, &o.h_plus, &o.h_minus, 3).unwrap());
    let doubled = o.g.scale_q(&two());
    assert!(!check_order_homotopy(&o.f, &doubled, &o.g_plus, &o.g_minus, &o.h_plus, &o.h_minus, 3).unwrap());
    let m = order_monotonicity(&o.f, &o.g, &o.g_plus, &o.g_minus, &o.h_plus, &o.h_minus, &small()).unwrap();
    assert_eq!((m.plus.result.value(), m.minus.result.value()), (Some(2), Some(2)));
    assert_eq!(m.holds, Some(true));
    assert_eq!(m.chain_holds, Some(true));
    assert_eq!(m.chain.as_ref().map(Vec::len), Some(7));
    assert_eq!(
        order_monotonicity(&o.f, &doubled, &o.g_plus, &o.g_minus, &o.h_plus, &o.h_minus, &small()).err(),
        Some(AlgError::HomotopyFails)
    );
}

#[test]
fn identity_cobordism_needs_no_homotopy() {
    let o = order_cobordism();
    let t = &o.table;
    let i = identity(t, Side::Plus, Side::Minus).unwrap();
    let h_minus = o.h_plus.rename_side(Side::Plus, Side::Minus).unwrap();
    let g_minus = o.g_plus.rename_side(Side::Plus, Side::Minus).unwrap();
    let zero = AlgElement::zero(t, Ctx::P, Truncation::none());
    assert!(check_order_homotopy(&i, &zero, &o.g_plus, &g_minus, &o.h_plus, &h_minus, 3).unwrap());
    let m = order_monotonicity(&i, &zero, &o.g_plus, &g_minus, &o.h_plus, &h_minus, &small()).unwrap();
    assert_eq!(m.plus.result.value(), m.minus.result.value());
    assert_eq!(m.chain_holds, Some(true));
    // g⁻ must match g⁺ when g = 0
    let wrong = g_minus.scale_q(&two());
    assert!(!check_order_homotopy(&i, &zero, &o.g_plus, &wrong, &o.h_plus, &h_minus, 3).unwrap());
}

fn two() -> rsft_core::Q {
    rsft_core::Q::from_integer(2.into())
}
