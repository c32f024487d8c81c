mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rsft_core::coalgebra::TensorWord;
use rsft_core::coderivation::{coderivation, left_action, right_action, word_action};
use rsft_core::morphism::{compose, identity, MorphismHandle, Potential};
use rsft_core::{Ctx, Kind, Side};

fn handle(f: &rsft_core::AlgElement, src: Side, tgt: Side) -> MorphismHandle {
    MorphismHandle::new(Potential::new(f.clone(), src, tgt).unwrap()).unwrap()
}

#[test]
fn direct_and_assembled_agree() {
    let t = all_sides_table();
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let mut nonzero = 0;
    for _ in 0..40 {
        let f = random_potential_near_identity(&mut rng, &t, Side::Plus, Side::Minus, 3, 3);
        let m = handle(&f, Side::Plus, Side::Minus);
        let w = random_q_word(&mut rng, &t, Side::Plus, 3, true);
        let a = m.apply(&w, Some(4)).unwrap();
        let b = m.apply_direct(&w, Some(4)).unwrap();
        nonzero += usize::from(!a.is_zero());
        assert_eq!(a, b, "f = {f}, w = {w}");
    }
    assert!(nonzero >= 10, "only {nonzero} nontrivial cases");
}

#[test]
fn morphism_intertwines_source_differential() {
    // (e^f ←D_{D⁺w})|_{p⁺=0} = ((e^f ←D_{h⁺}) ←D_w)|_{p⁺=0}
    let t = all_sides_table();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut nonzero = 0;
    for _ in 0..40 {
        let f = random_potential_near_identity(&mut rng, &t, Side::Plus, Side::Minus, 3, 2);
        let h = random_hamiltonian(&mut rng, &t, Side::Plus, 3, 2);
        let m = handle(&f, Side::Plus, Side::Minus);
        let w = random_q_word(&mut rng, &t, Side::Plus, 3, false);
        let lhs = m.apply_direct(&coderivation(&h, &w).unwrap(), None).unwrap();
        let ef = TensorWord::exp(&f, w.terms().next().unwrap().0.q_len() as usize + 3);
        let rhs = word_action(&left_action(&h, &ef).unwrap(), &w).set_zero(Kind::P, Side::Plus);
        nonzero += usize::from(!lhs.is_zero());
        assert_eq!(lhs, rhs, "f = {f}, h = {h}, w = {w}");
    }
    assert!(nonzero >= 10, "only {nonzero} nontrivial cases");
}

#[test]
fn morphism_intertwines_target_differential() {
    // D⁻(Φ w) = ((→D_{h⁻} e^f) ←D_w)|_{p⁺=0}
    let t = all_sides_table();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut nonzero = 0;
    for _ in 0..40 {
        let f = random_potential_near_identity(&mut rng, &t, Side::Plus, Side::Minus, 3, 2);
        let h = random_hamiltonian(&mut rng, &t, Side::Minus, 3, 2);
        let m = handle(&f, Side::Plus, Side::Minus);
        let w = random_q_word(&mut rng, &t, Side::Plus, 3, false);
        let lhs = coderivation(&h, &m.apply_direct(&w, None).unwrap()).unwrap();
        let ef = TensorWord::exp(&f, w.terms().next().unwrap().0.q_len() as usize + 1);
        let rhs = word_action(&right_action(&h, &ef).unwrap(), &w).set_zero(Kind::P, Side::Plus);
        nonzero += usize::from(!lhs.is_zero());
        assert_eq!(lhs, rhs, "f = {f}, h = {h}, w = {w}");
    }
    assert!(nonzero >= 10, "only {nonzero} nontrivial cases");
}

#[test]
fn exponential_identities() {
    let t = all_sides_table();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let k = 4;
    for _ in 0..30 {
        let f = random_potential_near_identity(&mut rng, &t, Side::Plus, Side::Minus, 3, 2);
        let ef = TensorWord::exp(&f, k);
        let hm = random_hamiltonian(&mut rng, &t, Side::Minus, 2, 2);
        let hp = random_hamiltonian(&mut rng, &t, Side::Plus, 2, 2);
        let restrict_len = |x: &TensorWord| {
            let mut y = x.clone();
            y.retain(|w| w.len() < k);
            y
        };
        let r = hm.restrict_to_lagrangian(&f, Side::Plus, Side::Minus);
        let lhs = restrict_len(&right_action(&hm, &ef).unwrap());
        let rhs = restrict_len(&TensorWord::from_element(&r).odot(&ef));
        assert_eq!(lhs, rhs, "f = {f}, h⁻ = {hm}");
        let r = hp.restrict_to_lagrangian(&f, Side::Plus, Side::Minus);
        let lhs = restrict_len(&left_action(&hp, &ef).unwrap());
        let rhs = restrict_len(&ef.odot(&TensorWord::from_element(&r)));
        assert_eq!(lhs, rhs, "f = {f}, h⁺ = {hp}");
    }
}

#[test]
fn phi_matches_unrestricted_expansion() {
    let t = all_sides_table();
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..40 {
        let f = random_potential_near_identity(&mut rng, &t, Side::Plus, Side::Minus, 3, 3);
        let m = handle(&f, Side::Plus, Side::Minus);
        let w = random_q_word(&mut rng, &t, Side::Plus, 3, true);
        let (word, c) = w.terms().next().map(|(a, b)| (a.clone(), b.clone())).unwrap();
        let w = w.scale(&c.inverse().unwrap());
        let r = word.len();
        let tau = word.q_len() as usize;
        let mut total = rsft_core::AlgElement::zero(&t, Ctx::A, rsft_core::Truncation::none());
        for n in 0..=tau + 1 {
            let mut pw = TensorWord::unit(&t);
            for j in 1..=n {
                pw = pw.odot(&TensorWord::from_element(&f)).scale_q(&rsft_core::Q::new(1.into(), (j as i64).into()));
            }
            let s1 = word_action(&pw, &w).set_zero(Kind::P, Side::Plus).length_part(1).to_element(Ctx::A);
            if n + r != tau + 1 {
                assert!(s1.is_zero(), "connected part with n = {n}, r = {r}, tau = {tau}");
            }
            total = total.add_any(&s1);
        }
        assert_eq!(m.phi_monomials(word.factors()), total);
    }
}

#[test]
fn composition_is_functorial() {
    let t = all_sides_table();
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut nonzero = 0;
    for _ in 0..25 {
        let fp = random_potential_near_identity(&mut rng, &t, Side::Plus, Side::Mid, 3, 2);
        let fm = random_potential_near_identity(&mut rng, &t, Side::Mid, Side::Minus, 3, 2);
        let pp = Potential::new(fp.clone(), Side::Plus, Side::Mid).unwrap();
        let pm = Potential::new(fm.clone(), Side::Mid, Side::Minus).unwrap();
        let fc = compose(&pm, &pp, 4).unwrap();
        let mc = MorphismHandle::new(fc.clone()).unwrap();
        let mp = MorphismHandle::new(pp).unwrap();
        let mm = MorphismHandle::new(pm).unwrap();
        let w = random_q_word(&mut rng, &t, Side::Plus, 3, true);
        let lhs = mc.apply(&w, None).unwrap();
        let rhs = mm.apply(&mp.apply(&w, None).unwrap(), None).unwrap();
        nonzero += usize::from(!lhs.is_zero());
        assert_eq!(lhs, rhs, "f⁺ = {fp}, f⁻ = {fm}, f = {}, w = {w}", fc.element());
    }
    assert!(nonzero >= 10, "only {nonzero} nontrivial cases");
}

#[test]
fn composition_with_identity() {
    let t = all_sides_table();
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..20 {
        let f = random_potential_near_identity(&mut rng, &t, Side::Plus, Side::Minus, 3, 3);
        let p = Potential::new(f.clone(), Side::Plus, Side::Minus).unwrap();
        let i_plus = identity(&t, Side::Plus, Side::Mid).unwrap();
        let i_minus = identity(&t, Side::Mid, Side::Minus).unwrap();
        let right = compose(&p.with_sides(Side::Mid, Side::Minus).unwrap(), &i_plus, 6).unwrap();
        assert_eq!(right, p);
        let left = compose(&i_minus, &p.with_sides(Side::Plus, Side::Mid).unwrap(), 6).unwrap();
        assert_eq!(left, p);
    }
}
