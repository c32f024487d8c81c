mod common;

use std::sync::Arc;

use common::random_q_word;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsft_core::coalgebra::TensorWord;
use rsft_core::coderivation::{check_master, coderivation, right_action};
use rsft_core::mctwist::FilteredContext;
use rsft_core::morphism::{check_chain_map, identity, MorphismHandle};
use rsft_core::zoo::{energy_levels, novikov_exact, novikov_h, novikov_nonexact, novikov_table};
use rsft_core::{AlgElement, AlgError, Ctx, GeneratorTable, Kind, Monomial, Scalar, Side, Truncation, Var, Q};

fn qq(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn lam(t: &Arc<GeneratorTable>, c: i64, e: Q, vars: &[Var]) -> AlgElement {
    let m = Monomial::from_vars(t, vars).unwrap().0;
    AlgElement::from_term(t, Ctx::A, Truncation::none(), m, Scalar::monomial(Q::from_integer(c.into()), e))
}

/// Random even element of positive level in the q-variables on `side`.
fn random_even_positive(rng: &mut ChaCha8Rng, t: &Arc<GeneratorTable>, side: Side) -> AlgElement {
    let z = Var::q(0, side);
    let mut acc = AlgElement::zero(t, Ctx::A, Truncation::none());
    let k = rng.gen_range(1..=2);
    for _ in 0..rng.gen_range(1..=2) {
        let e = qq(rng.gen_range(1..=3), 2);
        let c = [-2, -1, 1, 2][rng.gen_range(0..4)];
        acc = acc.add_any(&lam(t, c, e, &vec![z; k]));
    }
    acc
}

fn sample_words(rng: &mut ChaCha8Rng, t: &Arc<GeneratorTable>, side: Side, n: usize) -> Vec<TensorWord> {
    (0..n).map(|_| random_q_word(rng, t, side, 3, true)).collect()
}

#[test]
fn exponential_is_multiplicative() {
    let t = novikov_table();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for e in energy_levels() {
        let fc = FilteredContext::new(&t, e).unwrap();
        for _ in 0..20 {
            let a = random_even_positive(&mut rng, &t, Side::Mid);
            let b = random_even_positive(&mut rng, &t, Side::Mid);
            assert!(fc.exponential_product_check(&a, &b).unwrap(), "a = {a}, b = {b}");
            let zero = AlgElement::zero(&t, Ctx::A, Truncation::none());
            assert!(fc.exponential_product_check(&a, &zero).unwrap());
            for w in sample_words(&mut rng, &t, Side::Mid, 3) {
                let back = fc.psi(&a.neg(), &fc.psi(&a, &w).unwrap()).unwrap();
                assert_eq!(back, fc.reduce_word(&w));
            }
        }
    }
}

#[test]
fn exponential_matches_binomial_expansion() {
    // e^{c λ^e q_z} = Σ_n c^n λ^{ne} q_z^{⊙n}/n!, written out directly
    let t = novikov_table();
    let z = Var::q(0, Side::Mid);
    for e in energy_levels() {
        let fc = FilteredContext::new(&t, e.clone()).unwrap();
        let a = lam(&t, 3, qq(1, 2), &[z]);
        let mut expect = TensorWord::zero(&t).with_energy(Some(e.clone()));
        let mut n = 0i64;
        let mut fact = 1i64;
        while qq(n, 2) < e {
            let c = Q::from_integer(3i64.pow(n as u32).into()) / Q::from_integer(fact.into());
            let w = TensorWord::monomial_word(&t, vec![Monomial::var(z); n as usize], Scalar::monomial(c, qq(n, 2)));
            expect = expect.add(&w);
            n += 1;
            fact *= n;
        }
        assert_eq!(fc.exp(&a).unwrap(), expect);
    }
}

#[test]
fn maurer_cartan_preconditions() {
    let t = novikov_table();
    let fc = FilteredContext::new(&t, Q::from_integer(1.into())).unwrap();
    let h = novikov_h(&t, Side::Mid);
    let z = Var::q(0, Side::Mid);
    let zero = AlgElement::zero(&t, Ctx::A, Truncation::none());
    assert_eq!(fc.is_maurer_cartan(&zero, &h, false), Err(AlgError::ZeroFiltration));
    assert_eq!(fc.is_maurer_cartan(&zero, &h, true), Ok(true));
    let unfiltered = lam(&t, 1, Q::from_integer(0.into()), &[z]);
    assert_eq!(fc.is_maurer_cartan(&unfiltered, &h, false), Err(AlgError::ZeroFiltration));
    let odd = lam(&t, 1, qq(1, 2), &[Var::q(1, Side::Mid)]);
    assert!(matches!(fc.is_maurer_cartan(&odd, &h, false), Err(AlgError::DegreeMismatch { .. })));
    assert!(FilteredContext::new(&t, Q::from_integer(0.into())).is_err());
    // the trivial structure accepts every admissible element
    let h0 = AlgElement::zero(&t, Ctx::P, Truncation::none());
    assert_eq!(fc.is_maurer_cartan(&lam(&t, 5, qq(1, 3), &[z]), &h0, false), Ok(true));
    // sign matters once a⊙a survives the cutoff: +λ^{1/2}q_z is MC, −λ^{1/2}q_z is not
    let fc = FilteredContext::new(&t, qq(3, 2)).unwrap();
    assert_eq!(fc.is_maurer_cartan(&lam(&t, 1, qq(1, 2), &[z]), &h, false), Ok(true));
    assert_eq!(fc.is_maurer_cartan(&lam(&t, -1, qq(1, 2), &[z]), &h, false), Ok(false));
    assert_eq!(fc.twist_hamiltonian(&h, &lam(&t, -1, qq(1, 2), &[z])), Err(AlgError::NotMaurerCartan));
}

#[test]
fn twisted_codifferential_matches_twisted_hamiltonian() {
    let t = novikov_table();
    let h = novikov_h(&t, Side::Mid);
    let a = lam(&t, 1, qq(1, 2), &[Var::q(0, Side::Mid)]);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut nontrivial = 0;
    for e in energy_levels() {
        let fc = FilteredContext::new(&t, e).unwrap();
        let ha = fc.twist_hamiltonian(&h, &a).unwrap();
        assert!(check_master(&ha).unwrap());
        assert!(ha.set_kind_zero(Kind::P).is_zero(), "h^a has a p-free part: {ha}");
        let unit = TensorWord::one_l(&t);
        assert!(fc.twist_coderivation(&h, &a, &unit).unwrap().is_zero());
        for w in sample_words(&mut rng, &t, Side::Mid, 25) {
            let da = fc.twist_coderivation(&h, &a, &w).unwrap();
            let direct = fc.reduce_word(&coderivation(&fc.reduce(&ha), &fc.reduce_word(&w)).unwrap());
            assert_eq!(da, direct, "w = {w}");
            let dda = fc.twist_coderivation(&h, &a, &da).unwrap();
            assert!(dda.is_zero(), "(D^a)² w = {dda}");
            nontrivial += usize::from(!da.is_zero());
        }
    }
    assert!(nontrivial >= 10);
    // a = 0 leaves everything unchanged
    let fc = FilteredContext::new(&t, Q::from_integer(1.into())).unwrap();
    let zero = AlgElement::zero(&t, Ctx::A, Truncation::none());
    assert_eq!(fc.twist_hamiltonian(&h, &zero).unwrap(), fc.reduce(&h));
}

#[test]
fn pushforward_of_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for e in energy_levels() {
        let c = novikov_exact(e.clone());
        let fc = FilteredContext::new(&c.table, e).unwrap();
        let a = c.mc.clone().expect("fixture has an MC element");
        let m = MorphismHandle::new(c.f.clone()).unwrap();
        let fa = fc.pushforward_mc(&m, &a, &c.h_plus, &c.h_minus).unwrap();
        assert!(fc.is_maurer_cartan(&fa, &c.h_minus, true).unwrap(), "f_*(a) = {fa}");
        let lhs = fc.reduce_word(&m.apply(&fc.exp(&a).unwrap(), None).unwrap());
        assert_eq!(lhs, fc.exp(&fa).unwrap());

        let (fa2, twisted) = fc.twisted_morphism(&m, &a, &c.h_plus, &c.h_minus).unwrap();
        assert_eq!(fa, fa2);
        let g = fc.twisted_generating_potential(&m, &a);
        assert_eq!(g.set_zero(Kind::P, Side::Plus).with_ctx(Ctx::A), fa, "leading term of g");
        let unit = TensorWord::one_l(&c.table);
        assert_eq!(fc.reduce_word(&twisted.apply(&unit, None).unwrap()), fc.reduce_word(&unit));
        for w in sample_words(&mut rng, &c.table, Side::Plus, 20) {
            let via_def = fc.psi(&fa.neg(), &m.apply(&fc.psi(&a, &w).unwrap(), None).unwrap()).unwrap();
            assert_eq!(fc.reduce_word(&twisted.apply(&w, None).unwrap()), via_def, "w = {w}");
            let left = twisted.apply(&fc.twist_coderivation(&c.h_plus, &a, &w).unwrap(), None).unwrap();
            let right = fc.twist_coderivation(&c.h_minus, &fa, &twisted.apply(&w, None).unwrap()).unwrap();
            assert_eq!(fc.reduce_word(&left), right, "w = {w}");
        }
    }
}

#[test]
fn pushforward_along_identity_renames() {
    let t = novikov_table();
    let h_plus = novikov_h(&t, Side::Plus);
    let h_minus = novikov_h(&t, Side::Minus);
    let fc = FilteredContext::new(&t, Q::from_integer(1.into())).unwrap();
    let m = MorphismHandle::new(identity(&t, Side::Plus, Side::Minus).unwrap()).unwrap();
    let a = lam(&t, 1, qq(1, 2), &[Var::q(0, Side::Plus)]);
    let fa = fc.pushforward_mc(&m, &a, &h_plus, &h_minus).unwrap();
    assert_eq!(fa, a.rename_side(Side::Plus, Side::Minus).unwrap());
    let zero = AlgElement::zero(&t, Ctx::A, Truncation::none());
    assert!(fc.pushforward_mc(&m, &zero, &h_plus, &h_minus).unwrap().is_zero());
    let (_, same) = fc.twisted_morphism(&m, &zero, &h_plus, &h_minus).unwrap();
    assert_eq!(same.potential().element(), m.potential().element());
}

#[test]
fn nonexact_cobordism_factors_through_twist() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for e in energy_levels() {
        let c = novikov_nonexact(e.clone());
        assert!(check_chain_map(&c.f, &c.h_plus, &c.h_minus).unwrap());
        let fc = FilteredContext::new(&c.table, e).unwrap();
        let (f0, rest) = fc.split_potential(&c.f).unwrap();
        assert!(!f0.is_zero());
        assert!(rest.in_overline());
        assert_eq!(f0.add_any(rest.element()), c.f.element().clone());
        // →D⁻ e^{f⁰} = 0
        assert!(fc.is_maurer_cartan(&f0, &c.h_minus, false).unwrap());
        assert!(right_action(&fc.reduce(&c.h_minus), &fc.exp(&f0).unwrap()).unwrap().is_zero());
        let m = MorphismHandle::new(rest).unwrap();
        for w in sample_words(&mut rng, &c.table, Side::Plus, 15) {
            let dw = coderivation(&fc.reduce(&c.h_plus), &fc.reduce_word(&w)).unwrap();
            // Φ′ intertwines D⁺ and D^{−,f⁰}
            let left = fc.reduce_word(&m.apply(&dw, None).unwrap());
            let right = fc.twist_coderivation(&c.h_minus, &f0, &m.apply(&w, None).unwrap()).unwrap();
            assert_eq!(left, right, "w = {w}");
            // Φ = Ψ^{f⁰}∘Φ′ intertwines D⁺ and D⁻
            let phi_dw = fc.apply_nonexact(&c.f, &dw).unwrap();
            let d_phi_w = coderivation(&fc.reduce(&c.h_minus), &fc.apply_nonexact(&c.f, &w).unwrap()).unwrap();
            assert_eq!(phi_dw, fc.reduce_word(&d_phi_w), "w = {w}");
        }
    }
}

#[test]
fn exact_potential_splits_trivially() {
    let c = novikov_exact(Q::from_integer(1.into()));
    let fc = FilteredContext::new(&c.table, Q::from_integer(1.into())).unwrap();
    let (f0, rest) = fc.split_potential(&c.f).unwrap();
    assert!(f0.is_zero());
    assert_eq!(rest.element(), c.f.element());
}
