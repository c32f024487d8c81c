mod common;

use std::collections::BTreeMap;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rsft_core::coalgebra::{reduced_coproduct, TensorWord, Word};
use rsft_core::coderivation::{arrow_apply, check_commutator_lemma, coderivation};
use rsft_core::{AlgElement, Monomial, Scalar, Side};

fn random_overline(rng: &mut ChaCha8Rng, t: &std::sync::Arc<rsft_core::GeneratorTable>, pool: &BTreeMap<i64, Vec<Monomial>>) -> AlgElement {
    let over: BTreeMap<i64, Vec<Monomial>> = pool
        .iter()
        .map(|(d, ms)| (*d, ms.iter().filter(|m| m.p_len() > 0).cloned().collect::<Vec<_>>()))
        .filter(|(_, ms)| !ms.is_empty())
        .collect();
    random_homogeneous(rng, t, &over, 3)
}

fn random_word(rng: &mut ChaCha8Rng, t: &std::sync::Arc<rsft_core::GeneratorTable>, qpool: &[Monomial], max_len: usize) -> TensorWord {
    let n = rng.gen_range(1..=max_len);
    let fs: Vec<Monomial> = (0..n).map(|_| qpool[rng.gen_range(0..qpool.len())].clone()).collect();
    TensorWord::monomial_word(t, fs, Scalar::one())
}

#[test]
fn commutator_lemma_on_random_pairs() {
    let t = mixed_table();
    let pool = monomials_by_degree(&t, &mid_vars(&t), 3);
    let qpool: Vec<Monomial> = monomials_by_degree(&t, &q_vars(&t, Side::Mid), 2).into_values().flatten().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut checked = 0;
    while checked < 200 {
        let h = random_overline(&mut rng, &t, &pool);
        let g = random_overline(&mut rng, &t, &pool);
        let samples: Vec<TensorWord> = (0..3).map(|_| random_word(&mut rng, &t, &qpool, 3)).collect();
        if samples.iter().all(|s| s.is_zero()) {
            continue;
        }
        assert!(check_commutator_lemma(&h, &g, &samples).unwrap(), "h = {h}, g = {g}");
        checked += 1;
    }
}

#[test]
fn coderivation_is_compatible_with_coproduct() {
    let t = mixed_table();
    let pool = monomials_by_degree(&t, &mid_vars(&t), 3);
    let qpool: Vec<Monomial> = monomials_by_degree(&t, &q_vars(&t, Side::Mid), 2).into_values().flatten().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let h = random_overline(&mut rng, &t, &pool);
        let x = random_word(&mut rng, &t, &qpool, 4);
        let odd_h = parity(&h);
        let lhs = reduced_coproduct(&coderivation(&h, &x).unwrap());
        // (D⊗1 + 1⊗D)Δ̄x
        let mut rhs: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
        for ((a, b), c) in reduced_coproduct(&x) {
            let wa = TensorWord::monomial_word(&t, a.factors().to_vec(), Scalar::one());
            let wb = TensorWord::monomial_word(&t, b.factors().to_vec(), Scalar::one());
            for (da, cda) in coderivation(&h, &wa).unwrap().terms() {
                let e = rhs.entry((da.clone(), b.clone())).or_default();
                *e = e.add(&cda.mul(&c));
            }
            let s = sgn(odd_h && a.is_odd(&t));
            for (db, cdb) in coderivation(&h, &wb).unwrap().terms() {
                let e = rhs.entry((a.clone(), db.clone())).or_default();
                *e = e.add(&cdb.mul(&c).mul(&s));
            }
        }
        rhs.retain(|_, c| !c.is_zero());
        assert_eq!(lhs, rhs, "h = {h}, x = {x}");
    }
}

#[test]
fn arrow_is_graded_symmetric_and_derivation() {
    let t = mixed_table();
    let pool = monomials_by_degree(&t, &mid_vars(&t), 3);
    let qpool = monomials_by_degree(&t, &q_vars(&t, Side::Mid), 2);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..100 {
        let h = random_overline(&mut rng, &t, &pool);
        let u = random_homogeneous(&mut rng, &t, &qpool, 2);
        let v = random_homogeneous(&mut rng, &t, &qpool, 2);
        let a = arrow_apply(&h, &[u.clone(), v.clone()]).unwrap();
        let b = arrow_apply(&h, &[v.clone(), u.clone()]).unwrap();
        assert_eq!(a, b.scale(&sgn(parity(&u) && parity(&v))));
        // derivation in the last slot, shifted degree of →h¹ is |h| − 2N
        let lhs = arrow_apply(&h, &[u.mul_any(&v)]).unwrap();
        let rhs = arrow_apply(&h, &[u.clone()])
            .unwrap()
            .mul_any(&v)
            .add_any(&u.mul_any(&arrow_apply(&h, &[v.clone()]).unwrap()).scale(&sgn(parity(&h) && parity(&u))));
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn coderivation_preserves_length_filtration() {
    let t = mixed_table();
    let pool = monomials_by_degree(&t, &mid_vars(&t), 3);
    let qpool: Vec<Monomial> = monomials_by_degree(&t, &q_vars(&t, Side::Mid), 2).into_values().flatten().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let h = random_overline(&mut rng, &t, &pool);
        let x = random_word(&mut rng, &t, &qpool, 4);
        let n = x.max_word_len();
        let d = coderivation(&h, &x).unwrap();
        assert!(d.max_word_len() <= n);
        if let (Some(dx), Some(dd)) = (x.shifted_degree(), d.shifted_degree()) {
            assert_eq!(dd, dx + h.degree().value().unwrap() - 2 * t.n());
        }
    }
}
