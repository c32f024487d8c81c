mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rsft_core::{AlgElement, Var, Side};

fn pool_setup() -> (std::sync::Arc<rsft_core::GeneratorTable>, std::collections::BTreeMap<i64, Vec<rsft_core::Monomial>>) {
    let t = mixed_table();
    let vars = mid_vars(&t);
    let pool = monomials_by_degree(&t, &vars, 3);
    (t, pool)
}

#[test]
fn graded_antisymmetry() {
    let (t, pool) = pool_setup();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let f = random_homogeneous(&mut rng, &t, &pool, 3);
        let g = random_homogeneous(&mut rng, &t, &pool, 3);
        let lhs = f.bracket(&g).unwrap();
        let rhs = g.bracket(&f).unwrap().scale(&sgn(!(parity(&f) && parity(&g))));
        assert_eq!(lhs, rhs, "f = {f}, g = {g}");
    }
}

#[test]
fn graded_leibniz() {
    let (t, pool) = pool_setup();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let f = random_homogeneous(&mut rng, &t, &pool, 2);
        let g = random_homogeneous(&mut rng, &t, &pool, 2);
        let h = random_homogeneous(&mut rng, &t, &pool, 2);
        let lhs = f.bracket(&g.mul(&h).unwrap()).unwrap();
        let a = f.bracket(&g).unwrap().mul_any(&h);
        let b = g.mul_any(&f.bracket(&h).unwrap()).scale(&sgn(parity(&f) && parity(&g)));
        assert_eq!(lhs, a.add_any(&b), "f = {f}, g = {g}, h = {h}");
    }
}

#[test]
fn graded_jacobi() {
    let (t, pool) = pool_setup();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let f = random_homogeneous(&mut rng, &t, &pool, 2);
        let g = random_homogeneous(&mut rng, &t, &pool, 2);
        let h = random_homogeneous(&mut rng, &t, &pool, 2);
        let lhs = f.bracket(&g.bracket(&h).unwrap()).unwrap();
        let a = f.bracket(&g).unwrap().bracket(&h).unwrap();
        let b = g.bracket(&f.bracket(&h).unwrap()).unwrap().scale(&sgn(parity(&f) && parity(&g)));
        assert_eq!(lhs, a.add_any(&b), "f = {f}, g = {g}, h = {h}");
    }
}

#[test]
fn bracket_degree() {
    let (t, pool) = pool_setup();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let f = random_homogeneous(&mut rng, &t, &pool, 3);
        let g = random_homogeneous(&mut rng, &t, &pool, 3);
        let b = f.bracket(&g).unwrap();
        if let Some(d) = b.degree().value() {
            assert_eq!(d, f.degree().value().unwrap() + g.degree().value().unwrap() - 2 * t.n());
        }
    }
}

#[test]
fn left_partial_is_graded_derivation() {
    let (t, pool) = pool_setup();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let x = random_homogeneous(&mut rng, &t, &pool, 3);
        let y = random_homogeneous(&mut rng, &t, &pool, 3);
        for v in mid_vars(&t) {
            let lhs = x.mul_any(&y).partial(v);
            let odd_v = t.is_odd(v);
            let rhs = x.partial(v).mul_any(&y).add_any(&x.mul_any(&y.partial(v)).scale(&sgn(odd_v && parity(&x))));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn identity_restriction_renames() {
    let t = mixed_table();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    // h on the minus side, restricted to the identity graph, becomes h with p⁻ ↦ p⁺
    let minus: Vec<Var> = (0..3).flat_map(|i| [Var::q(i, Side::Minus), Var::p(i, Side::Minus)]).collect();
    let pool = monomials_by_degree(&t, &minus, 3);
    let mut i = AlgElement::zero(&t, rsft_core::Ctx::L, rsft_core::Truncation::none());
    for g in t.generators() {
        let s = format!("1/{}*q:{}-*p:{}+", g.kappa, g.name, g.name);
        i = i.add_any(&rsft_core::parse_element(&s, &t, rsft_core::Ctx::L, rsft_core::Truncation::none()).unwrap());
    }
    for _ in 0..100 {
        let h = random_homogeneous(&mut rng, &t, &pool, 3);
        let r = h.restrict_to_lagrangian(&i, Side::Plus, Side::Minus);
        let mut expect = AlgElement::zero(&t, rsft_core::Ctx::L, rsft_core::Truncation::none());
        for (m, c) in h.terms() {
            let vs: Vec<Var> = m
                .vars()
                .iter()
                .flat_map(|(v, e)| {
                    let w = if v.kind == rsft_core::Kind::P { Var { side: Side::Plus, ..*v } } else { *v };
                    std::iter::repeat_n(w, *e as usize)
                })
                .collect();
            let (mm, s) = rsft_core::Monomial::from_vars(&t, &vs).unwrap();
            let term = AlgElement::from_term(&t, rsft_core::Ctx::L, rsft_core::Truncation::none(), mm, c.clone());
            expect = expect.add_any(&term.scale(&sgn(s)));
        }
        assert_eq!(r, expect, "h = {h}");
    }
}
