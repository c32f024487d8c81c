#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rsft_core::{AlgElement, Ctx, GeneratorSpec, GeneratorTable, Monomial, Scalar, Side, Truncation, Var};

/// Mixed-parity table: a (|q|=1), b (|q|=2), c (|q|=3), N = 1, κ = 1, 2, 1.
pub fn mixed_table() -> Arc<GeneratorTable> {
    Arc::new(
        GeneratorTable::new(
            1,
            vec![GeneratorSpec::new("a", 1, 1), GeneratorSpec::new("b", 2, 2), GeneratorSpec::new("c", 3, 1)],
            vec![],
        )
        .unwrap(),
    )
}

/// All monomials in the given variables with total exponent ≤ `max_len`,
/// grouped by degree.
pub fn monomials_by_degree(table: &GeneratorTable, vars: &[Var], max_len: u32) -> BTreeMap<i64, Vec<Monomial>> {
    let mut out: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    fn rec(
        table: &GeneratorTable,
        vars: &[Var],
        i: usize,
        left: u32,
        cur: &mut Vec<Var>,
        out: &mut BTreeMap<i64, Vec<Monomial>>,
    ) {
        if i == vars.len() {
            let (m, _) = Monomial::from_vars(table, cur).expect("odd vars used once");
            out.entry(m.degree(table)).or_default().push(m);
            return;
        }
        let v = vars[i];
        let max_e = if table.is_odd(v) { left.min(1) } else { left };
        for e in 0..=max_e {
            for _ in 0..e {
                cur.push(v);
            }
            rec(table, vars, i + 1, left - e, cur, out);
            for _ in 0..e {
                cur.pop();
            }
        }
    }
    rec(table, vars, 0, max_len, &mut Vec::new(), &mut out);
    out
}

pub fn mid_vars(table: &GeneratorTable) -> Vec<Var> {
    let n = table.generators().len();
    (0..n).map(|i| Var::q(i, Side::Mid)).chain((0..n).map(|i| Var::p(i, Side::Mid))).collect()
}

pub fn q_vars(table: &GeneratorTable, side: Side) -> Vec<Var> {
    table.indices_on(side).into_iter().map(|i| Var::q(i, side)).collect()
}

/// A random homogeneous element with 1..=`max_terms` terms drawn from one
/// degree class.
pub fn random_homogeneous(
    rng: &mut ChaCha8Rng,
    table: &Arc<GeneratorTable>,
    pool: &BTreeMap<i64, Vec<Monomial>>,
    max_terms: usize,
) -> AlgElement {
    let degs: Vec<&i64> = pool.keys().collect();
    let d = degs[rng.gen_range(0..degs.len())];
    random_of_degree(rng, table, &pool[d], max_terms)
}

pub fn random_of_degree(
    rng: &mut ChaCha8Rng,
    table: &Arc<GeneratorTable>,
    monos: &[Monomial],
    max_terms: usize,
) -> AlgElement {
    let mut e = AlgElement::zero(table, Ctx::P, Truncation::none());
    let k = rng.gen_range(1..=max_terms);
    for _ in 0..k {
        let m = monos[rng.gen_range(0..monos.len())].clone();
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        e = e.add_any(&AlgElement::from_term(table, Ctx::P, Truncation::none(), m, Scalar::from_int(c)));
    }
    e
}

pub fn sgn(odd: bool) -> Scalar {
    Scalar::from_int(if odd { -1 } else { 1 })
}

pub fn parity(x: &AlgElement) -> bool {
    x.parity().unwrap()
}

pub fn all_sides_table() -> Arc<GeneratorTable> {
    mixed_table()
}

/// Monomials over `vars` of the given degree that contain a variable
/// accepted by `need`.
pub fn monos_of_degree(
    table: &GeneratorTable,
    vars: &[Var],
    max_len: u32,
    degree: i64,
    need: impl Fn(&Monomial) -> bool,
) -> Vec<Monomial> {
    monomials_by_degree(table, vars, max_len).remove(&degree).unwrap_or_default().into_iter().filter(|m| need(m)).collect()
}

/// Random potential `f ∈ 𝓛̄` from `src` to `tgt`.
pub fn random_potential(rng: &mut ChaCha8Rng, table: &Arc<GeneratorTable>, src: Side, tgt: Side, max_len: u32, max_terms: usize) -> AlgElement {
    let n = table.generators().len();
    let vars: Vec<Var> = (0..n).map(|i| Var::q(i, tgt)).chain((0..n).map(|i| Var::p(i, src))).collect();
    let monos = monos_of_degree(table, &vars, max_len, 2 * table.n(), |m| m.p_len_on(src) > 0);
    random_of_degree(rng, table, &monos, max_terms).with_ctx(Ctx::L)
}

/// Random `h ∈ 𝓟̄` of degree `2N−1` on one side (not necessarily master).
pub fn random_hamiltonian(rng: &mut ChaCha8Rng, table: &Arc<GeneratorTable>, side: Side, max_len: u32, max_terms: usize) -> AlgElement {
    let n = table.generators().len();
    let vars: Vec<Var> = (0..n).map(|i| Var::q(i, side)).chain((0..n).map(|i| Var::p(i, side))).collect();
    let monos = monos_of_degree(table, &vars, max_len, 2 * table.n() - 1, |m| m.p_len() > 0);
    random_of_degree(rng, table, &monos, max_terms)
}

/// `i + (random potential)`: the identity term keeps induced maps nontrivial.
pub fn random_potential_near_identity(rng: &mut ChaCha8Rng, table: &Arc<GeneratorTable>, src: Side, tgt: Side, max_len: u32, max_terms: usize) -> AlgElement {
    let i = rsft_core::morphism::identity(table, src, tgt).unwrap();
    i.element().add_any(&random_potential(rng, table, src, tgt, max_len, max_terms))
}

/// Random single word over q-monomials on `side`, q-length per factor ≤ 2.
pub fn random_q_word(rng: &mut ChaCha8Rng, table: &Arc<GeneratorTable>, side: Side, max_len: usize, with_unit: bool) -> rsft_core::coalgebra::TensorWord {
    let pool: Vec<Monomial> = monomials_by_degree(table, &q_vars(table, side), 2)
        .into_values()
        .flatten()
        .filter(|m| with_unit || !m.is_one())
        .collect();
    let letters: Vec<Monomial> = pool.iter().filter(|m| m.q_len() == 1).cloned().collect();
    loop {
        let n = rng.gen_range(1..=max_len);
        let fs: Vec<Monomial> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.6) {
                    letters[rng.gen_range(0..letters.len())].clone()
                } else {
                    pool[rng.gen_range(0..pool.len())].clone()
                }
            })
            .collect();
        let w = rsft_core::coalgebra::TensorWord::monomial_word(table, fs, Scalar::one());
        if !w.is_zero() {
            return w;
        }
    }
}
