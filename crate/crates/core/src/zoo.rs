//! Small fixtures produced by exhaustive search over tiny coefficient
//! spaces or by exact linear solves. Nothing here is entered by hand except
//! the generator tables and the candidate spaces searched.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::coalgebra::TensorWord;
use crate::coderivation::check_master;
use crate::element::{AlgElement, Ctx, Truncation};
use crate::linalg::{self, SparseVec};
use crate::mctwist::FilteredContext;
use crate::monomial::Monomial;
use crate::morphism::{check_chain_map, identity, Potential};
use crate::scalar::{Scalar, Q};
use crate::table::{GeneratorSpec, GeneratorTable, Side, Var};

/// Monomials in `vars` of total length `1..=max_len` and the given degree.
pub fn monomials(table: &GeneratorTable, vars: &[Var], max_len: u32, degree: i64) -> Vec<Monomial> {
    fn rec(table: &GeneratorTable, vars: &[Var], i: usize, left: u32, cur: &mut Vec<Var>, out: &mut Vec<Monomial>) {
        if i == vars.len() {
            if !cur.is_empty() {
                out.push(Monomial::from_vars(table, cur).expect("odd variables used once").0);
            }
            return;
        }
        let v = vars[i];
        let max_e = if table.is_odd(v) { left.min(1) } else { left };
        for e in 0..=max_e {
            cur.extend(std::iter::repeat_n(v, e as usize));
            rec(table, vars, i + 1, left - e, cur, out);
            cur.truncate(cur.len() - e as usize);
        }
    }
    let mut out = Vec::new();
    rec(table, vars, 0, max_len, &mut Vec::new(), &mut out);
    out.retain(|m| m.degree(table) == degree);
    out.sort();
    out
}

/// All q and p variables of generators declared on `side`.
pub fn side_vars(table: &GeneratorTable, side: Side) -> Vec<Var> {
    let idx = table.indices_on(side);
    idx.iter().map(|&i| Var::q(i, side)).chain(idx.iter().map(|&i| Var::p(i, side))).collect()
}

pub fn term(table: &Arc<GeneratorTable>, m: &Monomial) -> AlgElement {
    AlgElement::from_term(table, Ctx::P, Truncation::none(), m.clone(), Scalar::one())
}

type Key = (Q, Monomial);

fn coords(x: &AlgElement) -> Vec<(Key, Q)> {
    x.terms().flat_map(|(m, c)| c.terms().into_iter().map(move |(a, v)| ((a, m.clone()), v))).collect()
}

fn word_coords(x: &TensorWord) -> Vec<((Q, crate::coalgebra::Word), Q)> {
    x.terms().flat_map(|(w, c)| c.terms().into_iter().map(move |(a, v)| ((a, w.clone()), v))).collect()
}

fn index_columns<K: Ord + Clone>(images: &[Vec<(K, Q)>], target: &[(K, Q)]) -> (Vec<SparseVec>, SparseVec) {
    let keys: BTreeSet<K> = images.iter().flatten().chain(target.iter()).map(|(k, _)| k.clone()).collect();
    let index: BTreeMap<K, usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    let vec = |xs: &[(K, Q)]| {
        let mut v = SparseVec::new();
        for (k, c) in xs {
            linalg::axpy(&mut v, c, &SparseVec::from([(index[k], Q::one())]));
        }
        v
    };
    (images.iter().map(|x| vec(x)).collect(), vec(target))
}

fn dense(x: &SparseVec, n: usize) -> Vec<Q> {
    (0..n).map(|i| x.get(&i).cloned().unwrap_or_else(Q::zero)).collect()
}

/// Rational `x` with `Σ x_i images_i = target`, compared coefficientwise
/// (including Novikov exponents).
pub fn solve_linear(images: &[AlgElement], target: &AlgElement) -> Option<Vec<Q>> {
    let cols: Vec<_> = images.iter().map(coords).collect();
    let (cols, b) = index_columns(&cols, &coords(target));
    linalg::solve(&cols, &b).map(|x| dense(&x, images.len()))
}

/// As `solve_linear` for maps landing in tensor words.
pub fn solve_linear_words(images: &[TensorWord], target: &TensorWord) -> Option<Vec<Q>> {
    let cols: Vec<_> = images.iter().map(word_coords).collect();
    let (cols, b) = index_columns(&cols, &word_coords(target));
    linalg::solve(&cols, &b).map(|x| dense(&x, images.len()))
}

/// Basis of `{x : Σ x_i images_i = 0}` for maps landing in tensor words.
pub fn kernel_linear_words(images: &[TensorWord]) -> Vec<Vec<Q>> {
    let cols: Vec<_> = images.iter().map(word_coords).collect();
    let (cols, _) = index_columns(&cols, &[]);
    linalg::kernel(&cols).iter().map(|x| dense(x, images.len())).collect()
}

/// Basis of `{x : Σ x_i images_i = 0}`.
pub fn kernel_linear(images: &[AlgElement]) -> Vec<Vec<Q>> {
    let cols: Vec<_> = images.iter().map(coords).collect();
    let (cols, _) = index_columns(&cols, &[]);
    linalg::kernel(&cols).iter().map(|x| dense(x, images.len())).collect()
}

pub fn combination(basis: &[AlgElement], x: &[Q]) -> AlgElement {
    let mut acc = basis[0].empty_like();
    for (b, c) in basis.iter().zip(x) {
        acc = acc.add_any(&b.scale_q(c));
    }
    acc
}

/// Coefficient vectors over `values` in lexicographic order of value
/// indices, skipping the zero vector.
fn coefficient_vectors(n: usize, values: &[i64]) -> impl Iterator<Item = Vec<i64>> + '_ {
    let total = values.len().pow(n as u32);
    (1..total).map(move |mut k| {
        let mut v = vec![0; n];
        for slot in v.iter_mut().rev() {
            *slot = values[k % values.len()];
            k /= values.len();
        }
        v
    })
}

/// First `h = Σ c_i·candidates_i` with `c_i ∈ values` (the value list
/// should start with 0), `{h,h} = 0` and `accept(h)`.
///
/// `{h,h}` is evaluated as a quadratic form on precomputed pairwise
/// brackets, then confirmed with `check_master`.
pub fn search_master(candidates: &[AlgElement], values: &[i64], accept: impl Fn(&AlgElement) -> bool) -> Option<AlgElement> {
    let n = candidates.len();
    let pairs: Vec<Vec<BTreeMap<Monomial, Q>>> = candidates
        .iter()
        .map(|a| {
            candidates
                .iter()
                .map(|b| a.bracket_any(b).terms().map(|(m, c)| (m.clone(), c.as_rational().cloned().expect("rational candidates"))).collect())
                .collect()
        })
        .collect();
    for v in coefficient_vectors(n, values) {
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let c = v[i] * v[j];
                if c == 0 {
                    continue;
                }
                for (m, x) in &pairs[i][j] {
                    *acc.entry(m.clone()).or_insert_with(Q::zero) += x * Q::from_integer(c.into());
                }
            }
        }
        if acc.values().any(|x| !x.is_zero()) {
            continue;
        }
        let xs: Vec<Q> = v.iter().map(|&c| Q::from_integer(c.into())).collect();
        let h = combination(candidates, &xs);
        if !h.is_zero() && check_master(&h).unwrap_or(false) && accept(&h) {
            return Some(h);
        }
    }
    None
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// A single structure on `Mid`.
#[derive(Clone, Debug)]
pub struct Single {
    pub name: &'static str,
    pub table: Arc<GeneratorTable>,
    pub h: AlgElement,
}

/// A structure in `𝓟̂` together with an augmentation.
#[derive(Clone, Debug)]
pub struct HatFixture {
    pub table: Arc<GeneratorTable>,
    pub h: AlgElement,
    pub augmentation: AlgElement,
}

/// `h⁺` on `Plus`, `h⁻` on `Minus` and a chain-map potential between them.
/// Novikov fixtures carry an energy cutoff and possibly an MC element for
/// `h⁺`.
#[derive(Clone, Debug)]
pub struct Cobordism {
    pub name: &'static str,
    pub table: Arc<GeneratorTable>,
    pub energy: Option<Q>,
    pub h_plus: AlgElement,
    pub h_minus: AlgElement,
    pub f: Potential,
    pub mc: Option<AlgElement>,
}

/// A cobordism with elements `g^±` commuting with `h^±` and a homotopy `g`.
#[derive(Clone, Debug)]
pub struct OrderCobordism {
    pub table: Arc<GeneratorTable>,
    pub h_plus: AlgElement,
    pub h_minus: AlgElement,
    pub f: Potential,
    pub g: AlgElement,
    pub g_plus: AlgElement,
    pub g_minus: AlgElement,
}

fn table(n: i64, gens: &[(&str, i64, i64, &[Side])]) -> Arc<GeneratorTable> {
    let specs = gens.iter().map(|(name, d, k, sides)| GeneratorSpec::new(name, *d, *k).on(sides)).collect();
    Arc::new(GeneratorTable::new(n, specs, vec![]).expect("valid table"))
}

/// `h = p_x` with `|q_x| = 1`, for weights 1 and 2.
pub fn trivial(kappa: i64) -> Single {
    let t = table(1, &[("x", 1, kappa, &[])]);
    let h = term(&t, &Monomial::var(Var::p(0, Side::Mid)));
    Single { name: if kappa == 1 { "trivial" } else { "trivial_k2" }, table: t, h }
}

/// `h = p_x p_y`: one more letter needed to reach `1l`.
pub fn pair_product() -> Single {
    let t = table(1, &[("x", 1, 1, &[]), ("y", 2, 1, &[])]);
    let h = term(&t, &Monomial::from_vars(&t, &[Var::p(0, Side::Mid), Var::p(1, Side::Mid)]).unwrap().0);
    Single { name: "pair_product", table: t, h }
}

/// `h = p_x + p_x q_u` with `|q_u| = 0`: `π D` reaches `1l` on a single
/// letter while `D` does not.
pub fn tilde_gap() -> Single {
    let t = table(1, &[("x", 1, 1, &[]), ("u", 0, 1, &[])]);
    let px = Monomial::var(Var::p(0, Side::Mid));
    let pxqu = Monomial::from_vars(&t, &[Var::q(1, Side::Mid), Var::p(0, Side::Mid)]).unwrap().0;
    Single { name: "tilde_gap", table: t.clone(), h: term(&t, &px).add_any(&term(&t, &pxqu)) }
}

/// `h = p_x + λ^{1/2} p_x q_u` with `|q_u| = 0`: the geometric series in
/// `λ^{1/2} q_u` is finite modulo every `λ^E`, so `D x = 1l` is solvable
/// at each level with certificates growing with `E`.
pub fn novikov_torsion() -> Single {
    let t = table(1, &[("x", 1, 1, &[]), ("u", 0, 1, &[])]);
    let px = Monomial::var(Var::p(0, Side::Mid));
    let pxqu = Monomial::from_vars(&t, &[Var::q(1, Side::Mid), Var::p(0, Side::Mid)]).unwrap().0;
    let h = term(&t, &px).add_any(&AlgElement::from_term(&t, Ctx::P, Truncation::none(), pxqu, Scalar::monomial(Q::one(), half())));
    Single { name: "novikov_torsion", table: t, h }
}

/// Generators for the `𝓟̂` search.
fn hat_table() -> Arc<GeneratorTable> {
    table(1, &[("a", 1, 1, &[]), ("b", 2, 1, &[]), ("c", 3, 1, &[]), ("d", 0, 1, &[])])
}

/// `h ∈ 𝓟̂` of degree `2N−1` with `{h,h} = 0`, found by exhaustive search
/// over coefficients in `{0,1,−1}` on the hat monomials of length `≤ 3`,
/// requiring a nonzero linear part, nonzero parts in at least three
/// bidegrees, two terms with nonzero bracket and a nontrivial augmentation.
/// The augmentation is the first pure-p element of degree `2N` with
/// coefficients in `{0,1,−1}` that restricts `h` to zero and changes it.
pub fn hat_master() -> HatFixture {
    static CACHE: OnceLock<HatFixture> = OnceLock::new();
    CACHE.get_or_init(search_hat_master).clone()
}

fn search_hat_master() -> HatFixture {
    let t = hat_table();
    let n2 = 2 * t.n();
    let vars = side_vars(&t, Side::Mid);
    let cands: Vec<AlgElement> = monomials(&t, &vars, 3, n2 - 1)
        .into_iter()
        .filter(|m| m.p_len() >= 1 && m.q_len() >= 1)
        .map(|m| term(&t, &m))
        .collect();
    let accept = |h: &AlgElement| {
        let bideg: BTreeSet<(u32, u32)> = h.terms().map(|(m, _)| (m.p_len(), m.q_len())).collect();
        let terms: Vec<AlgElement> = h.terms().map(|(m, c)| AlgElement::from_term(&t, Ctx::P, Truncation::none(), m.clone(), c.clone())).collect();
        let interacting = terms.iter().any(|a| terms.iter().any(|b| !a.bracket_any(b).is_zero()));
        bideg.contains(&(1, 1)) && bideg.len() >= 3 && h.len() >= 4 && interacting
    };
    let p_vars: Vec<Var> = t.indices_on(Side::Mid).into_iter().map(|i| Var::p(i, Side::Mid)).collect();
    let aug_cands: Vec<AlgElement> = monomials(&t, &p_vars, 2, n2).into_iter().map(|m| term(&t, &m)).collect();
    let find_aug = |h: &AlgElement| {
        coefficient_vectors(aug_cands.len(), &[0, 1, -1])
            .map(|v| combination(&aug_cands, &v.iter().map(|&c| q(c)).collect::<Vec<_>>()))
            .find(|f| crate::linearize::Augmentation::new(f.clone(), h).and_then(|a| crate::linearize::augmentation_twist(h, &a)).is_ok_and(|hf| hf != *h))
    };
    let h = search_master(&cands, &[0, 1, -1], |h| accept(h) && find_aug(h).is_some()).expect("hat search space contains a solution");
    let augmentation = find_aug(&h).expect("checked during the search");
    HatFixture { table: t, h, augmentation }
}

/// `h⁻` solving `h⁺|_{L_f} = h⁻|_{L_f}` over the candidate monomials on
/// `Minus` of the right degree, with Novikov exponents in `exps`.
pub fn solve_minus(h_plus: &AlgElement, f: &Potential, max_len: u32, exps: &[Q]) -> Option<AlgElement> {
    let t = h_plus.table().clone();
    let n2 = 2 * t.n();
    let vars = side_vars(&t, Side::Minus);
    let mut basis = Vec::new();
    for m in monomials(&t, &vars, max_len, n2 - 1).into_iter().filter(|m| m.p_len() >= 1) {
        for a in exps {
            basis.push(AlgElement::from_term(&t, Ctx::P, Truncation::none(), m.clone(), Scalar::monomial(Q::one(), a.clone())));
        }
    }
    let (plus, minus) = (f.src(), f.tgt());
    let images: Vec<AlgElement> = basis.iter().map(|b| b.restrict_to_lagrangian(f.element(), plus, minus)).collect();
    let target = h_plus.restrict_to_lagrangian(f.element(), plus, minus);
    let x = solve_linear(&images, &target)?;
    Some(combination(&basis, &x))
}

/// `h⁺ = p_x p_y` on `Plus`, `h⁻` on `Minus` solved from the potential
/// `f = q⁻_z p⁺_x p⁺_y`.
pub fn exact_cobordism() -> Cobordism {
    let t = table(1, &[("x", 1, 1, &[Side::Plus]), ("y", 2, 1, &[Side::Plus]), ("z", 1, 1, &[Side::Minus])]);
    let h_plus = term(&t, &Monomial::from_vars(&t, &[Var::p(0, Side::Plus), Var::p(1, Side::Plus)]).unwrap().0);
    let fm = Monomial::from_vars(&t, &[Var::q(2, Side::Minus), Var::p(0, Side::Plus), Var::p(1, Side::Plus)]).unwrap().0;
    let f = Potential::new(term(&t, &fm).with_ctx(Ctx::L), Side::Plus, Side::Minus).expect("potential");
    let h_minus = solve_minus(&h_plus, &f, 2, &[Q::zero()]).expect("chain-map solve");
    Cobordism { name: "exact", table: t, energy: None, h_plus, h_minus, f, mc: None }
}

/// Table for the Novikov fixtures: `|q_z| = 2`, `|q_w| = 1`.
pub fn novikov_table() -> Arc<GeneratorTable> {
    table(1, &[("z", 2, 1, &[]), ("w", 1, 1, &[])])
}

fn half() -> Q {
    Q::new(1.into(), 2.into())
}

/// `λ^{1/2} p_z q_w − p_z² q_w` on `side`.
pub fn novikov_h(t: &Arc<GeneratorTable>, side: Side) -> AlgElement {
    let a = Monomial::from_vars(t, &[Var::q(1, side), Var::p(0, side)]).unwrap().0;
    let b = Monomial::from_vars(t, &[Var::q(1, side), Var::p(0, side), Var::p(0, side)]).unwrap().0;
    AlgElement::from_term(t, Ctx::P, Truncation::none(), a, Scalar::monomial(Q::one(), half()))
        .add_any(&AlgElement::from_term(t, Ctx::P, Truncation::none(), b, Scalar::from_int(-1)))
}

/// Novikov cobordism with `f = i + q⁻_w p⁺_w p⁺_z`, `h⁻` solved linearly
/// (exponents `0, 1/2`), and the MC element `a = λ^{1/2} q⁺_z`, which is
/// the first of `±λ^{1/2} q⁺_z` satisfying the MC equation.
pub fn novikov_exact(energy: Q) -> Cobordism {
    let t = novikov_table();
    let h_plus = novikov_h(&t, Side::Plus);
    let i = identity(&t, Side::Plus, Side::Minus).expect("identity");
    let m = Monomial::from_vars(&t, &[Var::q(1, Side::Minus), Var::p(0, Side::Plus), Var::p(1, Side::Plus)]).unwrap().0;
    let f = Potential::new(i.element().add_any(&term(&t, &m).with_ctx(Ctx::L)).with_ctx(Ctx::L), Side::Plus, Side::Minus).expect("potential");
    let h_minus = solve_minus(&h_plus, &f, 4, &[Q::zero(), half()]).expect("chain-map solve");
    let fc = FilteredContext::new(&t, energy.clone()).expect("positive energy");
    let qz = Monomial::var(Var::q(0, Side::Plus));
    let mc = [1, -1]
        .into_iter()
        .map(|s| AlgElement::from_term(&t, Ctx::A, Truncation::none(), qz.clone(), Scalar::monomial(q(s), half())))
        .find(|a| fc.is_maurer_cartan(a, &h_plus, false).unwrap_or(false));
    Cobordism { name: "novikov_exact", table: t, energy: Some(energy), h_plus, h_minus, f, mc }
}

/// Non-exact Novikov cobordism: `h⁻` the Novikov structure, `f = i + λ^{1/2} q⁻_z`
/// and `h⁺` obtained by twisting `h⁻` with `f⁰` and moving it to `Plus`.
/// `energy` is the cutoff at which the fixture is to be exercised.
pub fn novikov_nonexact(energy: Q) -> Cobordism {
    let t = novikov_table();
    let h_minus = novikov_h(&t, Side::Minus);
    let i = identity(&t, Side::Plus, Side::Minus).expect("identity");
    let f0 = AlgElement::from_term(&t, Ctx::L, Truncation::none(), Monomial::var(Var::q(0, Side::Minus)), Scalar::monomial(Q::one(), half()));
    let f = Potential::new(i.element().add_any(&f0).with_ctx(Ctx::L), Side::Plus, Side::Minus).expect("potential");
    // the twist series terminates after two brackets, so a cutoff above
    // every exponent it produces gives the exact result
    let fc = FilteredContext::new(&t, q(4)).expect("positive energy");
    let twisted = fc.twist_hamiltonian(&h_minus, &f0).expect("f⁰ is MC for h⁻");
    let h_plus = twisted.rename_side(Side::Minus, Side::Plus).expect("rename").with_truncation(Truncation::none());
    Cobordism { name: "novikov_nonexact", table: t, energy: Some(energy), h_plus, h_minus, f, mc: None }
}

/// Order fixture on `Mid`: `h = p_y q_x`, `g = p_u p_v + p_y`.
pub fn order_single() -> (Arc<GeneratorTable>, AlgElement, AlgElement) {
    let t = order_table(&[]);
    let (h, g) = order_pair(&t, Side::Mid);
    (t, h, g)
}

fn order_table(sides: &[Side]) -> Arc<GeneratorTable> {
    table(1, &[("x", 1, 1, sides), ("y", 2, 1, sides), ("u", 1, 1, sides), ("v", 3, 1, sides)])
}

fn order_pair(t: &Arc<GeneratorTable>, s: Side) -> (AlgElement, AlgElement) {
    let h = term(t, &Monomial::from_vars(t, &[Var::q(0, s), Var::p(1, s)]).unwrap().0);
    let g = term(t, &Monomial::from_vars(t, &[Var::p(2, s), Var::p(3, s)]).unwrap().0).add_any(&term(t, &Monomial::var(Var::p(1, s))));
    (h, g)
}

/// Cobordism for the order fixture: `f = i + c·m` for a mixed monomial `m`
/// with `p⁺`-length and `q⁻`-length one, `g⁺` the fixture element and
/// `(g⁻, g)` solved jointly from the homotopy identity.
///
/// Search order: monomials `m` in canonical order, then `c ∈ {1,−1,2}`; the
/// first chain map admitting a solution (see `solve_homotopy`) wins.
pub fn order_cobordism() -> OrderCobordism {
    static CACHE: OnceLock<OrderCobordism> = OnceLock::new();
    CACHE.get_or_init(search_order_cobordism).clone()
}

fn search_order_cobordism() -> OrderCobordism {
    let t = order_table(&[]);
    let (h_plus, g_plus) = order_pair(&t, Side::Plus);
    let (h_minus, _) = order_pair(&t, Side::Minus);
    let i = identity(&t, Side::Plus, Side::Minus).expect("identity");
    let n2 = 2 * t.n();
    let mut vars: Vec<Var> = t.indices_on(Side::Plus).into_iter().map(|j| Var::p(j, Side::Plus)).collect();
    vars.extend(t.indices_on(Side::Minus).into_iter().map(|j| Var::q(j, Side::Minus)));
    let pert: Vec<Monomial> = monomials(&t, &vars, 2, n2).into_iter().filter(|m| m.p_len() == 1 && m.q_len() == 1).collect();
    for m in &pert {
        for c in [1, -1, 2] {
            let fe = i.element().add_any(&term(&t, m).scale_q(&q(c))).with_ctx(Ctx::L);
            let Ok(f) = Potential::new(fe, Side::Plus, Side::Minus) else { continue };
            if !f.in_hat() || !check_chain_map(&f, &h_plus, &h_minus).unwrap_or(false) {
                continue;
            }
            if let Some((g_minus, g)) = solve_homotopy(&f, &g_plus, &h_plus, &h_minus) {
                return OrderCobordism { table: t, h_plus, h_minus, f, g, g_plus, g_minus };
            }
        }
    }
    panic!("order cobordism search space contains no solution")
}

/// `(g⁻, g)` with `→D_{g⁻}e^f − e^f←D_{g⁺} = (e^f⊙g)←D⁺ − ε·→D⁻(g⊙e^f)` on
/// words of length `≤ 3`, `{h⁻,g⁻} = 0` and `g` contributing a nonzero
/// right-hand side. `g⁻` ranges over
/// monomials on the target side with a p-variable, `g` over mixed
/// monomials of degree `|g⁺|+1`, both of length `≤ 3`. Returns the
/// particular solution, or the first particular-plus-kernel vector with
/// these properties.
pub fn solve_homotopy(f: &Potential, g_plus: &AlgElement, h_plus: &AlgElement, h_minus: &AlgElement) -> Option<(AlgElement, AlgElement)> {
    use crate::coderivation::{left_action, right_action};
    let t = f.table().clone();
    let dg = g_plus.degree().value()?;
    let tgt_vars = side_vars(&t, f.tgt());
    let gm_basis: Vec<AlgElement> = monomials(&t, &tgt_vars, 3, dg).iter().filter(|m| m.p_len() >= 1).map(|m| term(&t, m)).collect();
    let mut vars: Vec<Var> = t.indices_on(f.src()).into_iter().map(|j| Var::p(j, f.src())).collect();
    vars.extend(t.indices_on(f.tgt()).into_iter().map(|j| Var::q(j, f.tgt())));
    let g_basis: Vec<AlgElement> = monomials(&t, &vars, 3, dg + 1).iter().map(|m| term(&t, m).with_ctx(Ctx::L)).collect();
    if g_basis.is_empty() {
        return None;
    }
    let cutoff = 3;
    let ef = TensorWord::exp(f.element(), cutoff + 4).with_cutoff(None);
    let short = |mut x: TensorWord| {
        x.retain(|w| w.len() <= cutoff);
        x
    };
    let target = short(left_action(g_plus, &ef).ok()?);
    let mut images: Vec<TensorWord> = gm_basis.iter().map(|b| short(right_action(b, &ef).expect("homogeneous"))).collect();
    for b in &g_basis {
        let rhs = crate::invariants::order_homotopy_rhs(&ef, b, h_plus, h_minus).expect("homogeneous");
        images.push(short(rhs).neg());
    }
    let x = solve_linear_words(&images, &target)?;
    let kernel = kernel_linear_words(&images);
    let n = gm_basis.len();
    let split = |v: &[Q]| (combination(&gm_basis, &v[..n]), combination(&g_basis, &v[n..]));
    // g must contribute to the identity, not just be nonzero
    let active = |v: &[Q]| {
        let mut acc = TensorWord::zero(&t);
        for (img, c) in images[n..].iter().zip(&v[n..]) {
            acc = acc.add(&img.scale_q(c));
        }
        !acc.is_zero()
    };
    let ok = |v: &[Q]| {
        let (gm, _) = split(v);
        active(v) && h_minus.bracket_any(&gm).is_zero()
    };
    std::iter::once(x.clone())
        .chain(kernel.iter().map(|k| x.iter().zip(k).map(|(a, b)| a + b).collect()))
        .find(|v: &Vec<Q>| ok(v))
        .map(|v| split(&v))
}

/// All single structures of the zoo.
pub fn singles() -> Vec<Single> {
    let hat = hat_master();
    vec![
        trivial(1),
        trivial(2),
        pair_product(),
        tilde_gap(),
        Single { name: "hat_master", table: hat.table, h: hat.h },
    ]
}

/// Energy cutoffs at which the Novikov fixtures are exercised.
pub fn energy_levels() -> Vec<Q> {
    vec![half(), Q::one(), Q::new(3.into(), 2.into())]
}
