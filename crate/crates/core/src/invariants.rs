//! Torsion and order by bounded exact search.
//!
//! Searches run over explicit finite spans of words and never report an
//! infinite value: an exhausted search is `Unknown` together with the bounds
//! used. Every `Found` certificate is re-verified by applying the relevant
//! map to it directly.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::coalgebra::{TensorWord, Word};
use crate::coderivation::{arrow_coderivation_raw, check_master, coderivation, left_action, right_action, word_action};
use crate::element::{AlgElement, Homogeneity};
use crate::error::{AlgError, Result};
use crate::linalg::{self, SparseVec};
use crate::linearize::check_hat;
use crate::monomial::Monomial;
use crate::morphism::{check_chain_map, MorphismHandle, Potential};
use crate::scalar::{Scalar, Q};
use crate::table::{GeneratorTable, Kind, Side, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Maximal word length.
    pub k_max: usize,
    /// Maximal total number of q-letters in a candidate word.
    pub q_len_max: u32,
    /// Degrees examined by `homology_window`.
    pub degree_window: (i64, i64),
    /// Energy cutoffs at which Novikov searches run.
    pub energy_levels: Vec<Q>,
}

impl SearchBounds {
    pub fn new(k_max: usize, q_len_max: u32) -> Self {
        SearchBounds { k_max, q_len_max, degree_window: (-4, 4), energy_levels: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchStatus {
    Found { value: usize, certificate: TensorWord },
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub status: SearchStatus,
    pub bounds: SearchBounds,
    /// Energy cutoff of a Novikov search; `None` over ℚ.
    pub energy: Option<Q>,
    /// Size of the largest candidate span examined.
    pub candidates: usize,
}

impl SearchResult {
    pub fn value(&self) -> Option<usize> {
        match &self.status {
            SearchStatus::Found { value, .. } => Some(*value),
            SearchStatus::Unknown => None,
        }
    }

    pub fn certificate(&self) -> Option<&TensorWord> {
        match &self.status {
            SearchStatus::Found { certificate, .. } => Some(certificate),
            SearchStatus::Unknown => None,
        }
    }
}

/// Which words may appear in a torsion candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CandidateSpace {
    /// Products `q_{γ₁}⊙…⊙q_{γ_k}` of single letters.
    SingleLetters,
    /// Arbitrary pure q-monomials, including the constant `1`.
    AllMonomials,
}

/// Pure q-monomials on `side` with q-length in `min_len..=max_len`.
pub fn q_monomials(table: &GeneratorTable, side: Side, min_len: u32, max_len: u32) -> Vec<Monomial> {
    fn rec(table: &GeneratorTable, vars: &[Var], i: usize, left: u32, cur: &mut Vec<Var>, out: &mut Vec<Monomial>) {
        if i == vars.len() {
            let (m, _) = Monomial::from_vars(table, cur).expect("odd variables used once");
            out.push(m);
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
    let vars: Vec<Var> = table.indices_on(side).into_iter().map(|i| Var::q(i, side)).collect();
    let mut out = Vec::new();
    rec(table, &vars, 0, max_len, &mut Vec::new(), &mut out);
    out.retain(|m| m.q_len() >= min_len);
    out.sort();
    out
}

fn letters(table: &GeneratorTable, side: Side, space: CandidateSpace, q_len_max: u32) -> Vec<Monomial> {
    match space {
        CandidateSpace::SingleLetters => q_monomials(table, side, 1, 1),
        CandidateSpace::AllMonomials => q_monomials(table, side, 0, q_len_max),
    }
}

/// Canonical nonzero words of length `1..=k` over `letters`, total q-length
/// at most `q_len_max`, with the given shifted degree.
fn candidate_words(table: &GeneratorTable, letters: &[Monomial], k: usize, q_len_max: u32, degree: i64) -> Vec<Word> {
    fn rec(
        table: &GeneratorTable,
        letters: &[Monomial],
        start: usize,
        k: usize,
        left: u32,
        cur: &mut Vec<Monomial>,
        out: &mut BTreeSet<Word>,
    ) {
        if !cur.is_empty() {
            if let Some((w, _)) = Word::canonical(cur.clone(), table) {
                out.insert(w);
            }
        }
        if cur.len() == k {
            return;
        }
        for i in start..letters.len() {
            let l = letters[i].q_len();
            if l > left {
                continue;
            }
            cur.push(letters[i].clone());
            rec(table, letters, i, k, left - l, cur, out);
            cur.pop();
        }
    }
    let mut out = BTreeSet::new();
    rec(table, letters, 0, k, q_len_max, &mut Vec::new(), &mut out);
    out.into_iter().filter(|w| w.shifted_degree(table) == degree).collect()
}

/// Coordinates `(λ-exponent, word)` of a tensor word.
type Coord = (Q, Word);

fn coords_of(x: &TensorWord, shift: &Q, energy: Option<&Q>) -> Vec<(Coord, Q)> {
    let mut out = Vec::new();
    for (w, c) in x.terms() {
        for (a, v) in c.terms() {
            let e = &a + shift;
            if energy.is_some_and(|cut| e >= *cut) {
                continue;
            }
            out.push(((e, w.clone()), v));
        }
    }
    out
}

/// Exponents reachable as sums of the exponents in `h`, below `energy`.
fn exponent_monoid(h: &AlgElement, energy: Option<&Q>) -> Vec<Q> {
    let Some(cut) = energy else {
        return vec![Q::zero()];
    };
    let gens: BTreeSet<Q> = h.terms().flat_map(|(_, c)| c.terms().into_iter().map(|(a, _)| a)).filter(|a| a.is_positive()).collect();
    let mut seen: BTreeSet<Q> = BTreeSet::from([Q::zero()]);
    let mut frontier = vec![Q::zero()];
    while let Some(a) = frontier.pop() {
        for g in &gens {
            let b = &a + g;
            if b < *cut && seen.insert(b.clone()) {
                frontier.push(b);
            }
        }
    }
    seen.into_iter().collect()
}

/// A linear map given by its values on a list of domain elements, written
/// in a common coordinate system ordered canonically.
struct LinearMap {
    columns: Vec<SparseVec>,
    index: BTreeMap<Coord, usize>,
}

impl LinearMap {
    fn new(images: &[Vec<(Coord, Q)>], extra: &[Coord]) -> Self {
        let keys: BTreeSet<Coord> = images.iter().flatten().map(|(k, _)| k.clone()).chain(extra.iter().cloned()).collect();
        let index: BTreeMap<Coord, usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
        let columns = images
            .iter()
            .map(|img| {
                let mut v = SparseVec::new();
                for (k, c) in img {
                    linalg::axpy(&mut v, c, &SparseVec::from([(index[k], Q::one())]));
                }
                v
            })
            .collect();
        LinearMap { columns, index }
    }

    fn vector(&self, xs: &[(Coord, Q)]) -> SparseVec {
        let mut v = SparseVec::new();
        for (k, c) in xs {
            linalg::axpy(&mut v, c, &SparseVec::from([(self.index[k], Q::one())]));
        }
        v
    }
}

fn one_l_coord() -> Coord {
    (Q::zero(), Word::one_l())
}

/// Assemble `Σ x_j λ^{a_j} w_j`.
fn assemble(table: &std::sync::Arc<GeneratorTable>, domain: &[Coord], x: &SparseVec, energy: Option<&Q>) -> TensorWord {
    let mut out = TensorWord::zero(table).with_energy(energy.cloned());
    for (j, c) in x {
        let (a, w) = &domain[*j];
        let s = Scalar::monomial(c.clone(), a.clone());
        out = out.add(&TensorWord::monomial_word(table, w.factors().to_vec(), s));
    }
    out
}

fn require_master(h: &AlgElement) -> Result<()> {
    if !check_master(h)? {
        return Err(AlgError::MasterEquationFails);
    }
    Ok(())
}

/// `π(x)`: the coefficient of `1l`.
pub fn pi(x: &TensorWord) -> Scalar {
    x.coefficient(&Word::one_l())
}

/// Shared driver for `T` and `T̃`.
fn torsion_search(h: &AlgElement, side: Side, bounds: &SearchBounds, space: CandidateSpace, energy: Option<&Q>, tilde: bool) -> Result<SearchResult> {
    require_master(h)?;
    if !h.in_overline() {
        return Err(AlgError::NotOverline);
    }
    if energy.is_none() && !h.is_rational() {
        return Err(AlgError::NotRational);
    }
    let table = h.table().clone();
    let h = match energy {
        Some(e) => h.with_truncation(h.truncation().meet(&crate::Truncation::energy(e.clone()))),
        None => h.clone(),
    };
    let target = Word::one_l().shifted_degree(&table) + 1;
    let ls = letters(&table, side, space, bounds.q_len_max);
    let words = candidate_words(&table, &ls, bounds.k_max, bounds.q_len_max, target);
    let exps = exponent_monoid(&h, energy);
    let mut images: BTreeMap<Word, TensorWord> = BTreeMap::new();
    let mut candidates = 0;
    for k in 1..=bounds.k_max {
        let mut domain: Vec<Coord> = Vec::new();
        let mut cols: Vec<Vec<(Coord, Q)>> = Vec::new();
        for w in words.iter().filter(|w| w.len() <= k) {
            let img = images
                .entry(w.clone())
                .or_insert_with(|| {
                    let x = TensorWord::monomial_word(&table, w.factors().to_vec(), Scalar::one()).with_energy(energy.cloned());
                    arrow_coderivation_raw(&h, &x, 1)
                })
                .clone();
            for a in &exps {
                let mut c = coords_of(&img, a, energy);
                if tilde {
                    c.retain(|(k, _)| k.1 == Word::one_l());
                }
                domain.push((a.clone(), w.clone()));
                cols.push(c);
            }
        }
        candidates = domain.len();
        let map = LinearMap::new(&cols, &[one_l_coord()]);
        let b = map.vector(&[(one_l_coord(), Q::one())]);
        if let Some(x) = linalg::solve(&map.columns, &b) {
            let cert = assemble(&table, &domain, &x, energy);
            let d = arrow_coderivation_raw(&h, &cert, 1);
            let ok = if tilde { pi(&d).is_one() && pi_only(&d, energy) } else { d == TensorWord::one_l(&table).with_energy(energy.cloned()) };
            assert!(ok, "torsion certificate failed re-verification");
            return Ok(SearchResult {
                status: SearchStatus::Found { value: k - 1, certificate: cert },
                bounds: bounds.clone(),
                energy: energy.cloned(),
                candidates,
            });
        }
    }
    Ok(SearchResult { status: SearchStatus::Unknown, bounds: bounds.clone(), energy: energy.cloned(), candidates })
}

/// The `1l` coefficient is a pure rational (no higher λ-powers survive).
fn pi_only(d: &TensorWord, _energy: Option<&Q>) -> bool {
    pi(d).is_rational()
}

/// `T(𝔄,h) = min{k−1 : 1l ∈ D(S^{≤k})}` over ℚ, searched within `bounds`.
pub fn torsion(h: &AlgElement, side: Side, bounds: &SearchBounds, space: CandidateSpace) -> Result<SearchResult> {
    torsion_search(h, side, bounds, space, None, false)
}

/// `T̃(𝔄,h) = min{k−1 : 1l ∈ π D(S^{≤k})}`.
pub fn torsion_tilde(h: &AlgElement, side: Side, bounds: &SearchBounds, space: CandidateSpace) -> Result<SearchResult> {
    torsion_search(h, side, bounds, space, None, true)
}

/// Torsion modulo `λ^E` for each `E` in `bounds.energy_levels`.
pub fn torsion_novikov(h: &AlgElement, side: Side, bounds: &SearchBounds, space: CandidateSpace) -> Result<Vec<SearchResult>> {
    bounds.energy_levels.iter().map(|e| torsion_search(h, side, bounds, space, Some(e), false)).collect()
}

/// Degree of a homogeneous element, zero for the zero element.
fn degree_of(x: &AlgElement) -> Result<Option<i64>> {
    match x.degree() {
        Homogeneity::Zero => Ok(None),
        Homogeneity::Degree(d) => Ok(Some(d)),
        Homogeneity::Inhomogeneous => Err(AlgError::InhomogeneousInput),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderResult {
    pub result: SearchResult,
    /// `π∘D_g∘D_h` vanished on every candidate word of the right degree.
    pub boundaries_killed: bool,
    pub boundaries_tested: usize,
}

/// `O(𝔄,h,g) = min{k : 1l ∈ π D_g(H(S^{≤k}, D_h))}`, searching cycles in the
/// span of words of pure q-monomials within `bounds`.
pub fn order(h: &AlgElement, g: &AlgElement, side: Side, bounds: &SearchBounds) -> Result<OrderResult> {
    if !check_hat(h) {
        return Err(AlgError::NotHat);
    }
    require_master(h)?;
    if !h.bracket_any(g).is_zero() {
        return Err(AlgError::BracketNotZero);
    }
    if !g.in_overline() {
        return Err(AlgError::NotOverline);
    }
    if !h.is_rational() || !g.is_rational() {
        return Err(AlgError::NotRational);
    }
    let table = h.table().clone();
    let n2 = 2 * table.n();
    let one_sd = Word::one_l().shifted_degree(&table);
    let ls = letters(&table, side, CandidateSpace::AllMonomials, bounds.q_len_max);
    let unknown = |candidates, killed, tested| OrderResult {
        result: SearchResult { status: SearchStatus::Unknown, bounds: bounds.clone(), energy: None, candidates },
        boundaries_killed: killed,
        boundaries_tested: tested,
    };
    let Some(dg) = degree_of(g)? else {
        return Ok(unknown(0, true, 0));
    };
    let target = one_sd - (dg - n2);
    let words = candidate_words(&table, &ls, bounds.k_max, bounds.q_len_max, target);
    let word_el = |w: &Word| TensorWord::monomial_word(&table, w.factors().to_vec(), Scalar::one());
    let pi_dg = |x: &TensorWord| -> Result<Q> {
        let v = pi(&coderivation(g, x)?);
        Ok(v.as_rational().cloned().unwrap_or_default())
    };
    // boundaries: π D_g D_h u = 0 for u one degree up
    let ups = candidate_words(&table, &ls, bounds.k_max, bounds.q_len_max, target + 1);
    let mut killed = true;
    for u in &ups {
        let du = coderivation(h, &word_el(u))?;
        if !pi_dg(&du)?.is_zero() {
            killed = false;
        }
    }
    let mut candidates = 0;
    for k in 1..=bounds.k_max {
        let domain: Vec<&Word> = words.iter().filter(|w| w.len() <= k).collect();
        candidates = domain.len();
        let cols: Vec<Vec<(Coord, Q)>> =
            domain.iter().map(|w| coderivation(h, &word_el(w)).map(|d| coords_of(&d, &Q::zero(), None))).collect::<Result<_>>()?;
        let map = LinearMap::new(&cols, &[]);
        let values: Vec<Q> = domain.iter().map(|w| pi_dg(&word_el(w))).collect::<Result<_>>()?;
        for z in linalg::kernel(&map.columns) {
            let val: Q = z.iter().map(|(j, c)| c * &values[*j]).sum();
            if val.is_zero() {
                continue;
            }
            let x = linalg::scale(&z, &val.recip());
            let coords: Vec<Coord> = domain.iter().map(|w| (Q::zero(), (*w).clone())).collect();
            let cert = assemble(&table, &coords, &x, None);
            assert!(coderivation(h, &cert)?.is_zero(), "order certificate is not a cycle");
            assert!(pi_dg(&cert)?.is_one(), "order certificate does not reach 1l");
            return Ok(OrderResult {
                result: SearchResult {
                    status: SearchStatus::Found { value: k, certificate: cert },
                    bounds: bounds.clone(),
                    energy: None,
                    candidates,
                },
                boundaries_killed: killed,
                boundaries_tested: ups.len(),
            });
        }
    }
    Ok(unknown(candidates, killed, ups.len()))
}

/// Homology of `(𝔄, D¹)` in each degree of `bounds.degree_window`: cycles
/// among q-monomials of q-length `≤ q_len_max`, modulo boundaries of
/// elements of q-length `≤ q_len_max + 1`.
pub fn homology_window(h: &AlgElement, side: Side, bounds: &SearchBounds) -> Result<Vec<(i64, usize)>> {
    require_master(h)?;
    if !h.is_rational() {
        return Err(AlgError::NotRational);
    }
    let table = h.table().clone();
    let h1 = h.p_len_part(1);
    let small = q_monomials(&table, side, 0, bounds.q_len_max);
    let big = q_monomials(&table, side, 0, bounds.q_len_max + 1);
    let el = |m: &Monomial| crate::coderivation::mono_elem(&table, m);
    let d1 = |m: &Monomial| -> Vec<(Coord, Q)> {
        let v = h1.bracket_any(&el(m));
        let mut out = Vec::new();
        for (mm, c) in v.terms() {
            out.push(((Q::zero(), Word::canonical(vec![mm.clone()], &table).expect("single factor").0), c.as_rational().cloned().unwrap_or_default()));
        }
        out
    };
    let as_coord = |m: &Monomial| -> (Coord, Q) { ((Q::zero(), Word::canonical(vec![m.clone()], &table).expect("single factor").0), Q::one()) };
    let mut out = Vec::new();
    for d in bounds.degree_window.0..=bounds.degree_window.1 {
        let cd: Vec<&Monomial> = small.iter().filter(|m| m.degree(&table) == d).collect();
        let up: Vec<&Monomial> = big.iter().filter(|m| m.degree(&table) == d + 1).collect();
        let cd_coords: Vec<Coord> = cd.iter().map(|m| as_coord(m).0).collect();
        let cycle_cols: Vec<Vec<(Coord, Q)>> = cd.iter().map(|m| d1(m)).collect();
        let bd_cols: Vec<Vec<(Coord, Q)>> = up.iter().map(|m| d1(m)).collect();
        let mut all = cycle_cols.clone();
        all.extend(bd_cols.iter().cloned());
        let map = LinearMap::new(&all, &cd_coords);
        let z = linalg::kernel(&map.columns[..cd.len()]).len();
        let b: Vec<SparseVec> = map.columns[cd.len()..].to_vec();
        let c: Vec<SparseVec> = cd.iter().map(|m| map.vector(&[as_coord(m)])).collect();
        let mut bc = b.clone();
        bc.extend(c.iter().cloned());
        let inter = linalg::rank(&b) + linalg::rank(&c) - linalg::rank(&bc);
        out.push((d, z - inter));
    }
    Ok(out)
}

/// Result of comparing torsion across a cobordism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionMonotonicity {
    pub plus: SearchResult,
    pub minus: SearchResult,
    pub tilde_plus: SearchResult,
    pub tilde_minus: SearchResult,
    /// `Φ(a)` for the `+` certificate `a`.
    pub transported: Option<TensorWord>,
    /// `D⁻(Φ(a)) = 1l` and `Φ(a)` has word length `≤ k`.
    pub transported_verifies: Option<bool>,
    /// `T⁺ ≥ T⁻` when both are found.
    pub holds: Option<bool>,
}

pub fn torsion_monotonicity(f: &Potential, h_plus: &AlgElement, h_minus: &AlgElement, bounds: &SearchBounds, space: CandidateSpace) -> Result<TorsionMonotonicity> {
    if !check_chain_map(f, h_plus, h_minus)? {
        return Err(AlgError::NotChainMap);
    }
    let plus = torsion(h_plus, f.src(), bounds, space)?;
    let minus = torsion(h_minus, f.tgt(), bounds, space)?;
    let tilde_plus = torsion_tilde(h_plus, f.src(), bounds, space)?;
    let tilde_minus = torsion_tilde(h_minus, f.tgt(), bounds, space)?;
    let (mut transported, mut verifies) = (None, None);
    if let SearchStatus::Found { value, certificate } = &plus.status {
        let m = MorphismHandle::new(f.clone())?;
        let y = m.apply(certificate, None)?;
        let ok = coderivation(h_minus, &y)? == TensorWord::one_l(f.table()) && y.max_word_len() <= value + 1;
        transported = Some(y);
        verifies = Some(ok);
    }
    let holds = match (plus.value(), minus.value()) {
        (Some(a), Some(b)) => Some(a >= b),
        _ => None,
    };
    Ok(TorsionMonotonicity { plus, minus, tilde_plus, tilde_minus, transported, transported_verifies: verifies, holds })
}

fn max_q(x: &AlgElement) -> usize {
    x.max_q_len() as usize
}

fn max_p(x: &AlgElement) -> usize {
    x.max_p_len() as usize
}

/// `e^f` with enough copies of `f` for every term that can survive
/// `←D_a` followed by `p_src = 0`, with `kills` the number of available
/// source q-letters.
fn exp_for(f: &Potential, copies: usize) -> TensorWord {
    TensorWord::exp(f.element(), copies).with_cutoff(None)
}

/// Sign `ε` of the `→D⁻` term in the homotopy identity: `+1` when `g` has
/// even shifted degree, `−1` when odd. The odd case arises from expanding
/// the constrained chain-map equation to first order in an odd constraint
/// variable.
fn homotopy_sign(g: &AlgElement) -> Result<Q> {
    let n2 = 2 * g.table().n();
    Ok(match degree_of(g)? {
        Some(d) if (d - n2).rem_euclid(2) == 1 => -Q::one(),
        _ => Q::one(),
    })
}

/// `(e^f⊙g)←D⁺ − ε·→D⁻(g⊙e^f)`, with `ε` the shifted parity sign of `g`.
pub fn order_homotopy_rhs(ef: &TensorWord, g: &AlgElement, h_plus: &AlgElement, h_minus: &AlgElement) -> Result<TensorWord> {
    let gw = TensorWord::from_element(g);
    let eps = homotopy_sign(g)?;
    Ok(left_action(h_plus, &ef.odot(&gw))?.sub(&right_action(h_minus, &gw.odot(ef))?.scale_q(&eps)))
}

/// `→D_{g⁻}e^f − e^f←D_{g⁺} = (e^f⊙g)←D⁺ − ε·→D⁻(g⊙e^f)`, compared on all
/// words of length `≤ cutoff`.
pub fn check_order_homotopy(
    f: &Potential,
    g: &AlgElement,
    g_plus: &AlgElement,
    g_minus: &AlgElement,
    h_plus: &AlgElement,
    h_minus: &AlgElement,
    cutoff: usize,
) -> Result<bool> {
    if !check_chain_map(f, h_plus, h_minus)? {
        return Err(AlgError::NotChainMap);
    }
    let merge = [max_p(g_minus), max_q(g_plus), max_q(h_plus), max_p(h_minus)].into_iter().max().unwrap_or(1);
    let ef = exp_for(f, cutoff + merge + 1);
    let lhs = right_action(g_minus, &ef)?.sub(&left_action(g_plus, &ef)?);
    let rhs = order_homotopy_rhs(&ef, g, h_plus, h_minus)?;
    let mut diff = lhs.sub(&rhs);
    diff.retain(|w| w.len() <= cutoff);
    Ok(diff.is_zero())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderMonotonicity {
    pub plus: OrderResult,
    pub minus: OrderResult,
    /// The values of the seven expressions in the transport argument, from
    /// `π D_{g⁻}(Φ(a))` down to `Φ(1l)`, each read off at `1l`.
    pub chain: Option<Vec<Scalar>>,
    /// All chain values equal `1`.
    pub chain_holds: Option<bool>,
    /// `O⁺ ≥ O⁻` when both are found.
    pub holds: Option<bool>,
}

#[allow(clippy::too_many_arguments)]
pub fn order_monotonicity(
    f: &Potential,
    g: &AlgElement,
    g_plus: &AlgElement,
    g_minus: &AlgElement,
    h_plus: &AlgElement,
    h_minus: &AlgElement,
    bounds: &SearchBounds,
) -> Result<OrderMonotonicity> {
    if !f.in_hat() {
        return Err(AlgError::NotHat);
    }
    if !check_order_homotopy(f, g, g_plus, g_minus, h_plus, h_minus, bounds.k_max)? {
        return Err(AlgError::HomotopyFails);
    }
    let plus = order(h_plus, g_plus, f.src(), bounds)?;
    let minus = order(h_minus, g_minus, f.tgt(), bounds)?;
    let mut chain = None;
    if let Some(a) = plus.result.certificate() {
        chain = Some(order_chain(f, g, g_plus, g_minus, h_plus, h_minus, a)?);
    }
    let chain_holds = chain.as_ref().map(|c| c.iter().all(|v| v.is_one()));
    let holds = match (plus.result.value(), minus.result.value()) {
        (Some(a), Some(b)) => Some(a >= b),
        _ => None,
    };
    Ok(OrderMonotonicity { plus, minus, chain, chain_holds, holds })
}

/// The seven values in the transport of an order certificate `a`.
pub fn order_chain(
    f: &Potential,
    g: &AlgElement,
    g_plus: &AlgElement,
    g_minus: &AlgElement,
    h_plus: &AlgElement,
    h_minus: &AlgElement,
    a: &TensorWord,
) -> Result<Vec<Scalar>> {
    let table = f.table().clone();
    let src = f.src();
    let m = MorphismHandle::new(f.clone())?;
    let tau = a.terms().map(|(w, _)| w.q_len_on(src) as usize).max().unwrap_or(0);
    let ef = exp_for(f, tau + max_q(h_plus) + max_q(g_plus) + 1);
    let gw = TensorWord::from_element(g);
    let restrict = |x: TensorWord| x.set_zero(Kind::P, src);

    let phi_a = m.apply(a, None)?;
    let v1 = pi(&coderivation(g_minus, &phi_a)?);
    let v2 = pi(&restrict(right_action(g_minus, &word_action(&ef, a))?));
    let eps = homotopy_sign(g)?;
    let x = left_action(g_plus, &ef)?.add(&order_homotopy_rhs(&ef, g, h_plus, h_minus)?);
    let v3 = pi(&restrict(word_action(&x, a)));
    let dga = coderivation(g_plus, a)?;
    let dha = coderivation(h_plus, a)?;
    let y = word_action(&ef, &dga).add(&word_action(&ef.odot(&gw), &dha)).sub(&right_action(h_minus, &word_action(&gw.odot(&ef), a))?.scale_q(&eps));
    let v4 = pi(&restrict(y));
    let v5 = pi(&m.apply(&dga, None)?);
    let c = pi(&dga);
    let v6 = pi(&m.apply(&TensorWord::one_l(&table).scale(&c), None)?);
    let v7 = pi(&m.apply(&TensorWord::one_l(&table), None)?);
    Ok(vec![v1, v2, v3, v4, v5, v6, v7])
}
