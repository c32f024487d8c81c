//! Morphisms of coalgebras induced by potentials `f ∈ 𝓛̄`.
//!
//! A potential lives in the variables `p` on its source side, `q` on its
//! target side, and constraint variables `t`. The induced map is
//! `Φ(w₁⊙…⊙w_r) = ((e^f)←D_{w₁⊙…⊙w_r})|_{p=0}` with components
//! `φ^r(w₁⊙…⊙w_r) = (f^{⊙n}/n! ←D_{w₁⊙…⊙w_r})|_{p=0}`, `n = τ−r+1`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::coalgebra::{TensorWord, Word};
use crate::coderivation::{check_master, left_coderivation_raw, mono_elem};
use crate::element::{AlgElement, Ctx, Homogeneity, Truncation};
use crate::error::{AlgError, Result};
use crate::monomial::{Monomial, Sign};
use crate::scalar::{Scalar, Q};
use crate::table::{GeneratorTable, Kind, Side, Var};

/// A degree-`2N` element in `p_src`, `q_tgt` and `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Potential {
    f: AlgElement,
    src: Side,
    tgt: Side,
}

impl Potential {
    pub fn new(f: AlgElement, src: Side, tgt: Side) -> Result<Potential> {
        if src == tgt {
            return Err(AlgError::ContextMismatch);
        }
        let n = f.table().n();
        match f.degree() {
            Homogeneity::Zero => {}
            Homogeneity::Inhomogeneous => return Err(AlgError::InhomogeneousInput),
            Homogeneity::Degree(d) if d != 2 * n => {
                return Err(AlgError::DegreeMismatch { expected: 2 * n, found: d });
            }
            Homogeneity::Degree(_) => {}
        }
        for (m, _) in f.terms() {
            for (v, _) in m.vars() {
                let ok = match v.kind {
                    Kind::P => v.side == src,
                    Kind::Q => v.side == tgt,
                    Kind::T => true,
                };
                if !ok {
                    return Err(AlgError::ContextMismatch);
                }
            }
        }
        Ok(Potential { f: f.with_ctx(Ctx::L), src, tgt })
    }

    pub fn element(&self) -> &AlgElement {
        &self.f
    }

    pub fn src(&self) -> Side {
        self.src
    }

    pub fn tgt(&self) -> Side {
        self.tgt
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        self.f.table()
    }

    /// Every term contains a source-side p-variable.
    pub fn in_overline(&self) -> bool {
        self.f.in_overline_on(self.src)
    }

    pub fn in_hat(&self) -> bool {
        self.in_overline() && self.f.terms().all(|(m, _)| m.q_len_on(self.tgt) > 0)
    }

    /// `f⁰ = f|_{p=0}`, the part without source p-variables.
    pub fn p_free_part(&self) -> AlgElement {
        self.f.set_zero(Kind::P, self.src)
    }

    /// Same potential with sides renamed.
    pub fn with_sides(&self, src: Side, tgt: Side) -> Result<Potential> {
        let mut f = self.f.clone();
        // move through a side not in use to avoid collisions
        let spare = Side::ALL.into_iter().find(|s| *s != self.src && *s != self.tgt).expect("three sides");
        if src != self.src {
            f = f.rename_side(self.src, spare)?;
        }
        if tgt != self.tgt {
            f = f.rename_side(self.tgt, tgt)?;
        }
        if src != self.src {
            f = f.rename_side(spare, src)?;
        }
        Potential::new(f, src, tgt)
    }
}

/// `i = Σ_γ (1/κ_γ) q_γ^tgt p_γ^src` over generators declared on both sides.
pub fn identity(table: &Arc<GeneratorTable>, src: Side, tgt: Side) -> Result<Potential> {
    let mut f = AlgElement::zero(table, Ctx::L, Truncation::none());
    for (i, g) in table.generators().iter().enumerate() {
        if !(g.on_side(src) && g.on_side(tgt)) {
            continue;
        }
        let (m, s) = Monomial::from_vars(table, &[Var::q(i, tgt), Var::p(i, src)]).expect("distinct variables");
        let c = Scalar::from_q(Q::new(1.into(), g.kappa.into()));
        f = f.add_any(&AlgElement::from_term(table, Ctx::L, Truncation::none(), m, if s { c.neg() } else { c }));
    }
    Potential::new(f, src, tgt)
}

/// Koszul sign of listing `odd`-flagged items in the order `perm`.
pub(crate) fn perm_sign(odd: &[bool], perm: &[usize]) -> Sign {
    let mut sign = false;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] && odd[perm[a]] && odd[perm[b]] {
                sign = !sign;
            }
        }
    }
    sign
}

/// All set partitions of `0..n`, blocks ordered by their least element.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// The coalgebra morphism induced by a potential in `𝓛̄`, with a cache of
/// its components.
#[derive(Debug)]
pub struct MorphismHandle {
    potential: Potential,
    phi_cache: Mutex<HashMap<Word, AlgElement>>,
}

impl MorphismHandle {
    pub fn new(potential: Potential) -> Result<MorphismHandle> {
        if !potential.in_overline() {
            return Err(AlgError::NotOverline);
        }
        Ok(MorphismHandle { potential, phi_cache: Mutex::new(HashMap::new()) })
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    fn table(&self) -> &Arc<GeneratorTable> {
        self.potential.table()
    }

    /// `Σ_n` scaled powers `f^{⊙n}/n!` for `n` in `ns`, as one tensor word.
    fn f_powers(&self, ns: impl Iterator<Item = usize>) -> TensorWord {
        let f = &self.potential.f;
        let base = TensorWord::from_element(f);
        let mut out = TensorWord::zero(self.table()).with_energy(f.truncation().energy.clone());
        let mut power = TensorWord::unit(self.table()).with_energy(f.truncation().energy.clone());
        let mut done = 0;
        for n in ns {
            while done < n {
                done += 1;
                power = power.odot(&base).scale_q(&Q::new(1.into(), (done as i64).into()));
            }
            out = out.add(&power);
        }
        out.mark_truncated(f.truncation_active());
        out
    }

    /// Apply `←D_{w₁}∘…∘←D_{w_r}` and set source p-variables to zero,
    /// pruning words that can no longer lose all their source p's.
    fn act_and_restrict(&self, mut x: TensorWord, ws: &[Monomial]) -> TensorWord {
        let src = self.potential.src;
        let mut remaining: u32 = ws.iter().map(|m| m.q_len_on(src)).sum();
        x.retain(|w| w.p_len_on(src) <= remaining);
        for m in ws {
            let g = mono_elem(self.table(), m);
            x = left_coderivation_raw(&x, &g, 0);
            remaining -= m.q_len_on(src);
            x.retain(|w| w.p_len_on(src) <= remaining);
            if x.is_zero() {
                break;
            }
        }
        x.set_zero(Kind::P, src)
    }

    /// `φ^r` on monomial inputs.
    pub fn phi_monomials(&self, ws: &[Monomial]) -> AlgElement {
        let zero = AlgElement::zero(self.table(), Ctx::A, Truncation::none());
        let Some((key, sign)) = Word::canonical(ws.to_vec(), self.table()) else {
            return zero;
        };
        if let Some(v) = self.phi_cache.lock().expect("cache lock").get(&key) {
            return if sign { v.neg() } else { v.clone() };
        }
        let src = self.potential.src;
        let r = key.len() as i64;
        let tau: i64 = key.factors().iter().map(|m| m.q_len_on(src) as i64).sum();
        let n = tau - r + 1;
        let val = if n < 0 || r == 0 {
            zero
        } else {
            let x = self.f_powers(std::iter::once(n as usize));
            self.act_and_restrict(x, key.factors()).to_element(Ctx::A)
        };
        self.phi_cache.lock().expect("cache lock").insert(key, val.clone());
        if sign {
            val.neg()
        } else {
            val
        }
    }

    /// `(f^{⊙n}/n! ←D_{w₁⊙…⊙w_r})` projected to `S¹`, before setting the
    /// source p-variables to zero. Its p-free part is `φ^r`.
    pub fn connected_component(&self, ws: &[Monomial]) -> AlgElement {
        let zero = AlgElement::zero(self.table(), Ctx::L, Truncation::none());
        let Some((key, sign)) = Word::canonical(ws.to_vec(), self.table()) else {
            return zero;
        };
        let src = self.potential.src;
        let r = key.len() as i64;
        let tau: i64 = key.factors().iter().map(|m| m.q_len_on(src) as i64).sum();
        let n = tau - r + 1;
        if n < 0 || r == 0 {
            return zero;
        }
        let mut x = self.f_powers(std::iter::once(n as usize));
        for m in key.factors() {
            x = left_coderivation_raw(&x, &mono_elem(self.table(), m), 0);
            if x.is_zero() {
                break;
            }
        }
        let val = x.length_part(1).to_element(Ctx::L);
        if sign {
            val.neg()
        } else {
            val
        }
    }

    /// `φ^r(x₁⊙…⊙x_r)`, extended multilinearly.
    pub fn phi(&self, xs: &[AlgElement]) -> AlgElement {
        let tw = TensorWord::from_elements(self.table(), xs);
        let mut out = AlgElement::zero(self.table(), Ctx::A, Truncation::none());
        for (w, c) in tw.terms() {
            out = out.add_any(&self.phi_monomials(w.factors()).scale(c));
        }
        out
    }

    fn check_cutoff(x: &TensorWord, k: Option<usize>) -> Result<()> {
        if let Some(k) = k {
            let found = x.max_word_len();
            if found > k {
                return Err(AlgError::CutoffExceeded { cutoff: k, found });
            }
        }
        Ok(())
    }

    /// `Φ(x) = ((e^f)←D_x)|_{p=0}` evaluated directly.
    pub fn apply_direct(&self, x: &TensorWord, k: Option<usize>) -> Result<TensorWord> {
        Self::check_cutoff(x, k)?;
        let src = self.potential.src;
        let mut out = TensorWord::zero(self.table()).with_cutoff(k);
        for (w, c) in x.terms() {
            if w.is_empty() {
                out = out.add(&TensorWord::unit(self.table()).scale(c));
                continue;
            }
            let tau = w.q_len_on(src) as usize;
            let ef = self.f_powers(0..=tau);
            let y = self.act_and_restrict(ef, w.factors());
            out = out.add(&y.scale(c));
        }
        out.mark_truncated(x.truncation_active());
        Ok(out)
    }

    /// `Φ = e^φ`: sum over set partitions of `φ(block₁)⊙…⊙φ(block_m)`.
    pub fn apply(&self, x: &TensorWord, k: Option<usize>) -> Result<TensorWord> {
        Self::check_cutoff(x, k)?;
        let table = self.table().clone();
        let mut out = TensorWord::zero(&table).with_cutoff(k);
        for (w, c) in x.terms() {
            let n = w.len();
            if n == 0 {
                out = out.add(&TensorWord::unit(&table).scale(c));
                continue;
            }
            let odd: Vec<bool> = w.factors().iter().map(|m| m.is_odd(&table)).collect();
            for blocks in set_partitions(n) {
                let perm: Vec<usize> = blocks.iter().flatten().copied().collect();
                let sign = perm_sign(&odd, &perm);
                let mut acc = TensorWord::unit(&table);
                for b in &blocks {
                    let ms: Vec<Monomial> = b.iter().map(|&i| w.factors()[i].clone()).collect();
                    let v = self.phi_monomials(&ms);
                    if v.is_zero() {
                        acc = TensorWord::zero(&table);
                        break;
                    }
                    acc = acc.odot(&TensorWord::from_element(&v));
                }
                let coef = if sign { c.neg() } else { c.clone() };
                out = out.add(&acc.scale(&coef));
            }
        }
        out.mark_truncated(x.truncation_active());
        Ok(out)
    }
}

/// `h⁻|_{L_f} = h⁺|_{L_f}`, which holds iff `Φ` intertwines `D^±`.
pub fn check_chain_map(f: &Potential, h_plus: &AlgElement, h_minus: &AlgElement) -> Result<bool> {
    if !check_master(h_plus)? || !check_master(h_minus)? {
        return Err(AlgError::MasterEquationFails);
    }
    let a = h_minus.restrict_to_lagrangian(&f.f, f.src, f.tgt);
    let b = h_plus.restrict_to_lagrangian(&f.f, f.src, f.tgt);
    Ok(a == b)
}

/// The potential of `Φ⁻∘Φ⁺`. `f_plus` maps `Plus → Mid`, `f_minus` maps
/// `Mid → Minus`; the result maps `Plus → Minus`. The coupled substitution
/// `p = {p, f⁺}`, `q = {f⁻, q}` on the middle variables is iterated to a
/// fixed point with total source p-degree truncated at `p_max`.
pub fn compose(f_minus: &Potential, f_plus: &Potential, p_max: u32) -> Result<Potential> {
    if f_plus.src != Side::Plus || f_plus.tgt != Side::Mid || f_minus.src != Side::Mid || f_minus.tgt != Side::Minus {
        return Err(AlgError::ContextMismatch);
    }
    if !f_plus.in_overline() || !f_minus.in_overline() {
        return Err(AlgError::NotOverline);
    }
    let table = f_plus.table().clone();
    let trunc = Truncation { p_max: Some(p_max), energy: None }
        .meet(f_plus.f.truncation())
        .meet(f_minus.f.truncation());
    let fp = f_plus.f.with_truncation(trunc.clone());
    let fm = f_minus.f.with_truncation(trunc.clone());
    let mid = table.indices_on(Side::Mid);
    let var_el = |v: Var| AlgElement::from_term(&table, Ctx::L, trunc.clone(), Monomial::var(v), Scalar::one());
    // {p_γ, f⁺} (function of p⁺ and q_mid), {f⁻, q_γ} (function of p_mid and q⁻)
    let dp: Vec<(Var, AlgElement)> = mid.iter().map(|&i| (Var::p(i, Side::Mid), var_el(Var::p(i, Side::Mid)).bracket_any(&fp))).collect();
    let dq: Vec<(Var, AlgElement)> = mid.iter().map(|&i| (Var::q(i, Side::Mid), fm.bracket_any(&var_el(Var::q(i, Side::Mid))))).collect();
    let mut p_val: BTreeMap<Var, AlgElement> = dp.iter().map(|(v, _)| (*v, fp.empty_like())).collect();
    let mut q_val: BTreeMap<Var, AlgElement> = dq.iter().map(|(v, _)| (*v, fp.empty_like())).collect();
    let budget = 2 * p_max as usize + 4;
    let mut stable = false;
    for _ in 0..budget {
        let new_p: BTreeMap<Var, AlgElement> = dp.iter().map(|(v, e)| (*v, e.substitute(&q_val))).collect();
        let new_q: BTreeMap<Var, AlgElement> = dq.iter().map(|(v, e)| (*v, e.substitute(&p_val))).collect();
        if new_p == p_val && new_q == q_val {
            stable = true;
            break;
        }
        p_val = new_p;
        q_val = new_q;
    }
    if !stable {
        return Err(AlgError::NonTerminating(budget));
    }
    let mut pairing = fp.empty_like();
    for &i in &mid {
        let (m, s) = Monomial::from_vars(&table, &[Var::q(i, Side::Mid), Var::p(i, Side::Mid)]).expect("distinct");
        let c = Scalar::from_q(Q::new(1.into(), table.generator(i).kappa.into()));
        pairing.insert_signed(m, c, s);
    }
    let mut all = p_val;
    all.extend(q_val);
    let total = fp.add_any(&fm).sub_any(&pairing).substitute(&all);
    Potential::new(total.with_ctx(Ctx::L), Side::Plus, Side::Minus)
}

/// Split a word `∏ (±T_i m_i')` into its t-monomial and the word of the
/// `m_i'`, with overall sign; `None` if the t-part vanishes.
fn split_word_t(table: &GeneratorTable, w: &Word) -> Option<(Monomial, Vec<Monomial>, Sign)> {
    let mut sign = false;
    let mut t_acc = Monomial::one();
    let mut rests: Vec<Monomial> = Vec::with_capacity(w.len());
    let mut rest_odd = false;
    for m in w.factors() {
        let (t, rest, s) = m.split_t(table);
        sign ^= s;
        // move T past the rests already emitted
        if t.is_odd(table) && rest_odd {
            sign = !sign;
        }
        let (prod, s2) = t_acc.mul(&t, table)?;
        sign ^= s2;
        t_acc = prod;
        rest_odd ^= rest.is_odd(table);
        rests.push(rest);
    }
    Some((t_acc, rests, sign))
}

/// The `T`-coefficient of `e^f` at word length cutoff `k`.
pub fn constraint_expansion(f: &Potential, t_mono: &Monomial, k: usize) -> TensorWord {
    let ef = TensorWord::exp(&f.f, k);
    t_coefficient(&ef, t_mono)
}

/// The `T`-coefficient of a tensor word whose factors may contain t's.
pub fn t_coefficient(x: &TensorWord, t_mono: &Monomial) -> TensorWord {
    let table = x.table().clone();
    let mut out = x.empty_like();
    out.mark_truncated(x.truncation_active());
    for (w, c) in x.terms() {
        if let Some((t, rests, sign)) = split_word_t(&table, w) {
            if &t == t_mono {
                out.insert_factors(rests, c.clone(), sign);
            }
        }
    }
    out
}

/// `Φ(T)(x) = ((e^f)(T)←D_x)|_{p=0}`, with output truncated at word length `k`.
pub fn siegel_map(f: &Potential, t_mono: &Monomial, x: &TensorWord, k: usize) -> TensorWord {
    let table = f.table().clone();
    let src = f.src;
    let t_len: usize = t_mono.vars().iter().map(|(_, e)| *e as usize).sum();
    let mut out = TensorWord::zero(&table).with_cutoff(Some(k));
    for (w, c) in x.terms() {
        let tau = w.q_len_on(src) as usize;
        // f' factors each need a bracket; constraint factors number at most |T|
        let eft = constraint_expansion(f, t_mono, tau + t_len);
        let mut y = eft;
        for m in w.factors() {
            y = left_coderivation_raw(&y, &mono_elem(&table, m), 0);
        }
        out = out.add(&y.set_zero(Kind::P, src).scale(c));
    }
    out
}
