//! Sparse exact elements of the graded supercommutative p/q/t algebra.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{AlgError, Result};
use crate::monomial::Monomial;
use crate::scalar::{fmt_q, Scalar, Q};
use crate::table::{GeneratorTable, Kind, Side, Var};

/// Which space an element is meant to live in. Tags are checked by the
/// public `add`/`mul`; brackets and substitutions combine tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ctx {
    /// 𝔄: polynomials in q-variables.
    A,
    /// 𝓟: power series in p with polynomial q-coefficients.
    P,
    /// 𝓛: power series in p⁺ with polynomial q⁻-coefficients.
    L,
    /// 𝓛₀: pure power series in p⁺.
    L0,
}

/// Truncation profile: maximal total p-degree and energy cutoff. `None`
/// means unbounded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Truncation {
    pub p_max: Option<u32>,
    pub energy: Option<Q>,
}

impl Truncation {
    pub fn none() -> Self {
        Truncation::default()
    }

    pub fn p_max(p: u32) -> Self {
        Truncation { p_max: Some(p), energy: None }
    }

    pub fn energy(e: Q) -> Self {
        Truncation { p_max: None, energy: Some(e) }
    }

    /// Intersection of two profiles: the tighter bound wins.
    pub fn meet(&self, other: &Truncation) -> Truncation {
        let p_max = match (self.p_max, other.p_max) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let energy = match (&self.energy, &other.energy) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        Truncation { p_max, energy }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(i64),
    Inhomogeneous,
}

impl Homogeneity {
    /// Degree if homogeneous and nonzero.
    pub fn value(&self) -> Option<i64> {
        match self {
            Homogeneity::Degree(d) => Some(*d),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AlgElement {
    table: Arc<GeneratorTable>,
    ctx: Ctx,
    trunc: Truncation,
    terms: BTreeMap<Monomial, Scalar>,
    truncated: bool,
}

impl PartialEq for AlgElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for AlgElement {}

impl AlgElement {
    pub fn zero(table: &Arc<GeneratorTable>, ctx: Ctx, trunc: Truncation) -> Self {
        AlgElement { table: table.clone(), ctx, trunc, terms: BTreeMap::new(), truncated: false }
    }

    pub fn constant(table: &Arc<GeneratorTable>, ctx: Ctx, trunc: Truncation, c: Scalar) -> Self {
        let mut e = Self::zero(table, ctx, trunc);
        e.insert(Monomial::one(), c);
        e
    }

    pub fn var(table: &Arc<GeneratorTable>, ctx: Ctx, trunc: Truncation, v: Var) -> Result<Self> {
        table.check_var(v)?;
        let mut e = Self::zero(table, ctx, trunc);
        e.insert(Monomial::var(v), Scalar::one());
        Ok(e)
    }

    pub fn from_term(table: &Arc<GeneratorTable>, ctx: Ctx, trunc: Truncation, m: Monomial, c: Scalar) -> Self {
        let mut e = Self::zero(table, ctx, trunc);
        e.insert(m, c);
        e
    }

    /// Empty element sharing table, tag and profile with `self`.
    pub fn empty_like(&self) -> Self {
        AlgElement {
            table: self.table.clone(),
            ctx: self.ctx,
            trunc: self.trunc.clone(),
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    /// Whether any nonzero term was dropped by the truncation profile while
    /// producing this element (sticky across operations).
    pub fn truncation_active(&self) -> bool {
        self.truncated
    }

    pub fn with_ctx(mut self, ctx: Ctx) -> Self {
        self.ctx = ctx;
        self
    }

    /// Re-truncate to a (usually tighter) profile.
    pub fn with_truncation(&self, trunc: Truncation) -> Self {
        let mut out = AlgElement {
            table: self.table.clone(),
            ctx: self.ctx,
            trunc,
            terms: BTreeMap::new(),
            truncated: self.truncated,
        };
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub(crate) fn mark_truncated(&mut self, flag: bool) {
        self.truncated |= flag;
    }

    /// Add `c·m`, honoring the truncation profile.
    pub(crate) fn insert(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        if self.trunc.p_max.is_some_and(|p| m.p_len() > p) {
            self.truncated = true;
            return;
        }
        let (c, dropped) = c.truncate(self.trunc.energy.as_ref());
        self.truncated |= dropped;
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub(crate) fn insert_signed(&mut self, m: Monomial, c: Scalar, negative: bool) {
        self.insert(m, if negative { c.neg() } else { c });
    }

    fn check_compatible(&self, other: &AlgElement) -> Result<()> {
        if self.ctx != other.ctx || !same_table(&self.table, &other.table) {
            return Err(AlgError::ContextMismatch);
        }
        Ok(())
    }

    /// Coefficientwise sum. Both operands must carry the same context tag.
    pub fn add(&self, other: &AlgElement) -> Result<AlgElement> {
        self.check_compatible(other)?;
        Ok(self.add_any(other))
    }

    pub fn sub(&self, other: &AlgElement) -> Result<AlgElement> {
        self.check_compatible(other)?;
        Ok(self.add_any(&other.neg()))
    }

    /// Supercommutative product. Both operands must carry the same tag.
    pub fn mul(&self, other: &AlgElement) -> Result<AlgElement> {
        self.check_compatible(other)?;
        Ok(self.mul_any(other))
    }

    /// Sum ignoring context tags; the result keeps `self`'s tag.
    pub fn add_any(&self, other: &AlgElement) -> AlgElement {
        let mut out = self.empty_like();
        out.trunc = self.trunc.meet(&other.trunc);
        out.truncated = self.truncated || other.truncated;
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub_any(&self, other: &AlgElement) -> AlgElement {
        self.add_any(&other.neg())
    }

    /// Product ignoring context tags; the result keeps `self`'s tag.
    pub fn mul_any(&self, other: &AlgElement) -> AlgElement {
        let mut out = self.empty_like();
        out.trunc = self.trunc.meet(&other.trunc);
        out.truncated = self.truncated || other.truncated;
        let energy = out.trunc.energy.clone();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((m, s)) = m1.mul(m2, &self.table) {
                    let (c, dropped) = c1.mul_trunc(c2, energy.as_ref());
                    out.truncated |= dropped;
                    out.insert_signed(m, c, s);
                }
            }
        }
        out
    }

    pub fn neg(&self) -> AlgElement {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> AlgElement {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        let energy = self.trunc.energy.clone();
        for (m, c) in &self.terms {
            let (c, dropped) = c.mul_trunc(s, energy.as_ref());
            out.truncated |= dropped;
            out.insert(m.clone(), c);
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> AlgElement {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (m, x) in &self.terms {
            out.insert(m.clone(), x.scale(c));
        }
        out
    }

    pub fn pow(&self, n: u32) -> AlgElement {
        let mut acc = AlgElement::constant(&self.table, self.ctx, self.trunc.clone(), Scalar::one());
        for _ in 0..n {
            acc = acc.mul_any(self);
        }
        acc
    }

    /// Common degree of all terms.
    pub fn degree(&self) -> Homogeneity {
        let mut it = self.terms.keys().map(|m| m.degree(&self.table));
        let Some(d) = it.next() else {
            return Homogeneity::Zero;
        };
        if it.all(|e| e == d) {
            Homogeneity::Degree(d)
        } else {
            Homogeneity::Inhomogeneous
        }
    }

    /// Parity of a homogeneous element; zero counts as even.
    pub fn parity(&self) -> Result<bool> {
        match self.degree() {
            Homogeneity::Zero => Ok(false),
            Homogeneity::Degree(d) => Ok(d.rem_euclid(2) == 1),
            Homogeneity::Inhomogeneous => Err(AlgError::InhomogeneousInput),
        }
    }

    fn derivative(&self, v: Var, left: bool) -> AlgElement {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            let d = if left { m.left_derivative(v, &self.table) } else { m.right_derivative(v, &self.table) };
            if let Some((r, s, e)) = d {
                out.insert_signed(r, c.scale(&Q::from_integer(e.into())), s);
            }
        }
        out
    }

    /// Graded left partial derivative `∂→_v`.
    pub fn partial(&self, v: Var) -> AlgElement {
        self.derivative(v, true)
    }

    /// Graded right partial derivative `∂←_v`.
    pub fn right_partial(&self, v: Var) -> AlgElement {
        self.derivative(v, false)
    }

    /// Poisson bracket of degree `−2N`; rejects inhomogeneous inputs.
    pub fn bracket(&self, other: &AlgElement) -> Result<AlgElement> {
        if matches!(self.degree(), Homogeneity::Inhomogeneous) || matches!(other.degree(), Homogeneity::Inhomogeneous)
        {
            return Err(AlgError::InhomogeneousInput);
        }
        if !same_table(&self.table, &other.table) {
            return Err(AlgError::ContextMismatch);
        }
        Ok(self.bracket_any(other))
    }

    /// The bracket
    /// `{f,g} = Σ_γ κ_γ [ (f∂←p_γ)(∂→q_γ g) − (−1)^{|q_γ|} (f∂←q_γ)(∂→p_γ g) ]`,
    /// summed over all sides. It is bilinear and needs no homogeneity.
    pub fn bracket_any(&self, other: &AlgElement) -> AlgElement {
        let table = &self.table;
        let mut out = self.empty_like();
        out.ctx = combine_ctx(self.ctx, other.ctx);
        out.trunc = self.trunc.meet(&other.trunc);
        out.truncated = self.truncated || other.truncated;
        let energy = out.trunc.energy.clone();
        for (m1, c1) in &self.terms {
            for &(v, _) in m1.vars() {
                let Some(dual) = v.dual() else { continue };
                let (a, sa, ea) = m1.right_derivative(v, table).expect("variable present");
                let odd = table.is_odd(v);
                let kappa = table.kappa(v);
                for (m2, c2) in &other.terms {
                    let Some((b, sb, eb)) = m2.left_derivative(dual, table) else { continue };
                    let Some((ab, sab)) = a.mul(&b, table) else { continue };
                    let mut sign = sa ^ sb ^ sab;
                    if v.kind == Kind::Q {
                        // − (−1)^{ε}
                        sign ^= !odd;
                    }
                    let (c, dropped) = c1.mul_trunc(c2, energy.as_ref());
                    out.truncated |= dropped;
                    let factor = Q::from_integer((kappa * ea as i64 * eb as i64).into());
                    out.insert_signed(ab, c.scale(&factor), sign);
                }
            }
        }
        out
    }

    /// Substitute variables by elements (an algebra homomorphism as long as
    /// each image has the parity of its variable).
    pub fn substitute(&self, map: &BTreeMap<Var, AlgElement>) -> AlgElement {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for img in map.values() {
            out.trunc = out.trunc.meet(&img.trunc);
            out.truncated |= img.truncated;
        }
        let mut acc_all = out.clone();
        for (m, c) in &self.terms {
            if !m.vars().iter().any(|(v, _)| map.contains_key(v)) {
                acc_all.insert(m.clone(), c.clone());
                continue;
            }
            let mut acc = AlgElement::constant(&self.table, self.ctx, out.trunc.clone(), c.clone());
            for &(v, e) in m.vars() {
                let img = match map.get(&v) {
                    Some(x) => x.clone(),
                    None => AlgElement::from_term(&self.table, self.ctx, out.trunc.clone(), Monomial::var(v), Scalar::one()),
                };
                for _ in 0..e {
                    acc = acc.mul_any(&img);
                }
                if acc.is_zero() {
                    break;
                }
            }
            acc_all = acc_all.add_any(&acc);
        }
        acc_all
    }

    /// Restriction to the Lagrangian graph of `f`:
    /// `p_γ^minus ↦ {p_γ^minus, f} = κ_γ ∂f/∂q_γ^minus`,
    /// `q_γ^plus ↦ {f, q_γ^plus} = κ_γ f∂←/∂p_γ^plus`.
    /// For even generators both are the usual `κ ∂f`.
    pub fn restrict_to_lagrangian(&self, f: &AlgElement, plus: Side, minus: Side) -> AlgElement {
        let mut map = BTreeMap::new();
        for (m, _) in &self.terms {
            for &(v, _) in m.vars() {
                if map.contains_key(&v) {
                    continue;
                }
                let x = AlgElement::from_term(&self.table, Ctx::L, Truncation::none(), Monomial::var(v), Scalar::one());
                if v.kind == Kind::P && v.side == minus {
                    map.insert(v, x.bracket_any(f).with_ctx(Ctx::L));
                } else if v.kind == Kind::Q && v.side == plus {
                    map.insert(v, f.bracket_any(&x).with_ctx(Ctx::L));
                }
            }
        }
        let mut out = self.substitute(&map);
        out.ctx = Ctx::L;
        out.trunc = out.trunc.meet(&f.trunc);
        out
    }

    fn filter(&self, pred: impl Fn(&Monomial) -> bool) -> AlgElement {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            if pred(m) {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Terms of total p-degree `r` and total q-degree `s`.
    pub fn extract_bidegree(&self, r: u32, s: u32) -> AlgElement {
        self.filter(|m| m.p_len() == r && m.q_len() == s)
    }

    /// Terms whose p-degree on `side` equals `r`.
    pub fn p_degree_part(&self, side: Side, r: u32) -> AlgElement {
        self.filter(|m| m.p_len_on(side) == r)
    }

    /// Terms whose q-degree on `side` equals `s`.
    pub fn q_degree_part(&self, side: Side, s: u32) -> AlgElement {
        self.filter(|m| m.q_len_on(side) == s)
    }

    /// Terms with total p-degree `r` (all sides).
    pub fn p_len_part(&self, r: u32) -> AlgElement {
        self.filter(|m| m.p_len() == r)
    }

    /// Terms with total q-degree `s` (all sides).
    pub fn q_len_part(&self, s: u32) -> AlgElement {
        self.filter(|m| m.q_len() == s)
    }

    /// Set every variable of `kind` on `side` to zero.
    pub fn set_zero(&self, kind: Kind, side: Side) -> AlgElement {
        self.filter(|m| !m.vars().iter().any(|(v, _)| v.kind == kind && v.side == side))
    }

    /// Set every variable of `kind` (any side) to zero.
    pub fn set_kind_zero(&self, kind: Kind) -> AlgElement {
        self.filter(|m| !m.vars().iter().any(|(v, _)| v.kind == kind))
    }

    /// Coefficient of the t-monomial `t_mono`, written as `h = Σ_T T·h(T)`.
    pub fn extract_t_part(&self, t_mono: &Monomial) -> AlgElement {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            let (t, rest, sign) = m.split_t(&self.table);
            if &t == t_mono {
                out.insert_signed(rest, c.clone(), sign);
            }
        }
        out
    }

    /// The set of t-monomials occurring in `self`.
    pub fn t_monomials(&self) -> Vec<Monomial> {
        let mut v: Vec<Monomial> = self.terms.keys().map(|m| m.split_t(&self.table).0).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Every term contains a p-variable (`h|_{p=0} = 0`).
    pub fn in_overline(&self) -> bool {
        self.terms.keys().all(|m| m.p_len() > 0)
    }

    /// Every term contains a q-variable (`h|_{q=0} = 0`).
    pub fn in_underline(&self) -> bool {
        self.terms.keys().all(|m| m.q_len() > 0)
    }

    pub fn in_hat(&self) -> bool {
        self.in_overline() && self.in_underline()
    }

    /// Every term contains a p-variable on the given side.
    pub fn in_overline_on(&self, side: Side) -> bool {
        self.terms.keys().all(|m| m.p_len_on(side) > 0)
    }

    /// Minimal Novikov exponent over all terms; `None` for zero.
    pub fn filtration_level(&self) -> Option<Q> {
        self.terms.values().filter_map(|c| c.filtration_level()).min()
    }

    pub fn max_p_len(&self) -> u32 {
        self.terms.keys().map(|m| m.p_len()).max().unwrap_or(0)
    }

    pub fn max_q_len(&self) -> u32 {
        self.terms.keys().map(|m| m.q_len()).max().unwrap_or(0)
    }

    /// Move all q/p variables on side `from` to side `to`.
    pub fn rename_side(&self, from: Side, to: Side) -> Result<AlgElement> {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (m, c) in &self.terms {
            let (r, s) = m.rename_side(from, to, &self.table).ok_or(AlgError::ContextMismatch)?;
            for (v, _) in r.vars() {
                self.table.check_var(*v)?;
            }
            out.insert_signed(r, c.clone(), s);
        }
        Ok(out)
    }

    /// All scalars rational.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }
}

pub(crate) fn same_table(a: &Arc<GeneratorTable>, b: &Arc<GeneratorTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

fn combine_ctx(a: Ctx, b: Ctx) -> Ctx {
    if a == b {
        a
    } else if a == Ctx::L || b == Ctx::L || a == Ctx::L0 || b == Ctx::L0 {
        Ctx::L
    } else {
        Ctx::P
    }
}

/// Format one `c·λ^a·m` piece.
fn write_piece(f: &mut fmt::Formatter<'_>, first: bool, c: &Q, a: &Q, m: &str) -> fmt::Result {
    let neg = c.is_negative();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if neg { " - " } else { " + " })?;
    }
    let abs = c.abs();
    let mut parts: Vec<String> = Vec::new();
    if !abs.is_one() || (a.is_zero() && m.is_empty()) {
        parts.push(fmt_q(&abs));
    }
    if !a.is_zero() {
        parts.push(format!("L^{}", fmt_q(a)));
    }
    if !m.is_empty() {
        parts.push(m.to_string());
    }
    write!(f, "{}", parts.join("*"))
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let ms = if m.is_one() { String::new() } else { m.display(&self.table).to_string() };
            for (a, x) in c.terms() {
                write_piece(f, first, &x, &a, &ms)?;
                first = false;
            }
        }
        Ok(())
    }
}
