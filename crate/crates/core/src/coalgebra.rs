//! The graded symmetric coalgebra on monomials: words `w₁⊙…⊙w_r`, sums of
//! words with scalar coefficients, and exponentials.
//!
//! The shift by `2N` is even, so all Koszul signs use the unshifted parity
//! of each factor. The empty word is the unit of `S⁰`; `1l` is the length-1
//! word whose single factor is the constant monomial `1`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::element::{same_table, AlgElement, Ctx, Truncation};
use crate::error::{AlgError, Result};
use crate::monomial::{Monomial, Sign};
use crate::parse::{parse_element, ParseError};
use crate::scalar::{fmt_q, Scalar, Q};
use crate::table::{GeneratorTable, Kind, Side};

/// A sorted multiset of monomial factors.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Monomial>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// The word `1l` consisting of the constant factor `1`.
    pub fn one_l() -> Self {
        Word(vec![Monomial::one()])
    }

    /// Sort factors into canonical order. Returns the Koszul sign of the
    /// sorting permutation, or `None` if an odd factor repeats.
    pub fn canonical(mut factors: Vec<Monomial>, table: &GeneratorTable) -> Option<(Word, Sign)> {
        let odd: Vec<bool> = factors.iter().map(|m| m.is_odd(table)).collect();
        let mut idx: Vec<usize> = (0..factors.len()).collect();
        let mut sign = false;
        // insertion sort, tracking swaps of odd neighbours
        for i in 1..idx.len() {
            let mut j = i;
            while j > 0 && factors[idx[j - 1]] > factors[idx[j]] {
                if odd[idx[j - 1]] && odd[idx[j]] {
                    sign = !sign;
                }
                idx.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut sorted: Vec<Monomial> = Vec::with_capacity(idx.len());
        for &i in &idx {
            let m = std::mem::take(&mut factors[i]);
            if odd[i] && sorted.last() == Some(&m) {
                return None;
            }
            sorted.push(m);
        }
        Some((Word(sorted), sign))
    }

    pub fn factors(&self) -> &[Monomial] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Unshifted degree: sum of factor degrees.
    pub fn degree(&self, table: &GeneratorTable) -> i64 {
        self.0.iter().map(|m| m.degree(table)).sum()
    }

    /// Degree in `S(𝔄[2N])`: each factor is shifted down by `2N`.
    pub fn shifted_degree(&self, table: &GeneratorTable) -> i64 {
        self.degree(table) - 2 * table.n() * self.0.len() as i64
    }

    pub fn is_odd(&self, table: &GeneratorTable) -> bool {
        self.0.iter().filter(|m| m.is_odd(table)).count() % 2 == 1
    }

    pub fn q_len(&self) -> u32 {
        self.0.iter().map(|m| m.q_len()).sum()
    }

    pub fn p_len_on(&self, side: Side) -> u32 {
        self.0.iter().map(|m| m.p_len_on(side)).sum()
    }

    pub fn q_len_on(&self, side: Side) -> u32 {
        self.0.iter().map(|m| m.q_len_on(side)).sum()
    }
}

/// Sign of moving the factors at positions `sel` (increasing) to the front,
/// keeping both groups in their relative order.
pub(crate) fn front_sign(odd: &[bool], sel: &[usize]) -> Sign {
    let mut sign = false;
    for (k, &i) in sel.iter().enumerate() {
        if !odd[i] {
            continue;
        }
        // odd factors before i that are not selected
        let before = (0..i).filter(|j| odd[*j] && !sel[..k].contains(j)).count();
        if before % 2 == 1 {
            sign = !sign;
        }
    }
    sign
}

/// All increasing `r`-subsets of `0..n`.
pub(crate) fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    rec(0, n, r, &mut cur, &mut out);
    out
}

/// Finite sum of words with scalar coefficients, with an optional word
/// length cutoff `k` and energy cutoff `E`.
#[derive(Clone, Debug)]
pub struct TensorWord {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Word, Scalar>,
    max_len: Option<usize>,
    energy: Option<Q>,
    truncated: bool,
}

impl PartialEq for TensorWord {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for TensorWord {}

impl TensorWord {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        TensorWord { table: table.clone(), terms: BTreeMap::new(), max_len: None, energy: None, truncated: false }
    }

    /// Empty sum sharing table and cutoffs with `self`.
    pub fn empty_like(&self) -> Self {
        TensorWord {
            table: self.table.clone(),
            terms: BTreeMap::new(),
            max_len: self.max_len,
            energy: self.energy.clone(),
            truncated: false,
        }
    }

    pub fn with_cutoff(mut self, k: Option<usize>) -> Self {
        self.max_len = k;
        let terms = std::mem::take(&mut self.terms);
        for (w, c) in terms {
            self.insert(w, c);
        }
        self
    }

    pub fn with_energy(mut self, e: Option<Q>) -> Self {
        self.energy = e;
        let terms = std::mem::take(&mut self.terms);
        for (w, c) in terms {
            self.insert(w, c);
        }
        self
    }

    /// The unit `1 ∈ S⁰` (empty word).
    pub fn unit(table: &Arc<GeneratorTable>) -> Self {
        let mut t = Self::zero(table);
        t.insert(Word::empty(), Scalar::one());
        t
    }

    /// `1l`: the constant `1` as a length-1 word.
    pub fn one_l(table: &Arc<GeneratorTable>) -> Self {
        let mut t = Self::zero(table);
        t.insert(Word(vec![Monomial::one()]), Scalar::one());
        t
    }

    /// `w₁⊙…⊙w_r` for monomial factors, with coefficient `c`.
    pub fn monomial_word(table: &Arc<GeneratorTable>, factors: Vec<Monomial>, c: Scalar) -> Self {
        let mut t = Self::zero(table);
        if let Some((w, s)) = Word::canonical(factors, table) {
            t.insert_signed(w, c, s);
        }
        t
    }

    /// Multilinear expansion of `x₁⊙…⊙x_r`.
    pub fn from_elements(table: &Arc<GeneratorTable>, xs: &[AlgElement]) -> Self {
        let mut acc = Self::unit(table);
        for x in xs {
            acc = acc.odot(&Self::from_element(x));
            acc.truncated |= x.truncation_active();
        }
        acc
    }

    /// `x` viewed in `S¹`.
    pub fn from_element(x: &AlgElement) -> Self {
        let mut t = Self::zero(x.table());
        t.energy = x.truncation().energy.clone();
        for (m, c) in x.terms() {
            t.insert(Word(vec![m.clone()]), c.clone());
        }
        t.truncated = x.truncation_active();
        t
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn cutoff(&self) -> Option<usize> {
        self.max_len
    }

    pub fn energy(&self) -> Option<&Q> {
        self.energy.as_ref()
    }

    pub fn truncation_active(&self) -> bool {
        self.truncated
    }

    pub(crate) fn mark_truncated(&mut self, flag: bool) {
        self.truncated |= flag;
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    pub(crate) fn insert(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        if self.max_len.is_some_and(|k| w.len() > k) {
            self.truncated = true;
            return;
        }
        let (c, dropped) = c.truncate(self.energy.as_ref());
        self.truncated |= dropped;
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                let s = old.add(&c);
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub(crate) fn insert_signed(&mut self, w: Word, c: Scalar, negative: bool) {
        self.insert(w, if negative { c.neg() } else { c });
    }

    /// Insert `c · (factors in the given order)`, sorting with Koszul sign.
    pub(crate) fn insert_factors(&mut self, factors: Vec<Monomial>, c: Scalar, negative: bool) {
        if let Some((w, s)) = Word::canonical(factors, &self.table) {
            self.insert_signed(w, c, s ^ negative);
        }
    }

    fn merge_limits(&self, other: &TensorWord) -> TensorWord {
        let max_len = match (self.max_len, other.max_len) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let energy = match (&self.energy, &other.energy) {
            (Some(a), Some(b)) => Some(a.min(b).clone()),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        TensorWord {
            table: self.table.clone(),
            terms: BTreeMap::new(),
            max_len,
            energy,
            truncated: self.truncated || other.truncated,
        }
    }

    pub fn add(&self, other: &TensorWord) -> TensorWord {
        debug_assert!(same_table(&self.table, &other.table));
        let mut out = self.merge_limits(other);
        for (w, c) in self.terms.iter().chain(other.terms.iter()) {
            out.insert(w.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> TensorWord {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &TensorWord) -> TensorWord {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> TensorWord {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (w, c) in &self.terms {
            let (c, dropped) = c.mul_trunc(s, self.energy.as_ref());
            out.truncated |= dropped;
            out.insert(w.clone(), c);
        }
        out
    }

    pub fn scale_q(&self, s: &Q) -> TensorWord {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (w, c) in &self.terms {
            out.insert(w.clone(), c.scale(s));
        }
        out
    }

    /// Graded symmetric product.
    pub fn odot(&self, other: &TensorWord) -> TensorWord {
        let mut out = self.merge_limits(other);
        let energy = out.energy.clone();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                if out.max_len.is_some_and(|k| w1.len() + w2.len() > k) {
                    out.truncated = true;
                    continue;
                }
                let mut f = w1.0.clone();
                f.extend(w2.0.iter().cloned());
                let (c, dropped) = c1.mul_trunc(c2, energy.as_ref());
                out.truncated |= dropped;
                out.insert_factors(f, c, false);
            }
        }
        out
    }

    /// `e^x = Σ_{n≤k} x^{⊙n}/n!` truncated at word length `k`. `x` should
    /// have even degree.
    pub fn exp(x: &AlgElement, k: usize) -> TensorWord {
        let base = TensorWord::from_element(x).with_cutoff(Some(k));
        let mut power = TensorWord::unit(x.table()).with_cutoff(Some(k)).with_energy(x.truncation().energy.clone());
        let mut acc = power.clone();
        for n in 1..=k {
            power = power.odot(&base).scale_q(&Q::new(1.into(), (n as i64).into()));
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        if !power.is_zero() {
            // report whether the first omitted power is nonzero
            let next = power.clone().with_cutoff(Some(k + 1)).odot(&base.clone().with_cutoff(Some(k + 1)));
            acc.truncated |= !next.is_zero();
        }
        acc.truncated |= x.truncation_active();
        acc
    }

    /// Keep only the words satisfying `pred`.
    pub fn retain(&mut self, mut pred: impl FnMut(&Word) -> bool) {
        self.terms.retain(|w, _| pred(w));
    }

    /// Terms of word length `n`.
    pub fn length_part(&self, n: usize) -> TensorWord {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (w, c) in &self.terms {
            if w.len() == n {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// Apply an algebra map to every factor: variables of `kind` on `side`
    /// are set to zero.
    pub fn set_zero(&self, kind: Kind, side: Side) -> TensorWord {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (w, c) in &self.terms {
            if w.0.iter().all(|m| !m.vars().iter().any(|(v, _)| v.kind == kind && v.side == side)) {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    /// The `S¹` part as an element.
    pub fn to_element(&self, ctx: Ctx) -> AlgElement {
        let trunc = Truncation { p_max: None, energy: self.energy.clone() };
        let mut out = AlgElement::zero(&self.table, ctx, trunc);
        for (w, c) in &self.terms {
            if w.len() == 1 {
                out.insert(w.0[0].clone(), c.clone());
            }
        }
        out.mark_truncated(self.truncated);
        out
    }

    /// Move every factor variable from side `from` to side `to`.
    pub fn rename_side(&self, from: Side, to: Side) -> Result<TensorWord> {
        let mut out = self.empty_like();
        out.truncated = self.truncated;
        for (w, c) in &self.terms {
            let mut sign = false;
            let mut fs = Vec::with_capacity(w.len());
            for m in &w.0 {
                let (r, s) = m.rename_side(from, to, &self.table).ok_or(AlgError::ContextMismatch)?;
                for (v, _) in r.vars() {
                    self.table.check_var(*v)?;
                }
                sign ^= s;
                fs.push(r);
            }
            out.insert_factors(fs, c.clone(), sign);
        }
        Ok(out)
    }

    /// Whether all terms are homogeneous of one shifted degree.
    pub fn shifted_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|w| w.shifted_degree(&self.table));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }
}

/// Parse a tensor word. Accepted forms:
/// `c*[f₁ (+) f₂] + …` (each factor an element expression, `[]` the
/// empty word), a bare `f₁ (+) f₂`, and `1l` for the word `[1]`.
pub fn parse_tensor_word(src: &str, table: &Arc<GeneratorTable>) -> std::result::Result<TensorWord, ParseError> {
    let parse_factors = |s: &str, base: usize| -> std::result::Result<TensorWord, ParseError> {
        let mut acc = TensorWord::unit(table);
        if s.trim().is_empty() {
            return Ok(acc);
        }
        let mut off = 0;
        for part in s.split("(+)") {
            let x = if part.trim() == "1l" {
                AlgElement::constant(table, Ctx::P, Truncation::none(), Scalar::one())
            } else {
                parse_element(part, table, Ctx::P, Truncation::none()).map_err(|e| e.shifted(base + off))?
            };
            acc = acc.odot(&TensorWord::from_element(&x));
            off += part.len() + 3;
        }
        Ok(acc)
    };
    if !src.contains('[') {
        return parse_factors(src, 0);
    }
    let mut out = TensorWord::zero(table);
    let bytes = src.as_bytes();
    let mut pos = 0;
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if pos >= bytes.len() {
            break;
        }
        let Some(open) = src[pos..].find('[').map(|i| i + pos) else {
            return Err(ParseError::syntax(pos, "expected `[`"));
        };
        let Some(close) = src[open..].find(']').map(|i| i + open) else {
            return Err(ParseError::syntax(open, "unclosed `[`"));
        };
        // coefficient text between pos and open: [sign] [scalar expr '*']
        let mut coef_txt = src[pos..open].trim().to_string();
        let mut neg = false;
        if let Some(rest) = coef_txt.strip_prefix('+') {
            coef_txt = rest.trim().to_string();
        } else if let Some(rest) = coef_txt.strip_prefix('-') {
            neg = true;
            coef_txt = rest.trim().to_string();
        } else if pos > 0 {
            return Err(ParseError::syntax(pos, "expected `+` or `-` between words"));
        }
        let coef = if coef_txt.is_empty() {
            Scalar::one()
        } else {
            let Some(c) = coef_txt.strip_suffix('*') else {
                return Err(ParseError::syntax(pos, "expected `*` before `[`"));
            };
            let e = parse_element(c, table, Ctx::P, Truncation::none()).map_err(|e| e.shifted(pos))?;
            if e.is_zero() {
                Scalar::zero()
            } else {
                let mut it = e.terms();
                let (m, s) = it.next().expect("nonzero");
                if !m.is_one() || it.next().is_some() {
                    return Err(ParseError::syntax(pos, "word coefficient must be a scalar"));
                }
                s.clone()
            }
        };
        let word = parse_factors(&src[open + 1..close], open + 1)?;
        let word = word.scale(&if neg { coef.neg() } else { coef });
        out = out.add(&word);
        pos = close + 1;
    }
    Ok(out)
}

fn write_scalar_prefix(f: &mut fmt::Formatter<'_>, first: bool, c: &Q, a: &Q) -> fmt::Result {
    let neg = c.is_negative();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, "{}", if neg { " - " } else { " + " })?;
    }
    let abs = c.abs();
    let mut parts = Vec::new();
    if !abs.is_one() {
        parts.push(fmt_q(&abs));
    }
    if !a.is_zero() {
        parts.push(format!("L^{}", fmt_q(a)));
    }
    if !parts.is_empty() {
        write!(f, "{}*", parts.join("*"))?;
    }
    Ok(())
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            let body: Vec<String> = w.0.iter().map(|m| m.display(&self.table).to_string()).collect();
            for (a, x) in c.terms() {
                write_scalar_prefix(f, first, &x, &a)?;
                write!(f, "[{}]", body.join(" (+) "))?;
                first = false;
            }
        }
        Ok(())
    }
}

/// The reduced coproduct `Δ̄(w) = Σ ± w_I ⊗ w_J` over splittings into two
/// nonempty sub-multisets (by position).
pub fn reduced_coproduct(x: &TensorWord) -> BTreeMap<(Word, Word), Scalar> {
    let table = x.table();
    let mut out: BTreeMap<(Word, Word), Scalar> = BTreeMap::new();
    for (w, c) in x.terms() {
        let n = w.len();
        let odd: Vec<bool> = w.0.iter().map(|m| m.is_odd(table)).collect();
        for r in 1..n {
            for sel in subsets(n, r) {
                let s = front_sign(&odd, &sel);
                let left: Vec<Monomial> = sel.iter().map(|&i| w.0[i].clone()).collect();
                let right: Vec<Monomial> = (0..n).filter(|i| !sel.contains(i)).map(|i| w.0[i].clone()).collect();
                let (lw, s1) = Word::canonical(left, table).expect("sub-multiset of a valid word");
                let (rw, s2) = Word::canonical(right, table).expect("sub-multiset of a valid word");
                let v = if s ^ s1 ^ s2 { c.neg() } else { c.clone() };
                let e = out.entry((lw, rw)).or_default();
                *e = e.add(&v);
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}
