//! Command dispatch and JSON reports.

use std::collections::BTreeMap;

use clap::ValueEnum;
use rsft_core::coalgebra::TensorWord;
use rsft_core::coderivation::{check_master, coderivation};
use rsft_core::invariants::{self, CandidateSpace, SearchBounds, SearchResult, SearchStatus};
use rsft_core::linearize::{self, Augmentation};
use rsft_core::mctwist::FilteredContext;
use rsft_core::morphism::{check_chain_map, compose, identity, siegel_map, MorphismHandle, Potential};
use rsft_core::{parse_element, AlgElement, AlgError, Ctx, Homogeneity, Monomial, Side, Truncation, Q};
use serde_json::{json, Map, Value};

use crate::context::{side_name, ContextFile, NamedElement, NamedWord, Ring};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    CheckMaster,
    Bracket,
    Coderive,
    Chaincheck,
    Compose,
    Apply,
    Siegel,
    McCheck,
    Twist,
    Linearize,
    AugmentTwist,
    BilieCheck,
    Torsion,
    Order,
    Monotonicity,
    Homology,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Space {
    Single,
    #[default]
    All,
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub k_max: Option<usize>,
    pub p_max: Option<u32>,
    pub q_len_max: Option<u32>,
    pub energy_levels: Option<Vec<Q>>,
    pub cutoff_words: Option<usize>,
    pub space: Space,
    pub tilde: bool,
    /// The t-monomial for `siegel`, e.g. `t1*t2`.
    pub t: Option<String>,
    /// Role → context name overrides.
    pub bindings: BTreeMap<String, String>,
}

impl Flags {
    fn echo(&self) -> Value {
        let mut m = Map::new();
        if let Some(k) = self.k_max {
            m.insert("kmax".into(), json!(k));
        }
        if let Some(p) = self.p_max {
            m.insert("pmax".into(), json!(p));
        }
        if let Some(q) = self.q_len_max {
            m.insert("qlen_max".into(), json!(q));
        }
        if let Some(es) = &self.energy_levels {
            m.insert("energy_levels".into(), json!(es.iter().map(fmt_q).collect::<Vec<_>>()));
        }
        if let Some(c) = self.cutoff_words {
            m.insert("cutoff_words".into(), json!(c));
        }
        m.insert("space".into(), json!(if self.space == Space::All { "all" } else { "single" }));
        if self.tilde {
            m.insert("tilde".into(), json!(true));
        }
        if let Some(t) = &self.t {
            m.insert("t".into(), json!(t));
        }
        if !self.bindings.is_empty() {
            m.insert("bindings".into(), json!(self.bindings));
        }
        Value::Object(m)
    }
}

/// A finished report and the process exit code: 0 success, 1 verification
/// failure, 2 input error.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub code: i32,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Kernel(AlgError),
}

impl From<AlgError> for Failure {
    fn from(e: AlgError) -> Self {
        Failure::Kernel(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn degree_json(x: &AlgElement) -> Value {
    match x.degree() {
        Homogeneity::Zero => Value::Null,
        Homogeneity::Degree(d) => json!(d),
        Homogeneity::Inhomogeneous => json!("mixed"),
    }
}

/// Kernel errors that report a failed check rather than bad input.
fn is_verification(e: &AlgError) -> bool {
    matches!(e, AlgError::MasterEquationFails | AlgError::NotChainMap | AlgError::HomotopyFails | AlgError::NotMaurerCartan)
}

struct Run<'a> {
    ctx: &'a ContextFile,
    flags: &'a Flags,
    inputs: Map<String, Value>,
    truncated: bool,
}

impl<'a> Run<'a> {
    fn name(&self, role: &str) -> String {
        self.flags.bindings.get(role).cloned().unwrap_or_else(|| role.to_string())
    }

    fn element(&mut self, role: &str) -> Res<&'a NamedElement> {
        let name = self.name(role);
        let e = self.ctx.element(&name).ok_or_else(|| Failure::Input(format!("no element `{name}` for role `{role}`")))?;
        self.truncated |= e.value.truncation_active();
        self.inputs.insert(role.into(), json!({"name": name, "value": e.value.to_string(), "side": side_name(e.side())}));
        Ok(e)
    }

    fn optional_element(&mut self, role: &str) -> Res<Option<&'a NamedElement>> {
        if self.ctx.element(&self.name(role)).is_some() {
            self.element(role).map(Some)
        } else {
            Ok(None)
        }
    }

    fn value(&mut self, role: &str) -> Res<AlgElement> {
        Ok(self.element(role)?.value.clone())
    }

    fn potential(&mut self, role: &str) -> Res<Potential> {
        let name = self.name(role);
        if name == "identity" {
            let (src, tgt) = match role {
                "f_plus" => (Side::Plus, Side::Mid),
                "f_minus" => (Side::Mid, Side::Minus),
                _ => (Side::Plus, Side::Minus),
            };
            let i = identity(&self.ctx.table, src, tgt)?;
            self.inputs.insert(role.into(), json!({"name": "identity", "value": i.element().to_string()}));
            return Ok(i);
        }
        let e = self.element(role)?;
        e.potential().ok_or_else(|| Failure::Input(format!("`{name}` is not a potential (ctx L or L0)")))?.map_err(Failure::from)
    }

    fn word(&mut self, role: &str) -> Res<&'a NamedWord> {
        let name = self.name(role);
        let w = self.ctx.words.get(&name).ok_or_else(|| Failure::Input(format!("no word `{name}` for role `{role}`")))?;
        self.inputs.insert(role.into(), json!({"name": name, "value": w.value.to_string(), "side": side_name(w.side)}));
        Ok(w)
    }

    fn filtered(&mut self) -> Res<FilteredContext> {
        match &self.ctx.ring {
            Ring::Novikov { cutoff } => {
                self.truncated = true;
                Ok(FilteredContext::new(&self.ctx.table, cutoff.clone())?)
            }
            Ring::Rational => Err(Failure::Input("this command needs a novikov ring with a cutoff".into())),
        }
    }

    fn bounds(&self) -> SearchBounds {
        let mut b = SearchBounds::new(self.flags.k_max.unwrap_or(3), self.flags.q_len_max.unwrap_or(4));
        b.energy_levels = match (&self.flags.energy_levels, &self.ctx.ring) {
            (Some(es), _) => es.clone(),
            (None, Ring::Novikov { cutoff }) => vec![cutoff.clone()],
            (None, Ring::Rational) => Vec::new(),
        };
        b
    }

    fn space(&self) -> CandidateSpace {
        match self.flags.space {
            Space::Single => CandidateSpace::SingleLetters,
            Space::All => CandidateSpace::AllMonomials,
        }
    }

    fn note_word(&mut self, x: &TensorWord) -> String {
        self.truncated |= x.truncation_active();
        x.to_string()
    }

    fn note_element(&mut self, x: &AlgElement) -> String {
        self.truncated |= x.truncation_active();
        x.to_string()
    }
}

/// Words of q-monomials on `side` (q-length ≤ 2 per factor, total ≤
/// `q_len_max`) of length `1..=len`, at most `cap` of them.
pub fn sample_words(ctx: &ContextFile, side: Side, len: usize, q_len_max: u32, cap: usize) -> Vec<TensorWord> {
    let letters = invariants::q_monomials(&ctx.table, side, 1, 2.min(q_len_max));
    let mut out = Vec::new();
    fn rec(ctx: &ContextFile, letters: &[Monomial], start: usize, left: usize, qlen: u32, cur: &mut Vec<Monomial>, out: &mut Vec<TensorWord>, cap: usize) {
        if out.len() >= cap {
            return;
        }
        if !cur.is_empty() {
            let w = TensorWord::monomial_word(&ctx.table, cur.clone(), rsft_core::Scalar::one());
            if !w.is_zero() {
                out.push(w);
            }
        }
        if left == 0 {
            return;
        }
        for i in start..letters.len() {
            let l = letters[i].q_len();
            if l > qlen {
                continue;
            }
            cur.push(letters[i].clone());
            rec(ctx, letters, i, left - 1, qlen - l, cur, out, cap);
            cur.pop();
        }
    }
    rec(ctx, &letters, 0, len, q_len_max, &mut Vec::new(), &mut out, cap);
    out
}

fn search_json(r: &SearchResult) -> Value {
    let mut m = Map::new();
    match &r.status {
        SearchStatus::Found { value, certificate } => {
            m.insert("status".into(), json!("found"));
            m.insert("value".into(), json!(value));
            m.insert("certificate".into(), json!(certificate.to_string()));
        }
        SearchStatus::Unknown => {
            m.insert("status".into(), json!("unknown"));
        }
    }
    m.insert(
        "bounds".into(),
        json!({"kmax": r.bounds.k_max, "qlen_max": r.bounds.q_len_max}),
    );
    if let Some(e) = &r.energy {
        m.insert("energy".into(), json!(fmt_q(e)));
    }
    m.insert("candidates".into(), json!(r.candidates));
    Value::Object(m)
}

fn opt_bool(b: Option<bool>) -> Value {
    b.map_or(Value::Null, Value::Bool)
}

pub fn run(cmd: Command, ctx: &ContextFile, flags: &Flags) -> Outcome {
    let mut r = Run { ctx, flags, inputs: Map::new(), truncated: false };
    let res = dispatch(cmd, &mut r);
    let mut report = Map::new();
    report.insert("schema".into(), json!(SCHEMA));
    report.insert("command".into(), json!(cmd.name()));
    report.insert("flags".into(), flags.echo());
    report.insert("inputs".into(), Value::Object(std::mem::take(&mut r.inputs)));
    report.insert("truncation_active".into(), json!(r.truncated));
    let code = match res {
        Ok((ok, result)) => {
            report.insert("ok".into(), json!(ok));
            report.insert("result".into(), result);
            if ok {
                0
            } else {
                1
            }
        }
        Err(f) => {
            let (kind, msg, code) = match f {
                Failure::Input(m) => ("input".to_string(), m, 2),
                Failure::Kernel(e) => {
                    let code = if is_verification(&e) { 1 } else { 2 };
                    (format!("{e:?}").split([' ', '{', '(']).next().unwrap_or("").to_string(), e.to_string(), code)
                }
            };
            report.insert("ok".into(), json!(false));
            report.insert("error".into(), json!({"kind": kind, "message": msg}));
            code
        }
    };
    Outcome { report: Value::Object(report), code }
}

fn dispatch(cmd: Command, r: &mut Run) -> Res<(bool, Value)> {
    match cmd {
        Command::CheckMaster => {
            let h = r.value("h")?;
            let master = check_master(&h)?;
            Ok((master, json!({"master": master, "hat": linearize::check_hat(&h), "degree": degree_json(&h)})))
        }
        Command::Bracket => {
            let a = r.value("a")?;
            let b = r.value("b")?;
            let v = a.bracket_any(&b);
            Ok((true, json!({"value": r.note_element(&v), "degree": degree_json(&v)})))
        }
        Command::Coderive => {
            let h = r.value("h")?;
            let x = r.word("x")?.value.clone().with_cutoff(r.flags.cutoff_words);
            let d = coderivation(&h, &x)?;
            Ok((true, json!({"value": r.note_word(&d)})))
        }
        Command::Chaincheck => {
            let f = r.potential("f")?;
            let hp = r.value("h_plus")?;
            let hm = r.value("h_minus")?;
            let restricted = check_chain_map(&f, &hp, &hm)?;
            let m = MorphismHandle::new(f.clone())?;
            let words = sample_words(r.ctx, f.src(), r.flags.cutoff_words.unwrap_or(2), r.flags.q_len_max.unwrap_or(4), 200);
            let mut mismatches = 0;
            for x in &words {
                let lhs = m.apply(&coderivation(&hp, x)?, None)?;
                let rhs = coderivation(&hm, &m.apply(x, None)?)?;
                mismatches += usize::from(lhs != rhs);
            }
            let words_ok = mismatches == 0;
            Ok((
                restricted && words_ok,
                json!({"restriction_equal": restricted, "words_tested": words.len(), "word_mismatches": mismatches, "criteria_agree": restricted == words_ok}),
            ))
        }
        Command::Compose => {
            let fp = r.potential("f_plus")?;
            let fm = r.potential("f_minus")?;
            let p_max = r.flags.p_max.unwrap_or(4);
            let c = compose(&fm, &fp, p_max)?;
            let v = c.element().clone();
            Ok((true, json!({"value": r.note_element(&v), "src": side_name(c.src()), "tgt": side_name(c.tgt())})))
        }
        Command::Apply => {
            let f = r.potential("f")?;
            let x = r.word("x")?.value.clone();
            let k = r.flags.cutoff_words;
            let y = if f.p_free_part().is_zero() {
                MorphismHandle::new(f)?.apply(&x, k)?
            } else {
                let fc = r.filtered()?;
                fc.apply_nonexact(&f, &x)?
            };
            Ok((true, json!({"value": r.note_word(&y)})))
        }
        Command::Siegel => {
            let f = r.potential("f")?;
            let x = r.word("x")?.value.clone();
            let t = r.flags.t.clone().ok_or_else(|| Failure::Input("siegel needs --t".into()))?;
            let te = parse_element(&t, &r.ctx.table, Ctx::P, Truncation::none()).map_err(|e| Failure::Input(format!("--t: {e}")))?;
            let mono = match te.terms().collect::<Vec<_>>().as_slice() {
                [(m, c)] if c.is_one() => (*m).clone(),
                _ => return Err(Failure::Input("--t must be a single t-monomial".into())),
            };
            let k = r.flags.cutoff_words.unwrap_or(3);
            let y = siegel_map(&f, &mono, &x, k);
            r.truncated = true;
            Ok((true, json!({"value": y.to_string(), "cutoff_words": k})))
        }
        Command::McCheck => {
            let h = r.value("h")?;
            let a = r.value("a")?;
            let fc = r.filtered()?;
            let mc = fc.is_maurer_cartan(&a, &h, false)?;
            let level = fc.level(&a).map(|l| fmt_q(&l));
            Ok((mc, json!({"maurer_cartan": mc, "level": level, "energy": fmt_q(fc.energy())})))
        }
        Command::Twist => {
            let h = r.value("h")?;
            let a = r.value("a")?;
            let fc = r.filtered()?;
            let ha = fc.twist_hamiltonian(&h, &a)?;
            let master = check_master(&ha)?;
            Ok((master, json!({"value": r.note_element(&ha), "master": master, "energy": fmt_q(fc.energy())})))
        }
        Command::Linearize => {
            let h = r.value("h")?;
            let hat = linearize::check_hat(&h);
            if !hat {
                return Ok((false, json!({"hat": false})));
            }
            let t = h.table().clone();
            let mut parts = Vec::new();
            for rr in 1..=h.max_p_len() {
                for s in 1..=h.max_q_len() {
                    let c = h.extract_bidegree(rr, s);
                    if !c.is_zero() {
                        parts.push(json!({"r": rr, "s": s, "component": c.to_string()}));
                    }
                }
            }
            let mut m11 = Map::new();
            for l in linearize::generator_letters(&t) {
                let x = AlgElement::from_term(&t, Ctx::A, Truncation::none(), l.clone(), rsft_core::Scalar::one());
                let y = linearize::m_operation(&h, 1, &[x])?;
                m11.insert(l.display(&t).to_string(), json!(y.to_string()));
            }
            Ok((true, json!({"hat": true, "components": parts, "m11": m11})))
        }
        Command::AugmentTwist => {
            let h = r.value("h")?;
            let f = r.value("aug")?;
            let aug = Augmentation::new(f, &h)?;
            let via_restriction = linearize::augmentation_twist_restriction(&h, &aug);
            let via_series = linearize::augmentation_twist_series(&h, &aug);
            let agree = via_restriction == via_series;
            let hat = linearize::check_hat(&via_restriction);
            let master = check_master(&via_restriction)?;
            Ok((
                agree && hat && master,
                json!({"value": r.note_element(&via_restriction), "routes_agree": agree, "hat": hat, "master": master}),
            ))
        }
        Command::BilieCheck => {
            let h = r.value("h")?;
            let n = r.flags.k_max.unwrap_or(4) as u32;
            let rep = linearize::check_bilie_relations(&h, n, n)?;
            let comps: Vec<Value> = rep
                .components
                .iter()
                .map(|c| json!({"r": c.r, "s": c.s, "bracket_form": c.bracket_form, "composition_form": c.composition_form, "nontrivial": c.nontrivial}))
                .collect();
            let dis: Vec<Value> = rep.disagreements().iter().map(|(a, b)| json!([a, b])).collect();
            Ok((rep.holds(), json!({"holds": rep.holds(), "components": comps, "disagreements": dis, "r_max": n, "s_max": n})))
        }
        Command::Torsion => {
            let e = r.element("h")?;
            let (h, side) = (e.value.clone(), e.side());
            let b = r.bounds();
            let space = r.space();
            let results = match (&r.ctx.ring, r.flags.tilde) {
                (Ring::Novikov { .. }, false) => {
                    r.truncated = true;
                    invariants::torsion_novikov(&h, side, &b, space)?
                }
                (_, true) => vec![invariants::torsion_tilde(&h, side, &b, space)?],
                (Ring::Rational, false) => vec![invariants::torsion(&h, side, &b, space)?],
            };
            let mut out = if results.len() == 1 { search_json(&results[0]) } else { json!({"levels": results.iter().map(search_json).collect::<Vec<_>>()}) };
            if let Value::Object(m) = &mut out {
                m.insert("variant".into(), json!(if r.flags.tilde { "tilde" } else { "full" }));
            }
            Ok((true, out))
        }
        Command::Order => {
            let e = r.element("h")?;
            let (h, side) = (e.value.clone(), e.side());
            let g = r.value("g")?;
            let o = invariants::order(&h, &g, side, &r.bounds())?;
            let mut out = search_json(&o.result);
            if let Value::Object(m) = &mut out {
                m.insert("boundaries_killed".into(), json!(o.boundaries_killed));
                m.insert("boundaries_tested".into(), json!(o.boundaries_tested));
            }
            Ok((o.boundaries_killed, out))
        }
        Command::Monotonicity => {
            let f = r.potential("f")?;
            let hp = r.value("h_plus")?;
            let hm = r.value("h_minus")?;
            let b = r.bounds();
            let t = invariants::torsion_monotonicity(&f, &hp, &hm, &b, r.space())?;
            let mut ok = t.holds != Some(false) && t.transported_verifies != Some(false);
            let mut out = json!({
                "torsion": {
                    "plus": search_json(&t.plus),
                    "minus": search_json(&t.minus),
                    "tilde_plus": search_json(&t.tilde_plus),
                    "tilde_minus": search_json(&t.tilde_minus),
                    "transported": t.transported.as_ref().map(|x| x.to_string()),
                    "transported_verifies": opt_bool(t.transported_verifies),
                    "holds": opt_bool(t.holds),
                }
            });
            let g = r.optional_element("g")?.map(|e| e.value.clone());
            let gp = r.optional_element("g_plus")?.map(|e| e.value.clone());
            let gm = r.optional_element("g_minus")?.map(|e| e.value.clone());
            if let (Some(g), Some(gp), Some(gm)) = (g, gp, gm) {
                let o = invariants::order_monotonicity(&f, &g, &gp, &gm, &hp, &hm, &b)?;
                ok &= o.holds != Some(false) && o.chain_holds != Some(false);
                out["order"] = json!({
                    "plus": search_json(&o.plus.result),
                    "minus": search_json(&o.minus.result),
                    "chain": o.chain.as_ref().map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
                    "chain_holds": opt_bool(o.chain_holds),
                    "holds": opt_bool(o.holds),
                });
            }
            Ok((ok, out))
        }
        Command::Homology => {
            let e = r.element("h")?;
            let (h, side) = (e.value.clone(), e.side());
            let b = r.bounds();
            let w = invariants::homology_window(&h, side, &b)?;
            let dims: Vec<Value> = w.iter().map(|(d, n)| json!({"degree": d, "dim": n})).collect();
            let acyclic = w.iter().all(|(_, n)| *n == 0);
            Ok((true, json!({"window": dims, "acyclic": acyclic, "qlen_max": b.q_len_max})))
        }
    }
}

/// Plain-text rendering: one `path: value` line per leaf.
pub fn render_text(v: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut String) {
        match v {
            Value::Object(m) => {
                for (k, x) in m {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, x, out);
                }
            }
            Value::Array(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), x, out);
                }
            }
            Value::String(s) => out.push_str(&format!("{prefix}: {s}\n")),
            other => out.push_str(&format!("{prefix}: {other}\n")),
        }
    }
    let mut out = String::new();
    walk("", v, &mut out);
    out
}
