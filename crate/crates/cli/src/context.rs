//! Context files: a generator table, a ring, a truncation profile and named
//! elements and words, in TOML.
//!
//! ```toml
//! n = 1
//!
//! [ring]
//! kind = "novikov"
//! cutoff = "3/2"
//!
//! [[generator]]
//! name = "x"
//! qdeg = 1
//! kappa = 1
//!
//! [elements.h]
//! ctx = "P"
//! value = "p:x"
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Range;
use std::sync::Arc;

use rsft_core::coalgebra::{parse_tensor_word, TensorWord};
use rsft_core::morphism::Potential;
use rsft_core::parse::parse_rational;
use rsft_core::{
    parse_element, AlgElement, Ctx, GeneratorSpec, GeneratorTable, Homogeneity, ParseError, ParseErrorKind, Side, Truncation, Q,
};
use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ring {
    Rational,
    /// Novikov coefficients, computed modulo `λ^cutoff`.
    Novikov { cutoff: Q },
}

/// Where an element lives: one side, or a potential from `src` to `tgt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    Side(Side),
    Potential { src: Side, tgt: Side },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedElement {
    pub ctx: Ctx,
    pub placement: Placement,
    pub degree: Option<i64>,
    pub value: AlgElement,
}

impl NamedElement {
    pub fn side(&self) -> Side {
        match self.placement {
            Placement::Side(s) => s,
            Placement::Potential { src, .. } => src,
        }
    }

    pub fn potential(&self) -> Option<rsft_core::Result<Potential>> {
        match self.placement {
            Placement::Potential { src, tgt } => Some(Potential::new(self.value.clone(), src, tgt)),
            Placement::Side(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedWord {
    pub side: Side,
    pub value: TensorWord,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextFile {
    pub table: Arc<GeneratorTable>,
    pub ring: Ring,
    pub truncation: Truncation,
    pub elements: BTreeMap<String, NamedElement>,
    pub words: BTreeMap<String, NamedWord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ContextError {
    pub line: usize,
    pub column: usize,
    pub kind: ContextErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ContextErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("odd variable `{0}` raised to a power above 1")]
    OddPowerViolation(String),
    #[error("`{name}` is annotated with degree {declared} but has {found}")]
    DegreeAnnotationMismatch { name: String, declared: i64, found: String },
    #[error("generator `{name}` is not declared on side {side}")]
    UndeclaredSide { name: String, side: String },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawContext {
    n: Spanned<i64>,
    #[serde(default)]
    ring: Option<Spanned<RawRing>>,
    #[serde(default)]
    truncation: Option<RawTruncation>,
    #[serde(default)]
    generator: Vec<Spanned<RawGenerator>>,
    #[serde(default)]
    tvar: Vec<RawTVar>,
    #[serde(default)]
    elements: BTreeMap<String, Spanned<RawElement>>,
    #[serde(default)]
    words: BTreeMap<String, Spanned<RawWord>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    kind: String,
    cutoff: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTruncation {
    p_max: Option<u32>,
    energy: Option<Spanned<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    name: String,
    qdeg: i64,
    kappa: i64,
    action: Option<Spanned<String>>,
    sides: Option<Vec<Spanned<String>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTVar {
    name: String,
    degree: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    ctx: Spanned<String>,
    value: Spanned<String>,
    side: Option<Spanned<String>>,
    src: Option<Spanned<String>>,
    tgt: Option<Spanned<String>>,
    degree: Option<Spanned<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWord {
    value: Spanned<String>,
    side: Option<Spanned<String>>,
}

/// 1-based line and column of byte `offset` in `text`.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

struct Locator<'a> {
    text: &'a str,
}

impl Locator<'_> {
    fn err(&self, offset: usize, kind: ContextErrorKind) -> ContextError {
        let (line, column) = line_col(self.text, offset);
        ContextError { line, column, kind }
    }

    /// Offset of the first character inside a quoted string value.
    fn inner(&self, span: &Range<usize>) -> usize {
        let quoted = self.text.get(span.clone()).is_some_and(|s| s.starts_with('"') || s.starts_with('\''));
        span.start + usize::from(quoted)
    }

    fn parse_err(&self, span: &Range<usize>, e: ParseError) -> ContextError {
        let kind = match e.kind {
            ParseErrorKind::Syntax(m) => ContextErrorKind::Syntax(m),
            ParseErrorKind::UnknownGenerator(g) => ContextErrorKind::UnknownGenerator(g),
            ParseErrorKind::OddPowerViolation(g) => ContextErrorKind::OddPowerViolation(g),
            ParseErrorKind::UndeclaredSide { name, side } => ContextErrorKind::UndeclaredSide { name, side },
        };
        self.err(self.inner(span) + e.offset, kind)
    }

    fn rational(&self, s: &Spanned<String>) -> Result<Q, ContextError> {
        parse_rational(s.get_ref())
            .ok_or_else(|| self.err(self.inner(&s.span()), ContextErrorKind::Syntax(format!("`{}` is not a rational", s.get_ref()))))
    }

    fn side(&self, s: &Spanned<String>) -> Result<Side, ContextError> {
        parse_side(s.get_ref()).ok_or_else(|| {
            self.err(self.inner(&s.span()), ContextErrorKind::Syntax(format!("unknown side `{}`, expected `+`, `mid` or `-`", s.get_ref())))
        })
    }
}

pub fn parse_side(s: &str) -> Option<Side> {
    match s {
        "+" | "plus" => Some(Side::Plus),
        "mid" | "" => Some(Side::Mid),
        "-" | "minus" => Some(Side::Minus),
        _ => None,
    }
}

pub fn side_name(s: Side) -> &'static str {
    match s {
        Side::Plus => "+",
        Side::Mid => "mid",
        Side::Minus => "-",
    }
}

pub fn parse_ctx(s: &str) -> Option<Ctx> {
    match s {
        "A" => Some(Ctx::A),
        "P" => Some(Ctx::P),
        "L" => Some(Ctx::L),
        "L0" => Some(Ctx::L0),
        _ => None,
    }
}

pub fn ctx_name(c: Ctx) -> &'static str {
    match c {
        Ctx::A => "A",
        Ctx::P => "P",
        Ctx::L => "L",
        Ctx::L0 => "L0",
    }
}

/// Parse and validate a context file.
pub fn parse_context(text: &str) -> Result<ContextFile, ContextError> {
    let loc = Locator { text };
    let raw: RawContext = toml::from_str(text).map_err(|e| {
        let off = e.span().map_or(0, |s| s.start);
        loc.err(off, ContextErrorKind::Syntax(e.message().to_string()))
    })?;

    let ring = match &raw.ring {
        None => Ring::Rational,
        Some(r) => match (r.get_ref().kind.as_str(), &r.get_ref().cutoff) {
            ("rational", None) => Ring::Rational,
            ("novikov", Some(c)) => {
                let cutoff = loc.rational(c)?;
                if cutoff <= Q::from_integer(0.into()) {
                    return Err(loc.err(loc.inner(&c.span()), ContextErrorKind::Invalid("cutoff must be positive".into())));
                }
                Ring::Novikov { cutoff }
            }
            ("novikov", None) => return Err(loc.err(r.span().start, ContextErrorKind::Invalid("novikov ring needs a cutoff".into()))),
            ("rational", Some(c)) => return Err(loc.err(c.span().start, ContextErrorKind::Invalid("rational ring takes no cutoff".into()))),
            (k, _) => return Err(loc.err(r.span().start, ContextErrorKind::Invalid(format!("unknown ring `{k}`")))),
        },
    };

    let mut truncation = Truncation::none();
    if let Some(t) = &raw.truncation {
        truncation.p_max = t.p_max;
        if let Some(e) = &t.energy {
            truncation.energy = Some(loc.rational(e)?);
        }
    }

    let mut specs = Vec::new();
    for g in &raw.generator {
        let r = g.get_ref();
        let mut spec = GeneratorSpec::new(&r.name, r.qdeg, r.kappa);
        if let Some(a) = &r.action {
            spec.action = Some(loc.rational(a)?);
        }
        if let Some(ss) = &r.sides {
            spec.sides = ss.iter().map(|s| loc.side(s)).collect::<Result<_, _>>()?;
        }
        specs.push(spec);
    }
    let tvars = raw.tvar.iter().map(|t| (t.name.clone(), t.degree)).collect();
    let table = GeneratorTable::new(*raw.n.get_ref(), specs, tvars)
        .map_err(|e| loc.err(raw.generator.first().map_or(raw.n.span().start, |g| g.span().start), ContextErrorKind::Invalid(e.to_string())))?;
    let table = Arc::new(table);

    let mut elements = BTreeMap::new();
    for (name, e) in &raw.elements {
        let r = e.get_ref();
        let ctx = parse_ctx(r.ctx.get_ref()).ok_or_else(|| {
            loc.err(loc.inner(&r.ctx.span()), ContextErrorKind::Syntax(format!("unknown context tag `{}`", r.ctx.get_ref())))
        })?;
        let placement = match ctx {
            Ctx::L0 if r.side.is_some() && r.src.is_none() && r.tgt.is_none() => Placement::Side(loc.side(r.side.as_ref().expect("checked"))?),
            Ctx::L | Ctx::L0 => {
                if let Some(s) = &r.side {
                    return Err(loc.err(s.span().start, ContextErrorKind::Invalid("potentials take `src` and `tgt`, not `side`; only an L0 element may sit on one side".into())));
                }
                let src = r.src.as_ref().map_or(Ok(Side::Plus), |s| loc.side(s))?;
                let tgt = r.tgt.as_ref().map_or(Ok(Side::Minus), |s| loc.side(s))?;
                Placement::Potential { src, tgt }
            }
            Ctx::A | Ctx::P => {
                if let Some(s) = r.src.as_ref().or(r.tgt.as_ref()) {
                    return Err(loc.err(s.span().start, ContextErrorKind::Invalid("`src`/`tgt` apply to potentials only".into())));
                }
                Placement::Side(r.side.as_ref().map_or(Ok(Side::Mid), |s| loc.side(s))?)
            }
        };
        let value = parse_element(r.value.get_ref(), &table, ctx, truncation.clone()).map_err(|err| loc.parse_err(&r.value.span(), err))?;
        let degree = r.degree.as_ref().map(|d| *d.get_ref());
        if let Some(d) = &r.degree {
            let ok = match value.degree() {
                Homogeneity::Zero => true,
                Homogeneity::Degree(x) => x == *d.get_ref(),
                Homogeneity::Inhomogeneous => false,
            };
            if !ok {
                let found = match value.degree() {
                    Homogeneity::Degree(x) => format!("degree {x}"),
                    _ => "mixed degrees".to_string(),
                };
                return Err(loc.err(d.span().start, ContextErrorKind::DegreeAnnotationMismatch { name: name.clone(), declared: *d.get_ref(), found }));
            }
        }
        elements.insert(name.clone(), NamedElement { ctx, placement, degree, value });
    }

    let mut words = BTreeMap::new();
    for (name, w) in &raw.words {
        let r = w.get_ref();
        let side = r.side.as_ref().map_or(Ok(Side::Mid), |s| loc.side(s))?;
        let value = parse_tensor_word(r.value.get_ref(), &table).map_err(|err| loc.parse_err(&r.value.span(), err))?;
        words.insert(name.clone(), NamedWord { side, value });
    }

    Ok(ContextFile { table, ring, truncation, elements, words })
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn key(s: &str) -> String {
    if !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
        s.to_string()
    } else {
        quote(s)
    }
}

fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl ContextFile {
    /// Canonical TOML form. Elements and words print in canonical order,
    /// so `parse(print(parse(s))) == parse(s)`.
    pub fn to_toml(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n = {}", self.table.n());
        if let Ring::Novikov { cutoff } = &self.ring {
            let _ = write!(out, "\n[ring]\nkind = \"novikov\"\ncutoff = {}\n", quote(&fmt_q(cutoff)));
        }
        if self.truncation != Truncation::none() {
            out.push_str("\n[truncation]\n");
            if let Some(p) = self.truncation.p_max {
                let _ = writeln!(out, "p_max = {p}");
            }
            if let Some(e) = &self.truncation.energy {
                let _ = writeln!(out, "energy = {}", quote(&fmt_q(e)));
            }
        }
        for g in self.table.generators() {
            let _ = write!(out, "\n[[generator]]\nname = {}\nqdeg = {}\nkappa = {}\n", quote(&g.name), g.q_degree, g.kappa);
            if let Some(a) = &g.action {
                let _ = writeln!(out, "action = {}", quote(&fmt_q(a)));
            }
            let sides = g.sides();
            if sides.len() < 3 {
                let list: Vec<String> = sides.iter().map(|s| quote(side_name(*s))).collect();
                let _ = writeln!(out, "sides = [{}]", list.join(", "));
            }
        }
        for t in self.table.tvars() {
            let _ = write!(out, "\n[[tvar]]\nname = {}\ndegree = {}\n", quote(&t.name), t.degree);
        }
        for (name, e) in &self.elements {
            let _ = write!(out, "\n[elements.{}]\nctx = \"{}\"\n", key(name), ctx_name(e.ctx));
            match e.placement {
                Placement::Side(s) => {
                    let _ = writeln!(out, "side = \"{}\"", side_name(s));
                }
                Placement::Potential { src, tgt } => {
                    let _ = write!(out, "src = \"{}\"\ntgt = \"{}\"\n", side_name(src), side_name(tgt));
                }
            }
            if let Some(d) = e.degree {
                let _ = writeln!(out, "degree = {d}");
            }
            let _ = writeln!(out, "value = {}", quote(&e.value.to_string()));
        }
        for (name, w) in &self.words {
            let _ = write!(out, "\n[words.{}]\nside = \"{}\"\nvalue = {}\n", key(name), side_name(w.side), quote(&w.value.to_string()));
        }
        out
    }

    pub fn element(&self, name: &str) -> Option<&NamedElement> {
        self.elements.get(name)
    }
}
