//! The shipped context files, generated from the searches in
//! `rsft_core::zoo`. `rsft write-fixtures` rewrites `fixtures/`; a test
//! checks the checked-in files are byte-identical to a fresh generation.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rsft_core::coalgebra::TensorWord;
use rsft_core::zoo::{self, Cobordism};
use rsft_core::{AlgElement, Ctx, GeneratorTable, Monomial, Scalar, Side, Truncation, Var, Q};

use crate::context::{ContextFile, NamedElement, NamedWord, Placement, Ring};

pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

struct Builder {
    table: Arc<GeneratorTable>,
    ring: Ring,
    elements: BTreeMap<String, NamedElement>,
    words: BTreeMap<String, NamedWord>,
}

impl Builder {
    fn new(table: &Arc<GeneratorTable>, ring: Ring) -> Self {
        Builder { table: table.clone(), ring, elements: BTreeMap::new(), words: BTreeMap::new() }
    }

    fn element(mut self, name: &str, ctx: Ctx, placement: Placement, value: &AlgElement) -> Self {
        let degree = match value.degree() {
            rsft_core::Homogeneity::Degree(d) => Some(d),
            _ => None,
        };
        let value = value.clone().with_ctx(ctx).with_truncation(Truncation::none());
        self.elements.insert(name.into(), NamedElement { ctx, placement, degree, value });
        self
    }

    fn on(self, name: &str, side: Side, value: &AlgElement) -> Self {
        let ctx = if value.terms().all(|(m, _)| m.p_len() == 0) { Ctx::A } else { Ctx::P };
        self.element(name, ctx, Placement::Side(side), value)
    }

    fn potential(self, name: &str, value: &AlgElement, src: Side, tgt: Side) -> Self {
        self.element(name, Ctx::L, Placement::Potential { src, tgt }, value)
    }

    /// The word `[q_γ₁ (+) … ]` over the first `n` generators on `side`.
    fn letters_word(mut self, name: &str, side: Side, n: usize) -> Self {
        let ms: Vec<Monomial> = self.table.indices_on(side).into_iter().take(n).map(|i| Monomial::var(Var::q(i, side))).collect();
        let w = TensorWord::monomial_word(&self.table, ms, Scalar::one());
        self.words.insert(name.into(), NamedWord { side, value: w });
        self
    }

    fn build(self) -> ContextFile {
        ContextFile { table: self.table, ring: self.ring, truncation: Truncation::none(), elements: self.elements, words: self.words }
    }
}

fn cobordism(c: &Cobordism, ring: Ring) -> Builder {
    let mut b = Builder::new(&c.table, ring)
        .on("h_plus", Side::Plus, &c.h_plus)
        .on("h_minus", Side::Minus, &c.h_minus)
        .potential("f", c.f.element(), c.f.src(), c.f.tgt())
        .letters_word("x", Side::Plus, 1)
        .letters_word("xy", Side::Plus, 2);
    if let Some(a) = &c.mc {
        b = b.element("a", Ctx::A, Placement::Side(Side::Plus), a);
    }
    b
}

fn three_halves() -> Q {
    Q::new(3.into(), 2.into())
}

/// All fixture contexts as `(file name, TOML)`, in a fixed order.
pub fn generate() -> Vec<(String, String)> {
    let mut out: Vec<(&str, ContextFile)> = Vec::new();
    for s in [zoo::trivial(1), zoo::trivial(2), zoo::pair_product(), zoo::tilde_gap()] {
        out.push((s.name, Builder::new(&s.table, Ring::Rational).on("h", Side::Mid, &s.h).letters_word("x", Side::Mid, 1).build()));
    }
    let s = zoo::novikov_torsion();
    let nov = Ring::Novikov { cutoff: three_halves() };
    out.push((s.name, Builder::new(&s.table, nov.clone()).on("h", Side::Mid, &s.h).build()));

    let hat = zoo::hat_master();
    out.push((
        "hat_master",
        Builder::new(&hat.table, Ring::Rational)
            .on("h", Side::Mid, &hat.h)
            .element("aug", Ctx::L0, Placement::Side(Side::Mid), &hat.augmentation)
            .build(),
    ));

    out.push(("exact_cobordism", cobordism(&zoo::exact_cobordism(), Ring::Rational).build()));
    out.push(("novikov_exact", cobordism(&zoo::novikov_exact(three_halves()), nov.clone()).build()));
    out.push(("novikov_nonexact", cobordism(&zoo::novikov_nonexact(three_halves()), nov).build()));

    let (t, h, g) = zoo::order_single();
    out.push(("order", Builder::new(&t, Ring::Rational).on("h", Side::Mid, &h).on("g", Side::Mid, &g).build()));
    let o = zoo::order_cobordism();
    out.push((
        "order_cobordism",
        Builder::new(&o.table, Ring::Rational)
            .on("h_plus", Side::Plus, &o.h_plus)
            .on("h_minus", Side::Minus, &o.h_minus)
            .on("g_plus", Side::Plus, &o.g_plus)
            .on("g_minus", Side::Minus, &o.g_minus)
            .element("g", Ctx::P, Placement::Side(Side::Plus), &o.g)
            .potential("f", o.f.element(), o.f.src(), o.f.tgt())
            .letters_word("x", Side::Plus, 1)
            .build(),
    ));
    out.into_iter().map(|(n, c)| (format!("{n}.toml"), c.to_toml())).collect()
}

pub fn write_all(dir: &Path) -> std::io::Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    for (name, text) in generate() {
        std::fs::write(dir.join(&name), text)?;
        names.push(name);
    }
    Ok(names)
}
