//! Maurer–Cartan elements over the Novikov field and the twisted structures
//! they induce.
//!
//! Every series here is cut off at a fixed energy `E`: identities hold modulo
//! `λ^E`. Positivity of the filtration level makes each series finite below
//! `E`; loops run over the exact number of levels needed rather than until
//! a fixed iteration cap.

use std::sync::Arc;

use num_traits::Signed;

use crate::coalgebra::TensorWord;
use crate::coderivation::{arrow_coderivation_raw, check_master};
use crate::element::{AlgElement, Ctx, Homogeneity, Truncation};
use crate::error::{AlgError, Result};
use crate::monomial::Monomial;
use crate::morphism::{check_chain_map, MorphismHandle, Potential};
use crate::scalar::Q;
use crate::table::{GeneratorTable, Kind};

/// A generator table over Novikov scalars with energy cutoff `E`.
#[derive(Clone, Debug)]
pub struct FilteredContext {
    table: Arc<GeneratorTable>,
    energy: Q,
}

impl FilteredContext {
    pub fn new(table: &Arc<GeneratorTable>, energy: Q) -> Result<Self> {
        if !energy.is_positive() {
            return Err(AlgError::ZeroFiltration);
        }
        Ok(FilteredContext { table: table.clone(), energy })
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn energy(&self) -> &Q {
        &self.energy
    }

    pub fn truncation(&self) -> Truncation {
        Truncation::energy(self.energy.clone())
    }

    /// `x mod λ^E`.
    pub fn reduce(&self, x: &AlgElement) -> AlgElement {
        x.with_truncation(x.truncation().meet(&self.truncation()))
    }

    pub fn reduce_word(&self, x: &TensorWord) -> TensorWord {
        let e = match x.energy() {
            Some(e) if *e < self.energy => e.clone(),
            _ => self.energy.clone(),
        };
        x.clone().with_energy(Some(e))
    }

    /// Minimal Novikov exponent, `None` for zero.
    pub fn level(&self, x: &AlgElement) -> Option<Q> {
        x.filtration_level()
    }

    /// Number of factors of level `≥ ℓ` that fit below `E`: the largest `n`
    /// with `n·ℓ < E`.
    pub fn steps(&self, level: &Q) -> usize {
        let ratio = &self.energy / level;
        let n = ratio.ceil().to_integer() - 1u32;
        usize::try_from(n).unwrap_or(0)
    }

    /// The strictly positive level of `a`, or `ZeroFiltration`. Zero has no
    /// level and is rejected unless `allow_zero`.
    fn positive_level(&self, a: &AlgElement, allow_zero: bool) -> Result<Option<Q>> {
        match self.level(a) {
            None if allow_zero => Ok(None),
            None => Err(AlgError::ZeroFiltration),
            Some(l) if l.is_positive() => Ok(Some(l)),
            Some(_) => Err(AlgError::ZeroFiltration),
        }
    }

    /// `e^a = Σ a^{⊙n}/n!` modulo `λ^E`, summed over all `n` with `n·ℓ(a) < E`.
    pub fn exp(&self, a: &AlgElement) -> Result<TensorWord> {
        let unit = TensorWord::unit(&self.table).with_energy(Some(self.energy.clone()));
        let Some(l) = self.positive_level(a, true)? else {
            return Ok(unit);
        };
        let base = TensorWord::from_element(&self.reduce(a)).with_energy(Some(self.energy.clone()));
        let mut power = unit.clone();
        let mut acc = unit;
        for n in 1..=self.steps(&l) {
            power = power.odot(&base).scale_q(&Q::new(1.into(), (n as i64).into()));
            acc = acc.add(&power);
        }
        Ok(acc)
    }

    /// `Ψ^a(x) = e^a ⊙ x`.
    pub fn psi(&self, a: &AlgElement, x: &TensorWord) -> Result<TensorWord> {
        Ok(self.exp(a)?.odot(&self.reduce_word(x)))
    }

    fn check_mc_degree(&self, a: &AlgElement) -> Result<()> {
        let n2 = 2 * self.table.n();
        match a.degree() {
            Homogeneity::Zero => Ok(()),
            Homogeneity::Degree(d) if d == n2 => Ok(()),
            Homogeneity::Degree(d) => Err(AlgError::DegreeMismatch { expected: n2, found: d }),
            Homogeneity::Inhomogeneous => Err(AlgError::InhomogeneousInput),
        }
    }

    /// `D_h(e^a) = 0` modulo `λ^E`. `a = 0` is accepted only with `allow_zero`.
    pub fn is_maurer_cartan(&self, a: &AlgElement, h: &AlgElement, allow_zero: bool) -> Result<bool> {
        self.check_mc_degree(a)?;
        self.positive_level(a, allow_zero)?;
        if !check_master(h)? {
            return Err(AlgError::MasterEquationFails);
        }
        let d = arrow_coderivation_raw(&self.reduce(h), &self.exp(a)?, 1);
        Ok(d.is_zero())
    }

    /// `e^{a+b} = e^a ⊙ e^b` modulo `λ^E`.
    pub fn exponential_product_check(&self, a: &AlgElement, b: &AlgElement) -> Result<bool> {
        for x in [a, b] {
            if x.parity()? {
                return Err(AlgError::DegreeMismatch { expected: 0, found: 1 });
            }
            self.positive_level(x, true)?;
        }
        let lhs = self.exp(&a.add_any(b))?;
        let rhs = self.exp(a)?.odot(&self.exp(b)?);
        Ok(lhs == rhs)
    }

    fn require_mc(&self, a: &AlgElement, h: &AlgElement) -> Result<()> {
        if self.is_maurer_cartan(a, h, true)? {
            Ok(())
        } else {
            Err(AlgError::NotMaurerCartan)
        }
    }

    /// `D^a(x) = Ψ^{−a} D Ψ^a (x)`.
    pub fn twist_coderivation(&self, h: &AlgElement, a: &AlgElement, x: &TensorWord) -> Result<TensorWord> {
        self.require_mc(a, h)?;
        Ok(self.twist_coderivation_unchecked(h, a, x))
    }

    fn twist_coderivation_unchecked(&self, h: &AlgElement, a: &AlgElement, x: &TensorWord) -> TensorWord {
        let up = self.exp(a).expect("level checked").odot(&self.reduce_word(x));
        let d = arrow_coderivation_raw(&self.reduce(h), &up, 1);
        self.exp(&a.neg()).expect("level checked").odot(&d)
    }

    /// `h^a = Σ_n (1/n!) ad_a^n h` with `ad_a h = {h,a}`, modulo `λ^E`.
    pub fn twist_hamiltonian(&self, h: &AlgElement, a: &AlgElement) -> Result<AlgElement> {
        self.require_mc(a, h)?;
        Ok(self.conjugate(h, a))
    }

    /// The series `Σ (1/n!) {…{h,a},…,a}` without checking preconditions.
    fn conjugate(&self, h: &AlgElement, a: &AlgElement) -> AlgElement {
        let h = self.reduce(h);
        let Some(l) = self.level(a) else {
            return h;
        };
        let a = self.reduce(a);
        let mut term = h.clone();
        let mut acc = h;
        for n in 1..=self.steps(&l) {
            term = term.bracket_any(&a).scale_q(&Q::new(1.into(), (n as i64).into()));
            if term.is_zero() {
                break;
            }
            acc = acc.add_any(&term);
        }
        acc
    }

    /// `f = f⁰ + f′` with `f⁰ = f|_{p_src=0}` and `f′ ∈ 𝓛̄`.
    pub fn split_potential(&self, f: &Potential) -> Result<(AlgElement, Potential)> {
        let f0 = f.p_free_part();
        self.positive_level(&f0, true)?;
        let rest = f.element().sub_any(&f0);
        Ok((f0.with_ctx(Ctx::A), Potential::new(rest, f.src(), f.tgt())?))
    }

    /// `Φ(x) = Ψ^{f⁰}(Φ′(x))` for a potential that need not lie in `𝓛̄`.
    pub fn apply_nonexact(&self, f: &Potential, x: &TensorWord) -> Result<TensorWord> {
        let (f0, rest) = self.split_potential(f)?;
        let m = MorphismHandle::new(rest)?;
        let y = m.apply(x, None)?;
        self.psi(&f0, &y)
    }

    /// `f_*(a) = Σ_{r≥1} φ^r(a^{⊙r})/r!`, after checking that `a` is MC for
    /// `h⁺` and that `m` intertwines `h⁺` and `h⁻`.
    pub fn pushforward_mc(&self, m: &MorphismHandle, a: &AlgElement, h_plus: &AlgElement, h_minus: &AlgElement) -> Result<AlgElement> {
        self.require_mc(a, h_plus)?;
        if !check_chain_map(m.potential(), h_plus, h_minus)? {
            return Err(AlgError::NotChainMap);
        }
        Ok(self.pushforward_unchecked(m, a))
    }

    fn pushforward_unchecked(&self, m: &MorphismHandle, a: &AlgElement) -> AlgElement {
        self.component_series(a, |ws| m.phi_monomials(ws)).with_ctx(Ctx::A)
    }

    /// `Σ_{r≥1} (1/r!) comp(a^{⊙r})` over the levels below `E`.
    fn component_series(&self, a: &AlgElement, comp: impl Fn(&[Monomial]) -> AlgElement) -> AlgElement {
        let mut acc = AlgElement::zero(&self.table, Ctx::L, self.truncation());
        let Some(l) = self.level(a) else {
            return acc;
        };
        let a = self.reduce(a);
        let mut power = TensorWord::unit(&self.table).with_energy(Some(self.energy.clone()));
        let base = TensorWord::from_element(&a);
        for r in 1..=self.steps(&l) {
            power = power.odot(&base).scale_q(&Q::new(1.into(), (r as i64).into()));
            for (w, c) in power.terms() {
                acc = acc.add_any(&comp(w.factors()).scale(c));
            }
        }
        self.reduce(&acc)
    }

    /// `g` with `e^g = (e^f)←D_{e^a}`: `f` plus the connected components of
    /// the action of `a^{⊙r}/r!`.
    pub fn twisted_generating_potential(&self, m: &MorphismHandle, a: &AlgElement) -> AlgElement {
        let f = self.reduce(m.potential().element());
        f.add_any(&self.component_series(a, |ws| m.connected_component(ws)))
    }

    /// `(f_*(a), Φ^a)` where `Φ^a = Ψ^{−f_*(a)} ∘ Φ ∘ Ψ^a` has potential
    /// `f^a = g − g|_{p_src=0}`.
    pub fn twisted_morphism(
        &self,
        m: &MorphismHandle,
        a: &AlgElement,
        h_plus: &AlgElement,
        h_minus: &AlgElement,
    ) -> Result<(AlgElement, MorphismHandle)> {
        let fa = self.pushforward_mc(m, a, h_plus, h_minus)?;
        let g = self.twisted_generating_potential(m, a);
        let src = m.potential().src();
        let g0 = g.set_zero(Kind::P, src);
        let twisted = Potential::new(g.sub_any(&g0), src, m.potential().tgt())?;
        Ok((fa, MorphismHandle::new(twisted)?))
    }
}
