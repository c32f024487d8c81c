//! Iterated-bracket operations and their coderivation extensions.
//!
//! `→h^r(w₁⊙…⊙w_r) = {…{h^r,w₁},…,w_r}` acts from the left and
//! `(c₁⊙…⊙c_s)←g_s = {c₁,{…,{c_s,g_s}…}}` from the right. Both extend to
//! coderivations by summing over unshuffles with Koszul signs.

use std::collections::HashMap;
use std::sync::Arc;

use crate::coalgebra::{front_sign, subsets, TensorWord};
use crate::element::{AlgElement, Ctx, Homogeneity, Truncation};
use crate::error::{AlgError, Result};
use crate::monomial::{Monomial, Sign};
use crate::scalar::Scalar;
use crate::table::GeneratorTable;

pub(crate) fn mono_elem(table: &Arc<GeneratorTable>, m: &Monomial) -> AlgElement {
    AlgElement::from_term(table, Ctx::P, Truncation::none(), m.clone(), Scalar::one())
}

fn check_homogeneous(x: &AlgElement) -> Result<()> {
    if x.degree() == Homogeneity::Inhomogeneous {
        Err(AlgError::InhomogeneousInput)
    } else {
        Ok(())
    }
}

/// `→h^r(w₁⊙…⊙w_r)` with `r = ws.len()` and `h^r` the part of `h` of total
/// p-degree `r`.
pub fn arrow_apply(h: &AlgElement, ws: &[AlgElement]) -> Result<AlgElement> {
    check_homogeneous(h)?;
    for w in ws {
        check_homogeneous(w)?;
    }
    let mut acc = h.p_len_part(ws.len() as u32);
    for w in ws {
        acc = acc.bracket_any(w);
    }
    Ok(acc)
}

/// Sign of moving the factors at `sel` to the back.
fn back_sign(odd: &[bool], sel: &[usize]) -> Sign {
    let mut sign = false;
    for &i in sel {
        if !odd[i] {
            continue;
        }
        let after = (i + 1..odd.len()).filter(|j| odd[*j] && !sel.contains(j)).count();
        if after % 2 == 1 {
            sign = !sign;
        }
    }
    sign
}

fn output_like(x: &TensorWord, h: &AlgElement) -> TensorWord {
    let energy = match (x.energy(), &h.truncation().energy) {
        (Some(a), Some(b)) => Some(a.min(b).clone()),
        (a, b) => a.cloned().or_else(|| b.clone()),
    };
    let mut out = x.empty_like().with_energy(energy);
    out.mark_truncated(x.truncation_active() || h.truncation_active());
    out
}

/// Left coderivation `→D_h` without homogeneity checks. Sums over `r ≥ r_min`;
/// `r = 0` contributes `h^0 ⊙ x`.
pub fn arrow_coderivation_raw(h: &AlgElement, x: &TensorWord, r_min: usize) -> TensorWord {
    let table = x.table().clone();
    let mut out = output_like(x, h);
    let energy = out.energy().cloned();
    let max_n = x.max_word_len();
    let parts: Vec<AlgElement> = (0..=max_n).map(|r| h.p_len_part(r as u32)).collect();
    let mut memo: HashMap<Vec<Monomial>, AlgElement> = HashMap::new();
    for (w, c) in x.terms() {
        let n = w.len();
        let odd: Vec<bool> = w.factors().iter().map(|m| m.is_odd(&table)).collect();
        if r_min == 0 {
            for (m0, c0) in parts[0].terms() {
                let mut f = vec![m0.clone()];
                f.extend(w.factors().iter().cloned());
                let (cc, dropped) = c.mul_trunc(c0, energy.as_ref());
                out.mark_truncated(dropped);
                out.insert_factors(f, cc, false);
            }
        }
        for r in r_min.max(1)..=n {
            if parts[r].is_zero() {
                continue;
            }
            for sel in subsets(n, r) {
                let chosen: Vec<Monomial> = sel.iter().map(|&i| w.factors()[i].clone()).collect();
                let val = memo
                    .entry(chosen)
                    .or_insert_with_key(|chosen| {
                        let mut acc = parts[r].clone();
                        for m in chosen {
                            if acc.is_zero() {
                                break;
                            }
                            acc = acc.bracket_any(&mono_elem(&table, m));
                        }
                        acc
                    })
                    .clone();
                if val.is_zero() {
                    continue;
                }
                out.mark_truncated(val.truncation_active());
                let sign = front_sign(&odd, &sel);
                let rest: Vec<Monomial> = (0..n).filter(|i| !sel.contains(i)).map(|i| w.factors()[i].clone()).collect();
                for (m, cv) in val.terms() {
                    let mut f = vec![m.clone()];
                    f.extend(rest.iter().cloned());
                    let (cc, dropped) = c.mul_trunc(cv, energy.as_ref());
                    out.mark_truncated(dropped);
                    out.insert_factors(f, cc, sign);
                }
            }
        }
    }
    out
}

/// Right coderivation `←D_g` without homogeneity checks. Sums over
/// `s ≥ s_min` (q-degree of the part of `g` used); `s = 0` contributes
/// `x ⊙ g_0`.
pub fn left_coderivation_raw(x: &TensorWord, g: &AlgElement, s_min: usize) -> TensorWord {
    let table = x.table().clone();
    let mut out = output_like(x, g);
    let energy = out.energy().cloned();
    let max_n = x.max_word_len();
    let parts: Vec<AlgElement> = (0..=max_n).map(|s| g.q_len_part(s as u32)).collect();
    let mut memo: HashMap<Vec<Monomial>, AlgElement> = HashMap::new();
    for (w, c) in x.terms() {
        let n = w.len();
        let odd: Vec<bool> = w.factors().iter().map(|m| m.is_odd(&table)).collect();
        if s_min == 0 {
            for (m0, c0) in parts[0].terms() {
                let mut f: Vec<Monomial> = w.factors().to_vec();
                f.push(m0.clone());
                let (cc, dropped) = c.mul_trunc(c0, energy.as_ref());
                out.mark_truncated(dropped);
                out.insert_factors(f, cc, false);
            }
        }
        for s in s_min.max(1)..=n {
            if parts[s].is_zero() {
                continue;
            }
            for sel in subsets(n, s) {
                let chosen: Vec<Monomial> = sel.iter().map(|&i| w.factors()[i].clone()).collect();
                let val = memo
                    .entry(chosen)
                    .or_insert_with_key(|chosen| {
                        let mut acc = parts[s].clone();
                        for m in chosen.iter().rev() {
                            if acc.is_zero() {
                                break;
                            }
                            acc = mono_elem(&table, m).bracket_any(&acc);
                        }
                        acc
                    })
                    .clone();
                if val.is_zero() {
                    continue;
                }
                out.mark_truncated(val.truncation_active());
                let sign = back_sign(&odd, &sel);
                let rest: Vec<Monomial> = (0..n).filter(|i| !sel.contains(i)).map(|i| w.factors()[i].clone()).collect();
                for (m, cv) in val.terms() {
                    let mut f = rest.clone();
                    f.push(m.clone());
                    let (cc, dropped) = c.mul_trunc(cv, energy.as_ref());
                    out.mark_truncated(dropped);
                    out.insert_factors(f, cc, sign);
                }
            }
        }
    }
    out
}

/// `D_h` on `S̄(𝔄[2N])`: the coderivation extending `Σ_{r≥1} →h^r`.
pub fn coderivation(h: &AlgElement, x: &TensorWord) -> Result<TensorWord> {
    check_homogeneous(h)?;
    Ok(arrow_coderivation_raw(h, x, 1))
}

/// `→D_g` on `S𝓛` for `g` in the negative-end algebra, including the
/// `r = 0` inclusion.
pub fn right_action(g: &AlgElement, x: &TensorWord) -> Result<TensorWord> {
    check_homogeneous(g)?;
    Ok(arrow_coderivation_raw(g, x, 0))
}

/// `x ←D_g` on `S𝓛` for `g` in the positive-end algebra, including the
/// `s = 0` inclusion.
pub fn left_action(g: &AlgElement, x: &TensorWord) -> Result<TensorWord> {
    check_homogeneous(g)?;
    Ok(left_coderivation_raw(x, g, 0))
}

/// `x ←D_{w₁⊙…⊙w_k} = x ←D_{w₁} ∘ … ∘ ←D_{w_k}`, extended linearly over
/// the terms of `w`. The empty word acts as the identity.
pub fn word_action(x: &TensorWord, w: &TensorWord) -> TensorWord {
    let mut out = x.empty_like();
    for (word, c) in w.terms() {
        let mut y = x.clone();
        for m in word.factors() {
            let g = mono_elem(x.table(), m);
            y = left_coderivation_raw(&y, &g, 0);
            if y.is_zero() {
                break;
            }
        }
        out = out.add(&y.scale(c));
    }
    out.mark_truncated(x.truncation_active() || w.truncation_active());
    out
}

/// `{h,h} = 0` for `h` of degree `2N−1` (zero passes).
pub fn check_master(h: &AlgElement) -> Result<bool> {
    match h.degree() {
        Homogeneity::Zero => Ok(true),
        Homogeneity::Inhomogeneous => Err(AlgError::InhomogeneousInput),
        Homogeneity::Degree(d) => {
            let n = h.table().n();
            if d != 2 * n - 1 {
                return Err(AlgError::DegreeMismatch { expected: 2 * n - 1, found: d });
            }
            Ok(h.bracket_any(h).is_zero())
        }
    }
}

/// Checks `D_h∘D_g − (−1)^{|h||g|} D_g∘D_h = D_{{h,g}}` on each sample.
pub fn check_commutator_lemma(h: &AlgElement, g: &AlgElement, samples: &[TensorWord]) -> Result<bool> {
    let ph = h.parity()?;
    let pg = g.parity()?;
    let hg = h.bracket_any(g);
    for x in samples {
        let lhs1 = coderivation(h, &coderivation(g, x)?)?;
        let lhs2 = coderivation(g, &coderivation(h, x)?)?;
        let lhs = if ph && pg { lhs1.add(&lhs2) } else { lhs1.sub(&lhs2) };
        let rhs = arrow_coderivation_raw(&hg, x, 1);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `D¹(x) = {h¹, x}` on `𝔄`, where `h¹` is the p-linear part of `h`.
pub fn contact_differential(h: &AlgElement, x: &AlgElement) -> Result<AlgElement> {
    if !check_master(h)? {
        return Err(AlgError::MasterEquationFails);
    }
    Ok(h.p_len_part(1).bracket_any(x).with_ctx(Ctx::A))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_element;
    use crate::table::GeneratorSpec;

    fn table() -> Arc<GeneratorTable> {
        Arc::new(
            GeneratorTable::new(1, vec![GeneratorSpec::new("x", 1, 2), GeneratorSpec::new("y", 2, 1)], vec![]).unwrap(),
        )
    }

    fn el(t: &Arc<GeneratorTable>, s: &str) -> AlgElement {
        parse_element(s, t, Ctx::P, Truncation::none()).unwrap()
    }

    fn tw(t: &Arc<GeneratorTable>, s: &str) -> TensorWord {
        crate::coalgebra::parse_tensor_word(s, t).unwrap()
    }

    #[test]
    fn arrow_on_generator() {
        let t = table();
        assert_eq!(arrow_apply(&el(&t, "p:x"), &[el(&t, "q:x")]).unwrap(), el(&t, "2"));
    }

    #[test]
    fn coderivation_kills_unit() {
        let t = table();
        let h = el(&t, "p:x + p:y*q:x");
        assert!(coderivation(&h, &TensorWord::one_l(&t)).unwrap().is_zero());
    }

    #[test]
    fn coderivation_on_two_letters() {
        let t = table();
        let d = coderivation(&el(&t, "p:x"), &tw(&t, "[q:x (+) q:y]")).unwrap();
        assert_eq!(d, tw(&t, "2*[1 (+) q:y]"));
    }

    #[test]
    fn master_checks_degree() {
        let t = table();
        assert!(check_master(&el(&t, "p:x")).unwrap());
        assert!(check_master(&el(&t, "0")).unwrap());
        assert!(matches!(check_master(&el(&t, "p:y")), Err(AlgError::DegreeMismatch { .. })));
    }

    #[test]
    fn contact_differential_on_generator() {
        let t = table();
        assert_eq!(contact_differential(&el(&t, "p:x"), &el(&t, "q:x")).unwrap(), el(&t, "2"));
        assert!(contact_differential(&el(&t, "p:x"), &el(&t, "1")).unwrap().is_zero());
    }
}
