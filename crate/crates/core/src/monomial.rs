//! Monomials in graded supercommutative variables, stored in canonical order.

use std::fmt;

use crate::table::{GeneratorTable, Kind, Side, Var};

/// Product of variables in canonical order with positive exponents.
/// Odd variables appear with exponent 1 only.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

/// `±1` as a bool: `true` means negative.
pub type Sign = bool;

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Build from an already-sorted list; used internally after checks.
    pub(crate) fn from_sorted(v: Vec<(Var, u32)>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0].0 < w[1].0));
        Monomial(v)
    }

    /// Product of the given variables in the given order. Returns the
    /// canonical monomial and the Koszul sign, or `None` if an odd variable
    /// repeats.
    pub fn from_vars(table: &GeneratorTable, vars: &[Var]) -> Option<(Monomial, Sign)> {
        let mut acc = Monomial::one();
        let mut sign = false;
        for &v in vars {
            let (m, s) = acc.mul(&Monomial::var(v), table)?;
            acc = m;
            sign ^= s;
        }
        Some((acc, sign))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0.iter().find(|(w, _)| *w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn degree(&self, table: &GeneratorTable) -> i64 {
        self.0.iter().map(|(v, e)| table.degree(*v) * *e as i64).sum()
    }

    pub fn is_odd(&self, table: &GeneratorTable) -> bool {
        self.odd_count(table) % 2 == 1
    }

    fn odd_count(&self, table: &GeneratorTable) -> u32 {
        self.0.iter().filter(|(v, _)| table.is_odd(*v)).map(|(_, e)| *e).sum()
    }

    fn count_kind(&self, kind: Kind, side: Option<Side>) -> u32 {
        self.0
            .iter()
            .filter(|(v, _)| v.kind == kind && side.is_none_or(|s| v.side == s))
            .map(|(_, e)| *e)
            .sum()
    }

    /// Total exponent in p-variables (all sides).
    pub fn p_len(&self) -> u32 {
        self.count_kind(Kind::P, None)
    }

    /// Total exponent in q-variables (all sides).
    pub fn q_len(&self) -> u32 {
        self.count_kind(Kind::Q, None)
    }

    pub fn p_len_on(&self, side: Side) -> u32 {
        self.count_kind(Kind::P, Some(side))
    }

    pub fn q_len_on(&self, side: Side) -> u32 {
        self.count_kind(Kind::Q, Some(side))
    }

    pub fn has_t(&self) -> bool {
        self.0.iter().any(|(v, _)| v.kind == Kind::T)
    }

    /// Supercommutative product with Koszul sign. `None` if the product
    /// vanishes because an odd variable would be squared.
    pub fn mul(&self, other: &Monomial, table: &GeneratorTable) -> Option<(Monomial, Sign)> {
        let mut sign = false;
        for (y, ey) in &other.0 {
            if !table.is_odd(*y) {
                continue;
            }
            for (x, ex) in &self.0 {
                if !table.is_odd(*x) {
                    continue;
                }
                if x == y {
                    return None;
                }
                if x > y && (ex * ey) % 2 == 1 {
                    sign = !sign;
                }
            }
        }
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    out.push((x.0, x.1 + y.1));
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    out.push(*x);
                    i += 1;
                }
                (Some(x), None) => {
                    out.push(*x);
                    i += 1;
                }
                (_, Some(y)) => {
                    out.push(*y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Some((Monomial(out), sign))
    }

    fn derivative(&self, v: Var, table: &GeneratorTable, from_left: bool) -> Option<(Monomial, Sign, u32)> {
        let pos = self.0.iter().position(|(w, _)| *w == v)?;
        let e = self.0[pos].1;
        let sign = if table.is_odd(v) {
            let passed: u32 = if from_left {
                self.0[..pos].iter().filter(|(w, _)| table.is_odd(*w)).map(|(_, e)| *e).sum()
            } else {
                self.0[pos + 1..].iter().filter(|(w, _)| table.is_odd(*w)).map(|(_, e)| *e).sum()
            };
            passed % 2 == 1
        } else {
            false
        };
        let mut out = self.0.clone();
        if e == 1 {
            out.remove(pos);
        } else {
            out[pos].1 -= 1;
        }
        Some((Monomial(out), sign, e))
    }

    /// Graded left derivative: `(result, sign, multiplicity)` with
    /// `∂→_v m = (−1)^sign · multiplicity · result`.
    pub fn left_derivative(&self, v: Var, table: &GeneratorTable) -> Option<(Monomial, Sign, u32)> {
        self.derivative(v, table, true)
    }

    /// Graded right derivative, same conventions as [`Self::left_derivative`].
    pub fn right_derivative(&self, v: Var, table: &GeneratorTable) -> Option<(Monomial, Sign, u32)> {
        self.derivative(v, table, false)
    }

    /// Split `m = ± T · m'` with `T` the t-part, returning `(T, m', sign)`.
    pub fn split_t(&self, table: &GeneratorTable) -> (Monomial, Monomial, Sign) {
        let (t, rest): (Vec<_>, Vec<_>) = self.0.iter().partition(|(v, _)| v.kind == Kind::T);
        let t = Monomial(t);
        let rest = Monomial(rest);
        // stored order is rest·T; T·rest = (−1)^{|T||rest|} rest·T
        let sign = t.is_odd(table) && rest.is_odd(table);
        (t, rest, sign)
    }

    /// Remove all variables of the given kind on the given side.
    pub fn without(&self, kind: Kind, side: Side) -> Monomial {
        Monomial(self.0.iter().filter(|(v, _)| !(v.kind == kind && v.side == side)).copied().collect())
    }

    /// Move every variable on side `from` to side `to`. Returns `None` if
    /// the move would collide with an existing variable on `to`.
    pub fn rename_side(&self, from: Side, to: Side, table: &GeneratorTable) -> Option<(Monomial, Sign)> {
        let vars: Vec<Var> = self
            .0
            .iter()
            .flat_map(|(v, e)| {
                let w = if v.kind != Kind::T && v.side == from { Var { side: to, ..*v } } else { *v };
                std::iter::repeat_n(w, *e as usize)
            })
            .collect();
        Monomial::from_vars(table, &vars)
    }

    pub fn display<'a>(&'a self, table: &'a GeneratorTable) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, table }
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    table: &'a GeneratorTable,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.m.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}", self.table.var_name(*v))?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::GeneratorSpec;

    fn table() -> GeneratorTable {
        // a, b odd; c even
        GeneratorTable::new(
            1,
            vec![GeneratorSpec::new("a", 1, 1), GeneratorSpec::new("b", 3, 1), GeneratorSpec::new("c", 2, 1)],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn odd_variables_anticommute() {
        let t = table();
        let a = Monomial::var(Var::q(0, Side::Mid));
        let b = Monomial::var(Var::q(1, Side::Mid));
        let (ab, s1) = a.mul(&b, &t).unwrap();
        let (ba, s2) = b.mul(&a, &t).unwrap();
        assert_eq!(ab, ba);
        assert_ne!(s1, s2);
        assert!(a.mul(&a, &t).is_none());
    }

    #[test]
    fn even_variables_commute() {
        let t = table();
        let a = Monomial::var(Var::q(0, Side::Mid));
        let c = Monomial::var(Var::q(2, Side::Mid));
        let (_, s1) = a.mul(&c, &t).unwrap();
        let (_, s2) = c.mul(&a, &t).unwrap();
        assert_eq!(s1, s2);
        let (c2, _) = c.mul(&c, &t).unwrap();
        assert_eq!(c2.exponent(Var::q(2, Side::Mid)), 2);
    }

    #[test]
    fn derivatives_track_signs() {
        let t = table();
        let (m, _) = Monomial::from_vars(&t, &[Var::q(0, Side::Mid), Var::q(1, Side::Mid)]).unwrap();
        // ∂→_b (a b) = -a ; (a b)∂←_b = a
        let (r, s, e) = m.left_derivative(Var::q(1, Side::Mid), &t).unwrap();
        assert_eq!((r.clone(), s, e), (Monomial::var(Var::q(0, Side::Mid)), true, 1));
        let (r2, s2, _) = m.right_derivative(Var::q(1, Side::Mid), &t).unwrap();
        assert_eq!((r2, s2), (r, false));
        assert!(m.left_derivative(Var::q(2, Side::Mid), &t).is_none());
    }
}
