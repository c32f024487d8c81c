//! Generator tables: the index set with q-degrees, weights and the shift `N`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{AlgError, Result};
use crate::scalar::Q;

/// Which copy of a generator a variable belongs to.
///
/// Single structures live on `Mid`. A potential maps `Plus` (positive end)
/// to `Minus` (negative end); composition uses `Mid` for the middle level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Plus,
    Mid,
    Minus,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::Plus, Side::Mid, Side::Minus];

    pub fn suffix(self) -> &'static str {
        match self {
            Side::Plus => "+",
            Side::Mid => "",
            Side::Minus => "-",
        }
    }

    fn bit(self) -> u8 {
        match self {
            Side::Plus => 1,
            Side::Mid => 2,
            Side::Minus => 4,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Plus => "+",
            Side::Mid => "mid",
            Side::Minus => "-",
        })
    }
}

/// Variable kinds, in canonical order: q before p before t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Q,
    P,
    T,
}

/// A single variable. Field order gives the canonical monomial order:
/// kind first, then table order, then side. t-variables always use `Mid`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub kind: Kind,
    pub index: u32,
    pub side: Side,
}

impl Var {
    pub fn q(index: usize, side: Side) -> Var {
        Var { kind: Kind::Q, index: index as u32, side }
    }

    pub fn p(index: usize, side: Side) -> Var {
        Var { kind: Kind::P, index: index as u32, side }
    }

    pub fn t(index: usize) -> Var {
        Var { kind: Kind::T, index: index as u32, side: Side::Mid }
    }

    /// The Poisson-conjugate variable, if any.
    pub fn dual(self) -> Option<Var> {
        match self.kind {
            Kind::Q => Some(Var { kind: Kind::P, ..self }),
            Kind::P => Some(Var { kind: Kind::Q, ..self }),
            Kind::T => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub q_degree: i64,
    pub kappa: i64,
    pub action: Option<Q>,
    sides: u8,
}

impl Generator {
    pub fn on_side(&self, side: Side) -> bool {
        self.sides & side.bit() != 0
    }

    pub fn sides(&self) -> Vec<Side> {
        Side::ALL.into_iter().filter(|s| self.on_side(*s)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TVar {
    pub name: String,
    pub degree: i64,
}

/// The index set Γ with its degrees and weights, the shift `N`, and the
/// constraint variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTable {
    n: i64,
    generators: Vec<Generator>,
    tvars: Vec<TVar>,
}

/// Builder input for one generator.
#[derive(Clone, Debug)]
pub struct GeneratorSpec {
    pub name: String,
    pub q_degree: i64,
    pub kappa: i64,
    pub action: Option<Q>,
    /// Empty means all three sides.
    pub sides: Vec<Side>,
}

impl GeneratorSpec {
    pub fn new(name: &str, q_degree: i64, kappa: i64) -> Self {
        GeneratorSpec { name: name.to_string(), q_degree, kappa, action: None, sides: Vec::new() }
    }

    pub fn on(mut self, sides: &[Side]) -> Self {
        self.sides = sides.to_vec();
        self
    }
}

impl GeneratorTable {
    pub fn new(n: i64, generators: Vec<GeneratorSpec>, tvars: Vec<(String, i64)>) -> Result<Self> {
        let mut names = BTreeSet::new();
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.name.is_empty() {
                return Err(AlgError::InvalidTable("empty generator name".into()));
            }
            if !names.insert(g.name.clone()) {
                return Err(AlgError::InvalidTable(format!("duplicate name `{}`", g.name)));
            }
            if g.kappa < 1 {
                return Err(AlgError::InvalidTable(format!(
                    "weight of `{}` must be a positive integer, got {}",
                    g.name, g.kappa
                )));
            }
            if let Some(a) = &g.action {
                if *a < Q::from_integer(0.into()) {
                    return Err(AlgError::InvalidTable(format!("negative action for `{}`", g.name)));
                }
            }
            let sides = if g.sides.is_empty() { 7 } else { g.sides.iter().fold(0, |m, s| m | s.bit()) };
            gens.push(Generator { name: g.name, q_degree: g.q_degree, kappa: g.kappa, action: g.action, sides });
        }
        let mut tv = Vec::with_capacity(tvars.len());
        for (name, degree) in tvars {
            if !names.insert(name.clone()) {
                return Err(AlgError::InvalidTable(format!("duplicate name `{name}`")));
            }
            tv.push(TVar { name, degree });
        }
        Ok(GeneratorTable { n, generators: gens, tvars: tv })
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn tvars(&self) -> &[TVar] {
        &self.tvars
    }

    pub fn generator(&self, index: usize) -> &Generator {
        &self.generators[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn tvar_index(&self, name: &str) -> Option<usize> {
        self.tvars.iter().position(|t| t.name == name)
    }

    pub fn p_degree_of(&self, index: usize) -> i64 {
        2 * self.n - self.generators[index].q_degree
    }

    pub fn degree(&self, v: Var) -> i64 {
        match v.kind {
            Kind::Q => self.generators[v.index as usize].q_degree,
            Kind::P => self.p_degree_of(v.index as usize),
            Kind::T => self.tvars[v.index as usize].degree,
        }
    }

    pub fn is_odd(&self, v: Var) -> bool {
        self.degree(v).rem_euclid(2) == 1
    }

    pub fn kappa(&self, v: Var) -> i64 {
        self.generators[v.index as usize].kappa
    }

    /// Checks that the variable exists and its side is declared.
    pub fn check_var(&self, v: Var) -> Result<()> {
        match v.kind {
            Kind::T => {
                if (v.index as usize) < self.tvars.len() {
                    Ok(())
                } else {
                    Err(AlgError::UnknownGenerator(format!("t#{}", v.index)))
                }
            }
            _ => {
                let g = self
                    .generators
                    .get(v.index as usize)
                    .ok_or_else(|| AlgError::UnknownGenerator(format!("#{}", v.index)))?;
                if g.on_side(v.side) {
                    Ok(())
                } else {
                    Err(AlgError::UndeclaredSide { name: g.name.clone(), side: v.side.to_string() })
                }
            }
        }
    }

    /// Indices of generators declared on `side`, in table order.
    pub fn indices_on(&self, side: Side) -> Vec<usize> {
        (0..self.generators.len()).filter(|&i| self.generators[i].on_side(side)).collect()
    }

    pub fn var_name(&self, v: Var) -> String {
        match v.kind {
            Kind::Q => format!("q:{}{}", self.generators[v.index as usize].name, v.side.suffix()),
            Kind::P => format!("p:{}{}", self.generators[v.index as usize].name, v.side.suffix()),
            Kind::T => format!("t:{}", self.tvars[v.index as usize].name),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_degree_is_complementary() {
        let t = GeneratorTable::new(2, vec![GeneratorSpec::new("x", 1, 1)], vec![]).unwrap();
        assert_eq!(t.degree(Var::p(0, Side::Mid)), 3);
        assert_eq!(t.degree(Var::p(0, Side::Mid)) + t.degree(Var::q(0, Side::Mid)), 4);
    }

    #[test]
    fn rejects_bad_tables() {
        let dup = GeneratorTable::new(1, vec![GeneratorSpec::new("x", 1, 1), GeneratorSpec::new("x", 2, 1)], vec![]);
        assert!(matches!(dup, Err(AlgError::InvalidTable(_))));
        let zero = GeneratorTable::new(1, vec![GeneratorSpec::new("x", 1, 0)], vec![]);
        assert!(matches!(zero, Err(AlgError::InvalidTable(_))));
        let clash = GeneratorTable::new(1, vec![GeneratorSpec::new("x", 1, 1)], vec![("x".into(), 2)]);
        assert!(clash.is_err());
    }

    #[test]
    fn sides_are_checked() {
        let t = GeneratorTable::new(1, vec![GeneratorSpec::new("x", 1, 1).on(&[Side::Plus])], vec![]).unwrap();
        assert!(t.check_var(Var::q(0, Side::Plus)).is_ok());
        assert!(t.check_var(Var::q(0, Side::Minus)).is_err());
    }
}
