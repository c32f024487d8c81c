//! Exact coefficients: rationals and truncated Novikov polynomials.
//!
//! A Novikov scalar is a finite sum `Σ cᵢ λ^{aᵢ}` with rational `aᵢ ≥ 0`.
//! Multiplication takes an optional energy cutoff `E`; every term with
//! exponent `≥ E` is dropped and the caller is told whether that happened.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Exact ring element: either a plain rational or a Novikov polynomial.
///
/// The representation is canonical: a Novikov polynomial whose only exponent
/// is `0` is stored as `Rational`, and zero is always `Rational(0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Q),
    Novikov(NovikovPoly),
}

/// Terms `(exponent, coefficient)`, exponents strictly increasing, no zero
/// coefficients, at least one positive exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovPoly {
    terms: Vec<(Q, Q)>,
}

impl NovikovPoly {
    pub fn terms(&self) -> &[(Q, Q)] {
        &self.terms
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rational(Q::zero())
    }

    pub fn one() -> Self {
        Scalar::Rational(Q::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rational(q(n))
    }

    pub fn from_q(c: Q) -> Self {
        Scalar::Rational(c)
    }

    /// `c·λ^a`. Panics on negative exponents.
    pub fn monomial(c: Q, a: Q) -> Self {
        assert!(!a.is_negative(), "Novikov exponents are nonnegative");
        Scalar::from_terms(vec![(a, c)])
    }

    /// Build from arbitrary `(exponent, coefficient)` pairs; merges equal
    /// exponents and normalizes.
    pub fn from_terms(mut raw: Vec<(Q, Q)>) -> Self {
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let mut terms: Vec<(Q, Q)> = Vec::with_capacity(raw.len());
        for (a, c) in raw {
            match terms.last_mut() {
                Some((la, lc)) if *la == a => *lc += c,
                _ => terms.push((a, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Self::normalize(terms)
    }

    fn normalize(terms: Vec<(Q, Q)>) -> Self {
        match terms.len() {
            0 => Scalar::zero(),
            1 if terms[0].0.is_zero() => Scalar::Rational(terms[0].1.clone()),
            _ => Scalar::Novikov(NovikovPoly { terms }),
        }
    }

    /// View as `(exponent, coefficient)` list.
    pub fn terms(&self) -> Vec<(Q, Q)> {
        match self {
            Scalar::Rational(c) if c.is_zero() => Vec::new(),
            Scalar::Rational(c) => vec![(Q::zero(), c.clone())],
            Scalar::Novikov(p) => p.terms.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Rational(c) if c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rational(c) if c.is_one())
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Scalar::Rational(_))
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Scalar::Rational(c) => Some(c),
            Scalar::Novikov(_) => None,
        }
    }

    /// Minimal exponent with nonzero coefficient; `None` for zero.
    pub fn filtration_level(&self) -> Option<Q> {
        match self {
            Scalar::Rational(c) if c.is_zero() => None,
            Scalar::Rational(_) => Some(Q::zero()),
            Scalar::Novikov(p) => p.terms.first().map(|t| t.0.clone()),
        }
    }

    /// Coefficient of `λ^a`.
    pub fn coefficient(&self, a: &Q) -> Q {
        match self {
            Scalar::Rational(c) => {
                if a.is_zero() {
                    c.clone()
                } else {
                    Q::zero()
                }
            }
            Scalar::Novikov(p) => p
                .terms
                .iter()
                .find(|(e, _)| e == a)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Q::zero),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(c) => Scalar::Rational(-c.clone()),
            Scalar::Novikov(p) => Scalar::Novikov(NovikovPoly {
                terms: p.terms.iter().map(|(a, c)| (a.clone(), -c.clone())).collect(),
            }),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            _ => {
                let mut out = Vec::new();
                let (x, y) = (self.terms(), other.terms());
                let (mut i, mut j) = (0, 0);
                while i < x.len() || j < y.len() {
                    let ord = match (x.get(i), y.get(j)) {
                        (Some(a), Some(b)) => a.0.cmp(&b.0),
                        (Some(_), None) => Ordering::Less,
                        _ => Ordering::Greater,
                    };
                    match ord {
                        Ordering::Less => {
                            out.push(x[i].clone());
                            i += 1;
                        }
                        Ordering::Greater => {
                            out.push(y[j].clone());
                            j += 1;
                        }
                        Ordering::Equal => {
                            let c = &x[i].1 + &y[j].1;
                            if !c.is_zero() {
                                out.push((x[i].0.clone(), c));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                }
                Self::normalize(out)
            }
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        match self {
            Scalar::Rational(a) => Scalar::Rational(a * c),
            Scalar::Novikov(p) => Scalar::Novikov(NovikovPoly {
                terms: p.terms.iter().map(|(a, x)| (a.clone(), x * c)).collect(),
            }),
        }
    }

    /// Product, dropping exponents `≥ cutoff`. The flag reports whether a
    /// nonzero term was dropped.
    pub fn mul_trunc(&self, other: &Scalar, cutoff: Option<&Q>) -> (Scalar, bool) {
        if let (Scalar::Rational(a), Scalar::Rational(b)) = (self, other) {
            let s = Scalar::Rational(a * b);
            return s.truncate(cutoff);
        }
        let mut raw = Vec::new();
        let mut dropped = false;
        for (a, c) in self.terms() {
            for (b, d) in other.terms() {
                let e = &a + &b;
                if cutoff.is_some_and(|cut| e >= *cut) {
                    dropped = true;
                    continue;
                }
                raw.push((e, &c * &d));
            }
        }
        (Scalar::from_terms(raw), dropped)
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.mul_trunc(other, None).0
    }

    /// Drop all terms with exponent `≥ cutoff`.
    pub fn truncate(&self, cutoff: Option<&Q>) -> (Scalar, bool) {
        let Some(cut) = cutoff else {
            return (self.clone(), false);
        };
        let terms = self.terms();
        let n = terms.len();
        let kept: Vec<(Q, Q)> = terms.into_iter().filter(|(a, _)| a < cut).collect();
        let dropped = kept.len() != n;
        (Self::normalize(kept), dropped)
    }

    /// Only defined for rational scalars.
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(c) if !c.is_zero() => Some(Scalar::Rational(c.recip())),
            _ => None,
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Q> for Scalar {
    fn from(c: Q) -> Self {
        Scalar::Rational(c)
    }
}

/// `3`, `-1/2`.
pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (a, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let abs = c.abs();
            if a.is_zero() {
                write!(f, "{}", fmt_q(&abs))?;
            } else if abs.is_one() {
                write!(f, "L^{}", fmt_q(a))?;
            } else {
                write!(f, "{}*L^{}", fmt_q(&abs), fmt_q(a))?;
            }
        }
        Ok(())
    }
}
