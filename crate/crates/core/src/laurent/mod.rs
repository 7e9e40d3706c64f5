//! Exact arithmetic in Laurent polynomial rings `Z[v_1^±, …, v_r^±, w_1, …, w_s]`
//! where only a designated subset of the variables is invertible.

mod eigen;
mod int;
mod modp;
mod monomial;
mod poly;

pub use eigen::coefficients_from_eigenvalues;
pub use int::Int;
pub use modp::{mod_inv, mod_pow, mul_mod, FieldPoint, DEFAULT_PRIME};
pub use monomial::{Monomial, MAX_EXP, MAX_VARS, MIN_EXP};
pub use poly::{ExponentRange, LaurentPoly};

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LaurentError {
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent on non-invertible variable `{0}`")]
    NotInvertible(String),
    #[error("polynomial does not belong to this ring")]
    MismatchedSpec,
    #[error("zero assigned to invertible variable `{0}`")]
    ZeroAtInvertible(String),
    #[error("no value assigned to variable `{0}`")]
    MissingAssignment(String),
    #[error("unsupported reflection order {0} (expected 2, 3 or 4)")]
    UnsupportedOrder(usize),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}

/// Ordered variable names with an invertibility flag per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSpec {
    names: Vec<String>,
    invertible: Vec<bool>,
}

impl VarSpec {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, bool)>) -> Result<Self, LaurentError> {
        let mut names = Vec::new();
        let mut invertible = Vec::new();
        for (n, inv) in vars {
            let n = n.into();
            if names.contains(&n) {
                return Err(LaurentError::DuplicateVariable(n));
            }
            names.push(n);
            invertible.push(inv);
        }
        if names.len() > MAX_VARS {
            return Err(LaurentError::TooManyVariables(names.len()));
        }
        Ok(VarSpec { names, invertible })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.invertible[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, LaurentError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LaurentError::UnknownVariable(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<LaurentPoly, LaurentError> {
        self.var_pow(name, 1)
    }

    pub fn var_pow(&self, name: &str, exp: i32) -> Result<LaurentPoly, LaurentError> {
        let i = self.index_of(name)?;
        if exp < 0 && !self.invertible[i] {
            return Err(LaurentError::NotInvertible(name.to_string()));
        }
        let m = Monomial::var(i, exp).ok_or(LaurentError::MismatchedSpec)?;
        Ok(LaurentPoly::term(m, Int::ONE))
    }

    /// Checks that `p` is an element of this ring.
    pub fn check(&self, p: &LaurentPoly) -> Result<(), LaurentError> {
        for (m, _) in p.terms() {
            for v in 0..MAX_VARS {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                if v >= self.len() {
                    return Err(LaurentError::MismatchedSpec);
                }
                if e < 0 && !self.invertible[v] {
                    return Err(LaurentError::NotInvertible(self.names[v].clone()));
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        self.check(p).map_err(|_| LaurentError::MismatchedSpec)?;
        self.check(q).map_err(|_| LaurentError::MismatchedSpec)?;
        Ok(p + q)
    }

    pub fn mul(&self, p: &LaurentPoly, q: &LaurentPoly) -> Result<LaurentPoly, LaurentError> {
        for x in [p, q] {
            if let Err(LaurentError::MismatchedSpec) = self.check(x) {
                return Err(LaurentError::MismatchedSpec);
            }
        }
        let r = p * q;
        self.check(&r)?;
        Ok(r)
    }

    /// True iff `p = ±m` for a monomial `m` whose nonzero exponents all sit on
    /// invertible variables.
    pub fn is_unit(&self, p: &LaurentPoly) -> bool {
        let Some((m, c)) = p.as_term() else {
            return false;
        };
        if !(c.is_one() || c.is_minus_one()) {
            return false;
        }
        (0..MAX_VARS).all(|v| {
            let e = m.exponent(v);
            e == 0 || (v < self.len() && self.invertible[v])
        })
    }

    /// Canonical text form: terms in descending lexicographic order of their
    /// exponent vectors, written `coeff*var^exp*...`.
    pub fn format(&self, p: &LaurentPoly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for v in 0..MAX_VARS {
                let e = m.exponent(v);
                if e == 0 {
                    continue;
                }
                let name = self.names.get(v).map(String::as_str).unwrap_or("?");
                factors.push(if e == 1 { name.to_string() } else { format!("{name}^{e}") });
            }
            if factors.is_empty() {
                let _ = write!(out, "{abs}");
            } else {
                if !abs.is_one() {
                    let _ = write!(out, "{abs}*");
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    /// Parses the text form produced by [`VarSpec::format`] (whitespace is
    /// ignored, factors may repeat and appear in any order).
    pub fn parse(&self, s: &str) -> Result<LaurentPoly, LaurentError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(LaurentError::Parse("empty input".into()));
        }
        let bytes = compact.as_bytes();
        let mut terms = Vec::new();
        let mut start = 0;
        let mut i = 0;
        while i <= bytes.len() {
            // a sign ends the previous term unless it follows `^` or opens the string
            let at_split = i == bytes.len()
                || ((bytes[i] == b'+' || bytes[i] == b'-') && i > start && bytes[i - 1] != b'^');
            if at_split {
                terms.push(self.parse_term(&compact[start..i])?);
                start = i;
            }
            i += 1;
        }
        Ok(LaurentPoly::from_terms(terms))
    }

    fn parse_term(&self, t: &str) -> Result<(Monomial, Int), LaurentError> {
        let err = || LaurentError::Parse(format!("bad term `{t}`"));
        let (sign, body) = match t.as_bytes().first() {
            Some(b'-') => (-1i64, &t[1..]),
            Some(b'+') => (1, &t[1..]),
            _ => (1, t),
        };
        if body.is_empty() {
            return Err(err());
        }
        let mut coeff = Int::from(sign);
        let mut exps = [0i32; MAX_VARS];
        for f in body.split('*') {
            if f.is_empty() {
                return Err(err());
            }
            if f.as_bytes()[0].is_ascii_digit() {
                let c: Int = f.parse().map_err(|_| err())?;
                coeff = coeff.mul_ref(&c);
                continue;
            }
            let (name, e) = match f.split_once('^') {
                Some((n, e)) => (n, e.parse::<i32>().map_err(|_| err())?),
                None => (f, 1),
            };
            let v = self.index_of(name)?;
            if e < 0 && !self.invertible[v] {
                return Err(LaurentError::NotInvertible(name.to_string()));
            }
            exps[v] += e;
        }
        let m = Monomial::from_exponents(&exps).ok_or_else(err)?;
        Ok((m, coeff))
    }
}
