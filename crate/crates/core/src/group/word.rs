use serde::{Deserialize, Serialize};
use std::fmt;

/// A generator symbol with exponent ±1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Letter {
    pub name: char,
    pub inv: bool,
}

impl Letter {
    pub fn new(name: char) -> Self {
        Letter { name, inv: false }
    }

    pub fn inverse(self) -> Self {
        Letter { name: self.name, inv: !self.inv }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "{}^-1", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse word `{input}`: {reason}")]
pub struct WordParseError {
    pub input: String,
    pub reason: String,
}

/// A word in single-character generator symbols.
///
/// Text form: letters optionally followed by `^k` for a nonzero integer `k`,
/// with optional whitespace, e.g. `"t u^2 t^-1"` or `"sus"`. The empty word is
/// written `1`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn parse(s: &str) -> Result<Word, WordParseError> {
        let err = |reason: &str| WordParseError { input: s.to_string(), reason: reason.to_string() };
        let t = s.trim();
        if t.is_empty() || t == "1" {
            return Ok(Word::empty());
        }
        let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if !c.is_ascii_alphabetic() {
                return Err(err(&format!("unexpected `{c}`")));
            }
            i += 1;
            let mut exp: i64 = 1;
            if i < chars.len() && chars[i] == '^' {
                i += 1;
                let start = i;
                if i < chars.len() && chars[i] == '-' {
                    i += 1;
                }
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: String = chars[start..i].iter().collect();
                exp = num.parse().map_err(|_| err("bad exponent"))?;
                if exp == 0 {
                    return Err(err("zero exponent"));
                }
            }
            let l = Letter { name: c, inv: exp < 0 };
            for _ in 0..exp.unsigned_abs() {
                out.push(l);
            }
        }
        Ok(Word(out))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, n: usize) -> Word {
        Word(self.0.iter().copied().cycle().take(self.0.len() * n).collect())
    }

    /// Replaces each letter `r^{±1}` with `defs(r)^{±1}` where a definition
    /// exists; other letters are kept.
    pub fn expand(&self, defs: &dyn Fn(char) -> Option<Word>) -> Word {
        let mut out = Vec::new();
        for l in &self.0 {
            match defs(l.name) {
                Some(w) => {
                    let w = if l.inv { w.inverse() } else { w };
                    out.extend(w.0);
                }
                None => out.push(*l),
            }
        }
        Word(out)
    }

    /// Free reduction: cancels adjacent `x x^-1` pairs.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for l in &self.0 {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(*l);
            }
        }
        Word(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let l = self.0[i];
            let mut j = i;
            while j < self.0.len() && self.0[j] == l {
                j += 1;
            }
            let run = (j - i) as i64;
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let e = if l.inv { -run } else { run };
            if e == 1 {
                write!(f, "{}", l.name)?;
            } else {
                write!(f, "{}^{}", l.name, e)?;
            }
            i = j;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w = Word::parse("t u^2 t^-1").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(w.to_string(), "t u^2 t^-1");
        assert_eq!(Word::parse("sus").unwrap().to_string(), "s u s");
        assert_eq!(Word::parse("1").unwrap(), Word::empty());
        assert_eq!(Word::parse("").unwrap(), Word::empty());
        assert!(Word::parse("s^0").is_err());
        assert!(Word::parse("s*t").is_err());
        assert_eq!(Word::parse("s^-2").unwrap().to_string(), "s^-2");
    }

    #[test]
    fn inverse_and_reduce() {
        let w = Word::parse("s t u^-1").unwrap();
        assert_eq!(w.inverse().to_string(), "u t^-1 s^-1");
        assert!(w.concat(&w.inverse()).reduced().is_empty());
    }

    #[test]
    fn expand_definitions() {
        let v = Word::parse("s u s").unwrap();
        let w = Word::parse("u v^-1").unwrap();
        let e = w.expand(&|c| (c == 'v').then(|| v.clone()));
        assert_eq!(e.to_string(), "u s^-1 u^-1 s^-1");
    }
}
