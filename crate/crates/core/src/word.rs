//! Words in the generators `x_n`, `y_n`, `c_n` and `π_n` (written `p`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenKind {
    X,
    Y,
    C,
    P,
}

impl GenKind {
    pub fn letter(self) -> char {
        match self {
            GenKind::X => 'x',
            GenKind::Y => 'y',
            GenKind::C => 'c',
            GenKind::P => 'p',
        }
    }

    fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'x' => Some(GenKind::X),
            'y' => Some(GenKind::Y),
            'c' => Some(GenKind::C),
            'p' => Some(GenKind::P),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub kind: GenKind,
    pub index: u32,
    pub exp: i64,
}

impl GeneratorSymbol {
    pub fn new(kind: GenKind, index: u32, exp: i64) -> Self {
        GeneratorSymbol { kind, index, exp }
    }

    pub fn x(n: u32) -> Self {
        Self::new(GenKind::X, n, 1)
    }
    pub fn y(n: u32) -> Self {
        Self::new(GenKind::Y, n, 1)
    }
    pub fn c(n: u32) -> Self {
        Self::new(GenKind::C, n, 1)
    }
    pub fn p(n: u32) -> Self {
        Self::new(GenKind::P, n, 1)
    }

    pub fn pow(self, exp: i64) -> Self {
        GeneratorSymbol { exp: self.exp * exp, ..self }
    }

    pub fn inverse(self) -> Self {
        self.pow(-1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.exp == 0 {
            return Err(Error::InvalidGenerator(format!("{self}: exponent must be non-zero")));
        }
        if self.kind == GenKind::C && self.index == 0 {
            return Err(Error::InvalidGenerator("c-generators start at index 1".into()));
        }
        Ok(())
    }
}

impl fmt::Display for GeneratorSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.index)?;
        if self.exp != 1 {
            write!(f, "^{}", self.exp)?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorSymbol {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad generator token {tok:?}"));
        let mut chars = tok.chars();
        let kind = chars.next().and_then(GenKind::from_letter).ok_or_else(bad)?;
        let rest = chars.as_str();
        let (idx, exp) = match rest.split_once('^') {
            Some((i, e)) => (i, e.parse::<i64>().map_err(|_| bad())?),
            None => (rest, 1),
        };
        if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index = idx.parse::<u32>().map_err(|_| bad())?;
        let sym = GeneratorSymbol { kind, index, exp };
        sym.validate()?;
        Ok(sym)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<GeneratorSymbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, s: GeneratorSymbol) {
        self.0.push(s);
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|s| s.inverse()).collect())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        Word((0..e.unsigned_abs()).flat_map(|_| base.0.iter().copied()).collect())
    }

    /// Merges adjacent powers of the same generator and drops trivial ones;
    /// `c_n` exponents are reduced modulo its order `n + 2`.
    pub fn normalized(&self) -> Word {
        let mut out: Vec<GeneratorSymbol> = Vec::new();
        for &s in &self.0 {
            match out.last_mut() {
                Some(last) if last.kind == s.kind && last.index == s.index => last.exp += s.exp,
                _ => out.push(s),
            }
            if let Some(last) = out.last_mut() {
                if last.kind == GenKind::C {
                    let order = last.index as i64 + 2;
                    last.exp = last.exp.rem_euclid(order);
                }
                if last.exp == 0 {
                    out.pop();
                }
            }
        }
        Word(out)
    }

    /// Sum of the `y` exponents modulo 2.
    pub fn y_parity(&self) -> u8 {
        (self.0.iter().filter(|s| s.kind == GenKind::Y).map(|s| s.exp).sum::<i64>().rem_euclid(2)) as u8
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace().map(str::parse).collect::<Result<Vec<_>>>().map(Word)
    }
}

impl From<Vec<GeneratorSymbol>> for Word {
    fn from(v: Vec<GeneratorSymbol>) -> Self {
        Word(v)
    }
}
