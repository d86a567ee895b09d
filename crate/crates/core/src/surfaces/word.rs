use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generators of the fundamental groupoid.
///
/// `Alpha(i)` runs p_1 → p_i, `Beta(i)` is the boundary loop at p_i,
/// `Gamma(j)`/`Delta(j)` are the handle loops at p_1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    Alpha(usize),
    Beta(usize),
    Gamma(usize),
    Delta(usize),
}

impl Generator {
    pub fn source(self) -> usize {
        match self {
            Generator::Alpha(_) => 1,
            Generator::Beta(i) => i,
            Generator::Gamma(_) | Generator::Delta(_) => 1,
        }
    }

    pub fn target(self) -> usize {
        match self {
            Generator::Alpha(i) | Generator::Beta(i) => i,
            Generator::Gamma(_) | Generator::Delta(_) => 1,
        }
    }

    pub fn label(self) -> String {
        match self {
            Generator::Alpha(i) => format!("A_{i}"),
            Generator::Beta(i) => format!("B_{i}"),
            Generator::Gamma(j) => format!("C_{j}"),
            Generator::Delta(j) => format!("D_{j}"),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let head = chars
            .next()
            .ok_or_else(|| Error::Parse("empty generator label".into()))?;
        let rest = chars.as_str().trim_start_matches('_');
        let idx: usize = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad generator label `{s}`")))?;
        match head.to_ascii_uppercase() {
            'A' => Ok(Generator::Alpha(idx)),
            'B' => Ok(Generator::Beta(idx)),
            'C' => Ok(Generator::Gamma(idx)),
            'D' => Ok(Generator::Delta(idx)),
            _ => Err(Error::Parse(format!("bad generator label `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: Generator, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn source(self) -> usize {
        if self.inverse {
            self.generator.target()
        } else {
            self.generator.source()
        }
    }

    pub fn target(self) -> usize {
        if self.inverse {
            self.generator.source()
        } else {
            self.generator.target()
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}⁻¹", self.generator)
        } else {
            write!(f, "{}", self.generator)
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        for suffix in ["⁻¹", "^-1", "^{-1}", "'"] {
            if let Some(base) = s.strip_suffix(suffix) {
                return Ok(Letter::new(base.parse()?, true));
            }
        }
        Ok(Letter::new(s.parse()?, false))
    }
}

/// A path class written as a word in the generators, with explicit endpoints
/// so that constant paths are representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorWord {
    pub source: usize,
    pub target: usize,
    pub letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn identity(point: usize) -> Self {
        GeneratorWord {
            source: point,
            target: point,
            letters: Vec::new(),
        }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Result<Self> {
        let first = letters
            .first()
            .ok_or_else(|| Error::InvalidWord("empty letter list has no endpoints".into()))?;
        let w = GeneratorWord {
            source: first.source(),
            target: letters.last().unwrap().target(),
            letters,
        };
        w.check_composable()?;
        Ok(w)
    }

    pub fn generator(g: Generator) -> Self {
        GeneratorWord {
            source: g.source(),
            target: g.target(),
            letters: vec![Letter::new(g, false)],
        }
    }

    /// Parses whitespace separated letters such as `C_1 D_1 C_1^-1`.
    /// The literal `1` or `e@p` denotes a constant path.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(p) = s.strip_prefix("e@") {
            let p = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad constant path `{s}`")))?;
            return Ok(GeneratorWord::identity(p));
        }
        if s.is_empty() || s == "1" {
            return Ok(GeneratorWord::identity(1));
        }
        let letters = s
            .split(|c: char| c.is_whitespace() || c == '*' || c == '.')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<Letter>>>()?;
        GeneratorWord::from_letters(letters)
    }

    pub fn is_constant(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.source == self.target
    }

    pub fn check_composable(&self) -> Result<()> {
        let mut at = self.source;
        for l in &self.letters {
            if l.source() != at {
                return Err(Error::InvalidWord(format!(
                    "letter {l} starts at p_{} but the path is at p_{at}",
                    l.source()
                )));
            }
            at = l.target();
        }
        if at != self.target {
            return Err(Error::InvalidWord(format!(
                "word ends at p_{at}, declared target p_{}",
                self.target
            )));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        GeneratorWord {
            source: self.target,
            target: self.source,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &GeneratorWord) -> Result<Self> {
        if self.target != other.source {
            return Err(Error::InvalidWord(format!(
                "cannot compose a path ending at p_{} with one starting at p_{}",
                self.target, other.source
            )));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(GeneratorWord {
            source: self.source,
            target: other.target,
            letters,
        })
    }

    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GeneratorWord {
            source: self.source,
            target: self.target,
            letters: out,
        }
    }

    pub fn contains(&self, g: Generator) -> bool {
        self.letters.iter().any(|l| l.generator == g)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e@{}", self.source);
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for GeneratorWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeneratorWord::parse(s)
    }
}
