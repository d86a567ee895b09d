use serde::{Deserialize, Serialize};

use super::word::{Generator, GeneratorWord, Letter};
use crate::error::{Error, Result};

/// The surface of genus `genus` with `boundary_count` boundary components,
/// one marked point on each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub genus: usize,
    pub boundary_count: usize,
}

impl SurfaceSpec {
    pub fn new(genus: usize, boundary_count: usize) -> Result<Self> {
        let s = SurfaceSpec {
            genus,
            boundary_count,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.boundary_count == 0 {
            return Err(Error::InvalidSurface(
                "at least one boundary component is required".into(),
            ));
        }
        Ok(())
    }

    /// The disk: its groupoid has no generators.
    pub fn is_trivial(&self) -> bool {
        self.genus == 0 && self.boundary_count == 1
    }

    /// Generators carrying coordinates, in coordinate order:
    /// α_2, β_2, …, α_b, β_b, γ_1, δ_1, …, γ_g, δ_g.
    pub fn generators(&self) -> Vec<Generator> {
        let mut out = Vec::with_capacity(self.coordinate_count());
        for i in 2..=self.boundary_count {
            out.push(Generator::Alpha(i));
            out.push(Generator::Beta(i));
        }
        for j in 1..=self.genus {
            out.push(Generator::Gamma(j));
            out.push(Generator::Delta(j));
        }
        out
    }

    pub fn coordinate_count(&self) -> usize {
        2 * (self.boundary_count - 1) + 2 * self.genus
    }

    pub fn coordinate_index(&self, g: Generator) -> Option<usize> {
        let b = self.boundary_count;
        match g {
            Generator::Alpha(i) if (2..=b).contains(&i) => Some(2 * (i - 2)),
            Generator::Beta(i) if (2..=b).contains(&i) => Some(2 * (i - 2) + 1),
            Generator::Gamma(j) if (1..=self.genus).contains(&j) => {
                Some(2 * (b - 1) + 2 * (j - 1))
            }
            Generator::Delta(j) if (1..=self.genus).contains(&j) => {
                Some(2 * (b - 1) + 2 * (j - 1) + 1)
            }
            _ => None,
        }
    }

    pub fn has_generator(&self, g: Generator) -> bool {
        g == Generator::Beta(1) || self.coordinate_index(g).is_some()
    }

    /// The letters of u_2v_2u_2⁻¹⋯[a_g,b_g], whose holonomy is μ_1 and
    /// whose inverse is β_1.
    pub fn boundary_product(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for i in 2..=self.boundary_count {
            out.push(Letter::new(Generator::Alpha(i), false));
            out.push(Letter::new(Generator::Beta(i), false));
            out.push(Letter::new(Generator::Alpha(i), true));
        }
        for j in 1..=self.genus {
            out.push(Letter::new(Generator::Gamma(j), false));
            out.push(Letter::new(Generator::Delta(j), false));
            out.push(Letter::new(Generator::Gamma(j), true));
            out.push(Letter::new(Generator::Delta(j), true));
        }
        out
    }

    /// Word for μ_i: the boundary product for i = 1, β_i⁻¹ otherwise.
    pub fn moment_word(&self, i: usize) -> Result<GeneratorWord> {
        if i == 0 || i > self.boundary_count {
            return Err(Error::InvalidArgument(format!("no marked point p_{i}")));
        }
        if i == 1 {
            let letters = self.boundary_product();
            if letters.is_empty() {
                return Ok(GeneratorWord::identity(1));
            }
            return GeneratorWord::from_letters(letters);
        }
        GeneratorWord::from_letters(vec![Letter::new(Generator::Beta(i), true)])
    }

    pub fn check_word(&self, w: &GeneratorWord) -> Result<()> {
        for p in [w.source, w.target] {
            if p == 0 || p > self.boundary_count {
                return Err(Error::InvalidWord(format!(
                    "marked point p_{p} does not exist on this surface"
                )));
            }
        }
        for l in &w.letters {
            if !self.has_generator(l.generator) {
                return Err(Error::InvalidWord(format!(
                    "generator {} does not exist on this surface",
                    l.generator
                )));
            }
        }
        w.check_composable()
    }

    /// Replaces every β_1 letter by its expression in the coordinate generators.
    pub fn expand_boundary(&self, w: &GeneratorWord) -> GeneratorWord {
        let prod = self.boundary_product();
        let mut letters = Vec::with_capacity(w.letters.len());
        for &l in &w.letters {
            if l.generator == Generator::Beta(1) {
                if l.inverse {
                    letters.extend_from_slice(&prod);
                } else {
                    letters.extend(prod.iter().rev().map(|x| x.inv()));
                }
            } else {
                letters.push(l);
            }
        }
        GeneratorWord {
            source: w.source,
            target: w.target,
            letters,
        }
    }

    /// Canonical form: β_1 expanded, then freely reduced.
    pub fn canonical(&self, w: &GeneratorWord) -> GeneratorWord {
        self.expand_boundary(w).reduced()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinate_order() {
        let s = SurfaceSpec::new(1, 2).unwrap();
        assert_eq!(
            s.generators(),
            vec![
                Generator::Alpha(2),
                Generator::Beta(2),
                Generator::Gamma(1),
                Generator::Delta(1)
            ]
        );
        for (k, g) in s.generators().into_iter().enumerate() {
            assert_eq!(s.coordinate_index(g), Some(k));
        }
    }

    #[test]
    fn beta_one_expansion() {
        let s = SurfaceSpec::new(1, 1).unwrap();
        let w = GeneratorWord::parse("B_1").unwrap();
        assert_eq!(s.canonical(&w).to_string(), "D_1 C_1 D_1⁻¹ C_1⁻¹");
        let mu = s.moment_word(1).unwrap();
        assert!(s.canonical(&mu.concat(&w).unwrap()).is_constant());
    }

    #[test]
    fn zero_boundary_rejected() {
        assert!(SurfaceSpec::new(2, 0).is_err());
        assert!(SurfaceSpec::new(0, 1).unwrap().is_trivial());
    }
}
