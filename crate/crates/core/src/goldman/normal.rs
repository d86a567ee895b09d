use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use super::poly::{adjugate_of_generator, det_of_generator, generic_matrix, Poly, Var};
use crate::error::{Error, Result};
use crate::repspace::RepPoint;
use crate::surfaces::{Generator, GeneratorWord, SurfaceSpec, Q};

/// Element of the localized ring ℚ[(X_L)_{ij}][det(X_L)⁻¹]: a numerator over
/// a product of determinant powers, with no determinant left to cancel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    n: usize,
    num: Poly,
    den: BTreeMap<Generator, u32>,
}

impl NormalForm {
    pub fn zero(n: usize) -> Self {
        NormalForm {
            n,
            num: Poly::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Q) -> Self {
        NormalForm {
            n,
            num: Poly::constant(c),
            den: BTreeMap::new(),
        }
    }

    pub fn one(n: usize) -> Self {
        NormalForm::constant(n, Q::one())
    }

    pub fn var(v: Var, n: usize) -> Self {
        NormalForm {
            n,
            num: Poly::var(v),
            den: BTreeMap::new(),
        }
    }

    /// num / ∏ det(X_L)^e, reduced.
    pub fn fraction(n: usize, num: Poly, den: BTreeMap<Generator, u32>) -> Self {
        let mut f = NormalForm { n, num, den };
        f.reduce();
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &BTreeMap<Generator, u32> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.as_constant()
        } else {
            None
        }
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let gens: Vec<Generator> = self.den.keys().copied().collect();
        for g in gens {
            let d = det_of_generator(g, self.n);
            while self.den[&g] > 0 {
                let (quot, rem) = self.num.div_rem(&d);
                if !rem.is_zero() {
                    break;
                }
                self.num = quot;
                *self.den.get_mut(&g).unwrap() -= 1;
            }
        }
        self.den.retain(|_, e| *e > 0);
    }

    fn lifted(&self, den: &BTreeMap<Generator, u32>) -> Poly {
        let mut p = self.num.clone();
        for (g, e) in den {
            let have = self.den.get(g).copied().unwrap_or(0);
            if *e > have {
                p = p.mul(&det_of_generator(*g, self.n).pow(e - have));
            }
        }
        p
    }

    fn check_n(&self, other: &NormalForm) {
        assert_eq!(self.n, other.n, "normal forms over different matrix sizes");
    }

    pub fn add(&self, other: &NormalForm) -> NormalForm {
        self.check_n(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let mut den = self.den.clone();
        for (g, e) in &other.den {
            let s = den.entry(*g).or_insert(0);
            *s = (*s).max(*e);
        }
        let num = self.lifted(&den).add(&other.lifted(&den));
        NormalForm::fraction(self.n, num, den)
    }

    pub fn neg(&self) -> NormalForm {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, other: &NormalForm) -> NormalForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Q) -> NormalForm {
        if s.is_zero() {
            return NormalForm::zero(self.n);
        }
        NormalForm {
            n: self.n,
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &NormalForm) -> NormalForm {
        self.check_n(other);
        if self.is_zero() || other.is_zero() {
            return NormalForm::zero(self.n);
        }
        let mut den = self.den.clone();
        for (g, e) in &other.den {
            *den.entry(*g).or_insert(0) += e;
        }
        NormalForm::fraction(self.n, self.num.mul(&other.num), den)
    }

    /// `(/ NUM DEN)` with DEN = `(* (^ (det L) e) ...)`.
    pub fn to_sexpr(&self) -> String {
        let den: Vec<String> = self
            .den
            .iter()
            .map(|(g, e)| format!("(^ (det {}) {e})", g.label()))
            .collect();
        format!("(/ {} (* {}))", self.num.to_sexpr(), den.join(" ")).replace("(* )", "(*)")
    }

    /// Exact value at a real point, converted to f64 after the final
    /// division.
    pub fn evaluate(&self, m: &RepPoint) -> Result<f64> {
        Ok(self.evaluate_exact(m)?.to_f64().unwrap_or(f64::NAN))
    }

    pub fn evaluate_exact(&self, m: &RepPoint) -> Result<Q> {
        if m.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "point has n = {}, normal form has n = {}",
                m.n(),
                self.n
            )));
        }
        let mut values: BTreeMap<Var, Q> = BTreeMap::new();
        let mut need: Vec<Generator> = self.den.keys().copied().collect();
        for (mono, _) in self.num.terms() {
            need.extend(mono.factors().iter().map(|(v, _)| v.generator));
        }
        need.sort();
        need.dedup();
        for g in need {
            let k = m.spec.coordinate_index(g).ok_or_else(|| {
                Error::InvalidWord(format!("no generator {g} on this surface"))
            })?;
            let x = &m.mats[k];
            for r in 0..self.n {
                for c in 0..self.n {
                    let z = x[(r, c)];
                    if z.im != 0.0 {
                        return Err(Error::NumericDomain(
                            "symbolic evaluation needs a real point".into(),
                        ));
                    }
                    let v = Q::from_float(z.re).ok_or_else(|| {
                        Error::NumericDomain(format!("non-finite entry {}", z.re))
                    })?;
                    values.insert(Var::new(g, r, c), v);
                }
            }
        }
        let value = |v: Var| values[&v].clone();
        let num = self.num.eval(&value);
        let mut den = Q::one();
        for (g, e) in &self.den {
            let d = det_of_generator(*g, self.n).eval(&value);
            if d.is_zero() {
                return Err(Error::Singular(0.0));
            }
            for _ in 0..*e {
                den *= &d;
            }
        }
        Ok(num / den)
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr())
    }
}

pub type NfMatrix = Vec<Vec<NormalForm>>;

fn nf_identity(n: usize) -> NfMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { NormalForm::one(n) } else { NormalForm::zero(n) })
                .collect()
        })
        .collect()
}

fn nf_mul(a: &NfMatrix, b: &NfMatrix) -> NfMatrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    (0..n).fold(NormalForm::zero(n), |acc, j| acc.add(&a[i][j].mul(&b[j][k])))
                })
                .collect()
        })
        .collect()
}

/// Matrix of X_L or X_L⁻¹ = adj(X_L)/det(X_L).
pub fn letter_matrix(g: Generator, inverse: bool, n: usize) -> NfMatrix {
    if !inverse {
        return generic_matrix(g, n)
            .into_iter()
            .map(|row| row.into_iter().map(|p| NormalForm::fraction(n, p, BTreeMap::new())).collect())
            .collect();
    }
    let den: BTreeMap<Generator, u32> = [(g, 1)].into_iter().collect();
    adjugate_of_generator(g, n)
        .into_iter()
        .map(|row| row.into_iter().map(|p| NormalForm::fraction(n, p, den.clone())).collect())
        .collect()
}

/// Entries of Hol_w as normal forms. The boundary generator β_1 is expanded
/// through the surface relation first.
pub fn word_matrix(spec: &SurfaceSpec, w: &GeneratorWord, n: usize) -> Result<NfMatrix> {
    spec.check_word(w)?;
    let w = spec.expand_boundary(w);
    let mut acc = nf_identity(n);
    for l in &w.letters {
        acc = nf_mul(&acc, &letter_matrix(l.generator, l.inverse, n));
    }
    Ok(acc)
}
