use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::surfaces::{Generator, Q};

/// Indeterminate (X_L)_{row,col}, 0-based. Ordered by generator, row, column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub generator: Generator,
    pub row: usize,
    pub col: usize,
}

impl Var {
    pub fn new(generator: Generator, row: usize, col: usize) -> Self {
        Var { generator, row, col }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(X {} {} {})", self.generator.label(), self.row + 1, self.col + 1)
    }
}

/// Power product of indeterminates, sorted by variable with positive
/// exponents. Ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<Var, u32> = self.0.iter().copied().collect();
        for (v, e) in &other.0 {
            *map.entry(*v).or_insert(0) += e;
        }
        Monomial(map.into_iter().collect())
    }

    /// self / other when other divides self.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut map: BTreeMap<Var, u32> = self.0.iter().copied().collect();
        for (v, e) in &other.0 {
            let have = map.get_mut(v)?;
            if *have < *e {
                return None;
            }
            *have -= e;
        }
        Some(Monomial(map.into_iter().filter(|(_, e)| *e > 0).collect()))
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        o => return o,
                    },
                },
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn var(v: Var) -> Self {
        let mut p = Poly::zero();
        p.add_term(Monomial::var(v), Q::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, s: &Q) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| acc.mul(self))
    }

    /// Division with remainder by a single divisor. A single polynomial is a
    /// Gröbner basis of its ideal, so the remainder vanishes iff the divisor
    /// divides self.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let (lm, lc) = d.leading().expect("nonzero divisor");
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rest = self.clone();
        let mut quot = Poly::zero();
        let mut rem = Poly::zero();
        while let Some((m, c)) = rest.leading() {
            let (m, c) = (m.clone(), c.clone());
            match m.div(&lm) {
                Some(t) => {
                    let tc = &c / &lc;
                    rest = rest.sub(&d.mul_term(&t, &tc));
                    quot.add_term(t, tc);
                }
                None => {
                    rest.add_term(m.clone(), -c.clone());
                    rem.add_term(m, c);
                }
            }
        }
        (quot, rem)
    }

    pub fn eval(&self, value: &dyn Fn(Var) -> Q) -> Q {
        let mut acc = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.factors() {
                let x = value(*v);
                for _ in 0..*e {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }

    /// `(+ (* c x ...) ...)` with terms in decreasing monomial order.
    pub fn to_sexpr(&self) -> String {
        let terms: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mut parts = vec![format!("{}", c)];
                for (v, e) in m.factors() {
                    if *e == 1 {
                        parts.push(v.to_string());
                    } else {
                        parts.push(format!("(^ {v} {e})"));
                    }
                }
                format!("(* {})", parts.join(" "))
            })
            .collect();
        format!("(+ {})", terms.join(" ")).replace("(+ )", "(+)")
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    match n {
        0 => Poly::one(),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly::zero();
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != c)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let t = m[0][c].mul(&det(&minor));
                acc = if c % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
            }
            acc
        }
    }
}

/// Matrix of indeterminates X_L.
pub fn generic_matrix(g: Generator, n: usize) -> Vec<Vec<Poly>> {
    (0..n)
        .map(|r| (0..n).map(|c| Poly::var(Var::new(g, r, c))).collect())
        .collect()
}

/// det(X_L).
pub fn det_of_generator(g: Generator, n: usize) -> Poly {
    det(&generic_matrix(g, n))
}

/// adj(X_L), so that X_L⁻¹ = adj(X_L) / det(X_L).
pub fn adjugate_of_generator(g: Generator, n: usize) -> Vec<Vec<Poly>> {
    let x = generic_matrix(g, n);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<Poly>> = (0..n)
                        .filter(|r| *r != j)
                        .map(|r| (0..n).filter(|c| *c != i).map(|c| x[r][c].clone()).collect())
                        .collect();
                    let d = det(&minor);
                    if (i + j) % 2 == 0 {
                        d
                    } else {
                        d.scale(&-Q::one())
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::q;

    fn x(r: usize, c: usize) -> Poly {
        Poly::var(Var::new(Generator::Alpha(2), r, c))
    }

    #[test]
    fn grlex_order() {
        let a = Monomial::var(Var::new(Generator::Alpha(2), 0, 0));
        let b = Monomial::var(Var::new(Generator::Alpha(2), 0, 1));
        assert!(a > b);
        assert!(b.mul(&b) > a);
        assert!(Monomial::one() < b);
    }

    #[test]
    fn division_is_exact_on_multiples() {
        let d = det_of_generator(Generator::Alpha(2), 2);
        let f = x(0, 0).add(&x(1, 1).scale(&q(3, 2))).add(&Poly::one());
        let (quot, rem) = f.mul(&d).div_rem(&d);
        assert!(rem.is_zero());
        assert_eq!(quot, f);
        let (_, rem) = f.div_rem(&d);
        assert!(!rem.is_zero());
    }

    #[test]
    fn adjugate_times_matrix_is_det() {
        for n in 1..=3 {
            let g = Generator::Beta(2);
            let x = generic_matrix(g, n);
            let a = adjugate_of_generator(g, n);
            let d = det_of_generator(g, n);
            for i in 0..n {
                for k in 0..n {
                    let s = (0..n).fold(Poly::zero(), |acc, j| acc.add(&x[i][j].mul(&a[j][k])));
                    assert_eq!(s, if i == k { d.clone() } else { Poly::zero() });
                }
            }
        }
    }
}
