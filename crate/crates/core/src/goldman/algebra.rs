use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};

use super::normal::{word_matrix, NormalForm};
use crate::error::{Error, Result};
use crate::surfaces::{realize_pair, End, GeneratorWord, IntersectionData, PolygonModel, SurfaceSpec, Q};

/// α_{ij}: the (i,j) entry of the holonomy along α, 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathEntrySymbol {
    pub word: GeneratorWord,
    pub i: usize,
    pub j: usize,
}

impl PathEntrySymbol {
    pub fn new(word: GeneratorWord, i: usize, j: usize) -> Self {
        PathEntrySymbol { word, i, j }
    }

    pub fn normalize(&self, spec: &SurfaceSpec, n: usize) -> Result<NormalForm> {
        if self.i >= n || self.j >= n {
            return Err(Error::InvalidArgument(format!(
                "entry ({},{}) out of range for n = {n}",
                self.i + 1,
                self.j + 1
            )));
        }
        if self.word.is_constant() {
            let d = if self.i == self.j { Q::one() } else { Q::zero() };
            return Ok(NormalForm::constant(n, d));
        }
        Ok(word_matrix(spec, &self.word, n)?[self.i][self.j].clone())
    }
}

impl fmt::Display for PathEntrySymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.word, self.i + 1, self.j + 1)
    }
}

type SymbolMonomial = Vec<(PathEntrySymbol, u32)>;

/// Polynomial over ℚ in path-entry symbols.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymbolPoly {
    terms: BTreeMap<SymbolMonomial, Q>,
}

fn mono_mul(a: &SymbolMonomial, b: &SymbolMonomial) -> SymbolMonomial {
    let mut map: BTreeMap<PathEntrySymbol, u32> = a.iter().cloned().collect();
    for (s, e) in b {
        *map.entry(s.clone()).or_insert(0) += e;
    }
    map.into_iter().collect()
}

impl SymbolPoly {
    pub fn zero() -> Self {
        SymbolPoly::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut p = SymbolPoly::zero();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn symbol(s: PathEntrySymbol) -> Self {
        let mut p = SymbolPoly::zero();
        p.add_term(vec![(s, 1)], Q::one());
        p
    }

    pub fn add_term(&mut self, m: SymbolMonomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SymbolMonomial, &Q)> {
        self.terms.iter()
    }

    pub fn symbols(&self) -> Vec<PathEntrySymbol> {
        let mut v: Vec<PathEntrySymbol> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(s, _)| s.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn add(&self, other: &SymbolPoly) -> SymbolPoly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &SymbolPoly) -> SymbolPoly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> SymbolPoly {
        let mut r = SymbolPoly::zero();
        for (m, c) in &self.terms {
            r.add_term(m.clone(), c * s);
        }
        r
    }

    pub fn mul(&self, other: &SymbolPoly) -> SymbolPoly {
        let mut r = SymbolPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                r.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        r
    }
}

/// Expands every symbol through its word and collects the result in normal
/// form.
pub fn normalize(spec: &SurfaceSpec, n: usize, expr: &SymbolPoly) -> Result<NormalForm> {
    let mut cache = HashMap::new();
    normalize_cached(spec, n, expr, &mut cache)
}

fn symbol_nf(
    spec: &SurfaceSpec,
    n: usize,
    s: &PathEntrySymbol,
    cache: &mut HashMap<PathEntrySymbol, NormalForm>,
) -> Result<NormalForm> {
    if let Some(v) = cache.get(s) {
        return Ok(v.clone());
    }
    let v = s.normalize(spec, n)?;
    cache.insert(s.clone(), v.clone());
    Ok(v)
}

fn normalize_cached(
    spec: &SurfaceSpec,
    n: usize,
    expr: &SymbolPoly,
    cache: &mut HashMap<PathEntrySymbol, NormalForm>,
) -> Result<NormalForm> {
    let mut acc = NormalForm::zero(n);
    for (m, c) in expr.terms() {
        let mut t = NormalForm::constant(n, c.clone());
        for (s, e) in m {
            let v = symbol_nf(spec, n, s, cache)?;
            for _ in 0..*e {
                t = t.mul(&v);
            }
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

fn entry(spec: &SurfaceSpec, n: usize, w: &GeneratorWord, i: usize, j: usize) -> Result<NormalForm> {
    PathEntrySymbol::new(w.clone(), i, j).normalize(spec, n)
}

fn delta(a: usize, b: usize) -> bool {
    a == b
}

fn check_data(
    spec: &SurfaceSpec,
    a: &GeneratorWord,
    b: &GeneratorWord,
    data: &IntersectionData,
) -> Result<()> {
    for c in &data.crossings {
        let ra = spec.canonical(&c.alpha_split.prefix.concat(&c.alpha_split.suffix)?);
        let rb = spec.canonical(&c.beta_split.prefix.concat(&c.beta_split.suffix)?);
        if ra != spec.canonical(a) || rb != spec.canonical(b) {
            return Err(Error::InvalidArgument(
                "intersection data does not belong to these words".into(),
            ));
        }
    }
    Ok(())
}

/// {α_{ij}, β_{kl}} = Σ_q ε_q (α∗_qβ)_{il}(β∗_qα)_{kj}
///   + ε(α^∧,β^∧) α_{kj}β_{il} + ε(α^∨,β^∨) α_{il}β_{kj}
///   + δ_{il} ε(α^∧,β^∨)(βα)_{kj} + δ_{jk} ε(α^∨,β^∧)(αβ)_{il},
/// with ∧ the start and ∨ the end of a path.
pub fn bracket_symbolic(
    spec: &SurfaceSpec,
    n: usize,
    a: &PathEntrySymbol,
    b: &PathEntrySymbol,
    data: &IntersectionData,
) -> Result<NormalForm> {
    if a.word.is_constant() || b.word.is_constant() {
        return Ok(NormalForm::zero(n));
    }
    check_data(spec, &a.word, &b.word, data)?;
    let (i, j, k, l) = (a.i, a.j, b.i, b.j);
    let (wa, wb) = (&a.word, &b.word);
    let mut acc = NormalForm::zero(n);
    for c in &data.crossings {
        let t = entry(spec, n, &c.alpha_then_beta(), i, l)?
            .mul(&entry(spec, n, &c.beta_then_alpha(), k, j)?);
        acc = acc.add(&t.scale(&Q::from_integer(c.sign.into())));
    }
    let eps = |x: End, y: End| data.endpoint(x, y).sign.clone();
    let ss = eps(End::Start, End::Start);
    if !ss.is_zero() {
        let t = entry(spec, n, wa, k, j)?.mul(&entry(spec, n, wb, i, l)?);
        acc = acc.add(&t.scale(&ss));
    }
    let ee = eps(End::End, End::End);
    if !ee.is_zero() {
        let t = entry(spec, n, wa, i, l)?.mul(&entry(spec, n, wb, k, j)?);
        acc = acc.add(&t.scale(&ee));
    }
    let se = eps(End::Start, End::End);
    if !se.is_zero() && delta(i, l) {
        let t = entry(spec, n, &wb.concat(wa)?, k, j)?;
        acc = acc.add(&t.scale(&se));
    }
    let es = eps(End::End, End::Start);
    if !es.is_zero() && delta(j, k) {
        let t = entry(spec, n, &wa.concat(wb)?, i, l)?;
        acc = acc.add(&t.scale(&es));
    }
    Ok(acc)
}

/// Intersection data registered per ordered pair of words.
#[derive(Clone, Debug, Default)]
pub struct DiagramTable {
    data: HashMap<(GeneratorWord, GeneratorWord), IntersectionData>,
}

impl DiagramTable {
    pub fn new() -> Self {
        DiagramTable::default()
    }

    pub fn insert(&mut self, a: GeneratorWord, b: GeneratorWord, data: IntersectionData) {
        self.data.insert((a, b), data);
    }

    /// Realizes the pair in both orders and stores the results.
    pub fn register(
        &mut self,
        a: &GeneratorWord,
        b: &GeneratorWord,
        pm: &PolygonModel,
        seed: u64,
    ) -> Result<()> {
        for (x, y) in [(a, b), (b, a)] {
            if !self.data.contains_key(&(x.clone(), y.clone())) {
                let (_, _, d) = realize_pair(x, y, pm, seed)?;
                self.insert(x.clone(), y.clone(), d);
            }
        }
        Ok(())
    }

    /// Registers every pair of non-constant words occurring in F × G.
    pub fn register_all(
        &mut self,
        f: &SymbolPoly,
        g: &SymbolPoly,
        pm: &PolygonModel,
        seed: u64,
    ) -> Result<()> {
        for s in f.symbols() {
            for t in g.symbols() {
                if !s.word.is_constant() && !t.word.is_constant() {
                    self.register(&s.word, &t.word, pm, seed)?;
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, a: &GeneratorWord, b: &GeneratorWord) -> Result<&IntersectionData> {
        self.data
            .get(&(a.clone(), b.clone()))
            .ok_or_else(|| Error::InvalidArgument(format!("no diagram registered for ({a}, {b})")))
    }
}

/// Bilinear Leibniz extension of `bracket_symbolic`.
pub fn bracket_extended(
    spec: &SurfaceSpec,
    n: usize,
    f: &SymbolPoly,
    g: &SymbolPoly,
    table: &DiagramTable,
) -> Result<NormalForm> {
    let mut cache = HashMap::new();
    let mut pair_cache: HashMap<(PathEntrySymbol, PathEntrySymbol), NormalForm> = HashMap::new();
    let mut acc = NormalForm::zero(n);
    for (mf, cf) in f.terms() {
        for (mg, cg) in g.terms() {
            for (a, (s, es)) in mf.iter().enumerate() {
                for (b, (t, et)) in mg.iter().enumerate() {
                    if s.word.is_constant() || t.word.is_constant() {
                        continue;
                    }
                    let key = (s.clone(), t.clone());
                    let st = match pair_cache.get(&key) {
                        Some(v) => v.clone(),
                        None => {
                            let v = bracket_symbolic(spec, n, s, t, table.get(&s.word, &t.word)?)?;
                            pair_cache.insert(key, v.clone());
                            v
                        }
                    };
                    if st.is_zero() {
                        continue;
                    }
                    let mut rest = SymbolPoly::zero();
                    let mut mono = Vec::new();
                    for (c, (u, e)) in mf.iter().enumerate() {
                        let e = if c == a { e - 1 } else { *e };
                        if e > 0 {
                            mono.push((u.clone(), e));
                        }
                    }
                    for (c, (u, e)) in mg.iter().enumerate() {
                        let e = if c == b { e - 1 } else { *e };
                        if e > 0 {
                            mono.push((u.clone(), e));
                        }
                    }
                    let coeff = cf * cg * Q::from_integer((es * et).into());
                    rest.add_term(mono_mul(&mono, &Vec::new()), coeff);
                    let r = normalize_cached(spec, n, &rest, &mut cache)?;
                    acc = acc.add(&st.mul(&r));
                }
            }
        }
    }
    Ok(acc)
}
