use std::sync::Arc;

use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{generator_words, mix, surface_id, word_list, Job, SuiteConfig};
use crate::error::Result;
use crate::goldman::{
    bracket_extended, bracket_symbolic, normalize, DiagramTable, PathEntrySymbol, SymbolPoly,
};
use crate::lie::{GroupKind, Observable};
use crate::quasipoisson::{bracket_combinatorial, SurfaceFunction, SurfaceQp};
use crate::report::FixtureResult;
use crate::repspace::RepPoint;
use crate::surfaces::{
    algebraic_intersection, intersection_data, polygon_model, realize_pair, word_of_diagram, End,
    GeneratorWord, IntersectionData, PathDiagram, SurfaceSpec, Q,
};

/// Tolerance of the bracket formula against the bivector oracle.
const MAIN_TOL: f64 = 1e-8;

fn entry_fn(word: &GeneratorWord, i: usize, j: usize) -> SurfaceFunction {
    SurfaceFunction::holonomy(Observable::entry(i, j), word.clone())
}

fn sym(word: &GeneratorWord, i: usize, j: usize) -> SymbolPoly {
    SymbolPoly::symbol(PathEntrySymbol::new(word.clone(), i, j))
}

/// Index quadruples (i, j, k, l) for {α_ij, β_kl}.
fn entry_combos(n: usize) -> Vec<(usize, usize, usize, usize)> {
    let b = 1 % n;
    vec![(0, b, b, 0), (0, 0, b, b), (b, 0, 0, b)]
}

fn word_pairs(spec: &SurfaceSpec, seed: u64, stream: u64, extra: usize) -> Vec<(GeneratorWord, GeneratorWord)> {
    let gens = generator_words(spec);
    let mut pairs = Vec::new();
    for a in 0..gens.len() {
        for b in a..gens.len() {
            pairs.push((gens[a].clone(), gens[b].clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, stream, 31));
    let words = word_list(spec, 6, &mut rng);
    for _ in 0..extra {
        pairs.push((
            words.choose(&mut rng).unwrap().clone(),
            words.choose(&mut rng).unwrap().clone(),
        ));
    }
    pairs
}

pub fn goldman(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let ctx = cfg.ctx()?;
    let n = ctx.n;
    let tol = cfg.tolerance();
    let mut jobs: Vec<Job> = Vec::new();
    for (si, spec) in cfg.surfaces().into_iter().enumerate() {
        if spec.is_trivial() {
            continue;
        }
        let s = Arc::new(SurfaceQp::build(&spec, &ctx)?);
        let pm = Arc::new(polygon_model(&spec));
        let sid = surface_id(&spec);
        let (seed, points) = (cfg.seed, cfg.points());
        for (pi, (wa, wb)) in word_pairs(&spec, seed, si as u64, 3).into_iter().enumerate() {
            let (s, pm, sid) = (s.clone(), pm.clone(), sid.clone());
            jobs.push(Box::new(move || {
                let base = mix(seed, si as u64, pi as u64);
                let (_, _, ab) = realize_pair(&wa, &wb, &pm, base)?;
                let (_, _, ba) = realize_pair(&wb, &wa, &pm, base)?;
                let others: Vec<IntersectionData> = (1..3)
                    .map(|t| realize_pair(&wa, &wb, &pm, mix(base, 3, t)).map(|r| r.2))
                    .collect::<Result<_>>()?;
                let mut out = Vec::new();
                for (i, j, k, l) in entry_combos(n) {
                    let (a, b) = (PathEntrySymbol::new(wa.clone(), i, j), PathEntrySymbol::new(wb.clone(), k, l));
                    let id = format!("goldman/{sid}/{wa}|{wb}/{}{}{}{}", i + 1, j + 1, k + 1, l + 1);
                    let nf = bracket_symbolic(&spec, n, &a, &b, &ab)?;
                    let rev = bracket_symbolic(&spec, n, &b, &a, &ba)?;
                    out.push(FixtureResult::exact(
                        format!("{id}/antisymmetry"),
                        nf.add(&rev).is_zero(),
                        nf.to_sexpr(),
                    ));
                    for (t, d) in others.iter().enumerate() {
                        let other = bracket_symbolic(&spec, n, &a, &b, d)?;
                        out.push(FixtureResult::exact(
                            format!("{id}/homotopy{}", t + 1),
                            other == nf,
                            format!("i = {}", algebraic_intersection(d)),
                        ));
                    }
                    for p in 0..points {
                        let m = RepPoint::random(&ctx, spec, mix(base, 4, p as u64))?;
                        let num = s.bracket_numeric(&entry_fn(&wa, i, j), &entry_fn(&wb, k, l), &m)?;
                        out.push(FixtureResult::compare(format!("{id}/p{p}"), nf.evaluate(&m)?, num, tol));
                    }
                }
                Ok(out)
            }));
        }
        let (s2, pm2, sid2) = (s.clone(), pm.clone(), sid.clone());
        jobs.push(Box::new(move || relation_and_leibniz(&spec, &s2, &pm2, &sid2, n, seed, si as u64, tol)));
    }
    Ok(jobs)
}

/// A word β composable after α, not cancelling against it.
fn follower(spec: &SurfaceSpec, a: &GeneratorWord) -> Option<GeneratorWord> {
    generator_words(spec)
        .into_iter()
        .flat_map(|g| [g.clone(), g.inverse()])
        .find(|b| b.source == a.target && a.concat(b).map(|ab| ab.reduced().len() == 2).unwrap_or(false))
}

#[allow(clippy::too_many_arguments)]
fn relation_and_leibniz(
    spec: &SurfaceSpec,
    s: &SurfaceQp,
    pm: &crate::surfaces::PolygonModel,
    sid: &str,
    n: usize,
    seed: u64,
    stream: u64,
    tol: f64,
) -> Result<Vec<FixtureResult>> {
    let mut out = Vec::new();
    let gens = generator_words(spec);
    for a in &gens {
        let Some(b) = follower(spec, a) else { continue };
        let ab = a.concat(&b)?;
        for i in 0..n {
            for k in 0..n {
                let mut e = sym(&ab, i, k).scale(&-Q::one());
                for j in 0..n {
                    e = e.add(&sym(a, i, j).mul(&sym(&b, j, k)));
                }
                let nf = normalize(spec, n, &e)?;
                out.push(FixtureResult::exact(
                    format!("goldman/{sid}/relation/{a}|{b}/{}{}", i + 1, k + 1),
                    nf.is_zero(),
                    nf.to_sexpr(),
                ));
            }
        }
    }
    let a = gens[0].clone();
    let Some(b) = follower(spec, &a) else { return Ok(out) };
    let ab = a.concat(&b)?;
    let c = gens.last().unwrap().clone();
    let (i, k, gi, gj) = (0, 1 % n, 1 % n, 0);
    let product = (0..n).fold(SymbolPoly::zero(), |acc, j| acc.add(&sym(&a, i, j).mul(&sym(&b, j, k))));
    let single = sym(&ab, i, k);
    let g = sym(&c, gi, gj);
    let mut table = DiagramTable::new();
    table.register_all(&product, &g, pm, mix(seed, stream, 8))?;
    table.register_all(&single, &g, pm, mix(seed, stream, 9))?;
    let lhs = bracket_extended(spec, n, &product, &g, &table)?;
    let rhs = bracket_extended(spec, n, &single, &g, &table)?;
    let id = format!("goldman/{sid}/leibniz/({a})({b})|{c}");
    out.push(FixtureResult::exact(format!("{id}/normal-form"), lhs == rhs, lhs.to_sexpr()));
    for p in 0..20u64 {
        let m = RepPoint::random(s.ctx(), *spec, mix(seed, stream + 50, p))?;
        let num = s.bracket_numeric(&entry_fn(&ab, i, k), &entry_fn(&c, gi, gj), &m)?;
        let (x, y) = (lhs.evaluate(&m)?, rhs.evaluate(&m)?);
        out.push(FixtureResult::compare(format!("{id}/p{p}"), x, y, tol));
        out.push(FixtureResult::compare(format!("{id}/numeric/p{p}"), x, num, tol));
    }
    Ok(out)
}

pub fn simple_path(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let ctx = cfg.ctx()?;
    let n = ctx.n;
    let tol = cfg.tolerance();
    let mut jobs: Vec<Job> = Vec::new();
    for (si, spec) in cfg.surfaces().into_iter().enumerate() {
        if spec.is_trivial() {
            continue;
        }
        let s = Arc::new(SurfaceQp::build(&spec, &ctx)?);
        let pm = Arc::new(polygon_model(&spec));
        let sid = surface_id(&spec);
        let (seed, points) = (cfg.seed, cfg.points());
        for (gi, g) in generator_words(&spec).into_iter().enumerate() {
            let (s, pm, sid) = (s.clone(), pm.clone(), sid.clone());
            jobs.push(Box::new(move || {
                let base = mix(seed, si as u64, gi as u64);
                let (_, _, data) = realize_pair(&g, &g, &pm, base)?;
                let mut out = Vec::new();
                let mut symbolic_ok = true;
                let mut detail = String::from("all normal forms are 0");
                let mut worst = 0.0f64;
                let ms = (0..points)
                    .map(|p| RepPoint::random(&ctx, spec, mix(base, 1, p as u64)))
                    .collect::<Result<Vec<_>>>()?;
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            for l in 0..n {
                                if ctx.kind == GroupKind::GL {
                                    let a = PathEntrySymbol::new(g.clone(), i, j);
                                    let b = PathEntrySymbol::new(g.clone(), k, l);
                                    let nf = bracket_symbolic(&spec, n, &a, &b, &data)?;
                                    if !nf.is_zero() && symbolic_ok {
                                        symbolic_ok = false;
                                        detail = format!("{{{a},{b}}} = {}", nf.to_sexpr());
                                    }
                                }
                                for m in &ms {
                                    let v = s.bracket_numeric(&entry_fn(&g, i, j), &entry_fn(&g, k, l), m)?;
                                    worst = worst.max(v.abs());
                                }
                            }
                        }
                    }
                }
                if ctx.kind == GroupKind::GL {
                    out.push(FixtureResult::exact(format!("simple/{sid}/{g}/symbolic"), symbolic_ok, detail));
                }
                out.push(FixtureResult::bound(format!("simple/{sid}/{g}/numeric"), worst, tol));
                if g.is_closed() {
                    let (tr, tr2) = (Observable::trace(), Observable::PowerTrace { k: 2 });
                    let f = SurfaceFunction::holonomy(tr.clone(), g.clone());
                    let h = SurfaceFunction::holonomy(tr2.clone(), g.clone());
                    let mut inv = 0.0f64;
                    let mut agree = 0.0f64;
                    for m in &ms {
                        inv = inv.max(s.bracket_numeric(&f, &h, m)?.abs());
                        let (b, l) = (1 % n, 0);
                        let comb = bracket_combinatorial(&ctx, &Observable::entry(0, b), &g, &Observable::entry(b, l), &g, &data, m)?;
                        let num = s.bracket_numeric(&entry_fn(&g, 0, b), &entry_fn(&g, b, l), m)?;
                        agree = agree.max((comb.total - num).abs());
                    }
                    out.push(FixtureResult::bound(format!("simple/{sid}/{g}/invariant"), inv, tol));
                    out.push(
                        FixtureResult::bound(format!("simple/{sid}/{g}/formula-matches-oracle"), agree, MAIN_TOL)
                            .with_detail("closed path: entry self-brackets follow the bracket formula"),
                    );
                }
                Ok(out)
            }));
        }
    }
    Ok(jobs)
}

fn check_antisymmetry(ab: &IntersectionData, ba: &IntersectionData) -> std::result::Result<(), String> {
    if algebraic_intersection(ab) != -algebraic_intersection(ba) {
        return Err(format!(
            "i(a,b) = {}, i(b,a) = {}",
            algebraic_intersection(ab),
            algebraic_intersection(ba)
        ));
    }
    for i in End::BOTH {
        for j in End::BOTH {
            let (x, y) = (&ab.endpoint(i, j).sign, &ba.endpoint(j, i).sign);
            if x != &-y.clone() {
                return Err(format!("endpoint {i:?}/{j:?}: {x} vs {y}"));
            }
        }
    }
    if ab.crossings.len() != ba.crossings.len() {
        return Err("crossing counts differ".into());
    }
    for c in &ab.crossings {
        let matched = ba.crossings.iter().any(|d| d.point == c.point && d.sign == -c.sign);
        if !matched {
            return Err(format!("crossing at {:?} has no opposite partner", c.point.to_f64()));
        }
    }
    Ok(())
}

pub fn geometry(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let mut jobs: Vec<Job> = Vec::new();
    for (si, spec) in cfg.surfaces().into_iter().enumerate() {
        if spec.is_trivial() {
            continue;
        }
        let pm = Arc::new(polygon_model(&spec));
        let sid = surface_id(&spec);
        let (seed, realizations) = (cfg.seed, cfg.points().max(1));
        for (pi, (wa, wb)) in word_pairs(&spec, seed, si as u64, 6).into_iter().enumerate() {
            let (pm, sid) = (pm.clone(), sid.clone());
            jobs.push(Box::new(move || {
                let id = format!("geometry/{sid}/{wa}|{wb}");
                let mut out = Vec::new();
                let mut values: Vec<Q> = Vec::new();
                for t in 0..realizations {
                    let (da, db, ab) = realize_pair(&wa, &wb, &pm, mix(seed, si as u64, (pi * 16 + t) as u64))?;
                    let ba = intersection_data(&db, &da, &pm)?;
                    let anti = check_antisymmetry(&ab, &ba);
                    out.push(FixtureResult::exact(
                        format!("{id}/r{t}/antisymmetry"),
                        anti.is_ok(),
                        anti.err().unwrap_or_else(|| "signs negate under swap".into()),
                    ));
                    for (d, w) in [(&da, &wa), (&db, &wb)] {
                        let back = word_of_diagram(d, &pm)?;
                        let same = spec.canonical(&back) == spec.canonical(w);
                        let json = PathDiagram::from_json(&d.to_json())?;
                        out.push(FixtureResult::exact(
                            format!("{id}/r{t}/round-trip/{w}"),
                            same && json == *d && GeneratorWord::parse(&w.to_string())? == *w,
                            format!("diagram reads back as {back}"),
                        ));
                    }
                    values.push(algebraic_intersection(&ab));
                }
                let first = values[0].clone();
                out.push(FixtureResult::exact(
                    format!("{id}/homotopy"),
                    values.iter().all(|v| *v == first),
                    format!(
                        "i = [{}]",
                        values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
                    ),
                ));
                Ok(out)
            }));
        }
    }
    Ok(jobs)
}
