use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{generic_observable, mix, observable_pairs, surface_id, word_list, Job, SuiteConfig};
use crate::error::{Error, Result};
use crate::lie::Observable;
use crate::quasipoisson::{
    bracket_combinatorial, bracket_combinatorial_with, moment_residual, qp_identity_residual, Assoc,
    FormulaOptions, Reordering, SurfaceFunction, SurfaceQp, WedgeTerm,
};
use crate::report::FixtureResult;
use crate::repspace::{GroupAction, RepPoint};
use crate::surfaces::{
    based_loop_from_word, canonical_pieces, intersection_data, polygon_model, realize_pair,
    GeneratorWord, IntersectionData, PieceKind, PolygonModel, Stubs, SurfaceSpec, Q,
};

/// Residual above which the perturbed bivector counts as detected.
pub const MUTATION_THRESHOLD: f64 = 1e-3;
/// Tolerance for brackets involving finite-difference gradients.
pub const GENERIC_TOL: f64 = 1e-6;
/// Tolerance for the endpoint subtotal of invariant observables.
pub const ENDPOINT_TOL: f64 = 1e-10;

fn w(s: &str) -> GeneratorWord {
    GeneratorWord::parse(s).expect("built-in word")
}

fn hol(obs: &Observable, word: &GeneratorWord) -> SurfaceFunction {
    SurfaceFunction::holonomy(obs.clone(), word.clone())
}

pub fn qp_identity(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let ctx = cfg.ctx()?;
    let tol = cfg.tolerance();
    let mut jobs: Vec<Job> = Vec::new();
    for (si, spec) in cfg.surfaces().into_iter().enumerate() {
        let s = SurfaceQp::build(&spec, &ctx)?;
        if s.h.bivector.terms.is_empty() {
            continue;
        }
        let mut perturbed = s.h.clone();
        perturbed.bivector.terms[0] = WedgeTerm {
            coeff: perturbed.bivector.terms[0].coeff * 1.01,
            ..perturbed.bivector.terms[0]
        };
        let used = if cfg.mutate { perturbed.clone() } else { s.h.clone() };
        let sid = surface_id(&spec);
        let (points, seed) = (cfg.points(), cfg.seed);
        let layout = s.layout.clone();
        jobs.push(Box::new(move || {
            let mut out = Vec::new();
            for k in 0..points {
                let m = RepPoint::random(&ctx, spec, mix(seed, si as u64, k as u64))?;
                let x = layout.to_chart(&m)?;
                let r = qp_identity_residual(&used, &x)?;
                out.push(FixtureResult::bound(format!("qp/{sid}/p{k}"), r, tol));
            }
            let m = RepPoint::random(&ctx, spec, mix(seed, si as u64, 1000))?;
            let r = qp_identity_residual(&perturbed, &layout.to_chart(&m)?)?;
            out.push(FixtureResult::exceeds(format!("qp/{sid}/perturbed"), r, MUTATION_THRESHOLD));
            Ok(out)
        }));
    }
    Ok(jobs)
}

pub fn moment(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let ctx = cfg.ctx()?;
    let tol = cfg.tolerance();
    let mut jobs: Vec<Job> = Vec::new();
    for (si, spec) in cfg.surfaces().into_iter().enumerate() {
        if spec.is_trivial() {
            continue;
        }
        let s = SurfaceQp::build(&spec, &ctx)?;
        let mut rng = ChaCha8Rng::seed_from_u64(mix(cfg.seed, si as u64, 77));
        let words = word_list(&spec, 4, &mut rng);
        let b = 1 % ctx.n;
        let funcs = vec![
            hol(&Observable::entry(0, b), &words[0]),
            hol(&Observable::trace(), words.last().unwrap()),
        ];
        let sid = surface_id(&spec);
        for k in 0..cfg.points() {
            let (s, funcs, sid) = (s.clone(), funcs.clone(), sid.clone());
            let seed = mix(cfg.seed, si as u64, k as u64);
            jobs.push(Box::new(move || {
                let m = RepPoint::random(&ctx, spec, seed)?;
                let x = s.layout.to_chart(&m)?;
                let mut out = Vec::new();
                for i in 1..=spec.boundary_count {
                    for f in &funcs {
                        let cf = s.chart_function(f)?;
                        let r = moment_residual(&s.h, i - 1, &cf, &x)?;
                        out.push(
                            FixtureResult::bound(format!("moment/{sid}/mu{i}/{}/p{k}", f.describe()), r.residual_fd, tol)
                                .with_detail(format!("analytic residual {:e}", r.residual_exact)),
                        );
                    }
                }
                Ok(out)
            }));
        }
    }
    Ok(jobs)
}

fn main_pairs(spec: &SurfaceSpec, seed: u64, stream: u64) -> Vec<(GeneratorWord, GeneratorWord)> {
    let gens = super::generator_words(spec);
    let mut pairs = Vec::new();
    for a in 0..gens.len() {
        for b in a..gens.len() {
            pairs.push((gens[a].clone(), gens[b].clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, stream, 99));
    let words = word_list(spec, 8, &mut rng);
    for _ in 0..10 {
        let a = words.choose(&mut rng).unwrap().clone();
        let b = words.choose(&mut rng).unwrap().clone();
        pairs.push((a, b));
    }
    pairs
}

pub fn main_theorem(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let ctx = cfg.ctx()?;
    let tol = cfg.tolerance();
    let gtol = tol.max(GENERIC_TOL);
    let opts = FormulaOptions {
        flip_crossing_sign: cfg.mutate,
    };
    let mut jobs: Vec<Job> = Vec::new();
    for (si, spec) in cfg.surfaces().into_iter().enumerate() {
        if spec.is_trivial() {
            continue;
        }
        let s = Arc::new(SurfaceQp::build(&spec, &ctx)?);
        let pm = Arc::new(polygon_model(&spec));
        let sid = surface_id(&spec);
        for (pi, (wa, wb)) in main_pairs(&spec, cfg.seed, si as u64).into_iter().enumerate() {
            let (s, pm, sid) = (s.clone(), pm.clone(), sid.clone());
            let (seed, points) = (cfg.seed, cfg.points());
            jobs.push(Box::new(move || {
                let (_, _, data) = realize_pair(&wa, &wb, &pm, mix(seed, si as u64, pi as u64))?;
                let mut obs: Vec<(Observable, Observable, f64)> =
                    observable_pairs(ctx.n).into_iter().map(|(a, b)| (a, b, tol)).collect();
                if pi < 2 {
                    obs.push((generic_observable(ctx.n), Observable::entry(0, 0), gtol));
                }
                let mut out = Vec::new();
                for k in 0..points {
                    let m = RepPoint::random(&ctx, spec, mix(seed, 1000 + si as u64, k as u64))?;
                    for (phi, psi, t) in &obs {
                        let comb = bracket_combinatorial_with(&ctx, phi, &wa, psi, &wb, &data, &m, opts)?;
                        let num = s.bracket_numeric(&hol(phi, &wa), &hol(psi, &wb), &m)?;
                        out.push(FixtureResult::compare(
                            format!(
                                "main/{sid}/{wa}|{wb}/{}|{}/p{k}",
                                phi.describe(),
                                psi.describe()
                            ),
                            comb.total,
                            num,
                            *t,
                        ));
                    }
                }
                Ok(out)
            }));
        }
    }
    Ok(jobs)
}

/// Alternative (order, association) choices compared against the canonical
/// left-associated splitting.
fn splitting_variants(spec: &SurfaceSpec) -> Vec<(Vec<PieceKind>, Assoc)> {
    let canon = canonical_pieces(spec);
    let mut rev = canon.clone();
    rev.reverse();
    let mut out = vec![(rev.clone(), Assoc::Left), (canon.clone(), Assoc::Right)];
    if canon.len() >= 3 {
        out.push((rev, Assoc::Right));
        let mut rot = canon.clone();
        rot.rotate_left(1);
        out.push((rot, Assoc::Left));
    }
    out
}

pub fn splitting(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let ctx = cfg.ctx()?;
    let tol = cfg.tolerance();
    let mut jobs: Vec<Job> = Vec::new();
    for (si, spec) in cfg.surfaces().into_iter().enumerate() {
        if canonical_pieces(&spec).len() < 2 {
            continue;
        }
        let base = Arc::new(SurfaceQp::build(&spec, &ctx)?);
        let sid = surface_id(&spec);
        for (vi, (order, assoc)) in splitting_variants(&spec).into_iter().enumerate() {
            let other = SurfaceQp::build_with(&spec, &ctx, &order, assoc)?;
            let r = Reordering::new(&spec, &order)?;
            let (base, sid) = (base.clone(), sid.clone());
            let (seed, pairs) = (cfg.seed, cfg.points());
            let label = format!(
                "{}{:?}",
                order.iter().map(piece_label).collect::<Vec<_>>().join(""),
                assoc
            );
            jobs.push(Box::new(move || {
                let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, si as u64, 500 + vi as u64));
                let words = word_list(&spec, 10, &mut rng);
                let obs = observable_pairs(ctx.n);
                let mut out = Vec::new();
                for k in 0..pairs {
                    let wa = words.choose(&mut rng).unwrap().clone();
                    let wb = words.choose(&mut rng).unwrap().clone();
                    let (phi, psi) = obs.choose(&mut rng).unwrap().clone();
                    let m = RepPoint::random(&ctx, spec, rng.gen())?;
                    let x = base.bracket_numeric(&hol(&phi, &wa), &hol(&psi, &wb), &m)?;
                    let m2 = r.point(&m)?;
                    let y = other.bracket_numeric(&hol(&phi, &r.word(&wa)), &hol(&psi, &r.word(&wb)), &m2)?;
                    out.push(FixtureResult::compare(
                        format!("split/{sid}/{label}/{wa}|{wb}/{}|{}/f{k}", phi.describe(), psi.describe()),
                        x,
                        y,
                        tol,
                    ));
                }
                Ok(out)
            }));
        }
    }
    Ok(jobs)
}

fn piece_label(p: &PieceKind) -> String {
    match p {
        PieceKind::Annulus(i) => format!("A{i}"),
        PieceKind::Torus(j) => format!("T{j}"),
    }
}

/// Loops based at p_1 built from each piece's boundary loop and handle
/// generators.
pub fn closed_words(spec: &SurfaceSpec) -> Vec<GeneratorWord> {
    let mut out = Vec::new();
    for p in canonical_pieces(spec) {
        match p {
            PieceKind::Annulus(i) => {
                out.push(w(&format!("A_{i} B_{i} A_{i}^-1")));
                out.push(w(&format!("A_{i} B_{i} B_{i} A_{i}^-1")));
            }
            PieceKind::Torus(j) => {
                out.push(w(&format!("C_{j}")));
                out.push(w(&format!("D_{j}")));
                out.push(w(&format!("C_{j} D_{j}^-1")));
            }
        }
    }
    if out.len() >= 2 {
        let prod = out[0].concat(out.last().unwrap()).expect("loops at p_1");
        out.push(prod);
    }
    out
}

fn invariant_observables() -> [Observable; 2] {
    [Observable::trace(), Observable::PowerTrace { k: 2 }]
}

/// Diagrams of two loops at p_1 leaving and returning through disjoint
/// angular sectors of the same corner.
fn based_pair(
    wa: &GeneratorWord,
    wb: &GeneratorWord,
    pm: &PolygonModel,
    seed: u64,
) -> Result<IntersectionData> {
    let corner = pm
        .corner_point
        .iter()
        .position(|&p| p == 1)
        .ok_or_else(|| Error::InvalidSurface("no corner at p_1".into()))?;
    let sa = Stubs {
        corner,
        start: Q::new(1.into(), 5.into()),
        end: Q::new(3.into(), 10.into()),
    };
    let sb = Stubs {
        corner,
        start: Q::new(3.into(), 5.into()),
        end: Q::new(7.into(), 10.into()),
    };
    let mut last = None;
    for attempt in 0..32u64 {
        let s = mix(seed, 7, attempt);
        let da = based_loop_from_word(wa, pm, s, sa.clone())?;
        let db = based_loop_from_word(wb, pm, s + 1, sb.clone())?;
        match intersection_data(&da, &db, pm) {
            Ok(d) => return Ok(d),
            Err(e @ Error::NotGeneralPosition(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// {f, {g, h}} + {g, {h, f}} + {h, {f, g}} with the inner brackets
/// differentiated numerically.
pub fn jacobi_residual(
    s: &Arc<SurfaceQp>,
    f: &SurfaceFunction,
    g: &SurfaceFunction,
    h: &SurfaceFunction,
    m: &RepPoint,
) -> Result<f64> {
    let inner = |a: &SurfaceFunction, b: &SurfaceFunction| -> SurfaceFunction {
        let (s, a, b) = (s.clone(), a.clone(), b.clone());
        SurfaceFunction::Generic {
            name: format!("{{{},{}}}", a.describe(), b.describe()),
            f: Arc::new(move |m: &RepPoint| s.bracket_numeric(&a, &b, m)),
        }
    };
    Ok(s.bracket_numeric(f, &inner(g, h), m)?
        + s.bracket_numeric(g, &inner(h, f), m)?
        + s.bracket_numeric(h, &inner(f, g), m)?)
}

pub fn classical(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let ctx = cfg.ctx()?;
    let tol = cfg.tolerance();
    let mut jobs: Vec<Job> = Vec::new();
    for (si, spec) in cfg.surfaces().into_iter().enumerate() {
        let loops = closed_words(&spec);
        if loops.len() < 2 {
            continue;
        }
        let s = Arc::new(SurfaceQp::build(&spec, &ctx)?);
        let pm = Arc::new(polygon_model(&spec));
        let sid = surface_id(&spec);
        let [tr, tr2] = invariant_observables();
        let funcs: Vec<SurfaceFunction> = loops
            .iter()
            .enumerate()
            .map(|(k, l)| hol(if k % 2 == 0 { &tr } else { &tr2 }, l))
            .collect();
        let (seed, points) = (cfg.seed, cfg.points());
        for a in 0..loops.len() {
            for b in a + 1..loops.len() {
                let (s, pm, sid) = (s.clone(), pm.clone(), sid.clone());
                let (wa, wb) = (loops[a].clone(), loops[b].clone());
                let (f, g) = (funcs[a].clone(), funcs[b].clone());
                let (phi, psi) = (observable_of(&f), observable_of(&g));
                let stream = 100 * si as u64 + (a * loops.len() + b) as u64;
                jobs.push(Box::new(move || {
                    let data = based_pair(&wa, &wb, &pm, mix(seed, stream, 0))?;
                    let mut out = Vec::new();
                    for k in 0..points {
                        let m = RepPoint::random(&ctx, spec, mix(seed, stream, 1 + k as u64))?;
                        let base = s.bracket_numeric(&f, &g, &m)?;
                        let id = format!("classical/{sid}/{wa}|{wb}/p{k}");
                        let mut worst = 0.0f64;
                        for t in 0..10 {
                            let act = GroupAction::random(&ctx, spec.boundary_count, mix(seed, stream, 100 + 10 * k as u64 + t))?;
                            let moved = s.bracket_numeric(&f, &g, &m.act(&act)?)?;
                            worst = worst.max((moved - base).abs());
                        }
                        out.push(FixtureResult::bound(format!("{id}/invariance"), worst, tol));
                        let parts = bracket_combinatorial(&ctx, &phi, &wa, &psi, &wb, &data, &m)?;
                        out.push(FixtureResult::bound(format!("{id}/endpoint-subtotal"), parts.endpoint.abs(), ENDPOINT_TOL));
                        out.push(FixtureResult::compare(format!("{id}/crossing-only"), parts.crossing, base, tol));
                    }
                    Ok(out)
                }));
            }
        }
        for a in 0..loops.len() {
            for b in a + 1..loops.len() {
                for c in b + 1..loops.len() {
                    let (s, sid) = (s.clone(), sid.clone());
                    let (f, g, h) = (funcs[a].clone(), funcs[b].clone(), funcs[c].clone());
                    let id = format!("classical/{sid}/jacobi/{}|{}|{}", loops[a], loops[b], loops[c]);
                    let pseed = mix(seed, 5000 + si as u64, (a * 100 + b * 10 + c) as u64);
                    jobs.push(Box::new(move || {
                        let m = RepPoint::random(&ctx, spec, pseed)?;
                        let r = jacobi_residual(&s, &f, &g, &h, &m)?;
                        Ok(vec![FixtureResult::bound(id, r.abs(), GENERIC_TOL)])
                    }));
                }
            }
        }
    }
    Ok(jobs)
}

fn observable_of(f: &SurfaceFunction) -> Observable {
    match f {
        SurfaceFunction::Holonomy { obs, .. } => obs.clone(),
        SurfaceFunction::Generic { .. } => unreachable!("holonomy functions only"),
    }
}
