use std::sync::Arc;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{mix, surface_id, Job, SuiteConfig};
use crate::cross_section::{
    bracket_cross, bracket_cross_numeric, moment_drift, project_to_cross_section, CompactContext,
};
use crate::error::Result;
use crate::lie::Observable;
use crate::quasipoisson::{SurfaceFunction, SurfaceQp};
use crate::report::FixtureResult;
use crate::repspace::RepPoint;
use crate::surfaces::{polygon_model, realize_pair, GeneratorWord, SurfaceSpec};

/// Tolerance of the operator identities for Θ_h.
pub const THETA_TOL: f64 = 1e-12;
/// Finite-difference tolerance for the moment drift along the cross-section.
pub const DRIFT_TOL: f64 = 1e-6;

fn word_pairs(spec: &SurfaceSpec) -> Vec<(GeneratorWord, GeneratorWord)> {
    let w = |s: &str| GeneratorWord::parse(s).expect("built-in word");
    let gens: Vec<GeneratorWord> = spec.generators().into_iter().map(GeneratorWord::generator).collect();
    let mut out = Vec::new();
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            out.push((gens[a].clone(), gens[b].clone()));
        }
    }
    if *spec == (SurfaceSpec { genus: 0, boundary_count: 2 }) {
        out.push((w("A_2 B_2"), w("A_2")));
    }
    if *spec == (SurfaceSpec { genus: 1, boundary_count: 1 }) {
        out.push((w("C_1 D_1"), w("D_1^-1 C_1")));
    }
    out
}

fn theta_jobs(seed: u64) -> Vec<Job> {
    let mut jobs: Vec<Job> = Vec::new();
    for n in [2usize, 3] {
        jobs.push(Box::new(move || {
            let cc = CompactContext::new(n);
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, 40 + n as u64, 0));
            let mut out = Vec::new();
            let d = cc.basis().len();
            for k in 0..50 {
                let h = cc.random_regular(&mut rng);
                let t = cc.theta(&h)?;
                let tt = cc.theta_transpose(&h)?;
                let sum = (&t + &tt - DMatrix::<f64>::identity(d, d) * 2.0).amax();
                let transpose = (&tt - t.transpose()).amax();
                out.push(FixtureResult::bound(format!("cross/theta/U({n})/h{k}/sum"), sum, THETA_TOL));
                out.push(FixtureResult::bound(format!("cross/theta/U({n})/h{k}/transpose"), transpose, THETA_TOL));
            }
            Ok(out)
        }));
    }
    jobs
}

pub fn cross_section(cfg: &SuiteConfig) -> Result<Vec<Job>> {
    let cc = CompactContext::from_algebra(&cfg.ctx()?)?;
    let tol = cfg.tolerance();
    let mut jobs = theta_jobs(cfg.seed);
    let n = cc.n();
    let b = 1 % n;
    for (si, spec) in cfg.surfaces().into_iter().enumerate() {
        if spec.is_trivial() {
            continue;
        }
        let s = Arc::new(SurfaceQp::build(&spec, &cc.ctx)?);
        let pm = Arc::new(polygon_model(&spec));
        let sid = surface_id(&spec);
        let (seed, points) = (cfg.seed, cfg.points());
        for (pi, (wa, wb)) in word_pairs(&spec).into_iter().enumerate() {
            let (s, pm, sid, cc) = (s.clone(), pm.clone(), sid.clone(), cc.clone());
            jobs.push(Box::new(move || {
                let (_, _, data) = realize_pair(&wa, &wb, &pm, mix(seed, si as u64, pi as u64))?;
                let obs = [
                    (Observable::entry(0, b), Observable::entry(b, b)),
                    (Observable::trace(), Observable::entry(b, 0)),
                ];
                let mut out = Vec::new();
                for k in 0..points {
                    let m = RepPoint::random(&cc.ctx, spec, mix(seed, 100 + si as u64, k as u64))?;
                    let (p, _) = project_to_cross_section(&cc, &m)?;
                    for (phi, psi) in &obs {
                        let f = SurfaceFunction::holonomy(phi.clone(), wa.clone());
                        let g = SurfaceFunction::holonomy(psi.clone(), wb.clone());
                        let comb = bracket_cross(&cc, phi, &wa, psi, &wb, &data, &p)?;
                        let num = bracket_cross_numeric(&cc, &s, &f, &g, &p)?;
                        out.push(FixtureResult::compare(
                            format!("cross/{sid}/{wa}|{wb}/{}|{}/p{k}", phi.describe(), psi.describe()),
                            comb.total,
                            num,
                            tol,
                        ));
                    }
                    let f = SurfaceFunction::holonomy(Observable::entry(0, b), wa.clone());
                    out.push(FixtureResult::bound(
                        format!("cross/{sid}/{wa}/moment-drift/p{k}"),
                        moment_drift(&cc, &s, &f, &p)?,
                        DRIFT_TOL,
                    ));
                }
                Ok(out)
            }));
        }
    }
    Ok(jobs)
}
