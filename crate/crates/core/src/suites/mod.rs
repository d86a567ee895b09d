//! Verification suites: fixture grids checked against independent oracles.

mod compact;
mod numeric;
mod symbolic;

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lie::{AlgebraContext, GroupKind, Observable};
use crate::report::{FixtureResult, Report};
use crate::surfaces::{GeneratorWord, Letter, SurfaceSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    QpIdentity,
    Moment,
    MainTheorem,
    Splitting,
    Goldman,
    CrossSection,
    SimplePath,
    Classical,
    Geometry,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::QpIdentity,
        Suite::Moment,
        Suite::MainTheorem,
        Suite::Splitting,
        Suite::Goldman,
        Suite::CrossSection,
        Suite::SimplePath,
        Suite::Classical,
        Suite::Geometry,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::QpIdentity => "qp-identity",
            Suite::Moment => "moment",
            Suite::MainTheorem => "main-theorem",
            Suite::Splitting => "splitting",
            Suite::Goldman => "goldman",
            Suite::CrossSection => "cross-section",
            Suite::SimplePath => "simple-path",
            Suite::Classical => "classical",
            Suite::Geometry => "geometry",
        }
    }

    pub fn default_group(self) -> GroupKind {
        match self {
            Suite::CrossSection => GroupKind::U,
            _ => GroupKind::GL,
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            Suite::QpIdentity | Suite::Splitting => 1e-9,
            Suite::Moment => 1e-6,
            Suite::MainTheorem | Suite::Goldman | Suite::Classical => 1e-8,
            Suite::CrossSection => 1e-7,
            Suite::SimplePath => 1e-10,
            Suite::Geometry => 0.0,
        }
    }

    pub fn default_points(self) -> usize {
        match self {
            Suite::MainTheorem => 20,
            Suite::QpIdentity => 5,
            Suite::Moment | Suite::Splitting | Suite::CrossSection => 10,
            Suite::Goldman | Suite::SimplePath | Suite::Geometry => 3,
            Suite::Classical => 5,
        }
    }

    pub fn default_surfaces(self) -> Vec<SurfaceSpec> {
        let s = |g, b| SurfaceSpec { genus: g, boundary_count: b };
        match self {
            Suite::QpIdentity | Suite::CrossSection => vec![s(0, 2), s(1, 1)],
            Suite::Moment | Suite::Classical => vec![s(0, 2), s(1, 1), s(1, 2)],
            Suite::Splitting => vec![s(0, 3), s(1, 2), s(1, 3)],
            Suite::MainTheorem | Suite::Goldman | Suite::SimplePath | Suite::Geometry => {
                vec![s(0, 2), s(1, 1), s(0, 3), s(1, 2)]
            }
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite `{s}`")))
    }
}

/// Inputs of a suite run. `None` fields take the suite's defaults.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub group: Option<GroupKind>,
    pub n: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub points: Option<usize>,
    pub surfaces: Option<Vec<SurfaceSpec>>,
    /// Run the formula with a deliberately wrong sign convention.
    pub mutate: bool,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig {
            suite,
            group: None,
            n: 2,
            seed: 0,
            tol: None,
            points: None,
            surfaces: None,
            mutate: false,
        }
    }

    pub fn group(&self) -> GroupKind {
        self.group.unwrap_or(self.suite.default_group())
    }

    pub fn tolerance(&self) -> f64 {
        self.tol.unwrap_or(self.suite.default_tolerance())
    }

    pub fn points(&self) -> usize {
        self.points.unwrap_or(self.suite.default_points())
    }

    pub fn surfaces(&self) -> Vec<SurfaceSpec> {
        self.surfaces.clone().unwrap_or_else(|| self.suite.default_surfaces())
    }

    pub fn ctx(&self) -> Result<AlgebraContext> {
        AlgebraContext::new(self.group(), self.n)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if let Some(t) = self.tol {
            if !(t >= 0.0 && t.is_finite()) || (t == 0.0 && self.suite != Suite::Geometry) {
                return Err(Error::InvalidArgument(format!("tolerance must be positive, got {t}")));
            }
        }
        for s in self.surfaces() {
            s.validate()?;
        }
        if self.mutate && !matches!(self.suite, Suite::MainTheorem | Suite::QpIdentity) {
            return Err(Error::InvalidArgument(format!(
                "suite {} has no mutation switch",
                self.suite
            )));
        }
        let needs = |k: GroupKind| -> Result<()> {
            if self.group() != k {
                return Err(Error::InvalidArgument(format!(
                    "suite {} runs on group {k}",
                    self.suite
                )));
            }
            Ok(())
        };
        match self.suite {
            Suite::QpIdentity | Suite::Goldman => needs(GroupKind::GL),
            Suite::CrossSection => needs(GroupKind::U),
            _ => Ok(()),
        }
    }
}

pub(crate) type Job = Box<dyn FnOnce() -> Result<Vec<FixtureResult>> + Send>;

/// Worker pool sized by `SURFACE_QP_THREADS` when set.
fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("SURFACE_QP_THREADS") {
        let k: usize = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("SURFACE_QP_THREADS=`{v}` is not a count")))?;
        b = b.num_threads(k);
    }
    b.build().map_err(|e| Error::InvalidArgument(e.to_string()))
}

/// Runs the jobs in parallel and concatenates their results in job order.
pub(crate) fn run_jobs(jobs: Vec<Job>) -> Result<Vec<FixtureResult>> {
    let parts: Vec<Result<Vec<FixtureResult>>> =
        pool()?.install(|| jobs.into_par_iter().map(|j| j()).collect());
    let mut out = Vec::new();
    for p in parts {
        out.extend(p?);
    }
    Ok(out)
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    let jobs = match cfg.suite {
        Suite::QpIdentity => numeric::qp_identity(cfg)?,
        Suite::Moment => numeric::moment(cfg)?,
        Suite::MainTheorem => numeric::main_theorem(cfg)?,
        Suite::Splitting => numeric::splitting(cfg)?,
        Suite::Classical => numeric::classical(cfg)?,
        Suite::Goldman => symbolic::goldman(cfg)?,
        Suite::SimplePath => symbolic::simple_path(cfg)?,
        Suite::Geometry => symbolic::geometry(cfg)?,
        Suite::CrossSection => compact::cross_section(cfg)?,
    };
    if jobs.is_empty() {
        return Err(Error::InvalidArgument("empty fixture list".into()));
    }
    let fixtures = run_jobs(jobs)?;
    if fixtures.is_empty() {
        return Err(Error::InvalidArgument("empty fixture list".into()));
    }
    Ok(Report::new(
        cfg.suite.name(),
        &cfg.group().to_string(),
        cfg.n,
        cfg.seed,
        fixtures,
    ))
}

/// Derived seed for fixture `k` of stream `stream`.
pub(crate) fn mix(seed: u64, stream: u64, k: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0x9e37_79b9_7f4a_7c15))
        .wrapping_add(k.wrapping_mul(0xbf58_476d_1ce4_e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn surface_id(s: &SurfaceSpec) -> String {
    format!("S({},{})", s.genus, s.boundary_count)
}

pub(crate) fn generator_words(spec: &SurfaceSpec) -> Vec<GeneratorWord> {
    spec.generators().into_iter().map(GeneratorWord::generator).collect()
}

fn all_letters(spec: &SurfaceSpec) -> Vec<Letter> {
    spec.generators()
        .into_iter()
        .flat_map(|g| [Letter::new(g, false), Letter::new(g, true)])
        .collect()
}

/// A random freely reduced composable word with exactly `len` letters.
pub(crate) fn random_word<R: Rng>(spec: &SurfaceSpec, len: usize, rng: &mut R) -> GeneratorWord {
    let letters = all_letters(spec);
    loop {
        let mut w: Vec<Letter> = vec![*letters.choose(rng).unwrap()];
        while w.len() < len {
            let last = *w.last().unwrap();
            let next: Vec<Letter> = letters
                .iter()
                .copied()
                .filter(|l| l.source() == last.target() && *l != last.inv())
                .collect();
            match next.choose(rng) {
                Some(l) => w.push(*l),
                None => break,
            }
        }
        if w.len() == len {
            return GeneratorWord::from_letters(w).expect("composable by construction");
        }
    }
}

/// Generators plus random words of lengths 2 and 3.
pub(crate) fn word_list<R: Rng>(spec: &SurfaceSpec, extra: usize, rng: &mut R) -> Vec<GeneratorWord> {
    let mut out = generator_words(spec);
    for k in 0..extra {
        let w = random_word(spec, 2 + k % 2, rng);
        if !out.contains(&w) {
            out.push(w);
        }
    }
    out
}

/// Entry and trace observable pairs valid for n × n matrices.
pub(crate) fn observable_pairs(n: usize) -> Vec<(Observable, Observable)> {
    let (a, b) = (0, 1 % n);
    vec![
        (Observable::entry(a, b), Observable::entry(b, a)),
        (Observable::trace(), Observable::entry(b, b)),
        (Observable::trace(), Observable::trace()),
    ]
}

pub(crate) fn generic_observable(n: usize) -> Observable {
    let b = 1 % n;
    Observable::generic("sin(g01)+g00*g11", move |g| {
        g[(0, b)].re.sin() + g[(0, 0)].re * g[(b, b)].re
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn random_words_are_reduced_and_composable() {
        let spec = SurfaceSpec::new(1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for len in 1..5 {
            for _ in 0..20 {
                let w = random_word(&spec, len, &mut rng);
                assert_eq!(w.len(), len);
                assert_eq!(w.reduced(), w);
                spec.check_word(&w).unwrap();
            }
        }
    }

    #[test]
    fn mixed_seeds_differ() {
        assert_ne!(mix(0, 0, 1), mix(0, 0, 2));
        assert_ne!(mix(0, 1, 0), mix(1, 0, 0));
        assert_eq!(mix(5, 6, 7), mix(5, 6, 7));
    }

    #[test]
    fn group_mismatch_is_an_input_error() {
        let mut cfg = SuiteConfig::new(Suite::CrossSection);
        cfg.group = Some(GroupKind::GL);
        assert!(matches!(run_suite(&cfg), Err(Error::InvalidArgument(_))));
        let mut cfg = SuiteConfig::new(Suite::QpIdentity);
        cfg.surfaces = Some(Vec::new());
        assert!(matches!(run_suite(&cfg), Err(Error::InvalidArgument(_))));
    }
}
