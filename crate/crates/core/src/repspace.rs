//! Points of the representation space as tuples of group elements.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{identity, inverse, AlgebraContext, GroupKind, Mat, Observable};
use crate::surfaces::{Generator, GeneratorWord, SurfaceSpec};

/// Coordinates (u_2, v_2, …, a_1, b_1, …) in the order of
/// [`SurfaceSpec::generators`].
#[derive(Clone, Debug, PartialEq)]
pub struct RepPoint {
    pub spec: SurfaceSpec,
    pub mats: Vec<Mat>,
}

/// (g_1, …, g_b) acting by g_s m(α) g_t⁻¹ on a path from p_s to p_t.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAction {
    pub elems: Vec<Mat>,
}

impl GroupAction {
    pub fn identity(ctx: &AlgebraContext, b: usize) -> Self {
        GroupAction {
            elems: vec![identity(ctx.n); b],
        }
    }

    pub fn random(ctx: &AlgebraContext, b: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(GroupAction {
            elems: (0..b)
                .map(|_| ctx.random_group_element(&mut rng))
                .collect::<Result<_>>()?,
        })
    }

    /// The action of `self` after `other`: (g·h)_i = g_i h_i.
    pub fn compose(&self, other: &GroupAction) -> GroupAction {
        GroupAction {
            elems: self.elems.iter().zip(&other.elems).map(|(a, b)| a * b).collect(),
        }
    }
}

impl RepPoint {
    pub fn new(spec: SurfaceSpec, mats: Vec<Mat>) -> Result<Self> {
        if mats.len() != spec.coordinate_count() {
            return Err(Error::InvalidArgument(format!(
                "expected {} matrices, got {}",
                spec.coordinate_count(),
                mats.len()
            )));
        }
        Ok(RepPoint { spec, mats })
    }

    pub fn identity(spec: SurfaceSpec, ctx: &AlgebraContext) -> Self {
        RepPoint {
            spec,
            mats: vec![identity(ctx.n); spec.coordinate_count()],
        }
    }

    pub fn n(&self) -> usize {
        self.mats.first().map_or(0, |m| m.nrows())
    }

    pub fn check(&self, ctx: &AlgebraContext) -> Result<()> {
        for m in &self.mats {
            ctx.check_group_element(m)?;
        }
        Ok(())
    }

    pub fn generator(&self, g: Generator) -> Result<Mat> {
        if g == Generator::Beta(1) {
            return inverse(&self.boundary_moment(1)?);
        }
        let k = self
            .spec
            .coordinate_index(g)
            .ok_or_else(|| Error::InvalidWord(format!("no generator {g} on this surface")))?;
        Ok(self.mats[k].clone())
    }

    pub fn holonomy(&self, w: &GeneratorWord) -> Result<Mat> {
        self.spec.check_word(w)?;
        let n = self.n();
        let mut acc = identity(n);
        let w = self.spec.expand_boundary(w);
        for l in &w.letters {
            let k = self.spec.coordinate_index(l.generator).expect("checked word");
            if l.inverse {
                acc *= inverse(&self.mats[k])?;
            } else {
                acc *= &self.mats[k];
            }
        }
        Ok(acc)
    }

    pub fn boundary_moment(&self, i: usize) -> Result<Mat> {
        let w = self.spec.moment_word(i)?;
        if w.is_constant() {
            return Ok(identity(self.n().max(1)));
        }
        let mut acc = identity(self.n());
        for l in &w.letters {
            let k = self.spec.coordinate_index(l.generator).expect("moment word");
            if l.inverse {
                acc *= inverse(&self.mats[k])?;
            } else {
                acc *= &self.mats[k];
            }
        }
        Ok(acc)
    }

    pub fn act(&self, g: &GroupAction) -> Result<RepPoint> {
        if g.elems.len() != self.spec.boundary_count {
            return Err(Error::InvalidArgument("action has the wrong arity".into()));
        }
        let inv: Vec<Mat> = g.elems.iter().map(inverse).collect::<Result<_>>()?;
        let mats = self
            .spec
            .generators()
            .into_iter()
            .zip(&self.mats)
            .map(|(gen, m)| &g.elems[gen.source() - 1] * m * &inv[gen.target() - 1])
            .collect();
        Ok(RepPoint {
            spec: self.spec,
            mats,
        })
    }

    /// χ^p of Φ∘Hol_w: the sum over ends of w at p of −(right gradient) for the
    /// start and +(left gradient) for the end.
    pub fn variation(
        &self,
        ctx: &AlgebraContext,
        phi: &Observable,
        w: &GeneratorWord,
        p: usize,
    ) -> Result<Mat> {
        let h = self.holonomy(w)?;
        let mut out = Mat::zeros(ctx.n, ctx.n);
        if w.source == p {
            out -= phi.var_right(ctx, &h)?;
        }
        if w.target == p {
            out += phi.var_left(ctx, &h)?;
        }
        Ok(out)
    }

    pub fn random(ctx: &AlgebraContext, spec: SurfaceSpec, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mats = (0..spec.coordinate_count())
            .map(|_| ctx.random_group_element(&mut rng))
            .collect::<Result<_>>()?;
        Ok(RepPoint { spec, mats })
    }

    pub fn to_file(&self, kind: GroupKind) -> PointFile {
        let matrices = self
            .spec
            .generators()
            .into_iter()
            .zip(&self.mats)
            .map(|(g, m)| {
                let rows = (0..m.nrows())
                    .map(|r| (0..m.ncols()).map(|c| format_entry(m[(r, c)], kind)).collect())
                    .collect();
                (g.label(), rows)
            })
            .collect();
        PointFile {
            genus: self.spec.genus,
            boundary_count: self.spec.boundary_count,
            group: kind,
            matrices,
        }
    }
}

/// JSON form of a point: generator label → row-major matrix of decimal strings.
/// Complex entries are written `re,im`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointFile {
    pub genus: usize,
    pub boundary_count: usize,
    pub group: GroupKind,
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
}

fn format_entry(z: Complex64, kind: GroupKind) -> String {
    match kind {
        GroupKind::GL => format!("{:.16e}", z.re),
        GroupKind::U => format!("{:.16e},{:.16e}", z.re, z.im),
    }
}

fn parse_entry(s: &str) -> Result<Complex64> {
    let bad = || Error::Parse(format!("bad matrix entry `{s}`"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        None => Ok(Complex64::new(s.trim().parse().map_err(|_| bad())?, 0.0)),
    }
}

impl PointFile {
    pub fn to_point(&self, ctx: &AlgebraContext) -> Result<RepPoint> {
        let spec = SurfaceSpec::new(self.genus, self.boundary_count)?;
        let mut mats = Vec::new();
        for g in spec.generators() {
            let rows = self
                .matrices
                .get(&g.label())
                .ok_or_else(|| Error::Parse(format!("missing matrix {}", g.label())))?;
            if rows.len() != ctx.n || rows.iter().any(|r| r.len() != ctx.n) {
                return Err(Error::Parse(format!("matrix {} is not {n}×{n}", g.label(), n = ctx.n)));
            }
            let mut m = Mat::zeros(ctx.n, ctx.n);
            for (r, row) in rows.iter().enumerate() {
                for (c, e) in row.iter().enumerate() {
                    m[(r, c)] = parse_entry(e)?;
                }
            }
            mats.push(m);
        }
        if self.matrices.len() != mats.len() {
            return Err(Error::Parse("unknown generator labels in point file".into()));
        }
        let p = RepPoint::new(spec, mats)?;
        p.check(ctx)?;
        Ok(p)
    }
}
