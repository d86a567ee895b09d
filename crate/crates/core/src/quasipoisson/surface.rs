use std::sync::Arc;

use super::chart::{ChartFunction, ChartWord, Grad};
use super::hqp::{double, fused_double, HamiltonianQP};
use crate::error::{Error, Result};
use crate::lie::{inverse, AlgebraContext, Mat, Observable};
use crate::repspace::RepPoint;
use crate::surfaces::{canonical_pieces, Generator, GeneratorWord, PieceKind, SurfaceSpec};

/// Order in which a fusion product of several pieces is bracketed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Assoc {
    /// ((1 ⊛ 2) ⊛ 3) ⊛ …
    Left,
    /// 1 ⊛ (2 ⊛ (3 ⊛ …))
    Right,
}

/// Chart of the representation space: per piece the double coordinates
/// (A, B) = (u, v u⁻¹) or (a, b a⁻¹).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartLayout {
    pub spec: SurfaceSpec,
    pub pieces: Vec<PieceKind>,
}

impl ChartLayout {
    pub fn slots(&self) -> usize {
        2 * self.pieces.len()
    }

    fn first_slot(&self, g: Generator) -> Option<usize> {
        self.pieces
            .iter()
            .position(|p| p.generators().contains(&g))
            .map(|r| 2 * r)
    }

    pub fn to_chart(&self, m: &RepPoint) -> Result<Vec<Mat>> {
        if m.spec != self.spec {
            return Err(Error::InvalidArgument("point lives on another surface".into()));
        }
        let mut x = Vec::with_capacity(self.slots());
        for p in &self.pieces {
            let [g0, g1] = p.generators();
            let a = m.generator(g0)?;
            let b = m.generator(g1)? * inverse(&a)?;
            x.push(a);
            x.push(b);
        }
        Ok(x)
    }

    pub fn from_chart(&self, x: &[Mat]) -> Result<RepPoint> {
        let mut mats = vec![Mat::zeros(0, 0); self.spec.coordinate_count()];
        for (r, p) in self.pieces.iter().enumerate() {
            let [g0, g1] = p.generators();
            let a = &x[2 * r];
            mats[self.spec.coordinate_index(g0).unwrap()] = a.clone();
            mats[self.spec.coordinate_index(g1).unwrap()] = &x[2 * r + 1] * a;
        }
        RepPoint::new(self.spec, mats)
    }

    pub fn word_to_chart(&self, w: &GeneratorWord) -> Result<ChartWord> {
        self.spec.check_word(w)?;
        let w = self.spec.expand_boundary(w);
        let mut out = Vec::new();
        for l in &w.letters {
            let a = self.first_slot(l.generator).expect("checked word");
            let second = matches!(l.generator, Generator::Beta(_) | Generator::Delta(_));
            match (second, l.inverse) {
                (false, false) => out.push((a, false)),
                (false, true) => out.push((a, true)),
                (true, false) => out.extend([(a + 1, false), (a, false)]),
                (true, true) => out.extend([(a, true), (a + 1, true)]),
            }
        }
        Ok(ChartWord(out))
    }
}

/// A function on the representation space.
#[derive(Clone)]
pub enum SurfaceFunction {
    /// Φ ∘ Hol_w.
    Holonomy { obs: Observable, word: GeneratorWord },
    /// Arbitrary function, differentiated numerically in the chart.
    Generic {
        name: String,
        f: Arc<dyn Fn(&RepPoint) -> Result<f64> + Send + Sync>,
    },
}

impl SurfaceFunction {
    pub fn holonomy(obs: Observable, word: GeneratorWord) -> Self {
        SurfaceFunction::Holonomy { obs, word }
    }

    pub fn value(&self, m: &RepPoint) -> Result<f64> {
        match self {
            SurfaceFunction::Holonomy { obs, word } => obs.value(&m.holonomy(word)?),
            SurfaceFunction::Generic { f, .. } => f(m),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        match self {
            SurfaceFunction::Holonomy { obs, .. } => obs.is_closed_form(),
            SurfaceFunction::Generic { .. } => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SurfaceFunction::Holonomy { obs, word } => format!("{}∘Hol({word})", obs.describe()),
            SurfaceFunction::Generic { name, .. } => format!("generic({name})"),
        }
    }
}

impl std::fmt::Debug for SurfaceFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.describe())
    }
}

/// The quasi-Poisson structure of a surface's representation space, built
/// as a fusion product of doubles (annuli) and fused doubles (handles).
#[derive(Clone, Debug)]
pub struct SurfaceQp {
    pub layout: ChartLayout,
    pub h: HamiltonianQP,
}

fn piece_structure(ctx: &AlgebraContext, p: PieceKind) -> HamiltonianQP {
    match p {
        PieceKind::Annulus(i) => {
            let mut d = double(ctx);
            d.labels = vec![1, i];
            d
        }
        PieceKind::Torus(_) => {
            let mut d = fused_double(ctx);
            d.labels = vec![1];
            d
        }
    }
}

fn first_slot(h: &HamiltonianQP) -> usize {
    h.labels.iter().position(|&l| l == 1).expect("every piece touches p_1")
}

impl SurfaceQp {
    pub fn build(spec: &SurfaceSpec, ctx: &AlgebraContext) -> Result<Self> {
        SurfaceQp::build_with(spec, ctx, &canonical_pieces(spec), Assoc::Left)
    }

    /// Fusion product of the pieces in the given order. With a non-canonical
    /// order the generator labels refer to the generating system whose
    /// boundary product follows that order.
    pub fn build_with(
        spec: &SurfaceSpec,
        ctx: &AlgebraContext,
        order: &[PieceKind],
        assoc: Assoc,
    ) -> Result<Self> {
        spec.validate()?;
        let mut want = canonical_pieces(spec);
        let mut got = order.to_vec();
        want.sort_by_key(|p| format!("{p:?}"));
        got.sort_by_key(|p| format!("{p:?}"));
        if want != got {
            return Err(Error::InvalidArgument("piece order is not a permutation of the pieces".into()));
        }
        let layout = ChartLayout {
            spec: *spec,
            pieces: order.to_vec(),
        };
        if order.is_empty() {
            let h = HamiltonianQP {
                ctx: *ctx,
                slots: Vec::new(),
                arity: 1,
                labels: vec![1],
                bivector: Default::default(),
                moments: Some(vec![ChartWord::new(Vec::new())]),
            };
            return Ok(SurfaceQp { layout, h });
        }
        let parts: Vec<HamiltonianQP> = order.iter().map(|&p| piece_structure(ctx, p)).collect();
        let fuse2 = |a: &HamiltonianQP, b: &HamiltonianQP| -> Result<HamiltonianQP> {
            let p = first_slot(a);
            let q = a.arity + first_slot(b);
            a.product(b)?.fuse(p, q)
        };
        let h = match assoc {
            Assoc::Left => {
                let mut acc = parts[0].clone();
                for p in &parts[1..] {
                    acc = fuse2(&acc, p)?;
                }
                acc
            }
            Assoc::Right => {
                let mut acc = parts.last().unwrap().clone();
                for p in parts[..parts.len() - 1].iter().rev() {
                    acc = fuse2(p, &acc)?;
                }
                acc
            }
        };
        Ok(SurfaceQp {
            layout,
            h: h.sorted_by_label()?,
        })
    }

    pub fn ctx(&self) -> &AlgebraContext {
        &self.h.ctx
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.layout.spec
    }

    pub fn chart_function(&self, f: &SurfaceFunction) -> Result<ChartFunction> {
        Ok(match f {
            SurfaceFunction::Holonomy { obs, word } => ChartFunction::Word {
                obs: obs.clone(),
                word: self.layout.word_to_chart(word)?,
            },
            SurfaceFunction::Generic { f, .. } => {
                let layout = self.layout.clone();
                let f = f.clone();
                ChartFunction::Generic(Arc::new(move |x: &[Mat]| f(&layout.from_chart(x)?)))
            }
        })
    }

    pub fn gradient(&self, f: &SurfaceFunction, x: &[Mat]) -> Result<Grad> {
        self.chart_function(f)?.gradient(self.ctx(), x)
    }

    /// {f, g}(m) = P(df, dg).
    pub fn bracket_numeric(&self, f: &SurfaceFunction, g: &SurfaceFunction, m: &RepPoint) -> Result<f64> {
        let x = self.layout.to_chart(m)?;
        let gf = self.gradient(f, &x)?;
        let gg = self.gradient(g, &x)?;
        Ok(self.h.bracket(&gf, &gg))
    }

    /// χ^p_f(m) from the infinitesimal action on the chart.
    pub fn chi(&self, f: &SurfaceFunction, m: &RepPoint, p: usize) -> Result<Mat> {
        let x = self.layout.to_chart(m)?;
        Ok(self.h.chi(&self.gradient(f, &x)?, p - 1))
    }
}
