use std::collections::BTreeMap;

use serde::Serialize;

use super::chart::{ChartWord, Grad};
use crate::error::{Error, Result};
use crate::lie::{AlgebraContext, Mat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    /// Left-invariant field X ↦ X x.
    Left,
    /// Right-invariant field X ↦ x X.
    Right,
}

/// The family of fields x^{slot, side}, one for each algebra element x.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FieldRef {
    pub slot: usize,
    pub side: Side,
}

impl FieldRef {
    pub fn left(slot: usize) -> Self {
        FieldRef { slot, side: Side::Left }
    }

    pub fn right(slot: usize) -> Self {
        FieldRef { slot, side: Side::Right }
    }
}

/// coeff · Σ_a e_a^{v} ∧ f_a^{w} over a dual basis pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WedgeTerm {
    pub coeff: f64,
    pub v: FieldRef,
    pub w: FieldRef,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Bivector {
    pub terms: Vec<WedgeTerm>,
}

impl Bivector {
    /// P(df, dg) from the gradients of f and g.
    pub fn pair(&self, ctx: &AlgebraContext, f: &Grad, g: &Grad) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                t.coeff
                    * (ctx.form(f.get(t.v), g.get(t.w)) - ctx.form(f.get(t.w), g.get(t.v)))
            })
            .sum()
    }

    /// P♯(df) as a tangent vector: one matrix δX_k per chart slot.
    pub fn sharp(&self, f: &Grad, x: &[Mat]) -> Vec<Mat> {
        let n = x.first().map_or(0, |m| m.nrows());
        let mut out = vec![Mat::zeros(n, n); x.len()];
        for t in &self.terms {
            add_field(&mut out, x, t.w, &(f.get(t.v) * crate::lie::c(t.coeff)));
            add_field(&mut out, x, t.v, &(f.get(t.w) * crate::lie::c(-t.coeff)));
        }
        out
    }

    /// Orients each term, merges duplicates and drops vanishing ones. In the
    /// abelian case left and right fields coincide and are merged too.
    pub fn canonical(&self, ctx: &AlgebraContext) -> Bivector {
        let mut acc: BTreeMap<(FieldRef, FieldRef), f64> = BTreeMap::new();
        for t in &self.terms {
            let norm = |f: FieldRef| {
                if ctx.is_abelian() {
                    FieldRef::left(f.slot)
                } else {
                    f
                }
            };
            let (v, w) = (norm(t.v), norm(t.w));
            if v == w {
                continue;
            }
            let (key, s) = if v < w { ((v, w), 1.0) } else { ((w, v), -1.0) };
            *acc.entry(key).or_insert(0.0) += s * t.coeff;
        }
        Bivector {
            terms: acc
                .into_iter()
                .filter(|(_, c)| *c != 0.0)
                .map(|((v, w), coeff)| WedgeTerm { coeff, v, w })
                .collect(),
        }
    }
}

pub(crate) fn add_field(out: &mut [Mat], x: &[Mat], f: FieldRef, elem: &Mat) {
    match f.side {
        Side::Left => out[f.slot] += &x[f.slot] * elem,
        Side::Right => out[f.slot] += elem * &x[f.slot],
    }
}

/// How the action slots move a chart coordinate: X ↦ g_source X g_target⁻¹.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SlotAction {
    pub source: usize,
    pub target: usize,
}

/// A quasi-Poisson manifold G^N with a G^arity action, bivector and
/// optional group-valued moment map given by chart words.
#[derive(Clone, Debug, Serialize)]
pub struct HamiltonianQP {
    pub ctx: AlgebraContext,
    pub slots: Vec<SlotAction>,
    pub arity: usize,
    /// Marked point represented by each action slot.
    pub labels: Vec<usize>,
    pub bivector: Bivector,
    pub moments: Option<Vec<ChartWord>>,
}

impl HamiltonianQP {
    pub fn chart_slots(&self) -> usize {
        self.slots.len()
    }

    /// The components of ρ^p: (field, sign) with ρ^p_x = Σ sign·x^{field}.
    pub fn action_fields(&self, p: usize) -> Vec<(FieldRef, f64)> {
        let mut out = Vec::new();
        for (k, s) in self.slots.iter().enumerate() {
            if s.source == p {
                out.push((FieldRef::right(k), -1.0));
            }
            if s.target == p {
                out.push((FieldRef::left(k), 1.0));
            }
        }
        out
    }

    /// χ^p_f, characterized by ⟨χ^p_f, x⟩ = df(ρ^p_x).
    pub fn chi(&self, f: &Grad, p: usize) -> Mat {
        let n = self.ctx.n;
        let mut out = Mat::zeros(n, n);
        for (field, s) in self.action_fields(p) {
            out += f.get(field) * crate::lie::c(s);
        }
        out
    }

    /// The tangent vector ρ^p_x at chart point `x`.
    pub fn action_vector(&self, p: usize, elem: &Mat, x: &[Mat]) -> Vec<Mat> {
        let n = self.ctx.n;
        let mut out = vec![Mat::zeros(n, n); x.len()];
        for (field, s) in self.action_fields(p) {
            add_field(&mut out, x, field, &(elem * crate::lie::c(s)));
        }
        out
    }

    pub fn bracket(&self, f: &Grad, g: &Grad) -> f64 {
        self.bivector.pair(&self.ctx, f, g)
    }

    /// Disjoint product: slots and action slots of `other` follow those of `self`.
    pub fn product(&self, other: &HamiltonianQP) -> Result<HamiltonianQP> {
        if self.ctx != other.ctx {
            return Err(Error::InvalidArgument("factors use different groups".into()));
        }
        let ns = self.chart_slots();
        let na = self.arity;
        let mut slots = self.slots.clone();
        slots.extend(other.slots.iter().map(|s| SlotAction {
            source: s.source + na,
            target: s.target + na,
        }));
        let mut terms = self.bivector.terms.clone();
        let shift = |f: FieldRef| FieldRef {
            slot: f.slot + ns,
            side: f.side,
        };
        terms.extend(other.bivector.terms.iter().map(|t| WedgeTerm {
            coeff: t.coeff,
            v: shift(t.v),
            w: shift(t.w),
        }));
        let moments = match (&self.moments, &other.moments) {
            (Some(a), Some(b)) => {
                let mut m = a.clone();
                m.extend(b.iter().map(|w| w.shifted(ns)));
                Some(m)
            }
            _ => None,
        };
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Ok(HamiltonianQP {
            ctx: self.ctx,
            slots,
            arity: self.arity + other.arity,
            labels,
            bivector: Bivector { terms },
            moments,
        })
    }

    /// Fusion of action slots p and q: P − ½ Σ ρ^p_{e_a} ∧ ρ^q_{f_a}, moment
    /// μ_p·μ_q. The fused slot takes the place of min(p, q) and keeps p's label.
    pub fn fuse(&self, p: usize, q: usize) -> Result<HamiltonianQP> {
        if p == q || p >= self.arity || q >= self.arity {
            return Err(Error::InvalidArgument(format!(
                "cannot fuse action slots {p} and {q} of {}",
                self.arity
            )));
        }
        let mut terms = self.bivector.terms.clone();
        for (fp, sp) in self.action_fields(p) {
            for (fq, sq) in self.action_fields(q) {
                terms.push(WedgeTerm {
                    coeff: -0.5 * sp * sq,
                    v: fp,
                    w: fq,
                });
            }
        }
        let keep = p.min(q);
        let gone = p.max(q);
        let relabel = |s: usize| {
            let s = if s == gone { keep } else { s };
            if s > gone {
                s - 1
            } else {
                s
            }
        };
        let slots = self
            .slots
            .iter()
            .map(|s| SlotAction {
                source: relabel(s.source),
                target: relabel(s.target),
            })
            .collect();
        let moments = self.moments.as_ref().map(|m| {
            let mut out = m.clone();
            out[keep] = m[p].concat(&m[q]);
            out.remove(gone);
            out
        });
        let mut labels = self.labels.clone();
        labels[keep] = self.labels[p];
        labels.remove(gone);
        Ok(HamiltonianQP {
            ctx: self.ctx,
            slots,
            arity: self.arity - 1,
            labels,
            bivector: Bivector { terms },
            moments,
        })
    }

    /// Reorders action slots so that slot `i` carries label `i + 1`.
    pub fn sorted_by_label(&self) -> Result<HamiltonianQP> {
        let mut order: Vec<usize> = (0..self.arity).collect();
        order.sort_by_key(|&i| self.labels[i]);
        for (k, &i) in order.iter().enumerate() {
            if self.labels[i] != k + 1 {
                return Err(Error::InvalidArgument("labels are not 1..=arity".into()));
            }
        }
        let mut pos = vec![0; self.arity];
        for (k, &i) in order.iter().enumerate() {
            pos[i] = k;
        }
        Ok(HamiltonianQP {
            ctx: self.ctx,
            slots: self
                .slots
                .iter()
                .map(|s| SlotAction {
                    source: pos[s.source],
                    target: pos[s.target],
                })
                .collect(),
            arity: self.arity,
            labels: (1..=self.arity).collect(),
            bivector: self.bivector.clone(),
            moments: self
                .moments
                .as_ref()
                .map(|m| order.iter().map(|&i| m[i].clone()).collect()),
        })
    }

    pub fn canonical(&self) -> HamiltonianQP {
        HamiltonianQP {
            bivector: self.bivector.canonical(&self.ctx),
            ..self.clone()
        }
    }
}

/// The double D(G) on G² with action (g,h)·(a,b) = (g a h⁻¹, h b g⁻¹).
pub fn double(ctx: &AlgebraContext) -> HamiltonianQP {
    HamiltonianQP {
        ctx: *ctx,
        slots: vec![
            SlotAction { source: 0, target: 1 },
            SlotAction { source: 1, target: 0 },
        ],
        arity: 2,
        labels: vec![1, 2],
        bivector: Bivector {
            terms: vec![
                WedgeTerm {
                    coeff: 0.5,
                    v: FieldRef::left(0),
                    w: FieldRef::right(1),
                },
                WedgeTerm {
                    coeff: 0.5,
                    v: FieldRef::right(0),
                    w: FieldRef::left(1),
                },
            ],
        },
        moments: Some(vec![
            ChartWord::new(vec![(0, false), (1, false)]),
            ChartWord::new(vec![(0, true), (1, true)]),
        ]),
    }
}

/// The double with its two action slots fused.
pub fn fused_double(ctx: &AlgebraContext) -> HamiltonianQP {
    double(ctx).fuse(0, 1).expect("double has two slots")
}

/// G with the two-sided action (g,h)·x = g x h⁻¹ and zero bivector; it
/// admits no moment map.
pub fn trivial(ctx: &AlgebraContext) -> HamiltonianQP {
    HamiltonianQP {
        ctx: *ctx,
        slots: vec![SlotAction { source: 0, target: 1 }],
        arity: 2,
        labels: vec![1, 2],
        bivector: Bivector::default(),
        moments: None,
    }
}

/// G under conjugation with P_G = ½ Σ e^R ∧ f^L and the identity moment map,
/// obtained by fusing [`trivial`].
pub fn conjugation(ctx: &AlgebraContext) -> HamiltonianQP {
    let mut h = trivial(ctx).fuse(0, 1).expect("two slots");
    h.moments = Some(vec![ChartWord::new(vec![(0, false)])]);
    h
}
