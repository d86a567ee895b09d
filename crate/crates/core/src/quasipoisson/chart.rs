use std::sync::Arc;

use serde::Serialize;

use super::hqp::{FieldRef, Side};
use crate::error::Result;
use crate::lie::{c, identity, inverse, AlgebraContext, Mat, Observable, FD_STEP};

/// A word in chart coordinates: (slot, inverse) letters, evaluated left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChartWord(pub Vec<(usize, bool)>);

impl ChartWord {
    pub fn new(letters: Vec<(usize, bool)>) -> Self {
        ChartWord(letters)
    }

    pub fn concat(&self, other: &ChartWord) -> ChartWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ChartWord(v)
    }

    pub fn inverse(&self) -> ChartWord {
        ChartWord(self.0.iter().rev().map(|&(k, i)| (k, !i)).collect())
    }

    pub fn shifted(&self, by: usize) -> ChartWord {
        ChartWord(self.0.iter().map(|&(k, i)| (k + by, i)).collect())
    }

    pub fn eval(&self, x: &[Mat], inv: &[Mat]) -> Mat {
        let n = x[0].nrows();
        let mut acc = identity(n);
        for &(k, i) in &self.0 {
            acc *= if i { &inv[k] } else { &x[k] };
        }
        acc
    }

    /// Derivative of the holonomy along a tangent vector δX.
    pub fn derivative(&self, x: &[Mat], inv: &[Mat], dx: &[Mat]) -> Mat {
        let n = x[0].nrows();
        let letters: Vec<Mat> = self
            .0
            .iter()
            .map(|&(k, i)| if i { inv[k].clone() } else { x[k].clone() })
            .collect();
        let mut out = Mat::zeros(n, n);
        let mut prefix = identity(n);
        for (pos, &(k, i)) in self.0.iter().enumerate() {
            let d = if i { -(&inv[k] * &dx[k] * &inv[k]) } else { dx[k].clone() };
            let mut term = &prefix * d;
            for l in &letters[pos + 1..] {
                term *= l;
            }
            out += term;
            prefix *= &letters[pos];
        }
        out
    }
}

pub fn inverses(x: &[Mat]) -> Result<Vec<Mat>> {
    x.iter().map(inverse).collect()
}

/// Left and right gradients of a function with respect to each chart slot.
#[derive(Clone, Debug, PartialEq)]
pub struct Grad {
    pub left: Vec<Mat>,
    pub right: Vec<Mat>,
}

impl Grad {
    pub fn zeros(slots: usize, n: usize) -> Self {
        Grad {
            left: vec![Mat::zeros(n, n); slots],
            right: vec![Mat::zeros(n, n); slots],
        }
    }

    pub fn get(&self, f: FieldRef) -> &Mat {
        match f.side {
            Side::Left => &self.left[f.slot],
            Side::Right => &self.right[f.slot],
        }
    }

    /// Completes right gradients from left ones: G^R_k = X_k G^L_k X_k⁻¹.
    pub fn from_left(left: Vec<Mat>, x: &[Mat], inv: &[Mat]) -> Self {
        let right = left
            .iter()
            .enumerate()
            .map(|(k, g)| &x[k] * g * &inv[k])
            .collect();
        Grad { left, right }
    }
}

type ChartFn = Arc<dyn Fn(&[Mat]) -> Result<f64> + Send + Sync>;

/// A function on the chart.
#[derive(Clone)]
pub enum ChartFunction {
    Word { obs: Observable, word: ChartWord },
    Generic(ChartFn),
}

impl ChartFunction {
    pub fn value(&self, x: &[Mat]) -> Result<f64> {
        match self {
            ChartFunction::Word { obs, word } => obs.value(&word.eval(x, &inverses(x)?)),
            ChartFunction::Generic(f) => f(x),
        }
    }

    pub fn is_closed_form(&self) -> bool {
        match self {
            ChartFunction::Word { obs, .. } => obs.is_closed_form(),
            ChartFunction::Generic(_) => false,
        }
    }

    pub fn gradient(&self, ctx: &AlgebraContext, x: &[Mat]) -> Result<Grad> {
        let inv = inverses(x)?;
        match self {
            ChartFunction::Word { obs, word } => word_gradient(ctx, obs, word, x, &inv),
            ChartFunction::Generic(f) => {
                let basis = ctx.dual_basis();
                let mut left = vec![Mat::zeros(ctx.n, ctx.n); x.len()];
                for k in 0..x.len() {
                    for (e, fb) in basis.e.iter().zip(&basis.f) {
                        let mut xp = x.to_vec();
                        let mut xm = x.to_vec();
                        xp[k] = &x[k] * (e * c(FD_STEP)).exp();
                        xm[k] = &x[k] * (e * c(-FD_STEP)).exp();
                        let d = (f(&xp)? - f(&xm)?) / (2.0 * FD_STEP);
                        left[k] += fb * c(d);
                    }
                }
                Ok(Grad::from_left(left, x, &inv))
            }
        }
    }
}

/// Gradients of Φ(Hol_w) assembled from the gradients of Φ at the holonomy,
/// one translated term per occurrence of a slot.
pub fn word_gradient(
    ctx: &AlgebraContext,
    obs: &Observable,
    word: &ChartWord,
    x: &[Mat],
    inv: &[Mat],
) -> Result<Grad> {
    let n = ctx.n;
    let letters: Vec<&Mat> = word
        .0
        .iter()
        .map(|&(k, i)| if i { &inv[k] } else { &x[k] })
        .collect();
    let len = letters.len();
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(identity(n));
    for l in &letters {
        let next = prefix.last().unwrap() * *l;
        prefix.push(next);
    }
    let mut suffix = vec![identity(n); len + 1];
    for pos in (0..len).rev() {
        suffix[pos] = letters[pos] * &suffix[pos + 1];
    }
    let h = &prefix[len];
    let gl = obs.var_left(ctx, h)?;
    let gr = obs.var_right(ctx, h)?;
    let mut left = vec![Mat::zeros(n, n); x.len()];
    for (pos, &(k, i)) in word.0.iter().enumerate() {
        if i {
            let a = &prefix[pos];
            let a_inv = inverse(a)?;
            left[k] -= &a_inv * &gr * a;
        } else {
            let b = &suffix[pos + 1];
            left[k] += b * &gl * inverse(b)?;
        }
    }
    Ok(Grad::from_left(left, x, inv))
}
