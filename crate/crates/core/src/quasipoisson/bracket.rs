use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::Result;
use crate::lie::{inverse, AlgebraContext, Mat, Observable};
use crate::repspace::RepPoint;
use crate::surfaces::{End, GeneratorWord, IntersectionData};

/// Φ^I of a path: the right gradient at the start, the left gradient at the end.
pub fn end_gradient(ctx: &AlgebraContext, obs: &Observable, hol: &Mat, e: End) -> Result<Mat> {
    match e {
        End::Start => obs.var_right(ctx, hol),
        End::End => obs.var_left(ctx, hol),
    }
}

/// The two parts of the combinatorial bracket.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BracketParts {
    pub endpoint: f64,
    pub crossing: f64,
    pub total: f64,
}

/// Formula switches used for sensitivity checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FormulaOptions {
    /// Use −ε_q in place of ε_q.
    pub flip_crossing_sign: bool,
}

/// ⟨Φ^∧_α, Ad_{Hol(α∗_qβ)} Ψ^∨_β⟩.
pub fn crossing_term(
    ctx: &AlgebraContext,
    phi: &Observable,
    hol_a: &Mat,
    psi: &Observable,
    hol_b: &Mat,
    reroute: &Mat,
) -> Result<f64> {
    let x = phi.var_right(ctx, hol_a)?;
    let y = psi.var_left(ctx, hol_b)?;
    Ok(ctx.form(&x, &(reroute * y * inverse(reroute)?)))
}

/// The same crossing term through the reroute α^{±1} ∗_q β^{±1} adapted to
/// the ends (I, J).
pub fn crossing_term_via(
    ctx: &AlgebraContext,
    phi: &Observable,
    psi: &Observable,
    m: &RepPoint,
    wa: &GeneratorWord,
    wb: &GeneratorWord,
    c: &crate::surfaces::Crossing,
    i: End,
    j: End,
) -> Result<f64> {
    let ha = m.holonomy(wa)?;
    let hb = m.holonomy(wb)?;
    let gamma = m.holonomy(&c.reroute(i == End::Start, j == End::End))?;
    let x = end_gradient(ctx, phi, &ha, i)?;
    let y = end_gradient(ctx, psi, &hb, j)?;
    Ok(ctx.form(&x, &(&gamma * y * inverse(&gamma)?)))
}

/// {Φ_α, Ψ_β}(m) = Σ ε(α^I,β^J)⟨Φ^I_α, Ψ^J_β⟩ + Σ_q ε_q B^q.
pub fn bracket_combinatorial(
    ctx: &AlgebraContext,
    phi: &Observable,
    wa: &GeneratorWord,
    psi: &Observable,
    wb: &GeneratorWord,
    data: &IntersectionData,
    m: &RepPoint,
) -> Result<BracketParts> {
    bracket_combinatorial_with(ctx, phi, wa, psi, wb, data, m, FormulaOptions::default())
}

#[allow(clippy::too_many_arguments)]
pub fn bracket_combinatorial_with(
    ctx: &AlgebraContext,
    phi: &Observable,
    wa: &GeneratorWord,
    psi: &Observable,
    wb: &GeneratorWord,
    data: &IntersectionData,
    m: &RepPoint,
    opts: FormulaOptions,
) -> Result<BracketParts> {
    let ha = m.holonomy(wa)?;
    let hb = m.holonomy(wb)?;
    let mut endpoint = 0.0;
    for i in End::BOTH {
        for j in End::BOTH {
            let e = data.endpoint(i, j);
            if e.shared.is_none() {
                continue;
            }
            let s = e.sign.to_f64().unwrap();
            if s == 0.0 {
                continue;
            }
            let x = end_gradient(ctx, phi, &ha, i)?;
            let y = end_gradient(ctx, psi, &hb, j)?;
            endpoint += s * ctx.form(&x, &y);
        }
    }
    let mut crossing = 0.0;
    for c in &data.crossings {
        let g = m.holonomy(&c.alpha_then_beta())?;
        let sign = if opts.flip_crossing_sign { -c.sign } else { c.sign };
        crossing += sign as f64 * crossing_term(ctx, phi, &ha, psi, &hb, &g)?;
    }
    Ok(BracketParts {
        endpoint,
        crossing,
        total: endpoint + crossing,
    })
}
