use serde::Serialize;

use super::chart::{inverses, ChartFunction, Grad};
use super::hqp::HamiltonianQP;
use crate::error::{Error, Result};
use crate::lie::{c, cartan_trivector, inverse, max_abs, unit, GroupKind, Mat, FD_STEP};

fn coordinate(n: usize, a: usize) -> (usize, usize, usize) {
    let k = a / (n * n);
    let r = a % (n * n);
    (k, r / n, r % n)
}

/// Gradients of the coordinate function (X_k)_{pq}, linear in the point y.
fn coordinate_grad(n: usize, slots: usize, a: usize, y: &[Mat]) -> Grad {
    let (k, p, q) = coordinate(n, a);
    let mut g = Grad::zeros(slots, n);
    let e = unit(n, q, p);
    g.left[k] = &e * &y[k];
    g.right[k] = &y[k] * &e;
    g
}

fn unit_point(n: usize, slots: usize, d: usize) -> Vec<Mat> {
    let (k, p, q) = coordinate(n, d);
    let mut y = vec![Mat::zeros(n, n); slots];
    y[k] = unit(n, p, q);
    y
}

fn require_gl(h: &HamiltonianQP) -> Result<()> {
    if h.ctx.kind != GroupKind::GL {
        return Err(Error::InvalidArgument(
            "coordinate checks need real matrix-entry coordinates".into(),
        ));
    }
    Ok(())
}

/// P^{ab}(x) in matrix-entry coordinates.
pub fn coordinate_bivector(h: &HamiltonianQP, x: &[Mat]) -> Result<Vec<Vec<f64>>> {
    require_gl(h)?;
    let n = h.ctx.n;
    let s = x.len();
    let dim = s * n * n;
    let grads: Vec<Grad> = (0..dim).map(|a| coordinate_grad(n, s, a, x)).collect();
    Ok((0..dim)
        .map(|a| (0..dim).map(|b| h.bracket(&grads[a], &grads[b])).collect())
        .collect())
}

fn schouten_from(p: &[Vec<f64>], dp: &[Vec<Vec<f64>>]) -> Vec<f64> {
    let dim = p.len();
    let mut out = vec![0.0; dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            for cc in 0..dim {
                let mut acc = 0.0;
                for d in 0..dim {
                    acc += p[a][d] * dp[d][b][cc] + p[b][d] * dp[d][cc][a] + p[cc][d] * dp[d][a][b];
                }
                out[(a * dim + b) * dim + cc] = 2.0 * acc;
            }
        }
    }
    out
}

/// [P,P]^{abc} = 2 Σ_d (P^{ad} ∂_d P^{bc} + cyclic), twice the Jacobiator of
/// the coordinate functions. ∂_d P^{bc} is exact: P^{bc} is a quadratic form
/// in the coordinates.
pub fn schouten_tensor(h: &HamiltonianQP, x: &[Mat]) -> Result<Vec<f64>> {
    let p = coordinate_bivector(h, x)?;
    let n = h.ctx.n;
    let s = x.len();
    let dim = s * n * n;
    let at_x: Vec<Grad> = (0..dim).map(|a| coordinate_grad(n, s, a, x)).collect();
    let mut dp = vec![vec![vec![0.0; dim]; dim]; dim];
    for d in 0..dim {
        let y = unit_point(n, s, d);
        let at_e: Vec<Grad> = (0..dim).map(|a| coordinate_grad(n, s, a, &y)).collect();
        for b in 0..dim {
            for cc in 0..dim {
                dp[d][b][cc] = h.bracket(&at_e[b], &at_x[cc]) + h.bracket(&at_x[b], &at_e[cc]);
            }
        }
    }
    Ok(schouten_from(&p, &dp))
}

/// Same tensor with ∂_d P^{bc} by central differences.
pub fn schouten_tensor_fd(h: &HamiltonianQP, x: &[Mat], step: f64) -> Result<Vec<f64>> {
    let p = coordinate_bivector(h, x)?;
    let n = h.ctx.n;
    let s = x.len();
    let dim = s * n * n;
    let mut dp = vec![vec![vec![0.0; dim]; dim]; dim];
    for d in 0..dim {
        let e = unit_point(n, s, d);
        let plus: Vec<Mat> = x.iter().zip(&e).map(|(a, b)| a + b * c(step)).collect();
        let minus: Vec<Mat> = x.iter().zip(&e).map(|(a, b)| a - b * c(step)).collect();
        let pp = coordinate_bivector(h, &plus)?;
        let pm = coordinate_bivector(h, &minus)?;
        for b in 0..dim {
            for cc in 0..dim {
                dp[d][b][cc] = (pp[b][cc] - pm[b][cc]) / (2.0 * step);
            }
        }
    }
    Ok(schouten_from(&p, &dp))
}

/// ρ_φ(dx_a, dx_b, dx_c) = Σ_p φ(χ^p_a, χ^p_b, χ^p_c).
pub fn rho_phi_tensor(h: &HamiltonianQP, x: &[Mat]) -> Result<Vec<f64>> {
    require_gl(h)?;
    let ctx = &h.ctx;
    let n = ctx.n;
    let s = x.len();
    let dim = s * n * n;
    let phi = cartan_trivector(ctx, &ctx.dual_basis())?;
    let grads: Vec<Grad> = (0..dim).map(|a| coordinate_grad(n, s, a, x)).collect();
    let mut out = vec![0.0; dim * dim * dim];
    for p in 0..h.arity {
        let chi: Vec<Mat> = grads.iter().map(|g| h.chi(g, p)).collect();
        for a in 0..dim {
            for b in 0..dim {
                for cc in 0..dim {
                    out[(a * dim + b) * dim + cc] += phi.evaluate(ctx, &chi[a], &chi[b], &chi[cc]);
                }
            }
        }
    }
    Ok(out)
}

/// max_{abc} |[P,P]^{abc} − ρ_φ^{abc}|.
pub fn qp_identity_residual(h: &HamiltonianQP, x: &[Mat]) -> Result<f64> {
    let s = schouten_tensor(h, x)?;
    let r = rho_phi_tensor(h, x)?;
    Ok(s.iter().zip(&r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Both sides of μ^{-1}dμ(P♯df) = −½(1 + Ad_μ⁻¹)χ_f.
#[derive(Clone, Debug, Serialize)]
pub struct MomentCheck {
    pub residual_fd: f64,
    pub residual_exact: f64,
    pub lhs_norm: f64,
    pub rhs_norm: f64,
}

pub fn moment_residual(h: &HamiltonianQP, i: usize, f: &ChartFunction, x: &[Mat]) -> Result<MomentCheck> {
    let moments = h
        .moments
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("structure has no moment map".into()))?;
    let word = moments
        .get(i)
        .ok_or_else(|| Error::InvalidArgument(format!("no moment component {i}")))?;
    let inv = inverses(x)?;
    let g = f.gradient(&h.ctx, x)?;
    let v = h.bivector.sharp(&g, x);
    let mu = word.eval(x, &inv);
    let mu_inv = inverse(&mu)?;
    let exact = &mu_inv * word.derivative(x, &inv, &v);
    let shift = |t: f64| -> Vec<Mat> { x.iter().zip(&v).map(|(a, d)| a + d * c(t)).collect() };
    let (xp, xm) = (shift(FD_STEP), shift(-FD_STEP));
    let fd = &mu_inv
        * (word.eval(&xp, &inverses(&xp)?) - word.eval(&xm, &inverses(&xm)?))
        * c(0.5 / FD_STEP);
    let chi = h.chi(&g, i);
    let rhs = (&chi + &mu_inv * &chi * &mu) * c(-0.5);
    Ok(MomentCheck {
        residual_fd: max_abs(&(&fd - &rhs)),
        residual_exact: max_abs(&(&exact - &rhs)),
        lhs_norm: max_abs(&exact),
        rhs_norm: max_abs(&rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::AlgebraContext;
    use crate::quasipoisson::{conjugation, double, fused_double, trivial, SurfaceQp, WedgeTerm};
    use crate::repspace::RepPoint;
    use crate::surfaces::SurfaceSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_chart(h: &HamiltonianQP, seed: u64) -> Vec<Mat> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..h.chart_slots())
            .map(|_| h.ctx.random_group_element(&mut rng).unwrap())
            .collect()
    }

    fn entry_fn(slot: usize) -> ChartFunction {
        ChartFunction::Word {
            obs: crate::lie::Observable::entry(0, 1),
            word: crate::quasipoisson::ChartWord::new(vec![(slot, false)]),
        }
    }

    #[test]
    fn building_blocks_are_quasi_poisson() {
        let ctx = AlgebraContext::gl(2);
        for h in [double(&ctx), fused_double(&ctx), conjugation(&ctx)] {
            for seed in 0..3 {
                let x = random_chart(&h, seed);
                assert!(qp_identity_residual(&h, &x).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn abelian_structures_have_zero_schouten() {
        let ctx = AlgebraContext::gl(1);
        let h = double(&ctx);
        let x = random_chart(&h, 1);
        assert!(schouten_tensor(&h, &x).unwrap().iter().all(|v| v.abs() < 1e-15));
        assert!(rho_phi_tensor(&h, &x).unwrap().iter().all(|v| *v == 0.0));
        let canon = h.bivector.canonical(&ctx);
        assert_eq!(canon.terms.len(), 1);
        assert_eq!(canon.terms[0].coeff, 1.0);
    }

    #[test]
    fn analytic_and_fd_schouten_agree() {
        let ctx = AlgebraContext::gl(2);
        let h = fused_double(&ctx);
        let x = random_chart(&h, 2);
        let a = schouten_tensor(&h, &x).unwrap();
        let b = schouten_tensor_fd(&h, &x, 1e-3).unwrap();
        let r = a.iter().zip(&b).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(r < 1e-10, "{r}");
    }

    #[test]
    fn perturbed_bivector_fails() {
        let ctx = AlgebraContext::gl(2);
        let mut h = double(&ctx);
        let x = random_chart(&h, 3);
        h.bivector.terms[0] = WedgeTerm {
            coeff: h.bivector.terms[0].coeff * 1.01,
            ..h.bivector.terms[0]
        };
        assert!(qp_identity_residual(&h, &x).unwrap() > 1e-4);
    }

    #[test]
    fn moment_condition_for_blocks() {
        let ctx = AlgebraContext::gl(2);
        for h in [double(&ctx), fused_double(&ctx), conjugation(&ctx)] {
            let x = random_chart(&h, 4);
            for i in 0..h.arity {
                for slot in 0..h.chart_slots() {
                    let r = moment_residual(&h, i, &entry_fn(slot), &x).unwrap();
                    assert!(r.residual_exact < 1e-12 && r.residual_fd < 1e-8, "{r:?}");
                }
            }
        }
        assert!(moment_residual(&trivial(&ctx), 0, &entry_fn(0), &random_chart(&trivial(&ctx), 0)).is_err());
    }

    #[test]
    fn constant_function_moment_sides_vanish() {
        let ctx = AlgebraContext::gl(2);
        let h = fused_double(&ctx);
        let x = random_chart(&h, 5);
        let f = ChartFunction::Generic(std::sync::Arc::new(|_: &[Mat]| Ok(3.0)));
        let r = moment_residual(&h, 0, &f, &x).unwrap();
        assert!(r.lhs_norm < 1e-12 && r.rhs_norm < 1e-12);
    }

    #[test]
    fn trivial_fuses_to_conjugation_tensor() {
        let ctx = AlgebraContext::gl(2);
        let c = conjugation(&ctx).bivector.canonical(&ctx);
        assert_eq!(c.terms.len(), 1);
        let t = c.terms[0];
        assert_eq!((t.v.side, t.w.side), (super::super::hqp::Side::Left, super::super::hqp::Side::Right));
        assert_eq!(t.coeff, -0.5);
    }

    #[test]
    fn surface_structures_satisfy_the_identities() {
        let ctx = AlgebraContext::gl(2);
        for (g, b) in [(0, 2), (1, 1), (0, 3)] {
            let spec = SurfaceSpec::new(g, b).unwrap();
            let s = SurfaceQp::build(&spec, &ctx).unwrap();
            let m = RepPoint::random(&ctx, spec, 7).unwrap();
            let x = s.layout.to_chart(&m).unwrap();
            assert!(qp_identity_residual(&s.h, &x).unwrap() < 1e-9);
        }
    }
}
