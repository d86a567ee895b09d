//! Compact cross-sections in the regular case H = T: the operator Θ_h, the
//! transverse form P_L^⊥, projection onto L and the cross-section bracket.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{c, inverse, max_abs, AlgebraContext, GroupKind, Mat, Observable, FD_STEP, TAU_ORTH};
use crate::quasipoisson::{crossing_term, end_gradient, inverses, BracketParts, SurfaceFunction, SurfaceQp};
use crate::repspace::{GroupAction, RepPoint};
use crate::surfaces::{End, GeneratorWord, IntersectionData};

/// Minimal eigenvalue-phase gap for a regular element.
pub const TAU_REG: f64 = 1e-6;

/// u(n) with ⟨x,y⟩ = −Re Tr(xy), split as t ⊕ t^⊥.
#[derive(Clone, Debug, Serialize)]
pub struct CompactContext {
    pub ctx: AlgebraContext,
}

impl CompactContext {
    pub fn new(n: usize) -> Self {
        CompactContext {
            ctx: AlgebraContext::u(n),
        }
    }

    pub fn from_algebra(ctx: &AlgebraContext) -> Result<Self> {
        if ctx.kind != GroupKind::U {
            return Err(Error::InvalidArgument(
                "cross-sections need a compact group".into(),
            ));
        }
        Ok(CompactContext { ctx: *ctx })
    }

    pub fn n(&self) -> usize {
        self.ctx.n
    }

    /// Orthonormal basis of t: i·E_aa.
    pub fn torus_basis(&self) -> Vec<Mat> {
        let n = self.n();
        (0..n)
            .map(|a| {
                let mut m = Mat::zeros(n, n);
                m[(a, a)] = Complex64::i();
                m
            })
            .collect()
    }

    /// Orthonormal basis of t^⊥: (E_ab − E_ba)/√2 and i(E_ab + E_ba)/√2.
    pub fn perp_basis(&self) -> Vec<Mat> {
        let n = self.n();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                let mut x = Mat::zeros(n, n);
                x[(a, b)] = c(s);
                x[(b, a)] = c(-s);
                out.push(x);
                let mut y = Mat::zeros(n, n);
                y[(a, b)] = Complex64::new(0.0, s);
                y[(b, a)] = Complex64::new(0.0, s);
                out.push(y);
            }
        }
        out
    }

    pub fn basis(&self) -> Vec<Mat> {
        let mut b = self.torus_basis();
        b.extend(self.perp_basis());
        b
    }

    pub fn pr_t(&self, x: &Mat) -> Mat {
        Mat::from_fn(x.nrows(), x.ncols(), |i, j| if i == j { x[(i, j)] } else { c(0.0) })
    }

    pub fn pr_perp(&self, x: &Mat) -> Mat {
        x - self.pr_t(x)
    }

    /// Matrix of a linear operator on u(n) in `basis()`.
    pub fn operator_matrix(&self, op: impl Fn(&Mat) -> Mat) -> DMatrix<f64> {
        let b = self.basis();
        let d = b.len();
        let images: Vec<Mat> = b.iter().map(&op).collect();
        DMatrix::from_fn(d, d, |k, l| self.ctx.form(&b[k], &images[l]))
    }

    /// Diagonal entries of h after checking that h is a regular diagonal
    /// unitary; also returns the minimal phase gap.
    pub fn regular_eigenvalues(&self, h: &Mat) -> Result<(Vec<Complex64>, f64)> {
        let n = self.n();
        if h.nrows() != n || h.ncols() != n {
            return Err(Error::InvalidArgument("element has the wrong size".into()));
        }
        let off = max_abs(&self.pr_perp(h));
        if off > TAU_ORTH {
            return Err(Error::NumericDomain(format!(
                "element is not diagonal (off-diagonal {off:e})"
            )));
        }
        let lambda: Vec<Complex64> = (0..n).map(|a| h[(a, a)]).collect();
        let gap = phase_gap(&lambda);
        if gap <= TAU_REG {
            return Err(Error::NumericDomain(format!(
                "element is not regular (eigenvalue phase gap {gap:e})"
            )));
        }
        Ok((lambda, gap))
    }

    /// Applies f(φ_ab) to the (a,b) entry of x, where e^{iφ_ab} = λ_a/λ_b is
    /// the eigenvalue of Ad_h on that entry.
    fn off_diagonal(&self, h: &Mat, x: &Mat, f: impl Fn(f64) -> Complex64) -> Result<Mat> {
        let (lambda, _) = self.regular_eigenvalues(h)?;
        let n = self.n();
        Ok(Mat::from_fn(n, n, |a, b| {
            if a == b {
                c(0.0)
            } else {
                f((lambda[a] * lambda[b].conj()).arg()) * x[(a, b)]
            }
        }))
    }

    /// Θ_h x = Pr_t x + 2(1 − Ad_h)⁻¹ Pr_{t⊥} x.
    pub fn apply_theta(&self, h: &Mat, x: &Mat) -> Result<Mat> {
        Ok(self.pr_t(x) + self.off_diagonal(h, x, two_over_one_minus)?)
    }

    /// Θ_h^T x = Pr_t x + 2(1 − Ad_h⁻¹)⁻¹ Pr_{t⊥} x.
    pub fn apply_theta_transpose(&self, h: &Mat, x: &Mat) -> Result<Mat> {
        Ok(self.pr_t(x) + self.off_diagonal(h, x, |phi| two_over_one_minus(-phi))?)
    }

    /// (Ad_h + 1)(Ad_h − 1)⁻¹ Pr_{t⊥} x.
    pub fn apply_cayley(&self, h: &Mat, x: &Mat) -> Result<Mat> {
        self.off_diagonal(h, x, |phi| Complex64::new(0.0, -1.0 / (phi / 2.0).tan()))
    }

    pub fn theta(&self, h: &Mat) -> Result<DMatrix<f64>> {
        self.regular_eigenvalues(h)?;
        Ok(self.operator_matrix(|x| self.apply_theta(h, x).expect("regular")))
    }

    pub fn theta_transpose(&self, h: &Mat) -> Result<DMatrix<f64>> {
        self.regular_eigenvalues(h)?;
        Ok(self.operator_matrix(|x| self.apply_theta_transpose(h, x).expect("regular")))
    }

    /// (x, y) ↦ −½⟨(Ad_h + 1)(Ad_h − 1)⁻¹ x, y⟩ on `perp_basis()`.
    pub fn p_perp_form(&self, h: &Mat) -> Result<DMatrix<f64>> {
        let b = self.perp_basis();
        let images = b
            .iter()
            .map(|x| self.apply_cayley(h, x))
            .collect::<Result<Vec<_>>>()?;
        Ok(DMatrix::from_fn(b.len(), b.len(), |k, l| {
            -0.5 * self.ctx.form(&images[k], &b[l])
        }))
    }

    /// Uniformly distributed regular diagonal unitary.
    pub fn random_regular<R: rand::Rng>(&self, rng: &mut R) -> Mat {
        loop {
            let phases: Vec<f64> = (0..self.n())
                .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            let lambda: Vec<Complex64> = phases.iter().map(|t| Complex64::from_polar(1.0, *t)).collect();
            if phase_gap(&lambda) > 1e-3 {
                return Mat::from_diagonal(&nalgebra::DVector::from_vec(lambda));
            }
        }
    }
}

/// 2/(1 − e^{iφ}) = 1 + i·cot(φ/2), free of the cancellation in 1 − e^{iφ}.
fn two_over_one_minus(phi: f64) -> Complex64 {
    Complex64::new(1.0, 1.0 / (phi / 2.0).tan())
}

/// Smallest angular distance between two of the given unit eigenvalues.
pub fn phase_gap(lambda: &[Complex64]) -> f64 {
    let mut gap = std::f64::consts::PI;
    for a in 0..lambda.len() {
        for b in a + 1..lambda.len() {
            gap = gap.min((lambda[a] / lambda[b]).arg().abs());
        }
    }
    gap
}

/// A representation whose boundary moments are regular diagonal unitaries.
#[derive(Clone, Debug)]
pub struct CrossSectionPoint {
    pub point: RepPoint,
    pub moments: Vec<Mat>,
    /// Eigenvalue-phase gap of each μ_i.
    pub gaps: Vec<f64>,
}

impl CrossSectionPoint {
    pub fn new(cc: &CompactContext, m: RepPoint) -> Result<Self> {
        m.check(&cc.ctx)?;
        let mut moments = Vec::new();
        let mut gaps = Vec::new();
        for i in 1..=m.spec.boundary_count {
            let mu = m.boundary_moment(i)?;
            let (_, gap) = cc
                .regular_eigenvalues(&mu)
                .map_err(|e| Error::NumericDomain(format!("point is off the cross-section at p_{i}: {e}")))?;
            moments.push(mu);
            gaps.push(gap);
        }
        Ok(CrossSectionPoint {
            point: m,
            moments,
            gaps,
        })
    }

    pub fn moment(&self, i: usize) -> &Mat {
        &self.moments[i - 1]
    }
}

/// Conjugates each μ_i to diagonal form with eigenvalues in increasing
/// phase order. Returns the point on L and the action used.
pub fn project_to_cross_section(cc: &CompactContext, m: &RepPoint) -> Result<(CrossSectionPoint, GroupAction)> {
    let n = cc.n();
    let mut elems = Vec::new();
    for i in 1..=m.spec.boundary_count {
        let mu = m.boundary_moment(i)?;
        let (q, t) = nalgebra::Schur::new(mu).unpack();
        let lambda: Vec<Complex64> = (0..n).map(|a| t[(a, a)]).collect();
        let gap = phase_gap(&lambda);
        if gap <= TAU_REG {
            return Err(Error::NumericDomain(format!(
                "μ_{i} has a near-degenerate spectrum (phase gap {gap:e})"
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|a, b| lambda[*a].arg().total_cmp(&lambda[*b].arg()));
        let mut cols = Mat::zeros(n, n);
        for (k, &a) in order.iter().enumerate() {
            let col = q.column(a);
            let pivot = (0..n)
                .max_by(|x, y| col[*x].norm().total_cmp(&col[*y].norm()))
                .unwrap();
            let phase = col[pivot].conj() / col[pivot].norm();
            cols.set_column(k, &(col * phase));
        }
        elems.push(cols.adjoint());
    }
    let action = GroupAction { elems };
    let mut point = CrossSectionPoint::new(cc, m.act(&action)?)?;
    point.moments = point.moments.iter().map(|x| cc.pr_t(x)).collect();
    Ok((point, action))
}

/// The cross-section bracket: endpoint terms corrected by Θ_{μ_i}, crossing
/// terms as on the full representation space.
#[allow(clippy::too_many_arguments)]
pub fn bracket_cross(
    cc: &CompactContext,
    phi: &Observable,
    wa: &GeneratorWord,
    psi: &Observable,
    wb: &GeneratorWord,
    data: &IntersectionData,
    m: &CrossSectionPoint,
) -> Result<BracketParts> {
    let ctx = &cc.ctx;
    let ha = m.point.holonomy(wa)?;
    let hb = m.point.holonomy(wb)?;
    let mut endpoint = 0.0;
    for i in End::BOTH {
        for j in End::BOTH {
            let e = data.endpoint(i, j);
            let Some(p) = e.shared else { continue };
            let s = e.sign.to_f64().unwrap();
            if s == 0.0 {
                continue;
            }
            let x = end_gradient(ctx, phi, &ha, i)?;
            let y = end_gradient(ctx, psi, &hb, j)?;
            let h = m.moment(p);
            let a = if e.alpha_left {
                ctx.form(&cc.apply_theta(h, &x)?, &y)
            } else {
                ctx.form(&x, &cc.apply_theta(h, &y)?)
            };
            endpoint += s * a;
        }
    }
    let mut crossing = 0.0;
    for q in &data.crossings {
        let g = m.point.holonomy(&q.alpha_then_beta())?;
        crossing += q.sign as f64 * crossing_term(ctx, phi, &ha, psi, &hb, &g)?;
    }
    Ok(BracketParts {
        endpoint,
        crossing,
        total: endpoint + crossing,
    })
}

fn action_slot(s: &SurfaceQp, marked: usize) -> Result<usize> {
    s.h.labels
        .iter()
        .position(|l| *l == marked)
        .ok_or_else(|| Error::InvalidArgument(format!("no action slot for p_{marked}")))
}

/// {f,g}_L = {f,g}_M + ½ Σ_i ⟨(Ad_{μ_i}+1)(Ad_{μ_i}−1)⁻¹ Pr χ^i_f, Pr χ^i_g⟩,
/// evaluated from the bivector of the full space.
pub fn bracket_cross_numeric(
    cc: &CompactContext,
    s: &SurfaceQp,
    f: &SurfaceFunction,
    g: &SurfaceFunction,
    m: &CrossSectionPoint,
) -> Result<f64> {
    let x = s.layout.to_chart(&m.point)?;
    let gf = s.gradient(f, &x)?;
    let gg = s.gradient(g, &x)?;
    let mut total = s.h.bracket(&gf, &gg);
    for i in 1..=m.point.spec.boundary_count {
        let p = action_slot(s, i)?;
        let cf = cc.pr_perp(&s.h.chi(&gf, p));
        let cg = cc.pr_perp(&s.h.chi(&gg, p));
        total += 0.5 * cc.ctx.form(&cc.apply_cayley(m.moment(i), &cf)?, &cg);
    }
    Ok(total)
}

/// P_L♯(df) in chart coordinates: P♯df minus the transverse part
/// Σ_i ρ^i(−½ (Ad_{μ_i}+1)(Ad_{μ_i}−1)⁻¹ Pr χ^i_f).
pub fn restricted_sharp(
    cc: &CompactContext,
    s: &SurfaceQp,
    f: &SurfaceFunction,
    m: &CrossSectionPoint,
) -> Result<Vec<Mat>> {
    let x = s.layout.to_chart(&m.point)?;
    let gf = s.gradient(f, &x)?;
    let mut v = s.h.bivector.sharp(&gf, &x);
    for i in 1..=m.point.spec.boundary_count {
        let p = action_slot(s, i)?;
        let y = cc.apply_cayley(m.moment(i), &cc.pr_perp(&s.h.chi(&gf, p)))? * c(-0.5);
        for (a, b) in v.iter_mut().zip(s.h.action_vector(p, &y, &x)) {
            *a -= b;
        }
    }
    Ok(v)
}

/// Largest off-diagonal entry of the central-difference derivative of any
/// μ_i along P_L♯(df).
pub fn moment_drift(
    cc: &CompactContext,
    s: &SurfaceQp,
    f: &SurfaceFunction,
    m: &CrossSectionPoint,
) -> Result<f64> {
    let x = s.layout.to_chart(&m.point)?;
    let v = restricted_sharp(cc, s, f, m)?;
    let shift = |t: f64| -> Vec<Mat> { x.iter().zip(&v).map(|(a, d)| a + d * c(t)).collect() };
    let (xp, xm) = (shift(FD_STEP), shift(-FD_STEP));
    let (ip, im) = (inverses(&xp)?, inverses(&xm)?);
    let words = s
        .h
        .moments
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("structure has no moment map".into()))?;
    let mut drift: f64 = 0.0;
    for w in words {
        let mu = w.eval(&x, &inverses(&x)?);
        let d = (w.eval(&xp, &ip) - w.eval(&xm, &im)) * c(0.5 / FD_STEP);
        let rel = inverse(&mu)? * d;
        drift = drift.max(max_abs(&cc.pr_perp(&rel)));
    }
    Ok(drift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surfaces::{polygon_model, realize_pair, SurfaceSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> GeneratorWord {
        GeneratorWord::parse(s).unwrap()
    }

    #[test]
    fn theta_plus_transpose_is_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 3] {
            let cc = CompactContext::new(n);
            for _ in 0..50 {
                let h = cc.random_regular(&mut rng);
                let t = cc.theta(&h).unwrap();
                let tt = cc.theta_transpose(&h).unwrap();
                let d = t.nrows();
                let two = DMatrix::<f64>::identity(d, d) * 2.0;
                assert!((&t + &tt - two).amax() < 1e-12);
                assert!((t.transpose() - &tt).amax() < 1e-12);
            }
        }
    }

    #[test]
    fn theta_fixes_the_torus() {
        let cc = CompactContext::new(3);
        let h = cc.random_regular(&mut ChaCha8Rng::seed_from_u64(2));
        for x in cc.torus_basis() {
            assert!(max_abs(&(cc.apply_theta(&h, &x).unwrap() - &x)) < 1e-15);
        }
    }

    #[test]
    fn perp_form_is_half_cotangent() {
        let cc = CompactContext::new(2);
        for theta in [0.3, 1.1, 2.5, -0.7] {
            let h = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![
                Complex64::from_polar(1.0, theta),
                Complex64::from_polar(1.0, -theta),
            ]));
            let f = cc.p_perp_form(&h).unwrap();
            let expected = 0.5 / theta.tan();
            assert!((f[(0, 1)] - expected).abs() < 1e-12);
            assert!((f[(1, 0)] + expected).abs() < 1e-12);
            assert!(f[(0, 0)].abs() < 1e-12 && f[(1, 1)].abs() < 1e-12);
        }
        let h = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex64::i(), -Complex64::i()]));
        assert!(cc.p_perp_form(&h).unwrap().amax() < 1e-12);
    }

    #[test]
    fn perp_form_is_skew() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cc = CompactContext::new(3);
        for _ in 0..10 {
            let f = cc.p_perp_form(&cc.random_regular(&mut rng)).unwrap();
            assert!((&f + f.transpose()).amax() < 1e-12);
        }
    }

    #[test]
    fn degenerate_spectrum_is_rejected() {
        let cc = CompactContext::new(2);
        let h = Mat::from_diagonal(&nalgebra::DVector::from_vec(vec![Complex64::i(), Complex64::i()]));
        assert!(matches!(cc.theta(&h), Err(Error::NumericDomain(_))));
        let spec = SurfaceSpec::new(0, 2).unwrap();
        let m = RepPoint::new(spec, vec![h.clone(), crate::lie::identity(2)]).unwrap();
        assert!(matches!(project_to_cross_section(&cc, &m), Err(Error::NumericDomain(_))));
    }

    #[test]
    fn projection_diagonalizes_the_moments() {
        let cc = CompactContext::new(2);
        let spec = SurfaceSpec::new(1, 2).unwrap();
        for seed in 0..5 {
            let m = RepPoint::random(&cc.ctx, spec, seed).unwrap();
            let (p, k) = project_to_cross_section(&cc, &m).unwrap();
            for i in 1..=2 {
                let mu = m.boundary_moment(i).unwrap();
                let conj = &k.elems[i - 1] * mu * k.elems[i - 1].adjoint();
                let moved = p.point.boundary_moment(i).unwrap();
                assert!(max_abs(&(&conj - &moved)) < 1e-10);
                assert!(max_abs(&cc.pr_perp(&moved)) < 1e-10);
                let args: Vec<f64> = (0..2).map(|a| moved[(a, a)].arg()).collect();
                assert!(args[0] < args[1]);
            }
            let (again, _) = project_to_cross_section(&cc, &p.point).unwrap();
            for i in 1..=2 {
                assert!(max_abs(&(again.moment(i) - p.moment(i))) < 1e-10);
            }
        }
    }

    fn fixtures() -> Vec<(usize, usize, &'static str, &'static str)> {
        vec![
            (0, 2, "A_2", "B_2"),
            (0, 2, "A_2 B_2", "A_2"),
            (1, 1, "C_1", "D_1"),
            (1, 1, "C_1 D_1", "D_1^-1 C_1"),
        ]
    }

    #[test]
    fn both_bracket_routes_agree() {
        let cc = CompactContext::new(2);
        for (g, b, wa, wb) in fixtures() {
            let spec = SurfaceSpec::new(g, b).unwrap();
            let pm = polygon_model(&spec);
            let s = SurfaceQp::build(&spec, &cc.ctx).unwrap();
            let (_, _, data) = realize_pair(&w(wa), &w(wb), &pm, 0).unwrap();
            let (_, _, back) = realize_pair(&w(wb), &w(wa), &pm, 0).unwrap();
            for seed in 0..5 {
                let m = RepPoint::random(&cc.ctx, spec, seed).unwrap();
                let (p, _) = project_to_cross_section(&cc, &m).unwrap();
                for (phi, psi) in [
                    (Observable::entry(0, 1), Observable::entry(1, 1)),
                    (Observable::trace(), Observable::entry(1, 0)),
                ] {
                    let comb = bracket_cross(&cc, &phi, &w(wa), &psi, &w(wb), &data, &p).unwrap();
                    let num = bracket_cross_numeric(
                        &cc,
                        &s,
                        &SurfaceFunction::holonomy(phi.clone(), w(wa)),
                        &SurfaceFunction::holonomy(psi.clone(), w(wb)),
                        &p,
                    )
                    .unwrap();
                    assert!((comb.total - num).abs() < 1e-7, "{wa} {wb}: {comb:?} vs {num}");
                    let rev = bracket_cross(&cc, &psi, &w(wb), &phi, &w(wa), &back, &p).unwrap();
                    assert!((comb.total + rev.total).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn moments_stay_diagonal_along_the_cross_section() {
        let cc = CompactContext::new(2);
        for (g, b, wa, _) in fixtures() {
            let spec = SurfaceSpec::new(g, b).unwrap();
            let s = SurfaceQp::build(&spec, &cc.ctx).unwrap();
            let m = RepPoint::random(&cc.ctx, spec, 9).unwrap();
            let (p, _) = project_to_cross_section(&cc, &m).unwrap();
            let f = SurfaceFunction::holonomy(Observable::entry(0, 1), w(wa));
            assert!(moment_drift(&cc, &s, &f, &p).unwrap() < 1e-6);
        }
    }

    #[test]
    fn off_cross_section_point_is_rejected() {
        let cc = CompactContext::new(2);
        let spec = SurfaceSpec::new(1, 1).unwrap();
        let m = RepPoint::random(&cc.ctx, spec, 1).unwrap();
        assert!(CrossSectionPoint::new(&cc, m).is_err());
    }

    #[test]
    fn entry_brackets_carry_torus_characters() {
        use crate::lie::Part;
        let cc = CompactContext::new(2);
        let spec = SurfaceSpec::new(0, 2).unwrap();
        let pm = polygon_model(&spec);
        let s = SurfaceQp::build(&spec, &cc.ctx).unwrap();
        let (wa, wb) = (w("A_2"), w("A_2 B_2"));
        let (_, _, data) = realize_pair(&wa, &wb, &pm, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let m = RepPoint::random(&cc.ctx, spec, 3).unwrap();
        let (p, _) = project_to_cross_section(&cc, &m).unwrap();
        let t = GroupAction {
            elems: (0..2).map(|_| cc.random_regular(&mut rng)).collect(),
        };
        let moved = CrossSectionPoint::new(&cc, p.point.act(&t).unwrap()).unwrap();
        let (i, j, k, l) = (0, 1, 1, 1);
        let complex_bracket = |q: &CrossSectionPoint| {
            let part = |a: Part, b: Part| {
                bracket_cross(
                    &cc,
                    &Observable::Entry { i, j, part: a },
                    &wa,
                    &Observable::Entry { i: k, j: l, part: b },
                    &wb,
                    &data,
                    q,
                )
                .unwrap()
                .total
            };
            Complex64::new(
                part(Part::Re, Part::Re) - part(Part::Im, Part::Im),
                part(Part::Re, Part::Im) + part(Part::Im, Part::Re),
            )
        };
        let character = |word: &GeneratorWord, a: usize, b: usize| {
            t.elems[word.source - 1][(a, a)] * t.elems[word.target - 1][(b, b)].conj()
        };
        let expected = complex_bracket(&p) * character(&wa, i, j) * character(&wb, k, l);
        assert!((complex_bracket(&moved) - expected).norm() < 1e-8);
        let f = SurfaceFunction::holonomy(Observable::entry(i, j), wa.clone());
        let g = SurfaceFunction::holonomy(Observable::trace(), wb.clone());
        let before = bracket_cross_numeric(&cc, &s, &f, &g, &p).unwrap();
        let fr = SurfaceFunction::holonomy(Observable::Entry { i, j, part: Part::Im }, wa.clone());
        let before_im = bracket_cross_numeric(&cc, &s, &fr, &g, &p).unwrap();
        let after = Complex64::new(
            bracket_cross_numeric(&cc, &s, &f, &g, &moved).unwrap(),
            bracket_cross_numeric(&cc, &s, &fr, &g, &moved).unwrap(),
        );
        let ch = character(&wa, i, j);
        assert!((after - Complex64::new(before, before_im) * ch).norm() < 1e-8);
    }
}
