//! Matrix Lie group and algebra kernel.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat = DMatrix<Complex64>;

/// Finite-difference step for generic observables.
pub const FD_STEP: f64 = 1e-5;
/// Invertibility threshold on |det|.
pub const TAU_INV: f64 = 1e-10;
/// Unitarity / anti-Hermitian threshold.
pub const TAU_ORTH: f64 = 1e-10;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn unit(n: usize, p: usize, q: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m[(p, q)] = c(1.0);
    m
}

pub fn identity(n: usize) -> Mat {
    Mat::identity(n, n)
}

pub fn max_abs(m: &Mat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn inverse(g: &Mat) -> Result<Mat> {
    let d = g.clone().lu().determinant().norm();
    if !(d > TAU_INV) {
        return Err(Error::Singular(d));
    }
    g.clone()
        .lu()
        .try_inverse()
        .ok_or(Error::Singular(d))
}

pub fn commutator(x: &Mat, y: &Mat) -> Mat {
    x * y - y * x
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    /// GL_n(ℝ) with the trace form.
    GL,
    /// U(n) with ⟨x,y⟩ = −Re Tr(xy).
    U,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::GL => f.write_str("gl"),
            GroupKind::U => f.write_str("u"),
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(GroupKind::GL),
            "u" => Ok(GroupKind::U),
            _ => Err(Error::Parse(format!("unknown group `{s}`"))),
        }
    }
}

/// Bases {e_k}, {f_k} with ⟨e_k, f_l⟩ = δ_kl.
#[derive(Clone, Debug)]
pub struct DualBasisPair {
    pub e: Vec<Mat>,
    pub f: Vec<Mat>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraContext {
    pub n: usize,
    pub kind: GroupKind,
}

impl AlgebraContext {
    pub fn new(kind: GroupKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix size must be positive".into()));
        }
        Ok(AlgebraContext { n, kind })
    }

    pub fn gl(n: usize) -> Self {
        AlgebraContext { n, kind: GroupKind::GL }
    }

    pub fn u(n: usize) -> Self {
        AlgebraContext { n, kind: GroupKind::U }
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn is_abelian(&self) -> bool {
        self.n == 1
    }

    pub fn form(&self, x: &Mat, y: &Mat) -> f64 {
        let t = x.component_mul(&y.transpose()).sum().re;
        match self.kind {
            GroupKind::GL => t,
            GroupKind::U => -t,
        }
    }

    /// The algebra element G with ⟨G, x⟩ = Re Tr(y x) for every x in the algebra.
    pub fn gradient_from_trace_dual(&self, y: &Mat) -> Mat {
        match self.kind {
            GroupKind::GL => y.map(|z| c(z.re)),
            GroupKind::U => (y - y.adjoint()) * c(-0.5),
        }
    }

    /// Orthogonal projection of an arbitrary matrix onto the algebra.
    pub fn project(&self, x: &Mat) -> Mat {
        match self.kind {
            GroupKind::GL => x.map(|z| c(z.re)),
            GroupKind::U => (x - x.adjoint()) * c(0.5),
        }
    }

    pub fn dual_basis(&self) -> DualBasisPair {
        let n = self.n;
        match self.kind {
            GroupKind::GL => {
                let mut e = Vec::new();
                let mut f = Vec::new();
                for p in 0..n {
                    for q in 0..n {
                        e.push(unit(n, p, q));
                        f.push(unit(n, q, p));
                    }
                }
                DualBasisPair { e, f }
            }
            GroupKind::U => {
                let i = Complex64::i();
                let s = c(std::f64::consts::FRAC_1_SQRT_2);
                let mut e = Vec::new();
                for p in 0..n {
                    e.push(unit(n, p, p) * i);
                }
                for p in 0..n {
                    for q in p + 1..n {
                        e.push((unit(n, p, q) - unit(n, q, p)) * s);
                        e.push((unit(n, p, q) + unit(n, q, p)) * (i * s));
                    }
                }
                DualBasisPair { f: e.clone(), e }
            }
        }
    }

    /// Dual pair from an arbitrary basis, via the inverse Gram matrix.
    pub fn dual_of(&self, e: Vec<Mat>) -> Result<DualBasisPair> {
        let d = e.len();
        if d != self.dim() {
            return Err(Error::InvalidArgument("basis has the wrong size".into()));
        }
        let gram = DMatrix::<f64>::from_fn(d, d, |k, l| self.form(&e[k], &e[l]));
        let inv = gram
            .try_inverse()
            .ok_or_else(|| Error::NumericDomain("degenerate Gram matrix".into()))?;
        let f = (0..d)
            .map(|k| {
                let mut acc = Mat::zeros(self.n, self.n);
                for l in 0..d {
                    acc += &e[l] * c(inv[(l, k)]);
                }
                acc
            })
            .collect();
        Ok(DualBasisPair { e, f })
    }

    /// Ad_g x = g x g⁻¹.
    pub fn ad(&self, g: &Mat, x: &Mat) -> Result<Mat> {
        Ok(g * x * inverse(g)?)
    }

    pub fn check_group_element(&self, g: &Mat) -> Result<()> {
        if g.nrows() != self.n || g.ncols() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected a {n}×{n} matrix",
                n = self.n
            )));
        }
        let d = g.clone().lu().determinant().norm();
        if !(d > TAU_INV) {
            return Err(Error::Singular(d));
        }
        match self.kind {
            GroupKind::GL => {
                if g.iter().any(|z| z.im != 0.0) {
                    return Err(Error::InvalidArgument("GL_n(ℝ) element has complex entries".into()));
                }
            }
            GroupKind::U => {
                let defect = max_abs(&(g.adjoint() * g - identity(self.n)));
                if defect > TAU_ORTH {
                    return Err(Error::NumericDomain(format!(
                        "matrix is not unitary (defect {defect:e})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn random_algebra_element<R: Rng>(&self, rng: &mut R, scale: f64) -> Mat {
        let n = self.n;
        let raw = Mat::from_fn(n, n, |_, _| match self.kind {
            GroupKind::GL => c(rng.gen_range(-scale..=scale)),
            GroupKind::U => {
                Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
            }
        });
        self.project(&raw)
    }

    /// Random group element with the sampling rule of the library.
    pub fn random_group_element<R: Rng>(&self, rng: &mut R) -> Result<Mat> {
        let n = self.n;
        match self.kind {
            GroupKind::GL => {
                for _ in 0..64 {
                    let g = identity(n) + Mat::from_fn(n, n, |_, _| c(0.3 * rng.gen_range(-1.0..=1.0)));
                    if g.clone().lu().determinant().norm() > 0.1 {
                        return Ok(g);
                    }
                }
                Err(Error::NumericDomain("resampling budget exhausted".into()))
            }
            GroupKind::U => {
                let raw = Mat::from_fn(n, n, |_, _| {
                    Complex64::new(rng.gen_range(-0.5..=0.5), rng.gen_range(-0.5..=0.5))
                });
                Ok(((&raw - raw.adjoint()) * c(0.5)).exp())
            }
        }
    }
}

/// Trivector φ = (1/12) Σ ⟨e_i,[e_j,e_k]⟩ f_i∧f_j∧f_k as a dense antisymmetric array.
#[derive(Clone, Debug)]
pub struct CartanTrivector {
    pub basis: DualBasisPair,
    pub dim: usize,
    pub coeffs: Vec<f64>,
}

impl CartanTrivector {
    pub fn coeff(&self, i: usize, j: usize, k: usize) -> f64 {
        self.coeffs[(i * self.dim + j) * self.dim + k]
    }

    /// φ evaluated on three covectors ⟨x,·⟩, ⟨y,·⟩, ⟨z,·⟩.
    pub fn evaluate(&self, ctx: &AlgebraContext, x: &Mat, y: &Mat, z: &Mat) -> f64 {
        let d = self.dim;
        let px: Vec<f64> = self.basis.f.iter().map(|f| ctx.form(x, f)).collect();
        let py: Vec<f64> = self.basis.f.iter().map(|f| ctx.form(y, f)).collect();
        let pz: Vec<f64> = self.basis.f.iter().map(|f| ctx.form(z, f)).collect();
        let mut acc = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let cijk = self.coeff(i, j, k);
                    if cijk != 0.0 {
                        acc += cijk * px[i] * py[j] * pz[k];
                    }
                }
            }
        }
        6.0 * acc
    }
}

pub fn cartan_trivector(ctx: &AlgebraContext, basis: &DualBasisPair) -> Result<CartanTrivector> {
    let d = basis.e.len();
    for k in 0..d {
        for l in 0..d {
            let g = ctx.form(&basis.e[k], &basis.f[l]);
            let want = if k == l { 1.0 } else { 0.0 };
            if (g - want).abs() > 1e-8 {
                return Err(Error::NumericDomain("basis pair is not dual".into()));
            }
        }
    }
    let mut coeffs = vec![0.0; d * d * d];
    for i in 0..d {
        for j in i + 1..d {
            for k in j + 1..d {
                let v = ctx.form(&basis.e[i], &commutator(&basis.e[j], &basis.e[k])) / 12.0;
                for (a, b, cc, s) in [
                    (i, j, k, v),
                    (j, k, i, v),
                    (k, i, j, v),
                    (j, i, k, -v),
                    (i, k, j, -v),
                    (k, j, i, -v),
                ] {
                    coeffs[(a * d + b) * d + cc] = s;
                }
            }
        }
    }
    Ok(CartanTrivector {
        basis: basis.clone(),
        dim: d,
        coeffs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Re,
    Im,
}

type GenericFn = Arc<dyn Fn(&Mat) -> f64 + Send + Sync>;

/// A real function on the group together with its two gradients.
#[derive(Clone)]
pub enum Observable {
    /// Real or imaginary part of the (i, j) entry, zero based.
    Entry { i: usize, j: usize, part: Part },
    /// Re Tr(g^k).
    PowerTrace { k: u32 },
    /// g ↦ Φ(g⁻¹).
    Inverse(Box<Observable>),
    /// g ↦ Φ(a g b).
    Translate { a: Mat, b: Mat, inner: Box<Observable> },
    /// Arbitrary function, differentiated numerically.
    Generic { name: String, f: GenericFn },
}

impl fmt::Debug for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl Observable {
    pub fn entry(i: usize, j: usize) -> Self {
        Observable::Entry { i, j, part: Part::Re }
    }

    pub fn trace() -> Self {
        Observable::PowerTrace { k: 1 }
    }

    pub fn generic(name: &str, f: impl Fn(&Mat) -> f64 + Send + Sync + 'static) -> Self {
        Observable::Generic {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }

    pub fn inverse(self) -> Self {
        Observable::Inverse(Box::new(self))
    }

    pub fn translate(self, a: Mat, b: Mat) -> Self {
        Observable::Translate {
            a,
            b,
            inner: Box::new(self),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Observable::Entry { i, j, part } => {
                let p = match part {
                    Part::Re => "re",
                    Part::Im => "im",
                };
                format!("{p}[{},{}]", i + 1, j + 1)
            }
            Observable::PowerTrace { k } => format!("retr^{k}"),
            Observable::Inverse(o) => format!("inv({})", o.describe()),
            Observable::Translate { inner, .. } => format!("translate({})", inner.describe()),
            Observable::Generic { name, .. } => format!("generic({name})"),
        }
    }

    /// True when the observable is a class function.
    pub fn is_conjugation_invariant(&self) -> bool {
        match self {
            Observable::PowerTrace { .. } => true,
            Observable::Inverse(o) => o.is_conjugation_invariant(),
            _ => false,
        }
    }

    /// Whether gradients are computed in closed form.
    pub fn is_closed_form(&self) -> bool {
        match self {
            Observable::Entry { .. } | Observable::PowerTrace { .. } => true,
            Observable::Inverse(o) => o.is_closed_form(),
            Observable::Translate { inner, .. } => inner.is_closed_form(),
            Observable::Generic { .. } => false,
        }
    }

    pub fn value(&self, g: &Mat) -> Result<f64> {
        Ok(match self {
            Observable::Entry { i, j, part } => {
                let z = g[(*i, *j)];
                match part {
                    Part::Re => z.re,
                    Part::Im => z.im,
                }
            }
            Observable::PowerTrace { k } => g.pow(*k).trace().re,
            Observable::Inverse(o) => o.value(&inverse(g)?)?,
            Observable::Translate { a, b, inner } => inner.value(&(a * g * b))?,
            Observable::Generic { f, .. } => f(g),
        })
    }

    fn raw_gradient(&self, g: &Mat, left: bool) -> Option<Mat> {
        let n = g.nrows();
        match self {
            Observable::Entry { i, j, part } => {
                let e = unit(n, *j, *i);
                let y = if left { e * g } else { g * e };
                Some(match part {
                    Part::Re => y,
                    Part::Im => y * Complex64::new(0.0, -1.0),
                })
            }
            Observable::PowerTrace { k } => Some(g.pow(*k) * c(*k as f64)),
            _ => None,
        }
    }

    /// Gradient along left-invariant fields:
    /// ⟨var_left(g), x⟩ = d/dt Φ(g·exp(tx)) at t = 0.
    pub fn var_left(&self, ctx: &AlgebraContext, g: &Mat) -> Result<Mat> {
        if let Some(y) = self.raw_gradient(g, true) {
            return Ok(ctx.gradient_from_trace_dual(&y));
        }
        match self {
            Observable::Inverse(o) => Ok(-o.var_right(ctx, &inverse(g)?)?),
            Observable::Translate { a, b, inner } => {
                let h = a * g * b;
                ctx.ad(b, &inner.var_left(ctx, &h)?)
            }
            _ => self.numeric_gradient(ctx, g, true),
        }
    }

    /// Gradient along right-invariant fields:
    /// ⟨var_right(g), x⟩ = d/dt Φ(exp(tx)·g) at t = 0.
    pub fn var_right(&self, ctx: &AlgebraContext, g: &Mat) -> Result<Mat> {
        if let Some(y) = self.raw_gradient(g, false) {
            return Ok(ctx.gradient_from_trace_dual(&y));
        }
        match self {
            Observable::Inverse(o) => Ok(-o.var_left(ctx, &inverse(g)?)?),
            Observable::Translate { a, b, inner } => {
                let h = a * g * b;
                ctx.ad(&inverse(a)?, &inner.var_right(ctx, &h)?)
            }
            _ => self.numeric_gradient(ctx, g, false),
        }
    }

    fn numeric_gradient(&self, ctx: &AlgebraContext, g: &Mat, left: bool) -> Result<Mat> {
        let basis = ctx.dual_basis();
        let mut out = Mat::zeros(ctx.n, ctx.n);
        for (e, f) in basis.e.iter().zip(&basis.f) {
            let plus = (e * c(FD_STEP)).exp();
            let minus = (e * c(-FD_STEP)).exp();
            let (gp, gm) = if left {
                (g * plus, g * minus)
            } else {
                (plus * g, minus * g)
            };
            let d = (self.value(&gp)? - self.value(&gm)?) / (2.0 * FD_STEP);
            out += f * c(d);
        }
        Ok(out)
    }
}

/// Serializable description of a built-in observable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ObservableSpec {
    /// One-based entry indices.
    Entry {
        i: usize,
        j: usize,
        #[serde(default = "default_part")]
        part: Part,
    },
    Trace {
        #[serde(default = "default_power")]
        power: u32,
    },
}

fn default_part() -> Part {
    Part::Re
}

fn default_power() -> u32 {
    1
}

impl ObservableSpec {
    pub fn build(&self, ctx: &AlgebraContext) -> Result<Observable> {
        match *self {
            ObservableSpec::Entry { i, j, part } => {
                if i == 0 || j == 0 || i > ctx.n || j > ctx.n {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i},{j}) out of range for n = {}",
                        ctx.n
                    )));
                }
                Ok(Observable::Entry {
                    i: i - 1,
                    j: j - 1,
                    part,
                })
            }
            ObservableSpec::Trace { power } => {
                if power == 0 {
                    return Err(Error::InvalidArgument("trace power must be positive".into()));
                }
                Ok(Observable::PowerTrace { k: power })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: &Mat, b: &Mat, tol: f64) -> bool {
        max_abs(&(a - b)) <= tol
    }

    fn observables(n: usize) -> Vec<Observable> {
        let mut v = vec![
            Observable::entry(0, n - 1),
            Observable::Entry { i: n - 1, j: 0, part: Part::Im },
            Observable::trace(),
            Observable::PowerTrace { k: 3 },
            Observable::entry(0, 0).inverse(),
        ];
        v.push(Observable::generic("det-re", |g: &Mat| g.determinant().re));
        v
    }

    #[test]
    fn entry_gradient_at_identity() {
        let ctx = AlgebraContext::gl(2);
        let g = Observable::entry(0, 1).var_left(&ctx, &identity(2)).unwrap();
        assert_eq!(g, unit(2, 1, 0));
    }

    #[test]
    fn trace_gradients_are_g() {
        let ctx = AlgebraContext::gl(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = ctx.random_group_element(&mut rng).unwrap();
        let t = Observable::trace();
        assert!(close(&t.var_left(&ctx, &g).unwrap(), &g, 1e-14));
        assert!(close(&t.var_right(&ctx, &g).unwrap(), &g, 1e-14));
    }

    #[test]
    fn inverse_trace_at_identity() {
        let ctx = AlgebraContext::gl(2);
        let o = Observable::trace().inverse();
        assert!(close(&o.var_left(&ctx, &identity(2)).unwrap(), &(-identity(2)), 1e-14));
    }

    #[test]
    fn gradients_match_finite_differences() {
        for ctx in [AlgebraContext::gl(2), AlgebraContext::u(2), AlgebraContext::gl(3)] {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..20 {
                let g = ctx.random_group_element(&mut rng).unwrap();
                let x = ctx.random_algebra_element(&mut rng, 1.0);
                for o in observables(ctx.n) {
                    let h = 1e-5;
                    let fd = |l: bool| {
                        let p = (&x * c(h)).exp();
                        let m = (&x * c(-h)).exp();
                        let (a, b) = if l { (&g * p, &g * m) } else { (p * &g, m * &g) };
                        (o.value(&a).unwrap() - o.value(&b).unwrap()) / (2.0 * h)
                    };
                    let l = ctx.form(&o.var_left(&ctx, &g).unwrap(), &x);
                    let r = ctx.form(&o.var_right(&ctx, &g).unwrap(), &x);
                    assert!((l - fd(true)).abs() < 1e-8, "{o:?} left {l} vs {}", fd(true));
                    assert!((r - fd(false)).abs() < 1e-8, "{o:?} right");
                }
            }
        }
    }

    #[test]
    fn adjoint_relates_the_two_gradients() {
        let ctx = AlgebraContext::gl(3);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = ctx.random_group_element(&mut rng).unwrap();
        for o in observables(3) {
            let l = o.var_left(&ctx, &g).unwrap();
            let r = o.var_right(&ctx, &g).unwrap();
            let tol = if o.is_closed_form() { 1e-12 } else { 1e-8 };
            assert!(close(&ctx.ad(&g, &l).unwrap(), &r, tol), "{o:?}");
        }
    }

    #[test]
    fn translation_and_inverse_rules() {
        let ctx = AlgebraContext::gl(2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let g = ctx.random_group_element(&mut rng).unwrap();
        let a = ctx.random_group_element(&mut rng).unwrap();
        let b = ctx.random_group_element(&mut rng).unwrap();
        let phi = Observable::entry(1, 0);
        let t = phi.clone().translate(a.clone(), b.clone());
        let want = ctx.ad(&b, &phi.var_left(&ctx, &(&a * &g * &b)).unwrap()).unwrap();
        assert!(close(&t.var_left(&ctx, &g).unwrap(), &want, 1e-12));
        let inv = phi.clone().inverse();
        let gi = inverse(&g).unwrap();
        assert_eq!(inv.value(&g).unwrap(), gi[(1, 0)].re);
        let want = -phi.var_right(&ctx, &gi).unwrap();
        assert!(close(&inv.var_left(&ctx, &g).unwrap(), &want, 1e-12));
    }

    #[test]
    fn form_is_ad_invariant() {
        for ctx in [AlgebraContext::gl(3), AlgebraContext::u(3)] {
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..10 {
                let g = ctx.random_group_element(&mut rng).unwrap();
                let x = ctx.random_algebra_element(&mut rng, 1.0);
                let y = ctx.random_algebra_element(&mut rng, 1.0);
                let lhs = ctx.form(&ctx.ad(&g, &x).unwrap(), &ctx.ad(&g, &y).unwrap());
                assert!((lhs - ctx.form(&x, &y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn dual_bases_are_dual() {
        for ctx in [AlgebraContext::gl(2), AlgebraContext::u(3)] {
            let b = ctx.dual_basis();
            for (k, e) in b.e.iter().enumerate() {
                for (l, f) in b.f.iter().enumerate() {
                    let want = if k == l { 1.0 } else { 0.0 };
                    assert!((ctx.form(e, f) - want).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn trivector_is_basis_independent() {
        let ctx = AlgebraContext::gl(2);
        let std = ctx.dual_basis();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let other: Vec<Mat> = (0..4).map(|_| ctx.random_algebra_element(&mut rng, 1.0)).collect();
        let other = ctx.dual_of(other).unwrap();
        let p1 = cartan_trivector(&ctx, &std).unwrap();
        let p2 = cartan_trivector(&ctx, &other).unwrap();
        for x in &std.e {
            for y in &std.e {
                for z in &std.e {
                    let a = p1.evaluate(&ctx, x, y, z);
                    let b = p2.evaluate(&ctx, x, y, z);
                    assert!((a - b).abs() < 1e-12);
                    assert!((a - 0.5 * ctx.form(x, &commutator(y, z))).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn trivector_antisymmetry_and_abelian_case() {
        let ctx = AlgebraContext::u(2);
        let phi = cartan_trivector(&ctx, &ctx.dual_basis()).unwrap();
        assert!(phi.coeffs.iter().any(|c| c.abs() > 1e-3));
        let d = phi.dim;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    assert_eq!(phi.coeff(i, j, k), -phi.coeff(j, i, k));
                    assert_eq!(phi.coeff(i, j, k), -phi.coeff(i, k, j));
                }
            }
        }
        let ab = AlgebraContext::gl(1);
        assert!(cartan_trivector(&ab, &ab.dual_basis()).unwrap().coeffs.iter().all(|c| *c == 0.0));
    }
}
