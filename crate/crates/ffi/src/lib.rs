//! C ABI for `surface_qp`.
//!
//! All functions return an [`SqpStatus`]. On failure the message is available
//! from [`sqp_last_error`] until the next call on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use surface_qp::cli::parse_observable;
use surface_qp::error::Error;
use surface_qp::lie::{AlgebraContext, GroupKind};
use surface_qp::quasipoisson::{bracket_combinatorial, SurfaceFunction, SurfaceQp};
use surface_qp::repspace::RepPoint;
use surface_qp::suites::{run_suite, Suite, SuiteConfig};
use surface_qp::surfaces::{algebraic_intersection, polygon_model, realize_pair, GeneratorWord, PolygonModel, SurfaceSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqpStatus {
    Ok = 0,
    InvalidSurface = 1,
    InvalidWord = 2,
    DegeneratePath = 3,
    InvalidDiagram = 4,
    NotGeneralPosition = 5,
    Singular = 6,
    NumericDomain = 7,
    InvalidArgument = 8,
    Parse = 9,
    NullPointer = 10,
    Panic = 11,
    BufferTooSmall = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SqpGroup {
    Gl = 0,
    U = 1,
}

/// Opaque surface handle.
pub struct SqpSurface {
    spec: SurfaceSpec,
    pm: PolygonModel,
}

/// Opaque point of the representation space.
pub struct SqpPoint {
    ctx: AlgebraContext,
    point: RepPoint,
}

/// Outcome of a verification suite.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct SqpSuiteSummary {
    pub pass: bool,
    pub fixture_count: usize,
    pub failures: usize,
    pub max_residual: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SqpStatus {
    match e {
        Error::InvalidSurface(_) => SqpStatus::InvalidSurface,
        Error::InvalidWord(_) => SqpStatus::InvalidWord,
        Error::DegeneratePath(_) => SqpStatus::DegeneratePath,
        Error::InvalidDiagram(_) => SqpStatus::InvalidDiagram,
        Error::NotGeneralPosition(_) => SqpStatus::NotGeneralPosition,
        Error::Singular(_) => SqpStatus::Singular,
        Error::NumericDomain(_) => SqpStatus::NumericDomain,
        Error::InvalidArgument(_) => SqpStatus::InvalidArgument,
        Error::Parse(_) => SqpStatus::Parse,
    }
}

struct Fail(SqpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SqpStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SqpStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            SqpStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(SqpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn cstr<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(SqpStatus::Parse, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(p: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(v);
    Ok(())
}

fn word(s: &str, spec: &SurfaceSpec) -> Result<GeneratorWord, Fail> {
    let w = GeneratorWord::parse(s)?;
    spec.check_word(&w)?;
    Ok(w)
}

/// Message of the last failed call on this thread, or "" after a success.
#[no_mangle]
pub extern "C" fn sqp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sqp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates the surface of the given genus with the given number of boundary components.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sqp_surface_new(genus: u32, boundary_count: u32, out: *mut *mut SqpSurface) -> SqpStatus {
    guard(|| {
        let spec = SurfaceSpec::new(genus as usize, boundary_count as usize)?;
        if spec.is_trivial() {
            return Err(Fail(SqpStatus::InvalidSurface, "the disk has no paths".into()));
        }
        let h = Box::new(SqpSurface { spec, pm: polygon_model(&spec) });
        write(out, Box::into_raw(h), "out")
    })
}

/// # Safety
/// `s` must come from [`sqp_surface_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sqp_surface_free(s: *mut SqpSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of generators of the fundamental groupoid.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqp_surface_generator_count(s: *const SqpSurface, out: *mut usize) -> SqpStatus {
    guard(|| {
        let s = deref(s, "surface")?;
        write(out, s.spec.coordinate_count(), "out")
    })
}

/// Seeded random point of Hom(Π, G^b) for GL_n(ℝ) or U(n).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn sqp_point_random(
    s: *const SqpSurface,
    group: SqpGroup,
    n: u32,
    seed: u64,
    out: *mut *mut SqpPoint,
) -> SqpStatus {
    guard(|| {
        let s = deref(s, "surface")?;
        let kind = match group {
            SqpGroup::Gl => GroupKind::GL,
            SqpGroup::U => GroupKind::U,
        };
        let ctx = AlgebraContext::new(kind, n as usize)?;
        let point = RepPoint::random(&ctx, s.spec, seed)?;
        write(out, Box::into_raw(Box::new(SqpPoint { ctx, point })), "out")
    })
}

/// # Safety
/// `p` must come from [`sqp_point_random`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn sqp_point_free(p: *mut SqpPoint) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Holonomy of a word as row-major n×n real and imaginary parts.
///
/// # Safety
/// `re` and `im` must each hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sqp_point_holonomy(
    p: *const SqpPoint,
    w: *const c_char,
    re: *mut f64,
    im: *mut f64,
    len: usize,
) -> SqpStatus {
    guard(|| {
        let p = deref(p, "point")?;
        let w = word(cstr(w, "word")?, &p.point.spec)?;
        let m = p.point.holonomy(&w)?;
        let n = p.ctx.n;
        if len < n * n {
            return Err(Fail(SqpStatus::BufferTooSmall, format!("need {} entries, got {len}", n * n)));
        }
        if re.is_null() || im.is_null() {
            return Err(null("output buffer"));
        }
        for i in 0..n {
            for j in 0..n {
                *re.add(i * n + j) = m[(i, j)].re;
                *im.add(i * n + j) = m[(i, j)].im;
            }
        }
        Ok(())
    })
}

/// Bracket {φ∘α, ψ∘β} at a point, by the intersection formula and by the
/// bivector. Observables use the CLI syntax: `entry:i,j[:re|im]`, `trace`, `trace:k`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sqp_bracket(
    s: *const SqpSurface,
    p: *const SqpPoint,
    alpha: *const c_char,
    phi: *const c_char,
    beta: *const c_char,
    psi: *const c_char,
    seed: u64,
    out_formula: *mut f64,
    out_numeric: *mut f64,
) -> SqpStatus {
    guard(|| {
        let s = deref(s, "surface")?;
        let p = deref(p, "point")?;
        if p.point.spec != s.spec {
            return Err(Fail(SqpStatus::InvalidArgument, "point lives on another surface".into()));
        }
        let wa = word(cstr(alpha, "alpha")?, &s.spec)?;
        let wb = word(cstr(beta, "beta")?, &s.spec)?;
        let phi = parse_observable(cstr(phi, "phi")?, &p.ctx)?;
        let psi = parse_observable(cstr(psi, "psi")?, &p.ctx)?;
        let (_, _, data) = realize_pair(&wa, &wb, &s.pm, seed)?;
        let comb = bracket_combinatorial(&p.ctx, &phi, &wa, &psi, &wb, &data, &p.point)?;
        let qp = SurfaceQp::build(&s.spec, &p.ctx)?;
        let num = qp.bracket_numeric(
            &SurfaceFunction::holonomy(phi, wa),
            &SurfaceFunction::holonomy(psi, wb),
            &p.point,
        )?;
        write(out_formula, comb.total, "out_formula")?;
        write(out_numeric, num, "out_numeric")
    })
}

/// Algebraic intersection number of two words as a fraction num/den.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sqp_intersection(
    s: *const SqpSurface,
    alpha: *const c_char,
    beta: *const c_char,
    seed: u64,
    out_num: *mut i64,
    out_den: *mut i64,
) -> SqpStatus {
    guard(|| {
        let s = deref(s, "surface")?;
        let wa = word(cstr(alpha, "alpha")?, &s.spec)?;
        let wb = word(cstr(beta, "beta")?, &s.spec)?;
        let (_, _, data) = realize_pair(&wa, &wb, &s.pm, seed)?;
        let q = algebraic_intersection(&data);
        let overflow = || Fail(SqpStatus::NumericDomain, "intersection does not fit in 64 bits".into());
        let num = i64::try_from(q.numer()).map_err(|_| overflow())?;
        let den = i64::try_from(q.denom()).map_err(|_| overflow())?;
        write(out_num, num, "out_num")?;
        write(out_den, den, "out_den")
    })
}

/// Runs a verification suite with its default configuration and the given seed.
///
/// # Safety
/// Pointers must be valid; `suite` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sqp_verify(suite: *const c_char, seed: u64, out: *mut SqpSuiteSummary) -> SqpStatus {
    guard(|| {
        let name = cstr(suite, "suite")?;
        let suite: Suite = name.parse()?;
        let mut cfg = SuiteConfig::new(suite);
        cfg.seed = seed;
        let r = run_suite(&cfg)?;
        let summary = SqpSuiteSummary {
            pass: r.pass,
            fixture_count: r.fixture_count,
            failures: r.failures,
            max_residual: r.max_residual,
        };
        write(out, summary, "out")
    })
}
