//! Machine-readable verification reports.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// Floats are written with 17 significant digits; non-finite values as null.
pub fn ser_f64<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    if !x.is_finite() {
        return s.serialize_none();
    }
    let raw = RawValue::from_string(format!("{x:.16e}")).map_err(serde::ser::Error::custom)?;
    raw.serialize(s)
}

fn ser_opt_f64<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser_f64(v, s),
        None => s.serialize_none(),
    }
}

/// One checked quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureResult {
    pub id: String,
    #[serde(serialize_with = "ser_opt_f64")]
    pub lhs: Option<f64>,
    #[serde(serialize_with = "ser_opt_f64")]
    pub rhs: Option<f64>,
    #[serde(serialize_with = "ser_f64")]
    pub residual: f64,
    #[serde(serialize_with = "ser_f64")]
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl FixtureResult {
    /// |lhs − rhs| ≤ tol.
    pub fn compare(id: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        let residual = (lhs - rhs).abs();
        FixtureResult {
            id: id.into(),
            lhs: Some(lhs),
            rhs: Some(rhs),
            residual,
            tolerance: tol,
            pass: residual <= tol,
            detail: None,
        }
    }

    /// A residual that must not exceed tol.
    pub fn bound(id: impl Into<String>, residual: f64, tol: f64) -> Self {
        FixtureResult::compare(id, residual, 0.0, tol)
    }

    /// Sensitivity check: passes when the residual exceeds the threshold.
    pub fn exceeds(id: impl Into<String>, residual: f64, threshold: f64) -> Self {
        FixtureResult {
            id: id.into(),
            lhs: Some(residual),
            rhs: Some(0.0),
            residual,
            tolerance: threshold,
            pass: residual > threshold,
            detail: Some("sensitivity: residual must exceed tolerance".into()),
        }
    }

    /// An exact comparison with zero tolerance.
    pub fn exact(id: impl Into<String>, equal: bool, detail: impl Into<String>) -> Self {
        FixtureResult {
            id: id.into(),
            lhs: None,
            rhs: None,
            residual: if equal { 0.0 } else { 1.0 },
            tolerance: 0.0,
            pass: equal,
            detail: Some(detail.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub timestamp_unix: u64,
    pub group: String,
    pub n: usize,
    pub seed: u64,
    pub fixture_count: usize,
    pub failures: usize,
    #[serde(serialize_with = "ser_f64")]
    pub max_residual: f64,
    pub pass: bool,
    /// Symbolic bracket as an s-expression, when one was computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<String>,
    /// Algebraic intersection number of the two paths, as a rational.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub intersection: Option<String>,
    pub fixtures: Vec<FixtureResult>,
}

impl Report {
    pub fn new(suite: &str, group: &str, n: usize, seed: u64, fixtures: Vec<FixtureResult>) -> Self {
        let failures = fixtures.iter().filter(|f| !f.pass).count();
        let max_residual = fixtures
            .iter()
            .filter(|f| f.detail.as_deref() != Some("sensitivity: residual must exceed tolerance"))
            .map(|f| f.residual)
            .fold(0.0, f64::max);
        let timestamp_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report {
            suite: suite.to_string(),
            timestamp_unix,
            group: group.to_string(),
            n,
            seed,
            fixture_count: fixtures.len(),
            failures,
            max_residual,
            pass: failures == 0 && !fixtures.is_empty(),
            normal_form: None,
            intersection: None,
            fixtures,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn failed(&self) -> impl Iterator<Item = &FixtureResult> {
        self.fixtures.iter().filter(|f| !f.pass)
    }
}
