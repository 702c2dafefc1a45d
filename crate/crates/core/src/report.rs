//! CSV and JSON serialization of results.
//!
//! Rationals are written as `"num/den"` strings and floats with 17
//! significant digits, so that output is reproducible byte for byte.

use std::time::{SystemTime, UNIX_EPOCH};

use serde::ser::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::direct::OracleResult;
use crate::dist::{IntDist, TailSide};
use crate::error::Result;
use crate::gauss::{CusickDensity, ErrorBudget, GaussReport};
use crate::rational::{self, Q};
use crate::words::Pattern;

/// A float printed with 17 significant digits; non-finite values become `null`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F17(pub f64);

impl F17 {
    pub fn text(self) -> String {
        if self.0.is_finite() {
            format!("{:.16e}", self.0)
        } else {
            "null".into()
        }
    }
}

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(self.text()).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

/// An exact rational as `"num/den"`.
#[derive(Clone, Debug, PartialEq)]
pub struct Frac(pub Q);

impl Serialize for Frac {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational::to_fraction_string(&self.0))
    }
}

/// Provenance block attached to JSON output unless disabled.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Meta {
    pub generator: String,
    pub timestamp: u64,
}

impl Meta {
    pub fn now() -> Self {
        Self {
            generator: format!("blockdelta {}", env!("CARGO_PKG_VERSION")),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut out = csv::Writer::from_writer(Vec::new());
    out.write_record(header)?;
    for row in rows {
        out.write_record(&row)?;
    }
    let bytes = out.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn support_of(dist: &IntDist) -> Vec<(i64, Frac)> {
    dist.support().iter().map(|(&k, p)| (k, Frac(p.clone()))).collect()
}

#[derive(serde::Serialize)]
struct DistWire<'a> {
    w: String,
    t: u128,
    support: Vec<(i64, Frac)>,
    tail_bound: Frac,
    tail_side: TailSide,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<&'a Meta>,
}

/// `{"w","t","support":[[k,"p/q"],...],"tail_bound":"p/q","tail_side"}`.
pub fn dist_json(w: &Pattern, t: u128, dist: &IntDist, meta: Option<&Meta>) -> Result<String> {
    to_json(&DistWire {
        w: w.to_string(),
        t,
        support: support_of(dist),
        tail_bound: Frac(dist.tail_bound().clone()),
        tail_side: dist.tail_side(),
        meta,
    })
}

/// Columns `k,probability,probability_float`.
pub fn dist_csv(dist: &IntDist) -> Result<String> {
    csv_text(
        &["k", "probability", "probability_float"],
        dist.support().iter().map(|(k, p)| {
            vec![
                k.to_string(),
                rational::to_fraction_string(p),
                F17(rational::to_f64(p)).text(),
            ]
        }),
    )
}

#[derive(serde::Serialize)]
struct OracleWire<'a> {
    w: String,
    t: u128,
    lambda: u32,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    kmax: Option<i64>,
    counts: Vec<(i64, u128)>,
    residual: u128,
    support: Vec<(i64, Frac)>,
    matches_cf: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<&'a Meta>,
}

/// The oracle counts, their normalized `support` (same form as [`dist_json`]),
/// and whether they agree with the characteristic-function route.
pub fn oracle_json(result: &OracleResult, matches_cf: bool, meta: Option<&Meta>) -> Result<String> {
    let mut dist = result.to_dist();
    if let Some(k) = result.kmax {
        dist = IntDist::new(dist.window(k), Q::default(), TailSide::None);
    }
    to_json(&OracleWire {
        w: result.w.to_string(),
        t: result.t,
        lambda: result.lambda,
        exact: result.exact,
        kmax: result.kmax,
        counts: result.counts.iter().map(|(&k, &c)| (k, c)).collect(),
        residual: result.residual,
        support: support_of(&dist),
        matches_cf,
        meta,
    })
}

/// Columns `k,count`.
pub fn oracle_csv(result: &OracleResult) -> Result<String> {
    csv_text(
        &["k", "count"],
        result.counts.iter().map(|(k, c)| vec![k.to_string(), c.to_string()]),
    )
}

/// One row of a variance table.
#[derive(Clone, Debug, serde::Serialize)]
pub struct VarRow {
    pub t: u128,
    pub v: Frac,
    pub v_float: F17,
    pub q: Frac,
    pub q_case: crate::moments::QCase,
    pub occ01: u32,
    pub lower_bound: Frac,
    pub upper_bound: Frac,
}

pub const VAR_HEADER: [&str; 8] = ["t", "v", "v_float", "q", "q_case", "occ01", "lower_bound", "upper_bound"];

pub fn var_csv(rows: &[VarRow]) -> Result<String> {
    csv_text(
        &VAR_HEADER,
        rows.iter().map(|r| {
            vec![
                r.t.to_string(),
                rational::to_fraction_string(&r.v.0),
                r.v_float.text(),
                rational::to_fraction_string(&r.q.0),
                r.q_case.to_string(),
                r.occ01.to_string(),
                rational::to_fraction_string(&r.lower_bound.0),
                rational::to_fraction_string(&r.upper_bound.0),
            ]
        }),
    )
}

#[derive(serde::Serialize)]
struct Rows<'a, T> {
    w: String,
    rows: &'a [T],
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<&'a Meta>,
}

pub fn rows_json<T: Serialize>(w: &Pattern, rows: &[T], meta: Option<&Meta>) -> Result<String> {
    to_json(&Rows {
        w: w.to_string(),
        rows,
        meta,
    })
}

/// Columns `k,delta_exact,delta_float,gaussian,abs_error`.
pub fn gauss_csv(report: &GaussReport) -> Result<String> {
    csv_text(
        &["k", "delta_exact", "delta_float", "gaussian", "abs_error"],
        report.rows.iter().map(|r| {
            vec![
                r.k.to_string(),
                rational::to_fraction_string(&r.delta),
                F17(r.delta_f64).text(),
                F17(r.gaussian).text(),
                F17(r.abs_error).text(),
            ]
        }),
    )
}

#[derive(serde::Serialize)]
struct GaussWire<'a> {
    w: String,
    t: u128,
    n: u32,
    v: Frac,
    v_float: F17,
    max_error: F17,
    #[serde(skip_serializing_if = "Option::is_none")]
    bound: Option<F17>,
    tail: Frac,
    rows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<BudgetWire>,
    #[serde(skip_serializing_if = "Option::is_none")]
    meta: Option<&'a Meta>,
}

#[derive(serde::Serialize)]
struct BudgetWire {
    n: u32,
    theta0: F17,
    v: F17,
    gaussian_tail: F17,
    approximation: F17,
    cf_tail: F17,
    total: F17,
    cf_tail_applies: bool,
}

impl From<&ErrorBudget> for BudgetWire {
    fn from(b: &ErrorBudget) -> Self {
        Self {
            n: b.n,
            theta0: F17(b.theta0),
            v: F17(b.v),
            gaussian_tail: F17(b.gaussian_tail),
            approximation: F17(b.approximation),
            cf_tail: F17(b.cf_tail),
            total: F17(b.total),
            cf_tail_applies: b.cf_tail_applies,
        }
    }
}

/// Summary of a comparison, with the error budget when it is defined.
pub fn gauss_json(report: &GaussReport, budget: Option<&ErrorBudget>, meta: Option<&Meta>) -> Result<String> {
    to_json(&GaussWire {
        w: report.w.to_string(),
        t: report.t,
        n: report.n,
        v: Frac(report.v.clone()),
        v_float: F17(rational::to_f64(&report.v)),
        max_error: F17(report.max_error),
        bound: report.bound.map(F17),
        tail: Frac(report.tail.clone()),
        rows: report.rows.len(),
        budget: budget.map(BudgetWire::from),
        meta,
    })
}

/// The error budget alone, one field per term.
pub fn budget_json(budget: &ErrorBudget) -> Result<String> {
    to_json(&BudgetWire::from(budget))
}

/// One point of a scaling experiment over a family of `t`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ScalingRow {
    pub n: u32,
    pub t: u128,
    pub v: F17,
    pub max_error: F17,
    /// `max_error · N / (log N)²`.
    pub scaled: F17,
}

pub fn scaling_csv(rows: &[ScalingRow]) -> Result<String> {
    csv_text(
        &["n", "t", "v", "max_error", "scaled"],
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.t.to_string(),
                r.v.text(),
                r.max_error.text(),
                r.scaled.text(),
            ]
        }),
    )
}

/// Renders a Cusick density: the exact value, or `lower..upper`.
pub fn cusick_text(c: &CusickDensity) -> String {
    if c.is_exact() {
        rational::to_fraction_string(&c.lower)
    } else {
        format!(
            "{}..{}",
            rational::to_fraction_string(&c.lower),
            rational::to_fraction_string(&c.upper)
        )
    }
}

/// Columns `t,value`, rows in the given order.
pub fn scan_csv(rows: &[(u128, String)]) -> Result<String> {
    csv_text(&["t", "value"], rows.iter().map(|(t, v)| vec![t.to_string(), v.clone()]))
}

#[derive(serde::Serialize)]
struct ScanRow<'a> {
    t: u128,
    value: &'a str,
}

pub fn scan_json(w: &Pattern, field: &str, rows: &[(u128, String)], meta: Option<&Meta>) -> Result<String> {
    #[derive(serde::Serialize)]
    struct Wire<'a> {
        w: String,
        field: &'a str,
        rows: Vec<ScanRow<'a>>,
        #[serde(skip_serializing_if = "Option::is_none")]
        meta: Option<&'a Meta>,
    }
    to_json(&Wire {
        w: w.to_string(),
        field,
        rows: rows.iter().map(|(t, v)| ScanRow { t: *t, value: v }).collect(),
        meta,
    })
}

/// Outcome of one family of checks in `verify`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct CheckRow {
    pub check: String,
    pub checked: usize,
    pub failures: usize,
    pub status: String,
}

impl CheckRow {
    pub fn new(check: &str, checked: usize, failures: usize, on_grid: bool) -> Self {
        let status = match (failures, on_grid) {
            (0, true) => "verified on grid",
            (0, false) => "pass",
            _ => "FAIL",
        };
        Self {
            check: check.into(),
            checked,
            failures,
            status: status.into(),
        }
    }
}

pub fn checks_csv(rows: &[CheckRow]) -> Result<String> {
    csv_text(
        &["check", "checked", "failures", "status"],
        rows.iter().map(|r| {
            vec![
                r.check.clone(),
                r.checked.to_string(),
                r.failures.to_string(),
                r.status.clone(),
            ]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(F17(0.1).text(), "1.0000000000000001e-1");
        assert_eq!(F17(-2.0).text(), "-2.0000000000000000e0");
        assert_eq!(F17(f64::NAN).text(), "null");
        let json = serde_json::to_string(&vec![F17(0.5), F17(f64::INFINITY)]).unwrap();
        assert_eq!(json, "[5.0000000000000000e-1,null]");
        let back: Vec<Option<f64>> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, vec![Some(0.5), None]);
    }

    #[test]
    fn point_mass_json() {
        let w: Pattern = "11".parse().unwrap();
        let s = dist_json(&w, 0, &IntDist::point_mass(0), None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["support"], serde_json::json!([[0, "1/1"]]));
        assert_eq!(v["tail_bound"], "0/1");
        assert!(v.get("meta").is_none());
    }

    #[test]
    fn csv_quoting_and_order() {
        let d = IntDist::new(
            BTreeMap::from([(-1, rational::frac(1, 4)), (2, rational::frac(3, 4))]),
            Q::default(),
            TailSide::None,
        );
        let s = dist_csv(&d).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "k,probability,probability_float");
        assert!(lines[1].starts_with("-1,1/4,"));
        assert!(lines[2].starts_with("2,3/4,"));
        let rows = vec![(3u128, "a,b".to_string())];
        assert_eq!(scan_csv(&rows).unwrap(), "t,value\n3,\"a,b\"\n");
    }
}
