//! Output formats. Every real number is written with 17 significant digits
//! (`{:.16e}`), '.' as decimal separator and `\n` line endings, so identical
//! runs produce identical bytes.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::continuation::{CheckReport, CheckStatus, Figure1Row};
use crate::determinants::BoundaryKind;
use crate::spectrum::Spectrum;

pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// A float serialized into JSON with [`sig17`] formatting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sig17(pub f64);

impl Serialize for Sig17 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let raw = RawValue::from_string(sig17(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Serialize)]
struct SpectrumRow {
    #[serde(rename = "N")]
    n: usize,
    kind: BoundaryKind,
    sigma: Option<Sig17>,
    lambda: Sig17,
    l: usize,
    multiplicity: usize,
    j_first: usize,
    j_last: usize,
}

fn spectrum_rows(s: &Spectrum) -> Vec<SpectrumRow> {
    s.entries
        .iter()
        .map(|e| SpectrumRow {
            n: s.problem.n,
            kind: s.problem.kind,
            sigma: s.problem.sigma().map(Sig17),
            lambda: Sig17(e.lambda),
            l: e.l,
            multiplicity: e.multiplicity,
            j_first: e.j_first,
            j_last: e.j_last,
        })
        .collect()
}

pub const SPECTRUM_HEADER: &str = "N,kind,sigma,lambda,l,multiplicity,j_first,j_last";

pub fn spectrum_csv(s: &Spectrum) -> String {
    let mut out = String::from(SPECTRUM_HEADER);
    out.push('\n');
    for r in spectrum_rows(s) {
        let sigma = r.sigma.map(|x| sig17(x.0)).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.n,
            r.kind,
            sigma,
            sig17(r.lambda.0),
            r.l,
            r.multiplicity,
            r.j_first,
            r.j_last
        ));
    }
    out
}

pub fn spectrum_json(s: &Spectrum) -> String {
    to_json(&spectrum_rows(s))
}

pub const BRANCH_HEADER: &str = "N,l,branch,sigma,lambda";

pub fn branch_csv(rows: &[Figure1Row]) -> String {
    let mut out = String::from(BRANCH_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.n, r.l, r.branch, sig17(r.sigma), sig17(r.lambda)));
    }
    out
}

#[derive(Debug, Serialize)]
pub struct BranchRowJson {
    #[serde(rename = "N")]
    n: usize,
    l: usize,
    branch: usize,
    sigma: Sig17,
    lambda: Sig17,
}

pub fn branch_rows_json(rows: &[Figure1Row]) -> Vec<BranchRowJson> {
    rows.iter()
        .map(|r| BranchRowJson { n: r.n, l: r.l, branch: r.branch, sigma: Sig17(r.sigma), lambda: Sig17(r.lambda) })
        .collect()
}

#[derive(Debug, Serialize)]
pub struct ReportJson<'a> {
    check: &'a str,
    status: CheckStatus,
    worst_ratio: Sig17,
    location: Option<Sig17>,
}

pub fn report_rows_json(reports: &[CheckReport]) -> Vec<ReportJson<'_>> {
    reports
        .iter()
        .map(|r| ReportJson {
            check: &r.check,
            status: r.status,
            worst_ratio: Sig17(r.worst_ratio),
            location: r.location.map(Sig17),
        })
        .collect()
}

pub const REPORT_HEADER: &str = "check,status,worst_ratio,location";

pub fn report_csv(reports: &[CheckReport]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in reports {
        let status = serde_json::to_value(r.status).expect("status serializes");
        out.push_str(&format!(
            "{},{},{},{}\n",
            r.check,
            status.as_str().expect("status is a string"),
            sig17(r.worst_ratio),
            r.location.map(sig17).unwrap_or_default()
        ));
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("output serializes");
    out.push('\n');
    out
}
