//! Text and JSON formats.
//!
//! - Delay profiles: two numeric columns `delay_ns, power`, comma or
//!   whitespace separated. `#` starts a comment; a `# units: db` comment (or a
//!   header row naming dB) marks powers as decibels. One non-numeric header
//!   row is allowed before the data.
//! - Angular pmfs: `# phi_deg mass` header, then one `center mass` row per bin.
//! - Pairs: CSV with a header naming `phi_bar_deg` and `delta_phi_deg`.
//! - Reports: JSON documents with fixed key names.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use bearing_core::estimation::AngularGrid;
use bearing_core::{AngularPmf, ClusterSet, DelayProfile, DispersionReport, Ellipse, PathSet, RegressionResult};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Units {
    Linear,
    Db,
}

fn split_fields(line: &str) -> Vec<&str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect()
}

fn units_directive(comment: &str) -> Option<Units> {
    let body = comment.trim_start_matches('#').trim().to_ascii_lowercase();
    let value = body.strip_prefix("units")?.trim_start().strip_prefix(':')?.trim();
    match value {
        "db" => Some(Units::Db),
        "linear" => Some(Units::Linear),
        _ => None,
    }
}

/// Parses a delay profile from text.
pub fn parse_profile(text: &str) -> Result<DelayProfile> {
    let mut units = Units::Linear;
    let mut samples = Vec::new();
    let mut header_seen = false;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('#') {
            if let Some(u) = units_directive(line) {
                units = u;
            }
            continue;
        }
        last_line = line_no;
        let fields = split_fields(line);
        let numbers: Option<Vec<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        match numbers {
            Some(v) if v.len() == 2 => samples.push((line_no, v[0], v[1])),
            Some(v) => {
                return Err(Error::parse(line_no, format!("expected 2 columns, found {}", v.len())));
            }
            None if !header_seen && samples.is_empty() => {
                header_seen = true;
                if line.to_ascii_lowercase().contains("db") {
                    units = Units::Db;
                }
            }
            None => return Err(Error::parse(line_no, format!("malformed record `{line}`"))),
        }
    }
    for w in samples.windows(2) {
        if w[1].1 <= w[0].1 {
            return Err(Error::parse(w[1].0, "delays not strictly increasing"));
        }
    }
    if samples.is_empty() {
        return Err(Error::parse(last_line.max(1), "no data rows"));
    }
    let pairs = samples.into_iter().map(|(_, d, p)| (d, p));
    let profile = match units {
        Units::Linear => DelayProfile::new(pairs)?,
        Units::Db => DelayProfile::from_db(pairs)?,
    };
    Ok(profile)
}

pub fn read_profile(path: &Path) -> Result<DelayProfile> {
    parse_profile(&read_to_string(path)?)
}

pub fn format_profile(profile: &DelayProfile) -> String {
    let mut out = String::from("# units: linear\ndelay_ns,power\n");
    for (d, p) in profile.samples() {
        writeln!(out, "{d},{p:e}").unwrap();
    }
    out
}

pub fn format_pmf(pmf: &AngularPmf) -> String {
    let mut out = String::from("# phi_deg mass\n");
    for (phi, m) in pmf.bins() {
        writeln!(out, "{phi} {m:e}").unwrap();
    }
    out
}

/// Parses a pmf written by [`format_pmf`]. The bin grid is inferred from the
/// row count and checked against the listed centres.
pub fn parse_pmf(text: &str) -> Result<AngularPmf> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields = split_fields(line);
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse::<f64>().ok()).collect();
        match parsed {
            Some(v) if v.len() == 2 => rows.push((idx + 1, v[0], v[1])),
            _ => return Err(Error::parse(idx + 1, format!("malformed pmf row `{line}`"))),
        }
    }
    if rows.is_empty() {
        return Err(Error::parse(1, "empty pmf"));
    }
    let grid = AngularGrid::new(360.0 / rows.len() as f64)?;
    for ((line, phi, _), center) in rows.iter().zip(grid.centers()) {
        if (phi - center).abs() > 1e-6 {
            return Err(Error::parse(*line, format!("bin centre {phi} off the {}-degree grid", grid.bin_width_deg())));
        }
    }
    Ok(AngularPmf::from_masses(grid, rows.into_iter().map(|r| r.2).collect())?)
}

pub fn read_pmf(path: &Path) -> Result<AngularPmf> {
    parse_pmf(&read_to_string(path)?)
}

/// One (mean offset, bearing-line error) pair of a sweep cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairRecord {
    pub hpbw_deg: Option<f64>,
    pub alpha_deg: Option<f64>,
    pub phi_bar_deg: f64,
    pub delta_phi_deg: f64,
    /// Whether α lies between the mean-offset extremes of its beamwidth row.
    pub pre_extremum: bool,
}

pub fn format_pairs(pairs: &[PairRecord]) -> String {
    let mut out = String::from("hpbw_deg,alpha_deg,phi_bar_deg,delta_phi_deg,pre_extremum\n");
    for p in pairs {
        let hpbw = p.hpbw_deg.map_or_else(|| "omni".to_string(), |h| h.to_string());
        let alpha = p.alpha_deg.map_or_else(String::new, |a| a.to_string());
        writeln!(
            out,
            "{hpbw},{alpha},{:.6},{:.6},{}",
            p.phi_bar_deg,
            p.delta_phi_deg,
            u8::from(p.pre_extremum)
        )
        .unwrap();
    }
    out
}

/// Parses a pairs file. Columns are located by header name; without a
/// header the file must have exactly two columns `phi_bar_deg, delta_phi_deg`.
/// A missing `pre_extremum` column means every pair qualifies.
pub fn parse_pairs(text: &str) -> Result<Vec<PairRecord>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let mut cols = [None; 5];
    let names = ["hpbw_deg", "alpha_deg", "phi_bar_deg", "delta_phi_deg", "pre_extremum"];
    if let Some((line, first)) = lines.peek().copied() {
        let fields = split_fields(first);
        if fields.iter().any(|f| f.parse::<f64>().is_err()) {
            for (slot, name) in cols.iter_mut().zip(names) {
                *slot = fields.iter().position(|f| f.eq_ignore_ascii_case(name));
            }
            if cols[2].is_none() || cols[3].is_none() {
                return Err(Error::parse(line, "header must name phi_bar_deg and delta_phi_deg"));
            }
            lines.next();
        } else {
            cols[2] = Some(0);
            cols[3] = Some(1);
        }
    }
    let mut out = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split(',').map(str::trim).collect();
        let fields = if fields.len() == 1 { split_fields(text) } else { fields };
        let get = |k: usize| cols[k].and_then(|c| fields.get(c).copied());
        let num = |k: usize| -> Result<f64> {
            get(k)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| Error::parse(line, format!("bad or missing {}", names[k])))
        };
        let opt = |k: usize| get(k).and_then(|s| s.parse::<f64>().ok());
        out.push(PairRecord {
            hpbw_deg: opt(0),
            alpha_deg: opt(1),
            phi_bar_deg: num(2)?,
            delta_phi_deg: num(3)?,
            pre_extremum: get(4).is_none_or(|s| s != "0"),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClusterDoc {
    pub tau_ns: f64,
    pub power: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EllipseDoc {
    pub i: usize,
    pub semi_major_m: f64,
    pub eccentricity: f64,
}

impl From<&Ellipse> for EllipseDoc {
    fn from(e: &Ellipse) -> Self {
        EllipseDoc { i: e.cluster, semi_major_m: e.semi_major_m, eccentricity: e.eccentricity }
    }
}

/// Time-cluster document of `analyze`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClusterReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub clusters: Vec<ClusterDoc>,
    pub p0: f64,
    pub total: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rms_delay_spread_ns: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distance_m: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub ellipses: Vec<EllipseDoc>,
}

impl From<&ClusterSet> for ClusterReport {
    fn from(c: &ClusterSet) -> Self {
        ClusterReport {
            n: c.len(),
            clusters: c.clusters.iter().map(|c| ClusterDoc { tau_ns: c.delay_ns, power: c.power }).collect(),
            p0: c.local_power,
            total: c.total_power,
            rms_delay_spread_ns: None,
            distance_m: None,
            ellipses: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct DispersionDoc {
    pub sigma_e_deg: f64,
    pub phi_bar_deg: f64,
    pub delta_phi_deg: f64,
    pub sigma_total_deg: f64,
    pub delta_percent: Option<f64>,
}

impl From<&DispersionReport> for DispersionDoc {
    fn from(r: &DispersionReport) -> Self {
        DispersionDoc {
            sigma_e_deg: r.sigma_e_deg,
            phi_bar_deg: r.phi_bar_deg,
            delta_phi_deg: r.delta_phi_deg,
            sigma_total_deg: r.sigma_total_deg,
            delta_percent: r.delta_percent,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct RegressionDoc {
    pub gradient: f64,
    pub rho: f64,
    pub pairs: usize,
}

impl From<&RegressionResult> for RegressionDoc {
    fn from(r: &RegressionResult) -> Self {
        RegressionDoc { gradient: r.gradient, rho: r.rho, pairs: r.pairs }
    }
}

#[derive(Debug, Serialize)]
struct PathRecord {
    i: usize,
    phi_deg: f64,
    p: f64,
    direct: bool,
}

/// One JSON object per path: `{i, phi_deg, p, direct}`.
pub fn format_path_set(paths: &PathSet) -> String {
    let mut out = String::new();
    for p in &paths.paths {
        let rec = PathRecord { i: p.cluster, phi_deg: p.aoa.to_degrees(), p: p.power, direct: p.direct };
        out.push_str(&serde_json::to_string(&rec).expect("path record serializes"));
        out.push('\n');
    }
    out
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

/// A matrix of one statistic over (beamwidth rows, α columns).
pub fn format_matrix(row_labels: &[String], alphas_deg: &[f64], values: &[Vec<f64>]) -> String {
    let mut out = String::from("hpbw_deg\\alpha_deg");
    for a in alphas_deg {
        write!(out, ",{a}").unwrap();
    }
    out.push('\n');
    for (label, row) in row_labels.iter().zip(values) {
        out.push_str(label);
        for v in row {
            if v.is_finite() {
                write!(out, ",{v:.6}").unwrap();
            } else {
                out.push_str(",nan");
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_rows_and_resolution() {
        let p = parse_profile("0,1.0\n50,0.5\n").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.resolution_ns(), 50.0);
        assert_eq!(p.powers(), &[1.0, 0.5]);
    }

    #[test]
    fn profile_whitespace_header_and_comments() {
        let p = parse_profile("# measured\ndelay_ns power\n0 2\n\n10\t1\n").unwrap();
        assert_eq!(p.delays_ns(), &[0.0, 10.0]);
    }

    #[test]
    fn profile_db_units() {
        let p = parse_profile("# units: dB\n0,0\n50,-3\n").unwrap();
        assert!((p.powers()[1] - 0.501_187).abs() < 1e-6);
        let q = parse_profile("delay_ns,power_db\n0,0\n50,-3\n").unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn profile_errors() {
        match parse_profile("0,1\n10,abc\n") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_profile("0,1\n10,1\n5,1\n") {
            Err(Error::Parse { line: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_profile("0,0\n50,0\n") {
            Err(Error::Model(bearing_core::Error::InvalidProfile(msg))) => assert_eq!(msg, "all-zero profile"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_profile("0,1,2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn pmf_round_trip() {
        let pmf = AngularPmf::from_points(1.0, [(-10.0, 1.0), (10.0, 3.0), (180.0, 0.1)]).unwrap();
        let back = parse_pmf(&format_pmf(&pmf)).unwrap();
        assert_eq!(pmf, back);
    }

    #[test]
    fn pmf_rejects_foreign_grid() {
        assert!(parse_pmf("# phi_deg mass\n0 0.5\n3 0.5\n").is_err());
        assert!(parse_pmf("0 x\n").is_err());
    }

    #[test]
    fn pairs_with_and_without_header() {
        let recs = vec![
            PairRecord { hpbw_deg: Some(30.0), alpha_deg: Some(30.0), phi_bar_deg: 1.5, delta_phi_deg: 0.25, pre_extremum: true },
            PairRecord { hpbw_deg: None, alpha_deg: Some(150.0), phi_bar_deg: 2.0, delta_phi_deg: -1.0, pre_extremum: false },
        ];
        assert_eq!(parse_pairs(&format_pairs(&recs)).unwrap(), recs);

        let bare = parse_pairs("1.0, 0.21\n2 0.42\n").unwrap();
        assert_eq!(bare.len(), 2);
        assert!(bare.iter().all(|p| p.pre_extremum && p.hpbw_deg.is_none()));
        assert_eq!(bare[1].delta_phi_deg, 0.42);

        assert!(parse_pairs("x,y\n1,2\n").is_err());
    }

    #[test]
    fn cluster_report_keys() {
        let c = ClusterSet::new(1.0, [(100.0, 0.5)]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&ClusterReport::from(&c))).unwrap();
        assert_eq!(v["N"], 1);
        assert_eq!(v["clusters"][0]["tau_ns"], 100.0);
        assert_eq!(v["p0"], 1.0);
        assert_eq!(v["total"], 1.5);
    }

    #[test]
    fn path_lines() {
        let set = PathSet {
            paths: vec![bearing_core::Path { cluster: 2, aoa: 0.0, power: 0.5, direct: false }],
            counts: vec![0, 0, 1],
        };
        let v: serde_json::Value = serde_json::from_str(format_path_set(&set).trim()).unwrap();
        assert_eq!(v["i"], 2);
        assert_eq!(v["phi_deg"], 0.0);
        assert_eq!(v["direct"], false);
    }
}
