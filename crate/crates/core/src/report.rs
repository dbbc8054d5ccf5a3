//! Canonical machine-readable report emission.
//!
//! The JSON schema is fixed: a top-level object with keys `version`, `seed`,
//! `config`, `cases` in that order; each case carries `id`, `tag`, `lhs`,
//! `rhs`, `ratio`, `pass`, `tolerances`, `provenance` in that order. Floats
//! are serialized with 17 significant digits so values round-trip
//! bit-exactly, and identical configurations therefore produce
//! byte-identical bytes. Non-finite values appear as the JSON strings
//! `"inf"`, `"-inf"`, `"nan"` (CSV uses the bare words).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::analysis::VerificationReport;
use crate::error::Result;

/// 17-significant-digit decimal form of a float; round-trips bit-exactly.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{x:.16e}")
}

fn json_number_or_string(x: f64) -> String {
    if x.is_finite() {
        fmt_f64(x)
    } else {
        format!("\"{}\"", fmt_f64(x))
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn json_string_map(map: &BTreeMap<String, String>, indent: &str) -> String {
    if map.is_empty() {
        return "{}".to_string();
    }
    let inner: Vec<String> = map
        .iter()
        .map(|(k, v)| format!("{indent}  \"{}\": \"{}\"", json_escape(k), json_escape(v)))
        .collect();
    format!("{{\n{}\n{indent}}}", inner.join(",\n"))
}

/// A campaign's full output: configuration echo plus its cases.
#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub version: String,
    pub seed: u64,
    /// Every knob of the run, defaults made explicit, as canonical strings.
    pub config: BTreeMap<String, String>,
    pub cases: Vec<VerificationReport>,
}

impl CampaignReport {
    pub fn new(seed: u64, config: BTreeMap<String, String>, mut cases: Vec<VerificationReport>) -> Self {
        cases.sort_by(|a, b| a.id.cmp(&b.id));
        CampaignReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            cases,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        out.push_str(&format!("  \"version\": \"{}\",\n", json_escape(&self.version)));
        out.push_str(&format!("  \"seed\": {},\n", self.seed));
        out.push_str(&format!("  \"config\": {},\n", json_string_map(&self.config, "  ")));
        out.push_str("  \"cases\": [");
        for (i, case) in self.cases.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str("\n    {\n");
            out.push_str(&format!("      \"id\": \"{}\",\n", json_escape(&case.id)));
            out.push_str(&format!("      \"tag\": \"{}\",\n", json_escape(&case.tag)));
            out.push_str(&format!("      \"lhs\": {},\n", json_number_or_string(case.lhs)));
            out.push_str(&format!("      \"rhs\": {},\n", json_number_or_string(case.rhs)));
            out.push_str(&format!("      \"ratio\": {},\n", json_number_or_string(case.ratio)));
            out.push_str(&format!("      \"pass\": {},\n", case.pass));
            out.push_str(&format!(
                "      \"tolerances\": {{ \"user\": {}, \"quad\": {} }},\n",
                json_number_or_string(case.tol_user),
                json_number_or_string(case.tol_quad)
            ));
            out.push_str(&format!(
                "      \"provenance\": {}\n",
                json_string_map(&case.provenance, "      ")
            ));
            out.push_str("    }");
        }
        out.push_str("\n  ]\n}\n");
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("id,tag,lhs,rhs,ratio,pass\n");
        for c in &self.cases {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.id,
                c.tag,
                fmt_f64(c.lhs),
                fmt_f64(c.rhs),
                fmt_f64(c.ratio),
                c.pass
            ));
        }
        out
    }
}

/// Output format of `emit_report`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Serialize a report to a writer; returns bytes written.
pub fn write_report(report: &CampaignReport, format: ReportFormat, w: &mut dyn Write) -> Result<usize> {
    let body = match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv(),
    };
    w.write_all(body.as_bytes())?;
    Ok(body.len())
}

/// Serialize a report to a file path; returns bytes written.
pub fn emit_report(report: &CampaignReport, format: ReportFormat, path: &Path) -> Result<usize> {
    let mut file = std::fs::File::create(path)?;
    let n = write_report(report, format, &mut file)?;
    file.flush()?;
    Ok(n)
}

/// CSV plot data of `(p, |f|_p / psi(p))` pairs. Non-finite ratios are
/// dropped unless `include_nonfinite` flags them in.
pub fn curve_csv(points: &[(f64, f64)], include_nonfinite: bool) -> String {
    let mut out = String::from("p,ratio\n");
    for &(p, ratio) in points {
        if ratio.is_finite() || include_nonfinite {
            out.push_str(&format!("{},{}\n", fmt_f64(p), fmt_f64(ratio)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::ratio_report;

    fn sample_report() -> CampaignReport {
        let mut config = BTreeMap::new();
        config.insert("seed".to_string(), "7".to_string());
        config.insert("pairs".to_string(), "2".to_string());
        let cases = vec![
            ratio_report("b/case", "young", 0.5, 1.0, 1e-6, 0.0),
            ratio_report("a/case", "young", 1.0, 1.0, 1e-6, 0.0),
        ];
        CampaignReport::new(7, config, cases)
    }

    #[test]
    fn float_formatting_round_trips() {
        for x in [1.0, -0.1, 5.2999162508563499, 1e-300, 123456.789] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(fmt_f64(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn json_is_valid_and_key_ordered() {
        let r = sample_report();
        let json = r.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(v["seed"], 7);
        assert_eq!(v["cases"].as_array().unwrap().len(), 2);
        // cases sorted by id
        assert_eq!(v["cases"][0]["id"], "a/case");
        // exact top-level key order in the raw bytes
        let (iv, is_, ic, icases) = (
            json.find("\"version\"").unwrap(),
            json.find("\"seed\"").unwrap(),
            json.find("\"config\"").unwrap(),
            json.find("\"cases\"").unwrap(),
        );
        assert!(iv < is_ && is_ < ic && ic < icases);
    }

    #[test]
    fn byte_identical_for_identical_input() {
        assert_eq!(sample_report().to_json(), sample_report().to_json());
        assert_eq!(sample_report().to_csv(), sample_report().to_csv());
    }

    #[test]
    fn infinite_values_stay_valid_json() {
        let mut r = sample_report();
        r.cases[0].lhs = f64::INFINITY;
        r.cases[0].ratio = f64::INFINITY;
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["cases"][0]["lhs"], "inf");
    }

    #[test]
    fn csv_shape() {
        let csv = sample_report().to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "id,tag,lhs,rhs,ratio,pass");
        assert_eq!(lines.count(), 2);
    }

    #[test]
    fn parsed_report_round_trips_to_identical_bytes() {
        let mut report = sample_report();
        report.cases[0].lhs = f64::INFINITY;
        report.cases[0].ratio = f64::INFINITY;
        report
            .cases
            .iter_mut()
            .for_each(|c| c.provenance.insert("seed".into(), "7".into()).map_or((), |_| ()));
        let json = report.to_json();

        // rebuild the report from its serialized form
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let num = |x: &serde_json::Value| -> f64 {
            match x {
                serde_json::Value::Number(n) => n.as_f64().unwrap(),
                serde_json::Value::String(s) => s.parse().unwrap_or(match s.as_str() {
                    "inf" => f64::INFINITY,
                    "-inf" => f64::NEG_INFINITY,
                    _ => f64::NAN,
                }),
                _ => panic!("number expected"),
            }
        };
        let smap = |x: &serde_json::Value| -> BTreeMap<String, String> {
            x.as_object()
                .unwrap()
                .iter()
                .map(|(k, v)| (k.clone(), v.as_str().unwrap().to_string()))
                .collect()
        };
        let cases = v["cases"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| VerificationReport {
                id: c["id"].as_str().unwrap().into(),
                tag: c["tag"].as_str().unwrap().into(),
                lhs: num(&c["lhs"]),
                rhs: num(&c["rhs"]),
                ratio: num(&c["ratio"]),
                pass: c["pass"].as_bool().unwrap(),
                tol_user: num(&c["tolerances"]["user"]),
                tol_quad: num(&c["tolerances"]["quad"]),
                provenance: smap(&c["provenance"]),
                wall_time: std::time::Duration::ZERO,
            })
            .collect();
        let rebuilt = CampaignReport::new(v["seed"].as_u64().unwrap(), smap(&v["config"]), cases);
        assert_eq!(rebuilt.to_json(), json);
    }

    #[test]
    fn curve_filters_nonfinite() {
        let pts = [(1.0, 1.0), (2.0, f64::INFINITY), (3.0, 0.5)];
        let plain = curve_csv(&pts, false);
        assert_eq!(plain.lines().count(), 3);
        let flagged = curve_csv(&pts, true);
        assert_eq!(flagged.lines().count(), 4);
        assert!(flagged.contains("inf"));
    }
}
