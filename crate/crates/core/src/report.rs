//! Machine-readable evaluation reports.
//!
//! Output is byte-deterministic: metrics appear sorted by canonical name,
//! classes ascending, and every real number is printed with 17 significant
//! digits so parsing it back yields the identical `f64`.

use std::fmt::Write as _;
use std::io::Write;

use crate::distance::{HausdorffAlgo, Spacing};
use crate::error::Result;
use crate::evaluator::{ClassScore, EvaluationResult, Mode};
use crate::overlap::ZeroDivisionPolicy;

/// Formats `x` like C's `%.17g`. Non-finite values become `null`.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if !(-5..17).contains(&exp) {
        let mut m = format!("{}.{}", &digits[..1], &digits[1..]);
        trim_fraction(&mut m);
        return format!("{sign}{m}e{exp}");
    }
    let mut s = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let point = exp as usize + 1;
        format!("{}.{}", &digits[..point], &digits[point..])
    };
    trim_fraction(&mut s);
    format!("{sign}{s}")
}

fn trim_fraction(s: &mut String) {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct MetricReport {
    pub result: EvaluationResult,
    pub wall_time_ms: Option<f64>,
}

/// Everything one CLI run reports.
#[derive(Debug, Clone)]
pub struct ReportDocument {
    pub version: String,
    pub truth_path: String,
    pub pred_path: String,
    pub shape: Vec<usize>,
    pub mode: Mode,
    pub policy: ZeroDivisionPolicy,
    pub spacing: Spacing,
    pub hd_algo: HausdorffAlgo,
    pub include_background: bool,
    pub classes: Vec<u16>,
    /// Sorted by canonical metric name.
    pub metrics: Vec<MetricReport>,
}

fn finite_or_null(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_else(|| "null".into())
}

fn list<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    let parts: Vec<String> = items.iter().map(f).collect();
    format!("[{}]", parts.join(", "))
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"tool\": \"segeval\",");
        let _ = writeln!(s, "  \"version\": {},", json_string(&self.version));
        let _ = writeln!(s, "  \"truth\": {},", json_string(&self.truth_path));
        let _ = writeln!(s, "  \"pred\": {},", json_string(&self.pred_path));
        let _ = writeln!(s, "  \"shape\": {},", list(&self.shape, |e| e.to_string()));
        let _ = writeln!(s, "  \"mode\": \"{}\",", self.mode.as_str());
        let _ = writeln!(s, "  \"policy\": \"{}\",", self.policy.as_str());
        let _ = writeln!(
            s,
            "  \"spacing\": {},",
            list(self.spacing.as_slice(), |v| format_real(*v))
        );
        let _ = writeln!(s, "  \"hd_algo\": \"{}\",", self.hd_algo.as_str());
        let _ = writeln!(s, "  \"include_background\": {},", self.include_background);
        let _ = writeln!(
            s,
            "  \"classes\": {},",
            list(&self.classes, |c| c.to_string())
        );
        s.push_str("  \"metrics\": {");
        for (i, m) in self.metrics.iter().enumerate() {
            s.push_str(if i == 0 { "\n" } else { ",\n" });
            write_metric_json(&mut s, m);
        }
        s.push_str(if self.metrics.is_empty() {
            "}\n"
        } else {
            "\n  }\n"
        });
        s.push_str("}\n");
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| std::io::Error::other(e);
        w.write_record(["metric", "key", "value", "status", "reason"])
            .map_err(io)?;
        for m in &self.metrics {
            let r = &m.result;
            let name = r.metric.as_str();
            for (class, entry) in &r.per_class {
                let key = class.to_string();
                let row = match entry {
                    ClassScore::Scored(sc) => [
                        name,
                        &key,
                        &format_real(sc.value),
                        if sc.defined { "ok" } else { "policy" },
                        "",
                    ]
                    .map(str::to_string),
                    ClassScore::Undefined(reason) => {
                        [name, &key, "", "undefined", reason].map(str::to_string)
                    }
                };
                w.write_record(&row).map_err(io)?;
            }
            if let Some(overall) = &r.overall {
                let row = match overall {
                    ClassScore::Scored(sc) => [
                        name.to_string(),
                        "all".into(),
                        format_real(sc.value),
                        if sc.defined { "ok" } else { "policy" }.into(),
                        String::new(),
                    ],
                    ClassScore::Undefined(reason) => [
                        name.to_string(),
                        "all".into(),
                        String::new(),
                        "undefined".into(),
                        reason.clone(),
                    ],
                };
                w.write_record(&row).map_err(io)?;
            }
            for (key, value) in [("macro", r.macro_avg), ("weighted", r.weighted)] {
                let (v, status) = match value {
                    Some(v) => (format_real(v), "ok"),
                    None => (String::new(), "undefined"),
                };
                w.write_record([name, key, &v, status, ""]).map_err(io)?;
            }
            if let Some(ms) = m.wall_time_ms {
                w.write_record([name, "wall_time_ms", &format!("{ms:.3}"), "ok", ""])
                    .map_err(io)?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn render(&self, format: ReportFormat) -> Result<String> {
        match format {
            ReportFormat::Json => Ok(self.to_json()),
            ReportFormat::Csv => self.to_csv(),
        }
    }

    pub fn write_to(&self, format: ReportFormat, out: &mut dyn Write) -> Result<()> {
        out.write_all(self.render(format)?.as_bytes())?;
        Ok(())
    }
}

fn write_metric_json(s: &mut String, m: &MetricReport) {
    let r = &m.result;
    let _ = writeln!(s, "    {}: {{", json_string(&r.metric));

    let per_class: Vec<String> = r
        .per_class
        .iter()
        .map(|(c, e)| format!("\"{c}\": {}", finite_or_null(e.value())))
        .collect();
    let _ = writeln!(s, "      \"per_class\": {{{}}},", per_class.join(", "));

    let undefined: Vec<String> = r
        .per_class
        .iter()
        .filter_map(|(c, e)| {
            e.reason()
                .map(|why| format!("\"{c}\": {}", json_string(why)))
        })
        .collect();
    let _ = writeln!(s, "      \"undefined\": {{{}}},", undefined.join(", "));

    let substituted: Vec<String> = r
        .per_class
        .iter()
        .filter(|(_, e)| matches!(e, ClassScore::Scored(sc) if !sc.defined))
        .map(|(c, _)| c.to_string())
        .collect();
    let _ = writeln!(s, "      \"policy_applied\": [{}],", substituted.join(", "));

    if let Some(overall) = &r.overall {
        let _ = writeln!(s, "      \"all\": {},", finite_or_null(overall.value()));
    }
    let _ = writeln!(s, "      \"macro\": {},", finite_or_null(r.macro_avg));
    match m.wall_time_ms {
        Some(ms) => {
            let _ = writeln!(s, "      \"weighted\": {},", finite_or_null(r.weighted));
            let _ = writeln!(s, "      \"wall_time_ms\": {ms:.3}");
        }
        None => {
            let _ = writeln!(s, "      \"weighted\": {}", finite_or_null(r.weighted));
        }
    }
    s.push_str("    }");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(2.0 / 3.0), "0.66666666666666663");
        assert_eq!(format_real(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_real(-0.25), "-0.25");
        assert_eq!(format_real(5.0), "5");
        assert_eq!(format_real(123456.5), "123456.5");
        assert_eq!(format_real(1e-7), "9.9999999999999995e-8");
        assert_eq!(format_real(1e20), "1e20");
        assert_eq!(format_real(f64::INFINITY), "null");
    }

    #[test]
    fn real_formatting_round_trips() {
        for x in [
            0.1,
            1.0 / 7.0,
            0.13846153846153847,
            2.5e-300,
            6.02e23,
            -3.75,
        ] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
    }
}
