//! Deterministic key-value reports.
//!
//! A report is a sequence of `key = value` lines. The first line is always
//! `format_version = 1`. Keys are dotted paths; values are single-line
//! strings. Rationals are printed exactly as `p/q` (or `p`), divisors as
//! space-separated `curve=coefficient` pairs over their nonzero
//! coefficients in model order (`0` for the zero divisor).

use std::fmt;

use crate::antinef::ClosureTrace;
use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::lattice::ResolutionModel;
use crate::rational::Rational;
use crate::realize::{RealizationCertificate, VerificationReport};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    entries: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        let mut r = Report { entries: Vec::new() };
        r.push("format_version", FORMAT_VERSION);
        r.push("command", command);
        r
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        let value = value.to_string().replace('\n', " ");
        self.entries.push((key.into(), value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// Parses rendered text back into entries.
    pub fn parse(text: &str) -> Result<Report> {
        let mut entries = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once(" = ")
                .ok_or_else(|| Error::malformed(Some(idx + 1), "expected `key = value`"))?;
            entries.push((k.to_string(), v.to_string()));
        }
        match entries.first() {
            Some((k, v)) if k == "format_version" && *v == FORMAT_VERSION.to_string() => {}
            _ => return Err(Error::malformed(Some(1), "missing format_version")),
        }
        Ok(Report { entries })
    }

    pub fn write_model(&mut self, prefix: &str, model: &ResolutionModel) {
        self.push(format!("{prefix}.curves"), model.num_curves());
        self.push(format!("{prefix}.strict_curves"), model.num_strict());
        for (i, c) in model.curves().iter().enumerate() {
            self.push(
                format!("{prefix}.curve.{}", model.curve_name(i)),
                format!("genus={} self={}", c.genus, c.self_int),
            );
        }
    }

    pub fn write_divisor(&mut self, key: impl Into<String>, model: &ResolutionModel, d: &Divisor) {
        self.push(key, format_divisor(model, d));
    }

    pub fn write_rationals(&mut self, key: impl Into<String>, values: &[Rational]) {
        self.push(key, format_list(values));
    }

    pub fn write_trace(&mut self, prefix: &str, model: &ResolutionModel, trace: &ClosureTrace) {
        self.push(format!("{prefix}.initial_s"), &trace.initial_s);
        self.push(format!("{prefix}.steps"), trace.steps.len());
        for (k, step) in trace.steps.iter().enumerate() {
            self.push(
                format!("{prefix}.step.{}", k + 1),
                format!(
                    "curve={} product={} copies={}",
                    model.curve_name(step.curve),
                    step.product,
                    step.copies
                ),
            );
        }
    }

    pub fn write_verification(&mut self, prefix: &str, v: &VerificationReport) {
        for (k, c) in v.checks.iter().enumerate() {
            let status = if c.passed { "pass" } else { "fail" };
            let value = if c.detail.is_empty() {
                format!("{} {}", c.name, status)
            } else {
                format!("{} {} ({})", c.name, status, c.detail)
            };
            self.push(format!("{prefix}.check.{}", k + 1), value);
        }
        self.push(format!("{prefix}.passed"), v.passed());
        self.push(
            format!("{prefix}.first_failure"),
            v.first_failure().map(|c| c.name).unwrap_or("none"),
        );
    }

    /// Summary of a certificate. With `full`, also every divisor on `Z`.
    pub fn write_certificate(&mut self, prefix: &str, cert: &RealizationCertificate, full: bool) {
        let base = &*cert.base;
        let z = cert.blown_model();
        self.write_divisor(format!("{prefix}.F0"), base, &cert.f0);
        self.push(format!("{prefix}.epsilon"), &cert.epsilon);
        self.write_rationals(format!("{prefix}.a"), &cert.orders);
        self.write_rationals(format!("{prefix}.b"), &cert.discrepancies);
        self.push(format!("{prefix}.e"), format_list(&cert.points));
        self.push(format!("{prefix}.n"), format_list(&cert.chain_lengths));
        self.push(format!("{prefix}.Z.curves"), z.num_curves());
        self.push(format!("{prefix}.mu"), &cert.mu);
        self.push(format!("{prefix}.N"), &cert.scale);
        self.push(format!("{prefix}.lambda"), &cert.lambda);
        self.push(format!("{prefix}.closure_steps"), cert.closure_steps);
        for (k, a) in cert.assumptions.iter().enumerate() {
            self.push(format!("{prefix}.assumption.{}", k + 1), a);
        }
        if full {
            let mut z_report = Report { entries: Vec::new() };
            z_report.write_model(&format!("{prefix}.Z"), z);
            self.entries.extend(z_report.entries.into_iter().skip(1));
            self.write_divisor(format!("{prefix}.K_g"), z, cert.k_g());
            self.write_divisor(format!("{prefix}.K_h"), z, &cert.k_h);
            self.write_divisor(format!("{prefix}.F"), z, &cert.f);
            self.write_divisor(format!("{prefix}.A"), z, &cert.ample);
            self.write_divisor(format!("{prefix}.G"), z, &cert.g);
            self.write_divisor(format!("{prefix}.F_prime"), z, &cert.f_prime);
            if let Some(w) = &cert.verification.witness {
                self.write_divisor(format!("{prefix}.witness.pullback"), z, &w.pullback_part);
                self.write_divisor(format!("{prefix}.witness.base_terms"), z, &w.base_terms);
                self.write_divisor(format!("{prefix}.witness.chain_terms"), z, &w.chain_terms);
            }
        }
        self.push(format!("{prefix}.F_prime_equals_F"), cert.f_prime == cert.f);
        self.write_verification(&format!("{prefix}.verification"), &cert.verification);
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k} = {v}")?;
        }
        Ok(())
    }
}

pub fn format_list<T: ToString>(values: &[T]) -> String {
    if values.is_empty() {
        return "-".into();
    }
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn format_divisor(model: &ResolutionModel, d: &Divisor) -> String {
    let zero = Rational::default();
    let mut parts = Vec::new();
    for (i, v) in d.exc().iter().enumerate() {
        if *v != zero {
            parts.push(format!("{}={}", model.curve_name(i), v));
        }
    }
    for (s, v) in d.strict().iter().enumerate() {
        if *v != zero {
            parts.push(format!("{}={}", model.strict_curves()[s].label, v));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn render_then_parse() {
        let mut r = Report::new("check");
        r.push("x", ratio(-3, 4));
        let back = Report::parse(&r.render()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.get("x"), Some("-3/4"));
        assert_eq!(r.render().lines().next(), Some("format_version = 1"));
    }

    #[test]
    fn divisor_format() {
        let m = ResolutionModel::from_matrix(&[0, 0], &[vec![-2, 1], vec![1, -2]]).unwrap();
        assert_eq!(format_divisor(&m, &m.zero_divisor()), "0");
        let d = m.dual_element(0).unwrap();
        assert_eq!(format_divisor(&m, &d), "E1=2/3 E2=1/3");
    }
}
