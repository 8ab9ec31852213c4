//! Plain-text resolution graph files.
//!
//! ```text
//! # comments run to end of line
//! curve E1 genus=0 self=-2
//! curve E2 genus=0 self=-2
//! meet E1 E2 1
//! strict L meets E1=1
//! divisor D E1=1 L=2
//! ```
//!
//! Rationals are written `p/q` or `p`. Divisor lines may name exceptional or
//! strict curves; unnamed curves get coefficient zero.

use std::fmt::Write as _;

use crate::divisor::Divisor;
use crate::error::{Error, Result};
use crate::lattice::{build_model, CurveSpec, GraphDescription, MeetSpec, ResolutionModel, StrictSpec};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphFile {
    pub model: ResolutionModel,
    pub divisors: Vec<(String, Divisor)>,
}

impl GraphFile {
    pub fn divisor(&self, name: &str) -> Option<&Divisor> {
        self.divisors.iter().find(|(n, _)| n == name).map(|(_, d)| d)
    }
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::malformed(Some(line), message)
}

fn check_name(line: usize, name: &str) -> Result<String> {
    if name.is_empty() || name.contains('=') {
        return Err(err(line, format!("invalid name `{name}`")));
    }
    Ok(name.to_string())
}

fn parse_int(line: usize, what: &str, s: &str) -> Result<i64> {
    s.parse()
        .map_err(|_| err(line, format!("{what} must be an integer, got `{s}`")))
}

fn split_assignment(line: usize, token: &str) -> Result<(&str, &str)> {
    token
        .split_once('=')
        .ok_or_else(|| err(line, format!("expected key=value, got `{token}`")))
}

pub fn parse(text: &str) -> Result<GraphFile> {
    let mut desc = GraphDescription::default();
    let mut divisor_lines: Vec<(usize, Vec<&str>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let Some((&keyword, rest)) = tokens.split_first() else {
            continue;
        };
        match keyword {
            "curve" => {
                let [name, attrs @ ..] = rest else {
                    return Err(err(line, "curve needs a name"));
                };
                let (mut genus, mut self_int) = (None, None);
                for attr in attrs {
                    match split_assignment(line, attr)? {
                        ("genus", v) => genus = Some(parse_int(line, "genus", v)?),
                        ("self", v) => self_int = Some(parse_int(line, "self", v)?),
                        (k, _) => return Err(err(line, format!("unknown curve attribute `{k}`"))),
                    }
                }
                let genus = genus.ok_or_else(|| err(line, "curve needs genus=<int>"))?;
                let self_int = self_int.ok_or_else(|| err(line, "curve needs self=<negint>"))?;
                if self_int >= 0 {
                    return Err(err(line, format!("self-intersection must be negative, got {self_int}")));
                }
                desc.curves.push(CurveSpec {
                    name: check_name(line, name)?,
                    genus,
                    self_int,
                    line: Some(line),
                });
            }
            "meet" => {
                let [a, b, m] = rest else {
                    return Err(err(line, "expected `meet <name> <name> <posint>`"));
                };
                desc.meets.push(MeetSpec {
                    a: check_name(line, a)?,
                    b: check_name(line, b)?,
                    multiplicity: parse_int(line, "multiplicity", m)?,
                    line: Some(line),
                });
            }
            "strict" => {
                let [name, "meets", pairs @ ..] = rest else {
                    return Err(err(line, "expected `strict <name> meets <curve>=<posint> ...`"));
                };
                let meets = pairs
                    .iter()
                    .map(|p| {
                        let (c, m) = split_assignment(line, p)?;
                        Ok((c.to_string(), parse_int(line, "incidence", m)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                desc.strict.push(StrictSpec {
                    name: check_name(line, name)?,
                    meets,
                    line: Some(line),
                });
            }
            "divisor" => {
                if rest.is_empty() {
                    return Err(err(line, "divisor needs a name"));
                }
                divisor_lines.push((line, rest.to_vec()));
            }
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
    }

    let model = build_model(&desc)?;
    let mut divisors: Vec<(String, Divisor)> = Vec::new();
    for (line, tokens) in divisor_lines {
        let name = check_name(line, tokens[0])?;
        if divisors.iter().any(|(n, _)| *n == name) {
            return Err(err(line, format!("duplicate divisor `{name}`")));
        }
        let mut d = model.zero_divisor();
        let mut seen = Vec::new();
        for pair in &tokens[1..] {
            let (curve, value) = split_assignment(line, pair)?;
            let value = rational::parse(value)
                .map_err(|_| err(line, format!("invalid rational `{value}` (expected p/q or p)")))?;
            if seen.contains(&curve) {
                return Err(err(line, format!("coefficient of `{curve}` given twice")));
            }
            seen.push(curve);
            if let Some(i) = model.find_curve(curve) {
                d.set_exc(i, value);
            } else if let Some(s) = model.find_strict(curve) {
                d.set_strict(s, value);
            } else {
                return Err(err(line, format!("unknown curve `{curve}`")));
            }
        }
        divisors.push((name, d));
    }
    Ok(GraphFile { model, divisors })
}

/// Writes the model's curve, meet and strict lines.
pub fn serialize_model(model: &ResolutionModel) -> String {
    let mut out = String::new();
    for (i, c) in model.curves().iter().enumerate() {
        let _ = writeln!(
            out,
            "curve {} genus={} self={}",
            model.curve_name(i),
            c.genus,
            c.self_int
        );
    }
    for i in 0..model.num_curves() {
        for &(j, m) in model.neighbours(i) {
            if i < j {
                let _ = writeln!(out, "meet {} {} {}", model.curve_name(i), model.curve_name(j), m);
            }
        }
    }
    for s in model.strict_curves() {
        let _ = write!(out, "strict {} meets", s.label);
        for (i, &m) in s.incidence.iter().enumerate() {
            if m != 0 {
                let _ = write!(out, " {}={}", model.curve_name(i), m);
            }
        }
        out.push('\n');
    }
    out
}

pub fn serialize_divisor(model: &ResolutionModel, name: &str, d: &Divisor) -> String {
    let mut out = format!("divisor {name}");
    let nonzero = |v: &Rational| *v != Rational::default();
    for (i, v) in d.exc().iter().enumerate().filter(|(_, v)| nonzero(v)) {
        let _ = write!(out, " {}={}", model.curve_name(i), v);
    }
    for (s, v) in d.strict().iter().enumerate().filter(|(_, v)| nonzero(v)) {
        let _ = write!(out, " {}={}", model.strict_curves()[s].label, v);
    }
    out
}

pub fn serialize(file: &GraphFile) -> String {
    let mut out = serialize_model(&file.model);
    for (name, d) in &file.divisors {
        out.push_str(&serialize_divisor(&file.model, name, d));
        out.push('\n');
    }
    out
}
