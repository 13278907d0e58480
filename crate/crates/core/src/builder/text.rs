//! Plain-text certificate files.
//!
//! ```text
//! # addbasis certificate
//! h=2
//! steps=3
//! policy=minimal
//! default=1
//! phi_family=none
//! # step  k  u_k  decision  c_k  d_used  w_k
//! step    1  0    seed      1    0       0
//! step    2  -1   extend    -5   1       0
//! step    3  1    extend    25   6       0
//! set     -25,-6,-1,1,5,26
//! check   history  pass  -
//! ...
//! verdict pass
//! ```
//!
//! Columns are tab-separated, integers are plain decimal, and `-` marks an
//! absent field. The header lines use the build config format, so a
//! certificate carries everything needed to replay it.

use std::fmt::Write as _;

use num_bigint::BigInt;

use super::{BuildError, BuilderConfig, Certificate, CheckResult, Decision, StepRecord};
use crate::repcount::FiniteSet;
use crate::targetfn::config_lines;

const MAGIC: &str = "# addbasis certificate";

fn opt(v: &Option<BigInt>) -> String {
    v.as_ref().map_or_else(|| "-".to_owned(), BigInt::to_string)
}

impl Certificate {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(MAGIC);
        out.push('\n');
        out.push_str(&self.config.render());
        out.push_str("# step\tk\tu_k\tdecision\tc_k\td_used\tw_k\n");
        for r in &self.history {
            writeln!(
                out,
                "step\t{}\t{}\t{}\t{}\t{}\t{}",
                r.k,
                r.u,
                r.decision,
                opt(&r.c),
                opt(&r.d_used),
                r.w
            )
            .unwrap();
        }
        let elements: Vec<String> = self.set.iter().map(BigInt::to_string).collect();
        writeln!(out, "set\t{}", elements.join(",")).unwrap();
        for c in &self.checks {
            writeln!(
                out,
                "check\t{}\t{}\t{}",
                c.name,
                if c.passed { "pass" } else { "fail" },
                c.witness.as_deref().unwrap_or("-")
            )
            .unwrap();
        }
        writeln!(
            out,
            "verdict\t{}",
            if self.passed() { "pass" } else { "fail" }
        )
        .unwrap();
        out
    }
}

/// The contents of a certificate file as written, before any replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateFile {
    pub config: BuilderConfig,
    pub set: FiniteSet,
    pub history: Vec<StepRecord>,
    /// Check lines as recorded; a verifier recomputes these.
    pub checks: Vec<CheckResult>,
    pub verdict: Option<bool>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> BuildError {
    BuildError::Certificate {
        line,
        msg: msg.into(),
    }
}

fn parse_big(line: usize, s: &str) -> Result<BigInt, BuildError> {
    s.parse()
        .map_err(|_| parse_err(line, format!("malformed integer `{s}`")))
}

fn parse_opt(line: usize, s: &str) -> Result<Option<BigInt>, BuildError> {
    if s == "-" {
        Ok(None)
    } else {
        parse_big(line, s).map(Some)
    }
}

fn parse_step(line: usize, fields: &[&str]) -> Result<StepRecord, BuildError> {
    let [k, u, decision, c, d, w] = fields else {
        return Err(parse_err(
            line,
            format!("step line has {} fields, expected 6", fields.len()),
        ));
    };
    Ok(StepRecord {
        k: k.parse()
            .map_err(|_| parse_err(line, format!("malformed k `{k}`")))?,
        u: u.parse()
            .map_err(|_| parse_err(line, format!("malformed u_k `{u}`")))?,
        decision: decision
            .parse::<Decision>()
            .map_err(|e| parse_err(line, e))?,
        c: parse_opt(line, c)?,
        d_used: parse_opt(line, d)?,
        w: parse_big(line, w)?,
    })
}

fn parse_flag(line: usize, s: &str) -> Result<bool, BuildError> {
    match s {
        "pass" => Ok(true),
        "fail" => Ok(false),
        _ => Err(parse_err(
            line,
            format!("expected pass or fail, found `{s}`"),
        )),
    }
}

pub fn parse_certificate(text: &str) -> Result<CertificateFile, BuildError> {
    let mut header = String::new();
    let mut history = Vec::new();
    let mut set = None;
    let mut checks = Vec::new();
    let mut verdict = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let fields: Vec<&str> = raw.trim_end_matches('\r').split('\t').collect();
        match fields[0] {
            "step" => history.push(parse_step(line, &fields[1..])?),
            "set" => {
                if set.is_some() {
                    return Err(parse_err(line, "duplicate set line"));
                }
                let body = fields.get(1).copied().unwrap_or("").trim();
                let elements = body
                    .split(',')
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| parse_big(line, t.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                set = Some(FiniteSet::new(elements));
            }
            "check" => {
                let [name, flag, witness] = &fields[1..] else {
                    return Err(parse_err(line, "check line needs name, result and witness"));
                };
                checks.push(CheckResult {
                    name: (*name).to_owned(),
                    passed: parse_flag(line, flag)?,
                    witness: (*witness != "-").then(|| (*witness).to_owned()),
                });
            }
            "verdict" => {
                let flag = fields
                    .get(1)
                    .ok_or_else(|| parse_err(line, "empty verdict"))?;
                verdict = Some(parse_flag(line, flag)?);
            }
            _ => {
                // Keep line numbering aligned for config errors.
                header.push_str(raw);
                header.push('\n');
                continue;
            }
        }
        header.push('\n');
    }
    let config = BuilderConfig::from_lines(config_lines(&header))?;
    let set = set.ok_or_else(|| parse_err(0, "missing set line"))?;
    Ok(CertificateFile {
        config,
        set,
        history,
        checks,
        verdict,
    })
}
