//! Diagnostic test corpora: documents paired with expected diagnostics.
//!
//! ```text
//! ### case-name ok
//! qubit q
//! ### other-case E005@3:9 E006@4:1
//! ...
//! ```

use super::{check_text, Code, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub name: String,
    /// Expected diagnostics in reporting order; empty for a valid document.
    pub expect: Vec<(Code, Pos)>,
    pub text: String,
}

/// Split a corpus file into cases. Lines before the first header are ignored.
pub fn read_corpus(text: &str) -> Result<Vec<Case>, String> {
    let mut cases: Vec<Case> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if let Some(header) = line.strip_prefix("### ") {
            let mut parts = header.split_whitespace();
            let name = parts.next().ok_or(format!("line {}: case without a name", n + 1))?;
            let mut expect = Vec::new();
            for item in parts {
                if item == "ok" {
                    continue;
                }
                expect.push(parse_expectation(item).ok_or(format!("line {}: bad expectation `{item}`", n + 1))?);
            }
            cases.push(Case {
                name: name.into(),
                expect,
                text: String::new(),
            });
        } else if let Some(case) = cases.last_mut() {
            case.text.push_str(line);
            case.text.push('\n');
        }
    }
    Ok(cases)
}

fn parse_expectation(item: &str) -> Option<(Code, Pos)> {
    let (code, at) = item.split_once('@')?;
    let (line, col) = at.split_once(':')?;
    Some((
        Code::from_code(code)?,
        Pos {
            line: line.parse().ok()?,
            col: col.parse().ok()?,
        },
    ))
}

impl Case {
    /// Run the checker; `Err` describes the first disagreement.
    pub fn check(&self) -> Result<(), String> {
        let got: Vec<(Code, Pos)> = check_text(&self.text).iter().map(|d| (d.code, d.pos)).collect();
        if got == self.expect {
            Ok(())
        } else {
            let show = |v: &[(Code, Pos)]| {
                if v.is_empty() {
                    "ok".to_string()
                } else {
                    v.iter().map(|(c, p)| format!("{c}@{p}")).collect::<Vec<_>>().join(" ")
                }
            };
            Err(format!(
                "{}: expected {}, got {}",
                self.name,
                show(&self.expect),
                show(&got)
            ))
        }
    }
}
