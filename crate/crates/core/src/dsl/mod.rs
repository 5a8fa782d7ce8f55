//! The `.qc` circuit text format.
//!
//! One statement per line, `#` starts a comment:
//!
//! ```text
//! qubit q                     # optional: init 1
//! mode m0 cutoff 3 init 3
//! classical y sign            # sign | int | real; `-> name` also declares
//! bs(-pi/2) m0 m1
//! phase(3*phi) m0 ctrl q=1    # ctrl clauses nest, innermost first
//! x q cctrl y=-1
//! measure z q -> y
//! measure count m0 -> n
//! post mapcount(3) n -> x
//! discard m1
//! ```
//!
//! Parameters are expressions in `pi`, `phi`, `i`, `sqrt(..)` and numbers,
//! linear in `phi`. Complex constants are written `a+bi`.

pub mod corpus;
mod expr;
mod lexer;
mod parser;
mod writer;

use crate::circuit::Circuit;
use std::fmt;

pub use parser::{check_text, parse};
pub use writer::serialize;

/// Maximum number of diagnostics reported for one document.
pub const MAX_DIAGNOSTICS: usize = 20;

/// 1-based source location; `col` counts characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Diagnostic classes; each has a stable code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    Lex,
    Syntax,
    UnknownName,
    Arity,
    WireKind,
    UnknownWire,
    Duplicate,
    Reassigned,
    ReadBeforeWrite,
    ReuseAfterMeasure,
    Alphabet,
    InvalidParameter,
    NeverWritten,
}

impl Code {
    pub const ALL: [Code; 13] = [
        Code::Lex,
        Code::Syntax,
        Code::UnknownName,
        Code::Arity,
        Code::WireKind,
        Code::UnknownWire,
        Code::Duplicate,
        Code::Reassigned,
        Code::ReadBeforeWrite,
        Code::ReuseAfterMeasure,
        Code::Alphabet,
        Code::InvalidParameter,
        Code::NeverWritten,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Code::Lex => "E001",
            Code::Syntax => "E002",
            Code::UnknownName => "E003",
            Code::Arity => "E004",
            Code::WireKind => "E005",
            Code::UnknownWire => "E006",
            Code::Duplicate => "E007",
            Code::Reassigned => "E008",
            Code::ReadBeforeWrite => "E009",
            Code::ReuseAfterMeasure => "E010",
            Code::Alphabet => "E011",
            Code::InvalidParameter => "E012",
            Code::NeverWritten => "E013",
        }
    }

    pub fn from_code(s: &str) -> Option<Code> {
        Code::ALL.into_iter().find(|c| c.as_str() == s)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub code: Code,
    pub pos: Pos,
    pub message: String,
}

impl Diagnostic {
    pub fn new(code: Code, pos: Pos, message: impl Into<String>) -> Self {
        Self {
            code,
            pos,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {}", self.pos, self.code, self.message)
    }
}

/// A rejected document: at least one diagnostic, sorted by position.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl Diagnostics {
    pub fn first(&self) -> &Diagnostic {
        &self.0[0]
    }

    pub fn codes(&self) -> Vec<Code> {
        self.0.iter().map(|d| d.code).collect()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Parse, then serialize again; used by the round-trip checks.
pub fn round_trip(circuit: &Circuit) -> crate::Result<Circuit> {
    let text = serialize(circuit)?;
    parse(&text).map_err(|d| crate::Error::Unsupported(format!("serialized circuit does not parse: {d}")))
}
