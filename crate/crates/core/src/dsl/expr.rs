//! Parameter expressions: complex-valued and at most linear in `phi`.

use super::lexer::{Tok, Token};
use super::{Code, Diagnostic, Pos};
use crate::gates::Angle;
use crate::C64;

/// `c + p·φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Lin {
    pub c: C64,
    pub p: C64,
}

const ZERO: C64 = C64::new(0.0, 0.0);

impl Lin {
    fn constant(c: C64) -> Self {
        Lin { c, p: ZERO }
    }

    fn is_constant(&self) -> bool {
        self.p == ZERO
    }

    pub fn angle(&self) -> Option<Angle> {
        (self.c.im == 0.0 && self.p.im == 0.0).then(|| Angle::linear(self.c.re, self.p.re))
    }

    pub fn real(&self) -> Option<f64> {
        (self.is_constant() && self.c.im == 0.0).then_some(self.c.re)
    }

    pub fn complex(&self) -> Option<C64> {
        self.is_constant().then_some(self.c)
    }

    pub fn count(&self) -> Option<usize> {
        self.real()
            .filter(|x| *x >= 0.0 && x.fract() == 0.0 && *x < 1e9)
            .map(|x| x as usize)
    }
}

/// Recursive-descent reader over a token slice starting at `*i`; stops
/// before the first token that cannot continue the expression.
pub(crate) struct ExprParser<'a> {
    pub toks: &'a [Token],
    pub i: usize,
    pub end: Pos,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn syntax(&self, what: &str) -> Diagnostic {
        let found = self.peek().map_or("end of line".to_string(), |t| t.describe());
        Diagnostic::new(Code::Syntax, self.pos(), format!("expected {what}, found {found}"))
    }

    pub fn expr(&mut self) -> Result<Lin, Diagnostic> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.i += 1;
                    let r = self.term()?;
                    acc = Lin {
                        c: acc.c + r.c,
                        p: acc.p + r.p,
                    };
                }
                Some(Tok::Minus) => {
                    self.i += 1;
                    let r = self.term()?;
                    acc = Lin {
                        c: acc.c - r.c,
                        p: acc.p - r.p,
                    };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Lin, Diagnostic> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    let at = self.pos();
                    self.i += 1;
                    let r = self.unary()?;
                    acc = if acc.is_constant() {
                        Lin {
                            c: acc.c * r.c,
                            p: acc.c * r.p,
                        }
                    } else if r.is_constant() {
                        Lin {
                            c: acc.c * r.c,
                            p: acc.p * r.c,
                        }
                    } else {
                        return Err(Diagnostic::new(
                            Code::InvalidParameter,
                            at,
                            "expression is not linear in `phi`",
                        ));
                    };
                }
                Some(Tok::Slash) => {
                    let at = self.pos();
                    self.i += 1;
                    let r = self.unary()?;
                    if !r.is_constant() {
                        return Err(Diagnostic::new(
                            Code::InvalidParameter,
                            at,
                            "cannot divide by an expression in `phi`",
                        ));
                    }
                    if r.c == ZERO {
                        return Err(Diagnostic::new(Code::InvalidParameter, at, "division by zero"));
                    }
                    acc = Lin {
                        c: acc.c / r.c,
                        p: if acc.p == ZERO { ZERO } else { acc.p / r.c },
                    };
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Lin, Diagnostic> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.i += 1;
                let v = self.unary()?;
                Ok(Lin { c: -v.c, p: -v.p })
            }
            Some(Tok::Plus) => {
                self.i += 1;
                self.unary()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Lin, Diagnostic> {
        let Some(tok) = self.peek().cloned() else {
            return Err(self.syntax("a number"));
        };
        let at = self.pos();
        self.i += 1;
        match tok {
            Tok::Num(x) => Ok(Lin::constant(C64::new(x, 0.0))),
            Tok::Imag(x) => Ok(Lin::constant(C64::new(0.0, x))),
            Tok::LParen => {
                let v = self.expr()?;
                self.close()?;
                Ok(v)
            }
            Tok::Ident(name) => match name.as_str() {
                "pi" => Ok(Lin::constant(C64::new(std::f64::consts::PI, 0.0))),
                "i" => Ok(Lin::constant(C64::new(0.0, 1.0))),
                "phi" => Ok(Lin {
                    c: ZERO,
                    p: C64::new(1.0, 0.0),
                }),
                "sqrt" => {
                    if self.peek() != Some(&Tok::LParen) {
                        return Err(self.syntax("`(`"));
                    }
                    self.i += 1;
                    let v = self.expr()?;
                    self.close()?;
                    match v.real() {
                        Some(x) if x >= 0.0 => Ok(Lin::constant(C64::new(x.sqrt(), 0.0))),
                        _ => Err(Diagnostic::new(
                            Code::InvalidParameter,
                            at,
                            "`sqrt` needs a non-negative real constant",
                        )),
                    }
                }
                _ => Err(Diagnostic::new(
                    Code::Syntax,
                    at,
                    format!("unknown name `{name}` in expression"),
                )),
            },
            other => {
                self.i -= 1;
                Err(self.syntax(&format!("a number before {}", other.describe())))
            }
        }
    }

    fn close(&mut self) -> Result<(), Diagnostic> {
        if self.peek() == Some(&Tok::RParen) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.syntax("`)`"))
        }
    }
}

/// Evaluate a standalone expression string (used by the writer to verify
/// that a pretty form reproduces the exact value).
pub(crate) fn eval_str(s: &str) -> Option<Lin> {
    let toks = super::lexer::lex_line(s, 1).ok()?;
    let mut p = ExprParser {
        toks: &toks,
        i: 0,
        end: Pos {
            line: 1,
            col: s.len() + 1,
        },
    };
    let v = p.expr().ok()?;
    (p.i == toks.len()).then_some(v)
}
