//! Recursive-descent parser for componentwise map definitions.
//!
//! ```text
//! map    := expr (";" expr)*
//! expr   := term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := ("-")? atom ("^" INTEGER)?
//! atom   := NUMBER | VAR | FUNC "(" expr ("," expr)? ")" | "(" expr ")"
//! ```
//!
//! Negation binds tighter than `^`, so `-x1^2` is `(-x1)^2`.

use thiserror::Error;

use super::expr::{BinaryOp, Expr, MapSpec, UnaryOp};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("`{func}` at {pos} takes {expected} argument(s), got {found}")]
    Arity {
        func: String,
        pos: usize,
        expected: usize,
        found: usize,
    },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { name: String, pos: usize },
    #[error("variable x{index} at {pos} is out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize, pos: usize },
    #[error("expected {expected} component(s), found {found}")]
    ComponentCountMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    Semi,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, start));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut integral = true;
            if i < bytes.len() && bytes[i] == b'.' {
                integral = false;
                i += 1;
                let frac = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i == frac {
                    return Err(ParseError::Syntax {
                        pos: i,
                        msg: "expected digits after `.`".into(),
                    });
                }
            }
            let value = text[start..i].parse().map_err(|_| ParseError::Syntax {
                pos: start,
                msg: "bad number".into(),
            })?;
            out.push((Tok::Num(value, integral), start));
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else {
            let ch = text[start..].chars().next().unwrap_or('?');
            return Err(ParseError::Syntax {
                pos: start,
                msg: format!("unexpected character `{ch}`"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    at: usize,
    end: usize,
    n: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError::Syntax {
                pos,
                msg: format!("expected {what}"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(Tok::Plus) => BinaryOp::Add,
                Some(Tok::Minus) => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Binary(BinaryOp::Mul, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let mut e = self.atom()?;
        if negate {
            e = Expr::Unary(UnaryOp::Neg, Box::new(e));
        }
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Num(v, true)) if v <= i32::MAX as f64 => {
                    e = Expr::Pow(Box::new(e), v as u32);
                }
                _ => {
                    return Err(ParseError::Syntax {
                        pos,
                        msg: "exponent must be a nonnegative integer literal".into(),
                    })
                }
            }
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Num(v, _)) => Ok(Expr::Const(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => self.ident(name, pos),
            _ => Err(ParseError::Syntax {
                pos,
                msg: "expected a number, variable, function call or `(`".into(),
            }),
        }
    }

    fn ident(&mut self, name: String, pos: usize) -> Result<Expr, ParseError> {
        if let Some(digits) = name.strip_prefix('x') {
            if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
                let index: usize = digits.parse().unwrap_or(usize::MAX);
                if index == 0 || index > self.n {
                    return Err(ParseError::IndexOutOfRange {
                        index,
                        n: self.n,
                        pos,
                    });
                }
                return Ok(Expr::Var(index));
            }
        }
        let (arity, build): (usize, fn(Vec<Expr>) -> Expr) = match name.as_str() {
            "sin" => (1, |a| unary(UnaryOp::Sin, a)),
            "cos" => (1, |a| unary(UnaryOp::Cos, a)),
            "expneg" => (1, |a| unary(UnaryOp::ExpNeg, a)),
            "sqrt" => (1, |a| unary(UnaryOp::Sqrt, a)),
            "abs" => (1, |a| unary(UnaryOp::Abs, a)),
            "min2" => (2, |a| binary(BinaryOp::Min, a)),
            "max2" => (2, |a| binary(BinaryOp::Max, a)),
            _ => return Err(ParseError::UnknownIdentifier { name, pos }),
        };
        self.expect(Tok::LParen, &format!("`(` after `{name}`"))?;
        let mut args = vec![self.expr()?];
        while self.peek() == Some(&Tok::Comma) {
            self.bump();
            args.push(self.expr()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        if args.len() != arity {
            return Err(ParseError::Arity {
                func: name,
                pos,
                expected: arity,
                found: args.len(),
            });
        }
        Ok(build(args))
    }
}

fn unary(op: UnaryOp, mut args: Vec<Expr>) -> Expr {
    Expr::Unary(op, Box::new(args.remove(0)))
}

fn binary(op: BinaryOp, mut args: Vec<Expr>) -> Expr {
    let b = args.pop().expect("two args");
    let a = args.pop().expect("two args");
    Expr::Binary(op, Box::new(a), Box::new(b))
}

/// Parses `n` semicolon-separated component expressions.
pub fn parse(text: &str, n: usize) -> Result<MapSpec, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        at: 0,
        end: text.len(),
        n,
    };
    let mut components = vec![p.expr()?];
    while p.peek() == Some(&Tok::Semi) {
        p.bump();
        components.push(p.expr()?);
    }
    if p.at < toks.len() {
        return Err(ParseError::Syntax {
            pos: p.pos(),
            msg: "unexpected trailing input".into(),
        });
    }
    if components.len() != n {
        return Err(ParseError::ComponentCountMismatch {
            expected: n,
            found: components.len(),
        });
    }
    Ok(MapSpec::new(n, components))
}
