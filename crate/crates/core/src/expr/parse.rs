use super::{Expr, ExprError, Func};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(u8),
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, usize), ExprError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || c == b'.' {
            return self.number(start).map(|n| (Tok::Num(n), start));
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.src.len()
                && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
            return Ok((Tok::Ident(name), start));
        }
        if b"+-*/^()".contains(&c) {
            self.pos += 1;
            return Ok((Tok::Op(c), start));
        }
        Err(ExprError::Syntax {
            offset: start,
            message: format!("unexpected character {:?}", char_at(self.src, start)),
        })
    }

    fn number(&mut self, start: usize) -> Result<f64, ExprError> {
        let digits = |lx: &mut Self| {
            let s = lx.pos;
            while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_digit() {
                lx.pos += 1;
            }
            lx.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            return Err(ExprError::Syntax {
                offset: start,
                message: "malformed number".into(),
            });
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                // `2e` or `2exp(..)`: leave the letter for the identifier lexer
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<f64>().map_err(|_| ExprError::Syntax {
            offset: start,
            message: format!("malformed number `{text}`"),
        })
    }
}

fn char_at(src: &[u8], pos: usize) -> char {
    std::str::from_utf8(&src[pos..])
        .ok()
        .and_then(|s| s.chars().next())
        .unwrap_or(src[pos] as char)
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
    var: &'a str,
}

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), ExprError> {
        let (tok, at) = self.lexer.next()?;
        self.tok = tok;
        self.at = at;
        Ok(())
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax {
            offset: self.at,
            message: message.into(),
        })
    }

    fn expect_op(&mut self, op: u8) -> Result<(), ExprError> {
        if self.tok == Tok::Op(op) {
            self.bump()
        } else {
            self.error(format!("expected `{}`", op as char))
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.tok {
                Tok::Op(b'+') => {
                    self.bump()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Op(b'-') => {
                    self.bump()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            match self.tok {
                Tok::Op(b'*') => {
                    self.bump()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Op(b'/') => {
                    self.bump()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.tok == Tok::Op(b'-') {
            self.bump()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    // power := primary ('^' unary)?
    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.tok == Tok::Op(b'^') {
            self.bump()?;
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(n) => {
                self.bump()?;
                Ok(Expr::Const(n))
            }
            Tok::Op(b'(') => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect_op(b')')?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                let at = self.at;
                self.bump()?;
                if name == self.var {
                    return Ok(Expr::Var);
                }
                match name.as_str() {
                    "pi" => return Ok(Expr::Const(std::f64::consts::PI)),
                    "e" => return Ok(Expr::Const(std::f64::consts::E)),
                    _ => {}
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(ExprError::UnknownIdentifier { name, offset: at });
                };
                if self.tok != Tok::Op(b'(') {
                    return self.error(format!("expected `(` after `{name}`"));
                }
                self.bump()?;
                let arg = self.expr()?;
                self.expect_op(b')')?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            Tok::End => self.error("unexpected end of input"),
            Tok::Op(op) => {
                self.tok = Tok::Op(op);
                self.error(format!("unexpected `{}`", op as char))
            }
        }
    }
}

/// Parses `text` as an expression in the single variable `var_name`.
///
/// Precedence from loosest to tightest is `+ -`, `* /`, unary minus, `^`.
/// The binary operators associate to the left except `^`, which associates
/// to the right; so `-t^2` is `-(t^2)` and `2^3^2` is `2^9`.
pub fn parse(text: &str, var_name: &str) -> Result<Expr, ExprError> {
    let reserved = var_name == "pi" || var_name == "e" || Func::from_name(var_name).is_some();
    if !is_identifier(var_name) || reserved {
        return Err(ExprError::InvalidVariable(var_name.to_string()));
    }
    let mut parser = Parser {
        lexer: Lexer {
            src: text.as_bytes(),
            pos: 0,
        },
        tok: Tok::End,
        at: 0,
        var: var_name,
    };
    parser.bump()?;
    if parser.tok == Tok::End {
        return parser.error("empty expression");
    }
    let e = parser.expr()?;
    if parser.tok != Tok::End {
        return parser.error("unexpected trailing input");
    }
    Ok(e)
}
