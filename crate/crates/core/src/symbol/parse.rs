use std::fmt;

use super::Expr;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub struct ParseError {
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    S2,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Comma,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(v) => write!(f, "number {v}"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::S2 => f.write_str("`s^2`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        let before = &self.src[..offset.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { message: message.into(), line, column }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    /// Next token and its byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, start));
        }
        if c.is_ascii_digit() || c == '.' {
            let bytes = rest.as_bytes();
            let mut end = 0;
            while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                end += 1;
            }
            if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                let mut k = end + 1;
                if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                    k += 1;
                }
                if k < bytes.len() && bytes[k].is_ascii_digit() {
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    end = k;
                }
            }
            let text = &rest[..end];
            let v: f64 = text
                .parse()
                .map_err(|_| self.error_at(start, format!("malformed number `{text}`")))?;
            if !v.is_finite() {
                return Err(self.error_at(start, format!("number `{text}` overflows")));
            }
            self.pos += end;
            return Ok((Tok::Num(v), start));
        }
        if c.is_ascii_alphabetic() {
            let end = rest
                .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                .unwrap_or(rest.len());
            let word = &rest[..end];
            self.pos += end;
            if word == "s" {
                // `s^2`, optionally spaced as `s ^ 2`
                let save = self.pos;
                self.skip_ws();
                if self.src[self.pos..].starts_with('^') {
                    self.pos += 1;
                    self.skip_ws();
                    if self.src[self.pos..].starts_with('2')
                        && !self.src[self.pos + 1..].starts_with(|ch: char| ch.is_ascii_digit() || ch == '.')
                    {
                        self.pos += 1;
                        return Ok((Tok::S2, start));
                    }
                    return Err(self.error_at(self.pos, "only `s^2` is supported as a power"));
                }
                self.pos = save;
            }
            return Ok((Tok::Ident(word.to_string()), start));
        }
        if c == '^' {
            return Err(self.error_at(start, "`^` is only allowed in `s^2`"));
        }
        Err(self.error_at(start, format!("unexpected character `{c}`")))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, at) = lexer.next()?;
        Ok(Self { lexer, tok, at })
    }

    fn bump(&mut self) -> Result<Tok, ParseError> {
        let (next, at) = self.lexer.next()?;
        self.at = at;
        Ok(std::mem::replace(&mut self.tok, next))
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        self.lexer.error_at(self.at, message)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.tok == want {
            self.bump()?;
            Ok(())
        } else {
            Err(self.error(format!("expected {want}, found {}", self.tok)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.tok {
                Tok::Plus => {
                    self.bump()?;
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Minus => {
                    self.bump()?;
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.tok == Tok::Star {
            self.bump()?;
            lhs = Expr::mul(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let negative = if self.tok == Tok::Minus {
            self.bump()?;
            true
        } else {
            false
        };
        match self.bump()? {
            Tok::Num(v) => Ok(if negative { -v } else { v }),
            Tok::Ident(w) if w == "pi" => Ok(if negative { -std::f64::consts::PI } else { std::f64::consts::PI }),
            Tok::Ident(w) if w == "inf" => Ok(if negative { f64::NEG_INFINITY } else { f64::INFINITY }),
            other => Err(self.error(format!("expected a number, found {other}"))),
        }
    }

    fn call_arg(&mut self) -> Result<Expr, ParseError> {
        self.expect(Tok::LParen)?;
        let e = self.expr()?;
        self.expect(Tok::RParen)?;
        Ok(e)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.tok.clone() {
            Tok::Minus => {
                self.bump()?;
                // a literal directly after the sign folds into the number
                if let Tok::Num(v) = self.tok {
                    self.bump()?;
                    return Ok(Expr::Num(-v));
                }
                Ok(Expr::neg(self.factor()?))
            }
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::Num(v))
            }
            Tok::S2 => {
                self.bump()?;
                Ok(Expr::S2)
            }
            Tok::LParen => self.call_arg(),
            Tok::Ident(word) => {
                let word_at = self.at;
                self.bump()?;
                match word.as_str() {
                    "s" => Ok(Expr::S),
                    "re" => Ok(Expr::Re),
                    "im" => Ok(Expr::Im),
                    "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                    "exp" => Ok(Expr::exp(self.call_arg()?)),
                    "sin" => Ok(Expr::sin(self.call_arg()?)),
                    "cos" => Ok(Expr::cos(self.call_arg()?)),
                    "ind" => {
                        self.expect(Tok::LParen)?;
                        let lo = self.signed_number()?;
                        self.expect(Tok::Comma)?;
                        let hi = self.signed_number()?;
                        self.expect(Tok::RParen)?;
                        if !(lo >= 0.0 && hi > lo) || lo.is_infinite() {
                            return Err(self
                                .lexer
                                .error_at(word_at, format!("indicator needs 0 <= a < b, got ind({lo}, {hi})")));
                        }
                        Ok(Expr::Ind(lo, hi))
                    }
                    other => Err(self.lexer.error_at(word_at, format!("unknown identifier `{other}`"))),
                }
            }
            other => Err(self.error(format!("expected an operand, found {other}"))),
        }
    }
}

/// Parse a symbol expression. Errors carry 1-based line and column.
pub fn parse_symbol(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.error(format!("unexpected {} after expression", p.tok)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant() {
        assert_eq!(parse_symbol("1").unwrap(), Expr::Num(1.0));
        assert_eq!(parse_symbol("  -2.5e-1 ").unwrap(), Expr::Num(-0.25));
    }

    #[test]
    fn decaying_product() {
        let e = parse_symbol("s^2 * exp(-1*s^2)").unwrap();
        assert_eq!(
            e,
            Expr::mul(Expr::S2, Expr::exp(Expr::mul(Expr::Num(-1.0), Expr::S2)))
        );
        assert!(e.check_bounded().is_ok());
    }

    #[test]
    fn spaced_power_and_precedence() {
        let e = parse_symbol("1 + s ^ 2 * 2 - 3").unwrap();
        assert_eq!(
            e,
            Expr::sub(Expr::add(Expr::Num(1.0), Expr::mul(Expr::S2, Expr::Num(2.0))), Expr::Num(3.0))
        );
    }

    #[test]
    fn error_positions() {
        let err = parse_symbol("exp(s^2 +)").unwrap_err();
        assert_eq!((err.line, err.column), (1, 10));
        let err = parse_symbol("1 +\n  foo").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
        assert!(err.message.contains("foo"));
        let err = parse_symbol("s^3").unwrap_err();
        assert_eq!(err.column, 3);
        assert!(parse_symbol("ind(2, 1)").is_err());
        assert!(parse_symbol("(1").is_err());
        assert!(parse_symbol("1 2").is_err());
    }

    #[test]
    fn neg_literal_versus_neg_node() {
        assert_eq!(parse_symbol("-(1)").unwrap(), Expr::neg(Expr::Num(1.0)));
        assert_eq!(parse_symbol("--1").unwrap(), Expr::neg(Expr::Num(-1.0)));
        assert_eq!(parse_symbol("-s").unwrap(), Expr::neg(Expr::S));
    }
}
