//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor | '/' RATIONAL)*
//! factor := base ('^' INTEGER)?
//! base   := RATIONAL | VAR | '(' expr ')' | ('sin'|'cos'|'exp') '(' expr ')' | '-' factor
//! VAR    := 'x' INTEGER            (1-based)
//! ```
//!
//! `RATIONAL` is an unsigned decimal literal (`3`, `0.25`), read exactly.
//! `INTEGER` after `^` may carry a leading minus sign.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::expr::Expr;
use super::SymbolicError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SymbolicError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' | '.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                out.push((start, Tok::Num(text[start..i].to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            other => {
                return Err(SymbolicError::Syntax {
                    pos: start,
                    msg: format!("unexpected character '{other}'"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

fn parse_decimal(s: &str, pos: usize) -> Result<BigRational, SymbolicError> {
    let bad = || SymbolicError::Syntax {
        pos,
        msg: format!("malformed number '{s}'"),
    };
    let (int_part, frac_part) = match s.split_once('.') {
        Some((a, b)) => (a, b),
        None => (s, ""),
    };
    if frac_part.contains('.') || (int_part.is_empty() && frac_part.is_empty()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    Ok(BigRational::new(numer, denom))
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    src_len: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.src_len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SymbolicError> {
        Err(SymbolicError::Syntax {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), SymbolicError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr, SymbolicError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(&Tok::Plus) {
                terms.push(self.term()?);
            } else if self.eat(&Tok::Minus) {
                terms.push(Expr::Neg(Box::new(self.term()?)));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().expect("one term")
        } else {
            Expr::Add(terms)
        })
    }

    fn term(&mut self) -> Result<Expr, SymbolicError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat(&Tok::Star) {
                factors.push(self.factor()?);
            } else if self.eat(&Tok::Slash) {
                let pos = self.offset();
                match self.peek().cloned() {
                    Some(Tok::Num(s)) => {
                        self.pos += 1;
                        let r = parse_decimal(&s, pos)?;
                        if r.is_zero() {
                            return Err(SymbolicError::Syntax {
                                pos,
                                msg: "division by zero".into(),
                            });
                        }
                        factors.push(Expr::Const(r.recip()));
                    }
                    _ => return self.err("expected a rational literal after '/'"),
                }
            } else {
                break;
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().expect("one factor")
        } else {
            Expr::Mul(factors)
        })
    }

    fn factor(&mut self) -> Result<Expr, SymbolicError> {
        let base = self.base()?;
        if self.eat(&Tok::Caret) {
            let pos = self.offset();
            let negative = self.eat(&Tok::Minus);
            match self.peek().cloned() {
                Some(Tok::Num(s)) => {
                    self.pos += 1;
                    if s.contains('.') {
                        return Err(SymbolicError::NonIntegerExponent { pos, text: s });
                    }
                    let n: i64 = s
                        .parse()
                        .map_err(|_| SymbolicError::NonIntegerExponent { pos, text: s.clone() })?;
                    Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }))
                }
                Some(_) => Err(SymbolicError::NonIntegerExponent {
                    pos,
                    text: "non-literal exponent".into(),
                }),
                None => self.err("expected an integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Expr, SymbolicError> {
        let pos = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(s)) => {
                self.pos += 1;
                Ok(Expr::Const(parse_decimal(&s, pos)?))
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor()?)))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "sin" | "cos" | "exp" => {
                        self.expect(&Tok::LParen, "'(' after function name")?;
                        let arg = Box::new(self.expr()?);
                        self.expect(&Tok::RParen, "')'")?;
                        Ok(match name.as_str() {
                            "sin" => Expr::Sin(arg),
                            "cos" => Expr::Cos(arg),
                            _ => Expr::Exp(arg),
                        })
                    }
                    _ => self.variable(&name, pos),
                }
            }
            Some(_) => self.err("expected a number, variable, function or '('"),
            None => self.err("unexpected end of input"),
        }
    }

    fn variable(&self, name: &str, pos: usize) -> Result<Expr, SymbolicError> {
        let index = name
            .strip_prefix('x')
            .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|rest| rest.parse::<usize>().ok());
        match index {
            Some(0) | None => Err(SymbolicError::UnknownIdentifier {
                pos,
                name: name.to_string(),
            }),
            Some(i) if i > self.dim => Err(SymbolicError::VariableOutOfRange {
                index: i,
                dim: self.dim,
            }),
            Some(i) => Ok(Expr::Var(i)),
        }
    }
}

/// Parse `text` into an (unsimplified) expression over `x1..x{dim}`.
pub fn parse_raw(text: &str, dim: usize) -> Result<Expr, SymbolicError> {
    if dim == 0 {
        return Err(SymbolicError::ZeroDimension);
    }
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        src_len: text.len(),
        dim,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parse and simplify.
pub fn parse(text: &str, dim: usize) -> Result<Expr, SymbolicError> {
    parse_raw(text, dim).map(|e| e.simplify())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_squares() {
        let e = parse_raw("x1^2 + x2^2", 2).unwrap();
        assert_eq!(
            e,
            Expr::Add(vec![
                Expr::Pow(Box::new(Expr::Var(1)), 2),
                Expr::Pow(Box::new(Expr::Var(2)), 2)
            ])
        );
    }

    #[test]
    fn half_exp_sin() {
        let e = parse_raw("(1/2)*exp(x1)*sin(3*x2)", 2).unwrap();
        assert_eq!(
            e,
            Expr::Mul(vec![
                Expr::Mul(vec![Expr::int(1), Expr::rational(1, 2)]),
                Expr::Exp(Box::new(Expr::Var(1))),
                Expr::Sin(Box::new(Expr::Mul(vec![Expr::int(3), Expr::Var(2)]))),
            ])
        );
        assert_eq!(
            e.simplify(),
            Expr::Mul(vec![
                Expr::rational(1, 2),
                Expr::Sin(Box::new(Expr::Mul(vec![Expr::int(3), Expr::Var(2)]))),
                Expr::Exp(Box::new(Expr::Var(1))),
            ])
        );
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse("x3 + 1", 2),
            Err(SymbolicError::VariableOutOfRange { index: 3, dim: 2 })
        ));
        assert!(matches!(parse("y + 1", 2), Err(SymbolicError::UnknownIdentifier { .. })));
        assert!(matches!(parse("x0", 2), Err(SymbolicError::UnknownIdentifier { .. })));
        assert!(matches!(parse("x1^0.5", 2), Err(SymbolicError::NonIntegerExponent { .. })));
        assert!(matches!(parse("x1^x2", 2), Err(SymbolicError::NonIntegerExponent { .. })));
        assert!(matches!(parse("x1 + ", 2), Err(SymbolicError::Syntax { pos: 5, .. })));
        assert!(matches!(parse("x1 $ 2", 2), Err(SymbolicError::Syntax { pos: 3, .. })));
        assert!(matches!(parse("x1 / x2", 2), Err(SymbolicError::Syntax { .. })));
        assert!(matches!(parse("(x1", 2), Err(SymbolicError::Syntax { .. })));
        assert!(matches!(parse("1/0", 2), Err(SymbolicError::Syntax { .. })));
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse("0.25", 1).unwrap(), Expr::rational(1, 4));
        assert_eq!(parse("-x1^-2", 1).unwrap(), Expr::Mul(vec![Expr::int(-1), Expr::Pow(Box::new(Expr::Var(1)), -2)]));
    }
}
