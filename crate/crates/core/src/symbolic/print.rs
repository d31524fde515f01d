//! Printing in the same grammar the parser accepts.

use std::fmt::{self, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::expr::{is_negative_term, Expr};

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_sum(&mut s, self);
        f.write_str(&s)
    }
}

fn negate_term(t: &Expr) -> Expr {
    match t {
        Expr::Const(c) => Expr::Const(-c),
        Expr::Mul(fs) => {
            let mut fs = fs.clone();
            if let Some(Expr::Const(c)) = fs.first_mut() {
                *c = -c.clone();
                if c.is_one() {
                    fs.remove(0);
                }
            }
            if fs.len() == 1 {
                fs.pop().expect("one factor")
            } else {
                Expr::Mul(fs)
            }
        }
        other => Expr::Neg(Box::new(other.clone())),
    }
}

fn write_sum(out: &mut String, e: &Expr) {
    match e {
        Expr::Add(ts) => {
            for (k, t) in ts.iter().enumerate() {
                if k == 0 {
                    write_term(out, t);
                } else if is_negative_term(t) {
                    out.push_str(" - ");
                    write_term(out, &negate_term(t));
                } else {
                    out.push_str(" + ");
                    write_term(out, t);
                }
            }
        }
        other => write_term(out, other),
    }
}

fn write_rational_term(out: &mut String, c: &BigRational) {
    if c.denom().is_one() {
        let _ = write!(out, "{}", c.numer());
    } else {
        let _ = write!(out, "{}/{}", c.numer(), c.denom());
    }
}

fn write_term(out: &mut String, e: &Expr) {
    match e {
        Expr::Const(c) => write_rational_term(out, c),
        Expr::Neg(inner) => {
            out.push('-');
            write_factor(out, inner);
        }
        Expr::Mul(fs) => {
            let (coef, rest): (Option<&BigRational>, &[Expr]) = match fs.split_first() {
                Some((Expr::Const(c), rest)) => (Some(c), rest),
                _ => (None, fs.as_slice()),
            };
            if rest.is_empty() {
                if let Some(c) = coef {
                    write_rational_term(out, c);
                }
                return;
            }
            let mut denom: Option<BigInt> = None;
            if let Some(c) = coef {
                let numer = c.numer();
                if !c.denom().is_one() {
                    denom = Some(c.denom().clone());
                }
                if numer == &BigInt::from(-1) {
                    out.push('-');
                } else if !numer.is_one() {
                    let _ = write!(out, "{numer}*");
                }
            }
            for (k, f) in rest.iter().enumerate() {
                if k > 0 {
                    out.push('*');
                }
                write_factor(out, f);
            }
            if let Some(d) = denom {
                let _ = write!(out, "/{d}");
            }
        }
        other => write_factor(out, other),
    }
}

fn write_factor(out: &mut String, e: &Expr) {
    match e {
        Expr::Pow(b, n) => {
            write_base(out, b);
            let _ = write!(out, "^{n}");
        }
        other => write_base(out, other),
    }
}

fn write_base(out: &mut String, e: &Expr) {
    match e {
        Expr::Var(i) => {
            let _ = write!(out, "x{i}");
        }
        Expr::Const(c) if c.denom().is_one() && !c.is_negative() => {
            let _ = write!(out, "{}", c.numer());
        }
        Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => {
            out.push_str(match e {
                Expr::Sin(_) => "sin(",
                Expr::Cos(_) => "cos(",
                _ => "exp(",
            });
            write_sum(out, a);
            out.push(')');
        }
        other => {
            out.push('(');
            write_sum(out, other);
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse::parse;

    fn roundtrip(src: &str, d: usize) -> String {
        let e = parse(src, d).unwrap();
        let printed = e.to_string();
        assert_eq!(parse(&printed, d).unwrap(), e, "printed: {printed}");
        printed
    }

    #[test]
    fn prints_in_grammar() {
        assert_eq!(roundtrip("x1^2 + x2^2", 2), "x1^2 + x2^2");
        assert_eq!(roundtrip("x1 - x2", 2), "x1 - x2");
        assert_eq!(roundtrip("(1/2)*exp(x1)*sin(3*x2)", 2), "sin(3*x2)*exp(x1)/2");
        assert_eq!(roundtrip("-x1*x2", 2), "-x1*x2");
        assert_eq!(roundtrip("-3/4*x1", 2), "-3*x1/4");
        assert_eq!(roundtrip("x1^-2", 2), "x1^-2");
        assert_eq!(roundtrip("(x1+x2)^3", 2), "(x1 + x2)^3");
        assert_eq!(roundtrip("-1/3", 2), "-1/3");
        roundtrip("0^-1", 1);
        roundtrip("exp(-x1)*cos(x1 - 2)", 1);
    }
}
