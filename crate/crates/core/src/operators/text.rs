//! Recipe text form: `id` or `det[i1,...,in](R1,...,Rn)`.

use std::fmt;

use super::{OperatorError, OperatorRecipe};

impl fmt::Display for OperatorRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorRecipe::Identity => f.write_str("id"),
            OperatorRecipe::Det { rows, children } => {
                f.write_str("det[")?;
                for (k, i) in rows.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{i}")?;
                }
                f.write_str("](")?;
                for (k, c) in children.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl std::str::FromStr for OperatorRecipe {
    type Err = OperatorError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_recipe(s)
    }
}

struct Cursor<'a> {
    b: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn ws(&mut self) {
        while self.pos < self.b.len() && self.b[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err<T>(&self, msg: &str) -> Result<T, OperatorError> {
        Err(OperatorError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        })
    }

    fn eat(&mut self, s: &str) -> bool {
        self.ws();
        if self.b[self.pos..].starts_with(s.as_bytes()) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), OperatorError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(&format!("expected '{s}'"))
        }
    }

    fn index(&mut self) -> Result<usize, OperatorError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.b.len() && self.b[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a row index");
        }
        let s = std::str::from_utf8(&self.b[start..self.pos]).expect("ascii digits");
        s.parse().or_else(|_| self.err("row index too large"))
    }

    fn recipe(&mut self) -> Result<OperatorRecipe, OperatorError> {
        if self.eat("id") {
            return Ok(OperatorRecipe::Identity);
        }
        if !self.eat("det") {
            return self.err("expected 'id' or 'det'");
        }
        self.expect("[")?;
        let mut rows = vec![self.index()?];
        while self.eat(",") {
            rows.push(self.index()?);
        }
        self.expect("]")?;
        self.expect("(")?;
        let mut children = vec![self.recipe()?];
        while self.eat(",") {
            children.push(self.recipe()?);
        }
        self.expect(")")?;
        Ok(OperatorRecipe::Det { rows, children })
    }
}

/// Parse a recipe. Structural checks against a dimension are left to
/// [`OperatorRecipe::validate`].
pub fn parse_recipe(text: &str) -> Result<OperatorRecipe, OperatorError> {
    let mut c = Cursor {
        b: text.as_bytes(),
        pos: 0,
    };
    let r = c.recipe()?;
    c.ws();
    if c.pos != c.b.len() {
        return c.err("trailing input");
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["id", "det[1](id)", "det[1,2](det[1](id),det[2](id))", "det[2,3](id,det[1](id))"] {
            assert_eq!(parse_recipe(s).unwrap().to_string(), s);
        }
        assert_eq!(
            parse_recipe(" det [ 1 , 2 ] ( id , id ) ").unwrap().to_string(),
            "det[1,2](id,id)"
        );
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_recipe("det(id)"), Err(OperatorError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_recipe("det[1](id"), Err(OperatorError::Syntax { .. })));
        assert!(matches!(parse_recipe("id id"), Err(OperatorError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_recipe("foo"), Err(OperatorError::Syntax { pos: 0, .. })));
    }
}
