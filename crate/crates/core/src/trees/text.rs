//! Bracketed text form: a leaf is its index, a node is `(c1,...,cd)`.

use std::fmt;

use super::{DTree, TreeError};

impl fmt::Display for DTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DTree::Leaf(i) => write!(f, "{i}"),
            DTree::Node(cs) => {
                f.write_str("(")?;
                for (k, c) in cs.iter().enumerate() {
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

impl std::str::FromStr for DTree {
    type Err = TreeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tree(s)
    }
}

/// Parse the bracketed form, e.g. `((3,2),(1,3))`. Whitespace is ignored.
pub fn parse_tree(text: &str) -> Result<DTree, TreeError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let t = parse_at(bytes, &mut pos)?;
    skip_ws(bytes, &mut pos);
    if pos != bytes.len() {
        return Err(syntax(pos, "trailing input"));
    }
    Ok(t)
}

fn syntax(pos: usize, msg: &str) -> TreeError {
    TreeError::Syntax {
        pos,
        msg: msg.to_string(),
    }
}

fn skip_ws(b: &[u8], pos: &mut usize) {
    while *pos < b.len() && b[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

fn parse_at(b: &[u8], pos: &mut usize) -> Result<DTree, TreeError> {
    skip_ws(b, pos);
    match b.get(*pos) {
        Some(b'(') => {
            *pos += 1;
            let mut children = vec![parse_at(b, pos)?];
            loop {
                skip_ws(b, pos);
                match b.get(*pos) {
                    Some(b',') => {
                        *pos += 1;
                        children.push(parse_at(b, pos)?);
                    }
                    Some(b')') => {
                        *pos += 1;
                        return Ok(DTree::Node(children));
                    }
                    _ => return Err(syntax(*pos, "expected ',' or ')'")),
                }
            }
        }
        Some(c) if c.is_ascii_digit() => {
            let start = *pos;
            while *pos < b.len() && b[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let s = std::str::from_utf8(&b[start..*pos]).expect("ascii digits");
            let i: usize = s.parse().map_err(|_| syntax(start, "index too large"))?;
            if i == 0 {
                return Err(syntax(start, "leaf indices are 1-based"));
            }
            Ok(DTree::Leaf(i))
        }
        _ => Err(syntax(*pos, "expected '(' or a leaf index")),
    }
}
