//! Shape graphs in DOT format.

use std::fmt::Write;

use super::DTree;

/// Directed graph with an edge from each node to each child. Leaves are
/// labeled with their index, internal vertices are unlabeled. Vertices are
/// numbered in preorder.
pub fn to_dot(g: &DTree) -> String {
    let mut body = String::new();
    let mut next = 0usize;
    emit(g, &mut next, &mut body);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "// vertices: {}, leaves: {}, order: {}",
        g.vertex_count(),
        g.leaf_count(),
        g.order()
    );
    out.push_str("digraph G {\n");
    out.push_str(&body);
    out.push_str("}\n");
    out
}

fn emit(g: &DTree, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    match g {
        DTree::Leaf(i) => {
            let _ = writeln!(out, "  n{id} [label=\"{i}\", shape=plaintext];");
        }
        DTree::Node(cs) => {
            let _ = writeln!(out, "  n{id} [label=\"\", shape=point];");
            for c in cs {
                let cid = emit(c, next, out);
                let _ = writeln!(out, "  n{id} -> n{cid};");
            }
        }
    }
    id
}

#[cfg(test)]
mod tests {
    use super::super::{hessian_tree, mixed_derivative_tree};
    use super::*;

    fn labels(dot: &str) -> Vec<String> {
        dot.lines()
            .filter_map(|l| l.split("label=\"").nth(1))
            .map(|r| r.split('"').next().unwrap().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    }

    #[test]
    fn single_leaf() {
        let d = to_dot(&DTree::Leaf(1));
        assert!(d.starts_with("// vertices: 1, leaves: 1, order: 0"));
        assert_eq!(d.matches("->").count(), 0);
        assert_eq!(labels(&d), vec!["1"]);
    }

    #[test]
    fn hessian_graph() {
        let d = to_dot(&hessian_tree(2).unwrap());
        assert!(d.starts_with("// vertices: 7, leaves: 4, order: 3"));
        assert_eq!(d.matches("->").count(), 6);
        assert_eq!(labels(&d), vec!["3", "2", "1", "3"]);
    }

    #[test]
    fn mixed_graph_leaf_multiset() {
        let d = to_dot(&mixed_derivative_tree(&[1, 1, 1, 0], 4).unwrap());
        assert!(d.starts_with("// vertices: 13, leaves: 10,"));
        let mut got = labels(&d);
        got.sort();
        let mut want: Vec<String> = [1, 2, 4, 1, 3, 4, 5, 2, 3, 4].iter().map(|i| i.to_string()).collect();
        want.sort();
        assert_eq!(got, want);
    }
}
