//! Newick serialization of dendrograms, and a reader for the same dialect.
//!
//! Branch lengths follow the ultrametric convention: a node's depth is half
//! its merge height, so sibling leaves merged at height `h` each get a
//! branch of length `h/2` and every leaf is equidistant from the root.
//! Children are emitted in canonical-form order, which makes the output a
//! function of the leaf-labeled topology and the heights alone.

use thiserror::Error;

use crate::cluster::{ClusterError, Dendrogram, MergeStep};

#[derive(Debug, Error)]
pub enum NewickError {
    #[error("empty input")]
    Empty,
    #[error("unexpected character {found:?} at byte {at}")]
    Unexpected { found: char, at: usize },
    #[error("unterminated subtree: missing ')'")]
    UnclosedBracket,
    #[error("missing terminating ';'")]
    MissingSemicolon,
    #[error("missing branch length at byte {0}")]
    MissingLength(usize),
    #[error("invalid branch length at byte {0}")]
    BadLength(usize),
    #[error("node with {0} children: only binary trees are supported")]
    NotBinary(usize),
    #[error("empty leaf label at byte {0}")]
    EmptyLabel(usize),
    #[error(transparent)]
    Structure(#[from] ClusterError),
}

/// Newick text with full-precision branch lengths (shortest representation
/// that round-trips through an f64).
pub fn to_newick(tree: &Dendrogram) -> String {
    render(tree, None)
}

/// Newick text with branch lengths rounded to `decimals` places, trailing
/// zeros trimmed (`0.500000` prints as `0.5`).
pub fn to_newick_with_precision(tree: &Dendrogram, decimals: usize) -> String {
    render(tree, Some(decimals))
}

fn render(tree: &Dendrogram, decimals: Option<usize>) -> String {
    let mut out = String::new();
    write_node(tree, tree.root(), None, decimals, &mut out);
    out.push(';');
    out
}

fn write_node(
    tree: &Dendrogram,
    node: usize,
    parent_depth: Option<f64>,
    decimals: Option<usize>,
    out: &mut String,
) {
    let depth = tree.height_of(node) / 2.0;
    match tree.children(node) {
        None => out.push_str(&sanitize_label(&tree.labels()[node])),
        Some((left, right)) => {
            // Canonical order: child with the smaller canonical form first.
            let (first, second) = if canon(tree, left) <= canon(tree, right) {
                (left, right)
            } else {
                (right, left)
            };
            out.push('(');
            write_node(tree, first, Some(depth), decimals, out);
            out.push(',');
            write_node(tree, second, Some(depth), decimals, out);
            out.push(')');
        }
    }
    if let Some(pd) = parent_depth {
        out.push(':');
        out.push_str(&format_length(pd - depth, decimals));
    }
}

fn canon(tree: &Dendrogram, node: usize) -> String {
    match tree.children(node) {
        None => tree.labels()[node].clone(),
        Some((l, r)) => {
            let (a, b) = (canon(tree, l), canon(tree, r));
            if a <= b {
                format!("({a},{b})")
            } else {
                format!("({b},{a})")
            }
        }
    }
}

fn format_length(len: f64, decimals: Option<usize>) -> String {
    match decimals {
        None => format!("{len}"),
        Some(d) => {
            let s = format!("{len:.d$}");
            if s.contains('.') {
                let trimmed = s.trim_end_matches('0').trim_end_matches('.');
                if trimmed.is_empty() || trimmed == "-" {
                    "0".to_string()
                } else {
                    trimmed.to_string()
                }
            } else {
                s
            }
        }
    }
}

/// Newick structural characters are replaced in labels so the output always
/// reparses; ids coming from FASTA headers are whitespace-free already.
fn sanitize_label(label: &str) -> String {
    label
        .chars()
        .map(|c| {
            if matches!(c, '(' | ')' | ',' | ':' | ';' | '[' | ']' | '\'' | '"')
                || c.is_whitespace()
            {
                '_'
            } else {
                c
            }
        })
        .collect()
}

enum ParsedNode {
    Leaf { label: String },
    Internal { children: Vec<(ParsedNode, f64)> },
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse_node(&mut self) -> Result<ParsedNode, NewickError> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let mut children = Vec::new();
                loop {
                    let child = self.parse_node()?;
                    let length = self.parse_length()?;
                    children.push((child, length));
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                        }
                        Some(b')') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(NewickError::UnclosedBracket),
                    }
                }
                if children.len() != 2 {
                    return Err(NewickError::NotBinary(children.len()));
                }
                Ok(ParsedNode::Internal { children })
            }
            Some(_) => {
                let start = self.pos;
                while matches!(self.peek(), Some(b) if !matches!(b, b'(' | b')' | b',' | b':' | b';'))
                {
                    self.pos += 1;
                }
                let label = std::str::from_utf8(&self.bytes[start..self.pos])
                    .map_err(|_| NewickError::EmptyLabel(start))?
                    .trim()
                    .to_string();
                if label.is_empty() {
                    return Err(NewickError::EmptyLabel(start));
                }
                Ok(ParsedNode::Leaf { label })
            }
            None => Err(NewickError::UnclosedBracket),
        }
    }

    fn parse_length(&mut self) -> Result<f64, NewickError> {
        self.skip_ws();
        match self.peek() {
            Some(b':') => {
                self.pos += 1;
                let start = self.pos;
                while matches!(
                    self.peek(),
                    Some(b) if b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E')
                ) {
                    self.pos += 1;
                }
                std::str::from_utf8(&self.bytes[start..self.pos])
                    .ok()
                    .and_then(|s| s.parse::<f64>().ok())
                    .ok_or(NewickError::BadLength(start))
            }
            _ => Err(NewickError::MissingLength(self.pos)),
        }
    }
}

/// Parses the dialect written by [`to_newick`]: a rooted binary tree with
/// branch lengths on every non-root edge, terminated by `;`.
///
/// Node heights are reconstructed under the ultrametric reading
/// (height = 2 × distance to the deepest leaf below).
pub fn parse_newick(text: &str) -> Result<Dendrogram, NewickError> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    parser.skip_ws();
    if parser.peek().is_none() {
        return Err(NewickError::Empty);
    }
    let root = parser.parse_node()?;
    parser.skip_ws();
    match parser.peek() {
        Some(b';') => parser.pos += 1,
        Some(b':') => {
            // A root branch length is legal Newick; read and ignore it.
            parser.parse_length()?;
            parser.skip_ws();
            if parser.peek() != Some(b';') {
                return Err(NewickError::MissingSemicolon);
            }
            parser.pos += 1;
        }
        _ => return Err(NewickError::MissingSemicolon),
    }
    parser.skip_ws();
    if let Some(b) = parser.peek() {
        return Err(NewickError::Unexpected {
            found: b as char,
            at: parser.pos,
        });
    }

    let mut labels = Vec::new();
    let mut merges = Vec::new();
    build(&root, &mut labels, &mut merges);
    if labels.len() < 2 {
        return Err(NewickError::NotBinary(labels.len()));
    }
    // Post-order construction indexes merges from 0; rebase node ids once
    // the leaf count is known.
    let n = labels.len();
    let rebase = |node: NodeRef| match node {
        NodeRef::Leaf(i) => i,
        NodeRef::Merge(i) => n + i,
    };
    let rebased = merges
        .iter()
        .map(|&(l, r, h)| MergeStep {
            left: rebase(l),
            right: rebase(r),
            height: h,
        })
        .collect();
    Ok(Dendrogram::new(labels, rebased)?)
}

#[derive(Clone, Copy)]
enum NodeRef {
    Leaf(usize),
    Merge(usize),
}

/// Post-order walk; returns (node reference, depth below the node).
fn build(
    node: &ParsedNode,
    labels: &mut Vec<String>,
    merges: &mut Vec<(NodeRef, NodeRef, f64)>,
) -> (NodeRef, f64) {
    match node {
        ParsedNode::Leaf { label } => {
            labels.push(label.clone());
            (NodeRef::Leaf(labels.len() - 1), 0.0)
        }
        ParsedNode::Internal { children } => {
            let (left, left_len) = (&children[0].0, children[0].1);
            let (right, right_len) = (&children[1].0, children[1].1);
            let (l_ref, l_depth) = build(left, labels, merges);
            let (r_ref, r_depth) = build(right, labels, merges);
            let depth = (l_depth + left_len).max(r_depth + right_len);
            merges.push((l_ref, r_ref, 2.0 * depth));
            (NodeRef::Merge(merges.len() - 1), depth)
        }
    }
}
