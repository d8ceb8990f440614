//! Abstract syntax of EML expressions: the constant `1` and the binary
//! constructor `E(alpha, beta)`.

mod enumerate;
mod parse;

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

pub use enumerate::{catalan, class_size, rank, unrank};
pub use parse::{parse, ParseError};

/// A closed EML expression.
///
/// Children are reference counted so that compiled encodings can reuse
/// subterms without copying. Equality is structural; sharing is never
/// observable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EmlExpr {
    One,
    E(Arc<EmlExpr>, Arc<EmlExpr>),
}

impl EmlExpr {
    pub fn e(alpha: EmlExpr, beta: EmlExpr) -> EmlExpr {
        EmlExpr::E(Arc::new(alpha), Arc::new(beta))
    }

    /// `E(1,1)`, whose value is Euler's number.
    pub fn euler() -> EmlExpr {
        EmlExpr::e(EmlExpr::One, EmlExpr::One)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, EmlExpr::One)
    }

    pub fn children(&self) -> Option<(&EmlExpr, &EmlExpr)> {
        match self {
            EmlExpr::One => None,
            EmlExpr::E(a, b) => Some((a, b)),
        }
    }

    /// Follows `path` from this node, if it exists.
    pub fn at(&self, path: &NodePath) -> Option<&EmlExpr> {
        let mut node = self;
        for side in path.sides() {
            let (a, b) = node.children()?;
            node = match side {
                Side::Alpha => a,
                Side::Beta => b,
            };
        }
        Some(node)
    }

    pub fn metrics(&self) -> ExprMetrics {
        match self {
            EmlExpr::One => ExprMetrics {
                node_count: 1,
                depth: 0,
                e_count: 0,
            },
            EmlExpr::E(a, b) => {
                let ma = a.metrics();
                let mb = b.metrics();
                ExprMetrics {
                    node_count: ma.node_count + mb.node_count + 1,
                    depth: ma.depth.max(mb.depth) + 1,
                    e_count: ma.e_count + mb.e_count + 1,
                }
            }
        }
    }

    pub fn e_count(&self) -> usize {
        match self {
            EmlExpr::One => 0,
            EmlExpr::E(a, b) => a.e_count() + b.e_count() + 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            EmlExpr::One => 0,
            EmlExpr::E(a, b) => a.depth().max(b.depth()) + 1,
        }
    }

    /// Canonical text form, without whitespace.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write_to(&mut out);
        out
    }

    fn write_to(&self, out: &mut String) {
        match self {
            EmlExpr::One => out.push('1'),
            EmlExpr::E(a, b) => {
                out.push_str("E(");
                a.write_to(out);
                out.push(',');
                b.write_to(out);
                out.push(')');
            }
        }
    }

    /// JSON form: `{"op":"one"}` or `{"op":"E","alpha":..,"beta":..}`.
    pub fn to_json(&self) -> Value {
        match self {
            EmlExpr::One => json!({ "op": "one" }),
            EmlExpr::E(a, b) => json!({
                "op": "E",
                "alpha": a.to_json(),
                "beta": b.to_json(),
            }),
        }
    }
}

impl fmt::Display for EmlExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Structural size measures of an expression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExprMetrics {
    /// Leaves plus `E` nodes.
    pub node_count: usize,
    /// Longest root-to-leaf path; a leaf has depth 0.
    pub depth: usize,
    pub e_count: usize,
}

impl ExprMetrics {
    pub fn leaf_count(&self) -> usize {
        self.node_count - self.e_count
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Alpha,
    Beta,
}

/// Location of a subexpression, as the sequence of child choices taken
/// from the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodePath(Vec<Side>);

impl NodePath {
    pub fn root() -> NodePath {
        NodePath(Vec::new())
    }

    pub fn sides(&self) -> &[Side] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, side: Side) -> NodePath {
        let mut v = self.0.clone();
        v.push(side);
        NodePath(v)
    }

    pub fn alpha(&self) -> NodePath {
        self.child(Side::Alpha)
    }

    pub fn beta(&self) -> NodePath {
        self.child(Side::Beta)
    }

    /// `prefix` followed by `self`.
    pub fn under(&self, prefix: &NodePath) -> NodePath {
        let mut v = prefix.0.clone();
        v.extend_from_slice(&self.0);
        NodePath(v)
    }

    pub(crate) fn push(&mut self, side: Side) {
        self.0.push(side);
    }

    pub(crate) fn pop(&mut self) {
        self.0.pop();
    }
}

impl From<Vec<Side>> for NodePath {
    fn from(v: Vec<Side>) -> Self {
        NodePath(v)
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("root")?;
        for s in &self.0 {
            match s {
                Side::Alpha => f.write_str(".alpha")?,
                Side::Beta => f.write_str(".beta")?,
            }
        }
        Ok(())
    }
}
