use std::collections::HashMap;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{raw, Diagram, Dim, Endpoint, GeneratorKind, ParamVec};

pub const FORMAT_VERSION: &str = "1";

/// Problems that stop a document from being turned into a diagram at all.
/// Structural problems (dangling ports, dimension clashes) are left to
/// [`Diagram::validate`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(String),
    #[error("unsupported format version '{0}'")]
    Version(String),
    #[error("node {id}: unknown kind '{kind}'")]
    UnknownKind { id: usize, kind: String },
    #[error("node {id} ({kind}): missing field '{field}'")]
    MissingField {
        id: usize,
        kind: String,
        field: &'static str,
    },
    #[error("node {id}: {reason}")]
    BadValue { id: usize, reason: String },
    #[error("duplicate node id {0}")]
    DuplicateId(usize),
    #[error("dimension 0 in boundary")]
    ZeroBoundaryDim,
}

/// One node. Only the fields its kind uses are present.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocNode {
    pub id: usize,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Leg dimensions of a Z box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inputs: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_in: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_out: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<i64>,
    /// Z box parameters, or the single value of a scalar, as `[re, im]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DocEndpoint {
    Port { node: usize, port: usize },
    Boundary { boundary: Side, index: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub version: String,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    pub nodes: Vec<DocNode>,
    pub edges: Vec<[DocEndpoint; 2]>,
}

fn pairs(c: &[C64]) -> Vec<[f64; 2]> {
    c.iter().map(|z| [z.re, z.im]).collect()
}

fn doc_node(id: usize, k: &GeneratorKind) -> DocNode {
    use GeneratorKind::*;
    let mut n = DocNode {
        id,
        kind: k.tag().to_string(),
        ..DocNode::default()
    };
    match k {
        ZBox { inputs, outputs, params } => {
            n.inputs = Some(raw(inputs));
            n.outputs = Some(raw(outputs));
            n.params = Some(pairs(params.entries()));
        }
        WNode { dim, fanout } => {
            n.dim = Some(dim.get());
            n.n_out = Some(*fanout);
        }
        WNodeDagger { dim, fanin } => {
            n.dim = Some(dim.get());
            n.n_in = Some(*fanin);
        }
        XSpider { dim, n_in, n_out } => {
            n.dim = Some(dim.get());
            n.n_in = Some(*n_in);
            n.n_out = Some(*n_out);
        }
        Hadamard { dim } | Identity { dim } | Cap { dim } | Cup { dim } => n.dim = Some(dim.get()),
        Splitter { m, n: k } | Merger { m, n: k } | Swap { m, n: k } => {
            n.m = Some(m.get());
            n.n = Some(k.get());
        }
        Multiplier { dim, label } => {
            n.dim = Some(dim.get());
            n.label = Some(*label as i64);
        }
        Scalar(c) => n.params = Some(pairs(&[*c])),
    }
    n
}

impl DiagramDocument {
    pub fn from_diagram(d: &Diagram) -> Self {
        let ep = |e: Endpoint| match e {
            Endpoint::Port { node, port } => DocEndpoint::Port { node, port },
            Endpoint::Input(index) => DocEndpoint::Boundary { boundary: Side::In, index },
            Endpoint::Output(index) => DocEndpoint::Boundary { boundary: Side::Out, index },
        };
        DiagramDocument {
            version: FORMAT_VERSION.to_string(),
            inputs: raw(d.inputs()),
            outputs: raw(d.outputs()),
            nodes: d.nodes().iter().enumerate().map(|(i, k)| doc_node(i, k)).collect(),
            edges: d.edges().iter().map(|&(a, b)| [ep(a), ep(b)]).collect(),
        }
    }

    /// Builds the diagram. Node ids may be any distinct numbers; edges that
    /// name an unknown id are kept and reported by validation.
    pub fn to_diagram(&self) -> Result<Diagram, DocumentError> {
        if self.version != FORMAT_VERSION {
            return Err(DocumentError::Version(self.version.clone()));
        }
        let mut index = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if index.insert(n.id, i).is_some() {
                return Err(DocumentError::DuplicateId(n.id));
            }
        }
        let nodes = self.nodes.iter().map(parse_node).collect::<Result<Vec<_>, _>>()?;
        let missing = self.nodes.len();
        let ep = |e: &DocEndpoint| match *e {
            DocEndpoint::Port { node, port } => Endpoint::port(index.get(&node).copied().unwrap_or(missing + node), port),
            DocEndpoint::Boundary { boundary: Side::In, index } => Endpoint::Input(index),
            DocEndpoint::Boundary { boundary: Side::Out, index } => Endpoint::Output(index),
        };
        let edges = self.edges.iter().map(|[a, b]| (ep(a), ep(b))).collect();
        let boundary = |v: &[usize]| -> Result<Vec<Dim>, DocumentError> {
            v.iter().map(|&d| Dim::new(d).map_err(|_| DocumentError::ZeroBoundaryDim)).collect()
        };
        Ok(Diagram::from_parts(nodes, edges, boundary(&self.inputs)?, boundary(&self.outputs)?))
    }
}

fn parse_node(n: &DocNode) -> Result<GeneratorKind, DocumentError> {
    use GeneratorKind::*;
    let missing = |field| DocumentError::MissingField {
        id: n.id,
        kind: n.kind.clone(),
        field,
    };
    let bad = |reason: String| DocumentError::BadValue { id: n.id, reason };
    let to_dim = |v: usize| Dim::new(v).map_err(|e| bad(e.to_string()));
    let dim = || to_dim(n.dim.ok_or_else(|| missing("dim"))?);
    let mn = || -> Result<(Dim, Dim), DocumentError> {
        Ok((to_dim(n.m.ok_or_else(|| missing("m"))?)?, to_dim(n.n.ok_or_else(|| missing("n"))?)?))
    };
    let count = |v: Option<usize>, field| v.ok_or_else(|| missing(field));
    let dims = |v: &Option<Vec<usize>>, field| -> Result<Vec<Dim>, DocumentError> {
        v.as_ref().ok_or_else(|| missing(field))?.iter().map(|&d| to_dim(d)).collect()
    };
    let params = || -> Result<Vec<C64>, DocumentError> {
        Ok(n.params.as_ref().ok_or_else(|| missing("params"))?.iter().map(|&[re, im]| C64::new(re, im)).collect())
    };
    Ok(match n.kind.as_str() {
        "z_box" => ZBox {
            inputs: dims(&n.inputs, "inputs")?,
            outputs: dims(&n.outputs, "outputs")?,
            params: ParamVec::new(params()?),
        },
        "w" => WNode { dim: dim()?, fanout: count(n.n_out, "n_out")? },
        "w_dagger" => WNodeDagger { dim: dim()?, fanin: count(n.n_in, "n_in")? },
        "hadamard" => Hadamard { dim: dim()? },
        "x" => XSpider {
            dim: dim()?,
            n_in: count(n.n_in, "n_in")?,
            n_out: count(n.n_out, "n_out")?,
        },
        "splitter" => {
            let (m, k) = mn()?;
            Splitter { m, n: k }
        }
        "merger" => {
            let (m, k) = mn()?;
            Merger { m, n: k }
        }
        "swap" => {
            let (m, k) = mn()?;
            Swap { m, n: k }
        }
        "identity" => Identity { dim: dim()? },
        "cap" => Cap { dim: dim()? },
        "cup" => Cup { dim: dim()? },
        "multiplier" => GeneratorKind::multiplier(dim()?, n.label.ok_or_else(|| missing("label"))?),
        "scalar" => match params()?.as_slice() {
            [c] => Scalar(*c),
            other => return Err(bad(format!("scalar needs exactly one value, found {}", other.len()))),
        },
        other => {
            return Err(DocumentError::UnknownKind {
                id: n.id,
                kind: other.to_string(),
            })
        }
    })
}

pub fn to_json(d: &Diagram) -> String {
    serde_json::to_string_pretty(&DiagramDocument::from_diagram(d)).expect("documents serialize")
}

pub fn from_json(text: &str) -> Result<Diagram, DocumentError> {
    let doc: DiagramDocument = serde_json::from_str(text).map_err(|e| DocumentError::Json(e.to_string()))?;
    doc.to_diagram()
}
