//! Typed open-graph representation of ZXW diagrams.
//!
//! A [`Diagram`] is an undirected graph of generator nodes whose ports are
//! joined pairwise by edges, together with ordered lists of input and output
//! boundary wires. Every port (node port or boundary position) is used by
//! exactly one edge. Diagrams are values: every operation returns a new one.

mod build;
mod compose;
pub(crate) mod edit;
mod generator;

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

pub use build::*;
pub use generator::{dims, Dim, GeneratorKind, ParamVec};
pub(crate) use generator::raw;

use crate::error::{DiagramError, Violation};

pub type NodeId = usize;

/// One end of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    Port { node: NodeId, port: usize },
    Input(usize),
    Output(usize),
}

impl Endpoint {
    pub fn port(node: NodeId, port: usize) -> Self {
        Endpoint::Port { node, port }
    }

    pub fn node(&self) -> Option<NodeId> {
        match self {
            Endpoint::Port { node, .. } => Some(*node),
            _ => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        !matches!(self, Endpoint::Port { .. })
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Port { node, port } => write!(f, "node {node} port {port}"),
            Endpoint::Input(i) => write!(f, "input {i}"),
            Endpoint::Output(i) => write!(f, "output {i}"),
        }
    }
}

pub type Edge = (Endpoint, Endpoint);

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Diagram {
    nodes: Vec<GeneratorKind>,
    edges: Vec<Edge>,
    inputs: Vec<Dim>,
    outputs: Vec<Dim>,
}

impl Diagram {
    /// The empty diagram, interpreted as the scalar 1.
    pub fn empty() -> Self {
        Diagram::default()
    }

    /// Assembles a diagram without checking it. Use [`Diagram::validate`]
    /// before evaluating a diagram built this way.
    pub fn from_parts(
        nodes: Vec<GeneratorKind>,
        edges: Vec<Edge>,
        inputs: Vec<Dim>,
        outputs: Vec<Dim>,
    ) -> Self {
        Diagram {
            nodes: nodes.into_iter().map(GeneratorKind::normalized).collect(),
            edges,
            inputs,
            outputs,
        }
    }

    /// Bare wires on the given dimensions.
    pub fn identity(dims: &[Dim]) -> Self {
        Diagram {
            nodes: vec![],
            edges: (0..dims.len())
                .map(|i| (Endpoint::Input(i), Endpoint::Output(i)))
                .collect(),
            inputs: dims.to_vec(),
            outputs: dims.to_vec(),
        }
    }

    /// A single generator with its ports wired to the boundary in order.
    pub fn node(kind: GeneratorKind) -> Result<Self, DiagramError> {
        let kind = kind.normalized();
        kind.check()?;
        let n_in = kind.n_inputs();
        let n_out = kind.n_outputs();
        let mut edges = Vec::with_capacity(n_in + n_out);
        for i in 0..n_in {
            edges.push((Endpoint::Input(i), Endpoint::port(0, i)));
        }
        for j in 0..n_out {
            edges.push((Endpoint::port(0, n_in + j), Endpoint::Output(j)));
        }
        Ok(Diagram {
            inputs: kind.input_dims(),
            outputs: kind.output_dims(),
            nodes: vec![kind],
            edges,
        })
    }

    pub fn nodes(&self) -> &[GeneratorKind] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn inputs(&self) -> &[Dim] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Dim] {
        &self.outputs
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Dimension carried by an endpoint, if it exists.
    pub fn endpoint_dim(&self, e: Endpoint) -> Option<Dim> {
        match e {
            Endpoint::Port { node, port } => self.nodes.get(node)?.port_dim(port),
            Endpoint::Input(i) => self.inputs.get(i).copied(),
            Endpoint::Output(i) => self.outputs.get(i).copied(),
        }
    }

    /// Maps every endpoint to the index of the edge using it.
    pub fn incidence(&self) -> HashMap<Endpoint, usize> {
        let mut map = HashMap::with_capacity(self.edges.len() * 2);
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            map.insert(a, i);
            map.insert(b, i);
        }
        map
    }

    /// The endpoint at the other end of the edge touching `e`.
    pub fn opposite(&self, e: Endpoint) -> Option<Endpoint> {
        self.edges.iter().find_map(|&(a, b)| {
            if a == e {
                Some(b)
            } else if b == e {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Checks every structural invariant and reports all violations.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut violations = Vec::new();
        for (id, kind) in self.nodes.iter().enumerate() {
            if let Err(e) = kind.check() {
                violations.push(Violation::BadGenerator {
                    node: id,
                    reason: e.to_string(),
                });
            }
        }
        let mut uses: BTreeMap<Endpoint, usize> = BTreeMap::new();
        for &(a, b) in &self.edges {
            let mut ok = true;
            for e in [a, b] {
                *uses.entry(e).or_default() += 1;
                if let Endpoint::Port { node, .. } = e {
                    if node >= self.nodes.len() {
                        violations.push(Violation::UnknownNode { endpoint: e });
                        ok = false;
                        continue;
                    }
                }
                if self.endpoint_dim(e).is_none() {
                    violations.push(Violation::UnknownPort { endpoint: e });
                    ok = false;
                }
            }
            if ok {
                let (da, db) = (self.endpoint_dim(a).unwrap(), self.endpoint_dim(b).unwrap());
                if da != db {
                    violations.push(Violation::DimMismatch {
                        a,
                        a_dim: da.get(),
                        b,
                        b_dim: db.get(),
                    });
                }
            }
        }
        for (&e, &count) in &uses {
            if count > 1 {
                violations.push(Violation::Reused { endpoint: e, count });
            }
        }
        for e in self.all_endpoints() {
            if !uses.contains_key(&e) {
                violations.push(Violation::Dangling { endpoint: e });
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    pub(crate) fn ensure_valid(&self) -> Result<(), DiagramError> {
        self.validate().map_err(DiagramError::Invalid)
    }

    fn all_endpoints(&self) -> impl Iterator<Item = Endpoint> + '_ {
        let ports = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(id, k)| (0..k.n_ports()).map(move |p| Endpoint::port(id, p)));
        ports
            .chain((0..self.inputs.len()).map(Endpoint::Input))
            .chain((0..self.outputs.len()).map(Endpoint::Output))
    }

    /// Node ids adjacent to `node` (with multiplicity, one entry per edge).
    pub fn neighbours(&self, node: NodeId) -> Vec<Endpoint> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a.node() == Some(node) {
                out.push(b);
            }
            if b.node() == Some(node) {
                out.push(a);
            }
        }
        out
    }

    /// Renumbers nodes by (kind tag, distance from the boundary, insertion
    /// order) and sorts edges, so that diagrams differing only in node ids
    /// compare equal.
    pub fn canonical(&self) -> Diagram {
        let n = self.nodes.len();
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &(a, b) in &self.edges {
            match (a.node(), b.node()) {
                (Some(x), Some(y)) => {
                    adj[x].push(y);
                    adj[y].push(x);
                }
                (Some(x), None) | (None, Some(x)) => {
                    if dist[x] != 0 {
                        dist[x] = 0;
                        queue.push_back(x);
                    }
                }
                (None, None) => {}
            }
        }
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let mut order: Vec<NodeId> = (0..n).collect();
        order.sort_by_key(|&i| (self.nodes[i].tag_rank(), dist[i], i));
        let mut new_id = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_id[old] = new;
        }
        let remap = |e: Endpoint| match e {
            Endpoint::Port { node, port } => Endpoint::port(new_id[node], port),
            other => other,
        };
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (a, b) = (remap(a), remap(b));
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        edges.sort();
        Diagram {
            nodes: order.iter().map(|&i| self.nodes[i].clone()).collect(),
            edges,
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
        }
    }

    /// Structural equality after canonical relabeling.
    pub fn structurally_eq(&self, other: &Diagram) -> bool {
        self.canonical() == other.canonical()
    }

    /// True when the diagram is nothing but bare wires `input i -> output i`.
    pub fn is_identity_wires(&self) -> bool {
        self.nodes.is_empty()
            && self.inputs == self.outputs
            && self.edges.len() == self.inputs.len()
            && self.edges.iter().all(|&(a, b)| {
                matches!((a, b), (Endpoint::Input(i), Endpoint::Output(j)) | (Endpoint::Output(j), Endpoint::Input(i)) if i == j)
            })
    }
}
