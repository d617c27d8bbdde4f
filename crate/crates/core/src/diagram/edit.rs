//! Scratch-space graph editing used by the rewrite rules. An [`Editor`] is
//! built from a diagram, mutated, and turned back into a compact diagram.

use std::collections::{HashMap, HashSet};

use num_complex::Complex64 as C64;

use super::{Diagram, Dim, Edge, Endpoint, GeneratorKind, NodeId};

pub(crate) struct Editor {
    nodes: Vec<Option<GeneratorKind>>,
    edges: Vec<Option<Edge>>,
    at: HashMap<Endpoint, usize>,
    inputs: Vec<Dim>,
    outputs: Vec<Dim>,
}

impl Editor {
    pub fn new(d: &Diagram) -> Self {
        let mut ed = Editor {
            nodes: d.nodes.iter().cloned().map(Some).collect(),
            edges: Vec::with_capacity(d.edges.len()),
            at: HashMap::new(),
            inputs: d.inputs.clone(),
            outputs: d.outputs.clone(),
        };
        for &(a, b) in &d.edges {
            ed.connect(a, b);
        }
        ed
    }

    pub fn kind(&self, node: NodeId) -> &GeneratorKind {
        self.nodes[node].as_ref().expect("live node")
    }

    pub fn add_node(&mut self, kind: GeneratorKind) -> NodeId {
        self.nodes.push(Some(kind));
        self.nodes.len() - 1
    }

    pub fn connect(&mut self, a: Endpoint, b: Endpoint) {
        let idx = self.edges.len();
        self.edges.push(Some((a, b)));
        self.at.insert(a, idx);
        self.at.insert(b, idx);
    }

    /// Removes the edge touching `e` and returns its other end.
    pub fn detach(&mut self, e: Endpoint) -> Option<Endpoint> {
        let idx = self.at.remove(&e)?;
        let (a, b) = self.edges[idx].take()?;
        let other = if a == e { b } else { a };
        self.at.remove(&other);
        Some(other)
    }

    /// Removes a node and all edges touching it. Returns, for each port, the
    /// endpoint it was wired to (ports wired to the same node appear as
    /// `Port` endpoints of the removed node).
    pub fn remove_node(&mut self, node: NodeId) -> Vec<Endpoint> {
        let kind = self.nodes[node].take().expect("live node");
        let mut ends = Vec::with_capacity(kind.n_ports());
        for p in 0..kind.n_ports() {
            let e = Endpoint::port(node, p);
            match self.at.get(&e).copied() {
                Some(idx) => {
                    let (a, b) = self.edges[idx].expect("live edge");
                    ends.push(if a == e { b } else { a });
                }
                None => ends.push(e),
            }
        }
        for p in 0..kind.n_ports() {
            self.detach(Endpoint::port(node, p));
        }
        ends
    }

    pub fn set_kind(&mut self, node: NodeId, kind: GeneratorKind) {
        self.nodes[node] = Some(kind);
    }

    /// Removes `remove` and joins the freed wires according to `wiring`.
    ///
    /// A port of a removed node in `wiring` stands for whatever that port
    /// was wired to; other endpoints are ports of freshly added nodes.
    /// Removed ports left out of `wiring` are dropped, which is only valid
    /// when they were wired to each other. Chains through removed ports
    /// collapse into single edges, and chains that close on themselves
    /// become scalar loops worth their dimension.
    pub fn splice(&mut self, remove: &[NodeId], wiring: &[(Endpoint, Endpoint)]) {
        let is_removed = |e: &Endpoint| e.node().is_some_and(|n| remove.contains(&n));
        let mut old: HashMap<Endpoint, Endpoint> = HashMap::new();
        let mut dims: HashMap<Endpoint, usize> = HashMap::new();
        for &n in remove {
            let kind = self.kind(n).clone();
            let ends = self.remove_node(n);
            for (p, end) in ends.into_iter().enumerate() {
                let port = Endpoint::port(n, p);
                old.insert(port, end);
                dims.insert(port, kind.port_dim(p).expect("port exists").get());
            }
        }
        let mut join: HashMap<Endpoint, Endpoint> = HashMap::new();
        for &(a, b) in wiring {
            join.insert(a, b);
            join.insert(b, a);
        }
        let outer: HashMap<Endpoint, Endpoint> = old.iter().filter(|(_, e)| !is_removed(e)).map(|(&p, &e)| (e, p)).collect();

        let mut seen: HashSet<Endpoint> = HashSet::new();
        let mut starts: Vec<Endpoint> = outer.keys().copied().collect();
        starts.extend(join.keys().copied().filter(|e| !is_removed(e)));
        starts.sort();
        for s in starts {
            if !seen.insert(s) {
                continue;
            }
            // Leave `s` by its only link, then alternate old edges and joins.
            let (mut cur, mut via_old) = match outer.get(&s) {
                Some(&p) => (p, true),
                None => (join[&s], false),
            };
            while is_removed(&cur) {
                seen.insert(cur);
                let next = if via_old {
                    *join.get(&cur).expect("dropped port wired to the outside")
                } else {
                    old[&cur]
                };
                cur = next;
                via_old = !via_old;
            }
            seen.insert(cur);
            self.connect(s, cur);
        }

        let mut rest: Vec<Endpoint> = join.keys().copied().filter(|p| is_removed(p) && !seen.contains(p)).collect();
        rest.sort();
        for p in rest {
            if seen.contains(&p) {
                continue;
            }
            let mut cur = p;
            let mut via_old = true;
            while seen.insert(cur) {
                cur = if via_old { old[&cur] } else { join[&cur] };
                via_old = !via_old;
            }
            self.add_node(GeneratorKind::Scalar(C64::new(dims[&p] as f64, 0.0)));
        }
    }

    /// Replaces a two-port node that acts as a bare wire.
    pub fn bypass(&mut self, node: NodeId) {
        self.splice(&[node], &[(Endpoint::port(node, 0), Endpoint::port(node, 1))]);
    }

    pub fn finish(self) -> Diagram {
        let mut new_id = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (old, n) in self.nodes.into_iter().enumerate() {
            if let Some(kind) = n {
                new_id[old] = nodes.len();
                nodes.push(kind);
            }
        }
        let remap = |e: Endpoint| match e {
            Endpoint::Port { node, port } => Endpoint::port(new_id[node], port),
            other => other,
        };
        Diagram {
            nodes,
            edges: self.edges.into_iter().flatten().map(|(a, b)| (remap(a), remap(b))).collect(),
            inputs: self.inputs,
            outputs: self.outputs,
        }
    }
}
