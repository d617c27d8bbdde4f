use num_complex::Complex64 as C64;

use super::{Diagram, Edge, Endpoint, GeneratorKind};
use crate::error::DiagramError;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Bottom,
    Top,
}

impl Diagram {
    /// Sequential composition `top ∘ bottom`: the outputs of `bottom` are
    /// plugged into the inputs of `top`.
    pub fn seq_compose(top: &Diagram, bottom: &Diagram) -> Result<Diagram, DiagramError> {
        if bottom.outputs.len() != top.inputs.len() {
            return Err(DiagramError::ArityMismatch {
                expected: top.inputs.len(),
                found: bottom.outputs.len(),
            });
        }
        for (i, (a, b)) in top.inputs.iter().zip(&bottom.outputs).enumerate() {
            if a != b {
                return Err(DiagramError::SignatureMismatch {
                    position: i,
                    expected: a.get(),
                    found: b.get(),
                });
            }
        }
        bottom.ensure_valid()?;
        top.ensure_valid()?;

        let offset = bottom.nodes.len();
        let mut nodes = bottom.nodes.clone();
        nodes.extend(top.nodes.iter().cloned());

        // All edges, tagged by which operand they came from.
        let all: Vec<(Side, Edge)> = bottom
            .edges
            .iter()
            .map(|&e| (Side::Bottom, e))
            .chain(top.edges.iter().map(|&e| (Side::Top, e)))
            .collect();
        let n_junctions = top.inputs.len();
        let mut bottom_at = vec![usize::MAX; n_junctions];
        let mut top_at = vec![usize::MAX; n_junctions];
        for (idx, &(side, (a, b))) in all.iter().enumerate() {
            for e in [a, b] {
                match (side, e) {
                    (Side::Bottom, Endpoint::Output(i)) => bottom_at[i] = idx,
                    (Side::Top, Endpoint::Input(i)) => top_at[i] = idx,
                    _ => {}
                }
            }
        }
        let junction = |side: Side, e: Endpoint| -> Option<usize> {
            match (side, e) {
                (Side::Bottom, Endpoint::Output(i)) | (Side::Top, Endpoint::Input(i)) => Some(i),
                _ => None,
            }
        };
        let finalize = |side: Side, e: Endpoint| -> Endpoint {
            match (side, e) {
                (Side::Top, Endpoint::Port { node, port }) => Endpoint::port(node + offset, port),
                (_, other) => other,
            }
        };

        let mut visited = vec![false; all.len()];
        let mut edges = Vec::new();
        for start in 0..all.len() {
            if visited[start] {
                continue;
            }
            let (side, (a, b)) = all[start];
            let (origin, mut far) = match (junction(side, a), junction(side, b)) {
                (None, _) => (a, b),
                (Some(_), None) => (b, a),
                (Some(_), Some(_)) => continue,
            };
            let origin = finalize(side, origin);
            let mut cur = start;
            let mut cur_side = side;
            visited[cur] = true;
            while let Some(i) = junction(cur_side, far) {
                let (next, next_side) = match cur_side {
                    Side::Bottom => (top_at[i], Side::Top),
                    Side::Top => (bottom_at[i], Side::Bottom),
                };
                let entry = match next_side {
                    Side::Top => Endpoint::Input(i),
                    Side::Bottom => Endpoint::Output(i),
                };
                let (_, (x, y)) = all[next];
                far = if x == entry { y } else { x };
                cur = next;
                cur_side = next_side;
                visited[cur] = true;
            }
            edges.push((origin, finalize(cur_side, far)));
        }

        // Whatever remains forms closed loops through junctions only.
        for start in 0..all.len() {
            if visited[start] {
                continue;
            }
            let (side, (a, _)) = all[start];
            let dim = match a {
                Endpoint::Output(i) | Endpoint::Input(i) => top.inputs[i].get(),
                _ => unreachable!("loop edges only touch junctions"),
            };
            let mut cur = start;
            let mut cur_side = side;
            let mut far = all[start].1 .1;
            visited[cur] = true;
            loop {
                let i = junction(cur_side, far).expect("loop edge");
                let (next, next_side) = match cur_side {
                    Side::Bottom => (top_at[i], Side::Top),
                    Side::Top => (bottom_at[i], Side::Bottom),
                };
                if visited[next] {
                    break;
                }
                let entry = match next_side {
                    Side::Top => Endpoint::Input(i),
                    Side::Bottom => Endpoint::Output(i),
                };
                let (_, (x, y)) = all[next];
                far = if x == entry { y } else { x };
                cur = next;
                cur_side = next_side;
                visited[cur] = true;
            }
            nodes.push(GeneratorKind::Scalar(C64::new(dim as f64, 0.0)));
        }

        Ok(Diagram {
            nodes,
            edges,
            inputs: bottom.inputs.clone(),
            outputs: top.outputs.clone(),
        })
    }

    /// Parallel composition `left ⊗ right`; boundaries are concatenated with
    /// `left` first.
    pub fn par_compose(left: &Diagram, right: &Diagram) -> Diagram {
        let offset = left.nodes.len();
        let (ni, no) = (left.inputs.len(), left.outputs.len());
        let shift = |e: Endpoint| match e {
            Endpoint::Port { node, port } => Endpoint::port(node + offset, port),
            Endpoint::Input(i) => Endpoint::Input(i + ni),
            Endpoint::Output(i) => Endpoint::Output(i + no),
        };
        let mut nodes = left.nodes.clone();
        nodes.extend(right.nodes.iter().cloned());
        let mut edges = left.edges.clone();
        edges.extend(right.edges.iter().map(|&(a, b)| (shift(a), shift(b))));
        let mut inputs = left.inputs.clone();
        inputs.extend(&right.inputs);
        let mut outputs = left.outputs.clone();
        outputs.extend(&right.outputs);
        Diagram {
            nodes,
            edges,
            inputs,
            outputs,
        }
    }

    /// Composes `self` after `bottom`.
    pub fn then_after(&self, bottom: &Diagram) -> Result<Diagram, DiagramError> {
        Diagram::seq_compose(self, bottom)
    }

    /// Transpose: every input wire is bent up into an output and vice versa,
    /// keeping positional order. The interpretation is the matrix transpose.
    pub fn transpose(&self) -> Diagram {
        let flip = |e: Endpoint| match e {
            Endpoint::Input(i) => Endpoint::Output(i),
            Endpoint::Output(i) => Endpoint::Input(i),
            other => other,
        };
        Diagram {
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|&(a, b)| (flip(a), flip(b))).collect(),
            inputs: self.outputs.clone(),
            outputs: self.inputs.clone(),
        }
    }

    /// Map-state duality: inputs are bent into extra outputs appended after
    /// the existing ones, in reversed order.
    pub fn to_state(&self) -> Diagram {
        let n_out = self.outputs.len();
        let n_in = self.inputs.len();
        let bend = |e: Endpoint| match e {
            Endpoint::Input(i) => Endpoint::Output(n_out + (n_in - 1 - i)),
            other => other,
        };
        let mut outputs = self.outputs.clone();
        outputs.extend(self.inputs.iter().rev());
        Diagram {
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|&(a, b)| (bend(a), bend(b))).collect(),
            inputs: vec![],
            outputs,
        }
    }

    /// Inverse of [`Diagram::to_state`]: the last `n_in` outputs of a state
    /// become inputs (in reversed order).
    pub fn state_to_map(&self, n_in: usize) -> Result<Diagram, DiagramError> {
        if !self.inputs.is_empty() || n_in > self.outputs.len() {
            return Err(DiagramError::ArityMismatch {
                expected: n_in,
                found: self.outputs.len(),
            });
        }
        let n_out = self.outputs.len() - n_in;
        let unbend = |e: Endpoint| match e {
            Endpoint::Output(i) if i >= n_out => Endpoint::Input(n_in - 1 - (i - n_out)),
            other => other,
        };
        let inputs = self.outputs[n_out..].iter().rev().copied().collect();
        Ok(Diagram {
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|&(a, b)| (unbend(a), unbend(b))).collect(),
            inputs,
            outputs: self.outputs[..n_out].to_vec(),
        })
    }
}
