//! The standard interpretation: generators to tensors, diagrams to tensors
//! by contracting every internal edge.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::diagram::{raw, Diagram, Endpoint, GeneratorKind};
use crate::error::DiagramError;
use crate::tensor::{permute_axes, strides, Tensor};

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// `ω^k` for `ω = e^{2πi/d}`, with the exponent reduced first so that the
/// real roots ±1 and ±i come out exact.
pub fn root_of_unity(d: usize, k: usize) -> C64 {
    let k = k % d;
    if 4 * k == d {
        return C64::new(0.0, 1.0);
    }
    if 2 * k == d {
        return C64::new(-1.0, 0.0);
    }
    if 4 * k == 3 * d {
        return C64::new(0.0, -1.0);
    }
    if k == 0 {
        return ONE;
    }
    C64::cis(TAU * k as f64 / d as f64)
}

fn sparse(out_dims: Vec<usize>, in_dims: Vec<usize>, entries: impl IntoIterator<Item = (usize, usize, C64)>) -> Tensor {
    let cols: usize = in_dims.iter().product();
    let rows: usize = out_dims.iter().product();
    let mut data = vec![ZERO; rows * cols];
    for (r, c, v) in entries {
        data[r * cols + c] += v;
    }
    Tensor::from_raw(out_dims, in_dims, data)
}

/// Flat index of the basis vector `|j, j, ..., j>` over `dims`.
fn diagonal_index(dims: &[usize], j: usize) -> usize {
    dims.iter().fold(0, |acc, &m| acc * m + j)
}

/// The tensor a single generator denotes. Outputs are the generator's
/// output ports, inputs its input ports.
pub fn generator_semantics(kind: &GeneratorKind) -> Tensor {
    use GeneratorKind::*;
    let outs = raw(&kind.output_dims());
    let ins = raw(&kind.input_dims());
    match kind {
        ZBox { params, .. } => {
            let min = kind.z_min_dim().unwrap_or(1);
            let entries: Vec<_> = (0..min)
                .map(|j| (diagonal_index(&outs, j), diagonal_index(&ins, j), params.coeff(j)))
                .collect();
            sparse(outs, ins, entries)
        }
        WNode { dim, fanout } => w_tensor(dim.get(), *fanout),
        WNodeDagger { dim, fanin } => w_tensor(dim.get(), *fanin).transpose(),
        Hadamard { dim } => {
            let d = dim.get();
            Tensor::from_fn(outs, ins, |o, i| root_of_unity(d, o[0] * i[0]))
        }
        XSpider { dim, n_in, n_out } => x_tensor(dim.get(), *n_in, *n_out),
        Splitter { m, n } => {
            let (m, n) = (m.get(), n.get());
            sparse(outs, ins, (0..m * n).map(|v| (v, v, ONE)))
        }
        Merger { m, n } => {
            let (m, n) = (m.get(), n.get());
            sparse(outs, ins, (0..m * n).map(|v| (v, v, ONE)))
        }
        Swap { m, n } => {
            let (m, n) = (m.get(), n.get());
            sparse(
                outs,
                ins,
                (0..m).flat_map(|i| (0..n).map(move |j| (j * m + i, i * n + j, ONE))),
            )
        }
        Identity { dim } => {
            let d = dim.get();
            sparse(outs, ins, (0..d).map(|j| (j, j, ONE)))
        }
        Cap { dim } => {
            let d = dim.get();
            sparse(outs, ins, (0..d).map(|j| (j * d + j, 0, ONE)))
        }
        Cup { dim } => {
            let d = dim.get();
            sparse(outs, ins, (0..d).map(|j| (0, j * d + j, ONE)))
        }
        Multiplier { dim, label } => {
            let d = dim.get();
            sparse(outs, ins, (0..d).map(|j| ((label * j) % d, j, ONE)))
        }
        Scalar(c) => Tensor::scalar(*c),
    }
}

/// Phaseless X spider: one entry per assignment whose output sum matches
/// the input sum mod `d`. The last leg is solved for, the others enumerated.
fn x_tensor(d: usize, n_in: usize, n_out: usize) -> Tensor {
    let legs = n_in + n_out;
    let mut data = vec![ZERO; d.pow(legs as u32)];
    if legs == 0 {
        data[0] = ONE;
        return Tensor::from_raw(vec![], vec![], data);
    }
    // Axis order is outputs then inputs; outputs count +1, inputs -1.
    let sign = |axis: usize| if axis < n_out { 1 } else { d - 1 };
    let last = legs - 1;
    let mut digits = vec![0usize; last];
    loop {
        let partial: usize = digits.iter().enumerate().map(|(a, &v)| sign(a) * v).sum();
        // Need sign(last) * x + partial = 0 mod d.
        let x = if sign(last) == 1 { (d - partial % d) % d } else { partial % d };
        let flat = digits.iter().fold(0, |acc, &v| acc * d + v) * d + x;
        data[flat] = ONE;
        let mut k = last;
        loop {
            if k == 0 {
                return Tensor::from_raw(vec![d; n_out], vec![d; n_in], data);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < d {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn w_tensor(d: usize, n: usize) -> Tensor {
    let out_dims = vec![d; n];
    let mut entries = vec![(0, 0, ONE)];
    let st = strides(&out_dims);
    for i in 1..d {
        for s in &st {
            entries.push((i * s, i, ONE));
        }
    }
    sparse(out_dims, vec![d], entries)
}

/// A tensor whose legs carry edge labels, used during contraction.
#[derive(Clone, Debug)]
struct Labelled {
    labels: Vec<usize>,
    dims: Vec<usize>,
    data: Vec<C64>,
}

impl Labelled {
    fn size(&self) -> usize {
        self.data.len()
    }

    /// Sums over any label that appears twice on this tensor.
    fn trace_repeated(mut self) -> Labelled {
        loop {
            let mut pair = None;
            'search: for a in 0..self.labels.len() {
                for b in a + 1..self.labels.len() {
                    if self.labels[a] == self.labels[b] {
                        pair = Some((a, b));
                        break 'search;
                    }
                }
            }
            let Some((a, b)) = pair else { return self };
            let d = self.dims[a];
            let keep: Vec<usize> = (0..self.labels.len()).filter(|&k| k != a && k != b).collect();
            let mut perm = keep.clone();
            perm.push(a);
            perm.push(b);
            let moved = permute_axes(&self.dims, &self.data, &perm);
            let rest: usize = keep.iter().map(|&k| self.dims[k]).product();
            let data = (0..rest)
                .map(|r| (0..d).map(|j| moved[r * d * d + j * d + j]).sum())
                .collect();
            self = Labelled {
                labels: keep.iter().map(|&k| self.labels[k]).collect(),
                dims: keep.iter().map(|&k| self.dims[k]).collect(),
                data,
            };
        }
    }

    fn contract(a: &Labelled, b: &Labelled) -> Labelled {
        let shared: Vec<usize> = a.labels.iter().copied().filter(|l| b.labels.contains(l)).collect();
        let a_free: Vec<usize> = (0..a.labels.len()).filter(|&k| !shared.contains(&a.labels[k])).collect();
        let b_free: Vec<usize> = (0..b.labels.len()).filter(|&k| !shared.contains(&b.labels[k])).collect();
        let a_shared: Vec<usize> = shared.iter().map(|l| a.labels.iter().position(|x| x == l).unwrap()).collect();
        let b_shared: Vec<usize> = shared.iter().map(|l| b.labels.iter().position(|x| x == l).unwrap()).collect();

        let a_perm: Vec<usize> = a_free.iter().chain(&a_shared).copied().collect();
        let b_perm: Vec<usize> = b_shared.iter().chain(&b_free).copied().collect();
        let am = permute_axes(&a.dims, &a.data, &a_perm);
        let bm = permute_axes(&b.dims, &b.data, &b_perm);
        let n: usize = a_free.iter().map(|&k| a.dims[k]).product();
        let k: usize = a_shared.iter().map(|&k| a.dims[k]).product();
        let m: usize = b_free.iter().map(|&k| b.dims[k]).product();
        let mut data = vec![ZERO; n * m];
        for i in 0..n {
            let dst = &mut data[i * m..(i + 1) * m];
            for l in 0..k {
                let x = am[i * k + l];
                if x == ZERO {
                    continue;
                }
                for (d, &y) in dst.iter_mut().zip(&bm[l * m..(l + 1) * m]) {
                    *d += x * y;
                }
            }
        }
        Labelled {
            labels: a_free.iter().map(|&k| a.labels[k]).chain(b_free.iter().map(|&k| b.labels[k])).collect(),
            dims: a_free.iter().map(|&k| a.dims[k]).chain(b_free.iter().map(|&k| b.dims[k])).collect(),
            data,
        }
    }
}

/// Evaluates a diagram to its tensor. The result's outputs and inputs follow
/// the diagram's boundary order.
pub fn eval(diagram: &Diagram) -> Result<Tensor, DiagramError> {
    diagram.ensure_valid()?;
    Ok(eval_unchecked(diagram))
}

pub(crate) fn eval_unchecked(diagram: &Diagram) -> Tensor {
    let edges = diagram.edges();
    let mut next_label = edges.len();
    let mut label_of: HashMap<Endpoint, usize> = HashMap::with_capacity(edges.len() * 2);
    let mut tensors: Vec<Labelled> = Vec::with_capacity(diagram.node_count() + 1);
    for (e, &(a, b)) in edges.iter().enumerate() {
        if a.is_boundary() && b.is_boundary() {
            let d = diagram.endpoint_dim(a).expect("valid").get();
            let (la, lb) = (next_label, next_label + 1);
            next_label += 2;
            label_of.insert(a, la);
            label_of.insert(b, lb);
            let id = generator_semantics(&GeneratorKind::Identity {
                dim: diagram.endpoint_dim(a).expect("valid"),
            });
            tensors.push(Labelled {
                labels: vec![la, lb],
                dims: vec![d, d],
                data: id.into_data(),
            });
        } else {
            label_of.insert(a, e);
            label_of.insert(b, e);
        }
    }
    for (id, kind) in diagram.nodes().iter().enumerate() {
        let t = generator_semantics(kind);
        let n_in = kind.n_inputs();
        let n_out = kind.n_outputs();
        let labels: Vec<usize> = (n_in..n_in + n_out)
            .chain(0..n_in)
            .map(|p| label_of[&Endpoint::port(id, p)])
            .collect();
        let mut dims = t.out_dims().to_vec();
        dims.extend(t.in_dims());
        tensors.push(
            Labelled {
                labels,
                dims,
                data: t.into_data(),
            }
            .trace_repeated(),
        );
    }

    let result = contract_all(tensors);

    let out_labels: Vec<usize> = (0..diagram.outputs().len()).map(|i| label_of[&Endpoint::Output(i)]).collect();
    let in_labels: Vec<usize> = (0..diagram.inputs().len()).map(|i| label_of[&Endpoint::Input(i)]).collect();
    let perm: Vec<usize> = out_labels
        .iter()
        .chain(&in_labels)
        .map(|l| result.labels.iter().position(|x| x == l).expect("boundary label survives"))
        .collect();
    let data = permute_axes(&result.dims, &result.data, &perm);
    Tensor::from_raw(raw(diagram.outputs()), raw(diagram.inputs()), data)
}

/// Leg labels and dimensions of a tensor, enough to cost a contraction
/// without touching its entries.
#[derive(Clone)]
struct Shape {
    legs: Vec<(usize, usize)>,
}

impl Shape {
    fn size(&self) -> f64 {
        self.legs.iter().map(|&(_, d)| d as f64).product()
    }

    fn shares(&self, other: &Shape) -> bool {
        self.legs.iter().any(|(l, _)| other.legs.iter().any(|(m, _)| l == m))
    }

    /// Result shape and the number of multiply-adds needed to get it.
    fn contract(&self, other: &Shape) -> (Shape, f64) {
        let mut legs = Vec::new();
        let mut work = 1.0;
        for &(l, d) in &self.legs {
            work *= d as f64;
            if !other.legs.iter().any(|&(m, _)| m == l) {
                legs.push((l, d));
            }
        }
        for &(l, d) in &other.legs {
            if !self.legs.iter().any(|&(m, _)| m == l) {
                legs.push((l, d));
                work *= d as f64;
            }
        }
        (Shape { legs }, work)
    }
}

/// A contraction order: pairs of positions in a list that grows by one
/// entry (the result) per step.
struct Plan {
    steps: Vec<(usize, usize)>,
    cost: f64,
}

#[derive(Clone, Copy)]
enum Heuristic {
    SmallestResult,
    LargestShrink,
}

fn plan_greedy(shapes: &[Shape], heuristic: Heuristic) -> Plan {
    let mut live: Vec<Option<Shape>> = shapes.iter().cloned().map(Some).collect();
    let mut holders: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, s) in shapes.iter().enumerate() {
        for &(l, _) in &s.legs {
            holders.entry(l).or_default().push(i);
        }
    }
    let score = |a: &Shape, b: &Shape| {
        let (r, _) = a.contract(b);
        match heuristic {
            Heuristic::SmallestResult => r.size(),
            Heuristic::LargestShrink => r.size() - a.size() - b.size(),
        }
    };
    // Scores of every connected pair, updated as tensors are merged.
    let mut pairs: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for hs in holders.values() {
        if let [x, y] = hs[..] {
            let (i, j) = (x.min(y), x.max(y));
            pairs.insert((i, j), score(&shapes[i], &shapes[j]));
        }
    }
    let mut plan = Plan { steps: vec![], cost: 0.0 };
    loop {
        let mut best: Option<((usize, usize), f64)> = None;
        for (&key, &sc) in &pairs {
            if best.is_none_or(|(_, bs)| sc < bs) {
                best = Some((key, sc));
            }
        }
        let Some(((i, j), _)) = best else { break };
        let a = live[i].take().unwrap();
        let b = live[j].take().unwrap();
        let (c, work) = a.contract(&b);
        plan.cost += work;
        plan.steps.push((i, j));
        pairs.retain(|&(x, y), _| x != i && x != j && y != i && y != j);
        let idx = live.len();
        let mut neighbours = Vec::new();
        for (l, _) in a.legs.iter().chain(&b.legs) {
            if let Some(hs) = holders.get_mut(l) {
                hs.retain(|&h| h != i && h != j);
                if hs.is_empty() {
                    holders.remove(l);
                }
            }
        }
        for &(l, _) in &c.legs {
            let hs = holders.entry(l).or_default();
            neighbours.extend(hs.iter().copied());
            hs.push(idx);
        }
        neighbours.sort_unstable();
        neighbours.dedup();
        for k in neighbours {
            pairs.insert((k, idx), score(live[k].as_ref().unwrap(), &c));
        }
        live.push(Some(c));
    }
    plan
}

/// Grows one tensor at a time, always absorbing the lowest-indexed
/// connected neighbour.
fn plan_sweep(shapes: &[Shape]) -> Plan {
    let mut live: Vec<Option<Shape>> = shapes.iter().cloned().map(Some).collect();
    let mut plan = Plan { steps: vec![], cost: 0.0 };
    let n = shapes.len();
    let mut start = 0;
    while start < n {
        if live[start].is_none() {
            start += 1;
            continue;
        }
        let mut acc = start;
        loop {
            let cur = live[acc].as_ref().unwrap();
            let Some(next) = (0..n).find(|&k| k != acc && live[k].as_ref().is_some_and(|s| s.shares(cur))) else {
                break;
            };
            let a = live[acc].take().unwrap();
            let b = live[next].take().unwrap();
            let (c, work) = a.contract(&b);
            plan.cost += work;
            plan.steps.push((acc.min(next), acc.max(next)));
            live.push(Some(c));
            acc = live.len() - 1;
        }
        // `acc` is a finished component; keep it for the outer products.
        start += 1;
    }
    plan
}

/// Contracts a list of labelled tensors. Several orders are costed on
/// shapes alone and the cheapest one is executed; disconnected pieces are
/// then joined by outer products.
fn contract_all(tensors: Vec<Labelled>) -> Labelled {
    let shapes: Vec<Shape> = tensors
        .iter()
        .map(|t| Shape {
            legs: t.labels.iter().copied().zip(t.dims.iter().copied()).collect(),
        })
        .collect();
    let plan = [
        plan_greedy(&shapes, Heuristic::SmallestResult),
        plan_greedy(&shapes, Heuristic::LargestShrink),
        plan_sweep(&shapes),
    ]
    .into_iter()
    .min_by(|a, b| a.cost.total_cmp(&b.cost))
    .expect("three plans");

    let mut live: Vec<Option<Labelled>> = tensors.into_iter().map(Some).collect();
    for (i, j) in plan.steps {
        let a = live[i].take().expect("plan refers to live tensors");
        let b = live[j].take().expect("plan refers to live tensors");
        live.push(Some(Labelled::contract(&a, &b)));
    }

    let mut rest: Vec<Labelled> = live.into_iter().flatten().collect();
    rest.sort_by_key(|t| t.size());
    let mut acc = Labelled {
        labels: vec![],
        dims: vec![],
        data: vec![ONE],
    };
    for t in rest {
        acc = Labelled::contract(&acc, &t);
    }
    acc
}

/// Number of nonzero entries of the standard basis expansion of `digits`
/// helper used by tests of the W node.
#[cfg(test)]
fn basis(dims: &[usize], digits: &[usize]) -> usize {
    crate::tensor::ravel(digits, dims)
}
