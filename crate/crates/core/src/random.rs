//! Seeded random diagrams and tensors for property tests.

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::diagram::{Diagram, Dim, GeneratorKind, ParamVec};
use crate::rewrite::{apply_rule, find_matches, RuleId};
use crate::tensor::Tensor;

/// Bounds on generated diagrams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomConfig {
    /// Largest wire dimension (smallest is 2).
    pub max_dim: usize,
    pub max_nodes: usize,
    /// Upper bound on the number of open wires between layers.
    pub max_wires: usize,
    /// Upper bound on the product of all boundary dimensions.
    pub max_boundary: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_dim: 4,
            max_nodes: 6,
            max_wires: 4,
            max_boundary: 4096,
        }
    }
}

fn dim(v: usize) -> Dim {
    Dim::new(v).expect("positive dimension")
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_params<R: Rng>(rng: &mut R, len: usize) -> ParamVec {
    ParamVec::new((0..len).map(|_| random_complex(rng)).collect())
}

pub fn random_tensor<R: Rng>(rng: &mut R, out_dims: Vec<usize>, in_dims: Vec<usize>) -> Tensor {
    let n = out_dims.iter().chain(&in_dims).product::<usize>();
    let data = (0..n).map(|_| random_complex(rng)).collect();
    Tensor::new(out_dims, in_dims, data).expect("sizes agree")
}

/// Between one and four dimensions in `1..=max_dim` with product at most
/// `max_total`.
pub fn random_dims<R: Rng>(rng: &mut R, max_dim: usize, max_total: usize) -> Vec<usize> {
    let mut dims = Vec::new();
    let mut total = 1;
    let want = rng.gen_range(1..=4);
    while dims.len() < want {
        let cap = max_dim.min(max_total / total);
        if cap < 1 {
            break;
        }
        let d = rng.gen_range(1..=cap);
        total *= d;
        dims.push(d);
        if cap == 1 {
            break;
        }
    }
    dims
}

fn z_node<R: Rng>(rng: &mut R, inputs: Vec<Dim>, outputs: Vec<Dim>) -> GeneratorKind {
    let min = inputs.iter().chain(&outputs).map(|d| d.get()).min().expect("at least one leg");
    GeneratorKind::ZBox {
        params: random_params(rng, min - 1),
        inputs,
        outputs,
    }
}

fn random_wire<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Dim {
    dim(rng.gen_range(2..=cfg.max_dim.max(2)))
}

/// A random generator whose inputs are exactly `inputs`, or `None` if the
/// draw has no generator for that signature.
fn random_generator<R: Rng>(rng: &mut R, inputs: &[Dim], cfg: &RandomConfig) -> Option<GeneratorKind> {
    use GeneratorKind::*;
    let g = match *inputs {
        [] => match rng.gen_range(0..4) {
            0 => Cap { dim: random_wire(rng, cfg) },
            1 => {
                let w = random_wire(rng, cfg);
                z_node(rng, vec![], vec![w])
            }
            2 => XSpider { dim: random_wire(rng, cfg), n_in: 0, n_out: 1 },
            _ => Scalar(random_complex(rng)),
        },
        [d] => match rng.gen_range(0..9) {
            0 => {
                let outs = (0..rng.gen_range(0..=2)).map(|_| random_wire(rng, cfg)).collect();
                z_node(rng, vec![d], outs)
            }
            1 => Hadamard { dim: d },
            2 => GeneratorKind::multiplier(d, rng.gen_range(0..d.get() as i64)),
            3 => WNode { dim: d, fanout: rng.gen_range(1..=2) },
            4 => XSpider { dim: d, n_in: 1, n_out: rng.gen_range(0..=2) },
            5 => Identity { dim: d },
            6 if d.get() == 4 => Splitter { m: dim(2), n: dim(2) },
            7 => WNodeDagger { dim: d, fanin: 1 },
            _ => z_node(rng, vec![d], vec![d]),
        },
        [a, b] => match rng.gen_range(0..6) {
            0 => Swap { m: a, n: b },
            1 if a == b => Cup { dim: a },
            2 if a == b => XSpider { dim: a, n_in: 2, n_out: rng.gen_range(0..=1) },
            3 if a == b => WNodeDagger { dim: a, fanin: 2 },
            4 if a.get() * b.get() <= cfg.max_dim => Merger { m: a, n: b },
            _ => {
                let outs = (0..rng.gen_range(0..=2)).map(|_| random_wire(rng, cfg)).collect();
                z_node(rng, vec![a, b], outs)
            }
        },
        _ => return None,
    };
    Some(g)
}

/// `d` with `g` applied to its output wires `pos..pos + g.n_inputs()`.
pub fn apply_layer(d: &Diagram, pos: usize, g: GeneratorKind) -> Diagram {
    let outs = d.outputs();
    let k = g.n_inputs();
    let node = Diagram::node(g).expect("generated kinds are valid");
    let top = Diagram::par_compose(
        &Diagram::par_compose(&Diagram::identity(&outs[..pos]), &node),
        &Diagram::identity(&outs[pos + k..]),
    );
    Diagram::seq_compose(&top, d).expect("layer matches the open wires")
}

fn boundary_size(d: &Diagram) -> usize {
    d.inputs().iter().chain(d.outputs()).map(|d| d.get()).product()
}

/// A random diagram with the given inputs and up to `cfg.max_nodes` nodes,
/// built by stacking random generators on the open wires.
pub fn random_diagram_from<R: Rng>(rng: &mut R, inputs: &[Dim], cfg: &RandomConfig) -> Diagram {
    let mut d = Diagram::identity(inputs);
    let target = rng.gen_range(1..=cfg.max_nodes.max(1));
    let mut attempts = 0;
    while d.node_count() < target && attempts < 20 * cfg.max_nodes {
        attempts += 1;
        let open = d.outputs().len();
        let k = rng.gen_range(0..=2.min(open));
        let pos = rng.gen_range(0..=open - k);
        let Some(g) = random_generator(rng, &d.outputs()[pos..pos + k], cfg) else {
            continue;
        };
        if open - k + g.n_outputs() > cfg.max_wires {
            continue;
        }
        let next = apply_layer(&d, pos, g);
        if boundary_size(&next) <= cfg.max_boundary {
            d = next;
        }
    }
    d
}

pub fn random_diagram<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Diagram {
    let inputs: Vec<Dim> = (0..rng.gen_range(0..=2)).map(|_| random_wire(rng, cfg)).collect();
    random_diagram_from(rng, &inputs, cfg)
}

/// `(top, bottom)` with `top.inputs() == bottom.outputs()`.
pub fn random_composable_pair<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> (Diagram, Diagram) {
    let bottom = random_diagram(rng, cfg);
    let top = random_diagram_from(rng, bottom.outputs(), cfg);
    (top, bottom)
}

/// Applies up to `count` rewrites, each at a match drawn uniformly from
/// the matches of all rules.
pub fn random_rewrites<R: Rng>(rng: &mut R, d: &Diagram, count: usize) -> Diagram {
    let mut cur = d.clone();
    for _ in 0..count {
        let all: Vec<_> = RuleId::ALL.into_iter().flat_map(|r| find_matches(&cur, r)).collect();
        let Some(m) = all.choose(rng) else { break };
        cur = apply_rule(&cur, m).expect("fresh match");
    }
    cur
}

/// A diagram with the same signature as `d` that is equal to it roughly
/// half the time: either a rewritten copy, or a copy with a scalar, an
/// extra phase or a perturbed parameter.
pub fn random_same_signature<R: Rng>(rng: &mut R, d: &Diagram) -> Diagram {
    let scalar = |c: C64| Diagram::node(GeneratorKind::Scalar(c)).expect("valid");
    match rng.gen_range(0..6) {
        0 | 1 => random_rewrites(rng, d, 10),
        2 => {
            // identity-valued decoration on an output wire
            let n = d.outputs().len();
            if n == 0 {
                return Diagram::par_compose(d, &scalar(C64::new(1.0, 0.0)));
            }
            let pos = rng.gen_range(0..n);
            let w = d.outputs()[pos];
            let z = GeneratorKind::ZBox {
                inputs: vec![w],
                outputs: vec![w],
                params: ParamVec::ones(w.get() - 1),
            };
            apply_layer(d, pos, z)
        }
        3 => Diagram::par_compose(d, &scalar(C64::new(rng.gen_range(0.5..2.0), 0.0))),
        4 => {
            let n = d.outputs().len();
            if n == 0 {
                return Diagram::par_compose(d, &scalar(random_complex(rng)));
            }
            let pos = rng.gen_range(0..n);
            let w = d.outputs()[pos];
            apply_layer(d, pos, z_node(rng, vec![w], vec![w]))
        }
        _ => perturb(rng, d),
    }
}

/// Adds a small random offset to one parameter or scalar, if there is any.
fn perturb<R: Rng>(rng: &mut R, d: &Diagram) -> Diagram {
    let mut nodes = d.nodes().to_vec();
    let candidates: Vec<usize> = (0..nodes.len())
        .filter(|&i| match &nodes[i] {
            GeneratorKind::ZBox { params, .. } => !params.is_empty(),
            GeneratorKind::Scalar(_) => true,
            _ => false,
        })
        .collect();
    let Some(&i) = candidates.choose(rng) else {
        return d.clone();
    };
    let delta = C64::new(rng.gen_range(0.1..0.5), 0.0);
    match &mut nodes[i] {
        GeneratorKind::ZBox { params, .. } => {
            let mut e = params.entries().to_vec();
            let j = rng.gen_range(0..e.len());
            e[j] += delta;
            *params = ParamVec::new(e);
        }
        GeneratorKind::Scalar(c) => *c += delta,
        _ => unreachable!(),
    }
    Diagram::from_parts(nodes, d.edges().to_vec(), d.inputs().to_vec(), d.outputs().to_vec())
}
