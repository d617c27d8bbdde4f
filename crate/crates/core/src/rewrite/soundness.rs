//! Numerical soundness checks: each rule's left side is sampled with random
//! dimensions and parameters, rewritten, and both sides are evaluated.

use std::collections::HashSet;

use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rules::{self, Padding};
use super::{find_matches, RuleId};
use crate::diagram::{Diagram, Dim, Edge, Endpoint, GeneratorKind, ParamVec};
use crate::interpret::eval;
use crate::tensor::Tensor;

/// Largest deviation accepted between the two sides of a rule.
pub const SOUNDNESS_TOL: f64 = 1e-10;

/// Rules of the calculus that are only stated pictorially and have no
/// mechanized rewrite. They are listed, never checked.
pub const UNMECHANIZED: [&str; 19] = [
    "K1", "K2", "D1", "Sym", "AD", "WW", "Bs0", "HD", "VA", "VW", "Bsj", "ZV", "TA", "Pcy", "BZW", "KZ", "K0", "DD", "DZX",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RuleReport {
    pub rule: String,
    pub mechanized: bool,
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    pub max_deviation: f64,
}

impl RuleReport {
    pub fn all_passed(&self) -> bool {
        self.mechanized && self.samples > 0 && self.failed == 0
    }

    pub fn not_mechanized(name: &str) -> Self {
        RuleReport {
            rule: name.to_string(),
            mechanized: false,
            samples: 0,
            passed: 0,
            failed: 0,
            max_deviation: 0.0,
        }
    }
}

/// Samples `samples` instances of `rule` with wire dimensions drawn from
/// `dim_choices`, rewrites each and compares the interpretations.
pub fn check_rule_soundness(rule: RuleId, dim_choices: &[Dim], samples: usize, seed: u64) -> RuleReport {
    run(rule, rule.name(), Padding::Zero, dim_choices, samples, seed)
}

/// The same check for a fusion rule that pads with ones instead of zeros.
/// Expected to fail.
pub fn check_corrupted_fuse_z(dim_choices: &[Dim], samples: usize, seed: u64) -> RuleReport {
    run(RuleId::FuseZ, "fuse-z (corrupted padding)", Padding::One, dim_choices, samples, seed)
}

fn run(rule: RuleId, name: &str, padding: Padding, dim_choices: &[Dim], samples: usize, seed: u64) -> RuleReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (rule as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut report = RuleReport {
        rule: name.to_string(),
        mechanized: true,
        samples,
        passed: 0,
        failed: 0,
        max_deviation: 0.0,
    };
    let choices: Vec<Dim> = if dim_choices.is_empty() {
        vec![Dim::new(2).expect("positive")]
    } else {
        dim_choices.to_vec()
    };
    for i in 0..samples {
        let lhs = sample(rule, &mut rng, &choices, i);
        let matches = find_matches(&lhs, rule);
        let site = matches.choose(&mut rng).expect("sampler produces a match");
        let rhs = rules::rewrite(&lhs, site, padding);
        let deviation = match (eval(&lhs), eval(&rhs)) {
            (Ok(a), Ok(b)) => Tensor::max_abs_diff(&a, &b).unwrap_or(f64::INFINITY),
            _ => f64::INFINITY,
        };
        report.max_deviation = report.max_deviation.max(deviation);
        if deviation <= SOUNDNESS_TOL {
            report.passed += 1;
        } else {
            report.failed += 1;
        }
    }
    report
}

fn rand_c(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn pick(rng: &mut ChaCha8Rng, choices: &[Dim]) -> Dim {
    *choices.choose(rng).expect("nonempty")
}

fn random_params(rng: &mut ChaCha8Rng, len: usize) -> ParamVec {
    ParamVec::new((0..len).map(|_| rand_c(rng)).collect())
}

fn z_box(rng: &mut ChaCha8Rng, inputs: Vec<Dim>, outputs: Vec<Dim>) -> GeneratorKind {
    let min = inputs.iter().chain(&outputs).map(|d| d.get()).min().expect("legs");
    GeneratorKind::ZBox {
        params: random_params(rng, min - 1),
        inputs,
        outputs,
    }
}

/// Wires every port not mentioned in `internal` to the boundary: input
/// ports become diagram inputs, output ports diagram outputs, in node order.
fn close(nodes: Vec<GeneratorKind>, internal: Vec<Edge>) -> Diagram {
    let used: HashSet<Endpoint> = internal.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut edges = internal;
    let (mut ins, mut outs) = (Vec::new(), Vec::new());
    for (n, k) in nodes.iter().enumerate() {
        for p in 0..k.n_ports() {
            let e = Endpoint::port(n, p);
            if used.contains(&e) {
                continue;
            }
            let dim = k.port_dim(p).expect("port exists");
            if p < k.n_inputs() {
                edges.push((Endpoint::Input(ins.len()), e));
                ins.push(dim);
            } else {
                edges.push((e, Endpoint::Output(outs.len())));
                outs.push(dim);
            }
        }
    }
    Diagram::from_parts(nodes, edges, ins, outs)
}

/// Puts random 1-in/1-out Z boxes on some boundary wires so that rewrites
/// reconnect real neighbours, not just the boundary.
fn decorate(rng: &mut ChaCha8Rng, d: Diagram) -> Diagram {
    let mut d = d;
    let layer = |rng: &mut ChaCha8Rng, wires: &[Dim]| -> Option<Diagram> {
        if wires.is_empty() || rng.gen_bool(0.4) {
            return None;
        }
        let i = rng.gen_range(0..wires.len());
        let z = Diagram::node(z_box(rng, vec![wires[i]], vec![wires[i]])).ok()?;
        Some(Diagram::par_compose(
            &Diagram::par_compose(&Diagram::identity(&wires[..i]), &z),
            &Diagram::identity(&wires[i + 1..]),
        ))
    };
    if let Some(top) = layer(rng, &d.outputs().to_vec()) {
        d = Diagram::seq_compose(&top, &d).expect("signatures agree");
    }
    if let Some(bottom) = layer(rng, &d.inputs().to_vec()) {
        d = Diagram::seq_compose(&d, &bottom).expect("signatures agree");
    }
    d
}

fn sample(rule: RuleId, rng: &mut ChaCha8Rng, choices: &[Dim], index: usize) -> Diagram {
    let p = Endpoint::port;
    let d = match rule {
        RuleId::ScalarFold => {
            let count = rng.gen_range(1..=3);
            let mut nodes: Vec<GeneratorKind> = (0..count)
                .map(|_| {
                    if rng.gen_bool(0.3) {
                        GeneratorKind::Scalar(C64::new(1.0, 0.0))
                    } else {
                        GeneratorKind::Scalar(rand_c(rng))
                    }
                })
                .collect();
            if count == 1 {
                nodes[0] = GeneratorKind::Scalar(C64::new(1.0, 0.0));
            }
            let dim = pick(rng, choices);
            nodes.push(z_box(rng, vec![dim], vec![dim]));
            close(nodes, vec![])
        }
        RuleId::RemoveIdentitySpider => {
            let dim = pick(rng, choices);
            let ones = ParamVec::ones(dim.get() - 1);
            let kind = match rng.gen_range(0..8) {
                0 => GeneratorKind::Identity { dim },
                1 => GeneratorKind::ZBox { inputs: vec![dim], outputs: vec![dim], params: ones },
                2 => GeneratorKind::ZBox { inputs: vec![], outputs: vec![dim, dim], params: ones },
                3 => GeneratorKind::ZBox { inputs: vec![dim, dim], outputs: vec![], params: ones },
                4 => GeneratorKind::XSpider { dim, n_in: 1, n_out: 1 },
                5 => GeneratorKind::multiplier(dim, 1 + dim.get() as i64 * rng.gen_range(0..3)),
                6 => GeneratorKind::Cap { dim },
                _ => GeneratorKind::Cup { dim },
            };
            if rng.gen_bool(0.1) {
                // closed into a loop
                Diagram::from_parts(vec![kind], vec![(p(0, 0), p(0, 1))], vec![], vec![])
            } else {
                close(vec![kind], vec![])
            }
        }
        RuleId::WSingleLeg => {
            let dim = pick(rng, choices);
            let kind = if rng.gen_bool(0.5) {
                GeneratorKind::WNode { dim, fanout: 1 }
            } else {
                GeneratorKind::WNodeDagger { dim, fanin: 1 }
            };
            close(vec![kind], vec![])
        }
        RuleId::MultiplierCompose => {
            let dim = pick(rng, choices);
            let (a, b) = (rng.gen_range(0..dim.get()), rng.gen_range(0..dim.get()));
            close(
                vec![GeneratorKind::multiplier(dim, a as i64), GeneratorKind::multiplier(dim, b as i64)],
                vec![(p(0, 1), p(1, 0))],
            )
        }
        RuleId::SplitterMergerCancel => {
            let (m, n) = (pick(rng, choices), pick(rng, choices));
            if rng.gen_bool(0.5) {
                close(
                    vec![GeneratorKind::Merger { m, n }, GeneratorKind::Splitter { m, n }],
                    vec![(p(0, 2), p(1, 0))],
                )
            } else {
                close(
                    vec![GeneratorKind::Splitter { m, n }, GeneratorKind::Merger { m, n }],
                    vec![(p(0, 1), p(1, 0)), (p(0, 2), p(1, 1))],
                )
            }
        }
        RuleId::SplitterAssoc => {
            let (m, n, k) = (pick(rng, choices), pick(rng, choices), pick(rng, choices));
            let mn = Dim::new(m.get() * n.get()).expect("positive");
            if rng.gen_bool(0.5) {
                close(
                    vec![GeneratorKind::Splitter { m: mn, n: k }, GeneratorKind::Splitter { m, n }],
                    vec![(p(0, 1), p(1, 0))],
                )
            } else {
                close(
                    vec![GeneratorKind::Merger { m: mn, n: k }, GeneratorKind::Merger { m, n }],
                    vec![(p(1, 2), p(0, 0))],
                )
            }
        }
        RuleId::FuseZ => sample_fuse_z(rng, choices, index),
        RuleId::FuseX => sample_fuse_x(rng, choices),
        RuleId::HopfDisconnect => sample_hopf(rng, choices),
    };
    decorate(rng, d)
}

/// Splits `legs` into inputs and outputs at random.
fn random_sides(rng: &mut ChaCha8Rng, legs: &[Dim]) -> Vec<bool> {
    legs.iter().map(|_| rng.gen_bool(0.5)).collect()
}

fn sample_fuse_z(rng: &mut ChaCha8Rng, choices: &[Dim], index: usize) -> Diagram {
    let min = *choices.iter().min().expect("nonempty");
    let larger: Vec<Dim> = choices.iter().copied().filter(|&d| d > min).collect();
    // Every other sample makes the shared wires strictly the smallest legs,
    // so that the zero padding of the fused parameters matters.
    let force = index % 2 == 1 && !larger.is_empty();
    let shared: Vec<Dim> = (0..rng.gen_range(1..=2)).map(|_| if force { min } else { pick(rng, choices) }).collect();
    let extra = |rng: &mut ChaCha8Rng| -> Vec<Dim> {
        let count = if force { rng.gen_range(1..=2) } else { rng.gen_range(0..=2) };
        (0..count).map(|_| if force { pick(rng, &larger) } else { pick(rng, choices) }).collect()
    };
    let (ea, eb) = (extra(rng), extra(rng));
    let mut nodes = Vec::new();
    let mut ports = Vec::new();
    for own in [&ea, &eb] {
        let legs: Vec<Dim> = own.iter().chain(&shared).copied().collect();
        let sides = random_sides(rng, &legs);
        let ins: Vec<Dim> = legs.iter().zip(&sides).filter(|x| *x.1).map(|x| *x.0).collect();
        let outs: Vec<Dim> = legs.iter().zip(&sides).filter(|x| !*x.1).map(|x| *x.0).collect();
        // port of each shared leg
        let mut port_of = Vec::new();
        for s in 0..shared.len() {
            let leg = own.len() + s;
            let before_same_side = (0..leg).filter(|&l| sides[l] == sides[leg]).count();
            port_of.push(if sides[leg] { before_same_side } else { ins.len() + before_same_side });
        }
        ports.push(port_of);
        nodes.push(z_box(rng, ins, outs));
    }
    let internal = (0..shared.len())
        .map(|s| (Endpoint::port(0, ports[0][s]), Endpoint::port(1, ports[1][s])))
        .collect();
    close(nodes, internal)
}

fn sample_fuse_x(rng: &mut ChaCha8Rng, choices: &[Dim]) -> Diagram {
    let dim = pick(rng, choices);
    let mut nodes = Vec::new();
    let mut link = Vec::new();
    for _ in 0..2 {
        let link_is_input = rng.gen_bool(0.5);
        let (mut n_in, mut n_out) = (rng.gen_range(0..=2), rng.gen_range(0..=2));
        if link_is_input {
            n_in += 1;
        } else {
            n_out += 1;
        }
        let port = if link_is_input { rng.gen_range(0..n_in) } else { n_in + rng.gen_range(0..n_out) };
        link.push(port);
        nodes.push(GeneratorKind::XSpider { dim, n_in, n_out });
    }
    close(nodes, vec![(Endpoint::port(0, link[0]), Endpoint::port(1, link[1]))])
}

fn sample_hopf(rng: &mut ChaCha8Rng, choices: &[Dim]) -> Diagram {
    let dim = pick(rng, choices);
    let d = dim.get();
    // (X-input wires, X-output wires) to the Z box
    let (q, p) = *[(d, 0), (0, d), (1, 1), (2, 2), (d + 1, 1), (1, d)]
        .choose(rng)
        .expect("nonempty");
    let z_extra: Vec<Dim> = (0..rng.gen_range(0..=2)).map(|_| pick(rng, choices)).collect();
    let x_in_extra = rng.gen_range(0..=1);
    let x_out_extra = rng.gen_range(0..=1);

    let shared = p + q;
    let z_legs: Vec<Dim> = z_extra.iter().copied().chain(std::iter::repeat(dim).take(shared)).collect();
    let sides = random_sides(rng, &z_legs);
    let z_ins: Vec<Dim> = z_legs.iter().zip(&sides).filter(|x| *x.1).map(|x| *x.0).collect();
    let z_outs: Vec<Dim> = z_legs.iter().zip(&sides).filter(|x| !*x.1).map(|x| *x.0).collect();
    let z_port = |leg: usize| {
        let before = (0..leg).filter(|&l| sides[l] == sides[leg]).count();
        if sides[leg] {
            before
        } else {
            z_ins.len() + before
        }
    };
    let n_in = x_in_extra + q;
    let n_out = x_out_extra + p;
    let mut internal = Vec::new();
    for s in 0..shared {
        let x_port = if s < q { x_in_extra + s } else { n_in + x_out_extra + (s - q) };
        internal.push((Endpoint::port(0, z_port(z_extra.len() + s)), Endpoint::port(1, x_port)));
    }
    let z = z_box(rng, z_ins, z_outs);
    close(vec![z, GeneratorKind::XSpider { dim, n_in, n_out }], internal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::dims;

    #[test]
    fn every_rule_passes_a_few_samples() {
        let ds = dims(&[2, 3]).unwrap();
        for rule in RuleId::ALL {
            let r = check_rule_soundness(rule, &ds, 12, 1);
            assert!(r.all_passed(), "{r:?}");
        }
    }

    #[test]
    fn corrupted_fusion_is_caught() {
        let r = check_corrupted_fuse_z(&dims(&[2, 3]).unwrap(), 12, 1);
        assert!(r.failed > 0, "{r:?}");
    }
}
