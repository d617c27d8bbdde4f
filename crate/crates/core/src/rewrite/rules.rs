use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64 as C64;

use super::{Match, RuleId};
use crate::diagram::edit::Editor;
use crate::diagram::{Diagram, Dim, Endpoint, GeneratorKind, NodeId, ParamVec};

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// How [`RuleId::FuseZ`] pads the fused parameter vector. Only `Zero` is
/// sound; `One` exists as a negative control for the soundness checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Padding {
    Zero,
    One,
}

/// Constant-time edge lookups over a diagram.
struct View<'a> {
    d: &'a Diagram,
    at: HashMap<Endpoint, usize>,
}

impl<'a> View<'a> {
    fn new(d: &'a Diagram) -> Self {
        View { d, at: d.incidence() }
    }

    fn kind(&self, n: NodeId) -> &GeneratorKind {
        &self.d.nodes()[n]
    }

    fn edge(&self, e: Endpoint) -> usize {
        self.at[&e]
    }

    fn opposite(&self, e: Endpoint) -> Endpoint {
        let (a, b) = self.d.edges()[self.at[&e]];
        if a == e {
            b
        } else {
            a
        }
    }

    /// Edges from `a` to a different node `b`, as (port of a, port of b, edge).
    fn links(&self, a: NodeId, b: NodeId) -> Vec<(usize, usize, usize)> {
        (0..self.kind(a).n_ports())
            .filter_map(|p| match self.opposite(Endpoint::port(a, p)) {
                Endpoint::Port { node, port } if node == b => Some((p, port, self.edge(Endpoint::port(a, p)))),
                _ => None,
            })
            .collect()
    }

    /// Distinct node pairs `(a, b)` with `a < b` joined by at least one edge,
    /// both satisfying `pred`.
    fn adjacent_pairs(&self, pred: impl Fn(&GeneratorKind) -> bool) -> Vec<(NodeId, NodeId)> {
        let mut pairs: Vec<(NodeId, NodeId)> = self
            .d
            .edges()
            .iter()
            .filter_map(|&(x, y)| match (x.node(), y.node()) {
                (Some(a), Some(b)) if a != b && pred(self.kind(a)) && pred(self.kind(b)) => Some((a.min(b), a.max(b))),
                _ => None,
            })
            .collect();
        pairs.sort();
        pairs.dedup();
        pairs
    }
}

pub(crate) fn find(d: &Diagram, rule: RuleId) -> Vec<Match> {
    let v = View::new(d);
    let single = |nodes: Vec<NodeId>| nodes.into_iter().map(|n| Match { rule, nodes: vec![n], edges: vec![] }).collect();
    match rule {
        RuleId::ScalarFold => find_scalar_fold(&v),
        RuleId::RemoveIdentitySpider => single((0..d.node_count()).filter(|&n| is_wire(v.kind(n))).collect()),
        RuleId::WSingleLeg => single(
            (0..d.node_count())
                .filter(|&n| {
                    matches!(
                        v.kind(n),
                        GeneratorKind::WNode { fanout: 1, .. } | GeneratorKind::WNodeDagger { fanin: 1, .. }
                    )
                })
                .collect(),
        ),
        RuleId::MultiplierCompose => find_multiplier_compose(&v),
        RuleId::SplitterMergerCancel => find_splitter_merger(&v),
        RuleId::SplitterAssoc => find_assoc(&v),
        RuleId::FuseZ => v
            .adjacent_pairs(|k| matches!(k, GeneratorKind::ZBox { .. }))
            .into_iter()
            .map(|(a, b)| Match {
                rule,
                nodes: vec![a, b],
                edges: sorted(v.links(a, b).into_iter().map(|l| l.2).collect()),
            })
            .collect(),
        RuleId::FuseX => find_fuse_x(&v),
        RuleId::HopfDisconnect => find_hopf(&v),
    }
}

pub(crate) fn rewrite(d: &Diagram, m: &Match, padding: Padding) -> Diagram {
    let v = View::new(d);
    let mut ed = Editor::new(d);
    match m.rule {
        RuleId::ScalarFold => {
            if let [a, b] = m.nodes[..] {
                let (GeneratorKind::Scalar(x), GeneratorKind::Scalar(y)) = (v.kind(a), v.kind(b)) else {
                    unreachable!("scalar-fold matches scalars")
                };
                ed.set_kind(a, GeneratorKind::Scalar(x * y));
                ed.remove_node(b);
            } else {
                ed.remove_node(m.nodes[0]);
            }
        }
        RuleId::RemoveIdentitySpider | RuleId::WSingleLeg => ed.bypass(m.nodes[0]),
        RuleId::MultiplierCompose => {
            let (x, y) = (m.nodes[0], m.nodes[1]);
            let (GeneratorKind::Multiplier { dim, label: a }, GeneratorKind::Multiplier { label: b, .. }) =
                (v.kind(x), v.kind(y))
            else {
                unreachable!("multiplier-compose matches multipliers")
            };
            let new = ed.add_node(GeneratorKind::multiplier(*dim, (a * b) as i64));
            ed.splice(
                &[x, y],
                &[
                    (Endpoint::port(x, 0), Endpoint::port(new, 0)),
                    (Endpoint::port(y, 1), Endpoint::port(new, 1)),
                ],
            );
        }
        RuleId::SplitterMergerCancel => {
            let (x, y) = (m.nodes[0], m.nodes[1]);
            match v.kind(x) {
                // merger x feeding splitter y
                GeneratorKind::Merger { .. } => ed.splice(
                    &[x, y],
                    &[
                        (Endpoint::port(x, 0), Endpoint::port(y, 1)),
                        (Endpoint::port(x, 1), Endpoint::port(y, 2)),
                    ],
                ),
                // splitter x feeding merger y
                _ => ed.splice(&[x, y], &[(Endpoint::port(x, 0), Endpoint::port(y, 2))]),
            }
        }
        RuleId::SplitterAssoc => rewrite_assoc(&v, &mut ed, m),
        RuleId::FuseZ => rewrite_fuse_z(&v, &mut ed, m, padding),
        RuleId::FuseX => rewrite_fuse_x(&v, &mut ed, m),
        RuleId::HopfDisconnect => rewrite_hopf(&v, &mut ed, m),
    }
    ed.finish()
}

fn sorted(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v
}

fn find_scalar_fold(v: &View) -> Vec<Match> {
    let scalars: Vec<NodeId> = (0..v.d.node_count())
        .filter(|&n| matches!(v.kind(n), GeneratorKind::Scalar(_)))
        .collect();
    let mut out: Vec<Match> = scalars
        .windows(2)
        .map(|w| Match {
            rule: RuleId::ScalarFold,
            nodes: vec![w[0], w[1]],
            edges: vec![],
        })
        .collect();
    out.extend(
        scalars
            .iter()
            .filter(|&&n| *v.kind(n) == GeneratorKind::Scalar(ONE))
            .map(|&n| Match {
                rule: RuleId::ScalarFold,
                nodes: vec![n],
                edges: vec![],
            }),
    );
    out
}

/// Two-legged generators whose interpretation is a bare wire.
fn is_wire(k: &GeneratorKind) -> bool {
    use GeneratorKind::*;
    match k {
        Identity { .. } | Cap { .. } | Cup { .. } => true,
        Hadamard { dim } => dim.get() == 1,
        Multiplier { dim, label } => *label == 1 % dim.get(),
        XSpider { n_in: 1, n_out: 1, .. } => true,
        ZBox { inputs, outputs, params } => {
            let legs: Vec<&Dim> = inputs.iter().chain(outputs).collect();
            legs.len() == 2 && legs[0] == legs[1] && params.is_phaseless()
        }
        _ => false,
    }
}

fn find_multiplier_compose(v: &View) -> Vec<Match> {
    let mut out = Vec::new();
    for (e, &(a, b)) in v.d.edges().iter().enumerate() {
        for (p, q) in [(a, b), (b, a)] {
            let (Endpoint::Port { node: x, port: 1 }, Endpoint::Port { node: y, port: 0 }) = (p, q) else {
                continue;
            };
            if x == y
                || !matches!(v.kind(x), GeneratorKind::Multiplier { .. })
                || !matches!(v.kind(y), GeneratorKind::Multiplier { .. })
            {
                continue;
            }
            // A closed two-multiplier loop is a trace, not a composite.
            if v.opposite(Endpoint::port(y, 1)) == Endpoint::port(x, 0) {
                continue;
            }
            out.push(Match {
                rule: RuleId::MultiplierCompose,
                nodes: vec![x, y],
                edges: vec![e],
            });
        }
    }
    out
}

fn find_splitter_merger(v: &View) -> Vec<Match> {
    let mut out = Vec::new();
    for x in 0..v.d.node_count() {
        match v.kind(x) {
            GeneratorKind::Merger { m, n } => {
                if let Endpoint::Port { node: y, port: 0 } = v.opposite(Endpoint::port(x, 2)) {
                    if y != x && *v.kind(y) == (GeneratorKind::Splitter { m: *m, n: *n }) {
                        out.push(Match {
                            rule: RuleId::SplitterMergerCancel,
                            nodes: vec![x, y],
                            edges: vec![v.edge(Endpoint::port(x, 2))],
                        });
                    }
                }
            }
            GeneratorKind::Splitter { m, n } => {
                let (l, r) = (v.opposite(Endpoint::port(x, 1)), v.opposite(Endpoint::port(x, 2)));
                if let (Endpoint::Port { node: y, port: 0 }, Endpoint::Port { node: y2, port: 1 }) = (l, r) {
                    if y == y2 && y != x && *v.kind(y) == (GeneratorKind::Merger { m: *m, n: *n }) {
                        out.push(Match {
                            rule: RuleId::SplitterMergerCancel,
                            nodes: vec![x, y],
                            edges: sorted(vec![v.edge(Endpoint::port(x, 1)), v.edge(Endpoint::port(x, 2))]),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    out
}

/// Left-nested pairs: a splitter whose left output feeds another splitter,
/// or a merger whose left input is fed by another merger.
fn find_assoc(v: &View) -> Vec<Match> {
    let mut out = Vec::new();
    for a in 0..v.d.node_count() {
        let inner = match v.kind(a) {
            GeneratorKind::Splitter { .. } => match v.opposite(Endpoint::port(a, 1)) {
                Endpoint::Port { node, port: 0 } if matches!(v.kind(node), GeneratorKind::Splitter { .. }) => Some(node),
                _ => None,
            },
            GeneratorKind::Merger { .. } => match v.opposite(Endpoint::port(a, 0)) {
                Endpoint::Port { node, port: 2 } if matches!(v.kind(node), GeneratorKind::Merger { .. }) => Some(node),
                _ => None,
            },
            _ => None,
        };
        if let Some(b) = inner.filter(|&b| b != a) {
            let port = if matches!(v.kind(a), GeneratorKind::Splitter { .. }) { 1 } else { 0 };
            out.push(Match {
                rule: RuleId::SplitterAssoc,
                nodes: vec![a, b],
                edges: vec![v.edge(Endpoint::port(a, port))],
            });
        }
    }
    out
}

fn rewrite_assoc(v: &View, ed: &mut Editor, m: &Match) {
    let (a, b) = (m.nodes[0], m.nodes[1]);
    let p = Endpoint::port;
    match (v.kind(a), v.kind(b)) {
        // (m n) k  ->  m (n k)
        (GeneratorKind::Splitter { n: k, .. }, GeneratorKind::Splitter { m: dm, n: dn }) => {
            let nk = Dim::new(dn.get() * k.get()).expect("positive");
            let c = ed.add_node(GeneratorKind::Splitter { m: *dm, n: nk });
            let e = ed.add_node(GeneratorKind::Splitter { m: *dn, n: *k });
            ed.splice(
                &[a, b],
                &[(p(a, 0), p(c, 0)), (p(b, 1), p(c, 1)), (p(c, 2), p(e, 0)), (p(b, 2), p(e, 1)), (p(a, 2), p(e, 2))],
            );
        }
        (GeneratorKind::Merger { n: k, .. }, GeneratorKind::Merger { m: dm, n: dn }) => {
            let nk = Dim::new(dn.get() * k.get()).expect("positive");
            let c = ed.add_node(GeneratorKind::Merger { m: *dm, n: nk });
            let e = ed.add_node(GeneratorKind::Merger { m: *dn, n: *k });
            ed.splice(
                &[a, b],
                &[(p(a, 2), p(c, 2)), (p(b, 0), p(c, 0)), (p(e, 2), p(c, 1)), (p(b, 1), p(e, 0)), (p(a, 1), p(e, 1))],
            );
        }
        _ => unreachable!("splitter-assoc matches splitter or merger pairs"),
    }
}

/// Z box legs as (port, dim, is_input).
fn z_legs(k: &GeneratorKind) -> Vec<(usize, Dim, bool)> {
    let GeneratorKind::ZBox { inputs, outputs, .. } = k else {
        unreachable!("z box expected")
    };
    inputs
        .iter()
        .map(|&d| (d, true))
        .chain(outputs.iter().map(|&d| (d, false)))
        .enumerate()
        .map(|(p, (d, i))| (p, d, i))
        .collect()
}

fn z_params(k: &GeneratorKind) -> &ParamVec {
    let GeneratorKind::ZBox { params, .. } = k else {
        unreachable!("z box expected")
    };
    params
}

/// Builds a Z box over `legs` (given as (old endpoint, dim, is_input)),
/// with coefficient `coeff(j)` for `1 <= j < min dim`, wires it in place
/// of the old endpoints and returns the wiring pairs.
fn place_z(
    ed: &mut Editor,
    legs: &[(Endpoint, Dim, bool)],
    coeff: impl Fn(usize) -> C64,
) -> Vec<(Endpoint, Endpoint)> {
    let ins: Vec<&(Endpoint, Dim, bool)> = legs.iter().filter(|l| l.2).collect();
    let outs: Vec<&(Endpoint, Dim, bool)> = legs.iter().filter(|l| !l.2).collect();
    let min = legs.iter().map(|l| l.1.get()).min().expect("at least one leg");
    let z = ed.add_node(GeneratorKind::ZBox {
        inputs: ins.iter().map(|l| l.1).collect(),
        outputs: outs.iter().map(|l| l.1).collect(),
        params: ParamVec::new((1..min).map(coeff).collect()),
    });
    ins.iter()
        .chain(&outs)
        .enumerate()
        .map(|(p, l)| (l.0, Endpoint::port(z, p)))
        .collect()
}

fn rewrite_fuse_z(v: &View, ed: &mut Editor, m: &Match, padding: Padding) {
    let (a, b) = (m.nodes[0], m.nodes[1]);
    let shared_a: Vec<usize> = v.links(a, b).into_iter().map(|l| l.0).collect();
    let shared_b: Vec<usize> = v.links(b, a).into_iter().map(|l| l.0).collect();
    let (ka, kb) = (v.kind(a), v.kind(b));
    let big_m = ka.z_min_dim().unwrap().min(kb.z_min_dim().unwrap());
    let (pa, pb) = (z_params(ka), z_params(kb));
    let fused = |j: usize| pa.coeff(j) * pb.coeff(j);

    let mut legs: Vec<(Endpoint, Dim, bool)> = Vec::new();
    for (node, shared) in [(a, &shared_a), (b, &shared_b)] {
        for (p, d, is_in) in z_legs(v.kind(node)) {
            if !shared.contains(&p) {
                legs.push((Endpoint::port(node, p), d, is_in));
            }
        }
    }
    // Inputs of a, inputs of b, outputs of a, outputs of b.
    legs.sort_by_key(|l| !l.2);
    if legs.is_empty() {
        let total: C64 = (0..big_m).map(fused).sum();
        ed.add_node(GeneratorKind::Scalar(total));
        ed.splice(&[a, b], &[]);
        return;
    }
    let pad = match padding {
        Padding::Zero => ZERO,
        Padding::One => ONE,
    };
    let wiring = place_z(ed, &legs, |j| if j < big_m { fused(j) } else { pad });
    ed.splice(&[a, b], &wiring);
}

fn x_arity(k: &GeneratorKind) -> (Dim, usize, usize) {
    let GeneratorKind::XSpider { dim, n_in, n_out } = k else {
        unreachable!("x spider expected")
    };
    (*dim, *n_in, *n_out)
}

fn find_fuse_x(v: &View) -> Vec<Match> {
    v.adjacent_pairs(|k| matches!(k, GeneratorKind::XSpider { .. }))
        .into_iter()
        .filter_map(|(a, b)| {
            let links = v.links(a, b);
            (links.len() == 1 && x_arity(v.kind(a)).0 == x_arity(v.kind(b)).0).then(|| Match {
                rule: RuleId::FuseX,
                nodes: vec![a, b],
                edges: vec![links[0].2],
            })
        })
        .collect()
}

fn rewrite_fuse_x(v: &View, ed: &mut Editor, m: &Match) {
    let (mut a, mut b) = (m.nodes[0], m.nodes[1]);
    let (mut pa, mut pb, _) = v.links(a, b)[0];
    let is_in = |n: NodeId, p: usize| p < x_arity(v.kind(n)).1;
    // Orient an input-to-output link as output-to-input.
    if is_in(a, pa) && !is_in(b, pb) {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut pa, &mut pb);
    }
    let (dim, ..) = x_arity(v.kind(a));
    let ports = |n: NodeId, inputs: bool, skip: usize| -> Vec<Endpoint> {
        let (_, n_in, n_out) = x_arity(v.kind(n));
        let range = if inputs { 0..n_in } else { n_in..n_in + n_out };
        range.filter(|&p| p != skip).map(|p| Endpoint::port(n, p)).collect()
    };
    let (ins, outs): (Vec<Endpoint>, Vec<Endpoint>) = match (is_in(a, pa), is_in(b, pb)) {
        (false, true) => (
            [ports(a, true, pa), ports(b, true, pb)].concat(),
            [ports(a, false, pa), ports(b, false, pb)].concat(),
        ),
        (false, false) => (
            [ports(a, true, pa), ports(b, false, pb)].concat(),
            [ports(a, false, pa), ports(b, true, pb)].concat(),
        ),
        (true, true) => (
            [ports(a, true, pa), ports(b, false, pb)].concat(),
            [ports(a, false, pa), ports(b, true, pb)].concat(),
        ),
        (true, false) => unreachable!("oriented above"),
    };
    let x = ed.add_node(GeneratorKind::XSpider {
        dim,
        n_in: ins.len(),
        n_out: outs.len(),
    });
    let wiring: Vec<(Endpoint, Endpoint)> = ins
        .into_iter()
        .chain(outs)
        .enumerate()
        .map(|(p, e)| (e, Endpoint::port(x, p)))
        .collect();
    ed.splice(&[a, b], &wiring);
}

/// For a Z box `z` and X spider `x`, the X ports (with edges) of the wires
/// that can be removed together: equally many X-input and X-output wires,
/// plus a multiple of `d` from the side with more.
fn hopf_removable(v: &View, z: NodeId, x: NodeId) -> Vec<(usize, usize)> {
    let (dim, n_in, _) = x_arity(v.kind(x));
    let d = dim.get();
    let links = v.links(x, z);
    let ins: Vec<(usize, usize)> = links.iter().filter(|l| l.0 < n_in).map(|l| (l.0, l.2)).collect();
    let outs: Vec<(usize, usize)> = links.iter().filter(|l| l.0 >= n_in).map(|l| (l.0, l.2)).collect();
    let pairs = ins.len().min(outs.len());
    let (more, fewer) = if ins.len() > outs.len() { (&ins, &outs) } else { (&outs, &ins) };
    let extra = (more.len() - pairs) / d * d;
    let mut chosen: Vec<(usize, usize)> = fewer[..pairs].to_vec();
    chosen.extend_from_slice(&more[..pairs + extra]);
    chosen.sort();
    chosen
}

fn find_hopf(v: &View) -> Vec<Match> {
    let mut out = Vec::new();
    let mut seen: BTreeMap<(NodeId, NodeId), ()> = BTreeMap::new();
    for &(p, q) in v.d.edges() {
        for (s, t) in [(p, q), (q, p)] {
            let (Some(z), Some(x)) = (s.node(), t.node()) else { continue };
            if !matches!(v.kind(z), GeneratorKind::ZBox { .. }) || !matches!(v.kind(x), GeneratorKind::XSpider { .. }) {
                continue;
            }
            if seen.insert((z, x), ()).is_some() {
                continue;
            }
            let chosen = hopf_removable(v, z, x);
            if !chosen.is_empty() {
                out.push(Match {
                    rule: RuleId::HopfDisconnect,
                    nodes: vec![z, x],
                    edges: sorted(chosen.iter().map(|c| c.1).collect()),
                });
            }
        }
    }
    out
}

fn rewrite_hopf(v: &View, ed: &mut Editor, m: &Match) {
    let (z, x) = (m.nodes[0], m.nodes[1]);
    let removed = hopf_removable(v, z, x);
    let gone_x: Vec<usize> = removed.iter().map(|r| r.0).collect();
    let gone_z: Vec<usize> = removed
        .iter()
        .map(|r| match v.opposite(Endpoint::port(x, r.0)) {
            Endpoint::Port { port, .. } => port,
            _ => unreachable!("wire between z and x"),
        })
        .collect();

    let kz = v.kind(z);
    let z_min = kz.z_min_dim().unwrap();
    let params = z_params(kz);
    let legs: Vec<(Endpoint, Dim, bool)> = z_legs(kz)
        .into_iter()
        .filter(|l| !gone_z.contains(&l.0))
        .map(|(p, d, i)| (Endpoint::port(z, p), d, i))
        .collect();
    let mut wiring = if legs.is_empty() {
        ed.add_node(GeneratorKind::Scalar((0..z_min).map(|j| params.coeff(j)).sum()));
        Vec::new()
    } else {
        place_z(ed, &legs, |j| if j < z_min { params.coeff(j) } else { ZERO })
    };

    let (dim, n_in, n_out) = x_arity(v.kind(x));
    let keep = |range: std::ops::Range<usize>| -> Vec<usize> { range.filter(|p| !gone_x.contains(p)).collect() };
    let (ins, outs) = (keep(0..n_in), keep(n_in..n_in + n_out));
    if !ins.is_empty() || !outs.is_empty() {
        let nx = ed.add_node(GeneratorKind::XSpider {
            dim,
            n_in: ins.len(),
            n_out: outs.len(),
        });
        wiring.extend(
            ins.iter()
                .chain(&outs)
                .enumerate()
                .map(|(q, &p)| (Endpoint::port(x, p), Endpoint::port(nx, q))),
        );
    }
    ed.splice(&[z, x], &wiring);
}
