//! Constructors for commonly used composite diagrams.

use std::f64::consts::TAU;

use super::{Diagram, Dim, Endpoint, GeneratorKind, ParamVec};
use crate::error::DiagramError;

/// Phased green spider: a uniform-dimension Z box with parameters
/// `e^{i α_j}`. Phases are taken modulo 2π.
pub fn green_spider(dim: Dim, n_in: usize, n_out: usize, alphas: &[f64]) -> Result<Diagram, DiagramError> {
    if alphas.len() != dim.get() - 1 {
        return Err(DiagramError::ParamLength {
            kind: "green_spider",
            expected: dim.get() - 1,
            found: alphas.len(),
        });
    }
    let phases: Vec<f64> = alphas.iter().map(|a| a.rem_euclid(TAU)).collect();
    Diagram::node(GeneratorKind::ZBox {
        inputs: vec![dim; n_in],
        outputs: vec![dim; n_out],
        params: ParamVec::from_phases(&phases),
    })
}

/// Phaseless uniform Z spider.
pub fn z_spider(dim: Dim, n_in: usize, n_out: usize) -> Result<Diagram, DiagramError> {
    green_spider(dim, n_in, n_out, &vec![0.0; dim.get() - 1])
}

/// Primitive mixed-dimensional Z box.
pub fn mixed_z_box(in_dims: &[Dim], out_dims: &[Dim], params: ParamVec) -> Result<Diagram, DiagramError> {
    Diagram::node(GeneratorKind::z_box(in_dims.to_vec(), out_dims.to_vec(), params)?)
}

/// The mixed Z box built from a single Z box of dimension `d = ∏ d_i`:
/// each leg is embedded into dimension `d` by merging it with a `|0>`
/// ancilla, and the padded parameters `(a_1, ..., a_{min-1}, 0, ..., 0)`
/// act on the big wire.
pub fn mixed_z_box_expanded(in_dims: &[Dim], out_dims: &[Dim], params: ParamVec) -> Result<Diagram, DiagramError> {
    // Validates the parameter length.
    GeneratorKind::z_box(in_dims.to_vec(), out_dims.to_vec(), params.clone())?;
    let big: usize = in_dims.iter().chain(out_dims).map(|d| d.get()).product();
    let big_dim = Dim::new(big)?;
    let mut padded = params.entries().to_vec();
    padded.resize(big - 1, 0.0.into());

    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let center = 0;
    nodes.push(GeneratorKind::ZBox {
        inputs: vec![big_dim; in_dims.len()],
        outputs: vec![big_dim; out_dims.len()],
        params: ParamVec::new(padded),
    });
    for (i, &leg) in in_dims.iter().enumerate() {
        let anc = Dim::new(big / leg.get())?;
        let state = nodes.len();
        nodes.push(GeneratorKind::XSpider { dim: anc, n_in: 0, n_out: 1 });
        let merger = nodes.len();
        nodes.push(GeneratorKind::Merger { m: anc, n: leg });
        edges.push((Endpoint::port(state, 0), Endpoint::port(merger, 0)));
        edges.push((Endpoint::Input(i), Endpoint::port(merger, 1)));
        edges.push((Endpoint::port(merger, 2), Endpoint::port(center, i)));
    }
    for (k, &leg) in out_dims.iter().enumerate() {
        let anc = Dim::new(big / leg.get())?;
        let splitter = nodes.len();
        nodes.push(GeneratorKind::Splitter { m: anc, n: leg });
        let effect = nodes.len();
        nodes.push(GeneratorKind::XSpider { dim: anc, n_in: 1, n_out: 0 });
        edges.push((Endpoint::port(center, in_dims.len() + k), Endpoint::port(splitter, 0)));
        edges.push((Endpoint::port(splitter, 1), Endpoint::port(effect, 0)));
        edges.push((Endpoint::port(splitter, 2), Endpoint::Output(k)));
    }
    Ok(Diagram {
        nodes,
        edges,
        inputs: in_dims.to_vec(),
        outputs: out_dims.to_vec(),
    })
}

/// Right-nested chain of binary splitters from `∏ dims` into `dims`.
pub fn multi_splitter(dims: &[Dim]) -> Result<Diagram, DiagramError> {
    match dims {
        [] => Err(DiagramError::InvalidGenerator("multi_splitter needs at least one leg".into())),
        [d] => Ok(Diagram::identity(&[*d])),
        [first, rest @ ..] => {
            let rest_dim = Dim::new(rest.iter().map(|d| d.get()).product())?;
            let head = Diagram::node(GeneratorKind::Splitter { m: *first, n: rest_dim })?;
            let tail = Diagram::par_compose(&Diagram::identity(&[*first]), &multi_splitter(rest)?);
            Diagram::seq_compose(&tail, &head)
        }
    }
}

/// Right-nested chain of binary mergers from `dims` into `∏ dims`.
pub fn multi_merger(dims: &[Dim]) -> Result<Diagram, DiagramError> {
    match dims {
        [] => Err(DiagramError::InvalidGenerator("multi_merger needs at least one leg".into())),
        [d] => Ok(Diagram::identity(&[*d])),
        [first, rest @ ..] => {
            let rest_dim = Dim::new(rest.iter().map(|d| d.get()).product())?;
            let head = Diagram::node(GeneratorKind::Merger { m: *first, n: rest_dim })?;
            let tail = Diagram::par_compose(&Diagram::identity(&[*first]), &multi_merger(rest)?);
            Diagram::seq_compose(&head, &tail)
        }
    }
}

/// Left-nested chain of binary mergers; equal to [`multi_merger`] by
/// associativity.
pub fn multi_merger_left(dims: &[Dim]) -> Result<Diagram, DiagramError> {
    match dims {
        [] => Err(DiagramError::InvalidGenerator("multi_merger needs at least one leg".into())),
        [d] => Ok(Diagram::identity(&[*d])),
        [init @ .., last] => {
            let init_dim = Dim::new(init.iter().map(|d| d.get()).product())?;
            let head = Diagram::node(GeneratorKind::Merger { m: init_dim, n: *last })?;
            let tail = Diagram::par_compose(&multi_merger_left(init)?, &Diagram::identity(&[*last]));
            Diagram::seq_compose(&head, &tail)
        }
    }
}

/// A network of adjacent swaps with output `k` carrying input `perm[k]`.
pub fn permute_wires(dims: &[Dim], perm: &[usize]) -> Result<Diagram, DiagramError> {
    let n = dims.len();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(DiagramError::InvalidGenerator(format!("{perm:?} is not a permutation of {n} wires")));
    }
    // target[w] = final position of input wire w
    let mut target = vec![0; n];
    for (k, &w) in perm.iter().enumerate() {
        target[w] = k;
    }
    let mut current: Vec<usize> = (0..n).collect();
    let mut diagram = Diagram::identity(dims);
    loop {
        let Some(p) = (0..n.saturating_sub(1)).find(|&p| target[current[p]] > target[current[p + 1]]) else {
            break;
        };
        let wire_dims: Vec<Dim> = current.iter().map(|&w| dims[w]).collect();
        let layer = Diagram::par_compose(
            &Diagram::par_compose(
                &Diagram::identity(&wire_dims[..p]),
                &Diagram::node(GeneratorKind::Swap { m: wire_dims[p], n: wire_dims[p + 1] })?,
            ),
            &Diagram::identity(&wire_dims[p + 2..]),
        );
        diagram = Diagram::seq_compose(&layer, &diagram)?;
        current.swap(p, p + 1);
    }
    Ok(diagram)
}

/// Sequentially composes `diagram` with itself `times` times.
pub fn power(diagram: &Diagram, times: usize) -> Result<Diagram, DiagramError> {
    let mut acc = Diagram::identity(diagram.inputs());
    for _ in 0..times {
        acc = Diagram::seq_compose(diagram, &acc)?;
    }
    Ok(acc)
}
