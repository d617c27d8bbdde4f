mod common;

use common::*;
use proptest::prelude::*;
use zxw::diagram::{mixed_z_box, mixed_z_box_expanded, ParamVec};
use zxw::random::{random_composable_pair, random_params, RandomConfig};
use zxw::{eval, generator_semantics, Diagram, Endpoint, GeneratorKind, Tensor, C64};

#[test]
fn empty_diagram_is_one() {
    assert_eq!(eval(&Diagram::empty()).unwrap(), Tensor::scalar(c(1.0, 0.0)));
}

#[test]
fn closed_loop_is_dimension() {
    for d in 1..=5 {
        let cap = node(GeneratorKind::Cap { dim: dim(d) });
        let cup = node(GeneratorKind::Cup { dim: dim(d) });
        let t = eval(&Diagram::seq_compose(&cup, &cap).unwrap()).unwrap();
        assert_close(&t, &Tensor::scalar(c(d as f64, 0.0)), 0.0);
    }
}

#[test]
fn splitter_merger_identities() {
    for m in 1..=5 {
        for n in 1..=5 {
            let s = node(GeneratorKind::Splitter { m: dim(m), n: dim(n) });
            let g = node(GeneratorKind::Merger { m: dim(m), n: dim(n) });
            let sm = eval(&Diagram::seq_compose(&s, &g).unwrap()).unwrap();
            assert_close(&sm, &naive_kron(&Tensor::identity(m), &Tensor::identity(n)), 0.0);
            let ms = eval(&Diagram::seq_compose(&g, &s).unwrap()).unwrap();
            assert_close(&ms, &Tensor::identity(m * n), 0.0);
        }
    }
}

#[test]
fn generators_match_oracles() {
    let mut r = rng(11);
    for d in 1..=4 {
        let k = |kind| generator_semantics(&kind);
        assert_close(&k(GeneratorKind::Identity { dim: dim(d) }), &oracle::identity(d), 0.0);
        assert_close(&k(GeneratorKind::Hadamard { dim: dim(d) }), &oracle::hadamard(d), 1e-14);
        assert_close(&k(GeneratorKind::Cap { dim: dim(d) }), &oracle::cap(d), 0.0);
        assert_close(&k(GeneratorKind::Cup { dim: dim(d) }), &oracle::cup(d), 0.0);
        for f in 1..=3 {
            assert_close(&k(GeneratorKind::WNode { dim: dim(d), fanout: f }), &oracle::w(d, f), 0.0);
            assert_close(&k(GeneratorKind::WNodeDagger { dim: dim(d), fanin: f }), &oracle::w(d, f).transpose(), 0.0);
        }
        for (ni, no) in [(0, 1), (1, 1), (2, 1), (1, 2), (2, 2), (3, 0)] {
            assert_close(&k(GeneratorKind::XSpider { dim: dim(d), n_in: ni, n_out: no }), &oracle::x_spider(d, ni, no), 0.0);
        }
        for m in 0..d {
            assert_close(&k(GeneratorKind::multiplier(dim(d), m as i64)), &oracle::multiplier(d, m), 0.0);
        }
        for e in 1..=4 {
            assert_close(&k(GeneratorKind::Swap { m: dim(d), n: dim(e) }), &oracle::swap(d, e), 0.0);
            assert_close(&k(GeneratorKind::Splitter { m: dim(d), n: dim(e) }), &oracle::splitter(d, e), 0.0);
            assert_close(&k(GeneratorKind::Merger { m: dim(d), n: dim(e) }), &oracle::merger(d, e), 0.0);
        }
        for (ins, outs) in [(vec![d], vec![d]), (vec![d, 2], vec![3]), (vec![], vec![d, 4, 2]), (vec![4, d], vec![])] {
            let min = ins.iter().chain(&outs).min().copied().unwrap();
            let p = random_params(&mut r, min - 1);
            let kind = GeneratorKind::ZBox { inputs: dims(&ins), outputs: dims(&outs), params: p.clone() };
            assert_close(&k(kind), &oracle::z_box(&ins, &outs, p.entries()), 0.0);
        }
    }
}

#[test]
fn hadamard_entries_and_determinant() {
    for d in 1..=6 {
        let h = generator_semantics(&GeneratorKind::Hadamard { dim: dim(d) });
        assert_close(&h, &oracle::hadamard(d), 1e-14);
        let det = determinant(&h).norm();
        let expected = (d as f64).powf(d as f64 / 2.0);
        assert!((det - expected).abs() < 1e-9 * expected, "d={d}: |det| {det} vs {expected}");
    }
}

fn determinant(t: &Tensor) -> C64 {
    let n = t.rows();
    let mut a: Vec<Vec<C64>> = (0..n).map(|i| (0..n).map(|j| t.entry(i, j)).collect()).collect();
    let mut det = c(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm())).unwrap();
        if a[pivot][col].norm() == 0.0 {
            return c(0.0, 0.0);
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                let v = a[col][k];
                a[row][k] -= f * v;
            }
        }
    }
    det
}

#[test]
fn tensor_operation_examples() {
    let two = Tensor::scalar(c(2.0, 0.0));
    assert_close(&Tensor::kron(&two, &Tensor::identity(2)), &Tensor::identity(2).scale(c(2.0, 0.0)), 0.0);
    for d in 1..=4 {
        assert_close(&Tensor::identity(d).partial_trace(0, 0).unwrap(), &Tensor::scalar(c(d as f64, 0.0)), 0.0);
    }
    let swap = generator_semantics(&GeneratorKind::Swap { m: dim(2), n: dim(3) });
    let permuted = swap.permute_legs(&[1, 0], &[0, 1]).unwrap();
    assert_close(&permuted, &naive_kron(&Tensor::identity(2), &Tensor::identity(3)), 0.0);
    assert!(Tensor::allclose(&Tensor::identity(3), &Tensor::identity(3), 1e-12));
    let p = Tensor::proportional(&Tensor::identity(2).scale(c(2.0, 0.0)), &Tensor::identity(2), 1e-12).unwrap();
    assert!((p - c(2.0, 0.0)).norm() < 1e-12);
}

#[test]
fn hadamard_squared_is_twice_identity() {
    let h = node(GeneratorKind::Hadamard { dim: dim(2) });
    let hh = eval(&Diagram::seq_compose(&h, &h).unwrap()).unwrap();
    let p = Tensor::proportional(&hh, &Tensor::identity(2), 1e-12).unwrap();
    assert!((p - c(2.0, 0.0)).norm() < 1e-12);
}

#[test]
fn mixed_z_box_matches_expansion() {
    // every ordered tuple of leg dims in 2..=36 with product at most 36
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    let mut all = Vec::new();
    while let Some(t) = tuples.pop() {
        let prod: usize = t.iter().product();
        if !t.is_empty() {
            all.push(t.clone());
        }
        if t.len() < 3 {
            for d in 2..=36 / prod {
                let mut u = t.clone();
                u.push(d);
                tuples.push(u);
            }
        }
    }
    let mut r = rng(5);
    for t in all {
        for split in 0..=t.len() {
            let (ins, outs) = t.split_at(split);
            let min = *t.iter().min().unwrap();
            let p = random_params(&mut r, min - 1);
            let prim = eval(&mixed_z_box(&dims(ins), &dims(outs), p.clone()).unwrap()).unwrap();
            let exp = eval(&mixed_z_box_expanded(&dims(ins), &dims(outs), p.clone()).unwrap()).unwrap();
            assert_close(&prim, &exp, 1e-12);
            assert_close(&prim, &oracle::z_box(ins, outs, p.entries()), 0.0);
        }
    }
}

/// Z box with legs `[1 in] -> [wires out]` joined to an X spider
/// `[wires in] -> [1 out]` by `wires` parallel wires.
fn hopf_pair(d: usize, wires: usize) -> Diagram {
    let z = GeneratorKind::ZBox { inputs: dims(&[d]), outputs: vec![dim(d); wires], params: ParamVec::ones(d - 1) };
    let x = GeneratorKind::XSpider { dim: dim(d), n_in: wires, n_out: 1 };
    let mut edges = vec![(Endpoint::Input(0), Endpoint::port(0, 0)), (Endpoint::port(1, wires), Endpoint::Output(0))];
    edges.extend((0..wires).map(|w| (Endpoint::port(0, 1 + w), Endpoint::port(1, w))));
    Diagram::from_parts(vec![z, x], edges, dims(&[d]), dims(&[d]))
}

fn disconnected(d: usize) -> Tensor {
    // phaseless Z effect then phaseless X state (|0>)
    naive_kron(&oracle::x_spider(d, 0, 1), &oracle::z_box(&[d], &[], &vec![c(1.0, 0.0); d - 1]))
}

#[test]
fn hopf_property() {
    let mut constants = Vec::new();
    for d in 2..=5 {
        let t = eval(&hopf_pair(d, d)).unwrap();
        let lambda = Tensor::proportional(&t, &disconnected(d), 1e-12).expect("d wires disconnect");
        assert!(lambda.norm() > 0.5);
        constants.push(lambda);
        let t = eval(&hopf_pair(d, d - 1)).unwrap();
        assert!(Tensor::proportional(&t, &disconnected(d), 1e-9).is_none(), "d-1 wires must not disconnect (d={d})");
    }
    // the constant does not depend on d
    assert!(constants.iter().all(|l| (l - constants[0]).norm() < 1e-12), "{constants:?}");
    assert!((constants[0] - c(1.0, 0.0)).norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn functoriality(seed in any::<u64>()) {
        let cfg = RandomConfig { max_nodes: 5, ..RandomConfig::default() };
        let (a, b) = random_composable_pair(&mut rng(seed), &cfg);
        let (ea, eb) = (eval(&a).unwrap(), eval(&b).unwrap());
        let seq = eval(&Diagram::seq_compose(&a, &b).unwrap()).unwrap();
        prop_assert!(Tensor::allclose(&seq, &naive_matmul(&ea, &eb), 1e-9));
        let par = eval(&Diagram::par_compose(&a, &b)).unwrap();
        prop_assert!(Tensor::allclose(&par, &naive_kron(&ea, &eb), 1e-9));
    }
}
