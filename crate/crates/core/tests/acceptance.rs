//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails.

mod common;

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use common::*;
use num_complex::Complex64 as C64;
use rand::Rng;
use zxw::diagram::{green_spider, mixed_z_box, mixed_z_box_expanded, multi_splitter};
use zxw::gallery::{
    all_entries, build_mixed_cnot, build_qft, build_symmetrizer, build_triangle, cnot_power, cnot_power_identity,
    symmetrizer_oracle, white_triangle_tensor, Comparison,
};
use zxw::io::{from_json, to_json};
use zxw::normal_form::{nf_equal, nf_partial_trace, nf_tensor_product, NormalForm};
use zxw::random::{random_composable_pair, random_diagram, random_dims, random_params, random_same_signature, random_tensor, RandomConfig};
use zxw::rewrite::{check_corrupted_fuse_z, check_rule_soundness, RuleId};
use zxw::{eval, generator_semantics, normalize, synthesize, Diagram, Endpoint, GeneratorKind, ParamVec, Tensor};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn deviation(a: &Tensor, b: &Tensor) -> f64 {
    Tensor::max_abs_diff(a, b).unwrap_or(f64::INFINITY)
}

fn check_exact(what: &str, got: &Tensor, want: &Tensor, tol: f64) -> Result<(), String> {
    let dev = deviation(got, want);
    ensure(dev <= tol, || format!("{what}: deviation {dev:e} > {tol:e}"))
}

/// Criterion 1.
fn generator_semantics_exact() -> Outcome {
    const TOL: f64 = 1e-14;
    let mut r = rng(1);
    let mut checked = 0;
    let k = |kind| generator_semantics(&kind);
    for d in 1..=5 {
        let dd = dim(d);
        check_exact("identity", &k(GeneratorKind::Identity { dim: dd }), &oracle::identity(d), 0.0)?;
        check_exact("cap", &k(GeneratorKind::Cap { dim: dd }), &oracle::cap(d), 0.0)?;
        check_exact("cup", &k(GeneratorKind::Cup { dim: dd }), &oracle::cup(d), 0.0)?;
        let h = k(GeneratorKind::Hadamard { dim: dd });
        check_exact("hadamard", &h, &oracle::hadamard(d), TOL)?;
        for z in h.data() {
            ensure((z.norm() - 1.0).abs() <= TOL && (z.powu(d as u32) - 1.0).norm() <= 1e-13, || {
                format!("hadamard({d}) entry {z} is not a d-th root of unity")
            })?;
        }
        for f in 1..=3 {
            check_exact("w", &k(GeneratorKind::WNode { dim: dd, fanout: f }), &oracle::w(d, f), 0.0)?;
            check_exact("w-dagger", &k(GeneratorKind::WNodeDagger { dim: dd, fanin: f }), &oracle::w(d, f).transpose(), 0.0)?;
        }
        for (ni, no) in [(0, 1), (1, 0), (1, 1), (2, 1), (1, 2), (2, 2)] {
            check_exact("x", &k(GeneratorKind::XSpider { dim: dd, n_in: ni, n_out: no }), &oracle::x_spider(d, ni, no), 0.0)?;
        }
        for m in 0..d {
            check_exact("multiplier", &k(GeneratorKind::multiplier(dd, m as i64)), &oracle::multiplier(d, m), 0.0)?;
        }
        for e in 1..=5 {
            let de = dim(e);
            check_exact("swap", &k(GeneratorKind::Swap { m: dd, n: de }), &oracle::swap(d, e), 0.0)?;
            check_exact("splitter", &k(GeneratorKind::Splitter { m: dd, n: de }), &oracle::splitter(d, e), 0.0)?;
            check_exact("merger", &k(GeneratorKind::Merger { m: dd, n: de }), &oracle::merger(d, e), 0.0)?;
            checked += 3;
        }
        // green spider with phases e^{iα_j}
        for (ni, no) in [(0, 2), (1, 1), (2, 1), (1, 3)] {
            let alphas: Vec<f64> = (1..d).map(|_| r.gen_range(-7.0..7.0)).collect();
            let a: Vec<C64> = alphas.iter().map(|&x| C64::from_polar(1.0, x)).collect();
            let got = eval(&green_spider(dd, ni, no, &alphas).unwrap()).unwrap();
            check_exact("green spider", &got, &oracle::z_box(&vec![d; ni], &vec![d; no], &a), TOL)?;
        }
        checked += 20 + d;
    }
    // multi-leg splitter: k = Σ_j e_j Π_j, Π_j the product of the later dims
    for legs in [vec![2, 3], vec![3, 2, 2], vec![5, 1, 4], vec![2, 2, 2, 3], vec![4, 5]] {
        let total: usize = legs.iter().product();
        let strides: Vec<usize> = (0..legs.len()).map(|j| legs[j + 1..].iter().product()).collect();
        let want = Tensor::from_fn(legs.clone(), vec![total], |o, i| {
            let k: usize = o.iter().zip(&strides).map(|(e, p)| e * p).sum();
            c(if k == i[0] { 1.0 } else { 0.0 }, 0.0)
        });
        check_exact("multi splitter", &eval(&multi_splitter(&dims(&legs)).unwrap()).unwrap(), &want, 0.0)?;
        checked += 1;
    }
    // mixed Z box, as a generator and in expanded form
    for (ins, outs) in [(vec![5], vec![3]), (vec![2, 5], vec![4]), (vec![], vec![3, 5, 4]), (vec![4, 5], vec![]), (vec![5, 5], vec![5])] {
        let min = ins.iter().chain(&outs).min().copied().unwrap();
        let p = random_params(&mut r, min - 1);
        let want = oracle::z_box(&ins, &outs, p.entries());
        let kind = GeneratorKind::ZBox { inputs: dims(&ins), outputs: dims(&outs), params: p.clone() };
        check_exact("z box", &k(kind), &want, 0.0)?;
        check_exact("mixed z box", &eval(&mixed_z_box(&dims(&ins), &dims(&outs), p.clone()).unwrap()).unwrap(), &want, TOL)?;
        let expanded = mixed_z_box_expanded(&dims(&ins), &dims(&outs), p).unwrap();
        check_exact("mixed z box (expanded)", &eval(&expanded).unwrap(), &want, TOL)?;
        checked += 3;
    }
    Ok(format!("{checked} generator instances, dims 1..=5, tol {TOL:e}"))
}

/// Criterion 2.
fn functoriality() -> Outcome {
    const TOL: f64 = 1e-9;
    let cfg = RandomConfig::default();
    let mut r = rng(2);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let (a, b) = random_composable_pair(&mut r, &cfg);
        let seq = eval(&Diagram::seq_compose(&a, &b).unwrap()).unwrap();
        let (ta, tb) = (eval(&a).unwrap(), eval(&b).unwrap());
        let dev = deviation(&seq, &naive_matmul(&ta, &tb));
        ensure(dev <= TOL, || format!("pair {i}: sequential deviation {dev:e}"))?;
        worst = worst.max(dev);
        let c = random_diagram(&mut r, &cfg);
        let par = eval(&Diagram::par_compose(&a, &c)).unwrap();
        let dev = deviation(&par, &naive_kron(&ta, &eval(&c).unwrap()));
        ensure(dev <= TOL, || format!("pair {i}: parallel deviation {dev:e}"))?;
        worst = worst.max(dev);
    }
    Ok(format!("200 pairs, max deviation {worst:.1e}, tol {TOL:e}"))
}

/// Criterion 3.
fn rule_soundness() -> Outcome {
    const TOL: f64 = 1e-10;
    let dims = dims(&[2, 3, 4, 5]);
    let mut worst: f64 = 0.0;
    for rule in RuleId::ALL {
        let rep = check_rule_soundness(rule, &dims, 100, 3);
        ensure(rep.mechanized && rep.samples == 100, || format!("{}: {} samples", rep.rule, rep.samples))?;
        ensure(rep.all_passed() && rep.max_deviation <= TOL, || {
            format!("{}: {} failures, max deviation {:e}", rep.rule, rep.failed, rep.max_deviation)
        })?;
        worst = worst.max(rep.max_deviation);
    }
    let neg = check_corrupted_fuse_z(&dims, 100, 3);
    ensure(!neg.all_passed(), || "corrupted fuse-z was not rejected".into())?;
    Ok(format!(
        "{} rules x 100 samples, max deviation {worst:.1e}, corrupted fuse-z failed {}/{}",
        RuleId::ALL.len(),
        neg.failed,
        neg.samples
    ))
}

/// Criterion 4.
fn normal_form_completeness() -> Outcome {
    const TOL: f64 = 1e-9;
    let cfg = RandomConfig { max_dim: 4, max_nodes: 6, ..RandomConfig::default() };
    let mut r = rng(4);
    let (mut equal, mut unequal, mut disagreements) = (0, 0, 0);
    for _ in 0..100 {
        let a = random_diagram(&mut r, &cfg);
        let b = random_same_signature(&mut r, &a);
        let by_nf = nf_equal(&normalize(&a).unwrap(), &normalize(&b).unwrap(), TOL);
        let by_eval = Tensor::allclose(&eval(&a).unwrap(), &eval(&b).unwrap(), TOL);
        if by_nf != by_eval {
            disagreements += 1;
        }
        if by_eval { equal += 1 } else { unequal += 1 }
    }
    ensure(disagreements == 0, || format!("{disagreements} disagreements"))?;
    ensure(equal > 0 && unequal > 0, || format!("degenerate sample: {equal} equal, {unequal} unequal"))?;
    Ok(format!("100 pairs ({equal} equal, {unequal} unequal), 0 disagreements, tol {TOL:e}"))
}

/// Criterion 5.
fn synthesis_round_trip() -> Outcome {
    const TOL: f64 = 1e-12;
    let mut r = rng(5);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let out = random_dims(&mut r, 4, 64);
        let room = 64 / out.iter().product::<usize>();
        let inp = if r.gen_bool(0.3) { vec![] } else { random_dims(&mut r, 4, room) };
        let t = random_tensor(&mut r, out, inp);
        let dev = deviation(&eval(&synthesize(&t)).unwrap(), &t);
        ensure(dev <= TOL, || format!("tensor {i} {:?}<-{:?}: deviation {dev:e}", t.out_dims(), t.in_dims()))?;
        worst = worst.max(dev);
    }
    Ok(format!("200 tensors, total dimension <= 64, max deviation {worst:.1e}, tol {TOL:e}"))
}

fn trace_oracle(ds: &[usize], coeffs: &[C64], s: usize, t: usize) -> Vec<C64> {
    let rest: Vec<usize> = (0..ds.len()).filter(|&i| i != s && i != t).collect();
    let mut out = vec![c(0.0, 0.0); rest.iter().map(|&i| ds[i]).product()];
    for (k, &a) in coeffs.iter().enumerate() {
        let mut digits = vec![0; ds.len()];
        let mut x = k;
        for i in (0..ds.len()).rev() {
            digits[i] = x % ds[i];
            x /= ds[i];
        }
        if digits[s] == digits[t] {
            let idx = rest.iter().fold(0, |acc, &i| acc * ds[i] + digits[i]);
            out[idx] += a;
        }
    }
    out
}

fn random_nf<R: Rng>(r: &mut R, ds: Vec<usize>) -> NormalForm {
    NormalForm::from_state(&random_tensor(r, ds, vec![])).unwrap()
}

/// Criterion 6.
fn coefficient_operations() -> Outcome {
    const TOL: f64 = 1e-10;
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let (da, db) = (random_dims(&mut r, 4, 16), random_dims(&mut r, 4, 16));
        let (a, b) = (random_nf(&mut r, da), random_nf(&mut r, db));
        let got = nf_tensor_product(&a, &b).to_tensor();
        let dev = deviation(&got, &naive_kron(&a.to_tensor(), &b.to_tensor()));
        ensure(dev <= TOL, || format!("product {i}: deviation {dev:e}"))?;
        worst = worst.max(dev);
    }
    let mut traced = 0;
    while traced < 100 {
        let mut ds = random_dims(&mut r, 4, 128);
        if ds.len() < 2 {
            continue;
        }
        let s = r.gen_range(0..ds.len());
        let t = (s + r.gen_range(1..ds.len())) % ds.len();
        ds[t] = ds[s];
        if ds.iter().product::<usize>() > 256 {
            continue;
        }
        let a = random_nf(&mut r, ds.clone());
        let got = nf_partial_trace(&a, s, t).unwrap();
        let want = trace_oracle(&ds, a.coeffs(), s, t);
        let dev = got.coeffs().iter().zip(&want).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        ensure(got.coeffs().len() == want.len() && dev <= TOL, || format!("trace {traced} over {ds:?} ({s},{t}): deviation {dev:e}"))?;
        worst = worst.max(dev);
        traced += 1;
    }
    Ok(format!("100 products, 100 partial traces, max deviation {worst:.1e}, tol {TOL:e}"))
}

/// Criterion 7.
fn mixed_cnot() -> Outcome {
    for d in 2..=7 {
        let e = build_mixed_cnot(d).unwrap();
        let want = Tensor::from_fn(vec![2, d], vec![2, d], |o, i| {
            c(if o[0] == i[0] && o[1] == (i[1] + i[0]) % d { 1.0 } else { 0.0 }, 0.0)
        });
        check_exact(&format!("cnot({d})"), &eval(&e.diagram).unwrap(), &want, 0.0)?;
    }
    for d in 2..=5 {
        let p = cnot_power_identity(d).unwrap();
        ensure(p.identity_by_rewriting, || format!("cnot({d})^{d} not reduced to identity wires"))?;
        let neg = cnot_power(d, d - 1).unwrap();
        ensure(!neg.identity_by_rewriting && !neg.identity_semantically, || format!("cnot({d})^{} accepted as identity", d - 1))?;
    }
    Ok("exact for d=2..7; d-th power rewrites to identity and (d-1)-th is rejected for d=2..5".into())
}

fn bit_reverse(x: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| (acc << 1) | ((x >> b) & 1))
}

/// Criterion 8. With the unnormalized Hadamard the realization equals the
/// unnormalized bit-reversed DFT, so λ = 1 and the unitary QFT is
/// 2^{-n/2} times the diagram.
fn qft() -> Outcome {
    const TOL: f64 = 1e-9;
    let mut lambdas = Vec::new();
    for n in 1..=3 {
        let size = 1usize << n;
        let e = build_qft(n).unwrap();
        let want = Tensor::from_fn(vec![2; n], vec![2; n], |o, i| {
            let (r, col) = (o.iter().fold(0, |a, &b| 2 * a + b), i.iter().fold(0, |a, &b| 2 * a + b));
            let phase = std::f64::consts::TAU * ((bit_reverse(r, n) * col) % size) as f64 / size as f64;
            C64::from_polar(1.0, phase)
        });
        let got = eval(&e.diagram).unwrap();
        let lambda = Tensor::proportional(&got, &want, TOL).ok_or_else(|| format!("qft({n}) not proportional"))?;
        ensure((lambda.norm() - 1.0).abs() <= TOL, || format!("qft({n}): |λ| = {}", lambda.norm()))?;
        lambdas.push(lambda);
    }
    let shown: Vec<String> = lambdas.iter().map(|l| format!("{:.3}", l.norm())).collect();
    Ok(format!("n=1..3 proportional, |λ| = [{}], tol {TOL:e}", shown.join(", ")))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Criterion 9.
fn symmetrizer() -> Outcome {
    const TOL: f64 = 1e-9;
    for n in 1..=4 {
        let perms = permutations(n);
        let want = Tensor::from_fn(vec![2; n], vec![2; n], |o, i| {
            let hits = perms.iter().filter(|s| (0..n).all(|k| o[s[k]] == i[k])).count();
            c(hits as f64 / perms.len() as f64, 0.0)
        });
        check_exact(&format!("symmetrizer oracle({n})"), &symmetrizer_oracle(n), &want, 1e-15)?;
        let e = build_symmetrizer(n).unwrap();
        check_exact(&format!("symmetrizer({n})"), &eval(&e.diagram).unwrap(), &want, TOL)?;
        check_exact(&format!("symmetrizer({n})^2"), &naive_matmul(&want, &want), &want, 1e-12)?;
        let rk = rank(&want, 1e-9);
        ensure(rk == n + 1, || format!("symmetrizer({n}) has rank {rk}"))?;
    }
    Ok(format!("n=1..4 within {TOL:e}, idempotent, rank n+1"))
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Criterion 10.
fn white_triangle() -> Outcome {
    const TOL: f64 = 1e-12;
    for d in 1..=6 {
        let want = Tensor::from_fn(vec![d, d], vec![d], |o, i| {
            let n = i[0];
            c(if o[0] + o[1] == n { (binomial(n, o[0]) as f64).sqrt() } else { 0.0 }, 0.0)
        });
        check_exact(&format!("triangle tensor({d})"), &white_triangle_tensor(d), &want, 0.0)?;
        let e = build_triangle(d).unwrap();
        ensure(e.comparison == Comparison::Exact, || "triangle compared up to scalar".into())?;
        check_exact(&format!("triangle({d})"), &eval(&e.diagram).unwrap(), &want, 1e-14)?;
        let nf = normalize(&e.diagram).unwrap();
        let direct = NormalForm::from_state(&want.to_state()).unwrap();
        ensure(nf_equal(&nf, &direct, TOL), || format!("triangle({d}) NF coefficients differ"))?;
        let back = normalize(&synthesize(&nf.to_tensor())).unwrap();
        ensure(nf_equal(&back, &nf, TOL), || format!("triangle({d}) NF round trip differs"))?;
    }
    Ok(format!("d=1..6 exact, NF round trip within {TOL:e}"))
}

fn hopf_pair(d: usize, wires: usize) -> Diagram {
    let z = GeneratorKind::ZBox { inputs: dims(&[d]), outputs: vec![dim(d); wires], params: ParamVec::ones(d - 1) };
    let x = GeneratorKind::XSpider { dim: dim(d), n_in: wires, n_out: 1 };
    let mut edges = vec![(Endpoint::Input(0), Endpoint::port(0, 0)), (Endpoint::port(1, wires), Endpoint::Output(0))];
    edges.extend((0..wires).map(|w| (Endpoint::port(0, 1 + w), Endpoint::port(1, w))));
    Diagram::from_parts(vec![z, x], edges, dims(&[d]), dims(&[d]))
}

/// Criterion 11.
fn hopf() -> Outcome {
    let mut constants = Vec::new();
    for d in 2..=5 {
        let apart = naive_kron(&oracle::x_spider(d, 0, 1), &oracle::z_box(&[d], &[], &vec![c(1.0, 0.0); d - 1]));
        let lambda = Tensor::proportional(&eval(&hopf_pair(d, d)).unwrap(), &apart, 1e-12)
            .ok_or_else(|| format!("d={d}: d wires do not disconnect"))?;
        constants.push(format!("{:.3}", lambda.re));
        let fewer = eval(&hopf_pair(d, d - 1)).unwrap();
        ensure(Tensor::proportional(&fewer, &apart, 1e-9).is_none(), || format!("d={d}: d-1 wires disconnect"))?;
    }
    Ok(format!("d=2..5 disconnect with constant [{}]; d-1 wires do not", constants.join(", ")))
}

/// Criterion 12.
fn cli() -> Outcome {
    let mut r = rng(12);
    let entries = all_entries();
    for e in &entries {
        let back = from_json(&to_json(&e.diagram)).map_err(|x| x.to_string())?;
        ensure(back.structurally_eq(&e.diagram), || format!("{} does not round trip", e.name))?;
    }
    for i in 0..100 {
        let d = random_diagram(&mut r, &RandomConfig::default());
        let back = from_json(&to_json(&d)).map_err(|x| x.to_string())?;
        ensure(back.structurally_eq(&d), || format!("random diagram {i} does not round trip"))?;
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, text: String| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    };
    let id2 = write("id2.json", to_json(&Diagram::identity(&dims(&[2]))));
    let id3 = write("id3.json", to_json(&Diagram::identity(&dims(&[3]))));
    let bell = write("bell.json", to_json(&node(GeneratorKind::Cap { dim: dim(2) })));
    let zero = node(GeneratorKind::XSpider { dim: dim(2), n_in: 0, n_out: 1 });
    let zz = write("zz.json", to_json(&Diagram::par_compose(&zero, &zero)));
    let broken = write("broken.json", "{ not json".into());
    let dangling = write("dangling.json", r#"{"version":"1","inputs":[2],"outputs":[],"nodes":[],"edges":[]}"#.into());
    let cases: [(&[&str], i32); 6] = [
        (&["equal", &id2, &id2], 0),
        (&["equal", &bell, &zz], 1),
        (&["eval", &broken], 2),
        (&["gallery", "nope"], 2),
        (&["eval", &dangling], 3),
        (&["equal", &id2, &id3], 4),
    ];
    for (args, want) in cases {
        let out = Command::new(env!("CARGO_BIN_EXE_zxw")).args(args).output().map_err(|e| e.to_string())?;
        let code = out.status.code();
        ensure(code == Some(want), || format!("zxw {args:?} exited {code:?}, expected {want}"))?;
    }
    Ok(format!("{} gallery entries + 100 random diagrams round trip; exit codes 0-4 observed", entries.len()))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "generator semantics", budget: secs(1), run: generator_semantics_exact },
        Criterion { name: "functoriality", budget: secs(10), run: functoriality },
        Criterion { name: "rule soundness", budget: secs(30), run: rule_soundness },
        Criterion { name: "normal-form completeness", budget: secs(60), run: normal_form_completeness },
        Criterion { name: "synthesis round trip", budget: secs(60), run: synthesis_round_trip },
        Criterion { name: "coefficient operations", budget: secs(10), run: coefficient_operations },
        Criterion { name: "mixed cnot", budget: secs(10), run: mixed_cnot },
        Criterion { name: "qft", budget: secs(5), run: qft },
        Criterion { name: "symmetrizer", budget: secs(5), run: symmetrizer },
        Criterion { name: "white triangle", budget: secs(2), run: white_triangle },
        Criterion { name: "hopf", budget: secs(2), run: hopf },
        Criterion { name: "cli", budget: secs(10), run: cli },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let took = start.elapsed();
        let result = result.and_then(|d| {
            if took <= c.budget { Ok(d) } else { Err(format!("{d}; over the {:?} budget", c.budget)) }
        });
        let (status, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        println!("criterion {} [{}]: {status} ({detail}, {:.3}s)", i + 1, c.name, took.as_secs_f64());
        failures += result.is_err() as usize;
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
