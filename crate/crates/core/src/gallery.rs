//! Application diagrams with brute-force oracles: the quantum Fourier
//! transform, a qubit-controlled qudit CNOT, the qubit symmetrizer and the
//! white triangle map.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::diagram::{multi_merger, multi_splitter, permute_wires, power, Diagram, Dim, Endpoint, GeneratorKind, ParamVec};
use crate::error::GalleryError;
use crate::interpret::eval;
use crate::normal_form::synthesize;
use crate::rewrite::{simplify, RewriteTrace};
use crate::tensor::Tensor;

pub const GALLERY_NAMES: [&str; 4] = ["qft", "cnot", "symmetrizer", "triangle"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Exact,
    UpToScalar,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Exact => "exact",
            Comparison::UpToScalar => "up-to-scalar",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GalleryEntry {
    pub name: String,
    pub diagram: Diagram,
    pub oracle: Tensor,
    pub comparison: Comparison,
}

/// Outcome of comparing a gallery diagram with its oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleCheck {
    pub comparison: Comparison,
    pub passed: bool,
    /// `eval(diagram) ≈ scalar * oracle`; exactly 1 for exact comparisons
    /// that pass.
    pub scalar: Option<C64>,
    pub max_deviation: f64,
}

impl fmt::Display for OracleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.comparison, if self.passed { "pass" } else { "FAIL" })?;
        if let (Comparison::UpToScalar, Some(s)) = (self.comparison, self.scalar) {
            write!(f, " (scalar {:.9}{:+.9}i)", s.re, s.im)?;
        }
        write!(f, " (max deviation {:.3e})", self.max_deviation)
    }
}

impl GalleryEntry {
    pub fn check(&self, tol: f64) -> OracleCheck {
        let got = eval(&self.diagram).expect("gallery diagrams are valid");
        match self.comparison {
            Comparison::Exact => {
                let dev = Tensor::max_abs_diff(&got, &self.oracle).unwrap_or(f64::INFINITY);
                OracleCheck {
                    comparison: self.comparison,
                    passed: dev <= tol,
                    scalar: (dev <= tol).then_some(C64::new(1.0, 0.0)),
                    max_deviation: dev,
                }
            }
            Comparison::UpToScalar => {
                let scalar = Tensor::proportional(&got, &self.oracle, tol);
                let dev = scalar
                    .and_then(|s| Tensor::max_abs_diff(&got, &self.oracle.scale(s)))
                    .unwrap_or(f64::INFINITY);
                OracleCheck {
                    comparison: self.comparison,
                    passed: scalar.is_some() && dev <= tol,
                    scalar,
                    max_deviation: dev,
                }
            }
        }
    }
}

fn dim(v: usize) -> Dim {
    Dim::new(v).expect("positive dimension")
}

fn node(kind: GeneratorKind) -> Diagram {
    Diagram::node(kind).expect("valid generator")
}

fn in_range(name: &'static str, value: usize, min: usize, max: usize) -> Result<(), GalleryError> {
    if (min..=max).contains(&value) {
        Ok(())
    } else {
        Err(GalleryError::OutOfRange { name, value, min, max })
    }
}

fn bit_reverse(x: usize, bits: usize) -> usize {
    (0..bits).fold(0, |acc, b| acc | (((x >> b) & 1) << (bits - 1 - b)))
}

/// Merges `n` qubits into one wire, applies the Fourier box on `2^n`, splits
/// back and reverses the wire order. The Fourier box is unnormalized, so the
/// diagram equals the bit-reversed DFT matrix with scalar 1.
pub fn build_qft(n: usize) -> Result<GalleryEntry, GalleryError> {
    in_range("qft", n, 1, 8)?;
    let qubits = vec![dim(2); n];
    let size = 1usize << n;
    let merge = multi_merger(&qubits).expect("qubit legs");
    let split = multi_splitter(&qubits).expect("qubit legs");
    let reverse: Vec<usize> = (0..n).rev().collect();
    let swaps = permute_wires(&qubits, &reverse).expect("permutation");
    let diagram = [node(GeneratorKind::Hadamard { dim: dim(size) }), split, swaps]
        .iter()
        .fold(merge, |acc, layer| Diagram::seq_compose(layer, &acc).expect("signatures agree"));
    let oracle = Tensor::from_fn(vec![2; n], vec![2; n], |r, c| {
        let bits = |v: &[usize]| v.iter().fold(0, |acc, &b| 2 * acc + b);
        let row = bit_reverse(bits(r), n);
        C64::from_polar(1.0, TAU * ((row * bits(c)) % size) as f64 / size as f64)
    });
    Ok(GalleryEntry {
        name: format!("qft({n})"),
        diagram,
        oracle,
        comparison: Comparison::UpToScalar,
    })
}

/// Qubit control on wire 0, qudit target of dimension `d` on wire 1: a Z box
/// copies the control into the qudit space and an X spider adds it.
pub fn build_mixed_cnot(d: usize) -> Result<GalleryEntry, GalleryError> {
    in_range("cnot", d, 2, usize::MAX)?;
    let (q, t) = (dim(2), dim(d));
    let nodes = vec![
        GeneratorKind::ZBox {
            inputs: vec![q],
            outputs: vec![q, t],
            params: ParamVec::ones(1),
        },
        GeneratorKind::XSpider { dim: t, n_in: 2, n_out: 1 },
    ];
    let p = Endpoint::port;
    let edges = vec![
        (Endpoint::Input(0), p(0, 0)),
        (Endpoint::Input(1), p(1, 1)),
        (p(0, 1), Endpoint::Output(0)),
        (p(0, 2), p(1, 0)),
        (p(1, 2), Endpoint::Output(1)),
    ];
    let diagram = Diagram::from_parts(nodes, edges, vec![q, t], vec![q, t]);
    let oracle = Tensor::from_fn(vec![2, d], vec![2, d], |o, i| {
        if o[0] == i[0] && o[1] == (i[1] + i[0]) % d {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    Ok(GalleryEntry {
        name: format!("cnot({d})"),
        diagram,
        oracle,
        comparison: Comparison::Exact,
    })
}

/// Result of composing the mixed CNOT with itself.
#[derive(Clone, Debug, PartialEq)]
pub struct CnotPower {
    pub d: usize,
    pub copies: usize,
    /// The simplifier reached bare identity wires.
    pub identity_by_rewriting: bool,
    /// The composite evaluates to the identity matrix.
    pub identity_semantically: bool,
    pub simplified: Diagram,
    pub trace: RewriteTrace,
}

/// `copies` mixed CNOTs in sequence, simplified.
pub fn cnot_power(d: usize, copies: usize) -> Result<CnotPower, GalleryError> {
    let cnot = build_mixed_cnot(d)?.diagram;
    let composed = power(&cnot, copies).expect("endomorphism");
    let (simplified, trace) = simplify(&composed).expect("valid diagram");
    let got = eval(&composed).expect("valid diagram");
    let id = Tensor::kron(&Tensor::identity(2), &Tensor::identity(d));
    Ok(CnotPower {
        d,
        copies,
        identity_by_rewriting: simplified.is_identity_wires() && simplified.inputs() == composed.inputs(),
        identity_semantically: Tensor::allclose(&got, &id, 1e-12),
        simplified,
        trace,
    })
}

/// `d` mixed CNOTs in sequence, which is the identity.
pub fn cnot_power_identity(d: usize) -> Result<CnotPower, GalleryError> {
    cnot_power(d, d)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k as u64).fold(1, |acc, i| acc * (n as u64 - i) / (i + 1))
}

/// Projector onto the symmetric subspace of `n` qubits. Each qubit is
/// embedded into dimension `n + 1`, an X spider sums them into the Hamming
/// weight `k`, a Z box divides by `C(n, k)`, and the weight is spread back
/// over `n` legs that Z boxes project onto `{0, 1}`.
pub fn build_symmetrizer(n: usize) -> Result<GalleryEntry, GalleryError> {
    in_range("symmetrizer", n, 1, 4)?;
    let (q, w) = (dim(2), dim(n + 1));
    let embed = |inputs: Vec<Dim>, outputs: Vec<Dim>| GeneratorKind::ZBox {
        inputs,
        outputs,
        params: ParamVec::ones(1),
    };
    let weights = ParamVec::new((1..=n).map(|k| C64::new(1.0 / binomial(n, k) as f64, 0.0)).collect());
    let par = |k: GeneratorKind| {
        (0..n).fold(Diagram::identity(&[]), |acc, _| Diagram::par_compose(&acc, &node(k.clone())))
    };
    let layers = [
        par(embed(vec![q], vec![w])),
        node(GeneratorKind::XSpider { dim: w, n_in: n, n_out: 1 }),
        node(GeneratorKind::ZBox {
            inputs: vec![w],
            outputs: vec![w],
            params: weights,
        }),
        node(GeneratorKind::XSpider { dim: w, n_in: 1, n_out: n }),
        par(embed(vec![w], vec![q])),
    ];
    let diagram = layers[1..]
        .iter()
        .fold(layers[0].clone(), |acc, l| Diagram::seq_compose(l, &acc).expect("signatures agree"));
    Ok(GalleryEntry {
        name: format!("symmetrizer({n})"),
        diagram,
        oracle: symmetrizer_oracle(n),
        comparison: Comparison::Exact,
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q = p.clone();
            q.insert(slot, n - 1);
            out.push(q);
        }
    }
    out
}

/// `(1/n!) Σ_σ P_σ` over all permutations of `n` qubits.
pub fn symmetrizer_oracle(n: usize) -> Tensor {
    let perms = permutations(n);
    let weight = 1.0 / perms.len() as f64;
    Tensor::from_fn(vec![2; n], vec![2; n], |o, i| {
        let hits = perms.iter().filter(|s| (0..n).all(|k| o[k] == i[s[k]])).count();
        C64::new(hits as f64 * weight, 0.0)
    })
}

/// `|n> -> Σ_{k ≤ n} C(n, k)^{1/2} |k, n - k>` with one input and two
/// outputs of dimension `d`.
pub fn white_triangle_tensor(d: usize) -> Tensor {
    Tensor::from_fn(vec![d, d], vec![d], |o, i| {
        let n = i[0];
        if o[0] + o[1] == n {
            C64::new((binomial(n, o[0]) as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// The white triangle map realized by synthesis from its tensor.
pub fn build_triangle(d: usize) -> Result<GalleryEntry, GalleryError> {
    in_range("triangle", d, 1, 6)?;
    let oracle = white_triangle_tensor(d);
    Ok(GalleryEntry {
        name: format!("triangle({d})"),
        diagram: synthesize(&oracle),
        oracle,
        comparison: Comparison::Exact,
    })
}

/// Looks up a gallery entry by name. `param` is the qubit count for `qft`
/// and `symmetrizer` and the qudit dimension for `cnot` and `triangle`.
pub fn gallery(name: &str, param: usize) -> Result<GalleryEntry, GalleryError> {
    match name {
        "qft" => build_qft(param),
        "cnot" => build_mixed_cnot(param),
        "symmetrizer" => build_symmetrizer(param),
        "triangle" => build_triangle(param),
        _ => Err(GalleryError::UnknownName {
            name: name.to_string(),
            valid: GALLERY_NAMES.to_vec(),
        }),
    }
}

/// Every gallery entry over its full parameter range.
pub fn all_entries() -> Vec<GalleryEntry> {
    let mut out = Vec::new();
    out.extend((1..=8).map(|n| build_qft(n).expect("in range")));
    out.extend((2..=7).map(|d| build_mixed_cnot(d).expect("in range")));
    out.extend((1..=4).map(|n| build_symmetrizer(n).expect("in range")));
    out.extend((1..=6).map(|d| build_triangle(d).expect("in range")));
    out
}
