//! The canonical coefficient normal form.
//!
//! A state on legs `(m_{s-1}, ..., m_0)` is the vector `Σ_k a_k |e_k>` where
//! `e_k` is the mixed-radix expansion of `k`, most significant digit on the
//! leftmost leg. Maps are bent to states first (see [`Diagram::to_state`]).

use std::fmt;

use num_complex::Complex64 as C64;

use crate::diagram::{raw, Diagram, Dim, Endpoint, GeneratorKind, ParamVec};
use crate::error::{DiagramError, NormalFormError};
use crate::interpret::eval;
use crate::tensor::{ravel, unravel, Tensor};

/// Coefficients with smaller magnitude are stored as exact zeros.
pub const ZERO_CUTOFF: f64 = 1e-14;

/// Mixed-radix digits of an index, most significant first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexDigits {
    pub dims: Vec<usize>,
    pub digits: Vec<usize>,
}

pub fn digits(k: usize, dims: &[Dim]) -> Result<IndexDigits, NormalFormError> {
    let dims = raw(dims);
    let total: usize = dims.iter().product();
    if k >= total {
        return Err(NormalFormError::IndexOutOfRange { index: k, dims });
    }
    Ok(IndexDigits {
        digits: unravel(k, &dims),
        dims,
    })
}

pub fn recompose(d: &IndexDigits) -> usize {
    ravel(&d.digits, &d.dims)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm {
    out_dims: Vec<Dim>,
    coeffs: Vec<C64>,
}

impl NormalForm {
    pub fn new(out_dims: Vec<Dim>, coeffs: Vec<C64>) -> Result<Self, NormalFormError> {
        let total: usize = out_dims.iter().map(|d| d.get()).product();
        if coeffs.len() != total {
            return Err(NormalFormError::CoeffLength {
                found: coeffs.len(),
                dims: raw(&out_dims),
            });
        }
        Ok(NormalForm { out_dims, coeffs })
    }

    /// Reads the normal form off a state tensor.
    pub fn from_state(t: &Tensor) -> Result<Self, NormalFormError> {
        if !t.in_dims().is_empty() {
            return Err(NormalFormError::NotAState);
        }
        let out_dims = t.out_dims().iter().map(|&d| Dim::new(d).expect("tensor dims are positive")).collect();
        Ok(NormalForm {
            out_dims,
            coeffs: t.data().to_vec(),
        })
    }

    pub fn out_dims(&self) -> &[Dim] {
        &self.out_dims
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn to_tensor(&self) -> Tensor {
        Tensor::state(raw(&self.out_dims), self.coeffs.clone()).expect("length checked at construction")
    }
}

pub(crate) fn fmt_complex(c: C64) -> String {
    // Adding 0.0 turns -0.0 into 0.0.
    format!("{}{:+}i", c.re + 0.0, c.im + 0.0)
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.out_dims.iter().map(|d| d.to_string()).collect();
        let coeffs: Vec<String> = self.coeffs.iter().map(|&c| fmt_complex(c)).collect();
        write!(f, "dims: ({}), coeffs: ({})", dims.join(", "), coeffs.join(", "))
    }
}

/// Normal form of a diagram: bend it to a state, evaluate and read off the
/// coefficients.
pub fn normalize(d: &Diagram) -> Result<NormalForm, DiagramError> {
    let t = eval(&d.to_state())?;
    Ok(NormalForm::from_state(&t).expect("bent diagram is a state"))
}

/// Exact (not projective) equality of normal forms.
pub fn nf_equal(a: &NormalForm, b: &NormalForm, tol: f64) -> bool {
    a.out_dims == b.out_dims && first_difference(a, b, tol).is_none()
}

/// First coefficient index where the two normal forms differ by more than
/// `tol`. Normal forms on different dimensions differ at index 0.
pub fn first_difference(a: &NormalForm, b: &NormalForm, tol: f64) -> Option<usize> {
    if a.out_dims != b.out_dims {
        return Some(0);
    }
    a.coeffs.iter().zip(&b.coeffs).position(|(x, y)| (x - y).norm() > tol)
}

pub fn nf_tensor_product(a: &NormalForm, b: &NormalForm) -> NormalForm {
    let mut out_dims = a.out_dims.clone();
    out_dims.extend(&b.out_dims);
    let coeffs = a.coeffs.iter().flat_map(|&x| b.coeffs.iter().map(move |&y| x * y)).collect();
    NormalForm { out_dims, coeffs }
}

/// Contracts legs `s` and `t` against each other: the surviving coefficient
/// is the sum of the old ones whose digits agree on `s` and `t`.
pub fn nf_partial_trace(a: &NormalForm, s: usize, t: usize) -> Result<NormalForm, NormalFormError> {
    let n = a.out_dims.len();
    let bad = |reason: &str| NormalFormError::BadTrace {
        s,
        t,
        reason: reason.to_string(),
    };
    if s == t {
        return Err(bad("legs must differ"));
    }
    if s >= n || t >= n {
        return Err(bad("leg out of range"));
    }
    if a.out_dims[s] != a.out_dims[t] {
        return Err(bad("legs have different dimensions"));
    }
    let dims = raw(&a.out_dims);
    let keep: Vec<usize> = (0..n).filter(|&i| i != s && i != t).collect();
    let new_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
    let mut coeffs = vec![C64::new(0.0, 0.0); new_dims.iter().product()];
    for (k, &c) in a.coeffs.iter().enumerate() {
        let e = unravel(k, &dims);
        if e[s] == e[t] {
            let rest: Vec<usize> = keep.iter().map(|&i| e[i]).collect();
            coeffs[ravel(&rest, &new_dims)] += c;
        }
    }
    Ok(NormalForm {
        out_dims: keep.iter().map(|&i| a.out_dims[i]).collect(),
        coeffs,
    })
}

/// Builds the normal-form diagram of a tensor. Maps are bent to states,
/// synthesized, and bent back, so the result has the tensor's signature.
pub fn synthesize(t: &Tensor) -> Diagram {
    if t.in_dims().is_empty() {
        synthesize_state(t)
    } else {
        synthesize_state(&t.to_state())
            .state_to_map(t.in_dims().len())
            .expect("bent state has enough outputs")
    }
}

fn dim(v: usize) -> Dim {
    Dim::new(v).expect("positive dimension")
}

/// Normal-form layout of a state on legs `m`:
///
/// * a `|1>` on a qubit wire (Hadamard applied to `|0> - |1>`, halved),
/// * a chain of binary W nodes giving one qubit branch per nonzero `a_k`,
/// * on branch `k`, a Z box `[2] -> legs with e_{k,i} != 0` carrying `a_k`,
///   followed by a multiplier by `e_{k,i}` on each leg when it is not 1,
/// * per output leg, a chain of binary X spiders adding up the branch
///   contributions (a `|0>` X spider when there are none).
fn synthesize_state(t: &Tensor) -> Diagram {
    let legs = t.out_dims().to_vec();
    let coeffs: Vec<C64> = t
        .data()
        .iter()
        .map(|&c| if c.norm() < ZERO_CUTOFF { C64::new(0.0, 0.0) } else { c })
        .collect();
    let outputs: Vec<Dim> = legs.iter().map(|&m| dim(m)).collect();
    let branches: Vec<usize> = (0..coeffs.len()).filter(|&k| coeffs[k] != C64::new(0.0, 0.0)).collect();
    let two = dim(2);

    let mut nodes: Vec<GeneratorKind> = Vec::new();
    let mut edges = Vec::new();
    let add = |nodes: &mut Vec<GeneratorKind>, k: GeneratorKind| {
        nodes.push(k);
        nodes.len() - 1
    };
    // Running sum wire of each output leg.
    let mut acc: Vec<Option<Endpoint>> = vec![None; legs.len()];

    if branches.is_empty() {
        add(&mut nodes, GeneratorKind::Scalar(C64::new(0.0, 0.0)));
    } else {
        add(&mut nodes, GeneratorKind::Scalar(C64::new(0.5, 0.0)));
        let minus = add(
            &mut nodes,
            GeneratorKind::ZBox {
                inputs: vec![],
                outputs: vec![two],
                params: ParamVec::new(vec![C64::new(-1.0, 0.0)]),
            },
        );
        let h = add(&mut nodes, GeneratorKind::Hadamard { dim: two });
        edges.push((Endpoint::port(minus, 0), Endpoint::port(h, 0)));
        let mut feed = Endpoint::port(h, 1);

        for (b, &k) in branches.iter().enumerate() {
            let wire = if b + 1 < branches.len() {
                let w = add(&mut nodes, GeneratorKind::WNode { dim: two, fanout: 2 });
                edges.push((feed, Endpoint::port(w, 0)));
                feed = Endpoint::port(w, 2);
                Endpoint::port(w, 1)
            } else {
                feed
            };
            let e = unravel(k, &legs);
            let active: Vec<usize> = (0..legs.len()).filter(|&i| e[i] != 0).collect();
            let z = add(
                &mut nodes,
                GeneratorKind::ZBox {
                    inputs: vec![two],
                    outputs: active.iter().map(|&i| outputs[i]).collect(),
                    params: ParamVec::new(vec![coeffs[k]]),
                },
            );
            edges.push((wire, Endpoint::port(z, 0)));
            for (j, &i) in active.iter().enumerate() {
                let mut end = Endpoint::port(z, 1 + j);
                if e[i] != 1 {
                    let mul = add(&mut nodes, GeneratorKind::multiplier(outputs[i], e[i] as i64));
                    edges.push((end, Endpoint::port(mul, 0)));
                    end = Endpoint::port(mul, 1);
                }
                acc[i] = Some(match acc[i] {
                    None => end,
                    Some(prev) => {
                        let x = add(
                            &mut nodes,
                            GeneratorKind::XSpider {
                                dim: outputs[i],
                                n_in: 2,
                                n_out: 1,
                            },
                        );
                        edges.push((prev, Endpoint::port(x, 0)));
                        edges.push((end, Endpoint::port(x, 1)));
                        Endpoint::port(x, 2)
                    }
                });
            }
        }
    }

    for (i, sum) in acc.into_iter().enumerate() {
        let end = sum.unwrap_or_else(|| {
            let zero = add(
                &mut nodes,
                GeneratorKind::XSpider {
                    dim: outputs[i],
                    n_in: 0,
                    n_out: 1,
                },
            );
            Endpoint::port(zero, 0)
        });
        edges.push((end, Endpoint::Output(i)));
    }

    Diagram::from_parts(nodes, edges, vec![], outputs)
}
