#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zxw::diagram::{Diagram, Dim, GeneratorKind};
use zxw::Tensor;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn dim(v: usize) -> Dim {
    Dim::new(v).unwrap()
}

pub fn dims(v: &[usize]) -> Vec<Dim> {
    v.iter().map(|&d| dim(d)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn node(k: GeneratorKind) -> Diagram {
    Diagram::node(k).unwrap()
}

/// Dense matrix from nested rows.
pub fn matrix(out_dims: Vec<usize>, in_dims: Vec<usize>, rows: &[&[C64]]) -> Tensor {
    Tensor::new(out_dims, in_dims, rows.iter().flat_map(|r| r.iter().copied()).collect()).unwrap()
}

/// Row-major matrix product written out with plain loops.
pub fn naive_matmul(a: &Tensor, b: &Tensor) -> Tensor {
    let (n, k, m) = (a.rows(), a.cols(), b.cols());
    assert_eq!(k, b.rows());
    let mut data = vec![C64::new(0.0, 0.0); n * m];
    for i in 0..n {
        for j in 0..m {
            for l in 0..k {
                data[i * m + j] += a.entry(i, l) * b.entry(l, j);
            }
        }
    }
    Tensor::new(a.out_dims().to_vec(), b.in_dims().to_vec(), data).unwrap()
}

/// Kronecker product: outputs of `a` then `b`, inputs of `a` then `b`.
pub fn naive_kron(a: &Tensor, b: &Tensor) -> Tensor {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut data = vec![C64::new(0.0, 0.0); ar * br * ac * bc];
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    data[(i * br + k) * (ac * bc) + j * bc + l] = a.entry(i, j) * b.entry(k, l);
                }
            }
        }
    }
    let mut out = a.out_dims().to_vec();
    out.extend(b.out_dims());
    let mut inp = a.in_dims().to_vec();
    inp.extend(b.in_dims());
    Tensor::new(out, inp, data).unwrap()
}

pub fn assert_close(a: &Tensor, b: &Tensor, tol: f64) {
    let dev = Tensor::max_abs_diff(a, b);
    assert!(dev.is_some_and(|d| d <= tol), "deviation {dev:?} exceeds {tol}\n{a:?}\n{b:?}");
}

/// Generator interpretations written directly from their defining sums.
pub mod oracle {
    use super::*;
    use std::f64::consts::TAU;

    fn one_if(b: bool) -> C64 {
        if b { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    }

    pub fn identity(d: usize) -> Tensor {
        Tensor::from_fn(vec![d], vec![d], |o, i| one_if(o == i))
    }

    /// `Σ_j a_j |j..j><j..j|` over `j < min leg`, `a_0 = 1`.
    pub fn z_box(ins: &[usize], outs: &[usize], a: &[C64]) -> Tensor {
        Tensor::from_fn(outs.to_vec(), ins.to_vec(), |o, i| {
            let j = o.first().or(i.first()).copied().unwrap_or(0);
            if o.iter().chain(i).all(|&x| x == j) {
                if j == 0 { C64::new(1.0, 0.0) } else { a[j - 1] }
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// `|0..0><0| + Σ_{j≥1} Σ_k |0..j_k..0><j|`.
    pub fn w(d: usize, fanout: usize) -> Tensor {
        Tensor::from_fn(vec![d; fanout], vec![d], |o, i| {
            let nonzero: Vec<usize> = o.iter().copied().filter(|&x| x != 0).collect();
            one_if(match nonzero.as_slice() {
                [] => i[0] == 0,
                [x] => *x == i[0],
                _ => false,
            })
        })
    }

    pub fn hadamard(d: usize) -> Tensor {
        Tensor::from_fn(vec![d], vec![d], |o, i| C64::from_polar(1.0, TAU * ((o[0] * i[0]) % d) as f64 / d as f64))
    }

    pub fn x_spider(d: usize, n_in: usize, n_out: usize) -> Tensor {
        Tensor::from_fn(vec![d; n_out], vec![d; n_in], |o, i| {
            one_if(o.iter().sum::<usize>() % d == i.iter().sum::<usize>() % d)
        })
    }

    /// `Σ |i, j><i n + j|`.
    pub fn splitter(m: usize, n: usize) -> Tensor {
        Tensor::from_fn(vec![m, n], vec![m * n], |o, i| one_if(o[0] * n + o[1] == i[0]))
    }

    pub fn merger(m: usize, n: usize) -> Tensor {
        Tensor::from_fn(vec![m * n], vec![m, n], |o, i| one_if(i[0] * n + i[1] == o[0]))
    }

    pub fn swap(m: usize, n: usize) -> Tensor {
        Tensor::from_fn(vec![n, m], vec![m, n], |o, i| one_if(o[0] == i[1] && o[1] == i[0]))
    }

    pub fn cap(d: usize) -> Tensor {
        Tensor::from_fn(vec![d, d], vec![], |o, _| one_if(o[0] == o[1]))
    }

    pub fn cup(d: usize) -> Tensor {
        Tensor::from_fn(vec![], vec![d, d], |_, i| one_if(i[0] == i[1]))
    }

    pub fn multiplier(d: usize, m: usize) -> Tensor {
        Tensor::from_fn(vec![d], vec![d], |o, i| one_if(o[0] == (m * i[0]) % d))
    }
}

/// Matrix rank by Gaussian elimination with partial pivoting.
pub fn rank(t: &Tensor, tol: f64) -> usize {
    let (n, m) = (t.rows(), t.cols());
    let mut a: Vec<Vec<C64>> = (0..n).map(|i| (0..m).map(|j| t.entry(i, j)).collect()).collect();
    let mut r = 0;
    for col in 0..m {
        let Some(p) = (r..n).max_by(|&x, &y| a[x][col].norm().total_cmp(&a[y][col].norm())) else { break };
        if a[p][col].norm() <= tol {
            continue;
        }
        a.swap(p, r);
        for row in 0..n {
            if row != r {
                let f = a[row][col] / a[r][col];
                for k in col..m {
                    let v = a[r][k];
                    a[row][k] -= f * v;
                }
            }
        }
        r += 1;
    }
    r
}
