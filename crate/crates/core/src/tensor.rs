//! Dense complex tensors with an (outputs, inputs) signature.
//!
//! Entries are stored row-major over the output multi-index followed by the
//! input multi-index, so a tensor doubles as a `∏out × ∏in` matrix.

use num_complex::Complex64 as C64;

use crate::error::TensorError;

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    out_dims: Vec<usize>,
    in_dims: Vec<usize>,
    data: Vec<C64>,
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Reorders the axes of a row-major array: new axis `k` is old axis `perm[k]`.
pub(crate) fn permute_axes(dims: &[usize], data: &[C64], perm: &[usize]) -> Vec<C64> {
    debug_assert_eq!(perm.len(), dims.len());
    if perm.iter().enumerate().all(|(k, &p)| k == p) {
        return data.to_vec();
    }
    let old_strides = strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let moved: Vec<usize> = perm.iter().map(|&p| old_strides[p]).collect();
    let mut out = Vec::with_capacity(data.len());
    let mut idx = vec![0usize; new_dims.len()];
    let mut src = 0usize;
    for _ in 0..data.len() {
        out.push(data[src]);
        for k in (0..new_dims.len()).rev() {
            idx[k] += 1;
            src += moved[k];
            if idx[k] < new_dims[k] {
                break;
            }
            src -= moved[k] * new_dims[k];
            idx[k] = 0;
        }
    }
    out
}

/// Mixed-radix digits of `index`, most significant first.
pub(crate) fn unravel(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        digits[i] = index % dims[i];
        index /= dims[i];
    }
    digits
}

pub(crate) fn ravel(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&e, &m)| acc * m + e)
}

impl Tensor {
    pub fn new(out_dims: Vec<usize>, in_dims: Vec<usize>, data: Vec<C64>) -> Result<Self, TensorError> {
        if out_dims.iter().chain(&in_dims).any(|&d| d == 0) {
            return Err(TensorError::Shape("dimension 0".into()));
        }
        let size: usize = out_dims.iter().chain(&in_dims).product();
        if size != data.len() {
            return Err(TensorError::Shape(format!(
                "{} entries for dims {out_dims:?} x {in_dims:?}",
                data.len()
            )));
        }
        Ok(Tensor { out_dims, in_dims, data })
    }

    pub(crate) fn from_raw(out_dims: Vec<usize>, in_dims: Vec<usize>, data: Vec<C64>) -> Self {
        debug_assert_eq!(out_dims.iter().chain(&in_dims).product::<usize>(), data.len());
        Tensor { out_dims, in_dims, data }
    }

    pub fn zeros(out_dims: Vec<usize>, in_dims: Vec<usize>) -> Self {
        let size = out_dims.iter().chain(&in_dims).product();
        Tensor {
            out_dims,
            in_dims,
            data: vec![C64::new(0.0, 0.0); size],
        }
    }

    /// Builds a tensor from a function of (output digits, input digits).
    pub fn from_fn(out_dims: Vec<usize>, in_dims: Vec<usize>, mut f: impl FnMut(&[usize], &[usize]) -> C64) -> Self {
        let rows: usize = out_dims.iter().product();
        let cols: usize = in_dims.iter().product();
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let o = unravel(r, &out_dims);
            for c in 0..cols {
                data.push(f(&o, &unravel(c, &in_dims)));
            }
        }
        Tensor { out_dims, in_dims, data }
    }

    pub fn scalar(c: C64) -> Self {
        Tensor {
            out_dims: vec![],
            in_dims: vec![],
            data: vec![c],
        }
    }

    pub fn identity(d: usize) -> Self {
        Tensor::from_fn(vec![d], vec![d], |o, i| if o == i { 1.0.into() } else { 0.0.into() })
    }

    /// A state (no inputs) with the given coefficients.
    pub fn state(dims: Vec<usize>, coeffs: Vec<C64>) -> Result<Self, TensorError> {
        Tensor::new(dims, vec![], coeffs)
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    pub fn rows(&self) -> usize {
        self.out_dims.iter().product()
    }

    pub fn cols(&self) -> usize {
        self.in_dims.iter().product()
    }

    pub fn is_scalar(&self) -> bool {
        self.out_dims.is_empty() && self.in_dims.is_empty()
    }

    /// Matrix entry at flat (row, column).
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.cols() + col]
    }

    /// Entry addressed by output and input digits.
    pub fn get(&self, out: &[usize], inp: &[usize]) -> C64 {
        self.entry(ravel(out, &self.out_dims), ravel(inp, &self.in_dims))
    }

    pub fn scale(&self, c: C64) -> Tensor {
        Tensor {
            out_dims: self.out_dims.clone(),
            in_dims: self.in_dims.clone(),
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    /// Tensor (Kronecker) product; `a`'s legs come first on each side.
    pub fn kron(a: &Tensor, b: &Tensor) -> Tensor {
        let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
        let mut data = vec![C64::new(0.0, 0.0); ra * rb * ca * cb];
        let cols = ca * cb;
        for i in 0..ra {
            for j in 0..ca {
                let x = a.data[i * ca + j];
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..rb {
                    for l in 0..cb {
                        data[(i * rb + k) * cols + j * cb + l] = x * b.data[k * cb + l];
                    }
                }
            }
        }
        let mut out_dims = a.out_dims.clone();
        out_dims.extend(&b.out_dims);
        let mut in_dims = a.in_dims.clone();
        in_dims.extend(&b.in_dims);
        Tensor { out_dims, in_dims, data }
    }

    /// Composition `a · b` (apply `b` first).
    pub fn matmul(a: &Tensor, b: &Tensor) -> Result<Tensor, TensorError> {
        if a.in_dims != b.out_dims {
            return Err(TensorError::Shape(format!(
                "cannot compose inputs {:?} with outputs {:?}",
                a.in_dims, b.out_dims
            )));
        }
        let (n, k, m) = (a.rows(), a.cols(), b.cols());
        let mut data = vec![C64::new(0.0, 0.0); n * m];
        for i in 0..n {
            for l in 0..k {
                let x = a.data[i * k + l];
                if x == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &b.data[l * m..(l + 1) * m];
                for (dst, &y) in data[i * m..(i + 1) * m].iter_mut().zip(row) {
                    *dst += x * y;
                }
            }
        }
        Ok(Tensor {
            out_dims: a.out_dims.clone(),
            in_dims: b.in_dims.clone(),
            data,
        })
    }

    /// Reorders legs: new output `k` is old output `out_perm[k]`, likewise for
    /// inputs.
    pub fn permute_legs(&self, out_perm: &[usize], in_perm: &[usize]) -> Result<Tensor, TensorError> {
        let check = |perm: &[usize], len: usize| {
            let mut seen = vec![false; len];
            perm.len() == len && perm.iter().all(|&p| p < len && !std::mem::replace(&mut seen[p], true))
        };
        if !check(out_perm, self.out_dims.len()) || !check(in_perm, self.in_dims.len()) {
            return Err(TensorError::Shape(format!("invalid permutation {out_perm:?} / {in_perm:?}")));
        }
        let no = self.out_dims.len();
        let mut all_dims = self.out_dims.clone();
        all_dims.extend(&self.in_dims);
        let perm: Vec<usize> = out_perm.iter().copied().chain(in_perm.iter().map(|&p| p + no)).collect();
        Ok(Tensor {
            out_dims: out_perm.iter().map(|&p| self.out_dims[p]).collect(),
            in_dims: in_perm.iter().map(|&p| self.in_dims[p]).collect(),
            data: permute_axes(&all_dims, &self.data, &perm),
        })
    }

    /// Contracts output leg `out_leg` against input leg `in_leg`.
    pub fn partial_trace(&self, out_leg: usize, in_leg: usize) -> Result<Tensor, TensorError> {
        if out_leg >= self.out_dims.len() {
            return Err(TensorError::LegOutOfRange {
                index: out_leg,
                len: self.out_dims.len(),
            });
        }
        if in_leg >= self.in_dims.len() {
            return Err(TensorError::LegOutOfRange {
                index: in_leg,
                len: self.in_dims.len(),
            });
        }
        let d = self.out_dims[out_leg];
        if d != self.in_dims[in_leg] {
            return Err(TensorError::Shape(format!(
                "traced legs have dimensions {d} and {}",
                self.in_dims[in_leg]
            )));
        }
        let mut out_dims = self.out_dims.clone();
        out_dims.remove(out_leg);
        let mut in_dims = self.in_dims.clone();
        in_dims.remove(in_leg);
        Ok(Tensor::from_fn(out_dims, in_dims, |o, i| {
            let mut full_o = o.to_vec();
            full_o.insert(out_leg, 0);
            let mut full_i = i.to_vec();
            full_i.insert(in_leg, 0);
            (0..d)
                .map(|j| {
                    full_o[out_leg] = j;
                    full_i[in_leg] = j;
                    self.get(&full_o, &full_i)
                })
                .sum()
        }))
    }

    pub fn transpose(&self) -> Tensor {
        let (r, c) = (self.rows(), self.cols());
        let mut data = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                data.push(self.data[i * c + j]);
            }
        }
        Tensor {
            out_dims: self.in_dims.clone(),
            in_dims: self.out_dims.clone(),
            data,
        }
    }

    pub fn adjoint(&self) -> Tensor {
        let mut t = self.transpose();
        t.data.iter_mut().for_each(|x| *x = x.conj());
        t
    }

    /// Map-state duality: inputs become trailing outputs in reversed order.
    pub fn to_state(&self) -> Tensor {
        let no = self.out_dims.len();
        let ni = self.in_dims.len();
        let mut all = self.out_dims.clone();
        all.extend(&self.in_dims);
        let perm: Vec<usize> = (0..no).chain((0..ni).rev().map(|i| no + i)).collect();
        let data = permute_axes(&all, &self.data, &perm);
        let mut out_dims = self.out_dims.clone();
        out_dims.extend(self.in_dims.iter().rev());
        Tensor {
            out_dims,
            in_dims: vec![],
            data,
        }
    }

    /// Inverse of [`Tensor::to_state`].
    pub fn state_to_map(&self, n_in: usize) -> Result<Tensor, TensorError> {
        if !self.in_dims.is_empty() || n_in > self.out_dims.len() {
            return Err(TensorError::Shape("expected a state with enough legs".into()));
        }
        let total = self.out_dims.len();
        let no = total - n_in;
        // state legs: out_0..out_{no-1}, in_{n_in-1}, ..., in_0
        let perm: Vec<usize> = (0..no).chain((0..n_in).map(|i| total - 1 - i)).collect();
        let data = permute_axes(&self.out_dims, &self.data, &perm);
        Ok(Tensor {
            out_dims: self.out_dims[..no].to_vec(),
            in_dims: self.out_dims[no..].iter().rev().copied().collect(),
            data,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Max-norm distance, or `None` when signatures differ.
    pub fn max_abs_diff(a: &Tensor, b: &Tensor) -> Option<f64> {
        if a.out_dims != b.out_dims || a.in_dims != b.in_dims {
            return None;
        }
        Some(a.data.iter().zip(&b.data).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }

    pub fn allclose(a: &Tensor, b: &Tensor, tol: f64) -> bool {
        Tensor::max_abs_diff(a, b).is_some_and(|d| d <= tol)
    }

    /// Returns `λ` with `a ≈ λ b` when `b` is nonzero and such a factor
    /// exists. The tolerance is absolute on the entries of `a`.
    pub fn proportional(a: &Tensor, b: &Tensor, tol: f64) -> Option<C64> {
        if a.out_dims != b.out_dims || a.in_dims != b.in_dims {
            return None;
        }
        let (k, pivot) = b
            .data
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
        if pivot.norm() <= tol {
            return None;
        }
        let lambda = a.data[k] / pivot;
        let ok = a
            .data
            .iter()
            .zip(&b.data)
            .all(|(&x, &y)| (x - lambda * y).norm() <= tol);
        ok.then_some(lambda)
    }
}
