use std::fmt;

use num_complex::Complex64 as C64;

use super::simplify::{simplify_with, CheckMode};
use super::RewriteTrace;
use crate::diagram::{raw, Diagram};
use crate::error::DiagramError;
use crate::normal_form::{first_difference, fmt_complex, normalize, NormalForm};
use crate::tensor::Tensor;

/// Evidence for a [`Verdict`]: both normal forms, the simplifier traces of
/// both sides, and where the coefficients first disagree.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub left: NormalForm,
    pub right: NormalForm,
    pub left_trace: RewriteTrace,
    pub right_trace: RewriteTrace,
    /// First coefficient index that differs by more than the tolerance.
    pub first_difference: Option<usize>,
    /// `Some(c)` when `right = c * left` up to the tolerance.
    pub proportional: Option<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub equal: bool,
    pub certificate: Certificate,
}

/// Decides `a == b` by comparing normal forms coefficient-wise within `tol`.
/// Both diagrams must have the same signature.
pub fn prove_equal(a: &Diagram, b: &Diagram, tol: f64) -> Result<Verdict, DiagramError> {
    a.ensure_valid()?;
    b.ensure_valid()?;
    check_signature(a.inputs(), b.inputs())?;
    check_signature(a.outputs(), b.outputs())?;
    let (_, left_trace) = simplify_with(a, CheckMode::Never)?;
    let (_, right_trace) = simplify_with(b, CheckMode::Never)?;
    let left = normalize(a)?;
    let right = normalize(b)?;
    let first = first_difference(&left, &right, tol);
    let proportional = Tensor::proportional(&right.to_tensor(), &left.to_tensor(), tol);
    Ok(Verdict {
        equal: first.is_none(),
        certificate: Certificate {
            left,
            right,
            left_trace,
            right_trace,
            first_difference: first,
            proportional,
        },
    })
}

fn check_signature(a: &[crate::diagram::Dim], b: &[crate::diagram::Dim]) -> Result<(), DiagramError> {
    if a.len() != b.len() {
        return Err(DiagramError::ArityMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let (a, b) = (raw(a), raw(b));
    match a.iter().zip(&b).position(|(x, y)| x != y) {
        Some(position) => Err(DiagramError::SignatureMismatch {
            position,
            expected: a[position],
            found: b[position],
        }),
        None => Ok(()),
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.certificate;
        writeln!(f, "{}", if self.equal { "equal" } else { "not equal" })?;
        writeln!(f, "left:  {}", c.left)?;
        writeln!(f, "right: {}", c.right)?;
        if let Some(i) = c.first_difference {
            let get = |nf: &NormalForm| nf.coeffs().get(i).copied().unwrap_or_default();
            writeln!(
                f,
                "first difference at index {i}: {} vs {}",
                fmt_complex(get(&c.left)),
                fmt_complex(get(&c.right))
            )?;
            if let Some(s) = c.proportional {
                writeln!(f, "proportional: right = {} * left", fmt_complex(s))?;
            }
        }
        writeln!(f, "left rewrites: {}", c.left_trace.len())?;
        write!(f, "right rewrites: {}", c.right_trace.len())
    }
}
