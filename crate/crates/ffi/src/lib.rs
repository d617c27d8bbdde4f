//! C ABI over the `zxw` library.
//!
//! Diagrams and tensors are opaque heap handles owned by the caller and
//! released with the matching `*_free` function. Every call returns a
//! [`ZxwStatus`]; on failure the message is available from
//! [`zxw_last_error_message`] on the same thread until the next call.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zxw::gallery::gallery;
use zxw::io::{from_json, to_json};
use zxw::rewrite::{prove_equal, simplify};
use zxw::{eval, normalize, Diagram, DiagramError, Tensor};

/// Result codes. The first five agree with the `zxw` command's exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZxwStatus {
    Ok = 0,
    /// Reserved to keep the codes aligned with the command line. Functions
    /// that compare report the verdict through an out-parameter instead.
    Unequal = 1,
    /// Malformed JSON, an unknown kind tag or an unknown gallery name.
    Parse = 2,
    /// The diagram is structurally invalid.
    Validation = 3,
    /// Two diagrams have different boundaries.
    Signature = 4,
    /// A null pointer, bad UTF-8 or an undersized buffer.
    InvalidArgument = 5,
    /// Internal failure; the library caught a panic.
    Panic = 6,
}

/// Opaque diagram handle.
pub struct ZxwDiagram {
    inner: Diagram,
}

/// Opaque tensor handle. Entries are row-major over outputs then inputs.
pub struct ZxwTensor {
    inner: Tensor,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(ZxwStatus, String);

impl From<DiagramError> for Failure {
    fn from(e: DiagramError) -> Self {
        let status = match e {
            DiagramError::ArityMismatch { .. } | DiagramError::SignatureMismatch { .. } => ZxwStatus::Signature,
            _ => ZxwStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: &str) -> Failure {
    Failure(ZxwStatus::InvalidArgument, msg.to_string())
}

fn set_error(msg: Option<String>) {
    let c = msg.map(|m| CString::new(m.replace('\0', " ")).expect("no interior nul"));
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ZxwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(None);
            ZxwStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(Some(format!("internal error: {msg}")));
            ZxwStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(invalid(&format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid(&format!("{what} is not UTF-8")))
}

unsafe fn diagram_arg<'a>(d: *const ZxwDiagram, what: &str) -> Result<&'a Diagram, Failure> {
    d.as_ref().map(|d| &d.inner).ok_or_else(|| invalid(&format!("{what} is null")))
}

unsafe fn tensor_arg<'a>(t: *const ZxwTensor) -> Result<&'a Tensor, Failure> {
    t.as_ref().map(|t| &t.inner).ok_or_else(|| invalid("tensor is null"))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(invalid("output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn diagram_handle(inner: Diagram) -> ZxwDiagram {
    ZxwDiagram { inner }
}

/// Message for the last failed call on this thread, or null after a
/// successful call. Owned by the library.
#[no_mangle]
pub extern "C" fn zxw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a diagram document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn zxw_diagram_from_json(json: *const c_char, out: *mut *mut ZxwDiagram) -> ZxwStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let d = from_json(text).map_err(|e| Failure(ZxwStatus::Parse, e.to_string()))?;
        put(out, diagram_handle(d))
    })
}

/// Serializes a diagram. Release the string with [`zxw_string_free`].
///
/// # Safety
/// `d` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn zxw_diagram_to_json(d: *const ZxwDiagram, out: *mut *mut c_char) -> ZxwStatus {
    guard(|| {
        let d = diagram_arg(d, "diagram")?;
        if out.is_null() {
            return Err(invalid("output pointer is null"));
        }
        *out = CString::new(to_json(d)).expect("json has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `d` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zxw_diagram_free(d: *mut ZxwDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zxw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Input and output counts of a diagram.
///
/// # Safety
/// `d` must be a live handle; the counts are written through non-null
/// pointers only.
#[no_mangle]
pub unsafe extern "C" fn zxw_diagram_signature(d: *const ZxwDiagram, n_inputs: *mut usize, n_outputs: *mut usize) -> ZxwStatus {
    guard(|| {
        let d = diagram_arg(d, "diagram")?;
        if let Some(n) = n_inputs.as_mut() {
            *n = d.inputs().len();
        }
        if let Some(n) = n_outputs.as_mut() {
            *n = d.outputs().len();
        }
        Ok(())
    })
}

/// Evaluates a diagram to its tensor.
///
/// # Safety
/// `d` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn zxw_eval(d: *const ZxwDiagram, out: *mut *mut ZxwTensor) -> ZxwStatus {
    guard(|| {
        let t = eval(diagram_arg(d, "diagram")?)?;
        put(out, ZxwTensor { inner: t })
    })
}

/// Applies the simplifier. `rewrites`, if non-null, receives the number of
/// rewrite steps taken.
///
/// # Safety
/// `d` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn zxw_simplify(d: *const ZxwDiagram, out: *mut *mut ZxwDiagram, rewrites: *mut usize) -> ZxwStatus {
    guard(|| {
        let (s, trace) = simplify(diagram_arg(d, "diagram")?)?;
        if let Some(n) = rewrites.as_mut() {
            *n = trace.len();
        }
        put(out, diagram_handle(s))
    })
}

/// Compares two diagrams by normal form. Writes the verdict to `equal` and
/// returns [`ZxwStatus::Ok`] whenever the comparison could be made.
///
/// # Safety
/// `a` and `b` must be live handles and `equal` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn zxw_equal(a: *const ZxwDiagram, b: *const ZxwDiagram, tol: f64, equal: *mut bool) -> ZxwStatus {
    guard(|| {
        let v = prove_equal(diagram_arg(a, "left diagram")?, diagram_arg(b, "right diagram")?, tol)?;
        let slot = equal.as_mut().ok_or_else(|| invalid("output pointer is null"))?;
        *slot = v.equal;
        Ok(())
    })
}

/// The normal form of a diagram as a state tensor: inputs are bent to
/// trailing outputs, coefficients in most-significant-digit-first order.
///
/// # Safety
/// `d` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn zxw_normalize(d: *const ZxwDiagram, out: *mut *mut ZxwTensor) -> ZxwStatus {
    guard(|| {
        let nf = normalize(diagram_arg(d, "diagram")?)?;
        put(out, ZxwTensor { inner: nf.to_tensor() })
    })
}

/// Builds a gallery diagram: `qft`, `cnot`, `symmetrizer` or `triangle`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn zxw_gallery(name: *const c_char, param: usize, out: *mut *mut ZxwDiagram) -> ZxwStatus {
    guard(|| {
        let entry = gallery(str_arg(name, "name")?, param).map_err(|e| Failure(ZxwStatus::Parse, e.to_string()))?;
        put(out, diagram_handle(entry.diagram))
    })
}

/// # Safety
/// `t` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zxw_tensor_free(t: *mut ZxwTensor) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Number of output and input legs.
///
/// # Safety
/// `t` must be a live handle; counts are written through non-null pointers.
#[no_mangle]
pub unsafe extern "C" fn zxw_tensor_shape(t: *const ZxwTensor, n_out: *mut usize, n_in: *mut usize) -> ZxwStatus {
    guard(|| {
        let t = tensor_arg(t)?;
        if let Some(n) = n_out.as_mut() {
            *n = t.out_dims().len();
        }
        if let Some(n) = n_in.as_mut() {
            *n = t.in_dims().len();
        }
        Ok(())
    })
}

/// Copies the output dimensions then the input dimensions into `dims`,
/// which must hold `n_out + n_in` entries.
///
/// # Safety
/// `t` must be a live handle and `dims` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn zxw_tensor_dims(t: *const ZxwTensor, dims: *mut usize, len: usize) -> ZxwStatus {
    guard(|| {
        let t = tensor_arg(t)?;
        let all: Vec<usize> = t.out_dims().iter().chain(t.in_dims()).copied().collect();
        copy_out(&all, dims, len)
    })
}

/// Number of complex entries.
///
/// # Safety
/// `t` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn zxw_tensor_len(t: *const ZxwTensor) -> usize {
    t.as_ref().map_or(0, |t| t.inner.data().len())
}

/// Copies the entries as interleaved `(re, im)` pairs into `data`, which
/// must hold `2 * zxw_tensor_len(t)` doubles.
///
/// # Safety
/// `t` must be a live handle and `data` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn zxw_tensor_data(t: *const ZxwTensor, data: *mut f64, len: usize) -> ZxwStatus {
    guard(|| {
        let t = tensor_arg(t)?;
        let flat: Vec<f64> = t.data().iter().flat_map(|z| [z.re, z.im]).collect();
        copy_out(&flat, data, len)
    })
}

unsafe fn copy_out<T: Copy>(src: &[T], dst: *mut T, len: usize) -> Result<(), Failure> {
    if dst.is_null() && !src.is_empty() {
        return Err(invalid("buffer is null"));
    }
    if len < src.len() {
        return Err(invalid(&format!("buffer holds {len} entries, need {}", src.len())));
    }
    if !src.is_empty() {
        ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    }
    Ok(())
}
