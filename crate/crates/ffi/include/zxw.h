#ifndef ZXW_H
#define ZXW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes. The first five agree with the `zxw` command's exit codes.
 */
typedef enum ZxwStatus {
  ZXW_STATUS_OK = 0,
  /*
   Reserved to keep the codes aligned with the command line. Functions
   that compare report the verdict through an out-parameter instead.
   */
  ZXW_STATUS_UNEQUAL = 1,
  /*
   Malformed JSON, an unknown kind tag or an unknown gallery name.
   */
  ZXW_STATUS_PARSE = 2,
  /*
   The diagram is structurally invalid.
   */
  ZXW_STATUS_VALIDATION = 3,
  /*
   Two diagrams have different boundaries.
   */
  ZXW_STATUS_SIGNATURE = 4,
  /*
   A null pointer, bad UTF-8 or an undersized buffer.
   */
  ZXW_STATUS_INVALID_ARGUMENT = 5,
  /*
   Internal failure; the library caught a panic.
   */
  ZXW_STATUS_PANIC = 6,
} ZxwStatus;

/*
 Opaque diagram handle.
 */
typedef struct ZxwDiagram ZxwDiagram;

/*
 Opaque tensor handle. Entries are row-major over outputs then inputs.
 */
typedef struct ZxwTensor ZxwTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null after a
 successful call. Owned by the library.
 */
const char *zxw_last_error_message(void);

/*
 Parses a diagram document.

 # Safety
 `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum ZxwStatus zxw_diagram_from_json(const char *json, struct ZxwDiagram **out);

/*
 Serializes a diagram. Release the string with [`zxw_string_free`].

 # Safety
 `d` must be a live handle and `out` a writable pointer.
 */
enum ZxwStatus zxw_diagram_to_json(const struct ZxwDiagram *d, char **out);

/*
 # Safety
 `d` must be null or a handle from this library, not yet freed.
 */
void zxw_diagram_free(struct ZxwDiagram *d);

/*
 # Safety
 `s` must be null or a string returned by this library, not yet freed.
 */
void zxw_string_free(char *s);

/*
 Input and output counts of a diagram.

 # Safety
 `d` must be a live handle; the counts are written through non-null
 pointers only.
 */
enum ZxwStatus zxw_diagram_signature(const struct ZxwDiagram *d,
                                     uintptr_t *n_inputs,
                                     uintptr_t *n_outputs);

/*
 Evaluates a diagram to its tensor.

 # Safety
 `d` must be a live handle and `out` a writable pointer.
 */
enum ZxwStatus zxw_eval(const struct ZxwDiagram *d, struct ZxwTensor **out);

/*
 Applies the simplifier. `rewrites`, if non-null, receives the number of
 rewrite steps taken.

 # Safety
 `d` must be a live handle and `out` a writable pointer.
 */
enum ZxwStatus zxw_simplify(const struct ZxwDiagram *d,
                            struct ZxwDiagram **out,
                            uintptr_t *rewrites);

/*
 Compares two diagrams by normal form. Writes the verdict to `equal` and
 returns [`ZxwStatus::Ok`] whenever the comparison could be made.

 # Safety
 `a` and `b` must be live handles and `equal` a writable pointer.
 */
enum ZxwStatus zxw_equal(const struct ZxwDiagram *a,
                         const struct ZxwDiagram *b,
                         double tol,
                         bool *equal);

/*
 The normal form of a diagram as a state tensor: inputs are bent to
 trailing outputs, coefficients in most-significant-digit-first order.

 # Safety
 `d` must be a live handle and `out` a writable pointer.
 */
enum ZxwStatus zxw_normalize(const struct ZxwDiagram *d, struct ZxwTensor **out);

/*
 Builds a gallery diagram: `qft`, `cnot`, `symmetrizer` or `triangle`.

 # Safety
 `name` must be a nul-terminated string and `out` a writable pointer.
 */
enum ZxwStatus zxw_gallery(const char *name, uintptr_t param, struct ZxwDiagram **out);

/*
 # Safety
 `t` must be null or a handle from this library, not yet freed.
 */
void zxw_tensor_free(struct ZxwTensor *t);

/*
 Number of output and input legs.

 # Safety
 `t` must be a live handle; counts are written through non-null pointers.
 */
enum ZxwStatus zxw_tensor_shape(const struct ZxwTensor *t, uintptr_t *n_out, uintptr_t *n_in);

/*
 Copies the output dimensions then the input dimensions into `dims`,
 which must hold `n_out + n_in` entries.

 # Safety
 `t` must be a live handle and `dims` valid for `len` writes.
 */
enum ZxwStatus zxw_tensor_dims(const struct ZxwTensor *t, uintptr_t *dims, uintptr_t len);

/*
 Number of complex entries.

 # Safety
 `t` must be a live handle.
 */
uintptr_t zxw_tensor_len(const struct ZxwTensor *t);

/*
 Copies the entries as interleaved `(re, im)` pairs into `data`, which
 must hold `2 * zxw_tensor_len(t)` doubles.

 # Safety
 `t` must be a live handle and `data` valid for `len` writes.
 */
enum ZxwStatus zxw_tensor_data(const struct ZxwTensor *t, double *data, uintptr_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZXW_H */
