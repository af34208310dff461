#ifndef TERP_H
#define TERP_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of a call through the C ABI.
 */
typedef enum TerpStatus {
  TERP_STATUS_OK = 0,
  TERP_STATUS_NULL_POINTER = 1,
  TERP_STATUS_INVALID_UTF8 = 2,
  TERP_STATUS_BUFFER_TOO_SMALL = 3,
  TERP_STATUS_SHAPE_MISMATCH = 10,
  TERP_STATUS_INVALID_INPUT = 11,
  TERP_STATUS_PARSE_ERROR = 12,
  TERP_STATUS_UNSUPPORTED = 13,
  TERP_STATUS_SINGULAR = 20,
  TERP_STATUS_RANK_DEFICIENT = 21,
  TERP_STATUS_NOT_PURE = 22,
  TERP_STATUS_DEGENERATE = 23,
  TERP_STATUS_INFEASIBLE = 24,
  TERP_STATUS_INTERNAL_MISMATCH = 25,
  TERP_STATUS_PANIC = 99,
} TerpStatus;

/**
 * Opaque lattice handle.
 */
typedef struct TerpLattice TerpLattice;

/**
 * Purity and polarization summary of a lattice's twistor extension.
 *
 * `signature_plus` and `signature_minus` are meaningful only when
 * `has_signature` is true.
 */
typedef struct TerpTwistorReport {
  size_t global_section_dim;
  bool pure;
  bool has_signature;
  size_t signature_plus;
  size_t signature_minus;
} TerpTwistorReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread, or null.
 *
 * The pointer stays valid until the next `terp_*` call on the same thread.
 */
const char *terp_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *terp_version(void);

/**
 * Parse a lattice from its JSON description.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TerpStatus terp_lattice_from_json(const char *json, struct TerpLattice **out);

/**
 * The rank-3 family at `(r, t)` with `α₁ = alpha1_num / alpha1_den`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum TerpStatus terp_example3_lattice(double r_re,
                                      double r_im,
                                      double t_re,
                                      double t_im,
                                      int64_t alpha1_num,
                                      int64_t alpha1_den,
                                      struct TerpLattice **out);

/**
 * Release a lattice handle. Null is accepted and ignored.
 *
 * # Safety
 * `lattice` must come from this library and must not be used afterwards.
 */
void terp_lattice_free(struct TerpLattice *lattice);

/**
 * Rank `μ` of the lattice.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TerpStatus terp_lattice_mu(const struct TerpLattice *lattice, size_t *out);

/**
 * Serialise the lattice to JSON. Release the string with [`terp_string_free`].
 *
 * # Safety
 * Pointers must be valid.
 */
enum TerpStatus terp_lattice_to_json(const struct TerpLattice *lattice, char **out);

/**
 * Release a string returned by this library. Null is accepted and ignored.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void terp_string_free(char *s);

/**
 * Spectral numbers in ascending order as fractions `num[k] / den[k]`
 * (rational parts only).
 *
 * `len` is the capacity of both arrays; it must be at least `μ`. The
 * number written is stored in `written`.
 *
 * # Safety
 * `num` and `den` must have room for `len` entries; pointers must be valid.
 */
enum TerpStatus terp_spectrum(const struct TerpLattice *lattice,
                              int64_t *num,
                              int64_t *den,
                              size_t len,
                              size_t *written);

/**
 * Purity of the twistor extension and the signature of `h`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum TerpStatus terp_twistor_report(const struct TerpLattice *lattice,
                                    struct TerpTwistorReport *out);

/**
 * `h(ξ, ξ)` for the tangent vector with derivatives `∂C_1, …, ∂C_count`.
 *
 * `dc` holds `count` consecutive `μ×μ` complex matrices.
 *
 * # Safety
 * `dc` must hold `2·count·μ²` doubles; pointers must be valid.
 */
enum TerpStatus terp_tangent_metric(const struct TerpLattice *lattice,
                                    const double *dc,
                                    size_t count,
                                    double *out);

/**
 * `φ(A) = −‖[A, Ā]‖²_F / ‖A‖⁴_F` for a nonzero `mu×mu` matrix.
 *
 * # Safety
 * `a` must hold `2·mu²` doubles; `out` must be valid.
 */
enum TerpStatus terp_phi_value(const double *a, size_t mu, double *out);

/**
 * Multi-start estimate of the supremum of `φ` over symmetric nilpotent
 * `mu×mu` matrices.
 *
 * # Safety
 * `out` must be valid.
 */
enum TerpStatus terp_phi_supremum_estimate(size_t mu, size_t restarts, uint64_t seed, double *out);

/**
 * `Σ_{ij} R_{i\bar j j \bar i}` for the curvature of `Δ₁`.
 *
 * # Safety
 * `delta1` must hold `2·mu²` doubles; `out` must be valid.
 */
enum TerpStatus terp_curvature_contraction(const double *delta1, size_t mu, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TERP_H */
