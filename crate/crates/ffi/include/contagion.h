/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef CONTAGION_H
#define CONTAGION_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum CtgStatus {
  CTG_STATUS_OK = 0,
  // A required pointer argument was null.
  CTG_STATUS_NULL_POINTER = 1,
  // An argument was outside its valid range.
  CTG_STATUS_INVALID_ARGUMENT = 2,
  // The parameters are valid but cannot be realized (e.g. an unreachable
  // mean degree).
  CTG_STATUS_INFEASIBLE = 3,
  // A network and sheet set of different shapes were combined.
  CTG_STATUS_MISMATCH = 4,
  // An internal error; the library state is unaffected.
  CTG_STATUS_INTERNAL = 5,
} CtgStatus;

// Opaque directed interbank network.
typedef struct CtgNetwork CtgNetwork;

// Opaque result of one cascade.
typedef struct CtgOutcome CtgOutcome;

// Opaque set of bank balance sheets tied to one network's shape.
typedef struct CtgSheets CtgSheets;

// Balance-sheet entries of one bank.
typedef struct CtgBankSheet {
  double total_assets;
  double interbank_assets;
  double illiquid_assets;
  double capital;
} CtgBankSheet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failing call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *ctg_last_error(void);

// Library version as a static NUL-terminated string.
const char *ctg_version(void);

// Directed Erdős–Rényi network with `n` banks and mean in-degree `z`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum CtgStatus ctg_network_erdos_renyi(size_t n, double z, uint64_t seed, struct CtgNetwork **out);

// Scale-free network with degree tail exponent `gamma > 2` and mean
// in-degree `z`.
//
// # Safety
// `out` must be a valid pointer to writable storage for one handle.
enum CtgStatus ctg_network_scale_free(size_t n,
                                      double gamma,
                                      double z,
                                      uint64_t seed,
                                      struct CtgNetwork **out);

// Network from `m` edges; edge `i` is a claim of `creditors[i]` on
// `debtors[i]`. Self-loops and duplicates are rejected.
//
// # Safety
// `debtors` and `creditors` must each point to `m` readable values (they
// may be null when `m == 0`); `out` must be valid for one handle.
enum CtgStatus ctg_network_from_edges(size_t n,
                                      const size_t *debtors,
                                      const size_t *creditors,
                                      size_t m,
                                      struct CtgNetwork **out);

// Degree-preserving Metropolis rewiring with coupling `coupling`
// (negative favors disassortative mixing) and `sweeps` proposals per edge.
// The input network is left unchanged.
//
// # Safety
// `net` must be a live handle; `out` must be valid for one handle.
enum CtgStatus ctg_network_rewire(const struct CtgNetwork *net,
                                  double coupling,
                                  size_t sweeps,
                                  uint64_t seed,
                                  struct CtgNetwork **out);

// # Safety
// `net` must be a live handle or null.
size_t ctg_network_node_count(const struct CtgNetwork *net);

// # Safety
// `net` must be a live handle or null.
size_t ctg_network_edge_count(const struct CtgNetwork *net);

// Endpoints of edge `id` in canonical (debtor, creditor) order.
//
// # Safety
// `net` must be a live handle; `debtor` and `creditor` must be writable.
enum CtgStatus ctg_network_edge(const struct CtgNetwork *net,
                                size_t id,
                                size_t *debtor,
                                size_t *creditor);

// In- and out-degree of `bank`.
//
// # Safety
// `net` must be a live handle; `in_degree` and `out_degree` must be writable.
enum CtgStatus ctg_network_degree(const struct CtgNetwork *net,
                                  size_t bank,
                                  size_t *in_degree,
                                  size_t *out_degree);

// Pearson degree assortativity over the undirected projection.
//
// # Safety
// `net` must be a live handle; `out` must be writable.
enum CtgStatus ctg_network_assortativity(const struct CtgNetwork *net, double *out);

// Rewiring energy of the network at coupling `coupling`.
//
// # Safety
// `net` must be a live handle; `out` must be writable.
enum CtgStatus ctg_network_energy(const struct CtgNetwork *net, double coupling, double *out);

// # Safety
// `net` must be a handle from this library that has not been freed, or null.
void ctg_network_free(struct CtgNetwork *net);

// Identical balance sheets for every bank of `net`.
//
// # Safety
// `net` must be a live handle; `out` must be valid for one handle.
enum CtgStatus ctg_sheets_uniform(const struct CtgNetwork *net, struct CtgSheets **out);

// Pareto-distributed bank sizes with tail exponent `alpha > 2`.
//
// # Safety
// `net` must be a live handle; `out` must be valid for one handle.
enum CtgStatus ctg_sheets_power_law(const struct CtgNetwork *net,
                                    double alpha,
                                    uint64_t seed,
                                    struct CtgSheets **out);

// Copy of `sheets` with the capital buffer of each listed bank raised to
// `buffer` times its total assets.
//
// # Safety
// `sheets` must be a live handle; `targets` must point to `count` readable
// values (null allowed when `count == 0`); `out` must be valid for one handle.
enum CtgStatus ctg_sheets_apply_policy(const struct CtgSheets *sheets,
                                       const size_t *targets,
                                       size_t count,
                                       double buffer,
                                       struct CtgSheets **out);

// # Safety
// `sheets` must be a live handle; `out` must be writable.
enum CtgStatus ctg_sheets_bank(const struct CtgSheets *sheets,
                               size_t bank,
                               struct CtgBankSheet *out);

// # Safety
// `sheets` must be a handle from this library that has not been freed, or null.
void ctg_sheets_free(struct CtgSheets *sheets);

// Fails `seed_bank` and propagates losses until no further bank fails.
//
// # Safety
// `net` and `sheets` must be live handles; `out` must be valid for one handle.
enum CtgStatus ctg_cascade_run(const struct CtgNetwork *net,
                               const struct CtgSheets *sheets,
                               size_t seed_bank,
                               struct CtgOutcome **out);

// # Safety
// `outcome` must be a live handle or null.
size_t ctg_outcome_defaulted_count(const struct CtgOutcome *outcome);

// # Safety
// `outcome` must be a live handle or null.
double ctg_outcome_fraction(const struct CtgOutcome *outcome);

// Number of propagation rounds after the seed failure.
//
// # Safety
// `outcome` must be a live handle or null.
uint32_t ctg_outcome_rounds(const struct CtgOutcome *outcome);

// Round in which `bank` failed (0 for the seed), or -1 if it survived.
//
// # Safety
// `outcome` must be a live handle; `out` must be writable.
enum CtgStatus ctg_outcome_failure_round(const struct CtgOutcome *outcome,
                                         size_t bank,
                                         int64_t *out);

// Copies up to `capacity` failed banks, in failure order, into `banks` and
// stores the total number of failures in `written`.
//
// # Safety
// `outcome` must be a live handle; `banks` must have room for `capacity`
// values (null allowed when `capacity == 0`); `written` must be writable.
enum CtgStatus ctg_outcome_failure_sequence(const struct CtgOutcome *outcome,
                                            size_t *banks,
                                            size_t capacity,
                                            size_t *written);

// # Safety
// `outcome` must be a handle from this library that has not been freed, or null.
void ctg_outcome_free(struct CtgOutcome *outcome);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONTAGION_H */
