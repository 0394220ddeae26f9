#ifndef CHUNKCACHE_H
#define CHUNKCACHE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ChunkStatus {
  CHUNK_STATUS_OK = 0,
  CHUNK_STATUS_NULL_POINTER = 1,
  CHUNK_STATUS_INVALID_ARGUMENT = 2,
  CHUNK_STATUS_PARSE = 3,
  CHUNK_STATUS_CONFIG = 4,
  CHUNK_STATUS_DOMAIN = 5,
  CHUNK_STATUS_PARTITION = 6,
  CHUNK_STATUS_SCHEDULE = 7,
  CHUNK_STATUS_IO = 8,
  CHUNK_STATUS_PANIC = 9,
} ChunkStatus;

typedef enum ChunkMode {
  CHUNK_MODE_EXCLUSIVE = 0,
  CHUNK_MODE_MAINSTREAM = 1,
} ChunkMode;

typedef enum ChunkAccessKind {
  CHUNK_ACCESS_KIND_READ = 0,
  CHUNK_ACCESS_KIND_WRITE = 1,
  CHUNK_ACCESS_KIND_I_FETCH = 2,
} ChunkAccessKind;

typedef enum ChunkLevel {
  CHUNK_LEVEL_L1 = 0,
  CHUNK_LEVEL_L2 = 1,
  CHUNK_LEVEL_LLC = 2,
  CHUNK_LEVEL_MEMORY = 3,
} ChunkLevel;

/**
 * Opaque simulator handle.
 */
typedef struct ChunkSim ChunkSim;

typedef struct ChunkAccessResult {
  enum ChunkLevel served_by;
  /**
   * The request reached the LLC.
   */
  bool llc_accessed;
  bool llc_hit;
  /**
   * LLC set that served or received the line; 0 if the LLC was not reached.
   */
  uint64_t sid;
  uint64_t cycles;
} ChunkAccessResult;

typedef struct ChunkOverhead {
  uint64_t cst_bits;
  uint64_t ectable_bits;
  uint64_t tag_extra_bits;
  uint64_t total_bits;
  double percent_of_llc;
} ChunkOverhead;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a simulator. `config_toml` may be null for the default machine;
 * `model` may be null to keep the configured LLC model ("chunked",
 * "shared" or "way").
 *
 * # Safety
 * String arguments must be null or NUL terminated; `out` must be writable.
 */
enum ChunkStatus chunk_sim_new(const char *config_toml, const char *model, struct ChunkSim **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `sim` must come from `chunk_sim_new` and not be used afterwards.
 */
void chunk_sim_free(struct ChunkSim *sim);

/**
 * Registers domain `did`. `sets` is the chunk size for exclusive domains;
 * 0 selects the default. Mainstream domains must pass 0.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum ChunkStatus chunk_sim_register(struct ChunkSim *sim,
                                    uint32_t did,
                                    enum ChunkMode mode,
                                    uint64_t sets);

/**
 * Releases the domain's chunk and lines and frees the ID.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum ChunkStatus chunk_sim_teardown(struct ChunkSim *sim, uint32_t did);

/**
 * Schedules `did` on `core`, flushing the core's private caches.
 *
 * # Safety
 * `sim` must be a live handle.
 */
enum ChunkStatus chunk_sim_switch(struct ChunkSim *sim, uint32_t core, uint32_t did);

/**
 * One memory access. `out` may be null.
 *
 * # Safety
 * `sim` must be a live handle; `out` null or writable.
 */
enum ChunkStatus chunk_sim_access(struct ChunkSim *sim,
                                  uint32_t core,
                                  uint32_t did,
                                  enum ChunkAccessKind kind,
                                  uint64_t addr,
                                  struct ChunkAccessResult *out);

/**
 * Resizes the domain's chunk. `out_cycles` (nullable) receives the
 * reconfiguration cost.
 *
 * # Safety
 * `sim` must be a live handle; `out_cycles` null or writable.
 */
enum ChunkStatus chunk_sim_resize(struct ChunkSim *sim,
                                  uint32_t did,
                                  uint64_t sets,
                                  uint64_t *out_cycles);

/**
 * Parses and replays scenario text. `out_accesses` (nullable) receives the
 * number of accesses logged so far.
 *
 * # Safety
 * `sim` must be a live handle; `text` NUL terminated.
 */
enum ChunkStatus chunk_sim_run_scenario(struct ChunkSim *sim,
                                        const char *text,
                                        uint64_t *out_accesses);

/**
 * Average access time of `did` in cycles.
 *
 * # Safety
 * `sim` must be a live handle; `out` writable.
 */
enum ChunkStatus chunk_sim_amat(struct ChunkSim *sim, uint32_t did, double *out);

/**
 * Storage overhead of the default 16 MB LLC with `max_domains` domains and
 * `did_bits`-wide domain tags.
 *
 * # Safety
 * `out` must be writable.
 */
enum ChunkStatus chunk_overhead(uint32_t max_domains, uint32_t did_bits, struct ChunkOverhead *out);

/**
 * Message of the last failure on this thread, empty after a success. The
 * pointer stays valid until the next call on the same thread.
 */
const char *chunk_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *chunk_status_str(enum ChunkStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHUNKCACHE_H */
