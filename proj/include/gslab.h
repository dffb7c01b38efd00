/* C interface of the gradient-scheme laboratory shared library.
 *
 * All functions return a status code (GSLAB_OK on success); the message for
 * the most recent failure on the calling thread is available through
 * gslab_last_error(). Objects are returned as opaque handles and must be
 * released with their matching _free function.
 */
#ifndef GSLAB_H
#define GSLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#define GSLAB_API __declspec(dllexport)
#else
#define GSLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  GSLAB_OK = 0,
  GSLAB_ERR_INVALID = 1,  /* bad arguments, topology, or scheme/mesh pairing */
  GSLAB_ERR_PARSE = 2,    /* malformed configuration or mesh file */
  GSLAB_ERR_NUMERICAL = 3 /* solver or eigensolver failure */
};

typedef struct gslab_mesh gslab_mesh;

GSLAB_API const char* gslab_version(void);

/* Message of the last failure on this thread; empty string if none. */
GSLAB_API const char* gslab_last_error(void);

/* ------------------------------------------------------------- meshes --- */
GSLAB_API int gslab_mesh_cartesian(int nx, int ny, const double lo[2], const double hi[2],
                                   gslab_mesh** out);
GSLAB_API int gslab_mesh_simplicial(int nx, int ny, const double lo[2], const double hi[2],
                                    gslab_mesh** out);
GSLAB_API int gslab_mesh_perturb(const gslab_mesh* mesh, double amplitude, uint64_t seed,
                                 gslab_mesh** out);
GSLAB_API int gslab_mesh_read(const char* path, gslab_mesh** out);
GSLAB_API int gslab_mesh_write(const gslab_mesh* mesh, const char* path);

/* h_max, the regularity factor and entity counts; any output may be NULL. */
GSLAB_API int gslab_mesh_stats(const gslab_mesh* mesh, double* h_max, double* regularity,
                               int* n_cells, int* n_faces, int* n_vertices);

/* Number of geometric-invariant violations (0 for a valid mesh); when
 * violations exist, the first message is copied into buf. */
GSLAB_API int gslab_mesh_validate(const gslab_mesh* mesh, int* n_violations, char* buf,
                                  size_t buflen);

GSLAB_API void gslab_mesh_free(gslab_mesh* mesh);

/* --------------------------------------------------------------- runs --- */
/* Executes a JSON run configuration and writes its CSV/metrics artifacts
 * under out_dir. seed_override < 0 keeps the seed from the file. threads
 * must be >= 1 (reserved; execution is currently sequential). bands_ok
 * receives 1 when every acceptance band in the configuration holds. */
GSLAB_API int gslab_run(const char* config_path, const char* out_dir, int64_t seed_override,
                        int threads, int* bands_ok);

/* One line per available scheme. */
GSLAB_API int gslab_list_schemes(char* buf, size_t buflen);

/* Multi-line description: dof layout, admissible meshes, properties. */
GSLAB_API int gslab_describe(const char* scheme, char* buf, size_t buflen);

#ifdef __cplusplus
}
#endif

#endif /* GSLAB_H */
