#include "gslab.h"

#include <cstring>
#include <string>

#include "gslab/mesh.hpp"
#include "gslab/runconfig.hpp"
#include "gslab/schemes.hpp"

namespace {

thread_local std::string g_last_error;

void copy_out(const std::string& text, char* buf, size_t buflen) {
  if (!buf || buflen == 0) return;
  const size_t n = std::min(buflen - 1, text.size());
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
}

// Runs the body, translating exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return GSLAB_OK;
  } catch (const gslab::ConfigError& e) {
    g_last_error = e.what();
    return GSLAB_ERR_PARSE;
  } catch (const gslab::NumericalError& e) {
    g_last_error = e.what();
    return GSLAB_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GSLAB_ERR_INVALID;
  }
}

}  // namespace

struct gslab_mesh {
  gslab::MeshPtr ptr;
};

extern "C" {

const char* gslab_version(void) { return "0.1.0"; }

const char* gslab_last_error(void) { return g_last_error.c_str(); }

int gslab_mesh_cartesian(int nx, int ny, const double lo[2], const double hi[2],
                         gslab_mesh** out) {
  return guarded([&] {
    if (!lo || !hi || !out) throw gslab::Error("null argument");
    *out = new gslab_mesh{
        gslab::build_cartesian(nx, ny, gslab::Vec2(lo[0], lo[1]), gslab::Vec2(hi[0], hi[1]))};
  });
}

int gslab_mesh_simplicial(int nx, int ny, const double lo[2], const double hi[2],
                          gslab_mesh** out) {
  return guarded([&] {
    if (!lo || !hi || !out) throw gslab::Error("null argument");
    *out = new gslab_mesh{
        gslab::build_simplicial(nx, ny, gslab::Vec2(lo[0], lo[1]), gslab::Vec2(hi[0], hi[1]))};
  });
}

int gslab_mesh_perturb(const gslab_mesh* mesh, double amplitude, uint64_t seed,
                       gslab_mesh** out) {
  return guarded([&] {
    if (!mesh || !out) throw gslab::Error("null argument");
    *out = new gslab_mesh{gslab::perturb(*mesh->ptr, amplitude, seed)};
  });
}

int gslab_mesh_read(const char* path, gslab_mesh** out) {
  return guarded([&] {
    if (!path || !out) throw gslab::Error("null argument");
    try {
      *out = new gslab_mesh{gslab::read_mesh(path)};
    } catch (const gslab::Error& e) {
      // malformed files map onto the parse status
      throw gslab::ConfigError(e.what());
    }
  });
}

int gslab_mesh_write(const gslab_mesh* mesh, const char* path) {
  return guarded([&] {
    if (!mesh || !path) throw gslab::Error("null argument");
    gslab::write_mesh(*mesh->ptr, path);
  });
}

int gslab_mesh_stats(const gslab_mesh* mesh, double* h_max, double* regularity, int* n_cells,
                     int* n_faces, int* n_vertices) {
  return guarded([&] {
    if (!mesh) throw gslab::Error("null argument");
    const gslab::MeshStats st = gslab::mesh_stats(*mesh->ptr);
    if (h_max) *h_max = st.h_max;
    if (regularity) *regularity = st.regularity;
    if (n_cells) *n_cells = st.n_cells;
    if (n_faces) *n_faces = st.n_faces;
    if (n_vertices) *n_vertices = st.n_vertices;
  });
}

int gslab_mesh_validate(const gslab_mesh* mesh, int* n_violations, char* buf, size_t buflen) {
  return guarded([&] {
    if (!mesh) throw gslab::Error("null argument");
    const auto violations = gslab::validate(*mesh->ptr);
    if (n_violations) *n_violations = int(violations.size());
    if (!violations.empty()) copy_out(violations.front().what, buf, buflen);
    else copy_out("", buf, buflen);
  });
}

void gslab_mesh_free(gslab_mesh* mesh) { delete mesh; }

int gslab_run(const char* config_path, const char* out_dir, int64_t seed_override, int threads,
              int* bands_ok) {
  return guarded([&] {
    if (!config_path || !out_dir) throw gslab::Error("null argument");
    if (threads < 1) throw gslab::Error("threads must be >= 1");
    gslab::RunConfig cfg = gslab::parse_config_file(config_path);
    if (seed_override >= 0) {
      cfg.seed = std::uint64_t(seed_override);
      cfg.family.seed = cfg.seed;
    }
    const gslab::RunResult res = gslab::run_config(cfg, out_dir);
    if (bands_ok) *bands_ok = res.bands_ok ? 1 : 0;
  });
}

int gslab_list_schemes(char* buf, size_t buflen) {
  return guarded([&] { copy_out(gslab::list_schemes_text(), buf, buflen); });
}

int gslab_describe(const char* scheme, char* buf, size_t buflen) {
  return guarded([&] {
    if (!scheme) throw gslab::Error("null argument");
    copy_out(gslab::describe_scheme(gslab::scheme_kind_from_string(scheme)) + "\n", buf, buflen);
  });
}

}  // extern "C"
