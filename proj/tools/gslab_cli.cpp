// Batch front-end of the gradient-scheme laboratory. Talks to the shared
// library exclusively through its C interface.
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gslab.h"

namespace {

int report_failure(int status) {
  std::fprintf(stderr, "error: %s\n", gslab_last_error());
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gslab - gradient-scheme laboratory for diffusion problems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  long long seed = -1;
  int threads = 1;
  auto* run = app.add_subcommand("run", "execute a JSON run configuration");
  run->add_option("config", config_path, "path to the run configuration")->required();
  run->add_option("--out-dir", out_dir, "directory for the CSV/JSON artifacts");
  run->add_option("--seed", seed, "override the configuration seed");
  run->add_option("--threads", threads, "worker threads (>= 1; currently sequential)")
      ->check(CLI::PositiveNumber);

  auto* list = app.add_subcommand("list", "list the available schemes");

  std::string scheme;
  auto* describe = app.add_subcommand("describe", "describe one scheme");
  describe->add_option("scheme", scheme, "scheme name (see `gslab list`)")->required();

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    int bands_ok = 1;
    const int status = gslab_run(config_path.c_str(), out_dir.c_str(), seed, threads, &bands_ok);
    if (status != GSLAB_OK) return report_failure(status);
    if (!bands_ok) {
      std::fprintf(stderr, "acceptance bands failed (artifacts written)\n");
      return 1;
    }
    std::printf("ok\n");
    return 0;
  }
  if (list->parsed()) {
    std::vector<char> buf(8192);
    if (gslab_list_schemes(buf.data(), buf.size()) != GSLAB_OK) return report_failure(1);
    std::fputs(buf.data(), stdout);
    return 0;
  }
  if (describe->parsed()) {
    std::vector<char> buf(8192);
    if (gslab_describe(scheme.c_str(), buf.data(), buf.size()) != GSLAB_OK)
      return report_failure(1);
    std::fputs(buf.data(), stdout);
    return 0;
  }
  return 0;
}
