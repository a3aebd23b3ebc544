// eta-atlas: zeta' zero classification and the CUE analog from the command line.
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "eta/common.hpp"
#include "eta/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"eta(s) = pi^{-s/2} Gamma(s/2) zeta'(s): zero classification on Re eta = 0 and the CUE analog"};
  app.require_subcommand(1);
  eta::PipelineConfig cfg;
  std::string config_file;
  bool quiet = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "seed recorded in (zeta) or driving (rmt) the run")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "worker threads (0: ETA_ATLAS_THREADS or hardware)");
    sub->add_option("--config", config_file, "key=value file; its entries override the flags");
    sub->add_flag("--quiet", quiet, "only print the audit");
  };

  auto* zeta = app.add_subcommand("zeta", "find and classify zeros of zeta' on a window");
  zeta->add_option("--t0", cfg.t0, "lower height")->capture_default_str();
  zeta->add_option("--t1", cfg.t1, "upper height")->capture_default_str();
  zeta->add_flag("--spira", cfg.spira, "trace Im(zeta''/zeta') = 0 to each zeta'' zero");
  zeta->add_flag("--plot-contours", cfg.plot_contours, "draw the Re eta = 0 curves of the window");
  common(zeta);

  auto* rmt = app.add_subcommand("rmt", "sample CUE matrices and classify the zeros of p_A'");
  rmt->add_option("--n", cfg.n, "matrix size")->capture_default_str();
  rmt->add_option("--count", cfg.count, "number of samples")->capture_default_str();
  common(rmt);

  for (auto [name, help] : {std::pair{"analyze", "curvature, chords, theta limits and rescaled coordinates of a catalog"},
                            std::pair{"plot", "histograms from a catalog or ensemble file"},
                            std::pair{"verify", "recheck the counting identities of a catalog or ensemble file"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("input", cfg.input, "catalog.csv or ensemble.csv")->required();
    common(sub);
  }

  CLI11_PARSE(app, argc, argv);
  cfg.mode = app.get_subcommands().front()->get_name();

  try {
    if (!config_file.empty()) eta::apply_config_file(cfg, config_file);
    const eta::PipelineResult r = eta::run_pipeline(cfg, quiet ? nullptr : &std::cerr);
    for (const auto& line : r.audit) std::cout << line << '\n';
    return r.exit_code;
  } catch (const eta::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
