// Orchestration behind the eta-atlas command line.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace eta {

struct PipelineConfig {
  std::string mode;  ///< zeta, rmt, analyze, plot, verify
  double t0 = 10, t1 = 500;
  bool spira = false;          ///< zeta: link each zeta' zero to its zeta'' partner
  bool plot_contours = false;  ///< zeta: level-curve figure of the window
  int n = 22, count = 1000;
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string input;  ///< analyze / plot / verify: catalog.csv or ensemble.csv
  unsigned threads = 0;
};

/// Applies key=value lines (# comments, blank lines ignored). Keys are the
/// long option names: mode, t0, t1, spira, plot-contours, n, count, seed, out,
/// input, threads. Throws config_error naming the line.
void apply_config_text(PipelineConfig& cfg, const std::string& text);
void apply_config_file(PipelineConfig& cfg, const std::string& path);
void validate(const PipelineConfig& cfg);

struct PipelineResult {
  int exit_code = 0;  ///< nonzero iff a hard invariant failed
  std::vector<std::string> artifacts;  ///< paths written, in order
  std::vector<std::string> audit;      ///< "PASS ..." / "FAIL ..." lines
};

/// Runs one mode and writes its artifacts under cfg.out. Errors from bad
/// configuration or input propagate; invariant failures are reported through
/// the audit and the exit code.
PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);

}  // namespace eta
