#include "eta/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "eta/analysis.hpp"
#include "eta/level_curves.hpp"
#include "eta/rmt.hpp"
#include "eta/stats_io.hpp"
#include "json.hpp"

namespace eta {

namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  fail(ErrorKind::config_error, where + ": expected a boolean, got '" + v + "'");
}

template <class T>
T parse_number(const std::string& v, const std::string& where) {
  try {
    if constexpr (std::is_same_v<T, double>) {
      return parse_double(v, where);
    } else {
      std::size_t pos = 0;
      const unsigned long long x = std::stoull(v, &pos);
      if (pos != v.size() || v.front() == '-') throw std::invalid_argument(v);
      return static_cast<T>(x);
    }
  } catch (const std::exception&) {
    fail(ErrorKind::config_error, where + ": bad number '" + v + "'");
  }
}

struct Run {
  const PipelineConfig& cfg;
  std::ostream* log;
  PipelineResult result;

  std::string path(const std::string& name) const { return (fs::path(cfg.out) / name).string(); }
  void write(const std::string& name, const std::string& text) {
    write_text(path(name), text);
    result.artifacts.push_back(path(name));
    if (log) *log << "wrote " << path(name) << '\n';
  }
  void check(bool ok, const std::string& what) {
    result.audit.push_back(std::string(ok ? "PASS " : "FAIL ") + what);
    if (!ok) result.exit_code = 1;
    if (log) *log << result.audit.back() << '\n';
  }
  void note(const std::string& what) {
    result.audit.push_back("NOTE " + what);
    if (log) *log << result.audit.back() << '\n';
  }
  void finish() {
    std::string text;
    for (const auto& a : result.audit) text += a + '\n';
    write("report.txt", text);
  }
};

nlohmann::json summary_json(const Summary& s) {
  return {{"count", s.count}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3},
          {"fraction_below_half", s.fraction_below_half}, {"fraction_below_one", s.fraction_below_one}};
}

nlohmann::json histogram_json(const Histogram& h) {
  nlohmann::json rows = nlohmann::json::object();
  for (std::size_t r = 0; r < h.row_names.size(); ++r) rows[h.row_names[r]] = summary_json(h.summaries[r]);
  return rows;
}

void emit_histogram(Run& run, const std::string& stem, const Histogram& h, const std::string& title) {
  run.write(stem + ".csv", histogram_csv(h));
  run.write(stem + ".svg", histogram_svg(h, title));
}

// (beta' - 1/2) log gamma' per type and normalized type-2 gaps.
struct ZetaSeries {
  std::array<std::vector<double>, 3> scaled;
  std::vector<double> gaps;
};

ZetaSeries zeta_series(const Catalog& cat) {
  ZetaSeries z;
  for (const ZeroRecord& r : cat.records) {
    if (r.kind != ZeroKind::deriv1 || !r.type_class) continue;
    const double lg = std::log(r.gamma());
    z.scaled[static_cast<int>(*r.type_class)].push_back((r.beta() - 0.5) * lg);
    if (r.paired_crossings) z.gaps.push_back((r.paired_crossings->second - r.paired_crossings->first) * lg / kTwoPi);
  }
  return z;
}

void zeta_histograms(Run& run, const Catalog& cat, nlohmann::json& summary) {
  const ZetaSeries z = zeta_series(cat);
  if (z.scaled[0].empty() && z.scaled[1].empty() && z.scaled[2].empty()) {
    run.note("no classified zeros of zeta'; histograms skipped");
    return;
  }
  const Histogram h = make_histogram(z.scaled, default_scaled_distance_spec("(beta' - 1/2) log gamma'"));
  emit_histogram(run, "hist_scaled_distance", h, "zeros of zeta' by type");
  summary["scaled_distance"] = histogram_json(h);
  if (!z.gaps.empty()) {
    const Histogram g = make_histogram(z.gaps, default_gap_spec("(gamma+ - gamma-) log gamma' / 2 pi"));
    emit_histogram(run, "hist_type2_gaps", g, "type-2 gaps");
    summary["type2_gaps"] = histogram_json(g);
  }
}

void run_zeta(Run& run) {
  const PipelineConfig& cfg = run.cfg;
  ClassifyWindowOptions opt;
  opt.threads = cfg.threads;
  opt.keep_traces = cfg.plot_contours;
  opt.throw_on_failure = false;
  if (run.log) *run.log << "classifying zeros of zeta' on (" << cfg.t0 << ", " << cfg.t1 << ")\n";
  WindowClassification w = classify_window(cfg.t0, cfg.t1, opt);
  Catalog& cat = w.catalog;
  cat.seed = cfg.seed;
  const ClassificationReport& rep = w.report;

  std::ostringstream m;
  m << "effective window (" << rep.t0 << ", " << rep.t1 << ")";
  run.note(m.str());
  run.check(rep.identity_critical, "N1 + 2 N2 = " + std::to_string(rep.N1 + 2 * rep.N2) + ", critical zeros = " +
                                       std::to_string(rep.critical));
  run.check(rep.identity_deriv, "N0 + N1 + N2 = " + std::to_string(rep.N0 + rep.N1 + rep.N2) + ", zeros of zeta' = " +
                                    std::to_string(rep.deriv1));
  run.check(rep.bijectivity_failures == 0, "bijectivity failures = " + std::to_string(rep.bijectivity_failures));
  run.check(rep.unresolved == 0, "unresolved zeros of zeta' = " + std::to_string(rep.unresolved));
  for (const auto& n : rep.notes) run.note(n);

  if (cfg.spira) {
    if (run.log) *run.log << "tracing Spira curves\n";
    const SpiraWindowReport sp = spira_window(rep.t0, rep.t1);
    run.check(sp.injective, "Spira map injective on (" + format_double(sp.t0) + ", " + format_double(sp.t1) + ")");
    run.check(sp.onto, "Spira map onto the zeta'' catalog");
    for (ZeroRecord& r : cat.records) {
      if (r.kind != ZeroKind::deriv1) continue;
      for (const ZeroRecord& s : sp.deriv1_zeros)
        if (std::abs(s.location - r.location) < 1e-9) r.spira_partner = s.spira_partner;
    }
  }

  std::vector<TypeClassification> traces;
  for (const ZeroRecord& r : cat.records) {
    if (r.kind != ZeroKind::deriv1) continue;
    for (const auto& c : w.classifications)
      if (c.location == r.location) {
        traces.push_back(c);
        traces.back().zero_index = r.index;
        break;
      }
  }

  std::filesystem::create_directories(cfg.out);
  write_catalog(run.path("catalog.csv"), cat);
  run.result.artifacts.push_back(run.path("catalog.csv"));
  run.write("catalog.json", catalog_json(cat, &traces));

  nlohmann::json summary;
  summary["window"] = {rep.t0, rep.t1};
  summary["critical"] = rep.critical;
  summary["deriv1"] = rep.deriv1;
  summary["N0"] = rep.N0;
  summary["N1"] = rep.N1;
  summary["N2"] = rep.N2;
  summary["N2_minus_N0"] = rep.N2 - rep.N0;
  summary["log2_prediction"] = (rep.t1 - rep.t0) / kTwoPi * std::log(2.0);
  zeta_histograms(run, cat, summary);
  run.write("summary.json", summary.dump(1) + "\n");

  if (cfg.plot_contours) {
    const SearchBox box{-7.0, 8.0, cfg.t0 <= 10.0 ? 0.0 : cfg.t0, cfg.t1};
    std::ostringstream title;
    title << "Re eta = 0, " << format_double(box.t_min) << " <= t <= " << format_double(box.t_max);
    run.write("contours.svg", contour_svg(traces, cat, box, title.str()));
  }
}

void rmt_histograms(Run& run, const EnsembleStats& st, nlohmann::json& out) {
  const Histogram h = make_histogram(st.scaled_radius, default_scaled_distance_spec("n(1 - |mu'|)"));
  emit_histogram(run, "hist_radius", h, "zeros of p_A' by type, n = " + std::to_string(st.n));
  out["scaled_radius"] = histogram_json(h);
  if (!st.type2_gaps.empty()) {
    const Histogram g = make_histogram(st.type2_gaps, default_gap_spec("n(theta+ - theta-) / 2 pi"));
    emit_histogram(run, "hist_type2_gaps", g, "type-2 gaps, n = " + std::to_string(st.n));
    out["type2_gaps"] = histogram_json(g);
  }
}

void run_rmt(Run& run) {
  const PipelineConfig& cfg = run.cfg;
  if (run.log) *run.log << "sampling " << cfg.count << " CUE matrices of size " << cfg.n << "\n";
  const EnsembleStats st = batch_stats(cfg.n, cfg.count, cfg.seed, cfg.threads, {}, true);
  run.check(st.identity_failures == 0, "samples violating N2 - N0 = 1, N1 + 2 N0 = n - 2: " +
                                           std::to_string(st.identity_failures));
  run.check(st.sector_counterexamples == 0, "sector counterexamples = " + std::to_string(st.sector_counterexamples) +
                                                " over " + std::to_string(st.sector_checks) + " small gaps");
  run.check(st.min_F >= 0.5, "min F on the circle = " + format_double(st.min_F));
  run.check(st.max_F_at_eigen < 1e-8, "max |F(theta_k) - n/2| = " + format_double(st.max_F_at_eigen));
  run.check(st.max_gap_integral_error < 1e-8, "max |int F over a gap - pi| = " + format_double(st.max_gap_integral_error));
  if (st.resamples) run.note("resampled seeds: " + std::to_string(st.resamples));

  std::filesystem::create_directories(cfg.out);
  run.write("ensemble.csv", ensemble_csv(st));
  nlohmann::json j;
  j["n"] = st.n;
  j["count"] = st.count;
  j["seed"] = st.seed;
  const double total = static_cast<double>(st.N0 + st.N1 + st.N2);
  j["N0"] = st.N0;
  j["N1"] = st.N1;
  j["N2"] = st.N2;
  j["fractions"] = {st.N0 / total, st.N1 / total, st.N2 / total};
  j["sector_checks"] = st.sector_checks;
  j["min_F"] = st.min_F;
  rmt_histograms(run, st, j);
  run.write("stats.json", j.dump(1) + "\n");
}

bool is_ensemble_file(const std::string& text) { return text.rfind("# eta-atlas ensemble", 0) == 0; }

void run_analyze(Run& run) {
  const PipelineConfig& cfg = run.cfg;
  const Catalog cat = read_catalog(cfg.input);
  std::filesystem::create_directories(cfg.out);
  std::ostringstream csv;
  csv << "index,beta,gamma,type,kappa,chord,chord_bound,theta,theta_defect,x,y,delta,x_predicted\n";
  int computed = 0, chord_violations = 0, failures = 0;
  std::vector<Complex> w;
  for (const ZeroRecord& r : cat.records) {
    if (r.kind != ZeroKind::deriv1 || !r.type_class) continue;
    csv << r.index << ',' << format_double(r.beta()) << ',' << format_double(r.gamma()) << ','
        << to_string(*r.type_class) << ',';
    try {
      const double kappa = curvature_at_zero(r.location, cat.params);
      csv << format_double(kappa) << ',';
      try {
        const Chord ch = chord_length(r.beta(), kappa);
        csv << format_double(ch.length) << ',' << format_double(ch.bound) << ',';
        ++computed;
        if (ch.length > ch.bound * (1 + 1e-12)) ++chord_violations;
      } catch (const Error&) {
        csv << ",,";
      }
      const ThetaLimit th = theta_limit(r.location, 1e-3, cat.params);
      csv << format_double(th.theta) << ',' << format_double(th.defect) << ',';
      if (r.paired_crossings) {
        const Type2Triple t = rescaled_coords(r);
        csv << format_double(t.x) << ',' << format_double(t.y) << ',' << format_double(t.delta) << ','
            << format_double(t.x_predicted) << '\n';
      } else {
        csv << ",,,\n";
      }
    } catch (const Error& e) {
      ++failures;
      csv << ",,,,,,,,\n";
      run.note("zero " + std::to_string(r.index) + ": " + e.what());
    }
    if (r.spira_partner) w.push_back(rho2_displacement(r.location, *r.spira_partner));
  }
  run.check(chord_violations == 0, "chord bound violated at " + std::to_string(chord_violations) + " of " +
                                        std::to_string(computed) + " zeros");
  run.check(failures == 0, "analysis failures = " + std::to_string(failures));
  run.write("analysis.csv", csv.str());
  if (!w.empty()) run.write("displacement.svg", density_svg(make_density(w, -3, 3, -3, 3, 60, 60), "rho'' displacement"));
}

void run_plot(Run& run) {
  const PipelineConfig& cfg = run.cfg;
  const std::string text = read_text(cfg.input);
  std::filesystem::create_directories(cfg.out);
  nlohmann::json j;
  if (is_ensemble_file(text)) {
    EnsembleStats st = parse_ensemble_csv(text);
    for (const SampleRecord& r : st.samples) {
      const UnitarySample s = from_eigenangles(r.eigenangles);
      const RMTClassification c = classify_sample(s);
      for (const auto& p : c.type2_pairs)
        st.type2_gaps.push_back(st.n * ccw_gap(s.eigenangles[p[0]], s.eigenangles[p[1]]) / kTwoPi);
    }
    std::sort(st.type2_gaps.begin(), st.type2_gaps.end());
    rmt_histograms(run, st, j);
  } else {
    zeta_histograms(run, parse_catalog_csv(text), j);
  }
  run.write("plot_summary.json", j.dump(1) + "\n");
}

void run_verify(Run& run) {
  const PipelineConfig& cfg = run.cfg;
  const std::string text = read_text(cfg.input);
  if (is_ensemble_file(text)) {
    const EnsembleStats st = parse_ensemble_csv(text);
    int bad = 0;
    for (const SampleRecord& r : st.samples)
      if (r.N2 - r.N0 != 1 || r.N1 + 2 * r.N0 != st.n - 2) ++bad;
    run.check(static_cast<int>(st.samples.size()) == st.count,
              "samples present = " + std::to_string(st.samples.size()) + " of " + std::to_string(st.count));
    run.check(bad == 0, "samples violating the type identities = " + std::to_string(bad));
    int outside = 0;
    for (const SampleRecord& r : st.samples)
      for (const Complex& m : r.deriv_roots) outside += std::abs(m) > 1.0 + 1e-10;
    run.check(outside == 0, "zeros of p_A' outside the unit disk = " + std::to_string(outside));
  } else {
    const Catalog cat = parse_catalog_csv(text);
    int critical = 0, deriv = 0, N[3] = {0, 0, 0}, untyped = 0, bad_pairs = 0;
    std::vector<double> ords;
    for (const ZeroRecord& r : cat.records)
      if (r.kind == ZeroKind::critical) ords.push_back(r.gamma());
    std::sort(ords.begin(), ords.end());
    auto present = [&](double g) {
      auto it = std::lower_bound(ords.begin(), ords.end(), g - 1e-6);
      return it != ords.end() && std::abs(*it - g) <= 1e-6;
    };
    for (const ZeroRecord& r : cat.records) {
      if (r.kind == ZeroKind::critical) ++critical;
      if (r.kind != ZeroKind::deriv1) continue;
      ++deriv;
      if (!r.type_class) {
        ++untyped;
        continue;
      }
      ++N[static_cast<int>(*r.type_class)];
      if (*r.type_class == ZeroType::T2 &&
          (!r.paired_crossings || !present(r.paired_crossings->first) || !present(r.paired_crossings->second)))
        ++bad_pairs;
    }
    run.check(N[1] + 2 * N[2] == critical,
              "N1 + 2 N2 = " + std::to_string(N[1] + 2 * N[2]) + ", critical zeros = " + std::to_string(critical));
    run.check(N[0] + N[1] + N[2] == deriv,
              "N0 + N1 + N2 = " + std::to_string(N[0] + N[1] + N[2]) + ", zeros of zeta' = " + std::to_string(deriv));
    run.check(untyped == 0, "unclassified zeros of zeta' = " + std::to_string(untyped));
    run.check(bad_pairs == 0, "type-2 pairs not in the critical catalog = " + std::to_string(bad_pairs));
  }
  std::filesystem::create_directories(cfg.out);
}

}  // namespace

void apply_config_text(PipelineConfig& cfg, const std::string& text) {
  std::istringstream in(text);
  std::string line;
  for (int no = 1; std::getline(in, line); ++no) {
    const std::string where = "config line " + std::to_string(no);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::config_error, where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (key == "mode") cfg.mode = v;
    else if (key == "t0") cfg.t0 = parse_number<double>(v, where);
    else if (key == "t1") cfg.t1 = parse_number<double>(v, where);
    else if (key == "spira") cfg.spira = parse_bool(v, where);
    else if (key == "plot-contours" || key == "plot_contours") cfg.plot_contours = parse_bool(v, where);
    else if (key == "n") cfg.n = parse_number<int>(v, where);
    else if (key == "count") cfg.count = parse_number<int>(v, where);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(v, where);
    else if (key == "out") cfg.out = v;
    else if (key == "input") cfg.input = v;
    else if (key == "threads") cfg.threads = parse_number<unsigned>(v, where);
    else fail(ErrorKind::config_error, where + ": unknown key '" + key + "'");
  }
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const Error&) {
    fail(ErrorKind::config_error, "cannot read config file '" + path + "'");
  }
  apply_config_text(cfg, text);
}

void validate(const PipelineConfig& cfg) {
  static const std::vector<std::string> modes{"zeta", "rmt", "analyze", "plot", "verify"};
  if (std::find(modes.begin(), modes.end(), cfg.mode) == modes.end())
    fail(ErrorKind::config_error, "unknown mode '" + cfg.mode + "'");
  if (cfg.mode == "zeta" && !(cfg.t0 > 7.0 && cfg.t1 > cfg.t0 && cfg.t1 <= 5000.0))
    fail(ErrorKind::config_error, "zeta mode needs 7 < t0 < t1 <= 5000");
  if (cfg.mode == "rmt" && !(cfg.n >= 3 && cfg.n <= 64)) fail(ErrorKind::config_error, "rmt mode needs 3 <= n <= 64");
  if (cfg.mode == "rmt" && cfg.count < 1) fail(ErrorKind::config_error, "rmt mode needs count >= 1");
  if ((cfg.mode == "analyze" || cfg.mode == "plot" || cfg.mode == "verify") && cfg.input.empty())
    fail(ErrorKind::config_error, cfg.mode + " needs an input file");
  if (cfg.out.empty()) fail(ErrorKind::config_error, "empty output directory");
}

PipelineResult run_pipeline(const PipelineConfig& cfg, std::ostream* log) {
  validate(cfg);
  Run run{cfg, log, {}};
  if (cfg.mode == "zeta") run_zeta(run);
  else if (cfg.mode == "rmt") run_rmt(run);
  else if (cfg.mode == "analyze") run_analyze(run);
  else if (cfg.mode == "plot") run_plot(run);
  else run_verify(run);
  run.finish();
  return run.result;
}

}  // namespace eta
