#include <filesystem>
#include <string>

#include "doctest.h"
#include "eta/common.hpp"
#include "eta/pipeline.hpp"
#include "eta/stats_io.hpp"

using namespace eta;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("eta_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

bool all_pass(const PipelineResult& r) {
  for (const auto& a : r.audit)
    if (a.rfind("FAIL", 0) == 0) return false;
  return r.exit_code == 0;
}

void check_identical(const PipelineResult& a, const PipelineResult& b) {
  REQUIRE(a.artifacts.size() == b.artifacts.size());
  for (std::size_t i = 0; i < a.artifacts.size(); ++i) {
    CHECK(fs::path(a.artifacts[i]).filename() == fs::path(b.artifacts[i]).filename());
    CHECK(read_text(a.artifacts[i]) == read_text(b.artifacts[i]));
  }
}

}  // namespace

TEST_CASE("config text") {
  PipelineConfig c;
  apply_config_text(c, "# run\nmode = rmt\nn=12\ncount = 5 # small\nseed=99\nplot-contours=true\n\nout=/tmp/x\n");
  CHECK(c.mode == "rmt");
  CHECK(c.n == 12);
  CHECK(c.count == 5);
  CHECK(c.seed == 99);
  CHECK(c.plot_contours);
  CHECK(c.out == "/tmp/x");
  CHECK_NOTHROW(validate(c));
  CHECK_THROWS_AS(apply_config_text(c, "colour=blue\n"), Error);
  CHECK_THROWS_AS(apply_config_text(c, "n=-3\n"), Error);
  CHECK_THROWS_AS(apply_config_text(c, "no equals sign\n"), Error);
  CHECK_THROWS_AS(apply_config_text(c, "spira=maybe\n"), Error);
  CHECK_THROWS_AS(apply_config_file(c, "/nonexistent/eta.cfg"), Error);

  PipelineConfig bad;
  bad.mode = "draw";
  CHECK_THROWS_AS(validate(bad), Error);
  bad.mode = "zeta";
  bad.t0 = 50;
  bad.t1 = 40;
  CHECK_THROWS_AS(validate(bad), Error);
  bad.mode = "verify";
  CHECK_THROWS_AS(validate(bad), Error);
  bad.mode = "rmt";
  bad.n = 2;
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("zeta mode end to end") {
  const fs::path d1 = scratch("zeta1"), d2 = scratch("zeta2");
  PipelineConfig c;
  c.mode = "zeta";
  c.t0 = 10;
  c.t1 = 140;
  c.spira = true;
  c.plot_contours = true;
  c.out = d1.string();
  const auto r1 = run_pipeline(c);
  CHECK(all_pass(r1));
  for (const char* f : {"catalog.csv", "catalog.json", "summary.json", "hist_scaled_distance.svg",
                        "hist_type2_gaps.csv", "contours.svg", "report.txt"})
    CHECK(fs::exists(d1 / f));

  c.out = d2.string();
  check_identical(r1, run_pipeline(c));

  const Catalog cat = read_catalog((d1 / "catalog.csv").string());
  int with_partner = 0, t0 = 0;
  for (const auto& r : cat.records) {
    if (r.kind != ZeroKind::deriv1) continue;
    with_partner += r.spira_partner.has_value();
    t0 += r.type_class == ZeroType::T0;
  }
  CHECK(with_partner > 0);
  CHECK(t0 >= 2);  // 113 and 132
  CHECK(read_text((d1 / "contours.svg").string()).find("#1a9850") != std::string::npos);

  SUBCASE("verify, analyze and plot read the catalog back") {
    PipelineConfig v;
    v.mode = "verify";
    v.input = (d1 / "catalog.csv").string();
    v.out = (d1 / "verify").string();
    CHECK(all_pass(run_pipeline(v)));

    PipelineConfig a = v;
    a.mode = "analyze";
    a.out = (d1 / "analyze").string();
    CHECK(all_pass(run_pipeline(a)));
    CHECK(fs::exists(d1 / "analyze" / "analysis.csv"));
    CHECK(fs::exists(d1 / "analyze" / "displacement.svg"));

    PipelineConfig p = v;
    p.mode = "plot";
    p.out = (d1 / "plot").string();
    CHECK(all_pass(run_pipeline(p)));
    CHECK(read_text((d1 / "plot" / "hist_scaled_distance.csv").string()) ==
          read_text((d1 / "hist_scaled_distance.csv").string()));
  }

  SUBCASE("a tampered catalog fails verification") {
    std::string text = read_text((d1 / "catalog.csv").string());
    const auto pos = text.find(",T1,");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 4, ",T0,");
    write_text((d1 / "tampered.csv").string(), text);
    PipelineConfig v;
    v.mode = "verify";
    v.input = (d1 / "tampered.csv").string();
    v.out = (d1 / "verify2").string();
    const auto r = run_pipeline(v);
    CHECK(r.exit_code != 0);
  }
}

TEST_CASE("rmt mode is deterministic under its seed") {
  const fs::path d1 = scratch("rmt1"), d2 = scratch("rmt2"), d3 = scratch("rmt3");
  PipelineConfig c;
  c.mode = "rmt";
  c.n = 9;
  c.count = 30;
  c.seed = 7;
  c.out = d1.string();
  const auto r1 = run_pipeline(c);
  CHECK(all_pass(r1));
  c.out = d2.string();
  c.threads = 2;
  check_identical(r1, run_pipeline(c));
  c.out = d3.string();
  c.seed = 8;
  const auto r3 = run_pipeline(c);
  CHECK(read_text((d3 / "ensemble.csv").string()) != read_text((d1 / "ensemble.csv").string()));

  PipelineConfig v;
  v.mode = "verify";
  v.input = (d1 / "ensemble.csv").string();
  v.out = (d1 / "verify").string();
  CHECK(all_pass(run_pipeline(v)));

  PipelineConfig p = v;
  p.mode = "plot";
  p.out = (d1 / "plot").string();
  CHECK(all_pass(run_pipeline(p)));
  CHECK(read_text((d1 / "plot" / "hist_type2_gaps.csv").string()) == read_text((d1 / "hist_type2_gaps.csv").string()));
  CHECK(read_text((d1 / "plot" / "hist_radius.csv").string()) == read_text((d1 / "hist_radius.csv").string()));
}

TEST_CASE("bad input files surface as errors") {
  const fs::path d = scratch("bad");
  fs::create_directories(d);
  write_text((d / "junk.csv").string(), "not a catalog\n");
  PipelineConfig v;
  v.mode = "verify";
  v.input = (d / "junk.csv").string();
  v.out = d.string();
  CHECK_THROWS_AS(run_pipeline(v), Error);
  v.input = (d / "missing.csv").string();
  CHECK_THROWS_AS(run_pipeline(v), Error);
}
