#include "eta/stats_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"

namespace eta {

namespace {

constexpr const char* kCatalogMagic = "# eta-atlas catalog v";
constexpr const char* kEnsembleMagic = "# eta-atlas ensemble v";
constexpr const char* kCatalogColumns =
    "kind,index,beta,gamma,type,gamma_minus,gamma_plus,spira_beta,spira_gamma,on_z_curve,refine_residual";
constexpr const char* kEnsembleColumns = "sample,sample_seed,j,mu_re,mu_im,type";
constexpr const char* kEigenColumns = "sample,k,theta";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

template <class Int>
Int parse_int(std::string_view text, const std::string& where) {
  Int v{};
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty()) fail(ErrorKind::parse_error, where + ": bad integer '" + std::string(text) + "'");
  return v;
}

std::string_view precision_name(Precision p) {
  switch (p) {
    case Precision::binary64: return "binary64";
    case Precision::binary128: return "binary128";
    case Precision::automatic: return "automatic";
  }
  return "automatic";
}

Precision precision_from(std::string_view s, const std::string& where) {
  if (s == "binary64") return Precision::binary64;
  if (s == "binary128") return Precision::binary128;
  if (s == "automatic") return Precision::automatic;
  fail(ErrorKind::parse_error, where + ": unknown precision '" + std::string(s) + "'");
}

ZeroKind kind_from(std::string_view s, const std::string& where) {
  for (ZeroKind k : {ZeroKind::critical, ZeroKind::deriv1, ZeroKind::deriv2, ZeroKind::real_axis})
    if (to_string(k) == s) return k;
  fail(ErrorKind::parse_error, where + ": unknown kind '" + std::string(s) + "'");
}

ZeroType type_from(std::string_view s, const std::string& where) {
  for (ZeroType t : {ZeroType::T0, ZeroType::T1, ZeroType::T2})
    if (to_string(t) == s) return t;
  fail(ErrorKind::parse_error, where + ": unknown type '" + std::string(s) + "'");
}

void check_version(const std::vector<std::string>& lines, const char* magic, int expected, const char* what) {
  const std::string m = magic;
  if (lines.empty() || lines[0].rfind(m, 0) != 0)
    fail(ErrorKind::parse_error, std::string("line 1: not an eta-atlas ") + what + " file");
  const int v = parse_int<int>(std::string_view(lines[0]).substr(m.size()), "line 1");
  if (v != expected)
    fail(ErrorKind::version_mismatch, std::string(what) + " schema v" + std::to_string(v) + ", reader expects v" +
                                          std::to_string(expected));
}

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

nlohmann::json trace_json(const ContourTrace& tr) {
  nlohmann::json j;
  j["color"] = std::string(to_string(tr.color));
  j["termination"] = std::string(to_string(tr.termination));
  j["crossing"] = tr.crossing ? nlohmann::json(*tr.crossing) : nlohmann::json(nullptr);
  j["end"] = {tr.end.real(), tr.end.imag()};
  j["arc_length"] = tr.arc_length;
  nlohmann::json pts = nlohmann::json::array();
  for (const Complex& p : tr.points) pts.push_back({p.real(), p.imag()});
  j["points"] = std::move(pts);
  return j;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

double parse_double(std::string_view text, const std::string& where) {
  double v = 0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty())
    fail(ErrorKind::parse_error, where + ": bad number '" + std::string(text) + "'");
  return v;
}

std::string catalog_csv(const Catalog& c) {
  std::ostringstream o;
  o << kCatalogMagic << c.schema_version << '\n';
  o << "# window," << format_double(c.t0) << ',' << format_double(c.t1) << '\n';
  o << "# seed," << c.seed << '\n';
  o << "# eval," << c.params.euler_maclaurin_terms << ',' << c.params.bernoulli_order << ','
    << c.params.derivative_order_max << ',' << precision_name(c.params.precision) << '\n';
  for (const auto& [k, v] : c.parameters) {
    if (k.find_first_of(",\n") != std::string::npos || v.find('\n') != std::string::npos)
      fail(ErrorKind::invalid_argument, "catalog parameter '" + k + "' cannot be written to CSV");
    o << "# param," << k << ',' << v << '\n';
  }
  o << kCatalogColumns << '\n';
  for (const ZeroRecord& r : c.records) {
    o << to_string(r.kind) << ',' << r.index << ',' << format_double(r.beta()) << ',' << format_double(r.gamma()) << ',';
    if (r.type_class) o << to_string(*r.type_class);
    o << ',';
    if (r.paired_crossings) o << format_double(r.paired_crossings->first) << ',' << format_double(r.paired_crossings->second);
    else o << ',';
    o << ',';
    if (r.spira_partner) o << format_double(r.spira_partner->real()) << ',' << format_double(r.spira_partner->imag());
    else o << ',';
    o << ',';
    if (r.on_z_curve) o << (*r.on_z_curve ? 1 : 0);
    o << ',' << format_double(r.refine_residual) << '\n';
  }
  return o.str();
}

Catalog parse_catalog_csv(const std::string& text) {
  const auto lines = lines_of(text);
  check_version(lines, kCatalogMagic, kCatalogSchemaVersion, "catalog");
  Catalog c;
  std::size_t i = 1;
  for (; i < lines.size() && lines[i].rfind("# ", 0) == 0; ++i) {
    const std::string where = "line " + std::to_string(i + 1);
    const auto f = split(lines[i].substr(2), ',');
    if (f[0] == "window" && f.size() == 3) {
      c.t0 = parse_double(f[1], where);
      c.t1 = parse_double(f[2], where);
    } else if (f[0] == "seed" && f.size() == 2) {
      c.seed = parse_int<std::uint64_t>(f[1], where);
    } else if (f[0] == "eval" && f.size() == 5) {
      c.params.euler_maclaurin_terms = parse_int<int>(f[1], where);
      c.params.bernoulli_order = parse_int<int>(f[2], where);
      c.params.derivative_order_max = parse_int<int>(f[3], where);
      c.params.precision = precision_from(f[4], where);
    } else if (f[0] == "param" && f.size() >= 3) {
      const std::string rest = lines[i].substr(2 + 6 + f[1].size() + 1);
      c.parameters[f[1]] = rest;
    } else {
      fail(ErrorKind::parse_error, where + ": unknown metadata '" + lines[i] + "'");
    }
  }
  if (i >= lines.size() || lines[i] != kCatalogColumns)
    fail(ErrorKind::parse_error, "line " + std::to_string(i + 1) + ": expected the column header");
  ++i;
  for (int row = 0; i < lines.size(); ++i, ++row) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    const std::string where = "row " + std::to_string(row) + " (line " + std::to_string(i + 1) + ")";
    const auto f = split(lines[i], ',');
    if (f.size() != 11) fail(ErrorKind::parse_error, where + ": expected 11 fields, got " + std::to_string(f.size()));
    ZeroRecord r;
    r.kind = kind_from(f[0], where);
    r.index = parse_int<int>(f[1], where);
    r.location = {parse_double(f[2], where), parse_double(f[3], where)};
    if (!f[4].empty()) r.type_class = type_from(f[4], where);
    if (f[5].empty() != f[6].empty()) fail(ErrorKind::parse_error, where + ": half of a crossing pair");
    if (!f[5].empty()) r.paired_crossings = std::pair{parse_double(f[5], where), parse_double(f[6], where)};
    if (f[7].empty() != f[8].empty()) fail(ErrorKind::parse_error, where + ": half of a Spira partner");
    if (!f[7].empty()) r.spira_partner = Complex(parse_double(f[7], where), parse_double(f[8], where));
    if (!f[9].empty()) {
      if (f[9] != "0" && f[9] != "1") fail(ErrorKind::parse_error, where + ": on_z_curve must be 0 or 1");
      r.on_z_curve = f[9] == "1";
    }
    r.refine_residual = parse_double(f[10], where);
    c.records.push_back(r);
  }
  return c;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_argument, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(ErrorKind::invalid_argument, "write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::invalid_argument, "cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_catalog(const std::string& path, const Catalog& catalog) { write_text(path, catalog_csv(catalog)); }

Catalog read_catalog(const std::string& path) { return parse_catalog_csv(read_text(path)); }

std::string catalog_json(const Catalog& c, const std::vector<TypeClassification>* traces) {
  nlohmann::json j;
  j["schema_version"] = c.schema_version;
  j["window"] = {c.t0, c.t1};
  j["seed"] = c.seed;
  j["eval"] = {{"euler_maclaurin_terms", c.params.euler_maclaurin_terms},
               {"bernoulli_order", c.params.bernoulli_order},
               {"derivative_order_max", c.params.derivative_order_max},
               {"precision", std::string(precision_name(c.params.precision))}};
  j["parameters"] = c.parameters;
  nlohmann::json recs = nlohmann::json::array();
  for (const ZeroRecord& r : c.records) {
    nlohmann::json o;
    o["kind"] = std::string(to_string(r.kind));
    o["index"] = r.index;
    o["beta"] = r.beta();
    o["gamma"] = r.gamma();
    o["type"] = r.type_class ? nlohmann::json(std::string(to_string(*r.type_class))) : nlohmann::json(nullptr);
    o["paired_crossings"] = r.paired_crossings
                                ? nlohmann::json({r.paired_crossings->first, r.paired_crossings->second})
                                : nlohmann::json(nullptr);
    o["spira_partner"] = r.spira_partner ? nlohmann::json({r.spira_partner->real(), r.spira_partner->imag()})
                                         : nlohmann::json(nullptr);
    o["on_z_curve"] = r.on_z_curve ? nlohmann::json(*r.on_z_curve) : nlohmann::json(nullptr);
    o["refine_residual"] = r.refine_residual;
    if (traces && r.kind == ZeroKind::deriv1) {
      for (const auto& t : *traces)
        if (t.zero_index == r.index) {
          o["traces"] = {{"green", trace_json(t.green)}, {"purple", trace_json(t.purple)}};
          break;
        }
    }
    recs.push_back(std::move(o));
  }
  j["records"] = std::move(recs);
  return j.dump(1) + "\n";
}

std::string ensemble_csv(const EnsembleStats& st) {
  std::ostringstream o;
  o << kEnsembleMagic << kEnsembleSchemaVersion << '\n';
  o << "# ensemble," << st.n << ',' << st.count << ',' << st.seed << '\n';
  o << kEnsembleColumns << '\n';
  for (const SampleRecord& r : st.samples)
    for (std::size_t j = 0; j < r.deriv_roots.size(); ++j)
      o << r.index << ',' << r.seed << ',' << j << ',' << format_double(r.deriv_roots[j].real()) << ','
        << format_double(r.deriv_roots[j].imag()) << ",T" << r.types[j] << '\n';
  o << "# eigenangles\n" << kEigenColumns << '\n';
  for (const SampleRecord& r : st.samples)
    for (std::size_t k = 0; k < r.eigenangles.size(); ++k)
      o << r.index << ',' << k << ',' << format_double(r.eigenangles[k]) << '\n';
  return o.str();
}

EnsembleStats parse_ensemble_csv(const std::string& text) {
  const auto lines = lines_of(text);
  check_version(lines, kEnsembleMagic, kEnsembleSchemaVersion, "ensemble");
  EnsembleStats st;
  if (lines.size() < 3 || lines[1].rfind("# ensemble,", 0) != 0) fail(ErrorKind::parse_error, "line 2: expected # ensemble");
  {
    const auto f = split(lines[1].substr(2), ',');
    if (f.size() != 4) fail(ErrorKind::parse_error, "line 2: expected n, count, seed");
    st.n = parse_int<int>(f[1], "line 2");
    st.count = parse_int<int>(f[2], "line 2");
    st.seed = parse_int<std::uint64_t>(f[3], "line 2");
  }
  if (lines[2] != kEnsembleColumns) fail(ErrorKind::parse_error, "line 3: expected the column header");
  std::size_t i = 3;
  int row = 0;
  for (; i < lines.size() && lines[i] != "# eigenangles"; ++i, ++row) {
    const std::string where = "row " + std::to_string(row) + " (line " + std::to_string(i + 1) + ")";
    const auto f = split(lines[i], ',');
    if (f.size() != 6) fail(ErrorKind::parse_error, where + ": expected 6 fields");
    const int idx = parse_int<int>(f[0], where);
    if (st.samples.empty() || st.samples.back().index != idx) {
      if (!st.samples.empty() && idx < st.samples.back().index) fail(ErrorKind::parse_error, where + ": samples out of order");
      st.samples.push_back({});
      st.samples.back().index = idx;
      st.samples.back().seed = parse_int<std::uint64_t>(f[1], where);
    }
    SampleRecord& r = st.samples.back();
    if (parse_int<int>(f[2], where) != static_cast<int>(r.deriv_roots.size()))
      fail(ErrorKind::parse_error, where + ": zero index out of sequence");
    r.deriv_roots.emplace_back(parse_double(f[3], where), parse_double(f[4], where));
    const ZeroType t = type_from(f[5], where);
    r.types.push_back(static_cast<int>(t));
    (t == ZeroType::T0 ? r.N0 : t == ZeroType::T1 ? r.N1 : r.N2)++;
  }
  if (i >= lines.size() || i + 1 >= lines.size() || lines[i + 1] != kEigenColumns)
    fail(ErrorKind::parse_error, "line " + std::to_string(i + 1) + ": missing eigenangle table");
  std::size_t cursor = 0;
  for (i += 2; i < lines.size(); ++i, ++row) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    const std::string where = "row " + std::to_string(row) + " (line " + std::to_string(i + 1) + ")";
    const auto f = split(lines[i], ',');
    if (f.size() != 3) fail(ErrorKind::parse_error, where + ": expected 3 fields");
    const int idx = parse_int<int>(f[0], where);
    while (cursor < st.samples.size() && st.samples[cursor].index != idx) ++cursor;
    if (cursor == st.samples.size()) fail(ErrorKind::parse_error, where + ": eigenangles for an unknown sample");
    st.samples[cursor].eigenangles.push_back(parse_double(f[2], where));
  }
  for (const SampleRecord& r : st.samples) {
    if (static_cast<int>(r.eigenangles.size()) != st.n || static_cast<int>(r.deriv_roots.size()) != st.n - 1)
      fail(ErrorKind::parse_error, "sample " + std::to_string(r.index) + " has the wrong number of entries");
    st.N0 += r.N0;
    st.N1 += r.N1;
    st.N2 += r.N2;
    for (std::size_t j = 0; j < r.deriv_roots.size(); ++j)
      st.scaled_radius[r.types[j]].push_back(st.n * (1.0 - std::abs(r.deriv_roots[j])));
  }
  for (auto& v : st.scaled_radius) std::sort(v.begin(), v.end());
  return st;
}

int HistogramSpec::bins() const { return static_cast<int>(std::lround((hi - lo) / bin_width)); }

void HistogramSpec::validate() const {
  if (!(bin_width > 0) || !(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    fail(ErrorKind::invalid_argument, "histogram needs bin_width > 0 and lo < hi");
  const int b = bins();
  if (b < 1 || std::abs(b * bin_width - (hi - lo)) > 1e-9 * (hi - lo))
    fail(ErrorKind::invalid_argument, "histogram bins do not tile [lo, hi]");
}

HistogramSpec default_scaled_distance_spec(std::string variable, bool per_type) {
  return {std::move(variable), 0.1, 0.0, 6.0, per_type, false};
}

HistogramSpec default_gap_spec(std::string variable) { return {std::move(variable), 0.05, 0.0, 2.0, false, false}; }

Summary summarize(std::vector<double> v) {
  if (v.empty()) fail(ErrorKind::empty_input, "summary of an empty sample");
  std::sort(v.begin(), v.end());
  Summary s;
  s.count = v.size();
  s.q1 = quantile_type7(v, 0.25);
  s.median = quantile_type7(v, 0.5);
  s.q3 = quantile_type7(v, 0.75);
  const double n = static_cast<double>(v.size());
  s.fraction_below_half = static_cast<double>(std::lower_bound(v.begin(), v.end(), 0.5) - v.begin()) / n;
  s.fraction_below_one = static_cast<double>(std::lower_bound(v.begin(), v.end(), 1.0) - v.begin()) / n;
  return s;
}

namespace {

void fill_row(Histogram& h, const std::vector<double>& values) {
  const int b = h.spec.bins();
  std::vector<long> row(static_cast<std::size_t>(b), 0);
  long under = 0, over = 0;
  for (double x : values) {
    if (std::isnan(x)) fail(ErrorKind::invalid_argument, "NaN in histogram input");
    if (x < h.spec.lo) {
      ++under;
    } else if (x > h.spec.hi) {
      ++over;
    } else {
      int k = std::min(b - 1, static_cast<int>(std::floor((x - h.spec.lo) * b / (h.spec.hi - h.spec.lo))));
      // agree with the printed edges
      while (k > 0 && x < h.edges[k]) --k;
      while (k + 1 < b && x >= h.edges[k + 1]) ++k;
      ++row[static_cast<std::size_t>(k)];
    }
  }
  h.counts.push_back(std::move(row));
  h.underflow.push_back(under);
  h.overflow.push_back(over);
  h.summaries.push_back(values.empty() ? Summary{} : summarize(values));
}

void init_edges(Histogram& h) {
  h.spec.validate();
  const int b = h.spec.bins();
  for (int k = 0; k <= b; ++k) h.edges.push_back(h.spec.lo + (h.spec.hi - h.spec.lo) * k / b);
}

}  // namespace

Histogram make_histogram(const std::vector<double>& values, const HistogramSpec& spec) {
  if (values.empty()) fail(ErrorKind::empty_input, "histogram of an empty sample");
  Histogram h;
  h.spec = spec;
  h.spec.per_type = false;
  init_edges(h);
  fill_row(h, values);
  h.row_names = {"all"};
  return h;
}

Histogram make_histogram(const std::array<std::vector<double>, 3>& by_type, const HistogramSpec& spec) {
  std::vector<double> all;
  for (const auto& v : by_type) all.insert(all.end(), v.begin(), v.end());
  if (all.empty()) fail(ErrorKind::empty_input, "histogram of an empty sample");
  Histogram h;
  h.spec = spec;
  h.spec.per_type = true;
  init_edges(h);
  for (const auto& v : by_type) fill_row(h, v);
  fill_row(h, all);
  h.row_names = {"T0", "T1", "T2", "all"};
  return h;
}

std::string histogram_csv(const Histogram& h) {
  std::ostringstream o;
  o << "bin_lo,bin_hi";
  for (const auto& n : h.row_names) o << ',' << n;
  o << '\n';
  o << "-inf," << format_double(h.spec.lo);
  for (long u : h.underflow) o << ',' << u;
  o << '\n';
  for (std::size_t k = 0; k + 1 < h.edges.size(); ++k) {
    o << format_double(h.edges[k]) << ',' << format_double(h.edges[k + 1]);
    for (const auto& row : h.counts) o << ',' << row[k];
    o << '\n';
  }
  o << format_double(h.spec.hi) << ",inf";
  for (long v : h.overflow) o << ',' << v;
  o << '\n';
  return o.str();
}

std::string histogram_svg(const Histogram& h, const std::string& title) {
  const double W = 640, H = 400, L = 60, R = 20, T = 40, B = 50;
  static const char* colors[] = {"#d73027", "#4575b4", "#1a9850", "#000000"};
  long peak = 1;
  for (const auto& row : h.counts)
    for (long c : row) peak = std::max(peak, c);
  auto ymap = [&](long c) {
    const double f = h.spec.log_scale ? std::log10(1.0 + c) / std::log10(1.0 + peak) : double(c) / peak;
    return T + (H - T - B) * (1.0 - f);
  };
  auto xmap = [&](double x) { return L + (W - L - R) * (x - h.spec.lo) / (h.spec.hi - h.spec.lo); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
    << xml_escape(title) << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = h.spec.lo + k * (h.spec.hi - h.spec.lo) / 4;
    o << "<text x=\"" << fixed2(xmap(x)) << "\" y=\"" << H - B + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << format_double(x) << "</text>\n";
  }
  o << "<text x=\"" << W / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
    << xml_escape(h.spec.variable) << "</text>\n";
  o << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
    << peak << "</text>\n";
  for (std::size_t r = 0; r < h.counts.size(); ++r) {
    const char* color = h.counts.size() == 1 ? colors[3] : colors[r % 4];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < h.counts[r].size(); ++k) {
      const double y = ymap(h.counts[r][k]);
      o << fixed2(xmap(h.edges[k])) << ',' << fixed2(y) << ' ' << fixed2(xmap(h.edges[k + 1])) << ',' << fixed2(y)
        << ' ';
    }
    o << "\"/>\n";
    o << "<text x=\"" << W - R - 4 << "\" y=\"" << T + 14 * (r + 1) << "\" text-anchor=\"end\" fill=\"" << color
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(h.row_names[r]) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

Density2D make_density(const std::vector<Complex>& points, double x0, double x1, double y0, double y1, int nx,
                       int ny) {
  if (points.empty()) fail(ErrorKind::empty_input, "density of an empty sample");
  if (!(x1 > x0) || !(y1 > y0) || nx < 1 || ny < 1) fail(ErrorKind::invalid_argument, "bad density grid");
  Density2D d{x0, x1, y0, y1, nx, ny, std::vector<long>(static_cast<std::size_t>(nx * ny), 0), 0};
  for (const Complex& p : points) {
    const double fx = (p.real() - x0) / (x1 - x0), fy = (p.imag() - y0) / (y1 - y0);
    if (!(fx >= 0 && fx < 1 && fy >= 0 && fy < 1)) {
      ++d.outside;
      continue;
    }
    const int ix = std::min(nx - 1, static_cast<int>(fx * nx)), iy = std::min(ny - 1, static_cast<int>(fy * ny));
    ++d.counts[static_cast<std::size_t>(iy * nx + ix)];
  }
  return d;
}

std::string density_svg(const Density2D& d, const std::string& title) {
  const double S = 480, M = 40;
  const double cw = S / d.nx, ch = S / d.ny;
  long peak = 1;
  for (long c : d.counts) peak = std::max(peak, c);
  auto xmap = [&](double x) { return M + S * (x - d.x0) / (d.x1 - d.x0); };
  auto ymap = [&](double y) { return M + S * (1.0 - (y - d.y0) / (d.y1 - d.y0)); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << S + 2 * M << "\" height=\"" << S + 2 * M << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << (S + 2 * M) / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
    << xml_escape(title) << "</text>\n";
  for (int iy = 0; iy < d.ny; ++iy)
    for (int ix = 0; ix < d.nx; ++ix) {
      const long c = d.counts[static_cast<std::size_t>(iy * d.nx + ix)];
      if (c == 0) continue;
      const int shade = static_cast<int>(std::lround(255.0 * (1.0 - double(c) / peak)));
      o << "<rect x=\"" << fixed2(M + ix * cw) << "\" y=\"" << fixed2(M + S - (iy + 1) * ch) << "\" width=\""
        << fixed2(cw) << "\" height=\"" << fixed2(ch) << "\" fill=\"rgb(255," << shade << ',' << shade << ")\"/>\n";
    }
  o << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << S << "\" height=\"" << S
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<ellipse cx=\"" << fixed2(xmap(0)) << "\" cy=\"" << fixed2(ymap(0)) << "\" rx=\"" << fixed2(S / (d.x1 - d.x0))
    << "\" ry=\"" << fixed2(S / (d.y1 - d.y0)) << "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
  o << "</svg>\n";
  return o.str();
}

std::string contour_svg(const std::vector<TypeClassification>& traces, const Catalog& catalog, const SearchBox& box,
                        const std::string& title) {
  box.validate();
  const double Wp = 360, Hp = 900, M = 40;
  auto xmap = [&](double s) { return M + Wp * (s - box.sigma_min) / (box.sigma_max - box.sigma_min); };
  auto ymap = [&](double t) { return M + Hp * (1.0 - (t - box.t_min) / (box.t_max - box.t_min)); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Wp + 2 * M << "\" height=\"" << Hp + 2 * M << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << (Wp + 2 * M) / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
    << xml_escape(title) << "</text>\n";
  o << "<rect x=\"" << M << "\" y=\"" << M << "\" width=\"" << Wp << "\" height=\"" << Hp
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << fixed2(xmap(0.5)) << "\" y1=\"" << M << "\" x2=\"" << fixed2(xmap(0.5)) << "\" y2=\""
    << M + Hp << "\" stroke=\"gray\" stroke-dasharray=\"3 3\"/>\n";
  for (const auto& c : traces)
    for (const ContourTrace* tr : {&c.green, &c.purple}) {
      if (tr->points.size() < 2) continue;
      o << "<polyline fill=\"none\" stroke=\"" << (tr->color == TraceColor::green ? "#1a9850" : "#762a83")
        << "\" stroke-width=\"1\" points=\"";
      for (const Complex& p : tr->points) {
        const double s = std::clamp(p.real(), box.sigma_min, box.sigma_max);
        const double t = std::clamp(p.imag(), box.t_min, box.t_max);
        o << fixed2(xmap(s)) << ',' << fixed2(ymap(t)) << ' ';
      }
      o << "\"/>\n";
    }
  for (const ZeroRecord& r : catalog.records) {
    if (!box.contains(r.location)) continue;
    if (r.kind == ZeroKind::critical)
      o << "<circle cx=\"" << fixed2(xmap(r.beta())) << "\" cy=\"" << fixed2(ymap(r.gamma())) << "\" r=\"2\" fill=\"black\"/>\n";
    else if (r.kind == ZeroKind::deriv1)
      o << "<circle cx=\"" << fixed2(xmap(r.beta())) << "\" cy=\"" << fixed2(ymap(r.gamma()))
        << "\" r=\"2.5\" fill=\"none\" stroke=\"#d73027\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace eta
