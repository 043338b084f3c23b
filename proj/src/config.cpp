#include "amcf/config.hpp"

#include "amcf/errors.hpp"
#include "amcf/io.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <type_traits>
#include <sstream>

namespace amcf {

namespace {

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

std::string list_text(const std::vector<double>& v) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? " " : "") + format_double(v[k]);
  return out;
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.push_back(parse_double(token));
    token.clear();
  };
  for (const char c : text) {
    if (c == ' ' || c == ',' || c == '\t') {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

int parse_int(std::string_view text) {
  const long v = parse_long(text);
  require(v >= -2'000'000'000L && v <= 2'000'000'000L, ErrorKind::Parse, "integer out of range");
  return static_cast<int>(v);
}

template <class T>
Field number(const char* section, const char* key, T RunConfig::*group, double T::*member) {
  return {section, key, [=](const RunConfig& c) { return format_double(c.*group.*member); },
          [=](RunConfig& c, std::string_view v) { c.*group.*member = parse_double(v); }};
}

template <class T, class I>
Field integer(const char* section, const char* key, T RunConfig::*group, I T::*member) {
  return {section, key, [=](const RunConfig& c) { return std::to_string(c.*group.*member); },
          [=](RunConfig& c, std::string_view v) {
            c.*group.*member = static_cast<I>(std::is_same_v<I, int> ? parse_int(v) : parse_long(v));
          }};
}

template <class T>
Field text(const char* section, const char* key, T RunConfig::*group, std::string T::*member) {
  return {section, key, [=](const RunConfig& c) { return c.*group.*member; },
          [=](RunConfig& c, std::string_view v) { c.*group.*member = std::string(v); }};
}

template <class T>
Field list(const char* section, const char* key, T RunConfig::*group,
           std::vector<double> T::*member) {
  return {section, key, [=](const RunConfig& c) { return list_text(c.*group.*member); },
          [=](RunConfig& c, std::string_view v) { c.*group.*member = parse_list(v); }};
}

const std::vector<Field>& fields() {
  using R = RunConfig;
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    for (auto [name, group] : {std::pair{"anisotropy", &R::anisotropy},
                               std::pair{"mobility", &R::mobility}}) {
      f.push_back(text(name, "family", group, &NormRecord::family));
      f.push_back(number(name, "exponent", group, &NormRecord::exponent));
      f.push_back(list(name, "matrix", group, &NormRecord::matrix));
    }
    f.push_back(integer("grid", "N", &R::grid, &GridRecord::dim));
    f.push_back(number("grid", "h", &R::grid, &GridRecord::h));
    f.push_back(number("grid", "half_width", &R::grid, &GridRecord::half_width));
    f.push_back(number("grid", "period", &R::grid, &GridRecord::period));
    f.push_back(integer("grid", "count", &R::grid, &GridRecord::count));
    f.push_back(text("grid", "boundary", &R::grid, &GridRecord::boundary));
    f.push_back(number("flow", "cfl_factor", &R::flow, &FlowRecord::cfl_factor));
    f.push_back(number("flow", "end_time", &R::flow, &FlowRecord::end_time));
    f.push_back(integer("flow", "snapshot_every", &R::flow, &FlowRecord::snapshot_every));
    f.push_back(number("flow", "snapshot_dt", &R::flow, &FlowRecord::snapshot_dt));
    f.push_back(number("flow", "tol_stat", &R::flow, &FlowRecord::tol_stat));
    using E = ExperimentRecord;
    f.push_back(text("experiment", "id", &R::experiment, &E::id));
    f.push_back(text("experiment", "cone", &R::experiment, &E::cone));
    f.push_back(number("experiment", "slope", &R::experiment, &E::slope));
    f.push_back(list("experiment", "slopes", &R::experiment, &E::slopes));
    f.push_back(text("experiment", "perturbation", &R::experiment, &E::perturbation));
    f.push_back(number("experiment", "K", &R::experiment, &E::K));
    f.push_back(number("experiment", "delta", &R::experiment, &E::delta));
    f.push_back(number("experiment", "width", &R::experiment, &E::width));
    f.push_back(number("experiment", "amplitude", &R::experiment, &E::amplitude));
    f.push_back(number("experiment", "offset", &R::experiment, &E::offset));
    f.push_back(number("experiment", "t1", &R::experiment, &E::t1));
    f.push_back(number("experiment", "t2", &R::experiment, &E::t2));
    f.push_back(number("experiment", "radius", &R::experiment, &E::radius));
    f.push_back(integer("experiment", "pairs", &R::experiment, &E::pairs));
    f.push_back(number("experiment", "threshold", &R::experiment, &E::threshold));
    f.push_back({"experiment", "seed",
                 [](const R& c) { return c.seed ? std::to_string(*c.seed) : std::string(); },
                 [](R& c, std::string_view v) {
                   const long s = parse_long(v);
                   require(s >= 0, ErrorKind::Parse, "seed must be nonnegative");
                   c.seed = static_cast<std::uint64_t>(s);
                 }});
    f.push_back({"output", "dir", [](const R& c) { return c.output_dir; },
                 [](R& c, std::string_view v) { c.output_dir = std::string(v); }});
    return f;
  }();
  return table;
}

const Field* find_field(const std::string& section, const std::string& key) {
  for (const Field& f : fields()) {
    if (section == f.section && key == f.key) return &f;
  }
  return nullptr;
}

struct Entry {
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

using Entries = std::map<std::string, Entry>;  // "section.key"

std::string where(const Entries& e, const std::string& name) {
  const auto it = e.find(name);
  if (it == e.end()) return "key " + name;
  if (it->second.line == 0) return "override " + name;
  return "line " + std::to_string(it->second.line) + ", key " + name;
}

[[noreturn]] void reject(const Entries& e, const std::string& name, const std::string& why) {
  fail(ErrorKind::Parse, where(e, name) + ": " + why);
}

void check(bool ok, const Entries& e, const std::string& name, const std::string& why) {
  if (!ok) reject(e, name, why);
}

Entries read_entries(const std::string& text) {
  Entries out;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;
    const std::string at = "line " + std::to_string(line);
    if (s.front() == '[') {
      require(s.back() == ']', ErrorKind::Parse, at + ": unterminated section header");
      section = std::string(trim(s.substr(1, s.size() - 2)));
      const bool known = std::any_of(fields().begin(), fields().end(),
                                     [&](const Field& f) { return section == f.section; });
      require(known, ErrorKind::Parse, at + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = s.find('=');
    require(eq != std::string_view::npos, ErrorKind::Parse, at + ": expected key = value");
    require(!section.empty(), ErrorKind::Parse, at + ": key outside any section");
    const std::string key(trim(s.substr(0, eq)));
    const std::string name = section + "." + key;
    require(find_field(section, key) != nullptr, ErrorKind::Parse,
            at + ": unknown key '" + key + "' in [" + section + "]");
    require(!out.contains(name), ErrorKind::Parse, at + ": duplicate key " + name);
    out[name] = {std::string(trim(s.substr(eq + 1))), line};
  }
  return out;
}

void apply_override(Entries& e, const std::string& item) {
  const auto eq = item.find('=');
  const auto dot = item.find('.');
  require(eq != std::string::npos && dot != std::string::npos && dot < eq, ErrorKind::Parse,
          "override '" + item + "' is not section.key=value");
  const std::string section(trim(std::string_view(item).substr(0, dot)));
  const std::string key(trim(std::string_view(item).substr(dot + 1, eq - dot - 1)));
  require(find_field(section, key) != nullptr, ErrorKind::Parse,
          "override '" + item + "': unknown key " + section + "." + key);
  e[section + "." + key] = {std::string(trim(std::string_view(item).substr(eq + 1))), 0};
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
  return std::any_of(options.begin(), options.end(), [&](const char* o) { return v == o; });
}

void validate_norm(const RunConfig& c, const NormRecord& n, const char* section, const Entries& e) {
  const std::string s = section;
  check(one_of(n.family, {"euclidean", "power", "elliptic"}), e, s + ".family",
        "family must be euclidean, power or elliptic");
  if (n.family == "power") {
    check(n.exponent > 1.0 && std::isfinite(n.exponent), e, s + ".exponent",
          "exponent must be > 1");
  }
  if (n.family == "elliptic") {
    const std::size_t d = static_cast<std::size_t>(c.grid.dim) + 1;
    check(n.matrix.size() == d * d, e, s + ".matrix",
          "elliptic matrix needs " + std::to_string(d * d) + " entries");
  }
}

void validate(const RunConfig& c, const Entries& e) {
  for (const char* key : {"grid.N", "grid.h"}) {
    require(e.contains(key), ErrorKind::Parse, std::string("missing required key ") + key);
  }
  check(c.grid.dim == 1 || c.grid.dim == 2, e, "grid.N", "N must be 1 or 2");
  validate_norm(c, c.anisotropy, "anisotropy", e);
  validate_norm(c, c.mobility, "mobility", e);
  try {
    make_anisotropy(c);
  } catch (const Error& err) {
    reject(e, "anisotropy.family", err.what());
  }
  try {
    make_mobility(c);
  } catch (const Error& err) {
    reject(e, "mobility.family", err.what());
  }

  check(c.grid.h > 0.0, e, "grid.h", "h must be > 0");
  check(c.grid.half_width > 0.0, e, "grid.half_width", "half_width must be > 0");
  check(c.grid.period > 0.0, e, "grid.period", "period must be > 0");
  check(c.grid.count >= 8, e, "grid.count", "count must be >= 8");
  check(one_of(c.grid.boundary, {"cone", "periodic", "linear"}), e, "grid.boundary",
        "boundary must be cone, periodic or linear");

  check(c.flow.cfl_factor > 0.0 && c.flow.cfl_factor <= 0.5, e, "flow.cfl_factor",
        "cfl_factor out of (0,0.5]");
  check(c.flow.end_time > 0.0, e, "flow.end_time", "end_time must be > 0");
  check(c.flow.snapshot_every >= 0, e, "flow.snapshot_every", "snapshot_every must be >= 0");
  check(c.flow.snapshot_dt >= 0.0, e, "flow.snapshot_dt", "snapshot_dt must be >= 0");
  check(c.flow.tol_stat > 0.0, e, "flow.tol_stat", "tol_stat must be > 0");

  const ExperimentRecord& x = c.experiment;
  check(one_of(x.id, {"", "flow", "scaling", "hyperplane", "meanconvex", "expander",
                      "rescaled_convergence", "wulff", "comparison", "grim_reaper",
                      "expander_ode"}),
        e, "experiment.id", "unknown experiment '" + x.id + "'");
  check(one_of(x.cone, {"abs", "max_affine"}), e, "experiment.cone",
        "cone must be abs or max_affine");
  check(x.slope >= 0.0, e, "experiment.slope", "slope must be >= 0");
  if (x.cone == "max_affine") {
    check(!x.slopes.empty() && x.slopes.size() % c.grid.dim == 0, e, "experiment.slopes",
          "max_affine needs a nonempty list of N-vectors");
  }
  check(one_of(x.perturbation, {"none", "sublinear", "vanishing", "offset"}), e,
        "experiment.perturbation", "perturbation must be none, sublinear, vanishing or offset");
  const std::string pkey = x.perturbation == "sublinear"   ? "experiment.delta"
                           : x.perturbation == "vanishing" ? "experiment.amplitude"
                                                           : "experiment.offset";
  try {
    if (auto p = make_perturbation(c)) amcf::validate(*p);
  } catch (const Error& err) {
    reject(e, pkey, err.what());
  }
  check(x.t1 > 0.0, e, "experiment.t1", "t1 must be > 0");
  check(x.t2 >= x.t1, e, "experiment.t2", "t2 must be >= t1");
  check(x.radius > 0.0, e, "experiment.radius", "radius must be > 0");
  check(x.pairs >= 1, e, "experiment.pairs", "pairs must be >= 1");
  check(x.threshold >= 0.0, e, "experiment.threshold", "threshold must be >= 0");
  check(!c.output_dir.empty(), e, "output.dir", "output directory must be named");
}

RunConfig build(const Entries& e) {
  RunConfig c;
  for (const auto& [name, entry] : e) {
    const auto dot = name.find('.');
    const Field* f = find_field(name.substr(0, dot), name.substr(dot + 1));
    try {
      f->set(c, entry.value);
    } catch (const Error& err) {
      reject(e, name, err.what());
    }
  }
  validate(c, e);
  return c;
}

Mat square(const std::vector<double>& v, int d) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = v[static_cast<std::size_t>(i * d + j)];
  }
  return m;
}

NormFamily norm_family(const NormRecord& n, int d) {
  if (n.family == "power") return norm::PowerNorm{n.exponent};
  if (n.family == "elliptic") return norm::Elliptic{square(n.matrix, d)};
  return norm::Euclidean{};
}

}  // namespace

RunConfig parse_config(const std::string& text) { return build(read_entries(text)); }

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  Entries e = read_entries(text);
  for (const auto& o : overrides) apply_override(e, o);
  return build(e);
}

std::string emit_config(const RunConfig& config) {
  std::string out, section;
  for (const Field& f : fields()) {
    const std::string value = f.get(config);
    if (std::string(f.key) == "seed" && !config.seed) continue;
    if (section != f.section) {
      section = f.section;
      out += (out.empty() ? "[" : "\n[") + section + "]\n";
    }
    out += std::string(f.key) + " = " + value + "\n";
  }
  return out;
}

AnisotropyModel make_anisotropy(const RunConfig& config) {
  const int d = config.grid.dim + 1;
  return AnisotropyModel(norm_family(config.anisotropy, d), d);
}

MobilityModel make_mobility(const RunConfig& config) {
  const int d = config.grid.dim + 1;
  return MobilityModel(norm_family(config.mobility, d), d);
}

ConeSpec make_cone(const RunConfig& config) {
  const int dim = config.grid.dim;
  if (config.experiment.cone == "max_affine") {
    cone::MaxAffine m;
    const auto& s = config.experiment.slopes;
    for (std::size_t k = 0; k + dim <= s.size(); k += dim) {
      m.slopes.push_back({s[k], dim == 2 ? s[k + 1] : 0.0});
    }
    return {m, dim};
  }
  return ConeSpec::abs(config.experiment.slope, dim);
}

std::optional<PerturbationSpec> make_perturbation(const RunConfig& config) {
  const ExperimentRecord& x = config.experiment;
  if (x.perturbation == "sublinear") return perturbation::SublinearBump{x.K, x.delta, x.width};
  if (x.perturbation == "vanishing") return perturbation::VanishingBump{x.amplitude, x.width};
  if (x.perturbation == "offset") return perturbation::BoundedOffset{x.offset};
  return std::nullopt;
}

FlowParams make_flow_params(const RunConfig& config) {
  FlowParams p;
  p.cfl_factor = config.flow.cfl_factor;
  p.end_time = config.flow.end_time;
  p.snapshot_every = config.flow.snapshot_every;
  p.snapshot_dt = config.flow.snapshot_dt;
  p.tol_stat = config.flow.tol_stat;
  return p;
}

}  // namespace amcf
