#include "amcf/report.hpp"

#include "amcf/errors.hpp"
#include "amcf/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace amcf {

void ExperimentReport::echo(const std::string& key, const std::string& value) {
  config_.emplace_back(key, value);
}

void ExperimentReport::echo(const std::string& key, double value) {
  config_.emplace_back(key, format_double(value));
}

const Metric& ExperimentReport::push(Metric m) {
  metrics_.push_back(std::move(m));
  return metrics_.back();
}

const Metric& ExperimentReport::check_le(const std::string& name, double value, double threshold) {
  return push({name, value, threshold, "<=", value <= threshold});
}

const Metric& ExperimentReport::check_lt(const std::string& name, double value, double threshold) {
  return push({name, value, threshold, "<", value < threshold});
}

const Metric& ExperimentReport::check_ge(const std::string& name, double value, double threshold) {
  return push({name, value, threshold, ">=", value >= threshold});
}

const Metric& ExperimentReport::flag(const std::string& name, bool ok) {
  return push({name, ok ? 1.0 : 0.0, 1.0, "flag", ok});
}

const Metric& ExperimentReport::note(const std::string& name, double value) {
  return push({name, value, std::nan(""), "note", true});
}

void ExperimentReport::merge(const ExperimentReport& other) {
  for (Metric m : other.metrics_) {
    m.name = other.id_ + "." + m.name;
    metrics_.push_back(std::move(m));
  }
  for (const auto& a : other.artifacts_) artifacts_.push_back(a);
}

bool ExperimentReport::passed() const {
  return std::all_of(metrics_.begin(), metrics_.end(), [](const Metric& m) { return m.pass; });
}

const Metric& ExperimentReport::metric(const std::string& name) const {
  const auto it = std::find_if(metrics_.begin(), metrics_.end(),
                               [&](const Metric& m) { return m.name == name; });
  require(it != metrics_.end(), ErrorKind::Usage, "report " + id_ + " has no metric " + name);
  return *it;
}

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "experiment,metric,value,relation,threshold,pass\n";
  for (const auto& m : metrics_) {
    out << id_ << ',' << m.name << ',' << format_double(m.value) << ',' << m.relation << ','
        << format_double(m.threshold) << ',' << (m.pass ? "pass" : "fail") << '\n';
  }
}

void ExperimentReport::write_text(std::ostream& out) const {
  out << "experiment " << id_ << ": " << (passed() ? "PASS" : "FAIL") << '\n';
  out << "configuration:\n";
  for (const auto& [k, v] : config_) out << "  " << k << " = " << v << '\n';
  out << "metrics:\n";
  for (const auto& m : metrics_) {
    out << "  [" << (m.pass ? "pass" : "FAIL") << "] " << m.name << " = " << format_double(m.value);
    if (m.relation != "note" && m.relation != "flag") {
      out << "  (" << m.relation << ' ' << format_double(m.threshold) << ')';
    }
    out << '\n';
  }
  if (!artifacts_.empty()) {
    out << "artifacts:\n";
    for (const auto& a : artifacts_) out << "  " << a << '\n';
  }
}

void ExperimentReport::save(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto csv = dir / (id_ + "_metrics.csv");
  const auto txt = dir / (id_ + "_summary.txt");
  artifacts_.push_back(csv.filename().string());
  std::ofstream c(csv);
  require(static_cast<bool>(c), ErrorKind::Config, "cannot write " + csv.string());
  write_csv(c);
  std::ofstream t(txt);
  require(static_cast<bool>(t), ErrorKind::Config, "cannot write " + txt.string());
  write_text(t);
}

}  // namespace amcf
