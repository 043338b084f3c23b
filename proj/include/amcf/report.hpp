#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace amcf {

struct Metric {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=", ">=", "<", ">" or "flag"
  bool pass = false;
};

/// Named pass/fail record of one verification run. Passes iff every metric
/// passes.
class ExperimentReport {
 public:
  explicit ExperimentReport(std::string id) : id_(std::move(id)) {}

  [[nodiscard]] const std::string& id() const { return id_; }

  void echo(const std::string& key, const std::string& value);
  void echo(const std::string& key, double value);

  const Metric& check_le(const std::string& name, double value, double threshold);
  const Metric& check_lt(const std::string& name, double value, double threshold);
  const Metric& check_ge(const std::string& name, double value, double threshold);
  /// Boolean metric; value is 1 or 0, threshold 1.
  const Metric& flag(const std::string& name, bool ok);
  /// Recorded value with no pass/fail meaning; always passes.
  const Metric& note(const std::string& name, double value);

  void add_artifact(const std::string& path) { artifacts_.push_back(path); }
  /// Appends all metrics of `other` with its id as a name prefix.
  void merge(const ExperimentReport& other);

  [[nodiscard]] bool passed() const;
  [[nodiscard]] const std::vector<Metric>& metrics() const { return metrics_; }
  [[nodiscard]] const Metric& metric(const std::string& name) const;
  [[nodiscard]] double value(const std::string& name) const { return metric(name).value; }
  [[nodiscard]] const std::vector<std::pair<std::string, std::string>>& config() const {
    return config_;
  }
  [[nodiscard]] const std::vector<std::string>& artifacts() const { return artifacts_; }

  /// CSV rows: experiment, metric, value, relation, threshold, pass.
  void write_csv(std::ostream& out) const;
  void write_text(std::ostream& out) const;
  /// Writes <dir>/<id>_metrics.csv and <dir>/<id>_summary.txt.
  void save(const std::filesystem::path& dir);

 private:
  const Metric& push(Metric m);
  std::string id_;
  std::vector<std::pair<std::string, std::string>> config_;
  std::vector<Metric> metrics_;
  std::vector<std::string> artifacts_;
};

}  // namespace amcf
