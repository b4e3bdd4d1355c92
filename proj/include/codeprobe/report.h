// codeprobe/report.h

// Copyright 2026  The codeprobe authors
// Apache 2.0

#ifndef CODEPROBE_REPORT_H_
#define CODEPROBE_REPORT_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace codeprobe {

inline constexpr const char *kToolVersion = "0.1.0";
inline constexpr const char *kReportHeader =
    "run_id,metric,input_kind,config,seed,n,value";

struct MetricRow {
  std::string metric;
  std::string input_kind;
  std::string config;
  uint64_t seed = 0;
  uint64_t n = 0;
  double value = 0.0;
};

// Everything needed to reproduce a run. The run id hashes the subcommand,
// tool version, input content hashes, configuration flags and seeds; it
// excludes execution-only knobs (--jobs, output paths) and the wall-clock
// duration, so reruns and different thread counts produce identical report
// bytes.
class RunManifest {
 public:
  explicit RunManifest(std::string subcommand)
      : subcommand_(std::move(subcommand)) {}

  void add_input(const std::string &path);  // hashes file content
  void set_flag(const std::string &key, const std::string &value,
                bool affects_run_id = true);
  void set_flag(const std::string &key, uint64_t value,
                bool affects_run_id = true);
  void set_flag(const std::string &key, double value,
                bool affects_run_id = true);
  void set_seed(const std::string &name, uint64_t value);
  void set_duration_seconds(double seconds) { duration_seconds_ = seconds; }

  std::string run_id() const;  // 16 hex digits
  std::string to_json() const;
  const std::string &subcommand() const { return subcommand_; }

 private:
  std::string subcommand_;
  std::vector<std::pair<std::string, std::string>> inputs_;  // path, hash
  struct Flag {
    std::string key;
    std::string value;
    bool affects_run_id = true;
  };
  std::vector<Flag> flags_;
  std::vector<std::pair<std::string, uint64_t>> seeds_;
  double duration_seconds_ = 0.0;
};

std::string format_double(double value);

std::string report_csv(const std::string &run_id,
                       std::span<const MetricRow> rows);
void write_report_csv(const std::string &path, const std::string &run_id,
                      std::span<const MetricRow> rows);
void write_text_file(const std::string &path, const std::string &content);

uint64_t file_fnv64(const std::string &path);

// Parsed report row (the `report` subcommand re-reads CSV output).
struct ParsedReport {
  std::vector<MetricRow> rows;
  std::vector<std::string> run_ids;  // aligned with rows
};
ParsedReport read_report_csv(const std::string &path);

}  // namespace codeprobe

#endif  // CODEPROBE_REPORT_H_
