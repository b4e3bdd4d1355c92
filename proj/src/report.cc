// codeprobe/report.cc

// Copyright 2026  The codeprobe authors
// Apache 2.0

#include "codeprobe/report.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "codeprobe/common.h"
#include "json.hpp"

namespace codeprobe {

void RunManifest::add_input(const std::string &path) {
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(file_fnv64(path)));
  inputs_.emplace_back(path, hex);
}

void RunManifest::set_flag(const std::string &key, const std::string &value,
                           bool affects_run_id) {
  for (Flag &flag : flags_) {
    if (flag.key == key) {
      flag.value = value;
      flag.affects_run_id = affects_run_id;
      return;
    }
  }
  flags_.push_back({key, value, affects_run_id});
}

void RunManifest::set_flag(const std::string &key, uint64_t value,
                           bool affects_run_id) {
  set_flag(key, std::to_string(value), affects_run_id);
}

void RunManifest::set_flag(const std::string &key, double value,
                           bool affects_run_id) {
  set_flag(key, format_double(value), affects_run_id);
}

void RunManifest::set_seed(const std::string &name, uint64_t value) {
  for (auto &seed : seeds_) {
    if (seed.first == name) {
      seed.second = value;
      return;
    }
  }
  seeds_.emplace_back(name, value);
}

std::string RunManifest::run_id() const {
  std::ostringstream canon;
  canon << "subcommand=" << subcommand_ << "\nversion=" << kToolVersion << "\n";
  auto inputs = inputs_;
  std::sort(inputs.begin(), inputs.end());
  for (const auto &[path, hash] : inputs)
    canon << "input=" << path << ":" << hash << "\n";
  std::vector<std::pair<std::string, std::string>> flags;
  for (const Flag &flag : flags_)
    if (flag.affects_run_id) flags.emplace_back(flag.key, flag.value);
  std::sort(flags.begin(), flags.end());
  for (const auto &[key, value] : flags)
    canon << "flag=" << key << "=" << value << "\n";
  auto seeds = seeds_;
  std::sort(seeds.begin(), seeds.end());
  for (const auto &[name, value] : seeds)
    canon << "seed=" << name << "=" << value << "\n";
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canon.str())));
  return hex;
}

std::string RunManifest::to_json() const {
  nlohmann::json j;
  j["subcommand"] = subcommand_;
  j["version"] = kToolVersion;
  j["run_id"] = run_id();
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto &[path, hash] : inputs_)
    inputs.push_back({{"path", path}, {"fnv64", hash}});
  j["inputs"] = inputs;
  nlohmann::json flags = nlohmann::json::object();
  for (const Flag &flag : flags_) flags[flag.key] = flag.value;
  j["flags"] = flags;
  nlohmann::json seeds = nlohmann::json::object();
  for (const auto &[name, value] : seeds_) seeds[name] = value;
  j["seeds"] = seeds;
  j["duration_seconds"] = duration_seconds_;
  return j.dump(2);
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

std::string report_csv(const std::string &run_id,
                       std::span<const MetricRow> rows) {
  std::ostringstream out;
  out << kReportHeader << "\n";
  for (const MetricRow &row : rows) {
    out << run_id << ',' << row.metric << ',' << row.input_kind << ','
        << row.config << ',' << row.seed << ',' << row.n << ','
        << format_double(row.value) << "\n";
  }
  return out.str();
}

void write_report_csv(const std::string &path, const std::string &run_id,
                      std::span<const MetricRow> rows) {
  write_text_file(path, report_csv(run_id, rows));
}

void write_text_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << content;
  if (!out) throw ParseError(path + ": write failed");
}

uint64_t file_fnv64(const std::string &path) {
  const std::string content = read_text_file(path);
  return fnv1a64(content);
}

ParsedReport read_report_csv(const std::string &path) {
  const std::string text = read_text_file(path);
  ParsedReport report;
  size_t pos = 0;
  size_t line_no = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    std::string line = nl == std::string::npos ? text.substr(pos)
                                               : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    pos = nl == std::string::npos ? text.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != kReportHeader)
        throw ParseError(path + ": unexpected CSV header \"" + line + "\"");
      continue;
    }
    std::vector<std::string> fields;
    size_t fpos = 0;
    while (true) {
      size_t comma = line.find(',', fpos);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(fpos));
        break;
      }
      fields.push_back(line.substr(fpos, comma - fpos));
      fpos = comma + 1;
    }
    if (fields.size() != 7)
      throw ParseError(path + ":" + std::to_string(line_no) +
                       ": expected 7 CSV fields");
    MetricRow row;
    row.metric = fields[1];
    row.input_kind = fields[2];
    row.config = fields[3];
    row.seed = std::stoull(fields[4]);
    row.n = std::stoull(fields[5]);
    row.value = std::stod(fields[6]);
    report.run_ids.push_back(fields[0]);
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace codeprobe
