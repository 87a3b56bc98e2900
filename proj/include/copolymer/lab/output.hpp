#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "copolymer/errors.hpp"

#ifndef COPOLYMER_VERSION
#define COPOLYMER_VERSION "0.0.0"
#endif

namespace copolymer::lab {

// Shortest text that reads back as the same double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvTable {
 public:
  CsvTable(std::string name, std::vector<std::string> header) : name_(std::move(name)), header_(std::move(header)) {}

  const std::string& name() const { return name_; }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  template <class... Ts>
  void add(const Ts&... cells) {
    if (sizeof...(Ts) != header_.size()) throw InvariantError("CSV row width does not match header of " + name_);
    std::vector<std::string> row;
    (row.push_back(cell(cells)), ...);
    rows_.push_back(std::move(row));
  }

  std::string body() const {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
    return out;
  }

 private:
  template <class T>
  static std::string cell(const T& v) {
    if constexpr (std::is_same_v<T, bool>)
      return v ? "1" : "0";
    else if constexpr (std::is_floating_point_v<T>)
      return format_double(static_cast<double>(v));
    else if constexpr (std::is_integral_v<T>)
      return std::to_string(v);
    else
      return std::string(v);
  }

  std::string name_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Outcome of one experiment: CSV tables plus metadata for the JSON sidecar.
struct ResultRecord {
  std::string experiment;
  nlohmann::json config;
  std::uint64_t seed = 0;
  std::vector<CsvTable> tables;
  std::vector<std::string> failures;  // violated gates, by name
  std::vector<std::string> notes;
  double wall_seconds = 0.0;

  bool ok() const { return failures.empty(); }
  const CsvTable* table(const std::string& name) const {
    for (const auto& t : tables)
      if (t.name() == name) return &t;
    return nullptr;
  }
};

// Writes <dir>/<table>.csv for every table and <dir>/<experiment>.json with the echoed
// configuration, wall time and library version. Only the JSON carries run-dependent fields.
inline void write_record(const ResultRecord& rec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& t : rec.tables) {
    std::ofstream out(dir / (t.name() + ".csv"), std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / (t.name() + ".csv")).string());
    out << t.body();
  }
  nlohmann::json meta;
  meta["experiment"] = rec.experiment;
  meta["config"] = rec.config;
  meta["seed"] = rec.seed;
  meta["version"] = COPOLYMER_VERSION;
  meta["wall_seconds"] = rec.wall_seconds;
  meta["failures"] = rec.failures;
  meta["notes"] = rec.notes;
  std::vector<std::string> files;
  for (const auto& t : rec.tables) files.push_back(t.name() + ".csv");
  meta["tables"] = files;
  std::ofstream out(dir / (rec.experiment + ".json"));
  if (!out) throw Error("cannot write " + (dir / (rec.experiment + ".json")).string());
  out << meta.dump(2) << '\n';
}

class Stopwatch {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

}  // namespace copolymer::lab
