#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "copolymer/errors.hpp"
#include "copolymer/model/disorder.hpp"
#include "copolymer/model/renewal_law.hpp"

namespace copolymer::lab {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Parsed run configuration. Every error names the file and the line of the offending key.
class Config {
 public:
  static Config parse(std::string text, std::string origin = "<config>") {
    Config c;
    c.text_ = std::move(text);
    c.origin_ = std::move(origin);
    try {
      c.root_ = json::parse(c.text_);
    } catch (const json::parse_error& e) {
      throw ConfigError(c.origin_ + ":" + std::to_string(c.line_at(e.byte == 0 ? 0 : e.byte - 1)) +
                        ": malformed JSON: " + e.what());
    }
    if (!c.root_.is_object()) throw ConfigError(c.origin_ + ":1: top level must be a JSON object");
    if (!c.root_.contains("schema_version"))
      throw ConfigError(c.origin_ + ":1: missing schema_version (expected " + std::to_string(kSchemaVersion) + ")");
    if (c.root_["schema_version"] != kSchemaVersion)
      c.fail("/schema_version", "unsupported schema_version, expected " + std::to_string(kSchemaVersion));
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  const json& root() const { return root_; }
  const std::string& origin() const { return origin_; }

  // 1-based line of the key addressed by a JSON pointer, found by walking the text key by key.
  int line_of(std::string_view pointer) const {
    std::size_t pos = 0;
    std::size_t start = 1;
    while (start <= pointer.size()) {
      const std::size_t end = std::min(pointer.find('/', start), pointer.size());
      const std::string key = "\"" + std::string(pointer.substr(start, end - start)) + "\"";
      const bool index = std::all_of(key.begin() + 1, key.end() - 1, [](char ch) { return ch >= '0' && ch <= '9'; });
      if (!index) {
        const std::size_t hit = text_.find(key, pos);
        if (hit == std::string::npos) break;
        pos = hit;
      }
      start = end + 1;
    }
    return line_at(pos);
  }

  // "file:line: /pointer"
  std::string where(std::string_view pointer) const {
    return origin_ + ":" + std::to_string(line_of(pointer)) + ": " + std::string(pointer.empty() ? "/" : pointer);
  }

  [[noreturn]] void fail(std::string_view pointer, const std::string& msg) const {
    throw ConfigError(where(pointer) + ": " + msg);
  }

 private:
  int line_at(std::size_t byte) const {
    byte = std::min(byte, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
  }

  std::string text_;
  std::string origin_;
  json root_;
};

// Typed, checked view of one object in the configuration.
class Section {
 public:
  Section(const Config& cfg, std::string pointer) : cfg_(&cfg), ptr_(std::move(pointer)) {
    const json& n = node();
    if (!n.is_object()) cfg_->fail(ptr_, "expected an object");
  }

  const std::string& pointer() const { return ptr_; }
  bool has(const std::string& key) const { return node().contains(key); }
  Section sub(const std::string& key) const {
    if (!has(key)) cfg_->fail(ptr_, "missing block '" + key + "'");
    return Section(*cfg_, ptr_ + "/" + key);
  }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const { cfg_->fail(path(key), msg); }
  // A well-formed request beyond the renewal tables: a resource limit rather than a config error.
  [[noreturn]] void exceeds(const std::string& key, const std::string& msg) const {
    throw HorizonError(cfg_->where(path(key)) + ": " + msg);
  }

  // Rejects keys outside `allowed` so that typos do not silently fall back to defaults.
  void allow(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [k, v] : node().items())
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) fail(k, "unknown key");
  }

  double number(const std::string& key, std::optional<double> def = {}) const {
    if (!has(key)) return required(key, def);
    const auto& v = node()[key];
    if (!v.is_number()) fail(key, "expected a number");
    return v.get<double>();
  }

  double positive(const std::string& key, std::optional<double> def = {}) const {
    const double v = number(key, def);
    if (!(v > 0.0)) fail(key, "must be positive");
    return v;
  }

  double in_range(const std::string& key, double lo, double hi, std::optional<double> def = {}) const {
    const double v = number(key, def);
    if (!(v >= lo && v <= hi)) fail(key, "must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
    return v;
  }

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> def = {}, std::int64_t lo = 1) const {
    std::int64_t v = 0;
    if (!has(key)) {
      if (!def) fail(key, "missing required key");
      v = *def;
    } else {
      const auto& j = node()[key];
      if (!j.is_number_integer()) fail(key, "expected an integer");
      v = j.get<std::int64_t>();
    }
    if (v < lo) fail(key, "must be at least " + std::to_string(lo));
    return v;
  }

  std::uint64_t seed(const std::string& key, std::uint64_t def) const {
    if (!has(key)) return def;
    const auto& j = node()[key];
    if (!j.is_number_unsigned()) fail(key, "expected a nonnegative 64-bit integer");
    return j.get<std::uint64_t>();
  }

  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> def = {}) const {
    if (!has(key)) {
      if (!def) fail(key, "missing required key");
      return *def;
    }
    const auto& j = node()[key];
    if (!j.is_array() || j.empty()) fail(key, "expected a nonempty array of numbers");
    std::vector<double> out;
    for (const auto& x : j) {
      if (!x.is_number()) fail(key, "expected a nonempty array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::string text(const std::string& key, std::optional<std::string> def = {}) const {
    if (!has(key)) {
      if (!def) fail(key, "missing required key");
      return *def;
    }
    const auto& j = node()[key];
    if (!j.is_string()) fail(key, "expected a string");
    return j.get<std::string>();
  }

  bool flag(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const auto& j = node()[key];
    if (!j.is_boolean()) fail(key, "expected true or false");
    return j.get<bool>();
  }

  std::vector<Section> list(const std::string& key) const {
    if (!has(key)) fail(key, "missing required key");
    const auto& j = node()[key];
    if (!j.is_array() || j.empty()) fail(key, "expected a nonempty array of objects");
    std::vector<Section> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.emplace_back(*cfg_, path(key) + "/" + std::to_string(i));
    return out;
  }

  const json& node() const { return cfg_->root().at(json::json_pointer(ptr_)); }

 private:
  std::string path(const std::string& key) const { return ptr_ + "/" + key; }
  double required(const std::string& key, std::optional<double> def) const {
    if (!def) fail(key, "missing required key");
    return *def;
  }
  static std::string fmt(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  }

  const Config* cfg_;
  std::string ptr_;
};

inline Section root_section(const Config& cfg) { return Section(cfg, ""); }

// {"alpha", "slowly_varying": "constant" | "log_power" | "srw", "sv_param", "period", "n_max"}
inline TailedRenewalLaw law_from(const Section& s) {
  s.allow({"alpha", "slowly_varying", "sv_param", "period", "n_max", "name"});
  const double alpha = s.number("alpha");
  if (!(alpha > 0.0 && alpha < 1.0)) s.fail("alpha", "must lie in (0,1)");
  const std::string kind = s.text("slowly_varying", "constant");
  const std::int64_t period = s.integer("period", 1);
  const std::int64_t n_max = s.integer("n_max", 20000, 100);
  SlowlyVarying sv;
  if (kind == "constant")
    sv = ConstantTail{s.positive("sv_param", 1.0)};
  else if (kind == "log_power")
    sv = LogPowerTail{s.number("sv_param", 1.0)};
  else if (kind == "srw")
    sv = SrwFirstReturn{};
  else
    s.fail("slowly_varying", "expected constant, log_power or srw");
  try {
    return build_renewal_law(alpha, sv, n_max, period);
  } catch (const DomainError& e) {
    s.fail("alpha", e.what());
  }
}

inline std::string law_name(const Section& s, const TailedRenewalLaw& law) {
  return s.text("name", law.label());
}

// {"kind": "gaussian" | "binary" | "finite", "values", "probs"}
inline DisorderLaw disorder_from(const Section& s) {
  s.allow({"kind", "values", "probs"});
  const std::string kind = s.text("kind");
  if (kind == "gaussian") return DisorderLaw::gaussian();
  if (kind == "binary") return DisorderLaw::binary();
  if (kind == "finite") {
    try {
      return DisorderLaw::finite_support(s.numbers("values"), s.numbers("probs"));
    } catch (const DomainError& e) {
      s.fail("values", e.what());
    }
  }
  s.fail("kind", "expected gaussian, binary or finite");
}

}  // namespace copolymer::lab
