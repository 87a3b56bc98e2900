// copolymer_lab: runs one experiment from a JSON config and writes CSV tables plus a JSON
// sidecar. Exit codes: 0 ok, 1 config error, 2 invariant failure, 3 resource limit.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "copolymer/lab/config.hpp"
#include "copolymer/lab/experiments.hpp"
#include "copolymer/lab/output.hpp"
#include "copolymer/lab/validate.hpp"

namespace lab = copolymer::lab;

namespace {

enum Exit { kOk = 0, kConfig = 1, kInvariant = 2, kResource = 3 };

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "results";
  unsigned threads = 0;
  bool fast = false;
};

int report(const lab::ResultRecord& rec, const std::filesystem::path& dir) {
  lab::write_record(rec, dir);
  for (const auto& t : rec.tables) std::printf("wrote %s\n", (dir / (t.name() + ".csv")).string().c_str());
  for (const auto& n : rec.notes) std::printf("note: %s\n", n.c_str());
  for (const auto& f : rec.failures) std::fprintf(stderr, "invariant violated: %s\n", f.c_str());
  std::printf("%s: %s (%.1f s)\n", rec.experiment.c_str(), rec.ok() ? "ok" : "FAILED", rec.wall_seconds);
  return rec.ok() ? kOk : kInvariant;
}

int run(const std::string& command, const Args& a) {
  const auto cfg = lab::Config::load(a.config);
  lab::RunOptions opt{a.seed, a.threads, a.fast};
  using Cmd = std::function<lab::ResultRecord(const lab::Config&, const lab::RunOptions&)>;
  const std::map<std::string, Cmd> table{
      {"free-energy", lab::cmd_free_energy},     {"hc-curve", lab::cmd_hc_curve},
      {"collapse", lab::cmd_collapse},           {"pipeline-chain", lab::cmd_pipeline_chain},
      {"regenset-sample", lab::cmd_regenset_sample}, {"rn-check", lab::cmd_rn_check},
      {"validate",
       [](const lab::Config& c, const lab::RunOptions& o) {
         const auto seed = o.seed ? *o.seed : lab::root_section(c).seed("seed", 1);
         return lab::cmd_validate(c, seed, {o.fast, "", o.threads});
       }},
  };
  return report(table.at(command)(cfg, opt), a.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Copolymer model experiments"};
  app.require_subcommand(1);
  Args args;
  std::uint64_t seed = 0;
  for (const char* name :
       {"free-energy", "hc-curve", "collapse", "pipeline-chain", "regenset-sample", "rn-check", "validate"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "root seed, overrides the config");
    sub->add_option("--out", args.out, "output directory")->capture_default_str();
    sub->add_option("--threads", args.threads, "worker threads, 0 for all cores")->capture_default_str();
    sub->add_flag("--fast", args.fast, "deterministic subset only (validate)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }
  const auto* chosen = app.get_subcommands().front();
  if (chosen->count("--seed")) args.seed = seed;
  try {
    return run(chosen->get_name(), args);
  } catch (const copolymer::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const copolymer::HorizonError& e) {
    std::fprintf(stderr, "resource limit: %s\n", e.what());
    return kResource;
  } catch (const copolymer::InvariantError& e) {
    std::fprintf(stderr, "invariant violated: %s\n", e.what());
    return kInvariant;
  } catch (const copolymer::DomainError& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInvariant;
  }
}
