#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "drivencft/csvio.hpp"
#include "drivencft/drive.hpp"
#include "drivencft/nonhermitian.hpp"

namespace drivencft {

// Effective run settings: flattened config-file values plus the resolved
// seed / thread / output overrides (command line > environment > file).
struct RunConfig {
  std::string subcommand;
  std::map<std::string, std::string> values;  // "section.key" -> raw text
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = auto
  std::filesystem::path out;
  OutputFormat format = OutputFormat::csv;

  bool has(const std::string& key) const;
  std::string getString(const std::string& key,
                        const std::string& fallback) const;
  std::string requireString(const std::string& key) const;
  double getDouble(const std::string& key, double fallback) const;
  double requireDouble(const std::string& key) const;
  long long getInt(const std::string& key, long long fallback) const;
  std::uint64_t getU64(const std::string& key, std::uint64_t fallback) const;
  bool getBool(const std::string& key, bool fallback) const;
  GridSpec getGrid(const std::string& key) const;  // required
};

// Flat key=value text with [section] headers and '#' comments; keys are
// flattened to "section.key". Later duplicates win.
std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path);

// "start:stop:count" with count >= 1.
GridSpec parse_grid(const std::string& text);

// "tm:12" | "rmd:eta=2,blocks=100000,seed=42" | "random:length=N,seed=S" |
// "periodic:length=N"; omitted seeds fall back to defaultSeed.
Law parse_law(const std::string& text, std::uint64_t defaultSeed);

// Subcommands. Each writes the data artifact to cfg.out plus a
// `<out>.manifest.json` sidecar; scaling adds `<stem>.fits`, phase adds
// `<stem>.boundary` in the data format.
void cmd_heatmap(const RunConfig& cfg);
void cmd_preimages(const RunConfig& cfg);
void cmd_entropy(const RunConfig& cfg);
void cmd_scaling(const RunConfig& cfg);
void cmd_phase(const RunConfig& cfg);

void run_subcommand(const RunConfig& cfg);

// Full front door used by the binary: argument parsing, config resolution,
// dispatch, and exit-code mapping (0 ok, 2 config error, 3 numeric error).
int cli_main(int argc, const char* const* argv);

}  // namespace drivencft
