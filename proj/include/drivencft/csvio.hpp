#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace drivencft {

inline constexpr const char* kCodeVersion = "drivencft 0.1.0";

enum class OutputFormat { csv, json };

// Full-precision scientific notation (17 significant digits), the fixed cell
// format for floating-point CSV columns so downstream fits are stable and
// reruns are byte-identical.
std::string format_double(double x);

using Cell = std::variant<double, long long, unsigned long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const Table& table);
std::string render_json(const Table& table);

// Writes the rendered table, creating parent directories as needed; throws
// ConfigError when the path cannot be opened or written.
void write_table(const std::filesystem::path& path, const Table& table,
                 OutputFormat format);

void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

// Reproducibility sidecar emitted next to every sweep output. Thread count
// is deliberately absent: apart from the wall clock, the manifest must be
// identical for any thread count.
struct SweepManifest {
  std::string subcommand;
  std::map<std::string, std::string> configEcho;  // flattened section.key
  std::uint64_t seed = 0;
  std::string seedRule;
  std::size_t cellCount = 0;
  double wallClockSeconds = 0.0;
  std::string outputFile;
};

// Serializes the manifest to `<dataPath>.manifest.json`.
void write_manifest(const std::filesystem::path& dataPath,
                    const SweepManifest& manifest);

}  // namespace drivencft
