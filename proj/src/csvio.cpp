#include "drivencft/csvio.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "drivencft/errors.hpp"

namespace drivencft {

namespace {

nlohmann::ordered_json cell_to_json(const Cell& cell) {
  return std::visit([](const auto& v) { return nlohmann::ordered_json(v); },
                    cell);
}

std::string cell_to_csv(const Cell& cell) {
  struct Visitor {
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(unsigned long long v) const {
      return std::to_string(v);
    }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") != std::string::npos)
        throw InvalidParameter("CSV cell strings must not need quoting: " + v);
      return v;
    }
  };
  return std::visit(Visitor{}, cell);
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

std::string render_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw InvalidParameter("CSV row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_to_csv(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string render_json(const Table& table) {
  nlohmann::ordered_json doc;
  doc["columns"] = table.columns;
  auto& rows = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw InvalidParameter("JSON row width does not match the header");
    nlohmann::ordered_json jrow = nlohmann::ordered_json::array();
    for (const auto& cell : row) jrow.push_back(cell_to_json(cell));
    rows.push_back(std::move(jrow));
  }
  return doc.dump(2) + "\n";
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
      throw ConfigError("cannot create output directory '" +
                        path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream stream(path, std::ios::binary | std::ios::trunc);
  if (!stream)
    throw ConfigError("cannot open output file '" + path.string() + "'");
  stream.write(content.data(),
               static_cast<std::streamsize>(content.size()));
  stream.flush();
  if (!stream)
    throw ConfigError("failed writing output file '" + path.string() + "'");
}

void write_table(const std::filesystem::path& path, const Table& table,
                 OutputFormat format) {
  write_text_file(path, format == OutputFormat::csv ? render_csv(table)
                                                    : render_json(table));
}

void write_manifest(const std::filesystem::path& dataPath,
                    const SweepManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["subcommand"] = manifest.subcommand;
  doc["output"] = manifest.outputFile;
  doc["seed"] = manifest.seed;
  doc["seed_rule"] = manifest.seedRule;
  doc["cell_count"] = manifest.cellCount;
  doc["code_version"] = kCodeVersion;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.configEcho) cfg[key] = value;
  doc["config"] = std::move(cfg);
  doc["wall_clock_seconds"] = manifest.wallClockSeconds;
  std::filesystem::path mpath = dataPath;
  mpath += ".manifest.json";
  write_text_file(mpath, doc.dump(2) + "\n");
}

}  // namespace drivencft
