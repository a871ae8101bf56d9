#include "drivencft/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "drivencft/entropy.hpp"
#include "drivencft/errors.hpp"
#include "drivencft/fermion.hpp"
#include "drivencft/mobius.hpp"
#include "drivencft/rmd.hpp"
#include "drivencft/rng.hpp"
#include "drivencft/threading.hpp"
#include "drivencft/tracemap.hpp"

namespace drivencft {

namespace {

constexpr const char* kSeedRule =
    "cell_seed = splitmix64(seed, cell_index); "
    "run_seed = splitmix64(cell_seed, run_index)";

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(s.substr(pos));
      break;
    }
    parts.push_back(s.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used != text.size())
      throw ConfigError("trailing characters in number '" + text + "' for " +
                        what);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + text + "' as a number for " + what);
  }
}

long long parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size())
      throw ConfigError("trailing characters in integer '" + text + "' for " +
                        what);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + text + "' as an integer for " + what);
  }
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(text, &used);
    if (used != text.size())
      throw ConfigError("trailing characters in integer '" + text + "' for " +
                        what);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + text +
                      "' as an unsigned integer for " + what);
  }
}

std::map<std::string, std::string> parse_kv_list(const std::string& text,
                                                 const std::string& what) {
  std::map<std::string, std::string> out;
  if (trim(text).empty()) return out;
  for (const std::string& part : split(text, ',')) {
    std::size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key=value in '" + part + "' for " + what);
    out[trim(part.substr(0, eq))] = trim(part.substr(eq + 1));
  }
  return out;
}

// --- output plumbing ------------------------------------------------------

std::filesystem::path sidecar_path(const RunConfig& cfg, const char* tag) {
  std::filesystem::path p = cfg.out;
  p.replace_extension();
  p += ".";
  p += tag;
  p += cfg.format == OutputFormat::csv ? ".csv" : ".json";
  return p;
}

class Emitter {
 public:
  explicit Emitter(const RunConfig& cfg)
      : cfg_(cfg), start_(std::chrono::steady_clock::now()) {}

  void add(const std::filesystem::path& path, Table table) {
    outputs_.emplace_back(path, std::move(table));
  }

  void finish(std::size_t cellCount) {
    for (const auto& [path, table] : outputs_)
      write_table(path, table, cfg_.format);
    SweepManifest manifest;
    manifest.subcommand = cfg_.subcommand;
    manifest.configEcho = cfg_.values;
    manifest.configEcho.erase("run.threads");
    manifest.configEcho["run.seed"] = std::to_string(cfg_.seed);
    manifest.configEcho["run.out"] = cfg_.out.string();
    manifest.configEcho["run.format"] =
        cfg_.format == OutputFormat::csv ? "csv" : "json";
    manifest.seed = cfg_.seed;
    manifest.seedRule = kSeedRule;
    manifest.cellCount = cellCount;
    manifest.outputFile = cfg_.out.filename().string();
    manifest.wallClockSeconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    write_manifest(cfg_.out, manifest);
  }

 private:
  const RunConfig& cfg_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::filesystem::path, Table>> outputs_;
};

ExecutionPolicy policy_for(const RunConfig& cfg) {
  return cfg.threads == 1 ? ExecutionPolicy::serial
                          : ExecutionPolicy::parallel;
}

std::vector<double> grid_points(const GridSpec& grid) {
  std::vector<double> pts(static_cast<std::size_t>(grid.count));
  for (int i = 0; i < grid.count; ++i)
    pts[static_cast<std::size_t>(i)] = grid.at(i);
  return pts;
}

std::vector<double> log_grid_points(const GridSpec& grid) {
  if (!(grid.start > 0.0) || !(grid.stop > 0.0))
    throw ConfigError("log-spaced grids need positive endpoints");
  std::vector<double> pts(static_cast<std::size_t>(grid.count));
  GridSpec lg{std::log(grid.start), std::log(grid.stop), grid.count};
  for (int i = 0; i < grid.count; ++i)
    pts[static_cast<std::size_t>(i)] = std::exp(lg.at(i));
  return pts;
}

std::vector<int> parse_int_list(const std::string& text,
                                const std::string& what) {
  std::vector<int> out;
  for (const std::string& part : split(text, ','))
    out.push_back(static_cast<int>(parse_int(trim(part), what)));
  if (out.empty()) throw ConfigError("empty integer list for " + what);
  return out;
}

}  // namespace

// --- RunConfig getters ------------------------------------------------------

bool RunConfig::has(const std::string& key) const {
  return values.count(key) != 0;
}

std::string RunConfig::getString(const std::string& key,
                                 const std::string& fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : it->second;
}

std::string RunConfig::requireString(const std::string& key) const {
  auto it = values.find(key);
  if (it == values.end())
    throw ConfigError("missing required config key '" + key + "'");
  return it->second;
}

double RunConfig::getDouble(const std::string& key, double fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : parse_double(it->second, key);
}

double RunConfig::requireDouble(const std::string& key) const {
  return parse_double(requireString(key), key);
}

long long RunConfig::getInt(const std::string& key, long long fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : parse_int(it->second, key);
}

std::uint64_t RunConfig::getU64(const std::string& key,
                                std::uint64_t fallback) const {
  auto it = values.find(key);
  return it == values.end() ? fallback : parse_u64(it->second, key);
}

bool RunConfig::getBool(const std::string& key, bool fallback) const {
  auto it = values.find(key);
  if (it == values.end()) return fallback;
  std::string v = it->second;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("cannot parse '" + it->second + "' as a boolean for " +
                    key);
}

GridSpec RunConfig::getGrid(const std::string& key) const {
  return parse_grid(requireString(key));
}

// --- parsing ---------------------------------------------------------------

std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path) {
  std::ifstream stream(path);
  if (!stream)
    throw ConfigError("cannot open config file '" + path.string() + "'");
  std::map<std::string, std::string> values;
  std::string section;
  std::string line;
  int lineNo = 0;
  while (std::getline(stream, line)) {
    ++lineNo;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(path.string() + ":" + std::to_string(lineNo) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path.string() + ":" + std::to_string(lineNo) +
                        ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError(path.string() + ":" + std::to_string(lineNo) +
                        ": empty key");
    if (!section.empty()) key = section + "." + key;
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

GridSpec parse_grid(const std::string& text) {
  std::vector<std::string> parts = split(text, ':');
  if (parts.size() != 3)
    throw ConfigError("grid spec '" + text + "' must be start:stop:count");
  GridSpec grid;
  grid.start = parse_double(trim(parts[0]), "grid start");
  grid.stop = parse_double(trim(parts[1]), "grid stop");
  long long count = parse_int(trim(parts[2]), "grid count");
  if (count < 1 || count > (1LL << 24))
    throw ConfigError("grid count must be in [1, 2^24], got " + parts[2]);
  grid.count = static_cast<int>(count);
  if (!std::isfinite(grid.start) || !std::isfinite(grid.stop))
    throw ConfigError("grid endpoints must be finite in '" + text + "'");
  return grid;
}

Law parse_law(const std::string& text, std::uint64_t defaultSeed) {
  std::size_t colon = text.find(':');
  std::string kind = trim(text.substr(0, colon));
  std::string rest =
      colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "tm") {
      if (trim(rest).empty())
        throw ConfigError("law 'tm' needs an order, e.g. tm:12");
      return Law::thueMorse(
          static_cast<int>(parse_int(trim(rest), "law tm order")));
    }
    if (kind == "rmd") {
      auto kv = parse_kv_list(rest, "law rmd");
      if (!kv.count("eta") || !kv.count("blocks"))
        throw ConfigError("law 'rmd' needs eta=..,blocks=..[,seed=..]");
      std::uint64_t seed = kv.count("seed")
                               ? parse_u64(kv["seed"], "law rmd seed")
                               : defaultSeed;
      return Law::rmd(static_cast<int>(parse_int(kv["eta"], "law rmd eta")),
                      parse_u64(kv["blocks"], "law rmd blocks"), seed);
    }
    if (kind == "random") {
      auto kv = parse_kv_list(rest, "law random");
      if (!kv.count("length"))
        throw ConfigError("law 'random' needs length=..[,seed=..]");
      std::uint64_t seed = kv.count("seed")
                               ? parse_u64(kv["seed"], "law random seed")
                               : defaultSeed;
      return Law::random(parse_u64(kv["length"], "law random length"), seed);
    }
    if (kind == "periodic") {
      auto kv = parse_kv_list(rest, "law periodic");
      if (!kv.count("length"))
        throw ConfigError("law 'periodic' needs length=..");
      return Law::periodic(parse_u64(kv["length"], "law periodic length"));
    }
  } catch (const InvalidParameter& e) {
    throw ConfigError("invalid law '" + text + "': " + e.what());
  }
  throw ConfigError("unknown law kind '" + kind +
                    "' (expected tm, rmd, random, or periodic)");
}

// --- subcommands -------------------------------------------------------------

void cmd_heatmap(const RunConfig& cfg) {
  Emitter emitter(cfg);
  std::string mode = cfg.getString("heatmap.mode", "durations");
  int maxiter = static_cast<int>(cfg.getInt("heatmap.maxiter", 64));
  double qBound = cfg.getDouble("heatmap.q_bound", 50.0);
  double pBound = cfg.getDouble("heatmap.p_bound", 2500.0);
  if (maxiter < 1) throw ConfigError("heatmap.maxiter must be >= 1");

  GridSpec outer, inner;
  bool durations = mode == "durations";
  if (durations) {
    outer = cfg.getGrid("heatmap.t0");
    inner = cfg.getGrid("heatmap.t1");
  } else if (mode == "trace") {
    outer = cfg.getGrid("heatmap.p");
    inner = cfg.getGrid("heatmap.q");
  } else {
    throw ConfigError("heatmap.mode must be 'durations' or 'trace'");
  }

  std::size_t nCells = static_cast<std::size_t>(outer.count) *
                       static_cast<std::size_t>(inner.count);
  struct CellResult {
    double t0, t1, p, q;
    long long nStar;
  };
  std::vector<CellResult> results(nCells);
  parallel_for(nCells, policy_for(cfg), [&](std::size_t idx) {
    int i = static_cast<int>(idx) / inner.count;
    int j = static_cast<int>(idx) % inner.count;
    CellResult& r = results[idx];
    TracePoint start{};
    if (durations) {
      r.t0 = outer.at(i);
      r.t1 = inner.at(j);
      start = initial_condition_from_params(r.t0, r.t1);
    } else {
      r.t0 = std::numeric_limits<double>::quiet_NaN();
      r.t1 = std::numeric_limits<double>::quiet_NaN();
      start = TracePoint{outer.at(i), inner.at(j)};
    }
    r.p = start.p;
    r.q = start.q;
    EscapeResult esc = escape_time(start, qBound, pBound, maxiter);
    r.nStar = esc.escaped ? static_cast<long long>(esc.n_star) : -1;
  });

  Table table;
  table.columns = {"t0_over_L", "t1_over_L", "p1", "q1", "n_star"};
  table.rows.reserve(nCells);
  for (const CellResult& r : results)
    table.rows.push_back({r.t0, r.t1, r.p, r.q, r.nStar});
  emitter.add(cfg.out, std::move(table));
  emitter.finish(nCells);
}

void cmd_preimages(const RunConfig& cfg) {
  Emitter emitter(cfg);
  int xi = static_cast<int>(cfg.getInt("preimages.xi", 8));
  double pMax = cfg.getDouble("preimages.p_max", 10.0);
  int samples = static_cast<int>(cfg.getInt("preimages.samples", 1601));
  std::vector<PreimagePoint> cloud = preimage_cloud(xi, pMax, samples);
  Table table;
  table.columns = {"order", "p", "q"};
  table.rows.reserve(cloud.size());
  for (const PreimagePoint& pt : cloud)
    table.rows.push_back({static_cast<long long>(pt.order), pt.p, pt.q});
  emitter.add(cfg.out, std::move(table));
  emitter.finish(cloud.size());
}

namespace {

EntropyBoundary parse_boundary(const RunConfig& cfg) {
  std::string b = cfg.getString("entropy.boundary", "periodic");
  if (b == "periodic") return EntropyBoundary::periodicTwoInterval;
  if (b == "open") return EntropyBoundary::openHalfChain;
  throw ConfigError("entropy.boundary must be 'periodic' or 'open'");
}

// Durations (T0/L, T1/L) of the two-step drive: direct t0/t1 keys, or the
// smallest-duration inverse of a trace point (p, q).
std::pair<double, double> two_step_durations(const RunConfig& cfg) {
  if (cfg.has("entropy.t0") || cfg.has("entropy.t1")) {
    return {cfg.requireDouble("entropy.t0"), cfg.requireDouble("entropy.t1")};
  }
  if (cfg.has("entropy.p") && cfg.has("entropy.q")) {
    TracePoint target{cfg.requireDouble("entropy.p"),
                      cfg.requireDouble("entropy.q")};
    auto roots = params_from_trace_point(target);
    return roots.front();
  }
  throw ConfigError(
      "entropy needs either entropy.t0/entropy.t1 or entropy.p/entropy.q");
}

void append_series_rows(Table& table, const EntropySeries& series,
                        const char* source, bool withSource) {
  for (const EntropySample& s : series.samples) {
    std::vector<Cell> row{static_cast<long long>(std::llround(s.n_or_step)),
                          s.physTime, s.value, s.imagResidual};
    if (withSource) row.emplace_back(std::string(source));
    table.rows.push_back(std::move(row));
  }
}

EntropySeries stream_two_step_series(const Law& law, std::uint64_t steps,
                                     const Mat2& m0, const Mat2& n0, double t0,
                                     double t1, double c,
                                     EntropyBoundary boundary, double renyiM,
                                     std::optional<double> twistZ) {
  EntropySeries series;
  series.c = c;
  series.boundary = boundary;
  series.renyiM = renyiM;
  series.samples.reserve(static_cast<std::size_t>(steps));
  EvolutionState state;
  for (std::uint64_t i = 0; i < steps; ++i) {
    int letter = protocol_letter(law, i);
    const Mat2& u = letter == 0 ? m0 : n0;
    evolve_product(state, u, u, Ordering::paper, letter == 0 ? t0 : t1);
    EntropyValue v = entanglement_delta(state, c, boundary, renyiM, twistZ);
    series.samples.push_back(EntropySample{static_cast<double>(i + 1),
                                           state.physTime, v.value,
                                           v.imagResidual});
  }
  return series;
}

}  // namespace

void cmd_entropy(const RunConfig& cfg) {
  Emitter emitter(cfg);
  Law law = parse_law(cfg.getString("entropy.law", "tm:14"), cfg.seed);
  std::string drive = cfg.getString("entropy.drive", "two_step");
  double c = cfg.getDouble("entropy.c", 1.0);
  double renyiM = cfg.getDouble("entropy.renyi_m", 1.0);
  EntropyBoundary boundary = parse_boundary(cfg);
  std::optional<double> twistZ;
  if (cfg.has("entropy.twist_z"))
    twistZ = cfg.requireDouble("entropy.twist_z");
  bool lattice = cfg.getBool("entropy.lattice", false);

  Table table;
  table.columns = {"n_or_step", "phys_time", "dS_real", "dS_imag_residual"};
  if (lattice) table.columns.push_back("source");

  EntropySeries series;
  if (drive == "combined") {
    if (lattice)
      throw ConfigError(
          "entropy.lattice applies to the unitary two-step drive only");
    CombinedParams cp;
    cp.Delta = cfg.requireDouble("entropy.delta");
    cp.lambda = cfg.requireDouble("entropy.lambda");
    cp.Gamma = cfg.getDouble("entropy.gamma", cp.Gamma);
    cp.c = c;
    if (law.kind == Law::Kind::RMD) {
      series = rmd_nonhermitian_run(cp, law.eta, law.blocks, law.seed);
    } else if (law.kind == Law::Kind::ThueMorse) {
      CombinedBlocks blocks = build_combined_blocks(cp);
      series = tm_entropy_series(blocks.M0, blocks.M0anti, blocks.N0,
                                 blocks.N0anti, law.n, c, boundary,
                                 cp.t0_over_l() + cp.lambda,
                                 cp.t1_over_l() + cp.lambda, renyiM, twistZ);
    } else {
      throw ConfigError("combined drive supports tm and rmd laws");
    }
    append_series_rows(table, series, "cft", false);
    emitter.add(cfg.out, std::move(table));
    emitter.finish(series.samples.size());
    return;
  }
  if (drive != "two_step")
    throw ConfigError("entropy.drive must be 'two_step' or 'combined'");

  auto [t0, t1] = two_step_durations(cfg);
  Mat2 m0 = build_u0(t0, 1.0);
  Mat2 n0 = build_u1(t1, 1.0);

  if (!lattice && law.kind == Law::Kind::ThueMorse &&
      !cfg.has("entropy.steps")) {
    // Stroboscopic doubling: one sample per level n = 0..law.n.
    series = tm_entropy_series(m0, m0, n0, n0, law.n, c, boundary, t0, t1,
                               renyiM, twistZ);
    append_series_rows(table, series, "cft", false);
    emitter.add(cfg.out, std::move(table));
    emitter.finish(series.samples.size());
    return;
  }

  std::uint64_t steps =
      cfg.getU64("entropy.steps", protocol_elementary_count(law));
  std::uint64_t cap = lattice ? 100000ULL : 10000000ULL;
  if (steps > cap)
    throw ConfigError("entropy.steps too large for streaming mode");

  if (!lattice) {
    series = stream_two_step_series(law, steps, m0, n0, t0, t1, c, boundary,
                                    renyiM, twistZ);
    append_series_rows(table, series, "cft", false);
    emitter.add(cfg.out, std::move(table));
    emitter.finish(series.samples.size());
    return;
  }

  // Lattice overlay: free-fermion half-chain entropy against the conformal
  // prediction for the same letter sequence, joined on the step index.
  LatticeSpec spec;
  spec.L = static_cast<int>(cfg.getInt("entropy.lattice_l", 600));
  EntropySeries cft = stream_two_step_series(
      law, steps, m0, n0, t0, t1, 1.0, EntropyBoundary::openHalfChain, 1.0,
      twistZ.has_value() ? twistZ : std::optional<double>(1.0));

  DeformationParams uniform;
  DeformationParams deformed;
  deformed.sigmaPlus = 1.0;
  LatticeProtocol protocol;
  protocol.h0 = hopping_matrix(spec, uniform);
  protocol.h1 = hopping_matrix(spec, deformed);
  protocol.T0 = t0 * spec.L;
  protocol.T1 = t1 * spec.L;
  protocol.letters.reserve(static_cast<std::size_t>(steps));
  for (std::uint64_t i = 0; i < steps; ++i)
    protocol.letters.push_back(protocol_letter(law, i));
  EntropySeries lat =
      run_protocol_lattice(spec, protocol, 0, spec.L / 2);

  for (std::size_t k = 0; k < cft.samples.size(); ++k) {
    const EntropySample& a = cft.samples[k];
    const EntropySample& b = lat.samples[k];
    table.rows.push_back({static_cast<long long>(std::llround(a.n_or_step)),
                          a.physTime, a.value, a.imagResidual,
                          std::string("cft")});
    table.rows.push_back({static_cast<long long>(std::llround(b.n_or_step)),
                          b.physTime, b.value, b.imagResidual,
                          std::string("lattice")});
  }
  emitter.add(cfg.out, std::move(table));
  emitter.finish(cft.samples.size());
}

void cmd_scaling(const RunConfig& cfg) {
  Emitter emitter(cfg);
  std::string familyText = cfg.getString("scaling.family", "fixed");
  RmdFamily family;
  if (familyText == "fixed") family = RmdFamily::fixedPoint;
  else if (familyText == "preimage") family = RmdFamily::preimage;
  else throw ConfigError("scaling.family must be 'fixed' or 'preimage'");

  std::vector<int> etas =
      parse_int_list(cfg.getString("scaling.eta", "0,1,2"), "scaling.eta");
  GridSpec kGrid = parse_grid(cfg.getString("scaling.k", "0.03:0.1:6"));
  std::string kScale = cfg.getString("scaling.k_scale", "log");
  std::vector<double> ks;
  if (kScale == "log") ks = log_grid_points(kGrid);
  else if (kScale == "linear") ks = grid_points(kGrid);
  else throw ConfigError("scaling.k_scale must be 'log' or 'linear'");

  int realizations = static_cast<int>(cfg.getInt("scaling.realizations", 64));
  double sStar = cfg.getDouble("scaling.s_star", 10.0);
  std::uint64_t maxBlocks = cfg.getU64("scaling.max_blocks", 1000000000ULL);
  double cCharge = cfg.getDouble("scaling.c", 1.0);
  int xi = static_cast<int>(cfg.getInt("scaling.xi", 1));
  int ell1 = static_cast<int>(cfg.getInt("scaling.ell1", 0));
  double t0 = cfg.getDouble("scaling.t0", 2.0 / 3.0);

  Table table;
  table.columns = {"family", "eta", "xi",           "K",
                   "t_star_mean", "t_star_stderr", "realizations", "seed"};
  Table fits;
  fits.columns = {"family", "eta", "xi", "slope", "slope_stderr",
                  "intercept", "points"};

  std::size_t cellIndex = 0;
  for (int eta : etas) {
    std::vector<std::pair<double, double>> fitPoints;
    for (double K : ks) {
      RmdParams rp;
      rp.eta = eta;
      rp.K = K;
      rp.family = family;
      rp.ell1 = ell1;
      rp.T0_over_L = t0;
      rp.xi = family == RmdFamily::preimage ? xi : 0;
      rp.c = cCharge;
      std::uint64_t cellSeed = mix(cfg.seed, cellIndex);
      LifetimeStats stats = ensemble_lifetime(rp, realizations, cellSeed,
                                              sStar, maxBlocks,
                                              policy_for(cfg));
      table.rows.push_back({std::string(familyText),
                            static_cast<long long>(eta),
                            static_cast<long long>(rp.xi), K, stats.tStarMean,
                            stats.tStarStderr,
                            static_cast<long long>(stats.realizations),
                            static_cast<unsigned long long>(cellSeed)});
      if (std::isfinite(stats.tStarMean) && stats.tStarMean > 0.0)
        fitPoints.emplace_back(K, stats.tStarMean);
      ++cellIndex;
    }
    if (fitPoints.size() >= 3) {
      ScalingFit fit = scaling_fit(fitPoints);
      fits.rows.push_back({std::string(familyText),
                           static_cast<long long>(eta),
                           static_cast<long long>(family ==
                                                          RmdFamily::preimage
                                                      ? xi
                                                      : 0),
                           fit.slope, fit.stderrSlope, fit.intercept,
                           static_cast<long long>(fitPoints.size())});
    }
  }

  emitter.add(cfg.out, std::move(table));
  emitter.add(sidecar_path(cfg, "fits"), std::move(fits));
  emitter.finish(cellIndex);
}

void cmd_phase(const RunConfig& cfg) {
  Emitter emitter(cfg);
  GridSpec deltaGrid = parse_grid(cfg.getString("phase.delta", "0:0.5:101"));
  GridSpec lambdaGrid = parse_grid(cfg.getString("phase.lambda", "0:0.3:61"));
  double Gamma = cfg.getDouble("phase.gamma", 1.5707963267948966);
  std::uint64_t steps = cfg.getU64("phase.steps", 16384);
  double threshold = cfg.getDouble("phase.threshold", 1e-3);

  PhaseDiagram diagram = phase_diagram(deltaGrid, lambdaGrid, Gamma, steps,
                                       policy_for(cfg), threshold);

  Table table;
  table.columns = {"delta", "lambda", "label", "lyapunov", "residual"};
  table.rows.reserve(diagram.cells.size());
  for (const PhaseCell& cell : diagram.cells)
    table.rows.push_back({cell.delta, cell.lambda,
                          std::string(to_string(cell.label)), cell.lyapunov,
                          cell.residual});

  Table boundary;
  boundary.columns = {"delta", "lambda"};
  boundary.rows.reserve(diagram.boundary.size());
  for (const auto& [d, l] : diagram.boundary) boundary.rows.push_back({d, l});

  emitter.add(cfg.out, std::move(table));
  emitter.add(sidecar_path(cfg, "boundary"), std::move(boundary));
  emitter.finish(diagram.cells.size());
}

void run_subcommand(const RunConfig& cfg) {
  if (cfg.out.empty()) throw ConfigError("no output path configured");
  if (cfg.subcommand == "heatmap") return cmd_heatmap(cfg);
  if (cfg.subcommand == "preimages") return cmd_preimages(cfg);
  if (cfg.subcommand == "entropy") return cmd_entropy(cfg);
  if (cfg.subcommand == "scaling") return cmd_scaling(cfg);
  if (cfg.subcommand == "phase") return cmd_phase(cfg);
  throw ConfigError("unknown subcommand '" + cfg.subcommand + "'");
}

// --- front door --------------------------------------------------------------

int cli_main(int argc, const char* const* argv) {
  CLI::App app{
      "Driven-CFT sweeps: heating maps, preimage clouds, entropy series, "
      "lifetime scalings, and phase diagrams emitted as CSV/JSON."};
  app.require_subcommand(1);

  struct SubState {
    CLI::App* sub = nullptr;
    std::string config;
    std::uint64_t seed = 0;
    CLI::Option* seedOpt = nullptr;
    int threads = 0;
    CLI::Option* threadsOpt = nullptr;
    std::string out;
    CLI::Option* outOpt = nullptr;
    std::string format;
    CLI::Option* formatOpt = nullptr;
  };
  std::vector<std::unique_ptr<SubState>> states;

  auto addSub = [&](const char* name, const char* desc) {
    auto state = std::make_unique<SubState>();
    CLI::App* sub = app.add_subcommand(name, desc);
    state->sub = sub;
    sub->add_option("--config", state->config,
                    "Config file (flat key=value with [section] headers)");
    state->seedOpt =
        sub->add_option("--seed", state->seed,
                        "Global 64-bit seed (default 0; overrides config)")
            ->envname("DCFT_SEED");
    state->threadsOpt =
        sub->add_option("--threads", state->threads,
                        "Worker threads, 0 = auto (overrides config)")
            ->envname("DCFT_THREADS");
    state->outOpt = sub->add_option(
        "--out", state->out, "Output data file (CSV/JSON + manifest sidecar)");
    state->formatOpt =
        sub->add_option("--format", state->format, "Output format: csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
    states.push_back(std::move(state));
  };

  addSub("heatmap",
         "Heating-time raster over (T0/L, T1/L) durations or (p, q) traces");
  addSub("preimages", "Exact preimage cloud of the period-2 trace point");
  addSub("entropy", "Entanglement / pseudo-entropy series of a drive");
  addSub("scaling", "Heating-lifetime ensembles and log-log slope fits");
  addSub("phase", "Heating phase raster and analytic boundary polyline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const SubState* state = nullptr;
    for (const auto& s : states)
      if (s->sub->parsed()) state = s.get();
    if (!state) throw ConfigError("no subcommand selected");

    RunConfig cfg;
    cfg.subcommand = state->sub->get_name();
    if (!state->config.empty())
      cfg.values = parse_config_file(state->config);

    cfg.seed = state->seedOpt->count() > 0
                   ? state->seed
                   : cfg.getU64("run.seed", 0);
    long long threads = state->threadsOpt->count() > 0
                            ? state->threads
                            : cfg.getInt("run.threads", 0);
    if (threads < 0) throw ConfigError("thread count must be >= 0");
    cfg.threads = static_cast<int>(threads);

    std::string out = state->outOpt->count() > 0
                          ? state->out
                          : cfg.getString("run.out", "");
    if (out.empty())
      throw ConfigError("no output path (use --out or run.out)");
    cfg.out = out;

    std::string format = state->formatOpt->count() > 0
                             ? state->format
                             : cfg.getString("run.format", "csv");
    if (format == "csv") cfg.format = OutputFormat::csv;
    else if (format == "json") cfg.format = OutputFormat::json;
    else throw ConfigError("run.format must be 'csv' or 'json'");

    set_thread_count(cfg.threads);
    run_subcommand(cfg);
    return 0;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace drivencft
