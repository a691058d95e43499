#pragma once

// Benchmark harness: synthetic datasets, point-file IO, the data-size and
// query-size sweeps, and the CSV report.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "vaq/geometry.hpp"
#include "vaq/polygon.hpp"
#include "vaq/query.hpp"
#include "vaq/random.hpp"
#include "vaq/svg.hpp"

namespace vaq {

// ---------------------------------------------------------------------------
// Datasets

/// n i.i.d. uniform points in the unit square with ids 0..n-1. Exact
/// duplicates are redrawn. Deterministic per seed.
inline std::vector<Point> generate_dataset(std::size_t n, std::uint64_t seed) {
  if (n < 3) throw construction_error("generate_dataset: need n >= 3");
  struct Hash {
    std::size_t operator()(const std::pair<double, double>& p) const noexcept {
      return std::hash<double>{}(p.first) * 0x9e3779b97f4a7c15ULL ^ std::hash<double>{}(p.second);
    }
  };
  std::unordered_set<std::pair<double, double>, Hash> seen;
  seen.reserve(n);
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(n);
  while (pts.size() < n) {
    const double x = rng.uniform();
    const double y = rng.uniform();
    if (!seen.emplace(x, y).second) continue;
    pts.push_back({x, y, static_cast<PointId>(pts.size())});
  }
  return pts;
}

inline void write_points(const std::filesystem::path& path, std::span<const Point> pts) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  char buf[64];
  for (const Point& p : pts) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x, p.y);
    out.write(buf, len);
  }
  if (!out) throw io_error("write failed: " + path.string());
}

/// Reads `x y` lines; blank lines and lines starting with '#' are skipped.
/// Ids are assigned in file order.
inline std::vector<Point> read_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  std::vector<Point> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    double x, y;
    std::string extra;
    if (!(fields >> x >> y) || (fields >> extra)) {
      throw io_error(path.string() + ":" + std::to_string(lineno) + ": expected `x y`");
    }
    pts.push_back({x, y, static_cast<PointId>(pts.size())});
  }
  return pts;
}

/// One polygon per non-blank line.
inline std::vector<Polygon> read_polygons(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  std::vector<Polygon> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      out.push_back(parse_polygon(line));
    } catch (const geometry_error& e) {
      throw io_error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep configuration

enum class SweepMode { data_size, query_size };

struct SweepConfig {
  SweepMode mode = SweepMode::data_size;
  std::vector<std::size_t> data_sizes;
  std::vector<double> query_sizes;
  std::size_t repetitions = 100;
  std::uint64_t rng_seed = 1;
  std::size_t rtree_fanout = RTree::kDefaultFanout;
  std::filesystem::path output_dir = ".";
  bool wall_timing = true;   // false writes zeros in the time columns
  std::size_t timing_rounds = 10;  // passes over all cells, averaged
  bool svg_samples = true;   // one sample drawing per cell

  static SweepConfig defaults(SweepMode mode) {
    SweepConfig c;
    c.mode = mode;
    if (mode == SweepMode::data_size) {
      for (std::size_t n = 100000; n <= 1000000; n += 100000) c.data_sizes.push_back(n);
      c.query_sizes = {0.01};
    } else {
      c.data_sizes = {100000};
      c.query_sizes = {0.01, 0.02, 0.04, 0.08, 0.16, 0.32};
    }
    return c;
  }

  /// Cells in sweep order. The data-size sweep varies n at the first query
  /// size; the query-size sweep varies the query size at the first n.
  std::vector<std::pair<std::size_t, double>> cells() const {
    std::vector<std::pair<std::size_t, double>> out;
    if (mode == SweepMode::data_size) {
      for (std::size_t n : data_sizes) out.emplace_back(n, query_sizes.front());
    } else {
      for (double q : query_sizes) out.emplace_back(data_sizes.front(), q);
    }
    return out;
  }

  void check() const {
    if (repetitions < 1) throw io_error("config: repetitions must be >= 1");
    if (timing_rounds < 1) throw io_error("config: timing_rounds must be >= 1");
    if (data_sizes.empty() || query_sizes.empty()) throw io_error("config: empty size list");
    for (std::size_t n : data_sizes) {
      if (n < 3) throw io_error("config: data sizes must be >= 3");
    }
    for (double q : query_sizes) {
      if (!(q > 0.0 && q <= 1.0)) throw io_error("config: query sizes must lie in (0, 1]");
    }
    if (rtree_fanout < 4) throw io_error("config: rtree_fanout must be >= 4");
  }
};

inline std::string_view to_string(SweepMode m) {
  return m == SweepMode::data_size ? "data" : "query";
}

inline SweepMode parse_sweep_mode(std::string_view s) {
  if (s == "data" || s == "data_size" || s == "data_size_sweep") return SweepMode::data_size;
  if (s == "query" || s == "query_size" || s == "query_size_sweep") return SweepMode::query_size;
  throw io_error("unknown sweep mode '" + std::string(s) + "'");
}

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw io_error("config: " + key + ": '" + text + "' is not a number");
  }
}

inline std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t exact = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), exact);
  if (ec == std::errc() && end == text.data() + text.size()) return exact;
  const double v = parse_number(key, text);
  if (v < 0 || v != std::floor(v) || v > 1e18) {
    throw io_error("config: " + key + ": '" + text + "' is not a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

template <class F>
void for_each_item(const std::string& list, F&& f) {
  std::string item;
  std::istringstream in(list);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) f(item);
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw io_error("config: " + key + ": '" + v + "' is not a boolean");
}

}  // namespace detail

/// Parses flat `key = value` text. Lists are comma separated; sizes accept
/// scientific notation (1e5). Keys absent from the text keep the defaults of
/// the given mode (or of `mode=` when the text sets it).
inline SweepConfig parse_sweep_config(std::string_view text,
                                      std::optional<SweepMode> mode_override = std::nullopt) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw io_error("config line " + std::to_string(lineno) + ": expected key=value");
    }
    kv[detail::trim(std::string_view(line).substr(0, eq))] =
        detail::trim(std::string_view(line).substr(eq + 1));
  }

  SweepMode mode = SweepMode::data_size;
  if (auto it = kv.find("mode"); it != kv.end()) mode = parse_sweep_mode(it->second);
  if (mode_override) mode = *mode_override;
  SweepConfig c = SweepConfig::defaults(mode);

  for (const auto& [key, value] : kv) {
    if (key == "mode") {
      continue;
    } else if (key == "data_sizes") {
      c.data_sizes.clear();
      detail::for_each_item(value, [&](const std::string& v) {
        c.data_sizes.push_back(detail::parse_count(key, v));
      });
    } else if (key == "query_sizes") {
      c.query_sizes.clear();
      detail::for_each_item(value, [&](const std::string& v) {
        c.query_sizes.push_back(detail::parse_number(key, v));
      });
    } else if (key == "repetitions") {
      c.repetitions = detail::parse_count(key, value);
    } else if (key == "rng_seed") {
      c.rng_seed = detail::parse_count(key, value);
    } else if (key == "rtree_fanout") {
      c.rtree_fanout = detail::parse_count(key, value);
    } else if (key == "output_dir") {
      c.output_dir = value;
    } else if (key == "timing") {
      if (value == "wall") c.wall_timing = true;
      else if (value == "off" || value == "none") c.wall_timing = false;
      else throw io_error("config: timing must be 'wall' or 'off'");
    } else if (key == "timing_rounds") {
      c.timing_rounds = detail::parse_count(key, value);
    } else if (key == "svg_samples") {
      c.svg_samples = detail::parse_bool(key, value);
    } else {
      throw io_error("config: unknown key '" + key + "'");
    }
  }
  c.check();
  return c;
}

inline SweepConfig load_sweep_config(const std::filesystem::path& path,
                                     std::optional<SweepMode> mode_override = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_sweep_config(buf.str(), mode_override);
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepRow {
  std::size_t data_size = 0;
  double query_size = 0.0;
  double result_mean = 0.0;
  double cand_trad = 0.0;
  double cand_voro = 0.0;
  double time_trad_ns = 0.0;
  double time_voro_ns = 0.0;
  double cand_savings_pct = 0.0;
  double time_savings_pct = 0.0;
  // Not part of the CSV.
  double fill_ratio_mean = 0.0;      // area(A) / area(mbr(A))
  double intersection_tests_mean = 0.0;
  std::size_t repetitions = 0;
};

struct BuildRow {
  std::size_t data_size = 0;
  double rtree_build_ns = 0.0;
  double triangulation_build_ns = 0.0;
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepRow> rows;
  std::vector<BuildRow> builds;
};

inline constexpr std::string_view kReportHeader =
    "data_size,query_size,result_mean,cand_trad,cand_voro,time_trad_ns,time_voro_ns,"
    "cand_savings_pct,time_savings_pct";

inline std::string format_report_csv(const SweepReport& report) {
  std::string out(kReportHeader);
  out += '\n';
  char buf[320];
  for (const SweepRow& r : report.rows) {
    std::snprintf(buf, sizeof buf, "%zu,%.6g,%.4f,%.4f,%.4f,%.1f,%.1f,%.4f,%.4f\n", r.data_size,
                  r.query_size, r.result_mean, r.cand_trad, r.cand_voro, r.time_trad_ns,
                  r.time_voro_ns, r.cand_savings_pct, r.time_savings_pct);
    out += buf;
  }
  return out;
}

inline std::string format_build_csv(const SweepReport& report) {
  std::string out = "data_size,rtree_build_ns,triangulation_build_ns\n";
  char buf[128];
  for (const BuildRow& b : report.builds) {
    std::snprintf(buf, sizeof buf, "%zu,%.0f,%.0f\n", b.data_size, b.rtree_build_ns,
                  b.triangulation_build_ns);
    out += buf;
  }
  return out;
}

/// Seed of the polygon used by repetition `rep` of a cell. Both engines see
/// the same polygon; rep == -1 is the discarded warm-up query. The data size
/// is left out on purpose: cells that differ only in n replay the same
/// polygons, so the timing trend along n is not buried in polygon noise.
inline std::uint64_t polygon_seed(std::uint64_t sweep_seed, double query_size, std::int64_t rep) {
  const auto q_bits = static_cast<std::uint64_t>(std::llround(query_size * 1e9));
  return mix_seed(mix_seed(sweep_seed, q_bits), static_cast<std::uint64_t>(rep));
}

inline std::uint64_t dataset_seed(std::uint64_t sweep_seed, std::size_t n) {
  return mix_seed(sweep_seed ^ 0xda7a5e7da7a5e7ULL, n);
}

namespace detail {

inline double percent_saved(double baseline, double ours) {
  return baseline > 0.0 ? 100.0 * (baseline - ours) / baseline : 0.0;
}

inline std::string cell_tag(std::size_t n, double q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "n%zu_q%g", n, q * 100.0);
  return buf;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw io_error("write failed: " + path.string());
}

}  // namespace detail

/// Runs every cell of the sweep: builds each dataset once, runs
/// `repetitions` random 10-gon queries through both engines on identical
/// polygons (after one discarded warm-up query) and averages. With wall
/// timing on, the whole set of cells is replayed `timing_rounds` times and
/// the time columns average over all rounds; counts come from the first.
/// Query timing is single-threaded and excludes index construction. Any
/// disagreement between the engines' result sets throws.
///
/// When `write_files` is set, writes report.csv, build.csv and (optionally)
/// one SVG sample per cell into config.output_dir.
inline SweepReport run_sweep(const SweepConfig& config, bool write_files = true) {
  config.check();
  SweepReport report;
  report.config = config;

  if (write_files) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw io_error("cannot create " + config.output_dir.string() + ": " + ec.message());
  }

  // Every dataset stays resident so the timing rounds can revisit all cells.
  std::map<std::size_t, Dataset> datasets;
  for (auto [n, q] : config.cells()) {
    if (datasets.contains(n)) continue;
    const Dataset& d =
        datasets
            .emplace(n, Dataset::build(generate_dataset(n, dataset_seed(config.rng_seed, n)),
                                       config.rtree_fanout))
            .first->second;
    report.builds.push_back({n, static_cast<double>(d.rtree_build.count()),
                             static_cast<double>(d.triangulation_build.count())});
  }

  const auto cells = config.cells();
  const std::size_t rounds = config.wall_timing ? config.timing_rounds : 1;
  std::vector<double> ttrad(cells.size(), 0.0), tvoro(cells.size(), 0.0);
  report.rows.resize(cells.size());

  // Host noise drifts on a scale of seconds, so one long pass per cell would
  // let it masquerade as a trend across cells. Short rounds spread it evenly.
  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto [n, q] = cells[c];
      const Dataset& data = datasets.at(n);
      {
        const Polygon warmup = random_query_polygon(polygon_seed(config.rng_seed, q, -1), q);
        (void)filter_refine_query(data, warmup);
        (void)voronoi_area_query(data, warmup);
      }

      double result_sum = 0, trad_sum = 0, voro_sum = 0, fill = 0, isect = 0;
      for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
        const Polygon area = random_query_polygon(
            polygon_seed(config.rng_seed, q, static_cast<std::int64_t>(rep)), q);
        // Alternate which engine goes first.
        QueryOutcome trad, voro;
        if ((rep + round) % 2 == 0) {
          trad = filter_refine_query(data, area);
          voro = voronoi_area_query(data, area);
        } else {
          voro = voronoi_area_query(data, area);
          trad = filter_refine_query(data, area);
        }
        ttrad[c] += static_cast<double>(trad.elapsed.count());
        tvoro[c] += static_cast<double>(voro.elapsed.count());
        if (round > 0) continue;

        if (trad.result_ids != voro.result_ids) {
          throw std::runtime_error("engines disagree at n=" + std::to_string(n) +
                                   " query_size=" + std::to_string(q) + " repetition " +
                                   std::to_string(rep) + " polygon: " + format_polygon(area));
        }
        result_sum += static_cast<double>(trad.result_ids.size());
        trad_sum += static_cast<double>(trad.candidate_count);
        voro_sum += static_cast<double>(voro.candidate_count);
        fill += area.area() / mbr(area).area();
        isect += static_cast<double>(voro.intersection_tests);

        if (write_files && config.svg_samples && rep == 0) {
          render_svg(data, area, voro, trad,
                     config.output_dir / ("sample_" + detail::cell_tag(n, q) + ".svg"));
        }
      }
      if (round > 0) continue;

      SweepRow& row = report.rows[c];
      const auto reps = static_cast<double>(config.repetitions);
      row.data_size = n;
      row.query_size = q;
      row.repetitions = config.repetitions;
      row.result_mean = result_sum / reps;
      row.cand_trad = trad_sum / reps;
      row.cand_voro = voro_sum / reps;
      row.fill_ratio_mean = fill / reps;
      row.intersection_tests_mean = isect / reps;
      row.cand_savings_pct = detail::percent_saved(row.cand_trad, row.cand_voro);
    }
  }

  if (config.wall_timing) {
    const auto total = static_cast<double>(config.repetitions * rounds);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      SweepRow& row = report.rows[c];
      row.time_trad_ns = ttrad[c] / total;
      row.time_voro_ns = tvoro[c] / total;
      row.time_savings_pct = detail::percent_saved(row.time_trad_ns, row.time_voro_ns);
    }
  }

  if (write_files) {
    detail::write_text(config.output_dir / "report.csv", format_report_csv(report));
    if (config.wall_timing) {
      detail::write_text(config.output_dir / "build.csv", format_build_csv(report));
    }
  }
  return report;
}

}  // namespace vaq
