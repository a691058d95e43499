// Command-line front end: dataset generation, single queries, and sweeps.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "vaq/vaq.hpp"

namespace {

int run_gen(std::size_t n, std::uint64_t seed, const std::string& out) {
  vaq::write_points(out, vaq::generate_dataset(n, seed));
  std::printf("wrote %zu points to %s\n", n, out.c_str());
  return 0;
}

void print_outcome(std::size_t index, const char* engine, const vaq::QueryOutcome& o) {
  std::printf("polygon %zu engine=%s result=%zu candidates=%zu intersection_tests=%zu elapsed_ns=%lld\n",
              index, engine, o.result_ids.size(), o.candidate_count, o.intersection_tests,
              static_cast<long long>(o.elapsed.count()));
}

int run_query(const std::string& data_path, const std::string& polygon_path,
              const std::string& engine, bool paranoid, const std::string& svg_path,
              std::size_t fanout) {
  const vaq::Dataset data = vaq::Dataset::build(vaq::read_points(data_path), fanout);
  const auto polygons = vaq::read_polygons(polygon_path);
  if (polygons.empty()) {
    std::fprintf(stderr, "no polygons in %s\n", polygon_path.c_str());
    return 1;
  }
  const bool run_voronoi = engine == "voronoi" || engine == "both";
  const bool run_rtree = engine == "rtree" || engine == "both";

  int mismatches = 0;
  for (std::size_t i = 0; i < polygons.size(); ++i) {
    const vaq::Polygon& area = polygons[i];
    vaq::QueryOutcome voro, trad;
    if (run_rtree) {
      trad = vaq::filter_refine_query(data, area);
      print_outcome(i, "rtree", trad);
    }
    if (run_voronoi) {
      voro = vaq::voronoi_area_query(data, area);
      print_outcome(i, "voronoi", voro);
    }
    if (paranoid) {
      const auto truth = vaq::brute_force_query(data, area);
      if ((run_rtree && trad.result_ids != truth) || (run_voronoi && voro.result_ids != truth)) {
        ++mismatches;
        std::fprintf(stderr, "paranoid: polygon %zu disagrees with brute force (%zu points)\n", i,
                     truth.size());
      }
    }
    if (!svg_path.empty() && i == 0) {
      if (!run_rtree) trad = vaq::filter_refine_query(data, area);
      if (!run_voronoi) voro = vaq::voronoi_area_query(data, area);
      vaq::render_svg(data, area, voro, trad, svg_path);
    }
  }
  if (paranoid) std::printf("paranoid: %d mismatch(es)\n", mismatches);
  return mismatches == 0 ? 0 : 2;
}

int run_sweep_cmd(const std::string& mode, const std::string& config_path,
                  const std::string& out_dir, std::size_t fanout, bool fanout_given) {
  const auto sweep_mode = vaq::parse_sweep_mode(mode);
  vaq::SweepConfig cfg = config_path.empty() ? vaq::SweepConfig::defaults(sweep_mode)
                                             : vaq::load_sweep_config(config_path, sweep_mode);
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (fanout_given) cfg.rtree_fanout = fanout;
  const vaq::SweepReport report = vaq::run_sweep(cfg);
  std::fputs(vaq::format_report_csv(report).c_str(), stdout);
  std::printf("report written to %s\n", (cfg.output_dir / "report.csv").string().c_str());
  return 0;
}

int run_edges(const std::string& data_path, const std::string& out) {
  const auto tri = vaq::build_triangulation(vaq::read_points(data_path));
  if (out.empty()) {
    tri.write_edges(std::cout);
  } else {
    std::ofstream f(out);
    if (!f) throw vaq::io_error("cannot open " + out + " for writing");
    tri.write_edges(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polygonal area queries over 2-D points: R-tree filter-refine vs Voronoi traversal"};
  app.require_subcommand(1);

  std::size_t fanout = vaq::RTree::kDefaultFanout;
  auto* fanout_opt = app.add_option("--rtree-fanout", fanout, "Maximum entries per R-tree node")
                         ->check(CLI::Range(std::size_t{4}, std::size_t{1024}));

  auto* gen = app.add_subcommand("gen", "Generate uniform points in the unit square");
  std::size_t n = 0;
  std::uint64_t seed = 1;
  std::string gen_out;
  gen->add_option("--n", n, "Number of points")->required()->check(CLI::Range(std::size_t{3}, std::size_t{1} << 31));
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--out", gen_out, "Output file (lines of `x y`)")->required();

  auto* query = app.add_subcommand("query", "Run area queries from a polygon file");
  std::string data_path, polygon_path, engine = "both", svg_path;
  bool paranoid = false;
  query->add_option("--data", data_path, "Point file")->required()->check(CLI::ExistingFile);
  query->add_option("--polygon", polygon_path, "Polygon file, one polygon per line")
      ->required()
      ->check(CLI::ExistingFile);
  query->add_option("--engine", engine, "voronoi, rtree or both")
      ->check(CLI::IsMember({"voronoi", "rtree", "both"}));
  query->add_flag("--paranoid", paranoid, "Cross-check every result against a linear scan");
  query->add_option("--svg", svg_path, "Draw the first query to this SVG file");

  auto* sweep = app.add_subcommand("sweep", "Run a data-size or query-size sweep");
  std::string mode, config_path, out_dir;
  sweep->add_option("--mode", mode, "data or query")->required()->check(CLI::IsMember({"data", "query"}));
  sweep->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
  sweep->add_option("--out-dir", out_dir, "Directory for report.csv and SVG samples");

  auto* edges = app.add_subcommand("edges", "Dump the Delaunay edge list of a point file");
  std::string edges_out;
  edges->add_option("--data", data_path, "Point file")->required()->check(CLI::ExistingFile);
  edges->add_option("--out", edges_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return run_gen(n, seed, gen_out);
    if (*query) return run_query(data_path, polygon_path, engine, paranoid, svg_path, fanout);
    if (*sweep) return run_sweep_cmd(mode, config_path, out_dir, fanout, fanout_opt->count() > 0);
    if (*edges) return run_edges(data_path, edges_out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
