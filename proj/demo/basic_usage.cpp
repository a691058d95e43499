// Builds a small dataset and answers one polygonal query with both engines.

#include <cstdio>

#include "vaq/vaq.hpp"

int main() {
  const vaq::Dataset data = vaq::Dataset::build(vaq::generate_dataset(20000, 7));
  const vaq::Polygon area = vaq::random_query_polygon(/*seed=*/3, /*query_size=*/0.05);

  const vaq::QueryOutcome trad = vaq::filter_refine_query(data, area);
  const vaq::QueryOutcome voro = vaq::voronoi_area_query(data, area);

  std::printf("polygon: %s\n", vaq::format_polygon(area).c_str());
  std::printf("result size          %zu\n", voro.result_ids.size());
  std::printf("filter-refine        %zu candidates\n", trad.candidate_count);
  std::printf("voronoi traversal    %zu candidates\n", voro.candidate_count);
  std::printf("same answer          %s\n", trad.result_ids == voro.result_ids ? "yes" : "no");
  return trad.result_ids == voro.result_ids ? 0 : 1;
}
