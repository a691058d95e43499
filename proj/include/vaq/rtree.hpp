#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "vaq/geometry.hpp"

namespace vaq {

/// Static R-tree over points, packed by Sort-Tile-Recursive loading.
///
/// Nodes are stored level by level; level 0 holds the leaves and the last
/// level holds the single root. A node's children are a contiguous run in
/// the level below (or in the entry array for leaves).
class RTree {
public:
  static constexpr std::size_t kDefaultFanout = 16;

  struct Node {
    Rect box;
    std::uint32_t first = 0;
    std::uint32_t count = 0;
  };

  RTree() = default;

  static RTree bulk_load(std::span<const Point> points, std::size_t fanout = kDefaultFanout) {
    if (points.empty()) throw construction_error("rtree: cannot bulk-load an empty point set");
    if (fanout < 4) throw construction_error("rtree: fanout must be at least 4");
    RTree tree;
    tree.fanout_ = fanout;

    // Leaves.
    std::vector<Item> items(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      items[i] = {points[i].x, points[i].y, static_cast<std::uint32_t>(i)};
    }
    std::vector<Point> packed(points.size());
    auto groups = tile(items, fanout);
    std::vector<Node> level;
    level.reserve(groups.size());
    std::size_t cursor = 0;
    for (auto [begin, end] : groups) {
      Node node{Rect::inverted(), static_cast<std::uint32_t>(cursor),
                static_cast<std::uint32_t>(end - begin)};
      for (std::size_t i = begin; i < end; ++i) {
        packed[cursor] = points[items[i].ref];
        node.box.expand(packed[cursor].pos());
        ++cursor;
      }
      level.push_back(node);
    }
    tree.entries_ = std::move(packed);
    tree.levels_.push_back(std::move(level));

    // Internal levels until a single root remains.
    while (tree.levels_.back().size() > 1) {
      std::vector<Node>& below = tree.levels_.back();
      items.resize(below.size());
      for (std::size_t i = 0; i < below.size(); ++i) {
        const Rect& b = below[i].box;
        items[i] = {(b.min_x + b.max_x) / 2.0, (b.min_y + b.max_y) / 2.0,
                    static_cast<std::uint32_t>(i)};
      }
      groups = tile(items, fanout);
      std::vector<Node> reordered(below.size());
      std::vector<Node> parents;
      parents.reserve(groups.size());
      cursor = 0;
      for (auto [begin, end] : groups) {
        Node node{Rect::inverted(), static_cast<std::uint32_t>(cursor),
                  static_cast<std::uint32_t>(end - begin)};
        for (std::size_t i = begin; i < end; ++i) {
          reordered[cursor] = below[items[i].ref];
          node.box.expand(reordered[cursor].box);
          ++cursor;
        }
        parents.push_back(node);
      }
      below = std::move(reordered);
      tree.levels_.push_back(std::move(parents));
    }
    return tree;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t fanout() const noexcept { return fanout_; }
  /// Number of levels from the root down to the leaves, both included.
  std::size_t height() const noexcept { return levels_.size(); }
  const Rect& bounds() const noexcept { return levels_.back().front().box; }

  std::span<const Node> level(std::size_t depth_from_leaves) const { return levels_[depth_from_leaves]; }
  std::span<const Point> entries() const noexcept { return entries_; }

  /// Calls visit(const Point&) for every point inside the closed rectangle.
  template <class Visitor>
  void visit_window(const Rect& window, Visitor&& visit) const {
    if (levels_.empty() || !bounds().intersects(window)) return;
    struct Frame {
      std::uint32_t level, index;
    };
    std::vector<Frame> stack;
    stack.push_back({static_cast<std::uint32_t>(levels_.size() - 1), 0});
    while (!stack.empty()) {
      const Frame f = stack.back();
      stack.pop_back();
      const Node& node = levels_[f.level][f.index];
      if (f.level == 0) {
        const bool inside = window.contains(node.box);
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
          if (inside || window.contains(entries_[i].pos())) visit(entries_[i]);
        }
        continue;
      }
      const auto& children = levels_[f.level - 1];
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        if (children[i].box.intersects(window)) stack.push_back({f.level - 1, i});
      }
    }
  }

  /// Ids of all points p with min_x <= p.x <= max_x and min_y <= p.y <= max_y.
  std::vector<PointId> window_query(const Rect& window) const {
    std::vector<PointId> out;
    visit_window(window, [&out](const Point& p) { out.push_back(p.id); });
    return out;
  }

  /// Id of a point closest to q; ties go to the smallest id. Best-first
  /// branch and bound: a queue ordered by (distance, nodes before points,
  /// id) pops the answer as its first point.
  PointId nearest_neighbor(Vec2 q) const {
    if (levels_.empty()) throw query_error("rtree: nearest_neighbor on an empty tree");
    struct Item {
      double dist2;
      bool is_point;
      std::uint32_t level;
      std::uint32_t index;  // node index, or point id for points
    };
    auto after = [](const Item& a, const Item& b) {
      if (a.dist2 != b.dist2) return a.dist2 > b.dist2;
      if (a.is_point != b.is_point) return a.is_point;
      return a.index > b.index;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(after)> heap(after);
    const auto top = static_cast<std::uint32_t>(levels_.size() - 1);
    heap.push({bounds().min_squared_distance(q), false, top, 0});
    while (!heap.empty()) {
      const Item it = heap.top();
      heap.pop();
      if (it.is_point) return it.index;
      const Node& node = levels_[it.level][it.index];
      if (it.level == 0) {
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
          heap.push({squared_distance(q, entries_[i].pos()), true, 0, entries_[i].id});
        }
      } else {
        const auto& children = levels_[it.level - 1];
        for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
          heap.push({children[i].box.min_squared_distance(q), false, it.level - 1, i});
        }
      }
    }
    throw query_error("rtree: nearest_neighbor found no point");
  }

  /// Structural invariants: child boxes inside parent boxes, leaf points
  /// inside leaf boxes, fill between ceil(0.4 * fanout) and fanout (the root
  /// is exempt from the lower bound). Returns the violations found.
  std::vector<std::string> check_structure() const {
    std::vector<std::string> issues;
    const auto min_fill = static_cast<std::uint32_t>(std::ceil(0.4 * static_cast<double>(fanout_)));
    std::size_t leaf_entries = 0;
    for (std::size_t lv = 0; lv < levels_.size(); ++lv) {
      const bool root_level = lv + 1 == levels_.size();
      if (root_level && levels_[lv].size() != 1) issues.push_back("top level has more than one node");
      for (std::size_t i = 0; i < levels_[lv].size(); ++i) {
        const Node& node = levels_[lv][i];
        const std::string where = "level " + std::to_string(lv) + " node " + std::to_string(i);
        if (node.count > fanout_) issues.push_back(where + " exceeds fanout");
        if (!root_level && node.count < min_fill) issues.push_back(where + " is underfull");
        for (std::uint32_t c = node.first; c < node.first + node.count; ++c) {
          const bool inside = lv == 0 ? node.box.contains(entries_[c].pos())
                                      : node.box.contains(levels_[lv - 1][c].box);
          if (!inside) issues.push_back(where + " does not contain child " + std::to_string(c));
        }
        if (lv == 0) leaf_entries += node.count;
      }
      if (lv > 0) {
        std::size_t covered = 0;
        for (const Node& node : levels_[lv]) covered += node.count;
        if (covered != levels_[lv - 1].size()) issues.push_back("level " + std::to_string(lv) + " does not cover the level below");
      }
    }
    if (leaf_entries != entries_.size()) issues.push_back("leaves do not cover every entry");
    return issues;
  }

private:
  struct Item {
    double x, y;
    std::uint32_t ref;
  };
  using Range = std::pair<std::size_t, std::size_t>;

  // Splits `total` into `parts` near-equal sizes (larger ones first).
  static std::size_t share(std::size_t total, std::size_t parts, std::size_t k) {
    return total / parts + (k < total % parts ? 1 : 0);
  }

  // STR tiling: sorts `items` in place and returns the consecutive groups.
  // Groups hold floor(c/L) or ceil(c/L) items for L = ceil(c/fanout) groups,
  // which keeps every group at least 40% full.
  static std::vector<Range> tile(std::vector<Item>& items, std::size_t fanout) {
    const std::size_t count = items.size();
    const std::size_t groups = (count + fanout - 1) / fanout;
    auto by_x = [](const Item& a, const Item& b) {
      return std::tie(a.x, a.y, a.ref) < std::tie(b.x, b.y, b.ref);
    };
    auto by_y = [](const Item& a, const Item& b) {
      return std::tie(a.y, a.x, a.ref) < std::tie(b.y, b.x, b.ref);
    };
    std::vector<Range> out;
    out.reserve(groups);
    if (groups <= 1) {
      out.emplace_back(0, count);
      return out;
    }
    const auto slices = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(groups))));
    std::sort(items.begin(), items.end(), by_x);
    std::size_t group = 0;
    std::size_t pos = 0;
    for (std::size_t s = 0; s < slices; ++s) {
      const std::size_t in_slice = share(groups, slices, s);
      std::size_t slice_items = 0;
      for (std::size_t g = group; g < group + in_slice; ++g) slice_items += share(count, groups, g);
      std::sort(items.begin() + static_cast<std::ptrdiff_t>(pos),
                items.begin() + static_cast<std::ptrdiff_t>(pos + slice_items), by_y);
      for (std::size_t g = group; g < group + in_slice; ++g) {
        const std::size_t size = share(count, groups, g);
        out.emplace_back(pos, pos + size);
        pos += size;
      }
      group += in_slice;
    }
    return out;
  }

  std::size_t fanout_ = kDefaultFanout;
  std::vector<Point> entries_;
  std::vector<std::vector<Node>> levels_;
};

}  // namespace vaq
