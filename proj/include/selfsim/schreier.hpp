#pragma once

// Schreier graphs on tree levels, balls in orbital graphs of boundary points,
// and rooted comparison of generator-labeled graphs.

#include <algorithm>
#include <array>
#include <cstddef>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "selfsim/error.hpp"
#include "selfsim/group.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

/// Rooted directed graph whose edges carry generator labels. Every vertex has
/// at most one outgoing and at most one incoming edge per label; in a graph
/// built from a full action (a level graph) it has exactly one of each.
class MarkedGraph {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  struct Edge {
    std::size_t source;
    std::size_t target;
    std::size_t label;
  };

  MarkedGraph() = default;
  explicit MarkedGraph(std::vector<std::string> labels) : labels_(std::move(labels)) {}

  std::size_t add_vertex(std::string id) {
    const std::size_t v = ids_.size();
    ids_.push_back(std::move(id));
    out_.emplace_back(labels_.size(), npos);
    in_.emplace_back(labels_.size(), npos);
    return v;
  }

  void add_edge(std::size_t source, std::size_t target, std::size_t label) {
    if (out_.at(source).at(label) != npos || in_.at(target).at(label) != npos)
      throw Error(ErrorKind::InvalidArgument, "duplicate '" + labels_[label] + "' edge at " + ids_[source]);
    out_[source][label] = target;
    in_[target][label] = source;
  }

  void set_root(std::size_t v) { root_ = v; }
  std::size_t root() const noexcept { return root_; }
  std::size_t vertex_count() const noexcept { return ids_.size(); }
  const std::string& id(std::size_t v) const { return ids_.at(v); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> label_index(std::string_view name) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == name) return i;
    return std::nullopt;
  }

  std::size_t target(std::size_t v, std::size_t label) const { return out_.at(v).at(label); }
  std::size_t source(std::size_t v, std::size_t label) const { return in_.at(v).at(label); }

  std::size_t edge_count() const {
    std::size_t count = 0;
    for (const auto& row : out_)
      for (auto t : row) count += t != npos ? 1 : 0;
    return count;
  }

  std::size_t edge_count(std::size_t label) const {
    std::size_t count = 0;
    for (const auto& row : out_) count += row.at(label) != npos ? 1 : 0;
    return count;
  }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t v = 0; v < out_.size(); ++v)
      for (std::size_t l = 0; l < labels_.size(); ++l)
        if (out_[v][l] != npos) out.push_back({v, out_[v][l], l});
    return out;
  }

  std::optional<std::size_t> find(std::string_view id) const {
    for (std::size_t v = 0; v < ids_.size(); ++v)
      if (ids_[v] == id) return v;
    return std::nullopt;
  }

  /// Edge list CSV preceded by a `# root=<id>` comment line.
  std::string to_csv() const {
    std::ostringstream os;
    os << "# root=" << (ids_.empty() ? std::string() : ids_[root_]) << "\n";
    os << "source,target,label\n";
    for (const auto& e : edges()) os << ids_[e.source] << ',' << ids_[e.target] << ',' << labels_[e.label] << "\n";
    return os.str();
  }

  /// Inverse of to_csv. The label set is the set of labels seen on edges.
  static MarkedGraph from_csv(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    std::string root_id;
    std::vector<std::array<std::string, 3>> rows;
    while (std::getline(is, line)) {
      if (line.rfind("# root=", 0) == 0) {
        root_id = line.substr(7);
        continue;
      }
      if (line.empty() || line[0] == '#' || line == "source,target,label") continue;
      std::array<std::string, 3> fields;
      std::size_t start = 0;
      for (int f = 0; f < 3; ++f) {
        auto comma = f < 2 ? line.find(',', start) : std::string::npos;
        if (f < 2 && comma == std::string::npos) throw Error(ErrorKind::Parse, "bad edge line: " + line);
        fields[static_cast<std::size_t>(f)] = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        start = comma + 1;
      }
      rows.push_back(std::move(fields));
    }
    std::vector<std::string> labels;
    for (const auto& r : rows)
      if (std::find(labels.begin(), labels.end(), r[2]) == labels.end()) labels.push_back(r[2]);
    MarkedGraph g(labels);
    std::map<std::string, std::size_t> index;
    auto vertex = [&](const std::string& id) {
      auto [it, fresh] = index.emplace(id, 0);
      if (fresh) it->second = g.add_vertex(id);
      return it->second;
    };
    g.set_root(vertex(root_id));
    for (const auto& r : rows) g.add_edge(vertex(r[0]), vertex(r[1]), *g.label_index(r[2]));
    return g;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> ids_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::size_t root_ = 0;
};

inline std::vector<std::string> label_names(const std::vector<GroupWord>& gens) {
  std::vector<std::string> labels;
  labels.reserve(gens.size());
  for (const auto& g : gens) labels.push_back(g.display());
  return labels;
}

inline std::vector<GroupWord> standard_generators() {
  return {GroupWord::single(Gen::a), GroupWord::single(Gen::b), GroupWord::single(Gen::c), GroupWord::single(Gen::d)};
}

/// Schreier graph of the action on V_n. Vertex i is Vertex::from_index(n, i);
/// the root is 0ⁿ.
inline MarkedGraph level_graph(int n, const std::vector<GroupWord>& gens) {
  if (n < 0 || n > 24) throw Error(ErrorKind::InvalidArgument, "level out of range");
  if (gens.empty()) throw Error(ErrorKind::InvalidArgument, "empty generating set");
  MarkedGraph g(label_names(gens));
  const std::uint64_t size = std::uint64_t{1} << static_cast<unsigned>(n);
  for (std::uint64_t i = 0; i < size; ++i) g.add_vertex(Vertex::from_index(n, i).str());
  g.set_root(0);
  for (std::uint64_t i = 0; i < size; ++i) {
    const Vertex v = Vertex::from_index(n, i);
    for (std::size_t l = 0; l < gens.size(); ++l) g.add_edge(i, act_vertex(gens[l], v).index(), l);
  }
  return g;
}

/// A point of the orbit of a base point, as the finite list of coordinates
/// where it differs from the base.
struct OrbitPointKey {
  std::vector<std::pair<std::size_t, std::uint8_t>> diffs;  // (position, bit of the orbit point)

  std::string str() const {
    std::string out = "{";
    for (std::size_t i = 0; i < diffs.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(diffs[i].first) + ":" + std::to_string(diffs[i].second);
    }
    return out + "}";
  }

  friend bool operator==(const OrbitPointKey&, const OrbitPointKey&) = default;
  friend auto operator<=>(const OrbitPointKey&, const OrbitPointKey&) = default;
};

/// Difference set of y against base. Throws if they are not cofinal, i.e. if
/// they lie in different orbits.
inline OrbitPointKey orbit_key(const BoundaryPoint& base, const BoundaryPoint& y) {
  const std::size_t head = std::max(base.preperiod().size(), y.preperiod().size());
  const std::size_t cycle = std::lcm(base.period().size(), y.period().size());
  OrbitPointKey key;
  for (std::size_t i = 0; i < head; ++i)
    if (base.bit(i) != y.bit(i)) key.diffs.emplace_back(i, y.bit(i));
  for (std::size_t i = head; i < head + cycle; ++i)
    if (base.bit(i) != y.bit(i))
      throw Error(ErrorKind::InvalidArgument, y.str() + " is not in the orbit of " + base.str());
  return key;
}

struct OrbitalBall {
  MarkedGraph graph;
  BoundaryPoint base;
  std::vector<BoundaryPoint> points;  // payload per vertex, vertex ids are points[v].str()
  std::vector<OrbitPointKey> keys;    // relative to base
  std::vector<int> distance;          // word distance from the root; vertices are in BFS order
};

/// Breadth-first ball of radius r around x in the orbital graph of the given
/// generating set (word metric over gens and their inverses). Distinct
/// visited points must already differ among their first `depth` coordinates.
inline OrbitalBall orbital_ball(const BoundaryPoint& x, const std::vector<GroupWord>& gens, int radius, int depth) {
  if (radius < 0) throw Error(ErrorKind::InvalidArgument, "radius must be nonnegative");
  if (depth < 0) throw Error(ErrorKind::InvalidArgument, "depth must be nonnegative");
  if (gens.empty()) throw Error(ErrorKind::InvalidArgument, "empty generating set");

  OrbitalBall ball{MarkedGraph(label_names(gens)), x, {}, {}, {}};
  std::map<BoundaryPoint, std::size_t> index;
  std::map<Vertex, std::size_t> by_prefix;
  const auto udepth = static_cast<std::size_t>(depth);

  auto visit = [&](const BoundaryPoint& p, int dist) -> std::size_t {
    if (auto it = index.find(p); it != index.end()) return it->second;
    const Vertex pre = p.prefix(udepth);
    if (auto clash = by_prefix.find(pre); clash != by_prefix.end())
      throw Error(ErrorKind::DepthTooSmall, ball.points[clash->second].str() + " and " + p.str() + " agree on the first " +
                                                std::to_string(depth) + " coordinates");
    const std::size_t v = ball.graph.add_vertex(p.str());
    index.emplace(p, v);
    by_prefix.emplace(pre, v);
    ball.points.push_back(p);
    ball.keys.push_back(orbit_key(x, p));
    ball.distance.push_back(dist);
    return v;
  };

  std::vector<GroupWord> inverses;
  for (const auto& g : gens) inverses.push_back(g.inverse());

  ball.graph.set_root(visit(x, 0));
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    const int dist = ball.distance[v];
    if (dist == radius) continue;
    for (std::size_t l = 0; l < gens.size(); ++l) {
      for (const GroupWord* word : std::array<const GroupWord*, 2>{&gens[l], &inverses[l]}) {
        const BoundaryPoint next = act_boundary(*word, ball.points[v]);
        if (index.contains(next)) continue;
        queue.push_back(visit(next, dist + 1));
      }
    }
  }

  for (std::size_t v = 0; v < ball.points.size(); ++v) {
    for (std::size_t l = 0; l < gens.size(); ++l) {
      if (auto it = index.find(act_boundary(gens[l], ball.points[v])); it != index.end())
        ball.graph.add_edge(v, it->second, l);
    }
  }
  return ball;
}

/// Undirected graph distance from `from` (over out- and in-edges), capped at
/// `limit`; unreachable or farther vertices get -1.
inline std::vector<int> graph_distances(const MarkedGraph& g, std::size_t from, int limit) {
  std::vector<int> dist(g.vertex_count(), -1);
  dist.at(from) = 0;
  std::deque<std::size_t> queue{from};
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (dist[v] == limit) continue;
    for (std::size_t l = 0; l < g.labels().size(); ++l) {
      for (std::size_t u : {g.target(v, l), g.source(v, l)}) {
        if (u == MarkedGraph::npos || dist[u] != -1) continue;
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

/// Induced rooted subgraph on the vertices within distance k of `center`.
inline MarkedGraph induced_ball(const MarkedGraph& g, std::size_t center, int k) {
  const auto dist = graph_distances(g, center, k);
  MarkedGraph out(g.labels());
  std::vector<std::size_t> remap(g.vertex_count(), MarkedGraph::npos);
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (dist[v] >= 0) remap[v] = out.add_vertex(g.id(v));
  out.set_root(remap[center]);
  for (const auto& e : g.edges())
    if (remap[e.source] != MarkedGraph::npos && remap[e.target] != MarkedGraph::npos)
      out.add_edge(remap[e.source], remap[e.target], e.label);
  return out;
}

/// Root- and label-preserving isomorphism test. Labeled edges are unique per
/// vertex, so the candidate map is forced by a joint traversal from the roots.
inline bool balls_isomorphic(const MarkedGraph& g1, const MarkedGraph& g2) {
  if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()) return false;
  if (g1.labels().size() != g2.labels().size()) return false;
  std::vector<std::size_t> label_map;
  for (const auto& name : g1.labels()) {
    auto l = g2.label_index(name);
    if (!l) return false;
    label_map.push_back(*l);
  }
  if (g1.vertex_count() == 0) return true;

  std::vector<std::size_t> fwd(g1.vertex_count(), MarkedGraph::npos);
  std::vector<std::size_t> bwd(g2.vertex_count(), MarkedGraph::npos);
  auto bind = [&](std::size_t u, std::size_t v) {
    if (fwd[u] == MarkedGraph::npos && bwd[v] == MarkedGraph::npos) {
      fwd[u] = v;
      bwd[v] = u;
      return 1;
    }
    return fwd[u] == v && bwd[v] == u ? 0 : -1;
  };
  bind(g1.root(), g2.root());
  std::deque<std::size_t> queue{g1.root()};
  std::size_t mapped = 1;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    const std::size_t v = fwd[u];
    for (std::size_t l = 0; l < g1.labels().size(); ++l) {
      const std::size_t l2 = label_map[l];
      const std::pair<std::size_t, std::size_t> steps[] = {{g1.target(u, l), g2.target(v, l2)},
                                                            {g1.source(u, l), g2.source(v, l2)}};
      for (auto [a, b] : steps) {
        if ((a == MarkedGraph::npos) != (b == MarkedGraph::npos)) return false;
        if (a == MarkedGraph::npos) continue;
        const int r = bind(a, b);
        if (r < 0) return false;
        if (r > 0) {
          ++mapped;
          queue.push_back(a);
        }
      }
    }
  }
  // Vertices unreachable from the root must be absent on both sides.
  return mapped == g1.vertex_count();
}

struct LocalIsoResult {
  bool found = false;
  OrbitPointKey key;  // relative to y
  BoundaryPoint point;
  int distance = -1;
  int search_radius = 0;
};

/// Searches the vertices within search_radius of y, in breadth-first order,
/// for one whose radius-k ball is isomorphic to the radius-k ball at x.
/// A negative outcome is inconclusive: it only covers the searched region.
inline LocalIsoResult local_iso_probe(const BoundaryPoint& x, const BoundaryPoint& y, int k, int search_radius, int depth,
                                      const std::vector<GroupWord>& gens = standard_generators()) {
  if (k < 0 || k > search_radius) throw Error(ErrorKind::InvalidArgument, "need 0 <= k <= search_radius");
  const MarkedGraph target = orbital_ball(x, gens, k, depth).graph;
  const OrbitalBall big = orbital_ball(y, gens, search_radius + k, depth);
  LocalIsoResult out;
  out.search_radius = search_radius;
  for (std::size_t v = 0; v < big.points.size(); ++v) {
    if (big.distance[v] > search_radius) break;
    if (balls_isomorphic(target, induced_ball(big.graph, v, k))) {
      out.found = true;
      out.key = big.keys[v];
      out.point = big.points[v];
      out.distance = big.distance[v];
      return out;
    }
  }
  return out;
}

}  // namespace selfsim
