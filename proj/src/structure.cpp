#include "patchtrack/structure.hpp"

#include <cmath>

#include "patchtrack/error.hpp"

namespace patchtrack {

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

SpatialGraph build_graph(const PositionMap& positions, double stiffness) {
  if (stiffness < 0.0) throw Error(ErrorCode::InvalidArgument, "stiffness must be >= 0");
  SpatialGraph g;
  g.node_positions = positions;
  g.stiffness = stiffness;
  const int n = static_cast<int>(positions.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j, distance(positions[i], positions[j])});
  }
  return g;
}

double spatial_likelihood(double d, double xi, double k) {
  const double dev = d - xi;
  return std::exp(-k * dev * dev);
}

namespace {

void require_cover(const SpatialGraph& g, const PositionMap& positions) {
  if (positions.size() < g.node_count()) {
    throw Error(ErrorCode::MissingPosition, "positions do not cover every graph node");
  }
}

bool is_active(const std::vector<bool>& active, int id) {
  return static_cast<std::size_t>(id) < active.size() && active[id];
}

}  // namespace

double edge_likelihood(const SpatialGraph& g, const SpatialEdge& e, const PositionMap& positions) {
  return spatial_likelihood(distance(positions[e.i], positions[e.j]), e.xi, g.stiffness);
}

double graph_score(const SpatialGraph& g, const PositionMap& positions) {
  require_cover(g, positions);
  if (g.edges.empty()) return 1.0;
  // mean of log-likelihoods, exponentiated once
  double exponent = 0.0;
  for (const SpatialEdge& e : g.edges) {
    const double dev = distance(positions[e.i], positions[e.j]) - e.xi;
    exponent += dev * dev;
  }
  return std::exp(-g.stiffness * exponent / static_cast<double>(g.edges.size()));
}

SpatialGraph update_references(const SpatialGraph& g, const PositionMap& observed, double rate) {
  return update_references(g, observed, rate, std::vector<bool>(g.node_count(), true));
}

SpatialGraph update_references(const SpatialGraph& g, const PositionMap& observed, double rate,
                               const std::vector<bool>& active) {
  require_cover(g, observed);
  if (rate < 0.0 || rate > 1.0) throw Error(ErrorCode::InvalidArgument, "rate must lie in [0, 1]");
  SpatialGraph out = g;
  for (SpatialEdge& e : out.edges) {
    if (!is_active(active, e.i) || !is_active(active, e.j)) continue;
    e.xi = (1.0 - rate) * e.xi + rate * distance(observed[e.i], observed[e.j]);
  }
  for (std::size_t i = 0; i < out.node_count(); ++i) {
    if (i < active.size() && active[i]) out.node_positions[i] = observed[i];
  }
  return out;
}

}  // namespace patchtrack
