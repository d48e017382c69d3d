#pragma once

#include <vector>

namespace patchtrack {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

/// Patch positions indexed by patch id (ids are dense from 0).
using PositionMap = std::vector<Point>;

struct SpatialEdge {
  int i = 0;
  int j = 0;
  double xi = 0.0;  // reference distance between patches i and j
  friend bool operator==(const SpatialEdge&, const SpatialEdge&) = default;
};

/// Complete graph over the patches with per-pair reference distances.
struct SpatialGraph {
  PositionMap node_positions;
  std::vector<SpatialEdge> edges;
  double stiffness = 0.01;

  std::size_t node_count() const { return node_positions.size(); }
  friend bool operator==(const SpatialGraph&, const SpatialGraph&) = default;
};

/// Complete graph whose reference distances are the pairwise distances of
/// `positions`.
SpatialGraph build_graph(const PositionMap& positions, double stiffness);

/// exp(-k (d - xi)^2)
double spatial_likelihood(double d, double xi, double k);

double edge_likelihood(const SpatialGraph& g, const SpatialEdge& e, const PositionMap& positions);

/// Geometric mean of the edge likelihoods; 1 for a single-node graph.
/// Throws Error(MissingPosition) if `positions` does not cover every node.
double graph_score(const SpatialGraph& g, const PositionMap& positions);

/// Exponential moving average of every reference distance toward the
/// observed distances; node positions are replaced by the observation.
SpatialGraph update_references(const SpatialGraph& g, const PositionMap& observed, double rate);

/// As above, restricted to `active` nodes: only edges with both endpoints
/// active move, and only active node positions are replaced.
SpatialGraph update_references(const SpatialGraph& g, const PositionMap& observed, double rate,
                               const std::vector<bool>& active);

}  // namespace patchtrack
