#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "patchtrack/structure.hpp"

namespace patchtrack {

/// Portable seeded generator: std::mt19937_64 (output fully specified by the
/// standard), 53-bit uniforms, Box-Muller normals. Identifier below is what
/// run configs and reports record.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64+box-muller";

  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform();
  double normal();

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct Particle {
  double x = 0.0;
  double y = 0.0;
  double weight = 0.0;
};

/// Candidate object centres, stored structure-of-arrays.
struct ParticleSet {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> weight;
  std::uint64_t rng_seed = 0;
  Rng rng;
  /// Set by reweight when every likelihood was zero.
  bool degenerate = false;

  std::size_t size() const { return x.size(); }
  Particle at(std::size_t i) const { return {x[i], y[i], weight[i]}; }
  friend bool operator==(const ParticleSet&, const ParticleSet&) = default;
};

struct MotionModel {
  double std_x = 8.0;
  double std_y = 8.0;
};

/// n particles at (x, y) with uniform weights.
ParticleSet spawn_particles(std::size_t n, double x, double y, std::uint64_t seed);

/// Gaussian random walk; weights unchanged.
ParticleSet predict(ParticleSet ps, const MotionModel& motion);

/// weight_i proportional to likelihood_i. All-zero (or non-finite) input
/// falls back to uniform weights and sets `degenerate`.
ParticleSet reweight(ParticleSet ps, std::span<const double> likelihoods);

/// 1 / sum w_i^2
double effective_sample_size(const ParticleSet& ps);

/// Indices selected by systematic resampling with offset u in [0, 1): the
/// i-th pointer sits at (u + i) / n on the cumulative weight axis.
std::vector<std::size_t> systematic_indices(std::span<const double> weights, double u);

/// Systematic resampling with an offset drawn from the set's generator;
/// output weights are uniform.
ParticleSet systematic_resample(ParticleSet ps);

/// Weighted mean position.
Point estimate(const ParticleSet& ps);

}  // namespace patchtrack
