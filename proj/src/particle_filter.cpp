#include "patchtrack/particle_filter.hpp"

#include <cmath>
#include <numbers>

#include "patchtrack/error.hpp"
#include "patchtrack/kernels.hpp"

namespace patchtrack {

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the logarithm finite.
  const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

ParticleSet spawn_particles(std::size_t n, double x, double y, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "particle count must be >= 1");
  ParticleSet ps;
  ps.x.assign(n, x);
  ps.y.assign(n, y);
  ps.weight.assign(n, 1.0 / static_cast<double>(n));
  ps.rng_seed = seed;
  ps.rng = Rng(seed);
  return ps;
}

ParticleSet predict(ParticleSet ps, const MotionModel& motion) {
  if (motion.std_x < 0.0 || motion.std_y < 0.0) throw Error(ErrorCode::InvalidArgument, "motion std must be >= 0");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    // Draw both components unconditionally so the stream does not depend on
    // which deviations are zero.
    const double nx = ps.rng.normal();
    const double ny = ps.rng.normal();
    ps.x[i] += motion.std_x * nx;
    ps.y[i] += motion.std_y * ny;
  }
  return ps;
}

ParticleSet reweight(ParticleSet ps, std::span<const double> likelihoods) {
  if (likelihoods.size() != ps.size()) throw Error(ErrorCode::LengthMismatch, "likelihood count != particle count");
  double total = 0.0;
  bool finite = true;
  for (double l : likelihoods) {
    if (!std::isfinite(l) || l < 0.0) finite = false;
    total += l;
  }
  ps.degenerate = !(finite && total > 0.0 && std::isfinite(total));
  const double n = static_cast<double>(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    ps.weight[i] = ps.degenerate ? 1.0 / n : likelihoods[i] / total;
  }
  return ps;
}

double effective_sample_size(const ParticleSet& ps) {
  return 1.0 / kernels::dot(ps.weight, ps.weight);
}

std::vector<std::size_t> systematic_indices(std::span<const double> weights, double u) {
  const std::size_t n = weights.size();
  std::vector<std::size_t> out(n);
  if (n == 0) return out;
  double total = 0.0;
  for (double w : weights) total += w;
  // Strata boundaries on the [0, n) axis; the slack keeps exact boundaries
  // such as k/n from being lost to rounding of the running sum.
  constexpr double kSlack = 1e-9;
  const double scale = static_cast<double>(n) / total;
  double boundary = weights[0] * scale;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double pointer = u + static_cast<double>(i);
    while (pointer >= boundary - kSlack && j + 1 < n) {
      ++j;
      boundary += weights[j] * scale;
    }
    std::size_t pick = j;
    while (weights[pick] <= 0.0 && pick > 0) --pick;
    out[i] = pick;
  }
  return out;
}

ParticleSet systematic_resample(ParticleSet ps) {
  const double u = ps.rng.uniform();
  const auto idx = systematic_indices(ps.weight, u);
  ParticleSet out = ps;
  const double w = 1.0 / static_cast<double>(ps.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.x[i] = ps.x[idx[i]];
    out.y[i] = ps.y[idx[i]];
    out.weight[i] = w;
  }
  return out;
}

Point estimate(const ParticleSet& ps) {
  return {kernels::dot(ps.weight, ps.x), kernels::dot(ps.weight, ps.y)};
}

}  // namespace patchtrack
