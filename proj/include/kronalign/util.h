#ifndef KRONALIGN_UTIL_H_
#define KRONALIGN_UTIL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Core>

namespace kronalign {

// SplitMix64 finalizer; derives independent stream seeds from one seed.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform point on the unit sphere (normalized standard Gaussian).
inline Eigen::VectorXd RandomUnitVector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd x(dim);
  do {
    for (int i = 0; i < dim; ++i) x[i] = normal(rng);
  } while (x.norm() == 0.0);
  return x / x.norm();
}

// Worker count from KRONALIGN_THREADS (default 1).
int WorkerCount();

// Runs body(i) for i in [0, count), split over WorkerCount() threads in
// contiguous blocks. Callers write results to slot i so output order does
// not depend on scheduling.
void ParallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

// Non-fatal diagnostics. The default sink prints "warning: <msg>" to stderr.
using WarningSink = std::function<void(const std::string&)>;
// Installs `sink` and returns the previous one. An empty sink restores the
// default.
WarningSink SetWarningSink(WarningSink sink);
void Warn(const std::string& message);

}  // namespace kronalign

#endif  // KRONALIGN_UTIL_H_
