#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "loopgamma/functional.hpp"
#include "loopgamma/paths.hpp"

namespace loopgamma {

/// Which path law to draw from.
struct Sampler {
  PathKind kind = PathKind::free;
  double endpoint = 0.0;

  static Sampler free() { return {PathKind::free, 0.0}; }
  static Sampler bridge(double X) { return {PathKind::bridge, X}; }
};

/// The universal Monte Carlo result.
struct MCEstimate {
  std::complex<double> mean;
  double std_error = 0.0;  ///< sample standard deviation / √n
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

struct EngineOptions {
  unsigned workers = 0;           ///< 0: LOOPGAMMA_THREADS or hardware concurrency
  std::uint64_t chunk_size = 2048;  ///< reduction granularity; fixed so results do not
                                    ///< depend on the worker count
};

/// Worker count from LOOPGAMMA_THREADS, falling back to the hardware.
unsigned default_workers();

/// Fills one complex value per output for a sampled path.
using SampleKernel = std::function<void(const Path& path, std::span<std::complex<double>> out)>;

/// Runs `kernel` on n paths drawn from `sampler`; path i uses counter index i.
/// Chunks are reduced in fixed order, so the result is bit-identical for any
/// worker count.
std::vector<MCEstimate> expect_many(const Grid& grid, const MeasureConfig& cfg,
                                    const Sampler& sampler, std::uint64_t n,
                                    std::uint64_t seed, std::size_t outputs,
                                    const SampleKernel& kernel,
                                    const EngineOptions& options = {});

/// E[f] under the sampler. With a tilt h (Cameron–Martin, h(2π) = 0 for
/// bridges) the estimator is f(x+h)·W(h,x), which has the same mean.
MCEstimate expect(const Functional& f, const Grid& grid, const MeasureConfig& cfg,
                  const Sampler& sampler, std::uint64_t n, std::uint64_t seed,
                  const std::optional<SmoothLoop>& tilt = std::nullopt,
                  const EngineOptions& options = {});

/// Accumulates (mean, M2) of a complex stream; merge() is Chan's update.
class Welford {
 public:
  void add(std::complex<double> v) noexcept;
  void merge(const Welford& other) noexcept;
  std::uint64_t count() const noexcept { return n_; }
  std::complex<double> mean() const noexcept { return mean_; }
  double variance() const noexcept;
  MCEstimate estimate(std::uint64_t seed) const;

 private:
  std::uint64_t n_ = 0;
  std::complex<double> mean_{};
  double m2_ = 0.0;
};

}  // namespace loopgamma
