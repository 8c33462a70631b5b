#include "loopgamma/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "loopgamma/errors.hpp"

namespace loopgamma {

void Welford::add(std::complex<double> v) noexcept {
  ++n_;
  const auto delta = v - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += std::norm(delta) * static_cast<double>(n_ - 1) / static_cast<double>(n_);
}

void Welford::merge(const Welford& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double n = na + nb;
  const auto delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  m2_ += other.m2_ + std::norm(delta) * (na * nb / n);
  n_ += other.n_;
}

double Welford::variance() const noexcept {
  if (n_ < 2) return 0.0;
  return m2_ / static_cast<double>(n_ - 1);
}

MCEstimate Welford::estimate(std::uint64_t seed) const {
  MCEstimate e;
  e.mean = mean_;
  e.n = n_;
  e.seed = seed;
  e.std_error = n_ >= 2 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  return e;
}

unsigned default_workers() {
  if (const char* env = std::getenv("LOOPGAMMA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<MCEstimate> expect_many(const Grid& grid, const MeasureConfig& cfg,
                                    const Sampler& sampler, std::uint64_t n,
                                    std::uint64_t seed, std::size_t outputs,
                                    const SampleKernel& kernel, const EngineOptions& options) {
  if (n < 2) throw UsageError("Monte Carlo needs at least 2 samples");
  if (outputs == 0) throw UsageError("Monte Carlo kernel must produce at least one output");
  const std::uint64_t chunk = std::max<std::uint64_t>(1, options.chunk_size);
  const std::uint64_t chunks = (n + chunk - 1) / chunk;
  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(
      options.workers ? options.workers : default_workers(), chunks));

  std::vector<std::vector<Welford>> partial(chunks, std::vector<Welford>(outputs));
  std::atomic<std::uint64_t> next{0};
  std::mutex failure_mutex;
  std::uint64_t failed_chunk = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t failed_sample = 0;
  std::string failure_message;

  auto work = [&] {
    Path path(grid);
    std::vector<std::complex<double>> out(outputs);
    for (;;) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      const std::uint64_t lo = c * chunk;
      const std::uint64_t hi = std::min(n, lo + chunk);
      std::uint64_t i = lo;
      try {
        for (; i < hi; ++i) {
          fill_wiener(path, cfg, seed, i);
          if (sampler.kind == PathKind::bridge) pin_to_endpoint(path, sampler.endpoint);
          std::fill(out.begin(), out.end(), std::complex<double>{});
          kernel(path, out);
          for (std::size_t j = 0; j < outputs; ++j) {
            if (!std::isfinite(out[j].real()) || !std::isfinite(out[j].imag())) {
              throw EvaluationError("non-finite functional value", i);
            }
            partial[c][j].add(out[j]);
          }
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (c < failed_chunk) {
          failed_chunk = c;
          failed_sample = i;
          failure_message = dynamic_cast<const EvaluationError*>(&e)
                                ? std::string("non-finite functional value")
                                : std::string("functional evaluation failed: ") + e.what();
        }
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  if (failed_chunk != std::numeric_limits<std::uint64_t>::max()) {
    throw EvaluationError(failure_message, failed_sample);
  }

  std::vector<Welford> total(outputs);
  for (const auto& part : partial) {
    for (std::size_t j = 0; j < outputs; ++j) total[j].merge(part[j]);
  }
  std::vector<MCEstimate> result;
  result.reserve(outputs);
  for (const auto& w : total) result.push_back(w.estimate(seed));
  return result;
}

MCEstimate expect(const Functional& f, const Grid& grid, const MeasureConfig& cfg,
                  const Sampler& sampler, std::uint64_t n, std::uint64_t seed,
                  const std::optional<SmoothLoop>& tilt, const EngineOptions& options) {
  if (tilt) {
    if (!(tilt->grid() == grid)) throw UsageError("expect: tilt grid mismatch");
    if (sampler.kind == PathKind::bridge && std::abs(tilt->values().back()) > 1e-12) {
      throw UsageError("expect: bridge tilt must vanish at 2π");
    }
  }
  const SampleKernel kernel = [&](const Path& path, std::span<std::complex<double>> out) {
    if (tilt) {
      const double w = std::exp(log_cm_weight(*tilt, path.values, cfg));
      out[0] = f(PathArg(path).shifted(*tilt)) * w;
    } else {
      out[0] = f(PathArg(path));
    }
  };
  return expect_many(grid, cfg, sampler, n, seed, 1, kernel, options).front();
}

}  // namespace loopgamma
