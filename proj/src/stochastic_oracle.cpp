#include "combtangle/stochastic_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <fmt/format.h>

#include "combtangle/errors.hpp"

namespace combtangle {
namespace {

constexpr std::size_t block_size = 256;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

boost::random::mt19937_64 trajectory_engine(std::uint64_t seed, std::size_t index) {
  const std::uint64_t a = splitmix64(seed);
  const std::uint64_t b = splitmix64(a ^ splitmix64(static_cast<std::uint64_t>(index) + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32)};
  return boost::random::mt19937_64(seq);
}

double spectral_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

struct Kernel {
  int dim = 0;
  std::size_t steps = 0;
  std::size_t burn_steps = 0;
  double dt = 0.0;
  Matrix step;                      // I + C dt
  std::vector<double> noise_scale;  // sqrt(D_ii dt)
  std::vector<double> cos_rot, sin_rot;
  std::uint64_t seed = 0;
};

// Per-trajectory time average of u u^T over the post-burn-in window, upper
// triangle packed row by row. N > 0 fixes the dimension at compile time.
template <int N>
void run_trajectory(const Kernel& k, std::size_t index, double* out) {
  const int n = N > 0 ? N : k.dim;
  constexpr int cap = N > 0 ? N : 16;
  if (n > cap) throw DomainError("simulate_ensemble: at most 8 modes are supported");
  auto engine = trajectory_engine(k.seed, index);
  boost::random::normal_distribution<double> normal;
  double u[cap] = {}, v[cap], acc[cap * (cap + 1) / 2] = {};
  double step[cap * cap];
  for (int i = 0; i < n * n; ++i) step[i] = k.step.data()[i];  // column-major
  double scale[cap];
  for (int i = 0; i < n; ++i) scale[i] = k.noise_scale[i];
  const bool rotate = !k.cos_rot.empty();

  for (std::size_t s = 1; s <= k.steps; ++s) {
    for (int i = 0; i < n; ++i) v[i] = scale[i] * normal(engine);
    for (int c = 0; c < n; ++c) {
      const double uc = u[c];
      for (int r = 0; r < n; ++r) v[r] += step[c * n + r] * uc;
    }
    if (rotate) {
      for (int j = 0; j < n / 2; ++j) {
        const double x = v[2 * j], y = v[2 * j + 1];
        const double c = k.cos_rot[j], sn = k.sin_rot[j];
        v[2 * j] = c * x + sn * y;
        v[2 * j + 1] = -sn * x + c * y;
      }
    }
    for (int i = 0; i < n; ++i) u[i] = v[i];
    if (s > k.burn_steps) {
      int idx = 0;
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) acc[idx++] += u[a] * u[b];
    }
    if ((s & 1023U) == 0 || s == k.steps) {
      for (int i = 0; i < n; ++i) {
        if (!std::isfinite(u[i]))
          throw DivergenceError(
              fmt::format("simulate_ensemble: trajectory {} (seed {}) became non-finite", index,
                          k.seed),
              static_cast<double>(s) * k.dt);
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(k.steps - k.burn_steps);
  for (int i = 0; i < n * (n + 1) / 2; ++i) out[i] = acc[i] * inv;
}

void run_trajectory_any(const Kernel& k, std::size_t index, double* out) {
  switch (k.dim) {
    case 2: return run_trajectory<2>(k, index, out);
    case 4: return run_trajectory<4>(k, index, out);
    case 6: return run_trajectory<6>(k, index, out);
    case 8: return run_trajectory<8>(k, index, out);
    default: return run_trajectory<0>(k, index, out);
  }
}

}  // namespace

double EnsembleEstimate::mean_standard_error() const {
  return standard_error.size() > 0 ? standard_error.mean() : 0.0;
}

EnsembleSpec resolve_ensemble_spec(const DriftDiffusion& dd, EnsembleSpec spec) {
  const StabilityVerdict st = is_stable(dd);
  const double rate = std::abs(st.abscissa);
  if (spec.dt <= 0.0) {
    const double cnorm = spectral_norm(split_free_rotation(dd).slow);
    spec.dt = 0.05 / std::max(cnorm, rate);
  }
  if (spec.t_end <= 0.0 && rate > 0.0) spec.t_end = 10.5 / rate;
  return spec;
}

EnsembleEstimate simulate_ensemble(const DriftDiffusion& dd, const EnsembleSpec& requested) {
  const StabilityVerdict st = is_stable(dd);
  if (!st.stable())
    throw NoSteadyStateError(fmt::format(
        "simulate_ensemble: drift is not stable (max Re lambda = {:.6g})", st.abscissa));
  const double rate = std::abs(st.abscissa);
  const EnsembleSpec spec = resolve_ensemble_spec(dd, requested);

  if (spec.n_trajectories < 1000)
    throw SpecError("simulate_ensemble: at least 1000 trajectories are required");
  if (!(spec.dt > 0.0) || !(spec.dt * rate < 0.05))
    throw SpecError(fmt::format("simulate_ensemble: dt * |max Re lambda| = {:.4g} must be below 0.05",
                                spec.dt * rate));
  if (!(spec.t_end * rate >= 10.0))
    throw SpecError(fmt::format(
        "simulate_ensemble: t_end * |max Re lambda| = {:.4g} must be at least 10", spec.t_end * rate));
  if (!(spec.burn_in_fraction >= 0.0 && spec.burn_in_fraction < 1.0))
    throw SpecError("simulate_ensemble: burn-in fraction must lie in [0, 1)");
  for (Eigen::Index i = 0; i < dd.diffusion.rows(); ++i)
    for (Eigen::Index j = 0; j < dd.diffusion.cols(); ++j)
      if (i != j && dd.diffusion(i, j) != 0.0)
        throw DomainError("simulate_ensemble: diffusion matrix must be diagonal");

  const RotationSplit split = split_free_rotation(dd);
  Kernel k;
  k.dim = static_cast<int>(dd.drift.rows());
  k.dt = spec.dt;
  k.steps = static_cast<std::size_t>(std::ceil(spec.t_end / spec.dt));
  k.burn_steps = static_cast<std::size_t>(std::floor(spec.burn_in_fraction * static_cast<double>(k.steps)));
  if (k.burn_steps >= k.steps) k.burn_steps = k.steps - 1;
  k.step = Matrix::Identity(k.dim, k.dim) + split.slow * spec.dt;
  k.seed = spec.seed;
  for (int i = 0; i < k.dim; ++i) {
    const double d = dd.diffusion(i, i);
    if (d < 0.0) throw DomainError("simulate_ensemble: negative diffusion entry");
    k.noise_scale.push_back(std::sqrt(d * spec.dt));
  }
  for (double w : split.omega) {
    k.cos_rot.push_back(std::cos(w * spec.dt));
    k.sin_rot.push_back(std::sin(w * spec.dt));
  }

  const std::size_t packed = static_cast<std::size_t>(k.dim * (k.dim + 1) / 2);
  const std::size_t n = spec.n_trajectories;
  std::vector<double> samples(n * packed);
  const std::size_t n_blocks = (n + block_size - 1) / block_size;
  std::vector<std::exception_ptr> failures(n_blocks);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        const std::size_t end = std::min(n, (b + 1) * block_size);
        for (std::size_t i = b * block_size; i < end; ++i)
          run_trajectory_any(k, i, samples.data() + i * packed);
      } catch (...) {
        failures[b] = std::current_exception();
      }
    }
  };
  unsigned threads = spec.threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : spec.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_blocks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& f : failures)
    if (f) std::rethrow_exception(f);

  // Fixed-order reduction: block partial sums in index order, then blocks in order.
  std::vector<double> mean(packed, 0.0), m2(packed, 0.0);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    std::vector<double> part(packed, 0.0);
    const std::size_t end = std::min(n, (b + 1) * block_size);
    for (std::size_t i = b * block_size; i < end; ++i)
      for (std::size_t e = 0; e < packed; ++e) part[e] += samples[i * packed + e];
    for (std::size_t e = 0; e < packed; ++e) mean[e] += part[e];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  for (std::size_t b = 0; b < n_blocks; ++b) {
    std::vector<double> part(packed, 0.0);
    const std::size_t end = std::min(n, (b + 1) * block_size);
    for (std::size_t i = b * block_size; i < end; ++i)
      for (std::size_t e = 0; e < packed; ++e) {
        const double d = samples[i * packed + e] - mean[e];
        part[e] += d * d;
      }
    for (std::size_t e = 0; e < packed; ++e) m2[e] += part[e];
  }

  EnsembleEstimate out;
  out.estimate.mode_order = dd.mode_order;
  out.estimate.values = Matrix::Zero(k.dim, k.dim);
  out.standard_error = Matrix::Zero(k.dim, k.dim);
  const double nn = static_cast<double>(n);
  std::size_t idx = 0;
  for (int a = 0; a < k.dim; ++a) {
    for (int b = a; b < k.dim; ++b, ++idx) {
      const double se = std::sqrt(m2[idx] / (nn - 1.0) / nn);
      out.estimate.values(a, b) = out.estimate.values(b, a) = mean[idx];
      out.standard_error(a, b) = out.standard_error(b, a) = se;
    }
  }
  out.dt = spec.dt;
  out.t_end = static_cast<double>(k.steps) * spec.dt;
  out.steps = k.steps;
  out.n_trajectories = n;
  out.split_commutator = split.commutator;
  return out;
}

}  // namespace combtangle
