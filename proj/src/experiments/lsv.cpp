#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "smallball/errors.hpp"
#include "smallball/experiments.hpp"
#include "smallball/parallel.hpp"

namespace smallball {

double edelman_cdf(double t) {
  if (t < 0) throw ValidationError("edelman_cdf needs t >= 0");
  return -std::expm1(-t * t / 2 - t);
}

SigmaMin smallest_singular_value(const std::vector<double>& a, std::size_t n, const LsvOptions& options) {
  if (a.size() != n * n) throw ValidationError("matrix needs n^2 entries");
  if (n == 0) return {};
  const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      a.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  if (r.diagonal().cwiseAbs().minCoeff() == 0) return {0.0, true};

  // Inverse iteration on (R^T R)^{-1}: w = R^{-1} R^{-T} v.
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  SplitMix64 start(0x5eed);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = static_cast<double>(start() >> 11) / 9007199254740992.0 - 0.5;
  v.normalize();
  double sigma = 0;
  const auto upper = r.triangularView<Eigen::Upper>();
  for (unsigned it = 0; it < options.max_iterations; ++it) {
    Eigen::VectorXd w = upper.transpose().solve(v);
    w = upper.solve(w);
    const double norm = w.norm();
    if (!std::isfinite(norm) || norm == 0) break;
    const double next = 1 / std::sqrt(norm);
    v = w / norm;
    if (it > 0 && std::abs(next - sigma) <= options.tolerance * next) return {next, true};
    sigma = next;
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return {svd.singularValues().minCoeff(), false};
}

double LsvSample::quantile(double q) const {
  if (scaled.empty()) return NAN;
  const double pos = q * static_cast<double>(scaled.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, scaled.size() - 1);
  return scaled[lo] + (pos - static_cast<double>(lo)) * (scaled[hi] - scaled[lo]);
}

double LsvSample::cdf(double t) const {
  if (scaled.empty()) return NAN;
  const auto it = std::upper_bound(scaled.begin(), scaled.end(), t);
  return static_cast<double>(it - scaled.begin()) / static_cast<double>(scaled.size());
}

LsvSample least_singular_value_mc(Ensemble ensemble, std::size_t n, std::uint64_t trials, std::uint64_t seed,
                                  unsigned workers, const LsvOptions& options) {
  if (n < 1 || n > 400) throw ValidationError("least singular value experiments need 1 <= n <= 400");
  LsvSample out;
  out.ensemble = ensemble;
  out.n = n;
  out.master_seed = seed;
  out.scaled.resize(trials);
  std::vector<char> fell_back(trials, 0);
  const double root_n = std::sqrt(static_cast<double>(n));
  for_each_chunk(trials, 16, workers, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
    std::vector<double> a(n * n);
    for (std::uint64_t t = begin; t < end; ++t) {
      SplitMix64 rng(substream_seed(seed, t));
      if (ensemble == Ensemble::gaussian_iid) {
        std::normal_distribution<double> g;
        for (auto& x : a) x = g(rng);
      } else {
        const bool sym = ensemble == Ensemble::bernoulli_symmetric;
        std::uint64_t word = 0;
        unsigned left = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = sym ? i : 0; j < n; ++j) {
            if (left == 0) {
              word = rng();
              left = 64;
            }
            a[i * n + j] = (word & 1) ? -1.0 : 1.0;
            if (sym) a[j * n + i] = a[i * n + j];
            word >>= 1;
            --left;
          }
      }
      const SigmaMin s = smallest_singular_value(a, n, options);
      out.scaled[t] = root_n * s.value;
      fell_back[t] = !s.converged;
    }
  });
  out.fallbacks = static_cast<std::size_t>(std::count(fell_back.begin(), fell_back.end(), 1));
  out.by_trial = out.scaled;
  std::sort(out.scaled.begin(), out.scaled.end());
  return out;
}

}  // namespace smallball
