#include <algorithm>
#include <cmath>
#include <numeric>

#include "smallball/errors.hpp"
#include "smallball/gap.hpp"

namespace smallball {

namespace {

using i128 = __int128;

long long iabs(long long x) { return x < 0 ? -x : x; }

// Greedy mixed-radix decoding with ascending generators: nearest multiple of
// each larger generator first (ties toward zero), the smallest must divide.
bool decode(long long a, const std::vector<long long>& gens, long long* m) {
  i128 r = a;
  for (std::size_t i = gens.size(); i-- > 1;) {
    const i128 g = gens[i];
    i128 q = r / g;
    const i128 rem = r - q * g;
    if (2 * (rem < 0 ? -rem : rem) > g) q += r > 0 ? 1 : -1;
    m[i] = static_cast<long long>(q);
    r -= q * g;
  }
  if (r % gens[0] != 0) return false;
  m[0] = static_cast<long long>(r / gens[0]);
  return true;
}

struct Fit {
  std::vector<long long> gens;
  std::vector<long long> bounds;
  std::vector<std::size_t> covered;
  long double volume = INFINITY;
};

long double volume_of(const std::vector<long long>& bounds) {
  long double v = 1;
  for (long long m : bounds) v *= 2.0L * m + 1;
  return v;
}

// Covers every decodable entry, then spends the remaining exceptions on
// whichever entry's removal shrinks the box the most.
bool evaluate(const std::vector<long long>& a, const std::vector<long long>& gens, std::size_t allowed, Fit& out) {
  const std::size_t n = a.size(), r = gens.size();
  std::vector<long long> reps(n * r);
  std::vector<std::size_t> active;
  std::size_t uncovered = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (decode(a[i], gens, &reps[i * r]))
      active.push_back(i);
    else if (++uncovered > allowed)
      return false;
  }
  auto bounds_without = [&](std::size_t skip) {
    std::vector<long long> b(r, 0);
    for (std::size_t i : active)
      if (i != skip)
        for (std::size_t k = 0; k < r; ++k) b[k] = std::max(b[k], iabs(reps[i * r + k]));
    return b;
  };
  std::vector<long long> bounds = bounds_without(n);
  for (std::size_t drops = allowed - uncovered; drops > 0 && !active.empty(); --drops) {
    long double best = volume_of(bounds);
    std::size_t victim = n;
    for (std::size_t i : active) {
      bool extreme = false;
      for (std::size_t k = 0; k < r; ++k) extreme |= iabs(reps[i * r + k]) == bounds[k];
      if (!extreme) continue;
      const long double v = volume_of(bounds_without(i));
      if (v < best) {
        best = v;
        victim = i;
      }
    }
    if (victim == n) break;
    active.erase(std::find(active.begin(), active.end(), victim));
    bounds = bounds_without(n);
  }
  out.gens = gens;
  out.bounds = std::move(bounds);
  out.covered = std::move(active);
  out.volume = volume_of(out.bounds);
  return true;
}

Gap to_gap(const Fit& f) {
  std::vector<Rational> g;
  for (long long x : f.gens) g.emplace_back(BigInt(static_cast<long>(x)));
  return make_gap(std::move(g), f.bounds);
}

bool certifiably_proper(const Fit& f) {
  try {
    return gap_is_proper(to_gap(f), 1'000'000).proper;
  } catch (const BudgetError&) {
    return false;
  }
}

}  // namespace

GapFitCertificate gap_fit(const CoefficientMultiset& multiset, const Rational& epsilon, const GapFitOptions& options) {
  if (options.max_rank < 1 || options.max_rank > 3) throw ValidationError("max_rank must lie in 1..3");
  if (epsilon < 0 || epsilon >= 1) throw ValidationError("epsilon must lie in [0, 1)");
  const std::vector<long long> a = multiset.integer_entries();
  for (long long x : a)
    if (iabs(x) > (1LL << 61)) throw ValidationError("gap_fit entries must stay below 2^61 in magnitude");
  const std::size_t n = a.size();
  const std::size_t allowed = floor(epsilon * BigInt(static_cast<unsigned long>(n))).get_ui();

  long long g_all = 0;
  for (long long x : a) g_all = std::gcd(g_all, x);

  GapFitCertificate cert;
  Fit best;
  if (g_all == 0) {
    best.volume = 1;
    for (std::size_t i = 0; i < n; ++i) best.covered.push_back(i);
  } else {
    evaluate(a, {g_all}, 0, best);
  }
  cert.fallback = true;
  auto offer = [&](const Fit& f) {
    if (f.volume < best.volume && certifiably_proper(f)) {
      best = f;
      cert.fallback = false;
    }
  };

  std::vector<long long> pool;
  if (g_all != 0) pool.push_back(iabs(g_all));
  for (std::size_t i = 0; i < n; ++i) {
    pool.push_back(iabs(a[i]));
    for (std::size_t j = i + 1; j < n; ++j) {
      pool.push_back(iabs(a[i] - a[j]));
      pool.push_back(std::gcd(a[i], a[j]));
    }
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (!pool.empty() && pool.front() == 0) pool.erase(pool.begin());

  std::uint64_t tried = 0;
  auto spend = [&] {
    if (tried >= options.budget) {
      cert.search_truncated = true;
      return false;
    }
    ++tried;
    return true;
  };

  Fit f;
  for (long long g : pool) {
    if (!spend()) break;
    if (evaluate(a, {g}, allowed, f)) offer(f);
  }

  std::vector<Fit> rank2;
  if (options.max_rank >= 2 && !cert.search_truncated) {
    for (std::size_t i = 0; i < pool.size() && !cert.search_truncated; ++i)
      for (std::size_t j = i + 1; j < pool.size(); ++j) {
        if (!spend()) break;
        if (!evaluate(a, {pool[i], pool[j]}, allowed, f)) continue;
        offer(f);
        rank2.push_back(f);
      }
  }

  if (options.max_rank >= 3 && !rank2.empty()) {
    const std::size_t keep = std::min(options.rank3_seeds, rank2.size());
    std::partial_sort(rank2.begin(), rank2.begin() + static_cast<std::ptrdiff_t>(keep), rank2.end(),
                      [](const Fit& x, const Fit& y) { return x.volume < y.volume; });
    for (std::size_t s = 0; s < keep && !cert.search_truncated; ++s)
      for (long long g : pool) {
        if (g <= rank2[s].gens[1]) continue;
        if (!spend()) break;
        if (evaluate(a, {rank2[s].gens[0], rank2[s].gens[1], g}, allowed, f)) offer(f);
      }
  }

  // Box entries are already symmetric in sign, so positive ascending
  // generators are the canonical representative.
  cert.gap = g_all == 0 ? make_gap({}, {}) : to_gap(best);
  cert.covered = best.covered.size();
  cert.covered_indices = best.covered;
  cert.epsilon_achieved = ratio(BigInt(static_cast<unsigned long>(n - cert.covered)), BigInt(static_cast<unsigned long>(n)));
  cert.candidates_tried = tried;
  cert.rho = concentration_probability(multiset, SignDistribution::bernoulli()).rho;
  cert.quality = cert.rho.get_d() * cert.gap.volume().get_d() * std::pow(static_cast<double>(n), cert.gap.rank() / 2.0);
  return cert;
}

}  // namespace smallball
