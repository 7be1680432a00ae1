#include <algorithm>
#include <cmath>

#include "smallball/errors.hpp"
#include "smallball/experiments.hpp"
#include "smallball/parallel.hpp"

namespace smallball {

namespace {

constexpr std::uint64_t kPrime = (1ULL << 61) - 1;
constexpr std::uint64_t kTrialChunk = 256;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t lo = static_cast<std::uint64_t>(p & kPrime), hi = static_cast<std::uint64_t>(p >> 61);
  std::uint64_t s = lo + hi;
  return s >= kPrime ? s - kPrime : s;
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

bool full_rank_mod_p(const std::vector<int>& a, std::size_t n) {
  std::vector<std::uint64_t> m(n * n);
  for (std::size_t i = 0; i < n * n; ++i) m[i] = a[i] >= 0 ? static_cast<std::uint64_t>(a[i]) : kPrime - static_cast<std::uint64_t>(-a[i]);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv * n + c] == 0) ++piv;
    if (piv == n) return false;
    if (piv != c)
      for (std::size_t j = 0; j < n; ++j) std::swap(m[c * n + j], m[piv * n + j]);
    const std::uint64_t inv = powmod(m[c * n + c], kPrime - 2);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i * n + c] == 0) continue;
      const std::uint64_t f = mulmod(m[i * n + c], inv);
      for (std::size_t j = c; j < n; ++j) {
        const std::uint64_t sub = mulmod(f, m[c * n + j]);
        m[i * n + j] = m[i * n + j] >= sub ? m[i * n + j] - sub : m[i * n + j] + kPrime - sub;
      }
    }
  }
  return true;
}

// Fills a +-1 matrix from random bits; the symmetric ensemble draws the upper
// triangle including the diagonal and mirrors it.
template <class Bits>
void fill_pm1(std::vector<int>& a, std::size_t n, bool symmetric, Bits&& next_bit) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = symmetric ? i : 0; j < n; ++j) {
      a[i * n + j] = next_bit() ? -1 : 1;
      if (symmetric) a[j * n + i] = a[i * n + j];
    }
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t trial) {
  SplitMix64 outer(master_seed);
  const std::uint64_t base = outer();
  SplitMix64 inner(base ^ (trial * 0xd1b54a32d192ed03ULL));
  return inner();
}

McReport mc_report(std::uint64_t successes, std::uint64_t trials, std::uint64_t seed) {
  McReport r;
  r.trials = trials;
  r.successes = successes;
  r.master_seed = seed;
  if (trials) {
    r.estimate = static_cast<double>(successes) / static_cast<double>(trials);
    r.std_error = std::sqrt(r.estimate * (1 - r.estimate) / static_cast<double>(trials));
  }
  return r;
}

Ensemble parse_ensemble(const std::string& text) {
  if (text == "bernoulli" || text == "bernoulli_iid") return Ensemble::bernoulli_iid;
  if (text == "symmetric" || text == "bernoulli_symmetric") return Ensemble::bernoulli_symmetric;
  if (text == "gaussian" || text == "gaussian_iid") return Ensemble::gaussian_iid;
  throw ValidationError("unknown ensemble '" + text + "' (bernoulli, symmetric, gaussian)");
}

std::string to_string(Ensemble e) {
  switch (e) {
    case Ensemble::bernoulli_iid: return "bernoulli_iid";
    case Ensemble::bernoulli_symmetric: return "bernoulli_symmetric";
    case Ensemble::gaussian_iid: return "gaussian_iid";
  }
  return "?";
}

BigInt bareiss_determinant(std::vector<BigInt> a, std::size_t n) {
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r * n + k] == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
    prev = a[k * n + k];
  }
  return sign * a[n * n - 1];
}

long long bareiss_determinant_ll(std::vector<long long> a, std::size_t n) {
  if (n == 0) return 1;
  long long prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k * n + k] == 0) {
      std::size_t r = k + 1;
      while (r < n && a[r * n + k] == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[r * n + j]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
    prev = a[k * n + k];
  }
  return sign * a[n * n - 1];
}

bool is_singular_pm1(const std::vector<int>& a, std::size_t n) {
  if (full_rank_mod_p(a, n)) return false;
  std::vector<BigInt> big(a.begin(), a.end());
  return bareiss_determinant(std::move(big), n) == 0;
}

McReport singularity_probability(Ensemble ensemble, std::size_t n, RunMode mode, std::uint64_t trials,
                                 std::uint64_t seed, unsigned workers) {
  if (ensemble == Ensemble::gaussian_iid)
    throw ValidationError("Gaussian matrices are singular with probability 0; use a Bernoulli ensemble");
  if (n < 1) throw ValidationError("n must be at least 1");
  const bool symmetric = ensemble == Ensemble::bernoulli_symmetric;

  if (mode == RunMode::exact) {
    const std::size_t free = symmetric ? n * (n + 1) / 2 : n * n;
    if (free > 26)
      throw BudgetError("exact enumeration needs 2^" + std::to_string(free) + " > 2^26 matrices");
    const std::uint64_t total = std::uint64_t{1} << free;
    const std::uint64_t chunk = 1 << 14;
    std::vector<std::uint64_t> singular(chunk_count(total, chunk), 0);
    for_each_chunk(total, chunk, workers, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
      std::vector<int> a(n * n);
      std::vector<long long> ll(n * n);
      std::uint64_t count = 0;
      for (std::uint64_t mask = begin; mask < end; ++mask) {
        std::uint64_t bits = mask;
        fill_pm1(a, n, symmetric, [&] {
          const bool b = bits & 1;
          bits >>= 1;
          return b;
        });
        std::copy(a.begin(), a.end(), ll.begin());
        count += bareiss_determinant_ll(ll, n) == 0;
      }
      singular[c] = count;
    });
    std::uint64_t s = 0;
    for (auto v : singular) s += v;
    McReport r = mc_report(s, total, seed);
    r.mode = RunMode::exact;
    r.std_error = 0;
    r.exact = ratio(BigInt(static_cast<unsigned long>(s)), BigInt(1) << free);
    return r;
  }

  std::vector<std::uint64_t> hits(chunk_count(trials, kTrialChunk), 0);
  for_each_chunk(trials, kTrialChunk, workers, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    std::vector<int> a(n * n);
    std::uint64_t count = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      SplitMix64 rng(substream_seed(seed, t));
      std::uint64_t word = 0;
      unsigned left = 0;
      fill_pm1(a, n, symmetric, [&] {
        if (left == 0) {
          word = rng();
          left = 64;
        }
        const bool b = word & 1;
        word >>= 1;
        --left;
        return b;
      });
      count += is_singular_pm1(a, n);
    }
    hits[c] = count;
  });
  std::uint64_t s = 0;
  for (auto v : hits) s += v;
  return mc_report(s, trials, seed);
}

UniversalityReport k_universality_check(std::size_t d, std::size_t n, std::size_t k, std::uint64_t trials,
                                        std::uint64_t seed, unsigned workers) {
  if (n < 1 || n > 64) throw ValidationError("k-universality needs 1 <= n <= 64");
  if (k > n) throw ValidationError("k must not exceed n");
  const double work = std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) *
                      std::pow(2.0, static_cast<double>(k));
  if (work > 1e7) throw BudgetError("C(n,k) 2^k exceeds 1e7 pattern checks per trial");

  std::vector<std::vector<unsigned>> subsets;
  if (k > 0) {
    std::vector<unsigned> idx(k);
    for (unsigned i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
      subsets.push_back(idx);
      int i = static_cast<int>(k) - 1;
      while (i >= 0 && idx[i] == n - k + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  const std::size_t patterns = std::size_t{1} << k;

  std::vector<std::uint64_t> fails(chunk_count(trials, kTrialChunk), 0);
  for_each_chunk(trials, kTrialChunk, workers, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint64_t> vecs(d);
    std::vector<char> seen(patterns);
    std::uint64_t count = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      SplitMix64 rng(substream_seed(seed, t));
      const std::uint64_t keep = n == 64 ? ~0ULL : ((1ULL << n) - 1);
      for (auto& v : vecs) v = rng() & keep;
      bool ok = true;
      for (const auto& s : subsets) {
        std::fill(seen.begin(), seen.end(), 0);
        std::size_t distinct = 0;
        for (auto v : vecs) {
          std::size_t pat = 0;
          for (std::size_t j = 0; j < k; ++j) pat |= static_cast<std::size_t>(v >> s[j] & 1) << j;
          if (!seen[pat]) {
            seen[pat] = 1;
            if (++distinct == patterns) break;
          }
        }
        if (distinct < patterns) {
          ok = false;
          break;
        }
      }
      count += !ok;
    }
    fails[c] = count;
  });
  std::uint64_t f = 0;
  for (auto v : fails) f += v;
  UniversalityReport out;
  out.failures = mc_report(f, trials, seed);
  out.benchmark = 1.0 / static_cast<double>(n);
  if (k == 1) out.closed_form = 1 - std::pow(1 - std::pow(2.0, 1.0 - static_cast<double>(d)), static_cast<double>(n));
  return out;
}

}  // namespace smallball
