#include <cfloat>
#include <cmath>
#include <numeric>

#include "smallball/errors.hpp"
#include "smallball/fourier.hpp"

namespace smallball {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, a, m);
    a = mul_mod(a, a, m);
    e >>= 1;
  }
  return r;
}

constexpr std::uint64_t kChunk = 1 << 15;

}  // namespace

// Deterministic Miller-Rabin: these twelve bases are exact below 2^64.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime_above(std::uint64_t n) {
  if (n >= (1ULL << 63)) throw BudgetError("prime search above 2^63 is not supported");
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

std::uint64_t FpContext::embedding_threshold(const std::vector<long long>& entries) {
  u128 s = 1;
  for (long long a : entries) s += static_cast<u128>(a < 0 ? -a : a);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    s <<= 1;
    if (s > static_cast<u128>(UINT64_MAX)) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(s);
}

FpContext FpContext::create(const CoefficientMultiset& a, std::optional<std::uint64_t> p, FpMode mode) {
  FpContext ctx;
  ctx.entries_ = a.integer_entries();
  ctx.mode_ = mode;
  const std::uint64_t threshold = embedding_threshold(ctx.entries_);
  if (p) {
    if (!is_prime(*p)) throw ValidationError("p = " + std::to_string(*p) + " is not prime");
    if (mode == FpMode::strict && *p <= threshold)
      throw ValidationError("embedding condition p > 2^n (sum|a_i| + 1) = " + std::to_string(threshold) +
                            " violated by p = " + std::to_string(*p));
    ctx.p_ = *p;
  } else {
    if (threshold == UINT64_MAX) throw BudgetError("embedding prime would exceed 64 bits");
    ctx.p_ = next_prime_above(threshold);
  }
  for (long long e : ctx.entries_) {
    long long r = e % static_cast<long long>(ctx.p_);
    if (r < 0) r += static_cast<long long>(ctx.p_);
    ctx.residues_.push_back(static_cast<std::uint64_t>(r));
  }
  return ctx;
}

FourierIdentity fp_fourier_identity(const FpContext& ctx, std::uint64_t target, unsigned workers) {
  const std::uint64_t p = ctx.p();
  const std::size_t n = ctx.residues().size();
  if (n > 24) throw ValidationError("fourier identity supports n <= 24");
  if (p > 50'000'000ULL) throw BudgetError("fourier identity scan needs p <= 5e7, got " + std::to_string(p));
  target %= p;

  std::vector<double> cos_table(p), sin_table(p);
  for (std::uint64_t r = 0; r < p; ++r) {
    const double x = 2.0 * M_PI * static_cast<double>(r) / static_cast<double>(p);
    cos_table[r] = std::cos(x);
    sin_table[r] = std::sin(x);
  }
  const auto chunks = chunk_count(p, kChunk);
  std::vector<double> re(chunks, 0), im(chunks, 0);
  for_each_chunk(p, kChunk, workers, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    double sr = 0, si = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      double prod = 1;
      for (std::uint64_t a : ctx.residues()) prod *= cos_table[mul_mod(a, t, p)];
      const std::uint64_t phase = mul_mod(t, target, p);
      // e_p(-t target) = cos - i sin
      sr += prod * cos_table[phase];
      si -= prod * sin_table[phase];
    }
    re[c] = sr;
    im[c] = si;
  });
  FourierIdentity out;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    out.real += re[c];
    out.imag += im[c];
  }
  out.real /= static_cast<double>(p);
  out.imag /= static_cast<double>(p);

  auto dist = exact_sign_sum_distribution(CoefficientMultiset::integers(ctx.entries()), SignDistribution::bernoulli());
  BigInt w = 0;
  const BigInt pb = BigInt(std::to_string(p));
  for (const auto& atom : dist.atoms()) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), atom.value.get_num_mpz_t(), pb.get_mpz_t());
    if (r == BigInt(std::to_string(target))) w += atom.weight;
  }
  out.exact = ratio(w, dist.denominator());
  return out;
}

double fp_exponential_bound(const FpContext& ctx, unsigned workers) {
  const std::uint64_t p = ctx.p();
  if (p > 50'000'000ULL) throw BudgetError("exponential bound scan needs p <= 5e7, got " + std::to_string(p));
  const double pd = static_cast<double>(p);
  const auto chunks = chunk_count(p, kChunk);
  std::vector<double> part(chunks, 0);
  for_each_chunk(p, kChunk, workers, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
    double s = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      double e = 0;
      for (std::uint64_t a : ctx.residues()) {
        std::uint64_t r = mul_mod(a, t, p);
        double d = static_cast<double>(std::min(r, p - r)) / pd;
        e += d * d;
      }
      s += std::exp(-2.0 * e);
    }
    part[c] = s;
  });
  double total = 0;
  for (double v : part) total += v;
  // Each of the p terms carries a few ulps of error; widen by a generous
  // multiple so the bound stays one-sided.
  return total / pd * (1.0 + 64.0 * (pd + 16.0) * DBL_EPSILON);
}

LevelSetReport level_and_dual_sets(const FpContext& ctx, unsigned m_max, std::uint64_t scan_budget,
                                   unsigned workers) {
  const std::uint64_t p = ctx.p();
  if (p > 1'000'000ULL) throw BudgetError("level-set scans need p <= 1e6, got " + std::to_string(p));
  LevelSetReport report;
  report.p = p;

  // g(t) = p^2 sum ||a_i t/p||^2, an exact integer.
  std::vector<std::uint64_t> g(p, 0);
  for (std::uint64_t t = 0; t < p; ++t) {
    std::uint64_t s = 0;
    for (std::uint64_t a : ctx.residues()) {
      std::uint64_t r = a * t % p;
      std::uint64_t d = std::min(r, p - r);
      s += d * d;
    }
    g[t] = s;
  }
  const u128 p2 = static_cast<u128>(p) * p;

  auto rho = concentration_probability(CoefficientMultiset::integers(ctx.entries()), SignDistribution::bernoulli());
  report.rho_reference = rho.rho;
  report.rho_checked = ctx.mode() == FpMode::strict;

  std::vector<std::uint64_t> members;
  for (unsigned m = 0; m <= m_max; ++m) {
    members.clear();
    for (std::uint64_t t = 0; t < p; ++t)
      if (static_cast<u128>(g[t]) <= p2 * m) members.push_back(t);
    LevelSetRow row;
    row.m = m;
    row.level_size = members.size();
    if (static_cast<u128>(p) * members.size() > scan_budget)
      throw BudgetError("dual-set scan p * |S_m| exceeds scan budget");

    // a is in the dual set when 200 sum_{t in S_m} (p ||a t/p||)^2 <= |S_m| p^2.
    const u128 limit = static_cast<u128>(members.size()) * p2;
    const auto chunks = chunk_count(p, kChunk);
    std::vector<std::uint64_t> counts(chunks, 0);
    for_each_chunk(p, kChunk, workers, [&](std::uint64_t c, std::uint64_t begin, std::uint64_t end) {
      std::uint64_t cnt = 0;
      for (std::uint64_t a = begin; a < end; ++a) {
        u128 s = 0;
        bool in = true;
        for (std::uint64_t t : members) {
          std::uint64_t r = a * t % p;
          std::uint64_t d = std::min(r, p - r);
          s += static_cast<u128>(200) * d * d;
          if (s > limit) {
            in = false;
            break;
          }
        }
        cnt += in;
      }
      counts[c] = cnt;
    });
    row.dual_size = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    row.dual_bound_holds = row.level_size == 0 ||
                           static_cast<u128>(row.dual_size) * row.level_size <= static_cast<u128>(8) * p;
    if (!report.large_m &&
        static_cast<double>(row.level_size) * std::exp(-static_cast<double>(m) + 2.0) >=
            rho.rho.get_d() * static_cast<double>(p))
      report.large_m = m;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace smallball
