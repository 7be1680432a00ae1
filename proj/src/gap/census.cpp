#include <algorithm>
#include <cmath>
#include <map>

#include "smallball/errors.hpp"
#include "smallball/gap.hpp"
#include "smallball/parallel.hpp"

namespace smallball {

namespace {

// Largest atom weight of sum eps_i v_i over the 2^n sign patterns.
std::uint64_t max_atom(const int* v, unsigned n, unsigned m, std::vector<std::uint64_t>& buf) {
  const std::size_t width = 2 * static_cast<std::size_t>(n) * m + 1;
  const std::size_t zero = static_cast<std::size_t>(n) * m;
  buf.assign(width, 0);
  buf[zero] = 1;
  std::vector<std::uint64_t> next(width);
  for (unsigned i = 0; i < n; ++i) {
    std::fill(next.begin(), next.end(), 0);
    const long s = std::abs(v[i]);
    for (std::size_t k = 0; k < width; ++k) {
      if (!buf[k]) continue;
      next[k + s] += buf[k];
      next[k - s] += buf[k];
    }
    buf.swap(next);
  }
  return *std::max_element(buf.begin(), buf.end());
}

}  // namespace

CensusResult structured_multiset_census(unsigned n, unsigned m, const std::vector<Rational>& rho_grid,
                                        unsigned workers, std::uint64_t budget) {
  if (n < 1 || m < 1) throw ValidationError("census needs n >= 1 and M >= 1");
  const BigInt total = binomial(2 * m + n - 1, n);
  if (total > BigInt(static_cast<unsigned long>(budget)))
    throw BudgetError("census would enumerate " + to_string(total) + " multisets");

  // Sorted multisets over the 2M nonzero values, in lexicographic order.
  std::vector<int> values;
  for (int v = -static_cast<int>(m); v <= static_cast<int>(m); ++v)
    if (v != 0) values.push_back(v);
  std::vector<int> flat;
  flat.reserve(total.get_ui() * n);
  std::vector<unsigned> idx(n, 0);
  for (;;) {
    for (unsigned i = 0; i < n; ++i) flat.push_back(values[idx[i]]);
    int i = static_cast<int>(n) - 1;
    while (i >= 0 && idx[i] + 1 == values.size()) --i;
    if (i < 0) break;
    ++idx[i];
    for (unsigned j = i + 1; j < n; ++j) idx[j] = idx[i];
  }
  const std::uint64_t count = flat.size() / n;

  // Sign flips leave rho unchanged, but the census counts sorted multisets as
  // given, so every one is evaluated.
  std::vector<std::uint64_t> atoms(count);
  for_each_chunk(count, 4096, workers, [&](std::uint64_t, std::uint64_t begin, std::uint64_t end) {
    std::vector<std::uint64_t> buf;
    for (std::uint64_t k = begin; k < end; ++k) atoms[k] = max_atom(&flat[k * n], n, m, buf);
  });

  std::map<std::uint64_t, std::uint64_t> histogram;
  for (std::uint64_t w : atoms) ++histogram[w];
  const BigInt denom = BigInt(1) << n;

  CensusResult out;
  out.total = count;
  for (const Rational& rho0 : rho_grid) {
    CensusRow row;
    row.rho0 = rho0;
    for (const auto& [w, c] : histogram)
      if (ratio(BigInt(static_cast<unsigned long>(w)), denom) >= rho0) row.count += c;
    row.bound_shape =
        rho0 > 0 ? std::pow(1.0 / (rho0.get_d() * std::sqrt(static_cast<double>(n))), static_cast<double>(n))
                 : INFINITY;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace smallball
