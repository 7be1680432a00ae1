#include "smallball/gap.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "smallball/errors.hpp"

namespace smallball {

BigInt Gap::volume() const {
  BigInt v = 1;
  for (long long m : bounds) v *= BigInt(static_cast<long>(2 * m + 1));
  return v;
}

std::string Gap::describe() const {
  std::ostringstream os;
  os << "rank " << rank() << ", generators (";
  for (std::size_t i = 0; i < rank(); ++i) os << (i ? ", " : "") << to_string(generators[i]);
  os << "), bounds (";
  for (std::size_t i = 0; i < rank(); ++i) os << (i ? ", " : "") << bounds[i];
  os << ")";
  if (offset != 0) os << ", offset " << to_string(offset);
  return os.str();
}

Gap make_gap(std::vector<Rational> generators, std::vector<long long> bounds, Rational offset) {
  if (generators.size() != bounds.size()) throw ValidationError("gap needs one bound per generator");
  for (long long m : bounds)
    if (m < 0) throw ValidationError("gap bounds must be non-negative");
  Gap q;
  q.generators = std::move(generators);
  q.bounds = std::move(bounds);
  q.offset = std::move(offset);
  return q;
}

namespace {

// Odometer over the box prod [-lim_i, lim_i]; fn returns false to stop early.
template <class Fn>
void for_each_box(const std::vector<long long>& lim, Fn&& fn) {
  std::vector<long long> m(lim.size());
  for (std::size_t i = 0; i < lim.size(); ++i) m[i] = -lim[i];
  for (;;) {
    if (!fn(m)) return;
    std::size_t i = 0;
    for (; i < m.size(); ++i) {
      if (m[i] < lim[i]) {
        ++m[i];
        break;
      }
      m[i] = -lim[i];
    }
    if (i == m.size()) return;
  }
}

std::uint64_t box_count(const std::vector<long long>& lim, std::size_t skip) {
  long double c = 1;
  for (std::size_t i = 0; i < lim.size(); ++i)
    if (i != skip) c *= static_cast<long double>(2 * lim[i] + 1);
  return c > 1.8e19L ? UINT64_MAX : static_cast<std::uint64_t>(c);
}

// Index of the coordinate with the widest range among nonzero generators.
std::size_t solve_axis(const Gap& q) {
  std::size_t s = q.rank();
  for (std::size_t i = 0; i < q.rank(); ++i)
    if (q.generators[i] != 0 && (s == q.rank() || q.bounds[i] > q.bounds[s])) s = i;
  return s;
}

}  // namespace

GapPoints gap_materialize(const Gap& q, std::uint64_t budget) {
  const BigInt vol = q.volume();
  if (vol > BigInt(static_cast<unsigned long>(budget)))
    throw BudgetError("gap volume " + to_string(vol) + " exceeds the materialization budget");
  std::vector<Rational> pts;
  pts.reserve(vol.get_ui());
  for_each_box(q.bounds, [&](const std::vector<long long>& m) {
    Rational x = q.offset;
    for (std::size_t i = 0; i < m.size(); ++i) x += q.generators[i] * BigInt(static_cast<long>(m[i]));
    pts.push_back(x);
    return true;
  });
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  GapPoints out;
  out.proper = BigInt(static_cast<unsigned long>(pts.size())) == vol;
  out.points = std::move(pts);
  return out;
}

ProperCheck gap_collision_search(const Gap& q, std::uint64_t budget) {
  ProperCheck out;
  out.method = "collision-search";
  for (std::size_t i = 0; i < q.rank(); ++i) {
    if (q.generators[i] == 0 && q.bounds[i] > 0) {
      out.collision.assign(q.rank(), 0);
      out.collision[i] = 1;
      return out;
    }
  }
  // Differences of two box vectors range over the doubled box.
  std::vector<long long> lim(q.bounds);
  for (auto& m : lim) m *= 2;
  const std::size_t s = solve_axis(q);
  if (s == q.rank()) {  // every generator is zero with M = 0
    out.proper = true;
    return out;
  }
  if (box_count(lim, s) > budget) throw BudgetError("collision search for properness exceeds the budget");
  std::vector<long long> rest(lim);
  rest[s] = 0;
  bool found = false;
  for_each_box(rest, [&](const std::vector<long long>& m) {
    Rational acc = 0;
    bool zero = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      zero = false;
      acc += q.generators[i] * BigInt(static_cast<long>(m[i]));
    }
    if (zero) return true;
    Rational ms = -acc / q.generators[s];
    if (ms.get_den() != 1 || abs(ms) > BigInt(static_cast<long>(lim[s]))) return true;
    out.collision = m;
    out.collision[s] = ms.get_num().get_si();
    found = true;
    return false;
  });
  out.proper = !found;
  return out;
}

ProperCheck gap_is_proper(const Gap& q, std::uint64_t budget) {
  if (q.volume() > BigInt(static_cast<unsigned long>(budget))) return gap_collision_search(q, budget);
  ProperCheck out;
  out.proper = gap_materialize(q, budget).proper;
  out.method = "materialize";
  // Materialization says whether, the search says where.
  if (!out.proper) out.collision = gap_collision_search(q, UINT64_MAX).collision;
  return out;
}

std::optional<std::vector<long long>> gap_contains(const Gap& q, const Rational& x, std::uint64_t budget) {
  const Rational y = x - q.offset;
  const std::size_t s = solve_axis(q);
  if (s == q.rank()) {
    if (y == 0) return std::vector<long long>(q.rank(), 0);
    return std::nullopt;
  }
  if (box_count(q.bounds, s) > budget) throw BudgetError("membership search exceeds the budget");
  std::vector<long long> rest(q.bounds);
  rest[s] = 0;
  std::optional<std::vector<long long>> hit;
  for_each_box(rest, [&](const std::vector<long long>& m) {
    Rational acc = y;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] != 0) acc -= q.generators[i] * BigInt(static_cast<long>(m[i]));
    Rational ms = acc / q.generators[s];
    if (ms.get_den() != 1 || abs(ms) > BigInt(static_cast<long>(q.bounds[s]))) return true;
    hit = m;
    (*hit)[s] = ms.get_num().get_si();
    return false;
  });
  return hit;
}

Gap gap_dilate(const Gap& q, long long t) {
  if (!q.symmetric()) throw ValidationError("dilation is defined here for symmetric GAPs only");
  if (t < 1) throw ValidationError("dilation factor must be a positive integer");
  Gap d = q;
  for (auto& m : d.bounds) m *= t;
  return d;
}

ForwardSample gap_forward_sample(const Gap& q, std::size_t n, std::uint64_t seed, std::uint64_t budget) {
  if (n == 0) throw ValidationError("sample size must be positive");
  GapPoints pts = gap_materialize(q, budget);
  if (!pts.proper) throw ValidationError("forward sampling needs a proper GAP");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.points.size() - 1);
  std::vector<Rational> entries;
  for (std::size_t i = 0; i < n; ++i) entries.push_back(pts.points[pick(rng)]);
  ForwardSample out{CoefficientMultiset::scalars(std::move(entries)), 0, 0};
  out.rho = concentration_probability(out.a, SignDistribution::bernoulli()).rho;
  out.quality = out.rho.get_d() * std::pow(static_cast<double>(n), q.rank() / 2.0) *
                static_cast<double>(pts.points.size());
  return out;
}

AlgebraicSpec AlgebraicSpec::parse(const std::string& text) {
  AlgebraicSpec s;
  auto ints = [](const std::string& body) {
    std::vector<long long> v;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        std::size_t used = 0;
        v.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ValidationError("bad integer '" + tok + "' in algebraic spec");
      }
    }
    return v;
  };
  if (text == "golden") {
    s.quadratic = true;
    s.b = 1;
    s.c = 1;
  } else if (text.rfind("quadratic:", 0) == 0) {
    auto v = ints(text.substr(10));
    if (v.size() != 2) throw ValidationError("quadratic:b,c needs two integers");
    s.quadratic = true;
    s.b = v[0];
    s.c = v[1];
  } else if (text.rfind("poly:", 0) == 0) {
    auto v = ints(text.substr(5));
    if (v.size() < 2) throw ValidationError("poly: needs degree >= 1");
    if (v[0] != 1) throw ValidationError("poly: minimal polynomial must be monic");
    if (v.size() > 3)
      throw ValidationError("unsupported algebraic degree " + std::to_string(v.size() - 1) + " (at most 2)");
    if (v.size() == 2) {
      s.x = Rational(BigInt(static_cast<long>(-v[1])));
    } else {
      s.quadratic = true;
      s.b = -v[1];
      s.c = -v[2];
    }
  } else {
    s.x = parse_rational(text);
  }
  if (s.quadratic) {
    // x^2 - b x - c is irreducible over Q iff b^2 + 4c is not a square.
    const BigInt disc = BigInt(static_cast<long>(s.b)) * BigInt(static_cast<long>(s.b)) + 4 * BigInt(static_cast<long>(s.c));
    if (disc >= 0 && mpz_perfect_square_p(disc.get_mpz_t()))
      throw ValidationError("x^2 = " + std::to_string(s.b) + "x + " + std::to_string(s.c) +
                            " is reducible; pass its rational root instead");
  }
  return s;
}

std::string AlgebraicSpec::describe() const {
  if (!quadratic) return to_string(x);
  return "root of x^2 = " + std::to_string(b) + "x + " + std::to_string(c);
}

Rational geometric_progression_rho(const AlgebraicSpec& x, unsigned n, std::size_t atom_budget) {
  const auto ber = SignDistribution::bernoulli();
  if (!x.quadratic) {
    std::vector<Rational> powers{Rational(1)};
    for (unsigned j = 0; j < n; ++j) powers.push_back(powers.back() * x.x);
    return concentration_probability(CoefficientMultiset::scalars(powers), ber, atom_budget).rho;
  }
  // u + v x, reduced with x^2 = b x + c.
  std::vector<Point2> powers{Point2(1, 0)};
  const Rational b(BigInt(static_cast<long>(x.b))), c(BigInt(static_cast<long>(x.c)));
  for (unsigned j = 0; j < n; ++j) {
    const Point2& p = powers.back();
    powers.emplace_back(p.y * c, p.x + p.y * b);
  }
  auto dist = exact_sign_sum_distribution_2d(CoefficientMultiset::points(powers), ber, atom_budget);
  BigInt best = 0;
  for (const auto& atom : dist.atoms()) best = std::max(best, atom.weight);
  return ratio(best, dist.denominator());
}

}  // namespace smallball
