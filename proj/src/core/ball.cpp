#include <algorithm>
#include <cmath>

#include "smallball/core.hpp"
#include "smallball/errors.hpp"

namespace smallball {

Ball1d ball_probability_1d(const ExactDistribution& dist, const Rational& radius) {
  if (radius < 0) throw ValidationError("ball radius R must be >= 0");
  const auto& atoms = dist.atoms();
  const Rational width = 2 * radius;
  BigInt window = 0, best = -1;
  Rational witness;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < atoms.size(); ++hi) {
    window += atoms[hi].weight;
    while (atoms[hi].value - atoms[lo].value > width) window -= atoms[lo++].weight;
    // >= keeps the last maximal window, so ties report the largest center.
    if (window >= best) {
      best = window;
      witness = (atoms[lo].value + atoms[hi].value) / 2;
    }
  }
  Rational p(best, dist.denominator());
  p.canonicalize();
  return {p, witness};
}

Ball1d ball_probability_1d(const CoefficientMultiset& a, const SignDistribution& xi, const Rational& radius,
                           std::size_t atom_budget) {
  if (radius < 0) throw ValidationError("ball radius R must be >= 0");
  return ball_probability_1d(exact_sign_sum_distribution(a, xi, atom_budget), radius);
}

Rational disk_mass(const ExactDistribution2d& dist, const Point2& center, const Rational& radius) {
  const Rational r2 = radius * radius;
  BigInt w = 0;
  for (const auto& atom : dist.atoms())
    if (norm_squared(atom.value - center) <= r2) w += atom.weight;
  Rational p(w, dist.denominator());
  p.canonicalize();
  return p;
}

namespace {

// Sign test for a + b*sqrt(t) <= 0 with t >= 0, exactly.
bool nonpositive_surd(const Rational& a, const Rational& b, const Rational& t) {
  if (b >= 0) return a <= 0 && a * a >= b * b * t;
  return a <= 0 || a * a <= b * b * t;
}

bool is_rational_square(const Rational& t, Rational& root) {
  if (t < 0) return false;
  if (!mpz_perfect_square_p(t.get_num_mpz_t()) || !mpz_perfect_square_p(t.get_den_mpz_t())) return false;
  BigInt n, d;
  mpz_sqrt(n.get_mpz_t(), t.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), t.get_den_mpz_t());
  root = Rational(n, d);
  root.canonicalize();
  return true;
}

}  // namespace

// Any maximal closed disk can be translated until either it is centered on
// a support point or two support points lie on its boundary, without losing
// any covered point. So it suffices to test those candidate centers.
Ball2d ball_probability_2d(const ExactDistribution2d& dist, const Rational& radius, std::size_t pair_budget) {
  if (radius < 0) throw ValidationError("ball radius R must be >= 0");
  const auto& atoms = dist.atoms();
  const std::size_t n = atoms.size();
  if (n * (n - 1) / 2 > pair_budget)
    throw BudgetError("2-D candidate pairs " + std::to_string(n * (n - 1) / 2) + " exceed pair budget " +
                      std::to_string(pair_budget));
  const Rational r2 = radius * radius;

  BigInt best = -1;
  Ball2d out;
  for (const auto& c : atoms) {
    BigInt w = 0;
    for (const auto& q : atoms)
      if (norm_squared(q.value - c.value) <= r2) w += q.weight;
    if (w > best) {
      best = w;
      out.witness = c.value;
      out.witness_exact = true;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 d = atoms[j].value - atoms[i].value;
      const Rational dd = norm_squared(d);
      if (dd > 4 * r2) continue;
      const Point2 mid = Rational(1, 2) * (atoms[i].value + atoms[j].value);
      const Point2 perp(-d.y, d.x);
      const Rational t = r2 / dd - Rational(1, 4);
      for (int sign : {1, -1}) {
        // center = mid + sign*sqrt(t)*perp; |q-c|^2 <= R^2 reduces to
        // |q-mid|^2 - dd/4 - 2 sign sqrt(t) <q-mid, perp> <= 0.
        BigInt w = 0;
        for (const auto& q : atoms) {
          const Point2 u = q.value - mid;
          Rational a = norm_squared(u) - dd / 4;
          Rational b = -2 * sign * dot(u, perp);
          if (nonpositive_surd(a, b, t)) w += q.weight;
        }
        if (w > best) {
          best = w;
          Rational root;
          if (is_rational_square(t, root)) {
            out.witness = mid + Rational(sign * root) * perp;
            out.witness_exact = true;
          } else {
            double s = sign * std::sqrt(t.get_d());
            out.witness = Point2(rational_from_double(mid.x.get_d() + s * perp.x.get_d()),
                                 rational_from_double(mid.y.get_d() + s * perp.y.get_d()));
            out.witness_exact = false;
          }
        }
      }
    }
  }
  out.p = Rational(best, dist.denominator());
  out.p.canonicalize();
  return out;
}

Ball2d ball_probability_2d(const CoefficientMultiset& a, const SignDistribution& xi, const Rational& radius,
                           const Ball2dLimits& limits) {
  if (a.point_entries().size() > limits.max_entries)
    throw BudgetError("2-D ball needs n <= " + std::to_string(limits.max_entries) + ", got " +
                      std::to_string(a.size()));
  return ball_probability_2d(exact_sign_sum_distribution_2d(a, xi, limits.atom_budget), radius,
                             limits.pair_budget);
}

FlatDirection flat_direction_search(const CoefficientMultiset& a, unsigned angle_grid) {
  if (angle_grid < 4) throw ValidationError("angle_grid must be >= 4");
  const auto& pts = a.point_entries();
  std::vector<std::pair<double, double>> xy;
  for (const auto& p : pts) xy.emplace_back(p.x.get_d(), p.y.get_d());

  FlatDirection best;
  best.far_count = pts.size() + 1;
  std::vector<double> proj(pts.size());
  for (unsigned k = 0; k < angle_grid; ++k) {
    // Normals over a half-turn cover every line orientation.
    const double theta = M_PI * k / angle_grid;
    const double ex = std::cos(theta), ey = std::sin(theta);
    for (std::size_t i = 0; i < xy.size(); ++i) proj[i] = xy[i].first * ex + xy[i].second * ey;
    std::sort(proj.begin(), proj.end());
    // Entries within distance < 1 of the line lie in an open window of length 2.
    std::size_t lo = 0, near = 0, best_lo = 0, best_hi = 0;
    for (std::size_t hi = 0; hi < proj.size(); ++hi) {
      while (proj[hi] - proj[lo] >= 2) ++lo;
      if (hi - lo + 1 > near) {
        near = hi - lo + 1;
        best_lo = lo;
        best_hi = hi;
      }
    }
    const std::size_t far = proj.size() - near;
    if (far < best.far_count) {
      best.far_count = far;
      best.normal_x = ex;
      best.normal_y = ey;
      best.angle = theta;
      best.offset = rational_from_double((proj[best_lo] + proj[best_hi]) / 2);
    }
  }
  return best;
}

}  // namespace smallball
