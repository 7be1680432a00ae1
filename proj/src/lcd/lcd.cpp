#include "smallball/lcd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smallball/errors.hpp"

namespace smallball {

namespace {

constexpr std::size_t kBreakpointBudget = 20'000'000;

void validate(const LcdParams& p) {
  if (!(p.gamma > 0 && p.gamma < 1)) throw ValidationError("gamma must lie in (0, 1)");
  if (!(p.alpha > 0)) throw ValidationError("alpha must be positive");
}

// Open interval where q(x) = A x^2 - 2 B x + C < 0; empty when lo >= hi.
std::pair<double, double> negative_part(double a, double b, double c) {
  const double disc = b * b - a * c;
  if (disc <= 0) return {1, 0};
  const double s = std::sqrt(disc);
  // Stable root pair: one from the sum, the other via Vieta.
  const double q = b + std::copysign(s, b);
  double r1 = q / a, r2 = (q != 0) ? c / q : (b - s) / a;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

double distance_to(const std::vector<double>& a, double theta, const std::vector<long long>& p) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = theta * a[i] - static_cast<double>(p[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

LcdResult lcd_1d(const std::vector<double>& a, const LcdParams& params) {
  validate(params);
  if (a.empty()) throw ValidationError("lcd needs at least one coefficient");
  const double theta_max =
      params.theta_max > 0 ? params.theta_max : std::sqrt(static_cast<double>(a.size())) / params.gamma;

  double norm2 = 0;
  std::size_t expected = 0;
  for (double x : a) {
    norm2 += x * x;
    expected += static_cast<std::size_t>(std::abs(x) * theta_max + 1);
  }
  LcdResult out;
  out.theta_max = theta_max;
  if (norm2 == 0) {
    out.certificate = "zero vector: dist(theta a, Z^n) = 0 is never below gamma ||theta a|| = 0";
    return out;
  }
  if (expected > kBreakpointBudget) throw BudgetError("lcd scan would visit more than 2e7 segments");

  std::vector<double> cuts{0.0, theta_max};
  for (double x : a) {
    const double ax = std::abs(x);
    if (ax == 0) continue;
    for (double k = 0;; ++k) {
      const double c = (k + 0.5) / ax;
      if (c >= theta_max) break;
      cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const double g2 = params.gamma * params.gamma;
  const double a2 = params.alpha * params.alpha;
  std::vector<long long> p(a.size());
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double lo = cuts[s], hi = cuts[s + 1];
    if (hi <= lo) continue;
    const double mid = (lo + hi) / 2;
    bool nonzero = false;
    double ap = 0, pp = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      p[i] = std::llround(mid * a[i]);
      nonzero |= p[i] != 0;
      ap += a[i] * static_cast<double>(p[i]);
      pp += static_cast<double>(p[i]) * static_cast<double>(p[i]);
    }
    if (!nonzero) continue;  // p = 0 needs ||theta a|| < gamma ||theta a||
    // ||theta a - p||^2 < gamma^2 theta^2 ||a||^2 and < alpha^2.
    auto [l1, u1] = negative_part((1 - g2) * norm2, ap, pp);
    auto [l2, u2] = negative_part(norm2, ap, pp - a2);
    const double left = std::max({l1, l2, lo});
    const double right = std::min({u1, u2, hi});
    if (!(left < right)) continue;
    out.finite = true;
    out.lcd = left;
    out.witness_integers = p;
    // Step in from the open end far enough to clear rounding in the roots.
    double w = left + std::min((right - left) / 2, std::max(1e-9, 1e-9 * left));
    out.witness_theta = w;
    out.achieved_distance = distance_to(a, w, p);
    out.slack = std::min(params.gamma * w * std::sqrt(norm2), params.alpha) - out.achieved_distance;
    out.certificate = "first qualifying segment of the exact crossing sweep";
    return out;
  }
  out.certificate = "no theta <= theta_max satisfies the condition: every segment between half-integer crossings "
                    "was solved exactly";
  return out;
}

LcdResult lcd_1d(const CoefficientMultiset& a, const LcdParams& params) {
  std::vector<double> v;
  for (const auto& x : a.scalar_entries()) v.push_back(x.get_d());
  return lcd_1d(v, params);
}

double isotropy_floor(const CoefficientMultiset& a) {
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : a.point_entries()) {
    const double x = p.x.get_d(), y = p.y.get_d();
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double tr = sxx + syy, det = sxx * syy - sxy * sxy;
  return tr / 2 - std::sqrt(std::max(0.0, tr * tr / 4 - det));
}

LcdResult lcd_multidim(const CoefficientMultiset& a, const LcdParams& params, const LcdMultidimOptions& options) {
  validate(params);
  const double floor_eig = isotropy_floor(a);
  if (floor_eig < 1)
    throw ValidationError("isotropy condition violated: smallest eigenvalue of sum a_i a_i^T is " +
                          std::to_string(floor_eig) + " < 1");
  if (options.angle_grid < 4) throw ValidationError("angle_grid must be >= 4");
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : a.point_entries()) pts.emplace_back(p.x.get_d(), p.y.get_d());
  LcdParams ray = params;
  if (ray.theta_max <= 0) ray.theta_max = std::sqrt(static_cast<double>(pts.size())) / params.gamma;

  auto along = [&](double phi) {
    std::vector<double> c;
    const double ux = std::cos(phi), uy = std::sin(phi);
    for (const auto& [x, y] : pts) c.push_back(ux * x + uy * y);
    return lcd_1d(c, ray);
  };

  // theta and -theta qualify together, so a half-turn of directions suffices.
  std::vector<std::pair<double, double>> scores;  // (value, angle)
  LcdResult best;
  double best_phi = 0;
  auto consider = [&](double phi) {
    LcdResult r = along(phi);
    const double v = r.finite ? r.lcd : std::numeric_limits<double>::infinity();
    scores.emplace_back(v, phi);
    if (r.finite && (!best.finite || r.lcd < best.lcd)) {
      best = r;
      best_phi = phi;
    }
  };
  const double step = M_PI / options.angle_grid;
  for (unsigned k = 0; k < options.angle_grid; ++k) consider(k * step);

  double width = step;
  for (unsigned round = 0; round < options.refine_rounds; ++round) {
    std::sort(scores.begin(), scores.end());
    std::vector<double> centers;
    for (std::size_t i = 0; i < scores.size() && centers.size() < options.refine_candidates; ++i)
      if (std::isfinite(scores[i].first)) centers.push_back(scores[i].second);
    scores.clear();
    const unsigned sub = 32;
    for (double c : centers)
      for (unsigned j = 0; j <= 2 * sub; ++j) consider(c - width + width * j / sub);
    width /= sub;
  }

  best.theta_max = ray.theta_max;
  if (best.finite) {
    best.witness_direction = {std::cos(best_phi), std::sin(best_phi)};
    best.certificate = "least ray value over the angle grid with local refinement (upper bound on the infimum)";
  } else {
    best.certificate = "no ray within theta_max qualified on the angle grid";
  }
  return best;
}

double rv_smallball_bound(double beta, double alpha, double gamma, double b, double c) {
  return c * beta / (gamma * std::sqrt(b)) + c * std::exp(-2 * b * alpha * alpha);
}

RvCheck rv_smallball_check(const CoefficientMultiset& a, double scale, double beta, const LcdParams& params,
                           const SignDistribution& xi, double c) {
  if (!(scale > 0)) throw ValidationError("scale must be positive");
  std::vector<double> v;
  double norm2 = 0;
  for (const auto& x : a.scalar_entries()) {
    v.push_back(x.get_d() / scale);
    norm2 += v.back() * v.back();
  }
  if (norm2 < 1 - 1e-12) throw ValidationError("hypothesis sum a_i^2 >= 1 fails (sum = " + std::to_string(norm2) + ")");
  RvCheck out;
  out.b = xi.ball_escape_mass().get_d();
  if (!(out.b > 0)) throw ValidationError("hypothesis b > 0 fails: some unit ball carries all of xi's mass");
  LcdResult l = lcd_1d(v, params);
  if (!l.finite) {
    out.lcd = std::numeric_limits<double>::infinity();
  } else {
    out.lcd = l.lcd;
    if (beta < 1 / l.lcd) throw ValidationError("hypothesis beta >= 1/LCD fails (1/LCD = " + std::to_string(1 / l.lcd) + ")");
  }
  out.bound = rv_smallball_bound(beta, params.alpha, params.gamma, out.b, c);
  // Round the radius up to a dyadic rational; a larger radius only inflates
  // the exact reference.
  out.reference_radius = ratio(BigInt(static_cast<long>(std::ceil(beta * scale * 1048576.0))), BigInt(1048576));
  out.exact_reference = ball_probability_1d(a, xi, out.reference_radius).p;
  out.sound = out.bound >= out.exact_reference.get_d();
  return out;
}

RecurrenceMeasure recurrence_set_measure(const std::vector<double>& a, double t, double z, double beta, double gamma,
                                         double alpha, std::size_t cells, double c) {
  if (!(t < alpha / 2)) throw ValidationError("recurrence lemma needs t < alpha / 2");
  if (!(z >= 1)) throw ValidationError("recurrence lemma needs z >= 1");
  if (!(beta > 0) || !(gamma > 0 && gamma < 1)) throw ValidationError("need beta > 0 and gamma in (0, 1)");
  if (cells < 2) throw ValidationError("grid needs at least 2 cells");
  const double s = z / beta;
  auto inside = [&](double theta) {
    double d2 = 0;
    for (double x : a) {
      const double v = s * theta * x;
      const double r = v - std::nearbyint(v);
      d2 += r * r;
    }
    return d2 <= t * t;
  };
  RecurrenceMeasure out;
  out.cells = cells;
  const double h = 2.0 / static_cast<double>(cells);
  std::size_t in = 0, boundary = 0;
  bool left = inside(-1.0);
  for (std::size_t k = 0; k < cells; ++k) {
    const double lo = -1.0 + h * static_cast<double>(k);
    const bool right = inside(lo + h);
    if (inside(lo + h / 2)) ++in;
    if (left != right) ++boundary;
    left = right;
  }
  out.estimate = static_cast<double>(in) * h;
  out.boundary_fraction = out.estimate > 0 ? static_cast<double>(boundary) * h / out.estimate : 0;
  out.resolution_warning = out.boundary_fraction > 0.01;
  out.lemma_bound = c * t * beta / gamma;
  return out;
}

}  // namespace smallball
