#include <cmath>
#include <complex>
#include <map>

#include "smallball/errors.hpp"
#include "smallball/fourier.hpp"

namespace smallball {

namespace {

struct Simpson {
  double value = 0;
  double error = 0;
  bool converged = true;
};

// Adaptive Simpson on [a, b] with Richardson-corrected panels.
template <class F>
void adapt(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth,
           Simpson& acc) {
  const double m = (a + b) / 2, lm = (a + m) / 2, rm = (m + b) / 2;
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double diff = left + right - whole;
  if (std::abs(diff) <= 15 * tol || depth <= 0) {
    if (depth <= 0 && std::abs(diff) > 15 * tol) acc.converged = false;
    acc.value += left + right + diff / 15;
    acc.error += std::abs(diff) / 15;
    return;
  }
  adapt(f, a, m, fa, flm, fm, left, tol / 2, depth - 1, acc);
  adapt(f, m, b, fm, frm, fb, right, tol / 2, depth - 1, acc);
}

}  // namespace

EsseenBound esseen_bound(const CoefficientMultiset& a, const Rational& beta, const SignDistribution& xi,
                         double tolerance) {
  if (beta <= 0) throw ValidationError("beta must be positive");
  const double b = beta.get_d();
  std::vector<double> coef;
  double spread = 0;
  for (const auto& e : a.scalar_entries()) {
    coef.push_back(e.get_d() / b);
    spread += std::abs(e.get_d() / b);
  }
  std::vector<std::pair<double, double>> law;
  double vmax = 0;
  for (const auto& atom : xi.atoms()) {
    law.emplace_back(atom.value.get_d(), atom.prob.get_d());
    vmax = std::max(vmax, std::abs(atom.value.get_d()));
  }
  const bool symmetric_pm1 = xi.kind() == SignKind::bernoulli_pm1;

  auto integrand = [&](double t) {
    double prod = 1;
    for (double c : coef) {
      if (symmetric_pm1) {
        prod *= std::abs(std::cos(t * c));
      } else {
        std::complex<double> phi = 0;
        for (const auto& [v, p] : law) phi += p * std::polar(1.0, t * c * v);
        prod *= std::abs(phi);
      }
    }
    return prod;
  };

  // |phi(-t)| = |phi(t)|, so integrate over [0, 1] and double. Start with
  // panels finer than the fastest oscillation so no lobe is skipped.
  const double freq = spread * std::max(vmax, 1.0);
  const int panels = static_cast<int>(std::min(200000.0, std::max(32.0, std::ceil(4 * freq / M_PI))));
  Simpson acc;
  const double h = 1.0 / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = k * h, hi = lo + h, mid = lo + h / 2;
    const double flo = integrand(lo), fmid = integrand(mid), fhi = integrand(hi);
    const double whole = h / 6 * (flo + 4 * fmid + fhi);
    adapt(integrand, lo, hi, flo, fmid, fhi, whole, tolerance / panels, 40, acc);
  }
  EsseenBound out;
  out.integral = 2 * acc.value;
  out.integral_error = 2 * acc.error + 1e-14 * out.integral;
  if (!acc.converged && out.integral_error > 1e3 * tolerance)
    throw QuadratureError("esseen quadrature did not reach tolerance", out.integral_error);
  out.bound = esseen_constant() * (out.integral + out.integral_error);
  return out;
}

BigInt rl_count(const CoefficientMultiset& a, unsigned l, std::size_t budget) {
  if (l < 1) throw ValidationError("rl_count needs l >= 1");
  const auto& entries = a.scalar_entries();
  // c_v = number of ordered l-tuples with sum v; R_l = sum_v c_v^2.
  std::map<Rational, BigInt> cur{{Rational(0), BigInt(1)}};
  for (unsigned step = 0; step < l; ++step) {
    if (cur.size() > budget / entries.size())
      throw BudgetError("rl_count l-sum table exceeds budget " + std::to_string(budget));
    std::map<Rational, BigInt> next;
    for (const auto& [v, c] : cur)
      for (const auto& e : entries) next[Rational(v + e)] += c;
    cur = std::move(next);
  }
  BigInt r = 0;
  for (const auto& [v, c] : cur) r += c * c;
  return r;
}

double halasz_hierarchy_ratio(const CoefficientMultiset& a, unsigned l, const SignDistribution& xi) {
  const double n = static_cast<double>(a.size());
  const Rational rho = concentration_probability(a, xi).rho;
  const BigInt r = rl_count(a, l);
  return rho.get_d() * std::pow(n, 2.0 * l + 0.5) / r.get_d();
}

XiNorm xi_norm(const Rational& w, const SignDistribution& xi) {
  XiNorm out;
  out.squared = 0;
  for (const auto& d : xi.difference_law()) {
    Rational t = torus_norm(Rational(w * d.value));
    out.squared += d.prob * t * t;
  }
  out.norm = std::sqrt(out.squared.get_d());
  return out;
}

}  // namespace smallball
