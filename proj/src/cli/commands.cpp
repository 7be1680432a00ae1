#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smallball/core.hpp"
#include "smallball/errors.hpp"
#include "smallball/experiments.hpp"
#include "smallball/fourier.hpp"
#include "smallball/gap.hpp"
#include "smallball/lcd.hpp"
#include "smallball/polyforms.hpp"

namespace smallball::cli {

using nlohmann::json;

namespace {

constexpr ParamType kInt = ParamType::integer;
constexpr ParamType kRat = ParamType::rational;
constexpr ParamType kReal = ParamType::real;
constexpr ParamType kText = ParamType::text;

std::string rat(const Rational& r) { return to_string(r); }

json real_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string cell(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

ParamSpec entries_param(const std::string& help = "coefficients, comma or space separated rationals") {
  return {"entries", kText, "", help};
}
ParamSpec xi_param(const std::string& def = "bernoulli") {
  return {"xi", kText, def, "sign law: bernoulli, boolean, lazy:<mu>, general:v@p,..."};
}
ParamSpec seed_param() { return {"seed", kInt, "0", "master seed"}; }
ParamSpec trials_param(const std::string& def) { return {"trials", kInt, def, "Monte Carlo trials"}; }

CoefficientMultiset multiset(const Params& p, int dim = 1) {
  return CoefficientMultiset::parse(p.text("entries"), dim);
}

std::size_t size_param(const Params& p, const std::string& key) {
  const long long v = p.integer(key);
  if (v < 0) throw ValidationError("--" + key + " must be non-negative");
  return static_cast<std::size_t>(v);
}

json mc_json(const McReport& r) {
  json j = {{"mode", r.mode == RunMode::exact ? "exact" : "monte_carlo"},
            {"estimate", r.estimate},
            {"trials", r.trials},
            {"successes", r.successes},
            {"std_error", r.std_error},
            {"master_seed", r.master_seed}};
  if (r.exact) j["exact"] = rat(*r.exact);
  return j;
}

json gap_json(const Gap& q) {
  json gens = json::array();
  for (const auto& g : q.generators) gens.push_back(rat(g));
  return {{"generators", gens},
          {"bounds", q.bounds},
          {"offset", rat(q.offset)},
          {"rank", q.rank()},
          {"volume", to_string(q.volume())},
          {"text", q.describe()}};
}

SymmetricCoefficientMatrix matrix_param(const Params& p) {
  const std::string& text = p.text("matrix");
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    const long long n = parse_integer("matrix", text.substr(colon + 1));
    if (n < 1) throw ValidationError("--matrix size must be positive");
    const auto un = static_cast<std::size_t>(n);
    if (kind == "all-ones") return SymmetricCoefficientMatrix::all_ones(un);
    if (kind == "identity") return SymmetricCoefficientMatrix::identity(un);
    if (kind == "random") return SymmetricCoefficientMatrix::random_pm1(un, p.unsigned_integer("seed"));
    throw ValidationError("--matrix generator must be all-ones:N, identity:N or random:N");
  }
  if (text.empty()) throw ValidationError("--matrix is required");
  return SymmetricCoefficientMatrix::parse(text);
}

Outcome cmd_dist(const Params& p, unsigned) {
  const int dim = static_cast<int>(p.integer("dim"));
  if (dim != 1 && dim != 2) throw ValidationError("--dim must be 1 or 2");
  const auto a = multiset(p, dim);
  const auto xi = SignDistribution::parse(p.text("xi"));
  const auto budget = size_param(p, "atom-budget");
  Outcome out;
  Table t{{"value", "numerator", "denominator"}, {}};
  auto fill = [&](const auto& d) {
    out.result = d.to_json();
    out.result["support_size"] = d.support_size();
    for (std::size_t i = 0; i < d.support_size(); ++i) {
      const Rational pr = d.probability(i);
      t.rows.push_back({to_string(d.atoms()[i].value), to_string(BigInt(pr.get_num())), to_string(BigInt(pr.get_den()))});
    }
  };
  if (dim == 1)
    fill(exact_sign_sum_distribution(a, xi, budget));
  else
    fill(exact_sign_sum_distribution_2d(a, xi, budget));
  out.table = std::move(t);
  return out;
}

Outcome cmd_rho(const Params& p, unsigned) {
  const auto a = multiset(p);
  const auto c = concentration_probability(a, SignDistribution::parse(p.text("xi")), size_param(p, "atom-budget"));
  Outcome out;
  out.result = {{"n", a.size()}, {"rho", rat(c.rho)}, {"rho_decimal", c.rho.get_d()}, {"argmax", rat(c.argmax)}};
  return out;
}

Rational extremal(std::size_t n, unsigned long s) {
  return ratio(largest_binomial_sum(static_cast<unsigned>(n), s), BigInt(1) << static_cast<unsigned>(n));
}

Outcome cmd_ball(const Params& p, unsigned) {
  const auto a = multiset(p);
  const auto xi = SignDistribution::parse(p.text("xi"));
  const Rational r = p.rational("radius");
  if (r < 0) throw ValidationError("--radius must be non-negative");
  const auto b = ball_probability_1d(a, xi, r, size_param(p, "atom-budget"));
  const unsigned long s = floor(r).get_ui() + 1;
  const Rational bound = extremal(a.size(), s);
  bool hypothesis = xi.kind() == SignKind::bernoulli_pm1;
  for (const auto& v : a.scalar_entries()) hypothesis = hypothesis && abs(v) >= 1;
  Outcome out;
  out.result = {{"n", a.size()},         {"radius", rat(r)},      {"p", rat(b.p)},
                {"witness", rat(b.witness)}, {"s", s},            {"extremal_bound", rat(bound)},
                {"hypothesis_holds", hypothesis}, {"within_bound", b.p <= bound}};
  if (hypothesis && b.p > bound) {
    out.soundness_failed = true;
    out.soundness_message = "interval mass " + rat(b.p) + " exceeds S(n,s)/2^n = " + rat(bound);
  }
  return out;
}

Outcome cmd_ball2d(const Params& p, unsigned) {
  const auto a = multiset(p, 2);
  const auto xi = SignDistribution::parse(p.text("xi"));
  const Rational r = p.rational("radius");
  if (r < 0) throw ValidationError("--radius must be non-negative");
  Ball2dLimits lim;
  lim.max_entries = size_param(p, "max-entries");
  lim.pair_budget = size_param(p, "pair-budget");
  lim.atom_budget = size_param(p, "atom-budget");
  const auto b = ball_probability_2d(a, xi, r, lim);
  const unsigned long s = floor(r).get_ui() + 1;
  const Rational bound = extremal(a.size(), s);
  Outcome out;
  out.result = {{"n", a.size()},
                {"radius", rat(r)},
                {"p", rat(b.p)},
                {"witness", to_string(b.witness)},
                {"witness_exact", b.witness_exact},
                {"s", s},
                {"extremal_bound", rat(bound)},
                {"exceeds_extremal", b.p > bound}};
  return out;
}

Outcome cmd_flat(const Params& p, unsigned) {
  const auto a = multiset(p, 2);
  const long long grid = p.integer("angle-grid");
  if (grid < 1) throw ValidationError("--angle-grid must be positive");
  const auto f = flat_direction_search(a, static_cast<unsigned>(grid));
  Outcome out;
  out.result = {{"n", a.size()},
                {"normal", {f.normal_x, f.normal_y}},
                {"angle", f.angle},
                {"offset", rat(f.offset)},
                {"far_count", f.far_count}};
  return out;
}

Outcome cmd_stanley(const Params& p, unsigned) {
  std::vector<unsigned> ns;
  for (long long n : p.integer_list("n")) {
    if (n < 1) throw ValidationError("--n entries must be positive odd integers");
    ns.push_back(static_cast<unsigned>(n));
  }
  const auto rows = stanley_constant_scan(ns, size_param(p, "atom-budget"));
  Outcome out;
  Table t{{"n", "rho", "scaled"}, {}};
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n", r.n}, {"rho", rat(r.rho)}, {"scaled", r.scaled}});
    t.rows.push_back({std::to_string(r.n), rat(r.rho), cell(r.scaled)});
  }
  out.result = {{"rows", arr}, {"limit_constant", std::sqrt(24 / M_PI)}};
  out.table = std::move(t);
  return out;
}

Outcome cmd_esseen(const Params& p, unsigned) {
  const auto a = multiset(p);
  const auto xi = SignDistribution::parse(p.text("xi"));
  const Rational beta = p.rational("beta");
  if (beta <= 0) throw ValidationError("--beta must be positive");
  const auto e = esseen_bound(a, beta, xi, p.real("tolerance"));
  const Rational exact = ball_probability_1d(a, xi, beta).p;
  Outcome out;
  const double ratio_v = e.bound / exact.get_d();
  out.result = {{"bound", e.bound},     {"integral", e.integral}, {"integral_error", e.integral_error},
                {"constant", esseen_constant()}, {"exact", rat(exact)}, {"ratio", ratio_v},
                {"sound", e.bound >= exact.get_d()}};
  out.table = Table{{"bound", "exact", "ratio"}, {{cell(e.bound), rat(exact), cell(ratio_v)}}};
  if (e.bound < exact.get_d()) {
    out.soundness_failed = true;
    out.soundness_message = "Esseen bound below the exact ball probability";
  }
  return out;
}

FpContext fp_context(const Params& p) {
  const auto a = multiset(p);
  std::optional<std::uint64_t> prime;
  if (p.has("p")) prime = p.unsigned_integer("p");
  const std::string& mode = p.text("mode");
  if (mode != "strict" && mode != "illustrative") throw ValidationError("--mode must be strict or illustrative");
  return FpContext::create(a, prime, mode == "strict" ? FpMode::strict : FpMode::illustrative);
}

Outcome cmd_fp_bound(const Params& p, unsigned workers) {
  const auto ctx = fp_context(p);
  const auto a = multiset(p);
  const double bound = fp_exponential_bound(ctx, workers);
  const Rational rho = concentration_probability(a, SignDistribution::bernoulli()).rho;
  const long long target_raw = p.integer("target");
  const auto pm = static_cast<long long>(ctx.p());
  const auto target = static_cast<std::uint64_t>(((target_raw % pm) + pm) % pm);
  const auto id = fp_fourier_identity(ctx, target, workers);
  const bool strict = ctx.mode() == FpMode::strict;
  Outcome out;
  const double ratio_v = bound / rho.get_d();
  out.result = {{"p", ctx.p()},
                {"mode", strict ? "strict" : "illustrative"},
                {"bound", bound},
                {"exact", rat(rho)},
                {"ratio", ratio_v},
                {"sound", !strict || bound >= rho.get_d()},
                {"identity",
                 {{"target", target}, {"real", id.real}, {"imag", id.imag}, {"exact", rat(id.exact)},
                  {"abs_error", id.abs_error()}}}};
  out.table = Table{{"bound", "exact", "ratio"}, {{cell(bound), rat(rho), cell(ratio_v)}}};
  if (strict && bound < rho.get_d()) {
    out.soundness_failed = true;
    out.soundness_message = "F_p exponential bound below rho";
  }
  return out;
}

Outcome cmd_levels(const Params& p, unsigned workers) {
  const auto ctx = fp_context(p);
  const long long m_max = p.integer("m-max");
  if (m_max < 0) throw ValidationError("--m-max must be non-negative");
  const auto rep = level_and_dual_sets(ctx, static_cast<unsigned>(m_max), p.unsigned_integer("scan-budget"), workers);
  Outcome out;
  Table t{{"m", "level_size", "dual_size", "dual_bound_holds"}, {}};
  json rows = json::array();
  bool all = true;
  for (const auto& r : rep.rows) {
    rows.push_back({{"m", r.m}, {"level_size", r.level_size}, {"dual_size", r.dual_size},
                    {"dual_bound_holds", r.dual_bound_holds}});
    t.rows.push_back({std::to_string(r.m), std::to_string(r.level_size), std::to_string(r.dual_size),
                      r.dual_bound_holds ? "true" : "false"});
    all = all && r.dual_bound_holds;
  }
  out.result = {{"p", rep.p},
                {"rows", rows},
                {"rho_reference", rat(rep.rho_reference)},
                {"rho_checked", rep.rho_checked},
                {"large_m", rep.large_m ? json(*rep.large_m) : json(nullptr)}};
  out.table = std::move(t);
  if (!all) {
    out.soundness_failed = true;
    out.soundness_message = "|S*_m| |S_m| exceeds 8p for some m";
  }
  return out;
}

Outcome cmd_rl(const Params& p, unsigned) {
  const auto a = multiset(p);
  const long long l = p.integer("l");
  if (l < 1) throw ValidationError("--l must be positive");
  const auto ul = static_cast<unsigned>(l);
  const BigInt count = rl_count(a, ul, p.unsigned_integer("budget"));
  Outcome out;
  out.result = {{"n", a.size()}, {"l", l}, {"R_l", to_string(count)},
                {"ratio", real_or_null(halasz_hierarchy_ratio(a, ul, SignDistribution::parse(p.text("xi"))))}};
  return out;
}

LcdParams lcd_params(const Params& p) {
  LcdParams lp;
  lp.alpha = p.real("alpha");
  lp.gamma = p.real("gamma");
  lp.theta_max = p.real("theta-max");
  return lp;
}

json lcd_json(const LcdResult& r) {
  return {{"finite", r.finite},
          {"lcd", real_or_null(r.lcd)},
          {"witness_theta", real_or_null(r.witness_theta)},
          {"witness_direction", r.witness_direction},
          {"witness_integers", r.witness_integers},
          {"achieved_distance", real_or_null(r.achieved_distance)},
          {"slack", real_or_null(r.slack)},
          {"theta_max", real_or_null(r.theta_max)},
          {"certificate", r.certificate}};
}

Outcome cmd_lcd(const Params& p, unsigned) {
  const int dim = static_cast<int>(p.integer("dim"));
  if (dim != 1 && dim != 2) throw ValidationError("--dim must be 1 or 2");
  const auto a = multiset(p, dim);
  const LcdParams lp = lcd_params(p);
  Outcome out;
  if (dim == 1) {
    out.result = lcd_json(lcd_1d(a, lp));
  } else {
    LcdMultidimOptions opt;
    const long long res = p.integer("resolution");
    if (res < 8) throw ValidationError("--resolution must be at least 8");
    opt.angle_grid = static_cast<unsigned>(res);
    out.result = lcd_json(lcd_multidim(a, lp, opt));
  }
  out.result["dimension"] = dim;
  return out;
}

Outcome cmd_rv_bound(const Params& p, unsigned) {
  const auto a = multiset(p);
  const auto chk = rv_smallball_check(a, p.real("scale"), p.real("beta"), lcd_params(p),
                                      SignDistribution::parse(p.text("xi")), p.real("c"));
  Outcome out;
  out.result = {{"lcd", real_or_null(chk.lcd)},
                {"b", chk.b},
                {"bound", chk.bound},
                {"reference_radius", rat(chk.reference_radius)},
                {"exact", rat(chk.exact_reference)},
                {"sound", chk.sound}};
  if (!chk.sound) {
    out.soundness_failed = true;
    out.soundness_message = "LCD small-ball bound below the exact reference";
  }
  return out;
}

Outcome cmd_recurrence(const Params& p, unsigned) {
  const auto entries = multiset(p);
  std::vector<double> a;
  for (const auto& r : entries.scalar_entries()) a.push_back(r.get_d());
  const auto m = recurrence_set_measure(a, p.real("t"), p.real("z"), p.real("beta"), p.real("gamma"), p.real("alpha"),
                                        size_param(p, "cells"), p.real("c"));
  Outcome out;
  const bool sound = m.estimate <= m.lemma_bound;
  out.result = {{"estimate", m.estimate},
                {"lemma_bound", m.lemma_bound},
                {"boundary_fraction", m.boundary_fraction},
                {"resolution_warning", m.resolution_warning},
                {"cells", m.cells},
                {"sound", sound}};
  if (!sound) {
    out.soundness_failed = true;
    out.soundness_message = "recurrence-set measure exceeds the lemma bound";
  }
  return out;
}

Outcome cmd_gap_fit(const Params& p, unsigned) {
  const auto a = multiset(p);
  GapFitOptions opt;
  const long long rank = p.integer("max-rank");
  if (rank < 1 || rank > 3) throw ValidationError("--max-rank must be 1, 2 or 3");
  opt.max_rank = static_cast<unsigned>(rank);
  opt.budget = p.unsigned_integer("budget");
  const auto c = gap_fit(a, p.rational("epsilon"), opt);
  Outcome out;
  out.result = {{"gap", gap_json(c.gap)},
                {"covered", c.covered},
                {"covered_indices", c.covered_indices},
                {"epsilon_achieved", rat(c.epsilon_achieved)},
                {"rho", rat(c.rho)},
                {"quality", c.quality},
                {"fallback", c.fallback},
                {"search_truncated", c.search_truncated},
                {"candidates_tried", c.candidates_tried}};
  return out;
}

Gap gap_params(const Params& p) {
  return make_gap(p.rational_list("generators"), p.integer_list("bounds"), p.rational("offset"));
}

Outcome cmd_gap_forward(const Params& p, unsigned) {
  const Gap q = gap_params(p);
  const long long n = p.integer("n");
  if (n < 1) throw ValidationError("--n must be positive");
  const auto s = gap_forward_sample(q, static_cast<std::size_t>(n), p.unsigned_integer("seed"),
                                    p.unsigned_integer("budget"));
  Outcome out;
  out.result = {{"gap", gap_json(q)}, {"entries", s.a.to_text()}, {"rho", rat(s.rho)}, {"quality", s.quality}};
  return out;
}

Outcome cmd_census(const Params& p, unsigned workers) {
  const long long n = p.integer("n"), m = p.integer("m");
  if (n < 1 || m < 1) throw ValidationError("--n and --m must be positive");
  const auto res = structured_multiset_census(static_cast<unsigned>(n), static_cast<unsigned>(m),
                                              p.rational_list("rho-grid"), workers, p.unsigned_integer("budget"));
  Outcome out;
  Table t{{"rho0", "count", "bound_shape"}, {}};
  json rows = json::array();
  double fitted = 0;
  bool monotone = true;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    rows.push_back({{"rho0", rat(r.rho0)}, {"count", r.count}, {"bound_shape", real_or_null(r.bound_shape)}});
    t.rows.push_back({rat(r.rho0), std::to_string(r.count), cell(r.bound_shape)});
    if (r.rho0 > 0 && std::isfinite(r.bound_shape)) fitted = std::max(fitted, r.count / r.bound_shape);
    for (std::size_t j = 0; j < i; ++j) {
      const auto& o = res.rows[j];
      if ((o.rho0 < r.rho0 && o.count < r.count) || (o.rho0 > r.rho0 && o.count > r.count)) monotone = false;
    }
  }
  out.result = {{"n", n}, {"m", m}, {"total", res.total}, {"rows", rows}, {"fitted_constant", fitted},
                {"monotone", monotone}};
  out.table = std::move(t);
  return out;
}

Outcome cmd_geo_rho(const Params& p, unsigned) {
  const auto spec = AlgebraicSpec::parse(p.text("x"));
  const long long n = p.integer("n");
  if (n < 0) throw ValidationError("--n must be non-negative");
  const Rational rho = geometric_progression_rho(spec, static_cast<unsigned>(n), size_param(p, "atom-budget"));
  Outcome out;
  out.result = {{"x", spec.describe()}, {"n", n}, {"rho", rat(rho)}, {"rho_decimal", rho.get_d()}};
  return out;
}

Outcome cmd_quad_rho(const Params& p, unsigned workers) {
  const auto m = matrix_param(p);
  const auto q = quadratic_concentration(m, SignDistribution::parse(p.text("xi")), workers,
                                         p.unsigned_integer("budget"));
  Outcome out;
  out.result = {{"n", m.n()},
                {"rho", rat(q.rho)},
                {"argmax", rat(q.argmax)},
                {"distinct_values", q.distinct_values},
                {"scaled", q.rho.get_d() * std::sqrt(static_cast<double>(m.n()))}};
  return out;
}

Outcome cmd_decouple(const Params& p, unsigned) {
  const auto m = matrix_param(p);
  std::vector<std::size_t> first;
  for (long long i : p.integer_list("first")) {
    if (i < 1 || static_cast<std::size_t>(i) > m.n()) throw ValidationError("--first indices are 1-based and at most n");
    first.push_back(static_cast<std::size_t>(i - 1));
  }
  const auto d = decoupling_check(m, first, p.rational("x"));
  Outcome out;
  out.result = {{"n", m.n()}, {"lhs", rat(d.lhs)}, {"joint", rat(d.joint)}, {"rhs", d.rhs}, {"holds", d.holds}};
  if (!d.holds) {
    out.soundness_failed = true;
    out.soundness_message = "lhs^4 exceeds the four-copy joint probability";
  }
  return out;
}

Outcome cmd_quad_gen(const Params& p, unsigned workers) {
  QuadGenParams qp;
  qp.kind = parse_quad_kind(p.text("kind"));
  const long long n = p.integer("n");
  if (n < 1) throw ValidationError("--n must be positive");
  qp.n = static_cast<std::size_t>(n);
  qp.pool = make_gap(p.rational_list("pool-generators"), p.integer_list("pool-bounds"));
  if (p.has("k")) qp.k = p.integer_list("k");
  if (p.has("b")) qp.b = p.integer_list("b");
  qp.b_range = p.integer("b-range");
  const auto r = structured_quadratic_generator(qp, p.unsigned_integer("seed"), workers);
  Outcome out;
  const bool holds = r.rho_q >= r.predicted_floor;
  out.result = {{"matrix", r.matrix.to_text()},     {"rho_q", rat(r.rho_q)},
                {"predicted_floor", rat(r.predicted_floor)}, {"floor_exponent", r.floor_exponent},
                {"floor_holds", holds}};
  if (!holds) {
    out.soundness_failed = true;
    out.soundness_message = "rho_q below the predicted floor";
  }
  return out;
}

MultilinearPolynomial poly_param(const Params& p) {
  const long long n = p.integer("n");
  if (n < 0) throw ValidationError("--n must be non-negative");
  return MultilinearPolynomial::parse(p.text("poly"), static_cast<std::size_t>(n));
}

Outcome cmd_multi_rho(const Params& p, unsigned workers) {
  const auto poly = poly_param(p);
  const auto r = multilinear_concentration(poly, SignDistribution::parse(p.text("xi")), p.rational("x"), workers,
                                           p.real("c"));
  const long long threshold = p.integer("r-threshold");
  json family = json::array();
  for (const auto& s : r.family) {
    std::vector<unsigned> one_based;
    for (unsigned i : s) one_based.push_back(i + 1);
    family.push_back(one_based);
  }
  Outcome out;
  out.result = {{"n", poly.n()},
                {"prob", rat(r.prob)},
                {"r", r.r},
                {"k", r.k},
                {"b_k", r.b_k},
                {"bound", real_or_null(r.bound)},
                {"weak_exponent", r.weak_exponent},
                {"weak_bound", real_or_null(r.weak_bound)},
                {"sound", r.sound},
                {"family", family}};
  if (static_cast<long long>(r.r) >= threshold && !r.sound) {
    out.soundness_failed = true;
    out.soundness_message = "P(p = x) exceeds C r^{-b_k}";
  }
  return out;
}

Outcome cmd_parity_cor(const Params& p, unsigned workers) {
  const auto poly = poly_param(p);
  const Rational cor = parity_correlation(poly, workers);
  Outcome out;
  out.result = {{"n", poly.n()}, {"degree", poly.degree()}, {"cor", rat(cor)}, {"cor_decimal", cor.get_d()}};
  return out;
}

Outcome cmd_singularity(const Params& p, unsigned workers) {
  const Ensemble e = parse_ensemble(p.text("ensemble"));
  const long long n = p.integer("n");
  if (n < 1) throw ValidationError("--n must be at least 1");
  const std::string& mode = p.text("mode");
  if (mode != "exact" && mode != "mc") throw ValidationError("--mode must be exact or mc");
  const auto r = singularity_probability(e, static_cast<std::size_t>(n), mode == "exact" ? RunMode::exact : RunMode::monte_carlo,
                                         p.unsigned_integer("trials"), p.unsigned_integer("seed"), workers);
  Outcome out;
  out.result = mc_json(r);
  out.result["ensemble"] = to_string(e);
  out.result["n"] = n;
  return out;
}

Outcome cmd_universal(const Params& p, unsigned workers) {
  const long long d = p.integer("d"), n = p.integer("n"), k = p.integer("k");
  if (d < 1 || n < 1 || k < 0) throw ValidationError("--d and --n must be positive, --k non-negative");
  const auto r = k_universality_check(static_cast<std::size_t>(d), static_cast<std::size_t>(n),
                                      static_cast<std::size_t>(k), p.unsigned_integer("trials"),
                                      p.unsigned_integer("seed"), workers);
  Outcome out;
  out.result = {{"d", d},
                {"n", n},
                {"k", k},
                {"failures", mc_json(r.failures)},
                {"benchmark", r.benchmark},
                {"closed_form", r.closed_form ? json(*r.closed_form) : json(nullptr)}};
  return out;
}

Outcome cmd_lsv(const Params& p, unsigned workers) {
  const Ensemble e = parse_ensemble(p.text("ensemble"));
  const long long n = p.integer("n");
  LsvOptions opt;
  opt.tolerance = p.real("tolerance");
  const long long iters = p.integer("max-iterations");
  if (iters < 1) throw ValidationError("--max-iterations must be positive");
  opt.max_iterations = static_cast<unsigned>(iters);
  if (n < 1) throw ValidationError("--n must be at least 1");
  const auto s = least_singular_value_mc(e, static_cast<std::size_t>(n), p.unsigned_integer("trials"),
                                         p.unsigned_integer("seed"), workers, opt);
  json quantiles = json::object();
  for (double q : {0.1, 0.25, 0.5, 0.75, 0.9}) quantiles[cell(q)] = real_or_null(s.quantile(q));
  json cdf = json::array();
  for (double t : p.real_list("t"))
    cdf.push_back({{"t", t}, {"empirical", real_or_null(s.cdf(t))}, {"edelman", edelman_cdf(t)}});
  Outcome out;
  out.result = {{"ensemble", to_string(e)}, {"n", n},           {"trials", s.scaled.size()}, {"master_seed", s.master_seed},
                {"fallbacks", s.fallbacks}, {"quantiles", quantiles}, {"cdf", cdf}};
  Table t{{"trial", "sigma_min_scaled"}, {}};
  for (std::size_t i = 0; i < s.by_trial.size(); ++i) t.rows.push_back({std::to_string(i), cell(s.by_trial[i])});
  out.table = std::move(t);
  return out;
}

Outcome cmd_edelman(const Params& p, unsigned) {
  Outcome out;
  Table t{{"t", "cdf"}, {}};
  json rows = json::array();
  for (double x : p.real_list("t")) {
    const double c = edelman_cdf(x);
    const double series = x - x * x * x / 3;
    rows.push_back({{"t", x}, {"cdf", c}, {"series", series},
                    {"remainder_over_t4", x > 0 ? json((c - series) / std::pow(x, 4)) : json(nullptr)}});
    t.rows.push_back({cell(x), cell(c)});
  }
  out.result = {{"rows", rows}};
  out.table = std::move(t);
  return out;
}

Outcome cmd_common_roots(const Params& p, unsigned workers) {
  const long long n = p.integer("n");
  if (n < 1) throw ValidationError("--n must be at least 1");
  const auto r = common_root_probability(static_cast<std::size_t>(n), p.unsigned_integer("trials"),
                                         p.unsigned_integer("seed"), workers);
  Outcome out;
  out.result = {{"n", n},
                {"mc", mc_json(r.mc)},
                {"channel_one", rat(r.channel_one)},
                {"channel_pm1_union", rat(r.channel_pm1_union)},
                {"n_times_estimate", static_cast<double>(n) * r.mc.estimate}};
  return out;
}

std::vector<Command> build() {
  const std::string budget = std::to_string(kDefaultAtomBudget);
  const ParamSpec atom_budget{"atom-budget", kInt, budget, "cap on distribution support size"};
  const ParamSpec alpha{"alpha", kReal, "0.5", "LCD alpha"};
  const ParamSpec gamma{"gamma", kReal, "0.5", "LCD gamma"};
  const ParamSpec theta_max{"theta-max", kReal, "0", "LCD scan ceiling (0: sqrt(n)/gamma)"};
  const ParamSpec fp_p{"p", kInt, "", "prime modulus (default: smallest valid)"};
  const ParamSpec fp_mode{"mode", kText, "strict", "strict or illustrative"};
  const ParamSpec matrix{"matrix", kText, "", "rows split by ';', entries by ','; or all-ones:N, identity:N, random:N"};
  const ParamSpec poly{"poly", kText, "", "terms 'coef: i1 i2 ...' separated by ';' (1-based)"};
  const ParamSpec poly_n{"n", kInt, "0", "number of variables (0: largest index)"};
  const ParamSpec ensemble{"ensemble", kText, "bernoulli", "bernoulli, symmetric or gaussian"};

  return {
      {"dist", "exact law of a signed sum", {entries_param(), {"dim", kInt, "1", "1 or 2"}, xi_param(), atom_budget},
       false, cmd_dist},
      {"rho", "concentration probability rho(A)", {entries_param(), xi_param(), atom_budget}, false, cmd_rho},
      {"ball", "largest closed-interval mass", {entries_param(), xi_param(), {"radius", kRat, "1", "radius R"}, atom_budget},
       false, cmd_ball},
      {"ball2d", "largest closed-disk mass in the plane",
       {entries_param("2-D points 'x;y', comma separated"), xi_param(), {"radius", kRat, "1", "radius R"},
        {"max-entries", kInt, "22", "entry limit"}, {"pair-budget", kInt, "50000", "candidate-center pair cap"}, atom_budget},
       false, cmd_ball2d},
      {"flat", "line leaving the fewest far entries",
       {entries_param("2-D points 'x;y', comma separated"), {"angle-grid", kInt, "3600", "directions scanned"}}, false,
       cmd_flat},
      {"stanley", "rho of symmetric progressions", {{"n", kText, "3,5,7,9,11", "odd sizes, comma separated"}, atom_budget},
       false, cmd_stanley},
      {"esseen", "Esseen upper bound vs exact ball probability",
       {entries_param(), xi_param(), {"beta", kRat, "1", "ball radius"}, {"tolerance", kReal, "1e-10", "quadrature tolerance"}},
       false, cmd_esseen},
      {"fp-bound", "F_p exponential bound and Fourier identity",
       {entries_param("integer coefficients"), fp_p, fp_mode, {"target", kInt, "0", "residue for the identity"}}, false,
       cmd_fp_bound},
      {"levels", "level sets and dual sets over F_p",
       {entries_param("integer coefficients"), fp_p, fp_mode, {"m-max", kInt, "4", "largest level"},
        {"scan-budget", kInt, "4000000000", "cap on scanned pairs"}},
       false, cmd_levels},
      {"rl", "additive energy count R_l", {entries_param("integer coefficients"), {"l", kInt, "2", "tuple half-length"},
                                          {"budget", kInt, "100000000", "enumeration cap"}, xi_param()},
       false, cmd_rl},
      {"lcd", "least common denominator", {entries_param(), {"dim", kInt, "1", "1 or 2"}, alpha, gamma, theta_max,
                                           {"resolution", kInt, "720", "angle grid for dim 2"}},
       false, cmd_lcd},
      {"rv-bound", "LCD small-ball bound vs exact value",
       {entries_param(), {"scale", kReal, "1", "coefficients are divided by this"}, {"beta", kReal, "", "ball radius"},
        alpha, gamma, theta_max, xi_param(), {"c", kReal, "2", "bound constant"}},
       false, cmd_rv_bound},
      {"recurrence", "recurrence-set measure vs lemma bound",
       {entries_param(), {"t", kReal, "", "distance threshold"}, {"z", kReal, "1", "scale z"}, {"beta", kReal, "1", "beta"},
        gamma, alpha, {"cells", kInt, "200000", "grid cells"}, {"c", kReal, "12", "lemma constant"}},
       false, cmd_recurrence},
      {"gap-fit", "smallest covering proper GAP",
       {entries_param(), {"epsilon", kRat, "0", "fraction of entries allowed outside"},
        {"max-rank", kInt, "2", "1, 2 or 3"}, {"budget", kInt, "2000000", "candidate cap"}},
       false, cmd_gap_fit},
      {"gap-forward", "sample entries from a GAP",
       {{"generators", kText, "", "generators, comma separated"}, {"bounds", kText, "", "box half-widths"},
        {"offset", kRat, "0", "offset g0"}, {"n", kInt, "", "entries to draw"}, seed_param(),
        {"budget", kInt, "2000000", "materialization cap"}},
       true, cmd_gap_forward},
      {"census", "count structured multisets by rho",
       {{"n", kInt, "", "multiset size"}, {"m", kInt, "", "entries in [-M, M] \\ {0}"},
        {"rho-grid", kText, "1/2,1/4,1/8,1/16,1/32", "thresholds, comma separated"},
        {"budget", kInt, "5000000", "multiset cap"}},
       false, cmd_census},
      {"geo-rho", "rho of a geometric progression",
       {{"x", kText, "", "rational, golden, quadratic:b,c or poly:1,c1[,c2]"}, {"n", kInt, "", "top exponent"}, atom_budget},
       false, cmd_geo_rho},
      {"quad-rho", "quadratic concentration rho_q",
       {matrix, xi_param(), seed_param(), {"budget", kInt, std::to_string(1ULL << 26), "outcome cap"}}, true, cmd_quad_rho},
      {"decouple", "decoupling inequality check",
       {matrix, {"first", kText, "", "indices of U1, 1-based"}, {"x", kRat, "0", "target"}, seed_param()}, true,
       cmd_decouple},
      {"quad-gen", "structured quadratic forms",
       {{"kind", kText, "gap", "gap, lowrank or mixed"}, {"n", kInt, "10", "size"},
        {"pool-generators", kText, "1", "GAP generators for entries"}, {"pool-bounds", kText, "3", "GAP bounds"},
        {"k", kText, "", "k vector (default alternating +-1)"}, {"b", kText, "", "b vector (default random)"},
        {"b-range", kInt, "3", "random b range"}, seed_param()},
       true, cmd_quad_gen},
      {"multi-rho", "multilinear concentration",
       {poly, poly_n, xi_param("boolean"), {"x", kRat, "0", "target"}, {"c", kReal, "1", "bound constant"},
        {"r-threshold", kInt, "1", "soundness applies when r is at least this"}},
       false, cmd_multi_rho},
      {"parity-cor", "correlation with parity", {poly, poly_n}, false, cmd_parity_cor},
      {"singularity", "singularity probability of sign matrices",
       {ensemble, {"n", kInt, "", "size"}, {"mode", kText, "mc", "exact or mc"}, trials_param("10000"), seed_param()},
       true, cmd_singularity},
      {"universal", "k-universality failure rate",
       {{"d", kInt, "", "vectors"}, {"n", kInt, "", "dimension"}, {"k", kInt, "", "pattern width"},
        trials_param("10000"), seed_param()},
       true, cmd_universal},
      {"lsv", "least singular value distribution",
       {{"ensemble", kText, "gaussian", "bernoulli, symmetric or gaussian"}, {"n", kInt, "", "size"},
        trials_param("1000"), seed_param(), {"tolerance", kReal, "1e-10", "inverse iteration tolerance"},
        {"max-iterations", kInt, "2000", "iterations before the SVD fallback"},
        {"t", kText, "0.25,0.5,1,2", "CDF evaluation points"}},
       true, cmd_lsv},
      {"edelman", "limiting least singular value law", {{"t", kText, "0.025,0.05,0.1,0.5,1,2", "points"}}, false,
       cmd_edelman},
      {"common-roots", "common roots of random sign polynomials",
       {{"n", kInt, "", "degree"}, trials_param("100000"), seed_param()}, true, cmd_common_roots},
  };
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void flatten_into(const json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten_into(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten_into(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else if (j.is_null()) {
    out.emplace_back(prefix, "");
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all = build();
  return all;
}

const Command* find_command(const std::string& name) {
  for (const auto& c : commands())
    if (c.name == name) return &c;
  return nullptr;
}

std::string render_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cells[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

std::vector<std::pair<std::string, std::string>> flatten(const json& j) {
  std::vector<std::pair<std::string, std::string>> out;
  flatten_into(j, "", out);
  return out;
}

Table flatten_to_table(const json& j) {
  Table t{{"key", "value"}, {}};
  for (auto& [k, v] : flatten(j)) t.rows.push_back({k, v});
  return t;
}

}  // namespace smallball::cli
