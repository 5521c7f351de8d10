#include "nplab/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nplab/functionals.hpp"
#include "nplab/parallel.hpp"

namespace nplab {

namespace {

std::string describe(const InequalitySpec& s) {
  return "p = " + std::to_string(s.p) + ", d = " + std::to_string(s.d);
}

// x^e with 0^0 = 1.
double power(double x, const Rational& e) {
  if (e.num() == 0) return 1.0;
  if (e.den() == 1 && e.num() > 0 && e.num() <= 8) {
    double r = 1.0;
    for (std::int64_t k = 0; k < e.num(); ++k) r *= x;
    return r;
  }
  return std::pow(x, e.to_double());
}

}  // namespace

bool InequalitySpec::valid_for_gni() const noexcept {
  if (p < 2 || d < 2) return false;
  return (d - 2) * p <= 2 * d;
}

bool InequalitySpec::valid_for_lsi() const noexcept {
  return valid_for_gni() && p >= 3 && d <= 6;
}

void InequalitySpec::require_gni() const {
  if (valid_for_gni()) return;
  std::ostringstream msg;
  msg << "invalid (p, d) = (" << p << ", " << d << "): need integers p >= 2, d >= 2";
  if (d > 2) msg << " and p <= 2d/(d-2) = " << Rational(2 * d, d - 2);
  throw InvalidSpec(msg.str());
}

void InequalitySpec::require_lsi() const {
  if (valid_for_lsi()) return;
  std::ostringstream msg;
  msg << "invalid (p, d) = (" << p << ", " << d
      << ") for the log-Sobolev inequality: need 3 <= p, 2 <= d <= 6";
  if (d > 2) msg << " and p <= 2d/(d-2) = " << Rational(2 * d, d - 2);
  throw InvalidSpec(msg.str());
}

std::string to_string(GniLabel label) {
  switch (label) {
    case GniLabel::SharpAdjacentA: return "sharp-adjacent-A";
    case GniLabel::MixedB: return "mixed-B";
    case GniLabel::SumK: return "sum-k";
    case GniLabel::PoincareTail: return "poincare-tail";
  }
  return "unknown";
}

std::string GniTerm::name() const {
  return label == GniLabel::SumK ? "sum-k(" + std::to_string(k) + ")" : to_string(label);
}

void check_gni_term(const GniTerm& t, int p) {
  const Rational zero(0);
  if (t.alpha < zero || t.beta < zero || t.gamma < zero) {
    throw InvalidSpec("GNI term " + t.name() + " has a negative exponent");
  }
  if (!(t.alpha + t.beta + t.gamma == Rational(p))) {
    throw InvalidSpec("GNI term " + t.name() + ": alpha + beta + gamma != p");
  }
  if (t.beta + t.gamma < Rational(2)) {
    throw InvalidSpec("GNI term " + t.name() + ": beta + gamma < 2");
  }
}

std::vector<GniTerm> gni_exponent_table(const InequalitySpec& spec) {
  spec.require_gni();
  const std::int64_t p = spec.p;
  const std::int64_t d = spec.d;
  std::vector<GniTerm> table;
  table.push_back({Rational(0), Rational(2 * d + 2 * p - p * d, 2), Rational(d * (p - 2), 2),
                   GniLabel::SharpAdjacentA});
  table.push_back({Rational(p - 2), Rational(2 * d + 2 * p - d * p, p), Rational(d * (p - 2), p),
                   GniLabel::MixedB});
  for (std::int64_t k = 3; k <= p - 1; ++k) {
    table.push_back({Rational(k - 2), Rational(p - k + 2) - Rational(d * (p - k), 2),
                     Rational(d * (p - k), 2), GniLabel::SumK, static_cast<int>(k)});
  }
  table.push_back({Rational(p - 2), Rational(0), Rational(2), GniLabel::PoincareTail});
  for (const GniTerm& t : table) check_gni_term(t, spec.p);
  return table;
}

GniSides gni_sides(const Field& q, const InequalitySpec& spec, double C) {
  spec.require_gni();
  if (spec.d != 2) {
    throw InvalidSpec("gni_sides: field evaluation needs d = 2 (" + describe(spec) + ")");
  }
  require_nonnegative(q, "gni_sides");
  const double qbar = average(q);
  const double lhs = lp_power(q, spec.p);
  const double sharp = qbar * qbar * lp_power(q, spec.p - 2);
  const double dev = lp_norm(centered(q), 2.0);
  const double grad = h1_seminorm(q);
  double corrector = 0.0;
  for (const GniTerm& t : gni_exponent_table(spec)) {
    corrector += power(qbar, t.alpha) * power(dev, t.beta) * power(grad, t.gamma);
  }
  const double ratio = corrector > 0.0 ? (lhs - sharp) / corrector : 0.0;
  return {lhs, sharp, corrector, ratio, sharp + C * corrector - lhs};
}

LsiSides lsi_sides(const Field& g, const InequalitySpec& spec, double A_p) {
  spec.require_lsi();
  if (spec.d != 2) {
    throw InvalidSpec("lsi_sides: field evaluation needs d = 2 (" + describe(spec) + ")");
  }
  const double lhs = relative_entropy(g);
  const double gbar = average(g);
  const double rhs_core =
      std::pow(gbar, static_cast<double>(spec.p - 4) / (spec.p - 2)) * power_fisher(g, spec.p);
  double ratio = 0.0;
  if (rhs_core > 0.0) {
    ratio = lhs / rhs_core;
  } else if (lhs > 0.0) {
    throw DegenerateMember("lsi_sides: positive entropy with vanishing gradient term");
  }
  return {lhs, rhs_core, A_p * rhs_core, ratio};
}

LsiIntermediate lsi_intermediate_checks(const Field& g, const InequalitySpec& spec) {
  spec.require_lsi();
  const double p = spec.p;
  const double entropy = relative_entropy(g);
  const double gbar = average(g);
  const double area = g.grid().area();
  const Field q(g.grid(), std::pow(area, -1.0 / p) * (g.values() / gbar).pow(1.0 / (p - 2.0)));

  const double lp_p = lp_power(q, p);
  const double jensen = 0.5 * (p - 2.0) * lp_power(g, 1.0) * std::log(lp_p) - entropy;
  const double qbar = average(q);
  const double holder = std::pow(area, -2.0 / p) - qbar * qbar;
  const double target = std::pow(area, 2.0 / p);
  const double identity = std::abs(lp_power(q, p - 2.0) - target) / target;
  return {jensen, holder, identity};
}

namespace {

double lemma_ratio(const std::vector<std::pair<double, double>>& coeffs, double x) {
  double f = 0.0;
  double df = 0.0;
  for (const auto& [c, a] : coeffs) {
    if (c == 0.0) continue;
    f += c * std::pow(x, a);
    df += a == 1.0 ? c : c * a * std::pow(x, a - 1.0);
  }
  return df / (1.0 + f);
}

}  // namespace

double log_lemma_constant(const std::vector<std::pair<double, double>>& coeffs) {
  double csum = 0.0;
  double amax = 1.0;
  for (const auto& [c, a] : coeffs) {
    if (!(a >= 1.0) || !std::isfinite(a)) {
      throw InvalidExponent("log_lemma_constant: exponents must be >= 1 (got " + std::to_string(a) + ")");
    }
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw ValidationError("log_lemma_constant: coefficients must be >= 0");
    }
    csum += c;
    amax = std::max(amax, a);
  }
  if (csum == 0.0) return 0.0;

  constexpr int kSamples = 100000;
  constexpr double kDecades = 12.0;
  double x_end = 1.0 + csum;
  double best = lemma_ratio(coeffs, 0.0);
  double best_x = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  for (int pass = 0; pass < 64; ++pass) {
    double prev = 0.0;
    for (int k = 0; k < kSamples; ++k) {
      const double x = x_end * std::pow(10.0, -kDecades + kDecades * k / (kSamples - 1));
      const double r = lemma_ratio(coeffs, x);
      if (r > best) {
        best = r;
        best_x = x;
        lo = prev;
        hi = k + 1 < kSamples
                 ? x_end * std::pow(10.0, -kDecades + kDecades * (k + 1) / (kSamples - 1))
                 : x;
      }
      prev = x;
    }
    // Past x_end the ratio is at most amax / x_end.
    if (amax / x_end <= best) break;
    x_end = amax / best * (1.0 + 1e-9);
  }

  if (best_x > 0.0 && hi > lo) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * b; ++it) {
      if (lemma_ratio(coeffs, c) > lemma_ratio(coeffs, d)) {
        b = d;
      } else {
        a = c;
      }
      c = b - inv_phi * (b - a);
      d = a + inv_phi * (b - a);
    }
    best = std::max(best, lemma_ratio(coeffs, 0.5 * (a + b)));
  }
  return std::max(best, amax / x_end);
}

double log_lemma_worst(const std::vector<std::pair<double, double>>& coeffs, double A,
                       const std::vector<double>& xs) {
  double worst = -std::numeric_limits<double>::infinity();
  for (double x : xs) {
    double f = 0.0;
    for (const auto& [c, a] : coeffs) f += c * (a == 1.0 ? x : std::pow(x, a));
    worst = std::max(worst, std::log1p(f) - A * x);
  }
  return worst;
}

namespace {

struct MemberEval {
  double lhs;
  double base;  ///< sharp term (GNI) or 0 (LSI)
  double core;  ///< corrector (GNI) or rhs_core (LSI)
};

std::vector<MemberEval> evaluate_corpus(const std::vector<Field>& corpus, const InequalitySpec& spec,
                                        InequalityKind which) {
  if (corpus.empty()) throw EmptyCorpus("search_constant: empty corpus");
  if (which == InequalityKind::Gni) {
    spec.require_gni();
  } else {
    spec.require_lsi();
  }
  std::vector<MemberEval> out(corpus.size());
  parallel_for(static_cast<int>(corpus.size()), [&](int i) {
    const Field& f = corpus[static_cast<std::size_t>(i)];
    if (which == InequalityKind::Gni) {
      const GniSides s = gni_sides(f, spec, 0.0);
      out[static_cast<std::size_t>(i)] = {s.lhs, s.sharp_term, s.corrector};
    } else {
      const LsiSides s = lsi_sides(f, spec, 0.0);
      out[static_cast<std::size_t>(i)] = {s.lhs, 0.0, s.rhs_core};
    }
  });
  return out;
}

bool is_equality_case(const MemberEval& m) { return !(m.core > 0.0); }

void require_sharp(const MemberEval& m, std::size_t index) {
  const double tol = 1e-12 * std::max(1.0, std::abs(m.base));
  if (m.lhs > m.base + tol) {
    std::ostringstream msg;
    msg << "corpus member " << index << " has a vanishing corrector but lhs " << m.lhs
        << " exceeds the sharp term " << m.base;
    throw DegenerateMember(msg.str());
  }
}

double member_ratio(const MemberEval& m) { return (m.lhs - m.base) / m.core; }

// (base + C core - lhs) / lhs written as core (C - ratio) / lhs, so its sign
// agrees exactly with the comparison ratio <= C.
double relative_slack(const MemberEval& m, double constant) {
  return m.core * (constant - member_ratio(m)) /
         std::max(std::abs(m.lhs), std::numeric_limits<double>::min());
}

}  // namespace

SearchedConstant search_constant(const std::vector<Field>& corpus, const InequalitySpec& spec,
                                 InequalityKind which) {
  const std::vector<MemberEval> evals = evaluate_corpus(corpus, spec, which);
  SearchedConstant out;
  out.corpus_size = static_cast<int>(evals.size());
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const MemberEval& m = evals[i];
    if (is_equality_case(m)) {
      require_sharp(m, i);
      ++out.skipped;
      continue;
    }
    out.value = std::max(out.value, member_ratio(m));
  }
  out.margin = std::numeric_limits<double>::infinity();
  for (const MemberEval& m : evals) {
    if (!is_equality_case(m)) out.margin = std::min(out.margin, relative_slack(m, out.value));
  }
  if (out.skipped == out.corpus_size) out.margin = 0.0;
  return out;
}

ConstantCheck check_constant(const std::vector<Field>& corpus, const InequalitySpec& spec,
                             InequalityKind which, double constant) {
  const std::vector<MemberEval> evals = evaluate_corpus(corpus, spec, which);
  ConstantCheck out{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const MemberEval& m = evals[i];
    if (is_equality_case(m)) {
      require_sharp(m, i);
      continue;
    }
    const double s = relative_slack(m, constant);
    out.margin = std::min(out.margin, s);
    if (member_ratio(m) > constant) ++out.failures;
  }
  if (!std::isfinite(out.margin)) out.margin = 0.0;
  return out;
}

double poincare_ratio(const Field& f) {
  const double grad = h1_seminorm(f);
  if (!(grad > 0.0)) throw ConstantField("poincare_ratio: field is constant");
  return lp_norm(centered(f), 2.0) / grad;
}

}  // namespace nplab
