#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nplab/field.hpp"
#include "nplab/rational.hpp"

namespace nplab {

/// Exponent p and dimension d of an interpolation / log-Sobolev inequality.
struct InequalitySpec {
  int p = 4;
  int d = 2;

  /// 2 <= p, 2 <= d, and (d - 2) p <= 2d.
  bool valid_for_gni() const noexcept;
  /// Additionally p >= 3 and d <= 6.
  bool valid_for_lsi() const noexcept;
  void require_gni() const;
  void require_lsi() const;
};

enum class GniLabel { SharpAdjacentA, MixedB, SumK, PoincareTail };

std::string to_string(GniLabel label);

/// One corrector term  mean(q)^alpha ||q - mean q||_2^beta ||grad q||_2^gamma.
struct GniTerm {
  Rational alpha;
  Rational beta;
  Rational gamma;
  GniLabel label;
  int k = 0;  ///< summation index for SumK terms

  std::string name() const;
};

/// Corrector terms of the interpolation inequality
///
///   int q^p <= qbar^2 ||q||_{p-2}^{p-2} + C sum_terms qbar^a ||q - qbar||^b ||grad q||^g,
///
/// in the order A, B, k = 3..p-1, tail. Every term has a + b + g = p and b + g >= 2.
std::vector<GniTerm> gni_exponent_table(const InequalitySpec& spec);

/// Throws InvalidSpec if a term breaks the exponent invariants.
void check_gni_term(const GniTerm& term, int p);

struct GniSides {
  double lhs;         ///< int q^p
  double sharp_term;  ///< qbar^2 ||q||_{p-2}^{p-2}  (||q||_0^0 = |Omega|)
  double corrector;   ///< sum over the table, without C
  /// (lhs - sharp_term) / corrector: the smallest C this field needs. 0 when
  /// corrector == 0.
  double ratio;
  double slack;  ///< sharp_term + C corrector - lhs for the C passed in
};

/// Field evaluations need d = 2 (the grid is two-dimensional).
GniSides gni_sides(const Field& q, const InequalitySpec& spec, double C);

struct LsiSides {
  double lhs;       ///< int g ln(g / gbar)
  double rhs_core;  ///< gbar^((p-4)/(p-2)) ||grad g^(1/(p-2))||^2
  double rhs;       ///< A_p rhs_core
  double ratio;     ///< lhs / rhs_core, 0 when both vanish
};

LsiSides lsi_sides(const Field& g, const InequalitySpec& spec, double A_p);

/// Slack of the intermediate steps with q = |Omega|^(-1/p) (g / gbar)^(1/(p-2)).
struct LsiIntermediate {
  /// (p-2)/2 ||g||_1 ln ||q||_p^p - int g ln(g/gbar)   (Jensen, >= 0)
  double jensen_slack;
  /// |Omega|^(-2/p) - qbar^2   (Hoelder, >= 0)
  double holder_slack;
  /// | ||q||_{p-2}^{p-2} - |Omega|^(2/p) | / |Omega|^(2/p)   (exact identity)
  double identity_error;
};

LsiIntermediate lsi_intermediate_checks(const Field& g, const InequalitySpec& spec);

/// sup_{x >= 0} f'(x) / (1 + f(x)) for f(x) = sum_i C_i x^alpha_i, C_i >= 0,
/// alpha_i >= 1. Then ln(1 + f(x)) <= A x for every x >= 0.
///
/// The ratio is sampled on 10^5 log-spaced points of [0, X] and the best
/// sample is refined by golden-section search. X starts at 1 + sum C_i and is
/// widened until the tail cap max(alpha) / X (valid for x >= X because
/// f' <= max(alpha) f / x) no longer exceeds the sampled maximum.
double log_lemma_constant(const std::vector<std::pair<double, double>>& coeffs);

/// Largest value of ln(1 + f(x)) - A x over the given points.
double log_lemma_worst(const std::vector<std::pair<double, double>>& coeffs, double A,
                       const std::vector<double>& xs);

enum class InequalityKind { Gni, Lsi };

struct SearchedConstant {
  double value = 0.0;
  int corpus_size = 0;
  /// Smallest relative slack (rhs - lhs) / lhs over the corpus at `value`.
  double margin = 0.0;
  int skipped = 0;  ///< members with a vanishing corrector (equality case)
};

/// Smallest constant for which the inequality holds on every member.
/// Members whose corrector vanishes are skipped but must satisfy the sharp
/// inequality on their own (DegenerateMember otherwise). Evaluation fans out
/// over NP_LAB_THREADS workers; results do not depend on the worker count.
SearchedConstant search_constant(const std::vector<Field>& corpus, const InequalitySpec& spec,
                                 InequalityKind which);

struct ConstantCheck {
  double margin;  ///< min relative slack over the corpus
  int failures;   ///< members with slack < 0
};

/// Evaluates a fixed constant against a corpus (train / test protocol).
ConstantCheck check_constant(const std::vector<Field>& corpus, const InequalitySpec& spec,
                             InequalityKind which, double constant);

/// ||f - fbar||_2 / ||grad f||_2. Throws ConstantField.
double poincare_ratio(const Field& f);

}  // namespace nplab
