#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "nplab/field.hpp"

namespace nplab {

enum class CorpusKind { Cosine, GaussianBump, RandomFourier, TwoBump, Constant };

CorpusKind parse_corpus_kind(const std::string& name);
std::string to_string(CorpusKind kind);

struct Corpus {
  CorpusKind kind;
  std::vector<Field> fields;
  /// Fraction of cells set to 0 by clipping, per member.
  std::vector<double> clip_fraction;
};

/// Deterministic field families for the inequality lab.
///
/// - cosine: 1 + a cos(k pi x / lx) cos(m pi y / ly) with k, m in {0..3}
///   (not both 0) and a in {0.1, ..., 0.9}. The family is a finite lattice of
///   135 members, drawn with replacement, so never clipped.
/// - gaussian-bump: b + A exp(-|x - x0|^2 / (2 s^2)), strictly positive.
/// - random-fourier: 1 + amplitude * sum_{k,m <= 4} xi_km cos cos / (1 + k^2 + m^2),
///   xi ~ N(0, 1), clipped at 0.
/// - two-bump: 0.6 + bump - bump, clipped at 0.
/// - constant: controls with values in [0.5, 2).
///
/// `amplitude` <= 0 picks the family default (0.5 for random-fourier).
Corpus make_corpus(CorpusKind kind, int count, std::uint64_t seed, const Grid2D& grid,
                   double amplitude = 0.0);

/// Portable draws from mt19937_64 (the standard distributions are not
/// specified bit-for-bit across library implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int index(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nplab
