#include "nplab/corpus.hpp"

#include <cmath>
#include <numbers>

namespace nplab {

namespace {

constexpr double kPi = std::numbers::pi;

Field clip(const Field& f, double& fraction) {
  const auto negative = (f.values() < 0.0);
  fraction = static_cast<double>(negative.count()) / static_cast<double>(f.values().size());
  return Field(f.grid(), f.values().max(0.0));
}

Field bump(const Grid2D& g, double x0, double y0, double sigma) {
  return Field::sample(g, [&](double x, double y) {
    const double r2 = (x - x0) * (x - x0) + (y - y0) * (y - y0);
    return std::exp(-r2 / (2.0 * sigma * sigma));
  });
}

}  // namespace

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u = 0.0;
  while (u <= 0.0) u = uniform();
  const double v = uniform();
  const double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * kPi * v);
  has_spare_ = true;
  return r * std::cos(2.0 * kPi * v);
}

CorpusKind parse_corpus_kind(const std::string& name) {
  if (name == "cosine") return CorpusKind::Cosine;
  if (name == "gaussian-bump") return CorpusKind::GaussianBump;
  if (name == "random-fourier") return CorpusKind::RandomFourier;
  if (name == "two-bump") return CorpusKind::TwoBump;
  if (name == "constant") return CorpusKind::Constant;
  throw ValidationError("unknown corpus kind '" + name +
                        "' (expected cosine, gaussian-bump, random-fourier, two-bump, constant)");
}

std::string to_string(CorpusKind kind) {
  switch (kind) {
    case CorpusKind::Cosine: return "cosine";
    case CorpusKind::GaussianBump: return "gaussian-bump";
    case CorpusKind::RandomFourier: return "random-fourier";
    case CorpusKind::TwoBump: return "two-bump";
    case CorpusKind::Constant: return "constant";
  }
  return "unknown";
}

Corpus make_corpus(CorpusKind kind, int count, std::uint64_t seed, const Grid2D& grid,
                   double amplitude) {
  if (count < 1) throw ValidationError("make_corpus: count must be >= 1");
  Rng rng(seed);
  Corpus out{kind, {}, {}};
  out.fields.reserve(static_cast<std::size_t>(count));
  const double lx = grid.lx();
  const double ly = grid.ly();

  for (int n = 0; n < count; ++n) {
    double clipped = 0.0;
    switch (kind) {
      case CorpusKind::Cosine: {
        int k = 0;
        int m = 0;
        while (k == 0 && m == 0) {
          k = rng.index(4);
          m = rng.index(4);
        }
        const double a = 0.1 * (1 + rng.index(9));
        out.fields.push_back(Field::sample(grid, [&](double x, double y) {
          return 1.0 + a * std::cos(k * kPi * x / lx) * std::cos(m * kPi * y / ly);
        }));
        break;
      }
      case CorpusKind::GaussianBump: {
        const double base = rng.uniform(0.05, 1.0);
        const double height = rng.uniform(0.5, 2.0);
        const double sigma = rng.uniform(0.05, 0.3) * grid.diameter();
        const double x0 = rng.uniform(0.0, lx);
        const double y0 = rng.uniform(0.0, ly);
        Field f = bump(grid, x0, y0, sigma);
        f.values() = base + height * f.values();
        out.fields.push_back(std::move(f));
        break;
      }
      case CorpusKind::RandomFourier: {
        const double amp = amplitude > 0.0 ? amplitude : 0.5;
        Field f(grid, 1.0);
        for (int k = 0; k <= 4; ++k) {
          for (int m = 0; m <= 4; ++m) {
            if (k == 0 && m == 0) continue;
            const double xi = rng.normal() * amp / (1.0 + k * k + m * m);
            f.values() += Field::sample(grid, [&](double x, double y) {
                            return xi * std::cos(k * kPi * x / lx) * std::cos(m * kPi * y / ly);
                          }).values();
          }
        }
        out.fields.push_back(clip(f, clipped));
        break;
      }
      case CorpusKind::TwoBump: {
        const double amp = amplitude > 0.0 ? amplitude : 1.0;
        const double s1 = rng.uniform(0.05, 0.25) * grid.diameter();
        const double s2 = rng.uniform(0.05, 0.25) * grid.diameter();
        const Field b1 = bump(grid, rng.uniform(0.0, lx), rng.uniform(0.0, ly), s1);
        const Field b2 = bump(grid, rng.uniform(0.0, lx), rng.uniform(0.0, ly), s2);
        const double h1 = amp * rng.uniform(0.5, 1.5);
        const double h2 = amp * rng.uniform(0.0, 0.8);
        Field f(grid, 0.6 + h1 * b1.values() - h2 * b2.values());
        out.fields.push_back(clip(f, clipped));
        break;
      }
      case CorpusKind::Constant: {
        out.fields.emplace_back(grid, rng.uniform(0.5, 2.0));
        break;
      }
    }
    out.clip_fraction.push_back(clipped);
  }
  return out;
}

}  // namespace nplab
