#ifndef GAMX_GENERATOR_H_
#define GAMX_GENERATOR_H_

#include <cstdint>
#include <random>
#include <string>

#include "gamx/model.h"

namespace gamx {

// Deterministic across platforms: draws only raw 64-bit words from
// mt19937_64 and maps them to ranges by rejection.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, n).
  std::uint64_t Below(std::uint64_t n);
  // Uniform in [lo, hi].
  std::int64_t Range(std::int64_t lo, std::int64_t hi);
  bool Coin() { return (Next() >> 63) != 0; }
  // Uniform multiple of 1/den in [lo, hi].
  Rational Grid(std::int64_t lo, std::int64_t hi, std::int64_t den);

 private:
  std::mt19937_64 engine_;
};

enum class DomainKind { kEnumerable, kIntRange, kRealInterval };
enum class ComponentKind { kSpline, kMlp, kTreeEnsemble };

struct GenOptions {
  std::uint64_t seed = 1;
  std::size_t k = 3;
  DomainKind domain = DomainKind::kEnumerable;
  ComponentKind component = ComponentKind::kSpline;
  Task task = Task::kClassification;
  std::size_t domain_size = 4;  // values per enumerable domain (at most)
};

struct GeneratedCase {
  GamModel model;
  Instance x;
};

// Small random model with half-integer parameters and an in-domain instance.
// The intercept is centred so that both labels occur.
GeneratedCase Generate(const GenOptions& options);

// Continuous spline on [lo, hi] with rational critical points: each piece has
// derivative c (w - r1)(w - r2) and consecutive pieces agree at the knots.
SplineShape RandomSmoothSpline(Rng& rng, const Rational& lo, const Rational& hi, std::size_t pieces);

// Cubic with arbitrary rational coefficients on [lo, hi]; critical points may
// be irrational.
SplineShape RandomCubic(Rng& rng, const Rational& lo, const Rational& hi);

// ReLU network 1 -> width -> ... -> 1 with `depth` hidden layers.
MlpShape RandomMlp(Rng& rng, std::size_t depth, std::size_t width);

// Repeated folding r -> |r - 2^(n-i)| on [0, 2^n] with every fold's ReLU bit
// accumulated into the output; the result has about 2^n linear pieces.
MlpShape FoldingGadget(unsigned n);

std::string DomainKindName(DomainKind kind);
std::string ComponentKindName(ComponentKind kind);

}  // namespace gamx

#endif  // GAMX_GENERATOR_H_
