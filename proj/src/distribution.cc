#include "gamx/distribution.h"

#include <string>

#include "gamx/errors.h"

namespace gamx {

ProductDistribution UniformProduct(std::size_t k) { return ProductDistribution(k, UniformDist{}); }

namespace {

void CheckDensity(const DensityDist& d, const RealInterval& domain, std::size_t i) {
  const PiecewiseFunction& pw = d.density;
  const std::string where = "feature " + std::to_string(i + 1) + ": ";
  if (pw.breakpoints.size() < 2 || pw.pieces.size() + 1 != pw.breakpoints.size()) {
    Fail(ErrorKind::kUnsupportedDistribution, where + "density needs one piece per breakpoint interval");
  }
  if (pw.lo() != domain.lo || pw.hi() != domain.hi) {
    Fail(ErrorKind::kUnsupportedDistribution, where + "density support must equal the domain");
  }
  Rational mass = 0;
  for (std::size_t j = 0; j < pw.num_pieces(); ++j) {
    const Rational& a = pw.breakpoints[j];
    const Rational& b = pw.breakpoints[j + 1];
    if (!(a < b)) Fail(ErrorKind::kUnsupportedDistribution, where + "density breakpoints must increase");
    const Polynomial& p = pw.pieces[j];
    if (p.degree() > 3) Fail(ErrorKind::kUnsupportedDistribution, where + "density pieces must have degree <= 3");
    if (p(a) < 0 || p(b) < 0) Fail(ErrorKind::kUnsupportedDistribution, where + "density is negative");
    Polynomial dp = p.Derivative();
    // Interior minima of a cubic piece: check where the derivative vanishes.
    if (dp.degree() == 2) {
      const Rational A = dp.coeff(2), B = dp.coeff(1), C = dp.coeff(0);
      const Rational disc = B * B - 4 * A * C;
      if (disc >= 0) {
        for (const Rational& q : {Rational(-1, 2), Rational(1, 2)}) {
          ExactReal root = ExactReal::FromSurd(-B / (2 * A), q / A, disc);
          if (root > ExactReal(a) && root < ExactReal(b) && ExactReal(p(root.AsSurd())).sign() < 0) {
            Fail(ErrorKind::kUnsupportedDistribution, where + "density is negative");
          }
        }
      }
    }
    mass += p.Integrate(a, b);
  }
  if (mass != 1) Fail(ErrorKind::kUnsupportedDistribution, where + "density integrates to " + ToString(mass));
}

}  // namespace

void ValidateDistribution(const GamModel& model, const ProductDistribution& dist) {
  if (dist.size() != model.num_features()) {
    Fail(ErrorKind::kUnsupportedDistribution, "distribution has " + std::to_string(dist.size()) +
                                                  " marginals for " + std::to_string(model.num_features()) +
                                                  " features");
  }
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const FeatureDomain& domain = model.domain(i);
    if (const auto* c = std::get_if<CategoricalDist>(&dist[i])) {
      const auto* e = std::get_if<Enumerable>(&domain);
      if (e == nullptr) {
        Fail(ErrorKind::kUnsupportedDistribution,
             "feature " + std::to_string(i + 1) + ": categorical marginal needs an enumerable domain");
      }
      EnumerableProbabilities(*e, *c);
    } else if (const auto* d = std::get_if<DensityDist>(&dist[i])) {
      const auto* r = std::get_if<RealInterval>(&domain);
      if (r == nullptr) {
        Fail(ErrorKind::kUnsupportedDistribution,
             "feature " + std::to_string(i + 1) + ": density marginal needs a real interval domain");
      }
      CheckDensity(*d, *r, i);
    }
  }
}

std::vector<Rational> EnumerableProbabilities(const Enumerable& domain, const FeatureDistribution& dist) {
  const std::size_t n = domain.values.size();
  if (std::holds_alternative<UniformDist>(dist)) return std::vector<Rational>(n, Rational(1, n));
  const auto* c = std::get_if<CategoricalDist>(&dist);
  if (c == nullptr) Fail(ErrorKind::kUnsupportedDistribution, "density marginal on an enumerable domain");
  if (c->probs.size() != n) {
    Fail(ErrorKind::kUnsupportedDistribution, "categorical marginal has " + std::to_string(c->probs.size()) +
                                                  " probabilities for " + std::to_string(n) + " values");
  }
  Rational total = 0;
  for (const Rational& p : c->probs) {
    if (p < 0) Fail(ErrorKind::kUnsupportedDistribution, "negative probability " + ToString(p));
    total += p;
  }
  if (total != 1) Fail(ErrorKind::kUnsupportedDistribution, "probabilities sum to " + ToString(total));
  return c->probs;
}

}  // namespace gamx
