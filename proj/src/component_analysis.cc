#include "gamx/component_analysis.h"

#include <algorithm>
#include <optional>
#include <string>

#include "gamx/errors.h"

namespace gamx {
namespace {

// Appends a single-point piece at hi when the value there differs from the
// left limit of the last piece.
void CloseRightEnd(PiecewiseFunction& pw, const Rational& value_at_hi) {
  const Rational& hi = pw.breakpoints.back();
  if (pw.pieces.back()(hi) == value_at_hi) return;
  pw.breakpoints.push_back(hi);
  pw.pieces.push_back(Polynomial::Constant(value_at_hi));
}

PiecewiseFunction PointFunction(const Rational& at, const Rational& value) {
  return {{at, at}, {Polynomial::Constant(value)}};
}

PiecewiseFunction CanonicalizeSpline(const SplineShape& s, const Rational& beta, const Rational& lo,
                                     const Rational& hi) {
  if (lo == hi) return PointFunction(lo, beta * EvaluateSpline(s, lo));
  auto piece_of = [&](const Rational& v) {
    auto it = std::upper_bound(s.knots.begin(), s.knots.end(), v);
    std::size_t j = static_cast<std::size_t>(it - s.knots.begin());
    j = j == 0 ? 0 : j - 1;
    return std::min(j, s.polys.size() - 1);
  };
  PiecewiseFunction pw;
  pw.breakpoints.push_back(lo);
  for (const Rational& k : s.knots) {
    if (k > lo && k < hi) pw.breakpoints.push_back(k);
  }
  pw.breakpoints.push_back(hi);
  for (std::size_t j = 0; j + 1 < pw.breakpoints.size(); ++j) {
    pw.pieces.push_back(s.polys[piece_of(pw.breakpoints[j])] * beta);
  }
  CloseRightEnd(pw, beta * EvaluateSpline(s, hi));
  return pw;
}

void CollectThresholds(const DecisionTree& tree, std::vector<Rational>& out) {
  for (const TreeNode& node : tree.nodes) {
    if (!node.is_leaf) out.push_back(node.threshold);
  }
}

PiecewiseFunction CanonicalizeEnsemble(const TreeEnsembleShape& e, const Rational& beta, const Rational& lo,
                                       const Rational& hi) {
  if (lo == hi) return PointFunction(lo, beta * EvaluateEnsemble(e, lo));
  std::vector<Rational> thresholds;
  for (const DecisionTree& t : e.trees) CollectThresholds(t, thresholds);
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  // Every test splits the line at its threshold into (-inf, r) and [r, inf),
  // so the ensemble is constant on each cell between consecutive thresholds.
  PiecewiseFunction pw;
  pw.breakpoints.push_back(lo);
  for (const Rational& t : thresholds) {
    if (t > lo && t < hi) pw.breakpoints.push_back(t);
  }
  pw.breakpoints.push_back(hi);
  for (std::size_t j = 0; j + 1 < pw.breakpoints.size(); ++j) {
    pw.pieces.push_back(Polynomial::Constant(beta * EvaluateEnsemble(e, pw.breakpoints[j])));
  }
  CloseRightEnd(pw, beta * EvaluateEnsemble(e, hi));
  return pw;
}

// Forward-propagates the exact piecewise-linear function computed by each
// unit, splitting at every ReLU zero crossing.
PiecewiseFunction CanonicalizeMlp(const MlpShape& mlp, const Rational& beta, const Rational& lo, const Rational& hi,
                                  std::size_t budget) {
  if (lo == hi) return PointFunction(lo, beta * EvaluateMlp(mlp, lo));

  std::vector<Rational> points{lo, hi};
  // values[unit][p] = unit output at points[p].
  std::vector<std::vector<Rational>> values{{lo, hi}};

  for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
    const MlpLayer& layer = mlp.layers[l];
    const bool hidden = l + 1 < mlp.layers.size();
    std::vector<std::vector<Rational>> pre(layer.outputs(), std::vector<Rational>(points.size()));
    for (std::size_t out = 0; out < layer.outputs(); ++out) {
      for (std::size_t p = 0; p < points.size(); ++p) {
        Rational z = layer.bias[out];
        for (std::size_t in = 0; in < layer.inputs(); ++in) {
          const Rational& w = layer.weights[in][out];
          if (w != 0) z += w * values[in][p];
        }
        pre[out][p] = std::move(z);
      }
    }
    if (hidden) {
      std::vector<Rational> crossings;
      for (const auto& unit : pre) {
        for (std::size_t p = 0; p + 1 < points.size(); ++p) {
          const int s0 = sgn(unit[p]);
          const int s1 = sgn(unit[p + 1]);
          if (s0 * s1 < 0) {
            crossings.push_back(points[p] + (points[p + 1] - points[p]) * (-unit[p]) / (unit[p + 1] - unit[p]));
          }
        }
      }
      if (!crossings.empty()) {
        std::sort(crossings.begin(), crossings.end());
        crossings.erase(std::unique(crossings.begin(), crossings.end()), crossings.end());
        if (points.size() - 1 + crossings.size() > budget) {
          throw BudgetExceeded(points.size() - 1 + crossings.size(), budget);
        }
        std::vector<Rational> merged;
        merged.reserve(points.size() + crossings.size());
        // For each merged point: the source interval and whether it is new.
        std::vector<std::size_t> interval;
        std::vector<bool> is_new;
        std::size_t c = 0;
        for (std::size_t p = 0; p < points.size(); ++p) {
          while (c < crossings.size() && crossings[c] < points[p]) {
            merged.push_back(crossings[c++]);
            interval.push_back(p - 1);
            is_new.push_back(true);
          }
          merged.push_back(points[p]);
          interval.push_back(p);
          is_new.push_back(false);
        }
        for (auto& unit : pre) {
          std::vector<Rational> next(merged.size());
          for (std::size_t q = 0; q < merged.size(); ++q) {
            const std::size_t p = interval[q];
            if (!is_new[q]) {
              next[q] = unit[p];
            } else {
              const Rational slope = (unit[p + 1] - unit[p]) / (points[p + 1] - points[p]);
              next[q] = unit[p] + slope * (merged[q] - points[p]);
            }
          }
          unit = std::move(next);
        }
        points = std::move(merged);
      }
      for (auto& unit : pre) {
        for (Rational& z : unit) {
          if (z < 0) z = 0;
        }
      }
    }
    values = std::move(pre);
  }

  const std::vector<Rational>& out = values[0];
  PiecewiseFunction pw;
  pw.breakpoints.push_back(points[0]);
  for (std::size_t p = 0; p + 1 < points.size(); ++p) {
    const Rational slope = (out[p + 1] - out[p]) / (points[p + 1] - points[p]);
    Polynomial piece({(out[p] - slope * points[p]) * beta, slope * beta});
    if (!pw.pieces.empty() && pw.pieces.back() == piece) {
      pw.breakpoints.back() = points[p + 1];
      continue;
    }
    pw.pieces.push_back(std::move(piece));
    pw.breakpoints.push_back(points[p + 1]);
  }
  if (pw.num_pieces() > budget) throw BudgetExceeded(pw.num_pieces(), budget);
  return pw;
}

ExactReal EvaluateAt(const Polynomial& p, const ExactReal& x) {
  if (x.is_rational()) return ExactReal(p(x.rational_part()));
  return ExactReal(p(x.AsSurd()));
}

// Real roots of p' strictly inside (a, b).
std::vector<ExactReal> InteriorCriticalPoints(const Polynomial& p, const Rational& a, const Rational& b) {
  std::vector<ExactReal> out;
  if (!(a < b)) return out;
  Polynomial d = p.Derivative();
  std::vector<ExactReal> roots;
  if (d.degree() == 1) {
    roots.emplace_back(Rational(-d.coeff(0) / d.coeff(1)));
  } else if (d.degree() == 2) {
    const Rational A = d.coeff(2), B = d.coeff(1), C = d.coeff(0);
    const Rational disc = B * B - 4 * A * C;
    if (disc >= 0) {
      const Rational center = -B / (2 * A);
      const Rational half = Rational(1) / (2 * A);
      roots.push_back(ExactReal::FromSurd(center, -half, disc));
      if (disc != 0) roots.push_back(ExactReal::FromSurd(center, half, disc));
    }
  }
  const ExactReal lo(a), hi(b);
  for (ExactReal& r : roots) {
    if (r > lo && r < hi) out.push_back(std::move(r));
  }
  return out;
}

struct Candidate {
  ExactReal value;
  ExactReal point;
  bool attained;
  Rational piece_lo;
  Rational piece_hi;
};

// Smaller value first; among equal values an attained candidate, then the
// smallest point.
bool BetterMin(const Candidate& a, const Candidate& b) {
  int c = (a.value - b.value).sign();
  if (c != 0) return c < 0;
  if (a.attained != b.attained) return a.attained;
  return a.point < b.point;
}

bool BetterMax(const Candidate& a, const Candidate& b) {
  int c = (a.value - b.value).sign();
  if (c != 0) return c > 0;
  if (a.attained != b.attained) return a.attained;
  return a.point < b.point;
}

Extremes Select(const std::vector<Candidate>& candidates) {
  if (candidates.empty()) Fail(ErrorKind::kDomain, "no extremum candidates in domain");
  const Candidate* lo = &candidates[0];
  const Candidate* hi = &candidates[0];
  for (const Candidate& c : candidates) {
    if (BetterMin(c, *lo)) lo = &c;
    if (BetterMax(c, *hi)) hi = &c;
  }
  auto to_extreme = [](const Candidate& c) {
    return Extreme{c.value, c.point, c.attained, c.piece_lo, c.piece_hi};
  };
  return {to_extreme(*lo), to_extreme(*hi)};
}

Candidate RationalCandidate(const Rational& point, const Rational& value) {
  return {ExactReal(value), ExactReal(point), true, point, point};
}

std::vector<Candidate> RealCandidates(const PiecewiseFunction& pw) {
  std::vector<Candidate> out;
  for (std::size_t j = 0; j < pw.num_pieces(); ++j) {
    const Rational& a = pw.breakpoints[j];
    const Rational& b = pw.breakpoints[j + 1];
    const Polynomial& p = pw.pieces[j];
    out.push_back({ExactReal(p(a)), ExactReal(a), true, a, b});
    for (ExactReal& c : InteriorCriticalPoints(p, a, b)) {
      ExactReal v = EvaluateAt(p, c);
      out.push_back({std::move(v), std::move(c), true, a, b});
    }
    if (a < b) {
      // The right end belongs to this piece only for the closed last piece;
      // otherwise it is a left limit that the next piece may or may not reach.
      out.push_back({ExactReal(p(b)), ExactReal(b), pw.is_last(j), a, b});
    }
  }
  return out;
}

std::vector<Candidate> IntegerCandidates(const PiecewiseFunction& pw, const IntegerRange& range) {
  std::vector<Candidate> out;
  auto add = [&](const Integer& n, const Polynomial& p) {
    Rational v(n);
    out.push_back(RationalCandidate(v, p(v)));
  };
  for (std::size_t j = 0; j < pw.num_pieces(); ++j) {
    const Rational& a = pw.breakpoints[j];
    const Rational& b = pw.breakpoints[j + 1];
    Integer first = std::max(Ceil(a), range.lo);
    Integer last = pw.is_last(j) ? Floor(b) : Integer(Ceil(b) - 1);
    last = std::min(last, range.hi);
    if (first > last) continue;
    const Polynomial& p = pw.pieces[j];
    add(first, p);
    add(last, p);
    for (const ExactReal& c : InteriorCriticalPoints(p, a, b)) {
      // One integer below and one above each critical point.
      for (Integer n : {Floor(c), Ceil(c)}) {
        if (n < first) n = first;
        if (n > last) n = last;
        add(n, p);
      }
    }
  }
  return out;
}

Rational UniformExpectationOverIntegers(const PiecewiseFunction& pw, const IntegerRange& range) {
  Rational total = 0;
  for (std::size_t j = 0; j < pw.num_pieces(); ++j) {
    const Rational& a = pw.breakpoints[j];
    const Rational& b = pw.breakpoints[j + 1];
    Integer first = std::max(Ceil(a), range.lo);
    Integer last = std::min(pw.is_last(j) ? Floor(b) : Integer(Ceil(b) - 1), range.hi);
    total += pw.pieces[j].SumOverIntegers(first, last);
  }
  return total / Rational(range.hi - range.lo + 1);
}

// Integral of pw(x) * density(x) over [lo, hi].
Rational IntegrateProduct(const PiecewiseFunction& pw, const PiecewiseFunction& density) {
  std::vector<Rational> cuts;
  for (const Rational& b : pw.breakpoints) cuts.push_back(b);
  for (const Rational& b : density.breakpoints) {
    if (b > pw.lo() && b < pw.hi()) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Rational total = 0;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const Rational& a = cuts[j];
    const Rational& b = cuts[j + 1];
    if (b <= density.lo() || a >= density.hi()) continue;
    const Rational mid = (a + b) / 2;
    const Polynomial& f = pw.pieces[pw.PieceIndex(mid)];
    const Polynomial& g = density.pieces[density.PieceIndex(mid)];
    total += (f * g).Integrate(a, b);
  }
  return total;
}

}  // namespace

std::size_t PiecewiseFunction::PieceIndex(const Rational& v) const {
  if (v < lo() || v > hi()) Fail(ErrorKind::kDomain, "value " + ToString(v) + " outside piecewise support");
  if (v == hi()) return pieces.size() - 1;
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), v);
  return static_cast<std::size_t>(it - breakpoints.begin()) - 1;
}

Rational PiecewiseFunction::operator()(const Rational& v) const { return pieces[PieceIndex(v)](v); }

PiecewiseFunction Canonicalize(const Component& component, const FeatureDomain& domain, std::size_t budget) {
  if (budget == 0) Fail(ErrorKind::kValidation, "piece budget must be at least 1");
  auto [lo, hi] = Hull(domain);
  return std::visit(
      [&](const auto& s) -> PiecewiseFunction {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SplineShape>) {
          return CanonicalizeSpline(s, component.beta, lo, hi);
        } else if constexpr (std::is_same_v<T, MlpShape>) {
          return CanonicalizeMlp(s, component.beta, lo, hi, budget);
        } else {
          return CanonicalizeEnsemble(s, component.beta, lo, hi);
        }
      },
      component.shape);
}

Extremes ComputeExtremes(const PiecewiseFunction& pw, const FeatureDomain& domain) {
  if (const auto* e = std::get_if<Enumerable>(&domain)) {
    std::vector<Candidate> candidates;
    for (const Rational& v : e->values) candidates.push_back(RationalCandidate(v, pw(v)));
    return Select(candidates);
  }
  if (const auto* r = std::get_if<IntegerRange>(&domain)) return Select(IntegerCandidates(pw, *r));
  return Select(RealCandidates(pw));
}

std::vector<std::pair<Rational, Rational>> ComponentValues(const Component& component, const Enumerable& domain) {
  std::vector<std::pair<Rational, Rational>> out;
  out.reserve(domain.values.size());
  for (const Rational& v : domain.values) {
    out.emplace_back(v, component.beta == 0 ? Rational(0) : Rational(component.beta * EvaluateShape(component.shape, v)));
  }
  return out;
}

Extremes ComponentExtremes(const Component& component, const FeatureDomain& domain, std::size_t budget) {
  if (const auto* e = std::get_if<Enumerable>(&domain)) {
    std::vector<Candidate> candidates;
    for (auto& [v, value] : ComponentValues(component, *e)) candidates.push_back(RationalCandidate(v, value));
    return Select(candidates);
  }
  if (component.beta == 0) {
    auto [lo, hi] = Hull(domain);
    Candidate c = RationalCandidate(lo, 0);
    return Select({c});
  }
  return ComputeExtremes(Canonicalize(component, domain, budget), domain);
}

Rational Expectation(const Component& component, const FeatureDomain& domain, const FeatureDistribution& dist,
                     std::size_t budget) {
  if (const auto* e = std::get_if<Enumerable>(&domain)) {
    std::vector<Rational> probs = EnumerableProbabilities(*e, dist);
    auto values = ComponentValues(component, *e);
    Rational total = 0;
    for (std::size_t j = 0; j < values.size(); ++j) total += probs[j] * values[j].second;
    return total;
  }
  if (component.beta == 0) return 0;
  if (const auto* r = std::get_if<IntegerRange>(&domain)) {
    if (!std::holds_alternative<UniformDist>(dist)) {
      Fail(ErrorKind::kUnsupportedDistribution, "integer-range features support only the uniform distribution");
    }
    try {
      return UniformExpectationOverIntegers(Canonicalize(component, domain, budget), *r);
    } catch (const BudgetExceeded&) {
      const Integer size = r->hi - r->lo + 1;
      if (size > 1000000) throw;
      Rational total = 0;
      for (Integer n = r->lo; n <= r->hi; ++n) total += component.beta * EvaluateShape(component.shape, Rational(n));
      return total / Rational(size);
    }
  }
  const auto& interval = std::get<RealInterval>(domain);
  PiecewiseFunction pw = Canonicalize(component, domain, budget);
  if (std::holds_alternative<UniformDist>(dist)) {
    if (interval.lo == interval.hi) return pw(interval.lo);
    Rational total = 0;
    for (std::size_t j = 0; j < pw.num_pieces(); ++j) {
      total += pw.pieces[j].Integrate(pw.breakpoints[j], pw.breakpoints[j + 1]);
    }
    return total / (interval.hi - interval.lo);
  }
  if (const auto* d = std::get_if<DensityDist>(&dist)) return IntegrateProduct(pw, d->density);
  Fail(ErrorKind::kUnsupportedDistribution, "categorical distributions need an enumerable domain");
}

Rational ApproximateWitness(const Extreme& extreme, unsigned bits) {
  if (extreme.attained && extreme.point.is_rational()) return extreme.point.rational_part();
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 2, bits);
  const Rational width = extreme.piece_hi - extreme.piece_lo;
  if (!extreme.attained) {
    // Approach the excluded right end of the piece from the left.
    return extreme.piece_hi - width / Rational(scale);
  }
  auto [lo, hi] = extreme.point.Enclose(bits);
  Rational r = (lo + hi) / 2;
  if (r <= extreme.piece_lo) r = extreme.piece_lo + width / Rational(scale);
  if (r >= extreme.piece_hi) r = extreme.piece_hi - width / Rational(scale);
  return r;
}

bool IsContinuousOn(const SplineShape& spline, const FeatureDomain& domain) {
  auto [lo, hi] = Hull(domain);
  for (std::size_t j = 1; j + 1 < spline.knots.size(); ++j) {
    const Rational& k = spline.knots[j];
    if (k <= lo || k > hi) continue;
    if (spline.polys[j - 1](k) != spline.polys[j](k)) return false;
  }
  return true;
}

}  // namespace gamx
