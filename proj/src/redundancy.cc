#include "gamx/redundancy.h"

#include <algorithm>
#include <string>

#include "gamx/errors.h"

namespace gamx {
namespace {

void RequireClassification(const GamModel& model) {
  if (model.task() != Task::kClassification) {
    Fail(ErrorKind::kUnsupportedConfiguration, "feature redundancy is defined for classification models");
  }
}

void RequireFeature(const GamModel& model, std::size_t i) {
  if (i >= model.num_features()) {
    Fail(ErrorKind::kValidation, "feature index " + std::to_string(i + 1) + " out of range");
  }
}

bool Verifies(const GamModel& model, const RedundancyWitness& w, std::size_t i) {
  Instance a = w.base;
  Instance b = w.base;
  a[i] = w.v1;
  b[i] = w.v2;
  return Classify(model, a) != Classify(model, b);
}

bool IsSmoothContinuous(const GamModel& model) {
  for (std::size_t j = 0; j < model.num_features(); ++j) {
    if (!std::holds_alternative<RealInterval>(model.domain(j))) return false;
    if (!std::holds_alternative<SplineShape>(model.component(j).shape)) return false;
  }
  return true;
}

// Moves the rest features one after another from a to b; position t in
// [0, rest.size()] is piecewise linear in every coordinate.
struct Path {
  const GamModel* model;
  std::vector<std::size_t> rest;
  std::vector<Rational> a;
  std::vector<Rational> b;

  Instance At(const Instance& base, const Rational& t) const {
    Instance z = base;
    for (std::size_t r = 0; r < rest.size(); ++r) {
      const Rational local = t - Rational(static_cast<long>(r));
      if (local <= 0) {
        z[rest[r]] = a[r];
      } else if (local >= 1) {
        z[rest[r]] = b[r];
      } else {
        z[rest[r]] = a[r] + local * (b[r] - a[r]);
      }
    }
    return z;
  }

  Rational RestSum(const Instance& z) const {
    Rational s = model->beta0();
    for (std::size_t j : rest) s += EvaluateComponent(*model, j, z[j]);
    return s;
  }
};

std::optional<RedundancyWitness> ContinuousWitness(const GamModel& model, std::size_t i,
                                                   const std::vector<Extremes>& ext) {
  const std::size_t k = model.num_features();
  Instance base(k);
  for (std::size_t j = 0; j < k; ++j) base[j] = Hull(model.domain(j)).first;
  for (unsigned bits = 16; bits <= 1024; bits *= 2) {
    RedundancyWitness w;
    w.v1 = ApproximateWitness(ext[i].min, bits);
    w.v2 = ApproximateWitness(ext[i].max, bits);
    const Rational lo_i = EvaluateComponent(model, i, w.v1);
    const Rational hi_i = EvaluateComponent(model, i, w.v2);
    if (!(lo_i < hi_i)) continue;
    // Rest sums r with r + lo_i < 0 <= r + hi_i flip the label.
    const Rational target_lo = -hi_i;
    const Rational target_hi = -lo_i;
    Path path{&model, {}, {}, {}};
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      path.rest.push_back(j);
      path.a.push_back(ApproximateWitness(ext[j].min, bits));
      path.b.push_back(ApproximateWitness(ext[j].max, bits));
    }
    auto inside = [&](const Rational& s) { return s >= target_lo && s < target_hi; };
    Rational t_lo = 0;
    Rational t_hi(static_cast<long>(path.rest.size()));
    Instance z = path.At(base, t_lo);
    Rational s = path.RestSum(z);
    if (!(s < target_hi)) continue;
    if (!inside(s)) {
      Instance z_hi = path.At(base, t_hi);
      if (path.RestSum(z_hi) < target_lo) continue;
      // Invariant: RestSum(t_lo) < target_lo <= RestSum(t_hi).
      bool found = false;
      for (int iter = 0; iter < 4096 && !found; ++iter) {
        const Rational mid = (t_lo + t_hi) / 2;
        z = path.At(base, mid);
        s = path.RestSum(z);
        if (inside(s)) {
          found = true;
        } else if (s < target_lo) {
          t_lo = mid;
        } else {
          t_hi = mid;
        }
      }
      if (!found) continue;
    }
    w.base = z;
    w.base[i] = w.v1;
    if (Verifies(model, w, i)) return w;
  }
  return std::nullopt;
}

// Domain points that realize every value of beta_i * f_i on the domain,
// when finitely many suffice.
std::optional<std::vector<Rational>> Representatives(const Component& c, const FeatureDomain& domain,
                                                     std::size_t budget) {
  constexpr long kExpandLimit = 100000;
  if (const auto* e = std::get_if<Enumerable>(&domain)) return e->values;
  const auto* range = std::get_if<IntegerRange>(&domain);
  if (range != nullptr && range->hi - range->lo < kExpandLimit) {
    std::vector<Rational> out;
    for (Integer v = range->lo; v <= range->hi; ++v) out.emplace_back(v);
    return out;
  }
  if (c.beta == 0) return std::vector<Rational>{Hull(domain).first};
  if (!std::holds_alternative<TreeEnsembleShape>(c.shape)) return std::nullopt;
  const PiecewiseFunction pw = Canonicalize(c, domain, budget);
  std::vector<Rational> out;
  for (std::size_t j = 0; j < pw.num_pieces(); ++j) {
    const Rational& a = pw.breakpoints[j];
    const Rational& b = pw.breakpoints[j + 1];
    if (range == nullptr) {
      out.push_back(a);
      continue;
    }
    const Integer first = std::max(Ceil(a), range->lo);
    const Integer last = std::min(pw.is_last(j) ? Floor(b) : Integer(Ceil(b) - 1), range->hi);
    if (first <= last) out.emplace_back(first);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

RedundancyResult IsRedundantContinuous(const GamModel& model, std::size_t i, std::size_t budget) {
  RequireClassification(model);
  RequireFeature(model, i);
  if (!IsSmoothContinuous(model)) {
    Fail(ErrorKind::kUnsupportedConfiguration, "the continuous test needs spline components over real intervals");
  }
  for (std::size_t j = 0; j < model.num_features(); ++j) {
    if (!IsContinuousOn(std::get<SplineShape>(model.component(j).shape), model.domain(j))) {
      Fail(ErrorKind::kUnsupportedConfiguration,
           "component " + std::to_string(j + 1) + " is discontinuous; the continuous test needs continuous splines");
    }
  }
  RedundancyResult out;
  out.method = "continuous";
  std::vector<Extremes> ext;
  ExactReal lowest(model.beta0());
  ExactReal highest(model.beta0());
  for (std::size_t j = 0; j < model.num_features(); ++j) {
    ext.push_back(ComponentExtremes(model.component(j), model.domain(j), budget));
    lowest += ext.back().min.value;
    highest += ext.back().max.value;
  }
  // A constant classifier makes every feature redundant.
  if (lowest.sign() >= 0 || highest.sign() < 0) {
    out.redundant = true;
    return out;
  }
  if (ext[i].min.value == ext[i].max.value) {
    out.redundant = true;
    return out;
  }
  out.redundant = false;
  out.witness = ContinuousWitness(model, i, ext);
  return out;
}

RedundancyResult IsRedundantDiscrete(const QuantizedModel& q, std::size_t i) {
  const GamModel& model = *q.model;
  RequireClassification(model);
  RequireFeature(model, i);
  if (!q.lossless) {
    Fail(ErrorKind::kPrecision, "quantization at " + std::to_string(q.digits) +
                                    " digits is lossy; the redundancy test needs exact tables");
  }
  RedundancyResult out;
  out.method = "discrete";
  const auto& table = q.tables[i];
  const auto lo_it = std::min_element(table.begin(), table.end());
  const auto hi_it = std::max_element(table.begin(), table.end());
  if (*lo_it == *hi_it) {
    out.redundant = true;
    return out;
  }
  FeatureSubset exclude({i});
  auto choice = FindReachable(q, exclude, -*hi_it, -*lo_it - 1);
  if (!choice) {
    out.redundant = true;
    return out;
  }
  const auto& values = [&](std::size_t j) -> const std::vector<Rational>& {
    return std::get<Enumerable>(model.domain(j)).values;
  };
  RedundancyWitness w;
  for (std::size_t j = 0; j < model.num_features(); ++j) w.base.push_back(values(j)[(*choice)[j]]);
  w.v1 = values(i)[static_cast<std::size_t>(lo_it - table.begin())];
  w.v2 = values(i)[static_cast<std::size_t>(hi_it - table.begin())];
  w.base[i] = w.v1;
  if (!Verifies(model, w, i)) Fail(ErrorKind::kPrecision, "redundancy witness failed exact verification");
  out.redundant = false;
  out.witness = std::move(w);
  return out;
}

RedundancyResult IsRedundant(const GamModel& model, std::size_t i, std::size_t budget) {
  RequireClassification(model);
  RequireFeature(model, i);
  if (IsSmoothContinuous(model)) return IsRedundantContinuous(model, i, budget);

  std::vector<std::vector<Rational>> grid;
  for (std::size_t j = 0; j < model.num_features(); ++j) {
    auto reps = Representatives(model.component(j), model.domain(j), budget);
    if (!reps) {
      Fail(ErrorKind::kUnsupportedConfiguration,
           "feature " + std::to_string(j + 1) +
               " has infinitely many component values outside the continuous spline case; discretize the domain");
    }
    grid.push_back(std::move(*reps));
  }
  const bool already = model.all_enumerable();
  GamModel finite = already ? model : DiscretizeDomain(model, grid);
  auto shared = std::make_shared<const GamModel>(std::move(finite));
  RedundancyResult r = IsRedundantDiscrete(QuantizeWithScale(shared, ExactScale(*shared)), i);
  if (!already) r.method = "cells";
  return r;
}

}  // namespace gamx
