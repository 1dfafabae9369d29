#include "gamx/counting.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "gamx/component_analysis.h"
#include "gamx/errors.h"

namespace gamx {
namespace {

const Enumerable& RequireEnumerable(const GamModel& model, std::size_t i) {
  const auto* e = std::get_if<Enumerable>(&model.domain(i));
  if (e == nullptr) {
    Fail(ErrorKind::kUnsupportedConfiguration,
         "feature " + std::to_string(i + 1) + " is not enumerable; discretize the domain before quantizing");
  }
  return *e;
}

std::int64_t ToInt64(const Integer& v, const std::string& what) {
  if (!v.fits_slong_p() || Abs(Rational(v)) > Rational(Integer(std::to_string(kWeightCapacity)))) {
    Fail(ErrorKind::kOverflow, what + " exceeds the integer weight capacity; lower --digits");
  }
  return v.get_si();
}

Integer ToInteger(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }
const Integer& ToInteger(const Integer& v) { return v; }

std::int64_t CeilDiv(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a > 0) == (b > 0))) ++q;
  return static_cast<std::int64_t>(q);
}

std::int64_t FloorDiv(__int128 a, __int128 b) {
  __int128 q = a / b;
  if ((a % b != 0) && ((a > 0) != (b > 0))) --q;
  return static_cast<std::int64_t>(q);
}

// Tables rewritten as w = m + g * u with u >= 0, shrinking the DP range by
// the common factor g of all offsets.
struct Reduced {
  std::int64_t min_sum = 0;  // sum of per-feature minima
  std::int64_t g = 0;        // 0 when every table is constant
  std::vector<std::vector<std::size_t>> u;
  std::vector<std::size_t> max_u;
  std::size_t span = 0;
};

Reduced Reduce(const std::vector<const std::vector<std::int64_t>*>& tables) {
  Reduced r;
  std::vector<std::int64_t> mins;
  for (const auto* t : tables) {
    const std::int64_t m = *std::min_element(t->begin(), t->end());
    mins.push_back(m);
    r.min_sum += m;
    for (std::int64_t w : *t) r.g = std::gcd(r.g, w - m);
  }
  std::size_t span = 0;
  for (std::size_t j = 0; j < tables.size(); ++j) {
    std::vector<std::size_t> u;
    std::size_t mx = 0;
    for (std::int64_t w : *tables[j]) {
      const std::size_t v = r.g == 0 ? 0 : static_cast<std::size_t>((w - mins[j]) / r.g);
      u.push_back(v);
      mx = std::max(mx, v);
    }
    r.u.push_back(std::move(u));
    r.max_u.push_back(mx);
    span += mx;
    if (span >= kMaxTableEntries) {
      Fail(ErrorKind::kOverflow, "weight span passes " + std::to_string(kMaxTableEntries) +
                                     " table entries; lower --digits");
    }
  }
  r.span = span;
  return r;
}

// Smallest U with min_sum + g * U >= need, or span + 1 when none.
std::int64_t MinIndex(const Reduced& r, __int128 need) {
  if (r.g == 0) return r.min_sum >= need ? 0 : static_cast<std::int64_t>(r.span) + 1;
  const std::int64_t idx = CeilDiv(need - r.min_sum, r.g);
  return std::clamp<std::int64_t>(idx, 0, static_cast<std::int64_t>(r.span) + 1);
}

// Dense multi-choice convolution: each feature contributes exactly one of
// its (offset, mass) items.
template <class Mass>
std::vector<Mass> Convolve(const Reduced& r, const std::vector<std::vector<Mass>>& masses) {
  std::vector<Mass> dp(r.span + 1, Mass(0));
  std::vector<Mass> next(r.span + 1, Mass(0));
  dp[0] = Mass(1);
  std::size_t cur = 0;
  for (std::size_t j = 0; j < r.u.size(); ++j) {
    const std::size_t upto = cur + r.max_u[j];
    std::fill(next.begin(), next.begin() + static_cast<std::ptrdiff_t>(upto) + 1, Mass(0));
    for (std::size_t v = 0; v < r.u[j].size(); ++v) {
      const Mass& m = masses[j][v];
      if (m == 0) continue;
      const std::size_t off = r.u[j][v];
      for (std::size_t c = 0; c <= cur; ++c) {
        if (dp[c] != 0) next[c + off] += dp[c] * m;
      }
    }
    std::swap(dp, next);
    cur = upto;
  }
  return dp;
}

template <class Mass>
Integer TailMass(const std::vector<Mass>& dp, std::int64_t from) {
  Integer total = 0;
  for (std::size_t c = static_cast<std::size_t>(std::max<std::int64_t>(from, 0)); c < dp.size(); ++c) {
    total += ToInteger(dp[c]);
  }
  return total;
}

bool FitsUint64(const Integer& bound) { return bound < Integer("18446744073709551615"); }

std::vector<std::uint64_t> ToUint64(const std::vector<Integer>& v) {
  std::vector<std::uint64_t> out;
  for (const Integer& x : v) out.push_back(x.get_ui());
  return out;
}

// Mass with quantized pre-step sum Q >= t for t in {ceil(-e), 0, ceil(e)},
// where Q = offset + sum over the DP features - threshold.
struct TailCounts {
  Integer possibly;  // Q >= ceil(-e)
  Integer nominal;   // Q >= 0
  Integer surely;    // Q >= ceil(e)
  Integer total;
};

template <class Mass>
TailCounts Tails(const QuantizedModel& q, const Reduced& r, const std::vector<std::vector<Mass>>& masses,
                 std::int64_t offset) {
  std::vector<Mass> dp = Convolve(r, masses);
  const __int128 base = static_cast<__int128>(q.threshold) - offset;
  const std::int64_t e_hi = ToInt64(Ceil(q.max_abs_error), "error bound");
  const std::int64_t e_lo = ToInt64(Ceil(Rational(-q.max_abs_error)), "error bound");
  TailCounts t;
  t.possibly = TailMass(dp, MinIndex(r, base + e_lo));
  t.nominal = TailMass(dp, MinIndex(r, base));
  t.surely = TailMass(dp, MinIndex(r, base + e_hi));
  t.total = TailMass(dp, 0);
  return t;
}

TailCounts DispatchTails(const QuantizedModel& q, const Reduced& r, const std::vector<std::vector<Integer>>& masses,
                         std::int64_t offset) {
  Integer bound = 1;
  for (const auto& m : masses) bound *= std::accumulate(m.begin(), m.end(), Integer(0));
  if (FitsUint64(bound)) {
    std::vector<std::vector<std::uint64_t>> small;
    for (const auto& m : masses) small.push_back(ToUint64(m));
    return Tails(q, r, small, offset);
  }
  return Tails(q, r, masses, offset);
}

// Categorical marginal as integer numerators over a common denominator.
std::pair<std::vector<Integer>, Integer> Numerators(const std::vector<Rational>& probs) {
  Integer den = 1;
  for (const Rational& p : probs) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), p.get_den_mpz_t());
  std::vector<Integer> num;
  for (const Rational& p : probs) num.push_back(p.get_num() * (den / p.get_den()));
  return {num, den};
}

}  // namespace

std::size_t QuantizedModel::ValueIndex(std::size_t i, const Rational& v) const {
  const auto& values = std::get<Enumerable>(model->domain(i)).values;
  auto it = std::lower_bound(values.begin(), values.end(), v);
  if (it == values.end() || *it != v) {
    Fail(ErrorKind::kDomain, "value " + ToString(v) + " not in the domain of feature " + std::to_string(i + 1));
  }
  return static_cast<std::size_t>(it - values.begin());
}

QuantizedModel Quantize(std::shared_ptr<const GamModel> model, unsigned digits) {
  QuantizedModel q = QuantizeWithScale(std::move(model), PowerOfTen(digits));
  q.digits = digits;
  return q;
}

QuantizedModel QuantizeWithScale(std::shared_ptr<const GamModel> model, const Integer& scale_int) {
  if (scale_int <= 0) Fail(ErrorKind::kValidation, "quantization scale must be positive");
  QuantizedModel q;
  q.scale = scale_int;
  const Rational scale(q.scale);
  Rational capacity_used = 0;
  Rational error = 0;
  for (std::size_t i = 0; i < model->num_features(); ++i) {
    const Enumerable& domain = RequireEnumerable(*model, i);
    std::vector<std::int64_t> table;
    Rational worst = 0;
    std::int64_t largest = 0;
    for (const auto& [v, value] : ComponentValues(model->component(i), domain)) {
      const Rational scaled = scale * value;
      const Integer w = RoundHalfEven(scaled);
      worst = std::max(worst, Abs(scaled - Rational(w)));
      const std::int64_t w64 = ToInt64(w, "weight of feature " + std::to_string(i + 1));
      largest = std::max(largest, w64 < 0 ? -w64 : w64);
      table.push_back(w64);
    }
    error += worst;
    capacity_used += largest;
    q.tables.push_back(std::move(table));
  }
  const Rational scaled_b0 = scale * model->beta0();
  const Integer b0 = RoundHalfEven(scaled_b0);
  error += Abs(scaled_b0 - Rational(b0));
  q.threshold = ToInt64(Integer(-b0), "intercept");
  capacity_used += Abs(Rational(b0));
  if (capacity_used > Rational(Integer(std::to_string(kWeightCapacity)))) {
    Fail(ErrorKind::kOverflow, "quantized weights exceed the integer capacity; lower --digits");
  }
  q.max_abs_error = error;
  q.lossless = error == 0;
  q.model = std::move(model);
  return q;
}

QuantizedModel Quantize(const GamModel& model, unsigned digits) {
  return Quantize(std::make_shared<const GamModel>(model), digits);
}

Integer ExactScale(const GamModel& model) {
  Integer den = model.beta0().get_den();
  for (std::size_t i = 0; i < model.num_features(); ++i) {
    const Enumerable& domain = RequireEnumerable(model, i);
    for (const auto& [v, value] : ComponentValues(model.component(i), domain)) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), value.get_den_mpz_t());
    }
  }
  return den;
}

std::optional<unsigned> AutoDigits(const GamModel& model, unsigned max_digits) {
  // Lossless at 10^d iff every denominator divides 10^d.
  const Integer den = ExactScale(model);
  for (unsigned d = 0; d <= max_digits; ++d) {
    if (mpz_divisible_p(PowerOfTen(d).get_mpz_t(), den.get_mpz_t())) return d;
  }
  return std::nullopt;
}

BoundedValue CountCompletions(const QuantizedModel& q, const Instance& x, const FeatureSubset& fixed) {
  const GamModel& model = *q.model;
  CheckInstance(model, x);
  const int label = Classify(model, x);
  std::int64_t offset = 0;
  std::vector<const std::vector<std::int64_t>*> tables;
  std::vector<std::vector<Integer>> masses;
  for (std::size_t i = 0; i < q.num_features(); ++i) {
    if (fixed.contains(i)) {
      offset += q.tables[i][q.ValueIndex(i, x[i])];
    } else {
      tables.push_back(&q.tables[i]);
      masses.emplace_back(q.tables[i].size(), Integer(1));
    }
  }
  for (std::size_t i : fixed.indices()) {
    if (i >= q.num_features()) Fail(ErrorKind::kValidation, "feature index " + std::to_string(i + 1) + " out of range");
  }
  const Reduced r = Reduce(tables);
  const TailCounts t = DispatchTails(q, r, masses, offset);
  const Rational total(t.total);
  BoundedValue out;
  if (label == 1) {
    out.value = Rational(t.nominal) / total;
    out.lower = Rational(t.surely) / total;
    out.upper = Rational(t.possibly) / total;
  } else {
    out.value = Rational(t.total - t.nominal) / total;
    out.lower = Rational(t.total - t.possibly) / total;
    out.upper = Rational(t.total - t.surely) / total;
  }
  out.exact = q.lossless;
  return out;
}

BoundedValue ExpectedLabel(const QuantizedModel& q, const ProductDistribution& dist) {
  const GamModel& model = *q.model;
  ValidateDistribution(model, dist);
  std::vector<const std::vector<std::int64_t>*> tables;
  std::vector<std::vector<Integer>> masses;
  for (std::size_t i = 0; i < q.num_features(); ++i) {
    tables.push_back(&q.tables[i]);
    masses.push_back(Numerators(EnumerableProbabilities(RequireEnumerable(model, i), dist[i])).first);
  }
  const Reduced r = Reduce(tables);
  const TailCounts t = DispatchTails(q, r, masses, 0);
  const Rational total(t.total);
  return {Rational(t.nominal) / total, Rational(t.surely) / total, Rational(t.possibly) / total, q.lossless};
}

std::vector<std::int64_t> ReachableSums::Sums() const {
  std::vector<std::int64_t> out;
  for (std::size_t u = 0; u < reachable.size(); ++u) {
    if (reachable[u]) out.push_back(base + step * static_cast<std::int64_t>(u));
  }
  return out;
}

namespace {

void RequireLossless(const QuantizedModel& q) {
  if (!q.lossless) {
    Fail(ErrorKind::kPrecision, "quantization at " + std::to_string(q.digits) +
                                    " digits is lossy (error bound " + ToString(q.max_abs_error) +
                                    "); raise --digits or pre-scale the model");
  }
}

// Boolean reachability layers, layer j covering the first j included features.
struct ReachLayers {
  Reduced r;
  std::vector<std::size_t> features;
  std::vector<std::vector<bool>> layers;
};

ReachLayers BuildLayers(const QuantizedModel& q, const FeatureSubset& exclude, bool keep_all) {
  ReachLayers out;
  std::vector<const std::vector<std::int64_t>*> tables;
  for (std::size_t i = 0; i < q.num_features(); ++i) {
    if (exclude.contains(i)) continue;
    out.features.push_back(i);
    tables.push_back(&q.tables[i]);
  }
  out.r = Reduce(tables);
  std::vector<bool> dp(out.r.span + 1, false);
  dp[0] = true;
  std::size_t cur = 0;
  std::size_t stored = 0;
  if (keep_all) out.layers.push_back(dp);
  for (std::size_t j = 0; j < out.features.size(); ++j) {
    std::vector<bool> next(out.r.span + 1, false);
    for (std::size_t off : out.r.u[j]) {
      for (std::size_t c = 0; c <= cur; ++c) {
        if (dp[c]) next[c + off] = true;
      }
    }
    cur += out.r.max_u[j];
    dp = std::move(next);
    if (keep_all) {
      stored += dp.size();
      if (stored > 16 * kMaxTableEntries) Fail(ErrorKind::kOverflow, "reachability layers exceed memory cap");
      out.layers.push_back(dp);
    }
  }
  if (!keep_all) out.layers.push_back(std::move(dp));
  return out;
}

}  // namespace

ReachableSums ComputeReachableSums(const QuantizedModel& q, const FeatureSubset& exclude) {
  RequireLossless(q);
  ReachLayers l = BuildLayers(q, exclude, false);
  ReachableSums out;
  out.base = -q.threshold + l.r.min_sum;
  out.step = l.r.g;
  out.reachable = l.r.g == 0 ? std::vector<bool>{true} : std::move(l.layers.back());
  return out;
}

std::optional<std::vector<std::size_t>> FindReachable(const QuantizedModel& q, const FeatureSubset& exclude,
                                                      std::int64_t lo, std::int64_t hi) {
  RequireLossless(q);
  if (lo > hi) return std::nullopt;
  ReachLayers l = BuildLayers(q, exclude, true);
  const __int128 base = static_cast<__int128>(-q.threshold) + l.r.min_sum;
  std::int64_t u_lo = 0;
  std::int64_t u_hi = 0;
  if (l.r.g == 0) {
    if (base < lo || base > hi) return std::nullopt;
  } else {
    u_lo = std::max<std::int64_t>(CeilDiv(lo - base, l.r.g), 0);
    u_hi = std::min<std::int64_t>(FloorDiv(hi - base, l.r.g), static_cast<std::int64_t>(l.r.span));
  }
  const std::vector<bool>& last = l.layers.back();
  for (std::int64_t u = u_lo; u <= u_hi; ++u) {
    if (!last[static_cast<std::size_t>(u)]) continue;
    std::vector<std::size_t> choice(q.num_features(), 0);
    std::size_t rest = static_cast<std::size_t>(u);
    for (std::size_t j = l.features.size(); j-- > 0;) {
      const auto& offs = l.r.u[j];
      for (std::size_t v = 0; v < offs.size(); ++v) {
        if (offs[v] <= rest && l.layers[j][rest - offs[v]]) {
          choice[l.features[j]] = v;
          rest -= offs[v];
          break;
        }
      }
    }
    return choice;
  }
  return std::nullopt;
}

namespace {

// For feature i: aggregates over subsets S of the other features, grouped by
// |S|, of the unnormalized v(S + i) and v(S), at three thresholds.
template <class Mass>
BoundedValue ShapDp(const QuantizedModel& q, const Reduced& r, std::size_t i, const std::vector<std::size_t>& xi,
                    const std::vector<std::vector<Mass>>& num, const std::vector<Mass>& den,
                    const Integer& den_total) {
  const std::size_t n = q.num_features();
  const std::size_t width = r.span + 1;
  // a[c * width + U]: features processed so far, c of them fixed.
  std::vector<Mass> a(n * width, Mass(0));
  std::vector<Mass> next(n * width, Mass(0));
  a[0] = Mass(1);
  std::size_t cur = 0;
  std::size_t processed = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const std::size_t upto = cur + r.max_u[j];
    for (std::size_t c = 0; c <= processed + 1 && c < n; ++c) {
      std::fill(next.begin() + static_cast<std::ptrdiff_t>(c * width),
                next.begin() + static_cast<std::ptrdiff_t>(c * width + upto + 1), Mass(0));
    }
    const std::size_t fixed_off = r.u[j][xi[j]];
    for (std::size_t c = 0; c <= processed; ++c) {
      const Mass* row = &a[c * width];
      for (std::size_t v = 0; v < r.u[j].size(); ++v) {
        const Mass& m = num[j][v];
        if (m == 0) continue;
        Mass* out = &next[c * width + r.u[j][v]];
        for (std::size_t u = 0; u <= cur; ++u) {
          if (row[u] != 0) out[u] += row[u] * m;
        }
      }
      Mass* out = &next[(c + 1) * width + fixed_off];
      for (std::size_t u = 0; u <= cur; ++u) {
        if (row[u] != 0) out[u] += row[u] * den[j];
      }
    }
    std::swap(a, next);
    cur = upto;
    ++processed;
  }

  const std::int64_t e_hi = ToInt64(Ceil(q.max_abs_error), "error bound");
  const std::int64_t e_lo = ToInt64(Ceil(Rational(-q.max_abs_error)), "error bound");
  const __int128 base = static_cast<__int128>(q.threshold);
  const std::int64_t need[3] = {MinIndex(r, base + e_lo), MinIndex(r, base), MinIndex(r, base + e_hi)};

  // Shapley weights c! (n-1-c)! / n!
  std::vector<Rational> coef(n);
  {
    Integer fact_n = 1;
    for (std::size_t t = 2; t <= n; ++t) fact_n *= static_cast<unsigned long>(t);
    std::vector<Integer> fact(n + 1, Integer(1));
    for (std::size_t t = 1; t <= n; ++t) fact[t] = fact[t - 1] * static_cast<unsigned long>(t);
    for (std::size_t c = 0; c < n; ++c) coef[c] = Ratio(fact[c] * fact[n - 1 - c], fact_n);
  }

  // with_i[t], without_i[t]: sum_c coef[c] * mass of v(S + i), v(S) at threshold t.
  Rational with_i[3] = {0, 0, 0};
  Rational without_i[3] = {0, 0, 0};
  std::vector<Integer> suffix(width + 1);
  for (std::size_t c = 0; c < n; ++c) {
    suffix[width] = 0;
    bool any = false;
    for (std::size_t u = width; u-- > 0;) {
      suffix[u] = suffix[u + 1];
      if (a[c * width + u] != 0) {
        suffix[u] += ToInteger(a[c * width + u]);
        any = true;
      }
    }
    if (!any) continue;
    auto tail = [&](std::int64_t from) -> const Integer& {
      return suffix[static_cast<std::size_t>(std::clamp<std::int64_t>(from, 0, static_cast<std::int64_t>(width)))];
    };
    for (int t = 0; t < 3; ++t) {
      const Integer fixed_mass = tail(need[t] - static_cast<std::int64_t>(r.u[i][xi[i]])) * ToInteger(den[i]);
      Integer free_mass = 0;
      for (std::size_t v = 0; v < r.u[i].size(); ++v) {
        if (num[i][v] == 0) continue;
        free_mass += tail(need[t] - static_cast<std::int64_t>(r.u[i][v])) * ToInteger(num[i][v]);
      }
      with_i[t] += coef[c] * Rational(fixed_mass);
      without_i[t] += coef[c] * Rational(free_mass);
    }
  }
  const Rational d(den_total);
  BoundedValue out;
  out.value = (with_i[1] - without_i[1]) / d;
  out.lower = (with_i[2] - without_i[0]) / d;
  out.upper = (with_i[0] - without_i[2]) / d;
  out.exact = q.lossless;
  return out;
}

}  // namespace

BoundedValue ShapClassificationDp(const QuantizedModel& q, const Instance& x, const ProductDistribution& dist,
                                  std::size_t i) {
  const GamModel& model = *q.model;
  if (model.task() != Task::kClassification) {
    Fail(ErrorKind::kUnsupportedConfiguration, "the counting path for Shapley values needs a classification model");
  }
  CheckInstance(model, x);
  ValidateDistribution(model, dist);
  const std::size_t n = q.num_features();
  if (i >= n) Fail(ErrorKind::kValidation, "feature index " + std::to_string(i + 1) + " out of range");

  std::vector<const std::vector<std::int64_t>*> tables;
  std::vector<std::vector<Integer>> num;
  std::vector<Integer> den;
  std::vector<std::size_t> xi;
  Integer den_total = 1;
  Integer bound = 1;
  for (std::size_t j = 0; j < n; ++j) {
    tables.push_back(&q.tables[j]);
    auto [nu, de] = Numerators(EnumerableProbabilities(RequireEnumerable(model, j), dist[j]));
    num.push_back(std::move(nu));
    den.push_back(de);
    den_total *= de;
    bound *= 2 * de;
    xi.push_back(q.ValueIndex(j, x[j]));
  }
  const Reduced r = Reduce(tables);
  if (n * (r.span + 1) > kMaxTableEntries) {
    Fail(ErrorKind::kOverflow, "Shapley table needs " + std::to_string(n * (r.span + 1)) + " entries; lower --digits");
  }
  if (FitsUint64(bound)) {
    std::vector<std::vector<std::uint64_t>> small;
    for (const auto& m : num) small.push_back(ToUint64(m));
    return ShapDp(q, r, i, xi, small, ToUint64(den), den_total);
  }
  return ShapDp(q, r, i, xi, num, den, den_total);
}

}  // namespace gamx
