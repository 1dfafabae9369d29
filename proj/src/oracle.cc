#include "gamx/oracle.h"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "gamx/component_analysis.h"
#include "gamx/errors.h"

namespace gamx {
namespace {

constexpr std::size_t kMaxSubsetFeatures = 24;

// Every input of the product domain with its model output, feature 0 varying
// fastest.
struct Table {
  std::vector<std::size_t> radix;
  std::vector<std::size_t> stride;
  std::vector<std::vector<Rational>> values;  // beta_j * f_j per domain value
  std::vector<Rational> out;                  // label or regression value
  std::size_t size = 1;

  std::size_t Digit(std::size_t idx, std::size_t j) const { return (idx / stride[j]) % radix[j]; }
};

Table Build(const GamModel& model, std::uint64_t ceiling) {
  Table t;
  Integer total = 1;
  for (std::size_t j = 0; j < model.num_features(); ++j) {
    const auto* e = std::get_if<Enumerable>(&model.domain(j));
    if (e == nullptr) {
      Fail(ErrorKind::kUnsupportedConfiguration,
           "the oracle needs enumerable domains; feature " + std::to_string(j + 1) + " is not");
    }
    total *= static_cast<unsigned long>(e->values.size());
    if (total > Integer(static_cast<unsigned long>(ceiling))) {
      Fail(ErrorKind::kStateSpaceTooLarge, "state space exceeds the oracle ceiling of " + std::to_string(ceiling) +
                                               " (set GAMX_ORACLE_CEILING to raise it)");
    }
    std::vector<Rational> vals;
    for (auto& [v, value] : ComponentValues(model.component(j), *e)) vals.push_back(std::move(value));
    t.stride.push_back(t.size);
    t.radix.push_back(vals.size());
    t.size *= vals.size();
    t.values.push_back(std::move(vals));
  }
  const bool classify = model.task() == Task::kClassification;
  t.out.resize(t.size);
  // Odometer with a running sum.
  std::vector<std::size_t> digit(t.radix.size(), 0);
  Rational sum = model.beta0();
  for (const auto& v : t.values) sum += v[0];
  for (std::size_t idx = 0; idx < t.size; ++idx) {
    t.out[idx] = classify ? Rational(Step(sum)) : sum;
    for (std::size_t j = 0; j < digit.size(); ++j) {
      if (digit[j] + 1 < t.radix[j]) {
        sum += t.values[j][digit[j] + 1] - t.values[j][digit[j]];
        ++digit[j];
        break;
      }
      sum += t.values[j][0] - t.values[j][digit[j]];
      digit[j] = 0;
    }
  }
  return t;
}

std::size_t IndexOf(const GamModel& model, const Table& t, const Instance& x) {
  CheckInstance(model, x);
  std::size_t idx = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto& values = std::get<Enumerable>(model.domain(j)).values;
    idx += static_cast<std::size_t>(std::lower_bound(values.begin(), values.end(), x[j]) - values.begin()) *
           t.stride[j];
  }
  return idx;
}

unsigned long long MaskOf(const FeatureSubset& s, std::size_t k) {
  unsigned long long m = 0;
  for (std::size_t i : s.indices()) {
    if (i >= k) Fail(ErrorKind::kValidation, "feature index " + std::to_string(i + 1) + " out of range");
    m |= 1ULL << i;
  }
  return m;
}

// flips[T]: some input that differs from x only inside T changes the output.
std::vector<bool> FlipClosure(const Table& t, std::size_t x_idx) {
  const std::size_t k = t.radix.size();
  if (k > kMaxSubsetFeatures) {
    Fail(ErrorKind::kStateSpaceTooLarge, "subset enumeration supports at most " +
                                             std::to_string(kMaxSubsetFeatures) + " features");
  }
  std::vector<bool> flips(std::size_t{1} << k, false);
  for (std::size_t idx = 0; idx < t.size; ++idx) {
    if (t.out[idx] == t.out[x_idx]) continue;
    unsigned long long mask = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (t.Digit(idx, j) != t.Digit(x_idx, j)) mask |= 1ULL << j;
    }
    flips[mask] = true;
  }
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t m = 0; m < flips.size(); ++m) {
      if ((m >> j & 1) && flips[m ^ (std::size_t{1} << j)]) flips[m] = true;
    }
  }
  return flips;
}

// Smallest subset, in (size, lexicographic) order, satisfying pred(mask).
template <class Pred>
std::optional<OracleMinimum> FirstSubset(std::size_t k, Pred pred) {
  for (std::size_t c = 0; c <= k; ++c) {
    std::vector<bool> pick(k, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(c), true);
    do {
      unsigned long long mask = 0;
      std::vector<std::size_t> indices;
      for (std::size_t j = 0; j < k; ++j) {
        if (pick[j]) {
          mask |= 1ULL << j;
          indices.push_back(j);
        }
      }
      if (pred(mask)) return OracleMinimum{c, FeatureSubset(indices)};
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return std::nullopt;
}

std::vector<std::vector<Rational>> Marginals(const GamModel& model, const ProductDistribution& dist) {
  ValidateDistribution(model, dist);
  std::vector<std::vector<Rational>> p;
  for (std::size_t j = 0; j < model.num_features(); ++j) {
    p.push_back(EnumerableProbabilities(std::get<Enumerable>(model.domain(j)), dist[j]));
  }
  return p;
}

// v[mask] = E[f(x_mask, z_rest)] by fixing or averaging one axis at a time.
void AllValues(const Table& t, const std::vector<std::vector<Rational>>& p, const std::vector<std::size_t>& xd,
               std::vector<Rational> tensor, std::size_t j, unsigned long long mask, std::vector<Rational>& v) {
  if (j == t.radix.size()) {
    v[mask] = tensor[0];
    return;
  }
  const std::size_t r = t.radix[j];
  const std::size_t rest = tensor.size() / r;
  std::vector<Rational> fixed(rest);
  std::vector<Rational> averaged(rest);
  for (std::size_t s = 0; s < rest; ++s) {
    fixed[s] = tensor[xd[j] + r * s];
    Rational acc = 0;
    for (std::size_t d = 0; d < r; ++d) {
      if (p[j][d] != 0) acc += p[j][d] * tensor[d + r * s];
    }
    averaged[s] = std::move(acc);
  }
  tensor.clear();
  tensor.shrink_to_fit();
  AllValues(t, p, xd, std::move(fixed), j + 1, mask | (1ULL << j), v);
  AllValues(t, p, xd, std::move(averaged), j + 1, mask, v);
}

}  // namespace

std::uint64_t OracleCeiling() {
  if (const char* env = std::getenv("GAMX_ORACLE_CEILING")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultOracleCeiling;
}

bool OracleSufficient(const GamModel& model, const Instance& x, const FeatureSubset& s, std::uint64_t ceiling) {
  const Table t = Build(model, ceiling);
  const std::size_t x_idx = IndexOf(model, t, x);
  const unsigned long long fixed = MaskOf(s, model.num_features());
  for (std::size_t idx = 0; idx < t.size; ++idx) {
    if (t.out[idx] == t.out[x_idx]) continue;
    bool agrees = true;
    for (std::size_t j = 0; j < t.radix.size() && agrees; ++j) {
      if ((fixed >> j & 1) && t.Digit(idx, j) != t.Digit(x_idx, j)) agrees = false;
    }
    if (agrees) return false;
  }
  return true;
}

bool OracleContrastive(const GamModel& model, const Instance& x, const FeatureSubset& s, std::uint64_t ceiling) {
  MaskOf(s, model.num_features());
  return !OracleSufficient(model, x, s.Complement(model.num_features()), ceiling);
}

OracleMinimum OracleMinSufficient(const GamModel& model, const Instance& x, std::uint64_t ceiling) {
  const Table t = Build(model, ceiling);
  const std::vector<bool> flips = FlipClosure(t, IndexOf(model, t, x));
  const std::size_t k = model.num_features();
  const unsigned long long all = (1ULL << k) - 1;
  return *FirstSubset(k, [&](unsigned long long s) { return !flips[all & ~s]; });
}

std::optional<OracleMinimum> OracleMinContrastive(const GamModel& model, const Instance& x, std::uint64_t ceiling) {
  const Table t = Build(model, ceiling);
  const std::vector<bool> flips = FlipClosure(t, IndexOf(model, t, x));
  return FirstSubset(model.num_features(), [&](unsigned long long s) { return static_cast<bool>(flips[s]); });
}

Rational OracleCc(const GamModel& model, const Instance& x, const FeatureSubset& s, std::uint64_t ceiling) {
  const Table t = Build(model, ceiling);
  const std::size_t x_idx = IndexOf(model, t, x);
  const unsigned long long fixed = MaskOf(s, model.num_features());
  Integer match = 0;
  Integer total = 0;
  for (std::size_t idx = 0; idx < t.size; ++idx) {
    bool agrees = true;
    for (std::size_t j = 0; j < t.radix.size() && agrees; ++j) {
      if ((fixed >> j & 1) && t.Digit(idx, j) != t.Digit(x_idx, j)) agrees = false;
    }
    if (!agrees) continue;
    ++total;
    if (t.out[idx] == t.out[x_idx]) ++match;
  }
  return Ratio(match, total);
}

Rational OracleExpectation(const GamModel& model, const ProductDistribution& dist, std::uint64_t ceiling) {
  const Table t = Build(model, ceiling);
  const auto p = Marginals(model, dist);
  Rational total = 0;
  for (std::size_t idx = 0; idx < t.size; ++idx) {
    Rational w = 1;
    for (std::size_t j = 0; j < t.radix.size() && w != 0; ++j) w *= p[j][t.Digit(idx, j)];
    if (w != 0) total += w * t.out[idx];
  }
  return total;
}

std::vector<Rational> OracleShap(const GamModel& model, const Instance& x, const ProductDistribution& dist,
                                 std::uint64_t ceiling) {
  const Table t = Build(model, ceiling);
  const std::size_t x_idx = IndexOf(model, t, x);
  const std::size_t n = model.num_features();
  if (n > kMaxSubsetFeatures) {
    Fail(ErrorKind::kStateSpaceTooLarge, "subset enumeration supports at most " +
                                             std::to_string(kMaxSubsetFeatures) + " features");
  }
  const auto p = Marginals(model, dist);
  std::vector<std::size_t> xd;
  for (std::size_t j = 0; j < n; ++j) xd.push_back(t.Digit(x_idx, j));
  std::vector<Rational> v(std::size_t{1} << n);
  AllValues(t, p, xd, t.out, 0, 0, v);

  std::vector<Integer> fact(n + 1, Integer(1));
  for (std::size_t c = 1; c <= n; ++c) fact[c] = fact[c - 1] * static_cast<unsigned long>(c);
  std::vector<Rational> phi(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned long long bit = 1ULL << i;
    for (unsigned long long s = 0; s < v.size(); ++s) {
      if (s & bit) continue;
      const std::size_t c = static_cast<std::size_t>(__builtin_popcountll(s));
      phi[i] += Ratio(fact[c] * fact[n - 1 - c], fact[n]) * (v[s | bit] - v[s]);
    }
  }
  return phi;
}

bool OracleRedundant(const GamModel& model, std::size_t i, std::uint64_t ceiling) {
  if (i >= model.num_features()) Fail(ErrorKind::kValidation, "feature index " + std::to_string(i + 1) + " out of range");
  const Table t = Build(model, ceiling);
  for (std::size_t idx = 0; idx < t.size; ++idx) {
    if (t.Digit(idx, i) != 0) continue;
    for (std::size_t d = 1; d < t.radix[i]; ++d) {
      if (t.out[idx + d * t.stride[i]] != t.out[idx]) return false;
    }
  }
  return true;
}

}  // namespace gamx
