#include "gamx/generator.h"

#include <algorithm>

#include "gamx/errors.h"

namespace gamx {

std::uint64_t Rng::Below(std::uint64_t n) {
  if (n == 0) Fail(ErrorKind::kValidation, "Rng::Below(0)");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = Next();
  } while (v >= limit);
  return v % n;
}

std::int64_t Rng::Range(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(Below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rational Rng::Grid(std::int64_t lo, std::int64_t hi, std::int64_t den) {
  return Ratio(Integer(static_cast<long>(Range(lo * den, hi * den))), Integer(static_cast<long>(den)));
}

namespace {

// Uniform multiple of (hi - lo) / steps in [lo, hi].
Rational Between(Rng& rng, const Rational& lo, const Rational& hi, std::int64_t steps) {
  return lo + (hi - lo) * Ratio(static_cast<long>(rng.Range(0, steps)), steps);
}

FeatureDomain RandomDomain(Rng& rng, DomainKind kind, std::size_t size) {
  switch (kind) {
    case DomainKind::kEnumerable: {
      // Distinct multiples of 1/2 in [-3, 3].
      std::vector<Rational> pool;
      for (long v = -6; v <= 6; ++v) pool.push_back(Ratio(v, 2));
      const std::size_t n = 1 + rng.Below(std::max<std::size_t>(size, 1));
      std::vector<Rational> values;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t pick = j + rng.Below(pool.size() - j);
        std::swap(pool[j], pool[pick]);
        values.push_back(pool[j]);
      }
      std::sort(values.begin(), values.end());
      return Enumerable{values};
    }
    case DomainKind::kIntRange: {
      const std::int64_t lo = rng.Range(-6, 2);
      return IntegerRange{Integer(static_cast<long>(lo)), Integer(static_cast<long>(lo + rng.Range(0, 8)))};
    }
    case DomainKind::kRealInterval: {
      const Rational lo = rng.Grid(-4, 0, 2);
      return RealInterval{lo, lo + rng.Grid(1, 4, 2)};
    }
  }
  return Enumerable{{0}};
}

Rational RandomPoint(Rng& rng, const FeatureDomain& domain) {
  if (const auto* e = std::get_if<Enumerable>(&domain)) return e->values[rng.Below(e->values.size())];
  if (const auto* r = std::get_if<IntegerRange>(&domain)) {
    const Integer span = r->hi - r->lo;
    return Rational(r->lo + Integer(static_cast<unsigned long>(rng.Below(span.get_ui() + 1))));
  }
  const auto& r = std::get<RealInterval>(domain);
  return Between(rng, r.lo, r.hi, 8);
}

SplineShape RandomSpline(Rng& rng, const Rational& lo, const Rational& hi) {
  SplineShape s;
  const Rational end = hi > lo ? hi : Rational(lo + 1);
  s.knots.push_back(lo);
  if (rng.Coin()) s.knots.push_back(Between(rng, lo, end, 4));
  s.knots.push_back(end);
  s.knots.erase(std::unique(s.knots.begin(), s.knots.end()), s.knots.end());
  for (std::size_t j = 0; j + 1 < s.knots.size(); ++j) {
    const std::size_t degree = rng.Below(4);
    std::vector<Rational> asc;
    for (std::size_t p = 0; p <= degree; ++p) asc.push_back(p == 3 ? rng.Grid(-1, 1, 4) : rng.Grid(-2, 2, 2));
    s.polys.emplace_back(asc);
  }
  return s;
}

DecisionTree RandomTree(Rng& rng, const Rational& lo, const Rational& hi, int depth) {
  DecisionTree tree;
  // Builds in preorder so that node 0 is the root.
  struct Builder {
    Rng& rng;
    DecisionTree& tree;
    int Add(const Rational& a, const Rational& b, int depth) {
      const int index = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      if (depth == 0 || !(a < b) || rng.Below(4) == 0) {
        tree.nodes[index].value = rng.Grid(-2, 2, 2);
        return index;
      }
      TreeNode node;
      node.is_leaf = false;
      node.test = rng.Coin() ? TreeNode::Test::kGreaterEqual : TreeNode::Test::kLess;
      node.threshold = a + (b - a) * Ratio(static_cast<long>(rng.Range(1, 3)), 4);
      const bool ge = node.test == TreeNode::Test::kGreaterEqual;
      // The true branch of x >= r covers [r, b]; of x < r covers [a, r).
      node.if_true = ge ? Add(node.threshold, b, depth - 1) : Add(a, node.threshold, depth - 1);
      node.if_false = ge ? Add(a, node.threshold, depth - 1) : Add(node.threshold, b, depth - 1);
      tree.nodes[index] = node;
      return index;
    }
  } builder{rng, tree};
  builder.Add(lo, hi, depth);
  return tree;
}

TreeEnsembleShape RandomEnsemble(Rng& rng, const Rational& lo, const Rational& hi) {
  TreeEnsembleShape e;
  const std::size_t n = 1 + rng.Below(2);
  for (std::size_t t = 0; t < n; ++t) {
    e.trees.push_back(RandomTree(rng, lo - Rational(1, 2), hi + Rational(1, 2), 2));
    e.tree_weights.push_back(rng.Grid(1, 2, 2));
  }
  e.tree_bias = rng.Grid(-1, 1, 2);
  return e;
}

}  // namespace

GeneratedCase Generate(const GenOptions& options) {
  if (options.k == 0) Fail(ErrorKind::kValidation, "k must be at least 1");
  Rng rng(options.seed);
  std::vector<Component> components;
  std::vector<FeatureDomain> domains;
  for (std::size_t i = 0; i < options.k; ++i) {
    FeatureDomain domain = RandomDomain(rng, options.domain, options.domain_size);
    auto [lo, hi] = Hull(domain);
    Component c;
    c.beta = rng.Below(8) == 0 ? Rational(0) : rng.Grid(-2, 2, 2);
    switch (options.component) {
      case ComponentKind::kSpline:
        c.shape = RandomSpline(rng, lo, hi);
        break;
      case ComponentKind::kMlp:
        c.shape = RandomMlp(rng, 1 + rng.Below(2), 1 + rng.Below(3));
        break;
      case ComponentKind::kTreeEnsemble:
        c.shape = RandomEnsemble(rng, lo, hi);
        break;
    }
    components.push_back(std::move(c));
    domains.push_back(std::move(domain));
  }
  // Centre the intercept on a random input so that labels are mixed.
  Rational centre = 0;
  Instance x;
  for (std::size_t i = 0; i < options.k; ++i) {
    const Rational z = RandomPoint(rng, domains[i]);
    if (components[i].beta != 0) centre += components[i].beta * EvaluateShape(components[i].shape, z);
    x.push_back(RandomPoint(rng, domains[i]));
  }
  Rational beta0 = -centre + rng.Grid(-1, 1, 2);
  return {GamModel(options.task, std::move(beta0), std::move(components), std::move(domains)), std::move(x)};
}

SplineShape RandomSmoothSpline(Rng& rng, const Rational& lo, const Rational& hi, std::size_t pieces) {
  SplineShape s;
  s.knots.push_back(lo);
  for (std::size_t j = 1; j < pieces; ++j) {
    const Rational k = lo + (hi - lo) * Ratio(static_cast<long>(j), static_cast<long>(pieces));
    s.knots.push_back(k);
  }
  s.knots.push_back(hi);
  Rational level = rng.Grid(-2, 2, 4);
  for (std::size_t j = 0; j + 1 < s.knots.size(); ++j) {
    const Rational& a = s.knots[j];
    const Rational& b = s.knots[j + 1];
    const Rational r1 = Between(rng, a - 1, b + 1, 8);
    const Rational r2 = Between(rng, a - 1, b + 1, 8);
    Rational c = rng.Grid(-2, 2, 2);
    if (c == 0) c = 1;
    Polynomial derivative;
    switch (rng.Below(3)) {
      case 0:  // c (w - r1)(w - r2)
        derivative = Polynomial({c * r1 * r2, -c * (r1 + r2), c});
        break;
      case 1:  // c (w - r1)
        derivative = Polynomial({-c * r1, c});
        break;
      default:
        derivative = Polynomial::Constant(c);
        break;
    }
    Polynomial p = derivative.Antiderivative();
    p = p + Polynomial::Constant(level - p(a));
    level = p(b);
    s.polys.push_back(std::move(p));
  }
  return s;
}

SplineShape RandomCubic(Rng& rng, const Rational& lo, const Rational& hi) {
  SplineShape s;
  s.knots = {lo, hi};
  std::vector<Rational> asc;
  for (int p = 0; p < 4; ++p) asc.push_back(rng.Grid(-5, 5, 8));
  if (asc[3] == 0) asc[3] = Rational(1, 8);
  s.polys.emplace_back(asc);
  return s;
}

MlpShape RandomMlp(Rng& rng, std::size_t depth, std::size_t width) {
  MlpShape m;
  std::size_t in = 1;
  for (std::size_t l = 0; l <= depth; ++l) {
    const std::size_t out = l == depth ? 1 : width;
    MlpLayer layer;
    layer.weights.assign(in, std::vector<Rational>(out));
    for (auto& row : layer.weights) {
      for (Rational& w : row) w = rng.Grid(-2, 2, 2);
    }
    for (std::size_t o = 0; o < out; ++o) layer.bias.push_back(rng.Grid(-2, 2, 2));
    m.layers.push_back(std::move(layer));
    in = out;
  }
  return m;
}

MlpShape FoldingGadget(unsigned n) {
  // Hidden layer i carries a = ReLU(r - c_i), b = ReLU(c_i - r) and an
  // accumulator, where r = a + b of the previous layer is the folded input.
  MlpShape m;
  for (unsigned i = 1; i <= n; ++i) {
    Integer ci;
    mpz_ui_pow_ui(ci.get_mpz_t(), 2, n - i);
    const Rational c(ci);
    MlpLayer layer;
    layer.bias = {-c, c, 0};
    if (i == 1) {
      layer.weights = {{1, -1, 0}};
    } else {
      layer.weights = {{1, -1, 1}, {1, -1, 0}, {0, 0, 1}};
    }
    m.layers.push_back(std::move(layer));
  }
  MlpLayer out;
  out.weights = {{1}, {0}, {1}};
  out.bias = {0};
  m.layers.push_back(std::move(out));
  return m;
}

std::string DomainKindName(DomainKind kind) {
  switch (kind) {
    case DomainKind::kEnumerable:
      return "enumerable";
    case DomainKind::kIntRange:
      return "int_range";
    case DomainKind::kRealInterval:
      return "real_interval";
  }
  return "?";
}

std::string ComponentKindName(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kSpline:
      return "spline";
    case ComponentKind::kMlp:
      return "mlp";
    case ComponentKind::kTreeEnsemble:
      return "tree_ensemble";
  }
  return "?";
}

}  // namespace gamx
