#include "gamx/cli.h"

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "gamx/counting.h"
#include "gamx/errors.h"
#include "gamx/generator.h"
#include "gamx/io.h"
#include "gamx/oracle.h"
#include "gamx/redundancy.h"
#include "gamx/shap.h"
#include "gamx/sufficiency.h"

namespace gamx {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct Flags {
  std::string model_path;
  std::string instance_path;
  std::optional<std::string> subset;
  std::optional<std::size_t> feature;
  std::optional<std::size_t> d;
  std::optional<unsigned> digits;
  std::string dist_path;
  std::string grid_path;
  std::size_t budget = kDefaultPieceBudget;
  std::uint64_t seed = 1;
  std::string format = "json";
  bool strict_exit = false;
  std::size_t k = 3;
  std::string domain = "enumerable";
  std::string component = "spline";
  std::string task = "classification";
  std::size_t domain_size = 4;
  std::string model_out;
  std::string instance_out;
};

std::string Str(const Rational& r) { return ToString(r); }

ordered_json InstanceJson(const Instance& x) {
  ordered_json a = ordered_json::array();
  for (const Rational& v : x) a.push_back(Str(v));
  return a;
}

ordered_json SubsetJson(const FeatureSubset& s) {
  ordered_json a = ordered_json::array();
  for (std::size_t i : s.indices()) a.push_back(i + 1);
  return a;
}

FeatureSubset ParseSubset(const std::string& text, std::size_t k) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const std::string trimmed = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(trimmed, &pos);
    } catch (const std::exception&) {
      Fail(ErrorKind::kParse, "bad feature index '" + trimmed + "' in --subset");
    }
    if (pos != trimmed.size()) Fail(ErrorKind::kParse, "bad feature index '" + trimmed + "' in --subset");
    if (v < 1 || static_cast<std::size_t>(v) > k) {
      Fail(ErrorKind::kValidation, "feature index " + trimmed + " outside 1.." + std::to_string(k));
    }
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) Fail(ErrorKind::kValidation, "duplicate index in --subset");
  return FeatureSubset(out);
}

std::size_t FeatureIndex(const Flags& f, std::size_t k) {
  if (!f.feature) Fail(ErrorKind::kValidation, "--feature is required");
  if (*f.feature < 1 || *f.feature > k) {
    Fail(ErrorKind::kValidation, "--feature " + std::to_string(*f.feature) + " outside 1.." + std::to_string(k));
  }
  return *f.feature - 1;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse:
    case ErrorKind::kValidation:
    case ErrorKind::kDomain:
      return kExitInvalid;
    case ErrorKind::kPrecision:
    case ErrorKind::kOverflow:
      return kExitPrecision;
    default:
      return kExitUnsupported;
  }
}

std::string Hint(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kBudgetExceeded:
      return "the MLP component has too many linear pieces; discretize the domain or use an oracle-* command";
    case ErrorKind::kStateSpaceTooLarge:
      return "raise GAMX_ORACLE_CEILING or shrink the domains";
    case ErrorKind::kPrecision:
      return "raise --digits or pre-scale the model to exact decimals";
    default:
      return "";
  }
}

void WriteText(const ordered_json& doc, std::ostream& out, const std::string& prefix = "") {
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it->is_object()) {
      WriteText(*it, out, prefix + it.key() + ".");
    } else if (it->is_string()) {
      out << prefix << it.key() << ": " << it->get<std::string>() << "\n";
    } else {
      out << prefix << it.key() << ": " << it->dump() << "\n";
    }
  }
}

class Runner {
 public:
  Runner(const Flags& flags, std::ostream& out) : f_(flags), out_(out) {}

  int Run(const std::string& command) {
    const auto start = std::chrono::steady_clock::now();
    ordered_json doc;
    doc["query"] = command;
    std::optional<bool> decision = Dispatch(command, doc);
    if (command == "gen" || command == "discretize") return kExitOk;
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    doc["timings"] = {{"total_ms", ms}};
    if (f_.format == "text") {
      WriteText(doc, out_);
    } else {
      out_ << doc.dump() << "\n";
    }
    if (f_.strict_exit && decision && !*decision) return kExitNo;
    return kExitOk;
  }

 private:
  GamModel Model() const {
    if (f_.model_path.empty()) Fail(ErrorKind::kValidation, "--model is required");
    return LoadModel(ReadFile(f_.model_path));
  }

  Instance LoadX(const GamModel& model) const {
    if (f_.instance_path.empty()) Fail(ErrorKind::kValidation, "--instance is required");
    Instance x = LoadInstance(ReadFile(f_.instance_path));
    CheckInstance(model, x);
    return x;
  }

  FeatureSubset Subset(const GamModel& model) const {
    if (!f_.subset) Fail(ErrorKind::kValidation, "--subset is required");
    return ParseSubset(*f_.subset, model.num_features());
  }

  ProductDistribution Dist(const GamModel& model) const {
    if (f_.dist_path.empty()) return UniformProduct(model.num_features());
    ProductDistribution d = LoadDistribution(ReadFile(f_.dist_path));
    ValidateDistribution(model, d);
    return d;
  }

  QuantizedModel Quantized(const GamModel& model) const {
    auto shared = std::make_shared<const GamModel>(model);
    if (f_.digits) return Quantize(shared, *f_.digits);
    if (auto d = AutoDigits(model, kDefaultDigits)) return Quantize(shared, *d);
    return QuantizeWithScale(shared, ExactScale(model));
  }

  static void Bounded(ordered_json& doc, const BoundedValue& v) {
    doc["answer"] = Str(v.value);
    doc["exact"] = v.exact;
    if (!v.exact) doc["bounds"] = {{"lower", Str(v.lower)}, {"upper", Str(v.upper)}};
  }

  std::optional<bool> Dispatch(const std::string& command, ordered_json& doc) {
    if (command == "gen") return Gen();
    GamModel model = Model();
    if (command == "discretize") return Discretize(model);
    doc["exact"] = true;
    doc["certificate"] = nullptr;
    doc["witness"] = nullptr;
    if (command == "quantize") {
      const QuantizedModel q = Quantized(model);
      ordered_json tables = ordered_json::array();
      for (const auto& t : q.tables) tables.push_back(t);
      doc["answer"] = {{"scale", ToString(q.scale)},
                       {"threshold", q.threshold},
                       {"tables", tables},
                       {"max_abs_error", Str(q.max_abs_error)},
                       {"lossless", q.lossless}};
      doc["exact"] = q.lossless;
      return std::nullopt;
    }
    if (command == "fr" || command == "oracle-fr") {
      const std::size_t i = FeatureIndex(f_, model.num_features());
      if (command == "oracle-fr") {
        doc["answer"] = OracleRedundant(model, i);
        return doc["answer"].get<bool>();
      }
      const RedundancyResult r = IsRedundant(model, i, f_.budget);
      doc["answer"] = r.redundant;
      doc["certificate"] = {{"method", r.method}};
      if (r.witness) {
        doc["witness"] = {{"instance", InstanceJson(r.witness->base)},
                          {"v1", Str(r.witness->v1)},
                          {"v2", Str(r.witness->v2)}};
      }
      return r.redundant;
    }

    Instance x = LoadX(model);
    if (command == "eval") {
      doc["answer"] = Str(Evaluate(model, x));
      doc["certificate"] = {{"pre_step_sum", Str(PreStepSum(model, x))}};
      return std::nullopt;
    }
    if (command == "csr") {
      const FeatureSubset s = Subset(model);
      const SufficiencyResult r = CheckSufficient(model, x, s, f_.budget);
      doc["answer"] = r.sufficient;
      doc["certificate"] = {{"subset", SubsetJson(s)}, {"worst_sum", r.worst_sum.ToString()}};
      if (r.witness) doc["witness"] = InstanceJson(*r.witness);
      return r.sufficient;
    }
    if (command == "msr") {
      const ReasonCertificate c = MinimalSufficient(model, x, f_.budget);
      doc["certificate"] = {{"subset", SubsetJson(c.subset)}, {"size", c.subset.size()}};
      if (f_.d) {
        doc["answer"] = c.subset.size() <= *f_.d;
        return c.subset.size() <= *f_.d;
      }
      doc["answer"] = SubsetJson(c.subset);
      return std::nullopt;
    }
    if (command == "mcr") {
      try {
        const ReasonCertificate c = MinimalContrastive(model, x, f_.budget);
        doc["certificate"] = {{"subset", SubsetJson(c.subset)}, {"size", c.subset.size()}};
        if (c.witness) doc["witness"] = InstanceJson(*c.witness);
        if (f_.d) {
          doc["answer"] = c.subset.size() <= *f_.d;
          return c.subset.size() <= *f_.d;
        }
        doc["answer"] = SubsetJson(c.subset);
        return std::nullopt;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kNoContrastiveReason) throw;
        doc["certificate"] = {{"reason", e.what()}};
        doc["answer"] = f_.d ? json(false) : json(nullptr);
        return false;
      }
    }
    if (command == "cc") {
      const FeatureSubset s = Subset(model);
      const QuantizedModel q = Quantized(model);
      Bounded(doc, CountCompletions(q, x, s));
      doc["certificate"] = {{"subset", SubsetJson(s)}, {"scale", ToString(q.scale)}};
      return std::nullopt;
    }
    if (command == "shap") {
      const ProductDistribution dist = Dist(model);
      const ShapResult r = ShapAll(model, x, dist, f_.digits, f_.budget);
      ordered_json values = ordered_json::array();
      Rational total = 0;
      for (const Rational& v : r.values) {
        values.push_back(Str(v));
        total += v;
      }
      doc["answer"] = values;
      doc["exact"] = r.exact;
      doc["certificate"] = {{"baseline", Str(r.baseline)},
                            {"full", Str(r.full)},
                            {"sum", Str(total)},
                            {"efficiency", total == r.full - r.baseline}};
      if (!r.exact) {
        ordered_json lo = ordered_json::array();
        ordered_json hi = ordered_json::array();
        for (std::size_t i = 0; i < r.values.size(); ++i) {
          lo.push_back(Str(r.lower[i]));
          hi.push_back(Str(r.upper[i]));
        }
        doc["bounds"] = {{"lower", lo}, {"upper", hi}};
      }
      return std::nullopt;
    }
    const std::uint64_t ceiling = OracleCeiling();
    if (command == "oracle-csr") {
      const FeatureSubset s = Subset(model);
      const bool ok = OracleSufficient(model, x, s, ceiling);
      doc["answer"] = ok;
      doc["certificate"] = {{"subset", SubsetJson(s)}};
      return ok;
    }
    if (command == "oracle-msr") {
      const OracleMinimum m = OracleMinSufficient(model, x, ceiling);
      doc["certificate"] = {{"subset", SubsetJson(m.subset)}, {"size", m.cardinality}};
      if (f_.d) {
        doc["answer"] = m.cardinality <= *f_.d;
        return m.cardinality <= *f_.d;
      }
      doc["answer"] = SubsetJson(m.subset);
      return std::nullopt;
    }
    if (command == "oracle-mcr") {
      const auto m = OracleMinContrastive(model, x, ceiling);
      if (!m) {
        doc["answer"] = f_.d ? json(false) : json(nullptr);
        doc["certificate"] = {{"reason", "the prediction is constant over the whole domain"}};
        return false;
      }
      doc["certificate"] = {{"subset", SubsetJson(m->subset)}, {"size", m->cardinality}};
      if (f_.d) {
        doc["answer"] = m->cardinality <= *f_.d;
        return m->cardinality <= *f_.d;
      }
      doc["answer"] = SubsetJson(m->subset);
      return std::nullopt;
    }
    if (command == "oracle-cc") {
      const FeatureSubset s = Subset(model);
      doc["answer"] = Str(OracleCc(model, x, s, ceiling));
      doc["certificate"] = {{"subset", SubsetJson(s)}};
      return std::nullopt;
    }
    if (command == "oracle-shap") {
      const ProductDistribution dist = Dist(model);
      ordered_json values = ordered_json::array();
      for (const Rational& v : OracleShap(model, x, dist, ceiling)) values.push_back(Str(v));
      doc["answer"] = values;
      doc["certificate"] = {{"baseline", Str(OracleExpectation(model, dist, ceiling))}, {"full", Str(Evaluate(model, x))}};
      return std::nullopt;
    }
    Fail(ErrorKind::kValidation, "unknown subcommand " + command);
  }

  std::optional<bool> Gen() {
    GenOptions o;
    o.seed = f_.seed;
    o.k = f_.k;
    o.domain_size = f_.domain_size;
    if (f_.domain == "enumerable") {
      o.domain = DomainKind::kEnumerable;
    } else if (f_.domain == "int_range") {
      o.domain = DomainKind::kIntRange;
    } else if (f_.domain == "real_interval") {
      o.domain = DomainKind::kRealInterval;
    } else {
      Fail(ErrorKind::kValidation, "--domain must be enumerable, int_range or real_interval");
    }
    if (f_.component == "spline") {
      o.component = ComponentKind::kSpline;
    } else if (f_.component == "mlp") {
      o.component = ComponentKind::kMlp;
    } else if (f_.component == "tree_ensemble") {
      o.component = ComponentKind::kTreeEnsemble;
    } else {
      Fail(ErrorKind::kValidation, "--component must be spline, mlp or tree_ensemble");
    }
    if (f_.task == "classification") {
      o.task = Task::kClassification;
    } else if (f_.task == "regression") {
      o.task = Task::kRegression;
    } else {
      Fail(ErrorKind::kValidation, "--task must be classification or regression");
    }
    const GeneratedCase c = Generate(o);
    Emit(f_.model_out, SerializeModel(c.model));
    if (!f_.instance_out.empty()) Emit(f_.instance_out, SerializeInstance(c.x));
    return std::nullopt;
  }

  std::optional<bool> Discretize(const GamModel& model) {
    if (f_.grid_path.empty()) Fail(ErrorKind::kValidation, "--grid is required");
    json doc;
    try {
      doc = json::parse(ReadFile(f_.grid_path));
    } catch (const json::parse_error& e) {
      Fail(ErrorKind::kParse, std::string("grid: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("grid") || !doc["grid"].is_array()) {
      Fail(ErrorKind::kParse, "grid: expected {\"grid\": [[...], ...]}");
    }
    std::vector<std::vector<Rational>> grid;
    for (const json& row : doc["grid"]) {
      // Reuse the instance reader for rational arrays.
      grid.push_back(LoadInstance(json{{"values", row}}.dump()));
    }
    Emit(f_.model_out, SerializeModel(DiscretizeDomain(model, grid)));
    return std::nullopt;
  }

  void Emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
      out_ << text;
      return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) Fail(ErrorKind::kValidation, "cannot write " + path);
    file << text;
  }

  const Flags& f_;
  std::ostream& out_;
};

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact explanations for generalized additive models", "gamx"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Flags f;
  app.add_option("--model", f.model_path, "Model document");
  app.add_option("--instance", f.instance_path, "Instance document");
  app.add_option("--subset", f.subset, "Comma-separated 1-based feature indices");
  app.add_option("--feature", f.feature, "1-based feature index");
  app.add_option("--d", f.d, "Size bound for msr/mcr");
  app.add_option("--digits", f.digits, "Quantization digits");
  app.add_option("--dist", f.dist_path, "Distribution document (default uniform)");
  app.add_option("--grid", f.grid_path, "Grid document for discretize");
  app.add_option("--budget", f.budget, "MLP piece budget")->check(CLI::PositiveNumber);
  app.add_option("--seed", f.seed, "Generator seed");
  app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_flag("--strict-exit", f.strict_exit, "Exit 1 when a decision query answers No");
  app.add_option("--k", f.k, "Number of features for gen");
  app.add_option("--domain", f.domain, "Domain kind for gen");
  app.add_option("--component", f.component, "Component kind for gen");
  app.add_option("--task", f.task, "Task for gen");
  app.add_option("--domain-size", f.domain_size, "Enumerable domain size for gen");
  app.add_option("--model-out", f.model_out, "Write the model document here (gen, discretize)");
  app.add_option("--instance-out", f.instance_out, "Write the instance document here (gen)");

  const char* kCommands[] = {"eval",       "csr",        "msr",        "mcr",       "fr",
                             "cc",         "shap",       "quantize",   "discretize", "gen",
                             "oracle-csr", "oracle-msr", "oracle-mcr", "oracle-cc", "oracle-shap",
                             "oracle-fr"};
  for (const char* name : kCommands) app.add_subcommand(name, std::string(name) + " query");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return Runner(f, out).Run(command);
  } catch (const Error& e) {
    err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    const std::string hint = Hint(e.kind());
    if (!hint.empty()) err << "hint: " << hint << "\n";
    return ExitCodeFor(e.kind());
  }
}

}  // namespace gamx
