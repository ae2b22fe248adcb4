#pragma once

// Scenario documents: named classical laws, spaces, unitaries, operators,
// states, partitions, contexts and kernels, plus an ordered task list. Every
// object is built and checked while parsing, so a scenario that parses is
// internally consistent.

#include <climits>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "ncprob/classical.hpp"
#include "ncprob/cli/json_io.hpp"
#include "ncprob/construct.hpp"
#include "ncprob/eur.hpp"
#include "ncprob/hilbert.hpp"

namespace ncprob::cli {

using State = std::variant<hilbert::PureState, hilbert::DensityOperator>;

inline Eigen::Index state_dim(const State& s) {
  return std::visit([](const auto& x) { return x.dim(); }, s);
}

inline hilbert::DensityOperator as_density(const State& s) {
  if (const auto* psi = std::get_if<hilbert::PureState>(&s)) return hilbert::DensityOperator::from_pure(*psi);
  return std::get<hilbert::DensityOperator>(s);
}

struct NamedPartition {
  std::string op;
  eur::SpectrumPartition partition;
};

struct NamedContext {
  std::string space;
  classical::Event event;
};

struct NamedVariable {
  std::string space;
  classical::RandomVariable variable;
};

struct TaskEntry {
  std::string task;
  std::string id;
  std::size_t index = 0;
};

// Name of the environment variable overriding the default restart count.
inline constexpr const char* kRestartsEnv = "NCPROB_RESTARTS";

struct Scenario {
  Json document;
  std::string name;
  std::optional<Eigen::Index> dimension;
  std::map<std::string, classical::Distribution> distributions;
  std::map<std::string, classical::FiniteProbabilitySpace> spaces;
  std::map<std::string, NamedVariable> variables;
  std::map<std::string, Matrix> unitaries;
  std::map<std::string, hilbert::HermitianOperator> operators;
  std::map<std::string, State> states;
  std::map<std::string, NamedPartition> partitions;
  std::map<std::string, NamedContext> contexts;
  std::map<std::string, construct::TransitionKernel> kernels;
  eur::OptimizerConfig optimizer;
  std::uint64_t seed = kDefaultSeed;
  std::vector<TaskEntry> tasks;

  Node root() const { return {document, ""}; }
  Node task_node(std::size_t i) const { return root().at("tasks").at(i); }
};

// Looks up a named object referenced at `ref`.
template <class Map>
const typename Map::mapped_type& resolve(const Map& map, const Node& ref, const char* kind) {
  const std::string key = ref.as_string();
  auto it = map.find(key);
  if (it == map.end()) ref.fail(std::string("unknown ") + kind + " '" + key + "'");
  return it->second;
}

// Runs `build`, turning library errors into scenario errors located at `node`.
template <class F>
auto checked_build(const Node& node, F&& build) -> decltype(build()) {
  try {
    return build();
  } catch (const ScenarioError&) {
    throw;
  } catch (const Error& e) {
    node.fail(e.what());
  }
}

namespace parse {

inline Eigen::Index dimension_or(const Scenario& s, const Node& n, const char* key) {
  if (n.has(key)) return static_cast<Eigen::Index>(n.at(key).as_int(1, 4096));
  if (!s.dimension) n.fail(std::string("field '") + key + "' is required when no scenario dimension is set");
  return *s.dimension;
}

// Exactly one of `keys` must be present; returns it.
inline std::string one_of(const Node& n, std::initializer_list<const char*> keys) {
  std::string found;
  for (const char* k : keys) {
    if (!n.has(k)) continue;
    if (!found.empty()) n.fail("fields '" + found + "' and '" + k + "' are mutually exclusive");
    found = k;
  }
  if (found.empty()) {
    std::string list;
    for (const char* k : keys) list += (list.empty() ? "" : ", ") + std::string(k);
    n.fail("expected one of: " + list);
  }
  return found;
}

inline classical::Distribution distribution(const Scenario& s, const Node& n) {
  if (!n.is_object()) n.fail("expected an object");
  const auto kind = one_of(n, {"support", "uniform", "pushforward"});
  if (kind == "support") {
    n.allow_only({"support", "probs"});
    const auto support = n.at("support").as_doubles();
    const auto probs = n.at("probs").as_doubles();
    return checked_build(n, [&] { return classical::Distribution(support, probs); });
  }
  if (kind == "uniform") {
    n.allow_only({"uniform"});
    const auto support = n.at("uniform").as_doubles();
    return checked_build(n.at("uniform"), [&] { return classical::Distribution::uniform(support); });
  }
  n.allow_only({"pushforward"});
  const auto& v = resolve(s.variables, n.at("pushforward"), "variable");
  return checked_build(n, [&] { return classical::pushforward(v.variable, s.spaces.at(v.space)); });
}

inline classical::FiniteProbabilitySpace space(const Node& n) {
  n.allow_only({"outcomes", "n", "weights"});
  const auto kind = one_of(n, {"outcomes", "n"});
  const auto outcomes = kind == "outcomes" ? n.at("outcomes").as_strings()
                                           : classical::FiniteProbabilitySpace::numbered(
                                                 static_cast<int>(n.at("n").as_int(1, 1 << 20)));
  if (!n.has("weights")) {
    return checked_build(n, [&] { return classical::FiniteProbabilitySpace::uniform(outcomes); });
  }
  const auto weights = n.at("weights").as_doubles();
  return checked_build(n.at("weights"), [&] { return classical::FiniteProbabilitySpace(outcomes, weights); });
}

inline NamedVariable variable(const Scenario& s, const Node& n) {
  n.allow_only({"space", "values", "identity", "name"});
  const std::string sp = n.at("space").as_string();
  const auto& space = resolve(s.spaces, n.at("space"), "space");
  const std::string name = n.has("name") ? n.at("name").as_string() : "X";
  const auto kind = one_of(n, {"values", "identity"});
  if (kind == "identity") {
    if (!n.at("identity").as_bool()) n.at("identity").fail("must be true when present");
    return {sp, checked_build(n, [&] {
              try {
                return classical::RandomVariable::identity(name, space);
              } catch (const std::exception&) {
                throw DomainError("identity variable needs numeric outcome labels");
              }
            })};
  }
  const Node values = n.at("values");
  classical::RandomVariable x{name, {}};
  for (const auto& key : values.keys()) {
    if (!space.has_outcome(key)) values.at(key).fail("'" + key + "' is not an outcome of space '" + sp + "'");
    x.values[key] = values.at(key).as_double();
  }
  if (x.values.size() != space.size()) values.fail("variable must assign a value to every outcome");
  return {sp, std::move(x)};
}

inline Matrix unitary(const Scenario& s, const Node& n) {
  Matrix u;
  if (n.is_string()) {
    const auto kind = n.as_string();
    if (!s.dimension) n.fail("a named unitary needs the scenario dimension; use {\"kind\": ..., \"dim\": d}");
    const Eigen::Index d = *s.dimension;
    if (kind == "identity") {
      u = mats::identity(d);
    } else if (kind == "fourier") {
      u = mats::fourier(d);
    } else if (kind == "hadamard") {
      if (d != 2) n.fail("hadamard requires dimension 2");
      u = mats::hadamard();
    } else {
      n.fail("unknown unitary '" + kind + "' (identity, fourier, hadamard, or an explicit matrix)");
    }
  } else {
    n.allow_only({"kind", "dim", "explicit"});
    const auto kind = one_of(n, {"kind", "explicit"});
    if (kind == "explicit") {
      u = n.at("explicit").as_matrix();
    } else {
      const auto name = n.at("kind").as_string();
      const auto d = dimension_or(s, n, "dim");
      if (name == "identity") {
        u = mats::identity(d);
      } else if (name == "fourier") {
        u = mats::fourier(d);
      } else if (name == "hadamard" && d == 2) {
        u = mats::hadamard();
      } else {
        n.at("kind").fail("unknown unitary kind '" + name + "' for dimension " + std::to_string(d));
      }
    }
  }
  checked_build(n, [&] {
    construct::require_unitary(u, "unitary");
    return 0;
  });
  return u;
}

inline hilbert::HermitianOperator op(const Scenario& s, const Node& n) {
  if (!n.is_object()) n.fail("expected an object");
  const auto kind = one_of(n, {"diagonal", "matrix", "pauli", "kron", "conjugate", "from_distribution", "pair"});
  n.allow_only({"diagonal", "matrix", "pauli", "kron", "conjugate", "from_distribution", "pair"});
  const Node arg = n.at(kind);
  if (kind == "diagonal") {
    const auto d = arg.as_doubles();
    if (d.empty()) arg.fail("expected a non-empty array");
    return hilbert::HermitianOperator::diagonal(d);
  }
  if (kind == "matrix") {
    const auto m = arg.as_matrix();
    return checked_build(arg, [&] { return hilbert::HermitianOperator(m); });
  }
  if (kind == "pauli") {
    const auto p = arg.as_string();
    if (p == "x") return hilbert::HermitianOperator(mats::pauli_x());
    if (p == "y") return hilbert::HermitianOperator(mats::pauli_y());
    if (p == "z") return hilbert::HermitianOperator(mats::pauli_z());
    arg.fail("expected 'x', 'y' or 'z'");
  }
  if (kind == "kron") {
    if (arg.size() != 2) arg.fail("expected two operator names");
    const auto& a = resolve(s.operators, arg.at(0), "operator");
    const auto& b = resolve(s.operators, arg.at(1), "operator");
    return hilbert::HermitianOperator(mats::kron(a.matrix(), b.matrix()));
  }
  if (kind == "conjugate") {
    arg.allow_only({"diagonal", "operator", "unitary"});
    const auto inner_kind = one_of(arg, {"diagonal", "operator"});
    const Matrix inner = inner_kind == "diagonal" ? mats::diagonal(arg.at("diagonal").as_doubles())
                                                  : resolve(s.operators, arg.at("operator"), "operator").matrix();
    const Matrix& u = resolve(s.unitaries, arg.at("unitary"), "unitary");
    if (u.rows() != inner.rows()) arg.fail("unitary and operator dimensions differ");
    return hilbert::HermitianOperator(u * inner * u.adjoint());
  }
  if (kind == "from_distribution") {
    return hilbert::HermitianOperator::diagonal(resolve(s.distributions, arg, "distribution").support());
  }
  arg.allow_only({"x", "y", "unitary", "side"});
  const auto& dx = resolve(s.distributions, arg.at("x"), "distribution");
  const auto& dy = resolve(s.distributions, arg.at("y"), "distribution");
  const auto& u = resolve(s.unitaries, arg.at("unitary"), "unitary");
  const auto side = arg.at("side").as_string();
  if (side != "x" && side != "y") arg.at("side").fail("expected 'x' or 'y'");
  const auto pair = checked_build(arg, [&] { return construct::build_pair(dx, dy, u); });
  return side == "x" ? pair.t_x : pair.t_y;
}

inline State state(const Scenario& s, const Node& n) {
  if (!n.is_object()) n.fail("expected an object");
  const auto kind =
      one_of(n, {"pure", "basis", "uniform_superposition", "maximally_mixed", "density", "from_distribution"});
  if (kind == "pure") {
    n.allow_only({"pure", "normalize"});
    const Vector v = n.at("pure").as_vector();
    const bool normalize = n.has("normalize") && n.at("normalize").as_bool();
    return checked_build(n.at("pure"), [&]() -> State {
      return normalize ? hilbert::PureState::normalized(v) : hilbert::PureState(v);
    });
  }
  if (kind == "basis") {
    n.allow_only({"basis", "dim"});
    const auto d = dimension_or(s, n, "dim");
    const auto k = n.at("basis").as_int(0, d - 1);
    return hilbert::PureState::basis(d, static_cast<Eigen::Index>(k));
  }
  if (kind == "uniform_superposition") {
    n.allow_only({"uniform_superposition"});
    return hilbert::PureState::uniform_superposition(n.at(kind).as_int(1, 4096));
  }
  if (kind == "maximally_mixed") {
    n.allow_only({"maximally_mixed"});
    return hilbert::DensityOperator::maximally_mixed(n.at(kind).as_int(1, 4096));
  }
  if (kind == "density") {
    n.allow_only({"density"});
    const Matrix m = n.at("density").as_matrix();
    return checked_build(n.at("density"), [&]() -> State { return hilbert::DensityOperator(m); });
  }
  n.allow_only({"from_distribution"});
  const Node arg = n.at("from_distribution");
  arg.allow_only({"distribution", "operator"});
  const auto& dist = resolve(s.distributions, arg.at("distribution"), "distribution");
  const auto& a = resolve(s.operators, arg.at("operator"), "operator");
  return checked_build(arg, [&]() -> State {
    const auto pvm = hilbert::spectral_pvm(a);
    const auto spec = hilbert::spectrum(pvm);
    if (spec.size() != dist.size())
      throw ArgumentError("distribution has " + std::to_string(dist.size()) + " points but the operator has " +
                          std::to_string(spec.size()) + " distinct eigenvalues");
    for (std::size_t i = 0; i < spec.size(); ++i) {
      if (!eur::same_value(spec[i], dist.support()[i]))
        throw ArgumentError("distribution support does not match the operator spectrum");
    }
    return hilbert::density_from_distribution(dist, pvm);
  });
}

inline NamedPartition partition(const Scenario& s, const Node& n) {
  n.allow_only({"operator", "singletons", "whole", "groups", "thresholds"});
  const std::string name = n.at("operator").as_string();
  const auto& a = resolve(s.operators, n.at("operator"), "operator");
  const auto ground = hilbert::spectrum(hilbert::spectral_pvm(a));
  const auto kind = one_of(n, {"singletons", "whole", "groups", "thresholds"});
  const Node arg = n.at(kind);
  if (kind == "singletons" || kind == "whole") {
    if (!arg.as_bool()) arg.fail("must be true when present");
    return {name, kind == "whole" ? eur::SpectrumPartition::whole(ground) : eur::SpectrumPartition::singletons(ground)};
  }
  if (kind == "thresholds") {
    const auto t = arg.as_doubles();
    return {name, checked_build(arg, [&] { return eur::SpectrumPartition::from_thresholds(ground, t); })};
  }
  std::vector<std::vector<double>> groups;
  for (std::size_t i = 0; i < arg.size(); ++i) groups.push_back(arg.at(i).as_doubles());
  return {name, checked_build(arg, [&] { return eur::SpectrumPartition(ground, groups); })};
}

inline NamedContext context(const Scenario& s, const Node& n) {
  n.allow_only({"space", "outcomes"});
  const auto& sp = resolve(s.spaces, n.at("space"), "space");
  classical::Event e;
  const Node outs = n.at("outcomes");
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const auto o = outs.at(i).as_string();
    if (!sp.has_outcome(o)) outs.at(i).fail("'" + o + "' is not an outcome of the space");
    e.members.insert(o);
  }
  return {n.at("space").as_string(), std::move(e)};
}

inline construct::TransitionKernel kernel(const Scenario& s, const Node& n) {
  const auto kind = one_of(n, {"alpha", "born", "joint"});
  if (kind == "alpha") {
    n.allow_only({"alpha", "alpha_tilde"});
    const auto a = n.at("alpha").as_real_matrix();
    const auto t = n.at("alpha_tilde").as_real_matrix();
    return checked_build(n, [&] { return construct::TransitionKernel(a, t); });
  }
  if (kind == "born") {
    n.allow_only({"born"});
    const auto& u = resolve(s.unitaries, n.at("born"), "unitary");
    return construct::TransitionKernel::born(u);
  }
  n.allow_only({"joint"});
  const auto j = n.at("joint").as_real_matrix();
  return checked_build(n.at("joint"), [&] {
    if (j.minCoeff() < 0.0 || std::abs(j.sum() - 1.0) > 1e-12)
      throw InvariantError("joint table must be non-negative and sum to 1");
    return construct::TransitionKernel::from_joint(j);
  });
}

inline int default_restarts() {
  const char* env = std::getenv(kRestartsEnv);
  if (env == nullptr || *env == '\0') return eur::OptimizerConfig{}.restarts;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 100000)
    throw ScenarioError("", std::string(kRestartsEnv) + " must be an integer in [1, 100000]");
  return static_cast<int>(v);
}

// Applies the fields present in `n` on top of `base`.
inline eur::OptimizerConfig optimizer(const Node& n, eur::OptimizerConfig base) {
  n.allow_only({"restarts", "max_iters", "tol", "seed", "parallel"});
  if (n.has("restarts")) base.restarts = static_cast<int>(n.at("restarts").as_int(1, 100000));
  if (n.has("max_iters")) base.max_iterations = static_cast<int>(n.at("max_iters").as_int(1, 10000000));
  if (n.has("tol")) {
    base.tolerance = n.at("tol").as_double();
    if (!(base.tolerance > 0.0)) n.at("tol").fail("must be positive");
  }
  if (n.has("seed")) base.seed = static_cast<std::uint64_t>(n.at("seed").as_int(0, LLONG_MAX));
  if (n.has("parallel")) base.parallel = n.at("parallel").as_bool();
  return base;
}

template <class Map, class F>
void section(const Node& root, const char* key, Map& out, F&& build) {
  if (!root.has(key)) return;
  const Node sec = root.at(key);
  for (const auto& name : sec.keys()) {
    if (name.empty()) sec.fail("object names must be non-empty");
    out.emplace(name, build(sec.at(name)));
  }
}

}  // namespace parse

// Builds a scenario from a parsed document. `seed_override` replaces the
// optimizer seed and the default sampling seed.
inline Scenario parse_scenario(Json doc, std::optional<std::uint64_t> seed_override = std::nullopt) {
  Scenario s;
  s.document = std::move(doc);
  const Node root = s.root();
  if (!root.is_object()) root.fail("scenario must be a JSON object");
  root.allow_only({"name", "description", "dimension", "distributions", "spaces", "variables", "unitary",
                   "unitaries", "operators", "states", "partitions", "contexts", "kernels", "optimizer", "tasks"});
  s.name = root.at("name").as_string();
  if (root.has("dimension")) s.dimension = static_cast<Eigen::Index>(root.at("dimension").as_int(1, 4096));

  // Order matters: later sections refer to earlier ones. Within the
  // variables and operators sections entries may refer to earlier entries.
  parse::section(root, "spaces", s.spaces, [&](const Node& n) { return parse::space(n); });
  parse::section(root, "variables", s.variables, [&](const Node& n) { return parse::variable(s, n); });
  parse::section(root, "distributions", s.distributions, [&](const Node& n) { return parse::distribution(s, n); });
  if (root.has("unitary")) s.unitaries.emplace("U", parse::unitary(s, root.at("unitary")));
  parse::section(root, "unitaries", s.unitaries, [&](const Node& n) { return parse::unitary(s, n); });
  parse::section(root, "operators", s.operators, [&](const Node& n) { return parse::op(s, n); });
  parse::section(root, "states", s.states, [&](const Node& n) { return parse::state(s, n); });
  parse::section(root, "partitions", s.partitions, [&](const Node& n) { return parse::partition(s, n); });
  parse::section(root, "contexts", s.contexts, [&](const Node& n) { return parse::context(s, n); });
  parse::section(root, "kernels", s.kernels, [&](const Node& n) { return parse::kernel(s, n); });

  eur::OptimizerConfig base;
  base.restarts = parse::default_restarts();
  s.optimizer = root.has("optimizer") ? parse::optimizer(root.at("optimizer"), base) : base;
  if (seed_override) s.optimizer.seed = *seed_override;
  s.seed = s.optimizer.seed;

  const Node tasks = root.at("tasks");
  if (!tasks.is_array()) tasks.fail("expected an array of tasks");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Node t = tasks.at(i);
    if (!t.is_object()) t.fail("expected a task object");
    TaskEntry e;
    e.task = t.at("task").as_string();
    e.id = t.has("id") ? t.at("id").as_string() : e.task + "#" + std::to_string(i);
    e.index = i;
    s.tasks.push_back(std::move(e));
  }
  return s;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("", "cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ScenarioError("", "'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace ncprob::cli
