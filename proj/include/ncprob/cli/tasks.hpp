#pragma once

// The scenario task catalogue. Each task validates its arguments against a
// parsed scenario up front and returns a closure that computes its output.

#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ncprob/cli/scenario.hpp"

namespace ncprob::cli {

struct TaskArgument {
  std::string name;
  std::string type;
  bool required;
  std::string description;
};

using TaskRun = std::function<Json()>;

struct TaskInfo {
  std::string name;
  std::string summary;
  std::vector<TaskArgument> arguments;
  std::function<TaskRun(const Scenario&, const Node&)> prepare;
};

namespace tasks {

inline Json cells_json(const eur::SpectrumPartition& p) {
  Json out = Json::array();
  for (const auto& c : p.cells()) out.push_back(c.values);
  return out;
}

inline Json law_json(const classical::Distribution& d) {
  return Json{{"support", d.support()}, {"probs", d.probs()}};
}

inline Json optimizer_json(const eur::SphereMinimum& m) {
  return Json{{"restarts", m.restarts},
              {"total_iterations", m.total_iterations},
              {"best_restart", m.best_restart},
              {"converged_restarts", m.converged_restarts},
              {"converged", m.converged},
              {"seed", m.seed}};
}

inline void allow(const Node& n, const std::vector<TaskArgument>& args) {
  for (const auto& k : n.keys()) {
    if (k == "task" || k == "id") continue;
    bool ok = false;
    for (const auto& a : args) ok = ok || a.name == k;
    if (!ok) n.at(k).fail("unknown argument '" + k + "'");
  }
}

struct OperatorRef {
  std::string name;
  const hilbert::HermitianOperator* op;
};

inline OperatorRef operator_arg(const Scenario& s, const Node& n, const char* key) {
  const Node ref = n.at(key);
  return {ref.as_string(), &resolve(s.operators, ref, "operator")};
}

inline std::pair<OperatorRef, OperatorRef> operator_pair(const Scenario& s, const Node& n) {
  auto a = operator_arg(s, n, "first");
  auto b = operator_arg(s, n, "second");
  if (a.op->dim() != b.op->dim())
    n.fail("operators '" + a.name + "' and '" + b.name + "' have different dimensions");
  return {a, b};
}

// Named partition of `op`, or its singleton partition when `key` is absent.
inline eur::SpectrumPartition partition_arg(const Scenario& s, const Node& n, const char* key,
                                            const OperatorRef& op) {
  if (!n.has(key)) return eur::SpectrumPartition::singletons(*op.op);
  const Node ref = n.at(key);
  const auto& p = resolve(s.partitions, ref, "partition");
  if (p.op != op.name)
    ref.fail("partition '" + ref.as_string() + "' belongs to operator '" + p.op + "', not '" + op.name + "'");
  return p.partition;
}

inline const State& state_arg(const Scenario& s, const Node& n, const char* key, Eigen::Index dim) {
  const Node ref = n.at(key);
  const auto& st = resolve(s.states, ref, "state");
  if (state_dim(st) != dim)
    ref.fail("state '" + ref.as_string() + "' has dimension " + std::to_string(state_dim(st)) + ", expected " +
             std::to_string(dim));
  return st;
}

inline const classical::Distribution& law_arg(const Scenario& s, const Node& n, const char* key,
                                              std::optional<std::size_t> size = std::nullopt) {
  const Node ref = n.at(key);
  const auto& d = resolve(s.distributions, ref, "distribution");
  if (size && d.size() != *size)
    ref.fail("distribution '" + ref.as_string() + "' has " + std::to_string(d.size()) + " points, expected " +
             std::to_string(*size));
  return d;
}

inline TaskInfo entropy() {
  TaskInfo t{"entropy",
             "Shannon entropy of a classical law, or the partition entropy of an observable in a state",
             {{"distribution", "distribution", false, "classical law (classical mode)"},
              {"variable", "variable", false, "random variable; its pushforward law is used (classical mode)"},
              {"state", "state", false, "quantum state (quantum mode)"},
              {"operator", "operator", false, "observable (quantum mode)"},
              {"partition", "partition", false, "partition of the observable's spectrum; singletons by default"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto mode = parse::one_of(n, {"distribution", "variable", "operator"});
    if (mode != "operator") {
      if (n.has("state") || n.has("partition")) n.fail("'state' and 'partition' need 'operator'");
      classical::Distribution law = mode == "distribution" ? law_arg(s, n, "distribution") : [&] {
        const auto& v = resolve(s.variables, n.at("variable"), "variable");
        return checked_build(n.at("variable"), [&] { return classical::pushforward(v.variable, s.spaces.at(v.space)); });
      }();
      return [law, source = n.at(mode).as_string(), mode] {
        return Json{{"mode", "classical"},
                    {mode, source},
                    {"law", law_json(law)},
                    {"mean", classical::mean(law)},
                    {"entropy", classical::shannon_entropy(law)}};
      };
    }
    const auto a = operator_arg(s, n, "operator");
    const auto part = partition_arg(s, n, "partition", a);
    const State& st = state_arg(s, n, "state", a.op->dim());
    return [&st, a, part] {
      const auto pvm = hilbert::spectral_pvm(*a.op);
      const auto probs = std::visit([&](const auto& x) { return eur::partition_probabilities(x, pvm, part); }, st);
      return Json{{"mode", "quantum"},
                  {"operator", a.name},
                  {"cells", cells_json(part)},
                  {"probabilities", probs.probs},
                  {"expectation", hilbert::trace_expectation(as_density(st), *a.op)},
                  {"entropy", classical::shannon_entropy(probs.probs)}};
    };
  };
  return t;
}

inline TaskInfo mu_bound() {
  TaskInfo t{"mu_bound",
             "Overlap bound -2 ln max |P_a Q_b| for a pair of observables",
             {{"first", "operator", true, "first observable"},
              {"second", "operator", true, "second observable"},
              {"eps", "partition", false, "partition of the first spectrum; eigenprojectors if absent"},
              {"delta", "partition", false, "partition of the second spectrum; eigenprojectors if absent"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto [a, b] = operator_pair(s, n);
    const auto eps = partition_arg(s, n, "eps", a);
    const auto delta = partition_arg(s, n, "delta", b);
    return [a, b, eps, delta] {
      const double v = eur::maassen_uffink_bound(*a.op, *b.op, eps, delta);
      return Json{{"first", a.name},
                  {"second", b.name},
                  {"eps", cells_json(eps)},
                  {"delta", cells_json(delta)},
                  {"max_overlap", std::exp(-v / 2.0)},
                  {"value", v}};
    };
  };
  return t;
}

inline TaskInfo partovi_bound() {
  TaskInfo t{"partovi_bound",
             "Projector-sum bound 2 ln(2 / s), s = max |P(E_i) + Q(F_j)|",
             {{"first", "operator", true, "first observable"},
              {"second", "operator", true, "second observable"},
              {"eps", "partition", false, "partition of the first spectrum; singletons if absent"},
              {"delta", "partition", false, "partition of the second spectrum; singletons if absent"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto [a, b] = operator_pair(s, n);
    const auto eps = partition_arg(s, n, "eps", a);
    const auto delta = partition_arg(s, n, "delta", b);
    return [a, b, eps, delta] {
      const double sn = eur::partovi_norm(*a.op, *b.op, eps, delta);
      return Json{{"first", a.name},
                  {"second", b.name},
                  {"eps", cells_json(eps)},
                  {"delta", cells_json(delta)},
                  {"s", sn},
                  {"value", std::max(0.0, 2.0 * std::log(2.0 / sn))}};
    };
  };
  return t;
}

inline TaskInfo certify() {
  TaskInfo t{"certify",
             "Non-commutativity certificate from partition entropy bounds, with numeric corroboration",
             {{"first", "operator", true, "first observable"},
              {"second", "operator", true, "second observable"},
              {"eps", "partition", false, "partition of the first spectrum; singletons if absent"},
              {"delta", "partition", false, "partition of the second spectrum; singletons if absent"},
              {"optimizer", "optimizer", false, "overrides of the scenario optimizer settings"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto [a, b] = operator_pair(s, n);
    const auto eps = partition_arg(s, n, "eps", a);
    const auto delta = partition_arg(s, n, "delta", b);
    auto opt = s.optimizer;
    if (n.has("optimizer")) {
      opt = parse::optimizer(n.at("optimizer"), opt);
    }
    return [a, b, eps, delta, opt] {
      const auto c = eur::certify_noncommutativity(*a.op, *b.op, eps, delta, opt, a.name, b.name);
      return Json{{"first", c.first_name},
                  {"second", c.second_name},
                  {"eps", cells_json(c.eps)},
                  {"delta", cells_json(c.delta)},
                  {"maassen_uffink", c.maassen_uffink},
                  {"partovi", c.partovi},
                  {"partovi_s", c.partovi_s},
                  {"numeric_infimum", c.numeric_infimum},
                  {"argmin", to_json(c.evidence.argmin.vector())},
                  {"optimizer", optimizer_json(c.evidence)},
                  {"commutator_norm", c.commutator_norm},
                  {"threshold", c.threshold},
                  {"verdict", eur::to_string(c.verdict)},
                  {"consistent", c.consistent}};
    };
  };
  return t;
}

inline TaskInfo build_pair() {
  TaskInfo t{"build_pair",
             "Operators T_X = diag(support X) and T_Y = U diag(support Y) U^dagger",
             {{"x", "distribution", true, "law of X"},
              {"y", "distribution", true, "law of Y"},
              {"unitary", "unitary", true, "unitary U"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto& dx = law_arg(s, n, "x");
    const auto& dy = law_arg(s, n, "y", dx.size());
    const auto& u = resolve(s.unitaries, n.at("unitary"), "unitary");
    if (u.rows() != static_cast<Eigen::Index>(dx.size()))
      n.at("unitary").fail("unitary dimension does not match the support size");
    return [&dx, &dy, &u] {
      const auto p = construct::build_pair(dx, dy, u);
      Eigen::SelfAdjointEigenSolver<Matrix> es(p.t_y.matrix(), Eigen::EigenvaluesOnly);
      return Json{{"t_x", to_json(p.t_x.matrix())},
                  {"t_y", to_json(p.t_y.matrix())},
                  {"spectrum_t_y", to_json(RealVector(es.eigenvalues()))},
                  {"commutator_norm", hilbert::commutator_norm(p.t_x, p.t_y)},
                  {"maassen_uffink", eur::maassen_uffink_bound(p.t_x, p.t_y)}};
    };
  };
  return t;
}

inline TaskInfo overlap_check() {
  TaskInfo t{"overlap_check",
             "Checks max |<x|U y>| <= exp(-D/2)",
             {{"unitary", "unitary", true, "unitary U"},
              {"D", "number | {\"ln\": n}", true, "target D >= 0; {\"ln\": n} means ln n"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto& u = resolve(s.unitaries, n.at("unitary"), "unitary");
    const Node dn = n.at("D");
    double d = 0.0;
    if (dn.is_object()) {
      dn.allow_only({"ln"});
      const double arg = dn.at("ln").as_double();
      if (!(arg >= 1.0)) dn.at("ln").fail("expected a number >= 1");
      d = std::log(arg);
    } else {
      d = dn.as_double();
    }
    if (d < 0.0) dn.fail("D must be >= 0");
    return [&u, d] {
      const auto r = construct::verify_overlap_bound(u, d);
      return Json{{"D", d}, {"max_overlap", r.max_overlap}, {"bound", r.bound}, {"satisfied", r.satisfied}};
    };
  };
  return t;
}

inline TaskInfo chsh() {
  TaskInfo t{"chsh",
             "CHSH functional omega(a1 (b1 + b2) + a2 (b1 - b2))",
             {{"fixture", "\"tsirelson\"", false, "built-in two-qubit configuration"},
              {"a1", "operator", false, "first-side observable"},
              {"a2", "operator", false, "first-side observable"},
              {"b1", "operator", false, "second-side observable"},
              {"b2", "operator", false, "second-side observable"},
              {"state", "state", false, "state omega"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto result = [](double beta, const std::string& source) {
      return Json{{"source", source},
                  {"beta", beta},
                  {"classical_bound", 2.0},
                  {"tsirelson_bound", 2.0 * std::numbers::sqrt2}};
    };
    if (n.has("fixture")) {
      for (const char* k : {"a1", "a2", "b1", "b2", "state"}) {
        if (n.has(k)) n.at(k).fail("not allowed together with 'fixture'");
      }
      if (n.at("fixture").as_string() != "tsirelson") n.at("fixture").fail("unknown fixture (expected 'tsirelson')");
      return [result] { return result(hilbert::chsh_beta(hilbert::tsirelson_configuration()), "tsirelson"); };
    }
    std::vector<OperatorRef> ops;
    for (const char* k : {"a1", "a2", "b1", "b2"}) ops.push_back(operator_arg(s, n, k));
    for (const auto& o : ops) {
      if (o.op->dim() != ops[0].op->dim()) n.fail("CHSH operators must share one dimension");
    }
    const auto omega = as_density(state_arg(s, n, "state", ops[0].op->dim()));
    return [ops, omega, result] {
      return result(hilbert::chsh_beta(*ops[0].op, *ops[1].op, *ops[2].op, *ops[3].op, omega), "scenario");
    };
  };
  return t;
}

inline TaskInfo gns() {
  TaskInfo t{"gns",
             "GNS representation of a matrix algebra in a state",
             {{"algebra", "\"full\" | \"diagonal\"", true, "M_d(C) or the diagonal algebra"},
              {"state", "state", true, "state on the algebra"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto kind = n.at("algebra").as_string();
    if (kind != "full" && kind != "diagonal") n.at("algebra").fail("expected 'full' or 'diagonal'");
    const auto& st = resolve(s.states, n.at("state"), "state");
    const auto rho = as_density(st);
    return [kind, rho] {
      const Eigen::Index d = rho.dim();
      const auto basis =
          kind == "full" ? hilbert::algebras::full_matrix_algebra(d) : hilbert::algebras::diagonal_algebra(d);
      const auto g = hilbert::gns_construct(basis, rho);
      const Vector psi = g.cyclic_vector().vector();
      double err = 0.0;
      for (const auto& b : basis) {
        err = std::max(err, std::abs(psi.dot(g.represent(b) * psi) - (rho.matrix() * b).trace()));
      }
      return Json{{"algebra", kind},
                  {"algebra_dim", g.algebra_dim()},
                  {"rep_dim", g.rep_dim()},
                  {"orbit_rank", g.orbit_rank()},
                  {"cyclic_vector", to_json(psi)},
                  {"state_reproduction_error", err}};
    };
  };
  return t;
}

inline TaskInfo interference() {
  TaskInfo t{"interference",
             "Interference term delta(x) = mu_X(x) - sum_y alpha(x, y) mu_Y(y)",
             {{"mu_x", "distribution", true, "conditioned law of X"},
              {"mu_y", "distribution", true, "conditioned law of Y"},
              {"kernel", "kernel", true, "transition kernel"},
              {"unitary", "unitary", false, "compare the kernel with the Born rule |U(x, y)|^2"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto& k = resolve(s.kernels, n.at("kernel"), "kernel");
    const auto& mx = law_arg(s, n, "mu_x", static_cast<std::size_t>(k.x_size()));
    const auto& my = law_arg(s, n, "mu_y", static_cast<std::size_t>(k.y_size()));
    const Matrix* u = nullptr;
    if (n.has("unitary")) {
      u = &resolve(s.unitaries, n.at("unitary"), "unitary");
      if (u->rows() != k.x_size() || u->rows() != k.y_size())
        n.at("unitary").fail("unitary dimension does not match the kernel");
    }
    return [&k, &mx, &my, u] {
      const RealVector d = construct::interference_delta(mx, k.alpha(), my);
      Json out{{"delta", to_json(d)}, {"sum", d.sum()}, {"max_abs", d.cwiseAbs().maxCoeff()}};
      if (u != nullptr) {
        const auto b = construct::born_consistency(*u, k);
        out["born"] = Json{{"max_abs_error", b.max_abs_error}, {"consistent", b.consistent}, {"symmetric", b.symmetric}};
      }
      return out;
    };
  };
  return t;
}

inline TaskInfo bayes_delta() {
  TaskInfo t{"bayes_delta",
             "Bayes violation Delta(x, y) = alpha(x, y) nu(y) - alpha_tilde(y, x) mu(x)",
             {{"kernel", "kernel", true, "transition kernel"},
              {"mu", "distribution", true, "law of X"},
              {"nu", "distribution", true, "law of Y"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto& k = resolve(s.kernels, n.at("kernel"), "kernel");
    const auto& mu = law_arg(s, n, "mu", static_cast<std::size_t>(k.x_size()));
    const auto& nu = law_arg(s, n, "nu", static_cast<std::size_t>(k.y_size()));
    return [&k, &mu, &nu] {
      const RealMatrix d = construct::bayes_violation(k, mu, nu);
      return Json{{"delta", to_json(d)}, {"max_abs", d.cwiseAbs().maxCoeff()}};
    };
  };
  return t;
}

inline TaskInfo lln() {
  TaskInfo t{"lln",
             "Empirical frequency of an event over independent draws",
             {{"context", "context", true, "event (a named outcome subset)"},
              {"samples", "integer", true, "number of draws"},
              {"seed", "integer", false, "sampling seed; the scenario seed if absent"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto& c = resolve(s.contexts, n.at("context"), "context");
    const auto& space = s.spaces.at(c.space);
    const auto samples = static_cast<std::size_t>(n.at("samples").as_int(1, 1'000'000'000));
    const std::uint64_t seed =
        n.has("seed") ? static_cast<std::uint64_t>(n.at("seed").as_int(0, LLONG_MAX)) : s.seed;
    return [&c, &space, samples, seed] {
      const double f = classical::lln_frequency(space, c.event, samples, seed);
      const double p = space.probability(c.event);
      return Json{{"samples", samples},
                  {"seed", seed},
                  {"frequency", f},
                  {"probability", p},
                  {"abs_error", std::abs(f - p)},
                  {"sigma", std::sqrt(p * (1 - p) / static_cast<double>(samples))}};
    };
  };
  return t;
}

inline TaskInfo joint_pvm() {
  TaskInfo t{"joint_pvm",
             "Joint spectral measure of two commuting observables",
             {{"first", "operator", true, "first observable"},
              {"second", "operator", true, "second observable"},
              {"state", "state", false, "state giving the joint probabilities"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto [a, b] = operator_pair(s, n);
    const State* st = n.has("state") ? &state_arg(s, n, "state", a.op->dim()) : nullptr;
    return [a, b, st] {
      const auto joint = hilbert::joint_pvm(*a.op, *b.op);
      Json cells = Json::array();
      for (std::size_t k = 0; k < joint.size(); ++k) {
        cells.push_back(Json{{"first", joint.label(k).first.values},
                             {"second", joint.label(k).second.values},
                             {"rank", joint.rank(k)}});
      }
      Json out{{"first", a.name}, {"second", b.name}, {"cells", cells}};
      if (st != nullptr) {
        out["probabilities"] =
            std::visit([&](const auto& x) { return hilbert::spectral_measure(x, joint).probs; }, *st);
      }
      return out;
    };
  };
  return t;
}

inline TaskInfo dispersion_free() {
  TaskInfo t{"dispersion_free",
             "Common eigenvector of two commuting observables and its dispersions",
             {{"first", "operator", true, "first observable"}, {"second", "operator", true, "second observable"}},
             {}};
  t.prepare = [args = t.arguments](const Scenario& s, const Node& n) -> TaskRun {
    allow(n, args);
    const auto [a, b] = operator_pair(s, n);
    return [a, b] {
      const auto psi = hilbert::dispersion_free_state(*a.op, *b.op);
      return Json{{"state", to_json(psi.vector())},
                  {"expectation_first", psi.expectation(a.op->matrix())},
                  {"expectation_second", psi.expectation(b.op->matrix())},
                  {"dispersion_first", hilbert::dispersion(psi, *a.op)},
                  {"dispersion_second", hilbert::dispersion(psi, *b.op)}};
    };
  };
  return t;
}

}  // namespace tasks

inline const std::vector<TaskInfo>& task_catalogue() {
  static const std::vector<TaskInfo> catalogue{
      tasks::entropy(),     tasks::mu_bound(), tasks::partovi_bound(), tasks::certify(), tasks::build_pair(),
      tasks::overlap_check(), tasks::chsh(),   tasks::gns(),           tasks::interference(),
      tasks::bayes_delta(), tasks::lln(),      tasks::joint_pvm(),     tasks::dispersion_free()};
  return catalogue;
}

inline const TaskInfo* find_task(const std::string& name) {
  for (const auto& t : task_catalogue()) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

inline std::string describe_task(const TaskInfo& t) {
  std::string out = t.name + ": " + t.summary + "\n";
  for (const auto& a : t.arguments) {
    out += "  " + a.name + " (" + a.type + (a.required ? ", required" : ", optional") + "): " + a.description + "\n";
  }
  return out;
}

}  // namespace ncprob::cli
