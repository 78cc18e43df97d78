#include "enrel/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "enrel/alloc.hpp"
#include "enrel/bounds.hpp"
#include "enrel/errors.hpp"
#include "enrel/evaluate.hpp"
#include "enrel/sweep.hpp"

namespace enrel {

namespace {

using nlohmann::ordered_json;

struct Output {
  std::string format;
  std::string path;
};

void add_output_options(CLI::App* cmd, Output& o, const std::string& default_format) {
  o.format = default_format;
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--output,-o", o.path, "Write data to this file instead of standard output");
}

void emit(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file '" + o.path + "'");
  f << text;
}

void check_tolerance(double value, const char* name) {
  if (!(value > 0.0 && value <= 1e-2)) {
    throw DomainError(std::string(name) + " must lie in (0, 1e-2]");
  }
}

std::string csv_row(std::initializer_list<std::string> fields) {
  std::string line;
  for (const auto& f : fields) {
    if (!line.empty()) line += ',';
    line += f;
  }
  return line + '\n';
}

ordered_json kkt_json(const KKTReport& kkt) {
  ordered_json j{{"max_child_sum_residual", kkt.max_child_sum_residual},
                 {"max_path_residual", kkt.max_path_residual}};
  if (kkt.budget_residual) j["budget_residual"] = *kkt.budget_residual;
  return j;
}

ordered_json allocation_json(const Allocation& a) {
  return {{"eps", a.eps}, {"energy", a.energy}, {"total_energy", a.total_energy}};
}

// bound

struct BoundArgs {
  std::vector<std::size_t> n;
  std::optional<std::size_t> k;
  double delta = 0.1;
  std::string model = "exp:0.5:1";
  std::string circuit;
  Output out;
};

int cmd_bound(const BoundArgs& a, std::ostream& out) {
  if (a.n.empty() && a.circuit.empty()) {
    throw std::invalid_argument("bound needs --n or --circuit");
  }
  const auto model = parse_model_spec(a.model);
  const auto target = make_target(a.delta);
  std::vector<BoundReport> rows;
  if (!a.circuit.empty()) rows.push_back(bound_graph_specific(load_circuit(a.circuit), model, target));
  for (std::size_t n : a.n) {
    const std::size_t k = a.k.value_or(2);
    rows.push_back(bound_theorem1(n, k, model, target));
    rows.push_back(bound_corollary1(n, k, model, target));
  }
  std::string text;
  if (a.out.format == "csv") {
    text = "n,k,delta,model,kind,bound,bound_per_input,flag\n";
    for (const auto& r : rows) {
      text += csv_row({std::to_string(r.n), std::to_string(r.k), format_number(a.delta),
                       model.spec(), std::string(to_string(r.kind)), format_number(r.energy),
                       format_number(r.per_input()), std::string(to_string(r.flag))});
    }
  } else {
    ordered_json j = ordered_json::array();
    for (const auto& r : rows) {
      j.push_back({{"n", r.n},
                   {"k", r.k},
                   {"delta", a.delta},
                   {"gamma", r.target.gamma},
                   {"model", model.spec()},
                   {"kind", to_string(r.kind)},
                   {"bound", r.energy},
                   {"bound_per_input", r.per_input()},
                   {"path_length", r.path_length},
                   {"gate_count", r.gate_count},
                   {"flag", to_string(r.flag)}});
    }
    text = j.dump(2) + '\n';
  }
  emit(a.out, text, out);
  return kExitOk;
}

// alloc

struct AllocArgs {
  std::string circuit;
  std::string model = "exp:0.5:1";
  std::optional<double> gamma, delta, budget;
  double eta = 1e-8;
  double theta = 1e-6;
  Output out;
};

int cmd_alloc(const AllocArgs& a, std::ostream& out) {
  check_tolerance(a.eta, "eta");
  check_tolerance(a.theta, "theta");
  const int given = a.gamma.has_value() + a.delta.has_value() + a.budget.has_value();
  if (given != 1) throw std::invalid_argument("alloc needs exactly one of --gamma, --delta, --budget");
  const auto tree = load_circuit(a.circuit);
  const auto model = parse_model_spec(a.model);
  const SolverOptions options{.eta = a.eta};

  ordered_json j{{"circuit", a.circuit}, {"model", model.spec()}};
  Allocation alloc;
  KKTReport kkt;
  bool certified = false;
  if (a.budget) {
    const auto r = max_reliability_alloc(tree, model, *a.budget, a.theta, options);
    alloc = r.allocation;
    kkt = r.kkt;
    certified = kkt.max_child_sum_residual <= 10 * a.eta && kkt.max_path_residual <= 10 * a.eta &&
                kkt.budget_residual.value_or(0.0) <= a.theta;
    j["mode"] = "max_reliability";
    j["budget"] = *a.budget;
    j["y_min"] = r.y_min;
    j["delta_min"] = r.delta_min.delta;
    j["delta_saturated"] = r.delta_min.saturated;
    j["outer_iterations"] = r.outer_iterations;
  } else {
    const double gamma = a.gamma ? *a.gamma : make_target(*a.delta).gamma;
    const auto r = min_energy_alloc(tree, model, gamma, options);
    alloc = r.allocation;
    kkt = r.kkt;
    certified = kkt.certified(a.eta);
    j["mode"] = "min_energy";
    if (a.delta) j["delta"] = *a.delta;
    j["gamma"] = gamma;
    j["stats"] = {{"newton_iterations", r.stats.newton_iterations},
                  {"line_search_trials", r.stats.line_search_trials},
                  {"node_evaluations", r.stats.node_evaluations}};
  }
  j["allocation"] = allocation_json(alloc);
  j["kkt"] = kkt_json(kkt);
  j["certified"] = certified;

  std::string text;
  if (a.out.format == "csv") {
    text = "gate,level,eps,energy\n";
    for (GateId g = 0; g < tree.size(); ++g) {
      text += csv_row({std::to_string(g), std::to_string(tree.level(g)), format_number(alloc.eps[g]),
                       format_number(alloc.energy[g])});
    }
  } else {
    text = j.dump(2) + '\n';
  }
  emit(a.out, text, out);
  return certified ? kExitOk : kExitNotConverged;
}

// evaluate

struct EvaluateArgs {
  std::string circuit;
  std::vector<double> eps;
  std::optional<double> eps_uniform;
  std::optional<double> budget;
  std::string allocation = "heuristic";
  std::string model = "exp:0.5:1";
  std::vector<std::size_t> audit;
  double theta = 1e-6;
  Output out;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const int given = !a.eps.empty() + a.eps_uniform.has_value() + a.budget.has_value();
  if (given != 1) {
    throw std::invalid_argument("evaluate needs exactly one of --eps, --eps-uniform, --budget");
  }
  const auto tree = load_circuit(a.circuit);
  std::vector<double> eps;
  if (!a.eps.empty()) {
    eps = a.eps;
  } else if (a.eps_uniform) {
    eps.assign(tree.size(), *a.eps_uniform);
  } else {
    check_tolerance(a.theta, "theta");
    eps = allocate_budget(tree, parse_model_spec(a.model), *a.budget,
                          parse_allocation_kind(a.allocation), a.theta)
              .eps;
  }
  const auto report = eval_report(tree, eps);

  std::string text;
  if (a.out.format == "csv") {
    text = "pattern,error\n";
    for (std::size_t x = 0; x < report.per_input_error.size(); ++x) {
      text += csv_row({std::to_string(x), format_number(report.per_input_error[x])});
    }
  } else {
    ordered_json j{{"circuit", a.circuit},
                   {"eps", eps},
                   {"per_input_error", report.per_input_error},
                   {"worst_delta", report.worst_delta},
                   {"cond_error_entropy", report.cond_error_entropy}};
    if (report.parity_closed_form) j["parity_closed_form"] = *report.parity_closed_form;
    if (!a.audit.empty()) {
      ordered_json rows = ordered_json::array();
      for (std::size_t i : a.audit) {
        const auto r = info_audit(tree, eps, i);
        ordered_json row{{"input", r.input}, {"sensitive", r.sensitive}};
        if (r.sensitive) {
          row["configuration"] = r.configuration;
          row["error_probability"] = r.error_probability;
          row["mutual_information"] = r.mutual_information;
          row["fano_lhs"] = r.fano_lhs;
          row["sdpi_rhs"] = r.sdpi_rhs;
          row["fano_holds"] = r.fano_holds;
          row["sdpi_holds"] = r.sdpi_holds;
        }
        rows.push_back(std::move(row));
      }
      j["audit"] = std::move(rows);
    }
    text = j.dump(2) + '\n';
  }
  emit(a.out, text, out);
  return kExitOk;
}

// sweep

struct SweepArgs {
  std::string grid;
  std::string model = "exp:0.5:1";
  std::vector<std::string> kinds{"AND", "OR", "XOR"};
  std::vector<std::string> structures{"balanced:2:1", "line:3"};
  std::vector<std::string> allocations{"heuristic", "uniform"};
  double theta = 1e-6;
  double eta = 1e-8;
  Output out;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  check_tolerance(a.eta, "eta");
  check_tolerance(a.theta, "theta");
  SweepConfig config;
  config.grid = parse_grid(a.grid);
  config.model = parse_model_spec(a.model);
  config.structures = a.structures;
  config.gate_kinds = a.kinds;
  config.allocations.clear();
  for (const auto& name : a.allocations) config.allocations.push_back(parse_allocation_kind(name));
  config.theta = a.theta;
  config.eta = a.eta;
  for (const auto& kind : config.gate_kinds) {
    if (kind != "AND" && kind != "OR" && kind != "XOR") {
      throw std::invalid_argument("sweep gate kind must be AND, OR or XOR, got '" + kind + "'");
    }
  }
  const auto rows = run_sweep(config);

  std::string text;
  if (a.out.format == "csv") {
    text =
        "budget_ce,budget,structure,gate_kind,allocation_kind,status,worst_delta,"
        "cond_error_entropy,entropy_limit,total_energy,gate_energies\n";
    for (const auto& r : rows) {
      std::string energies;
      for (double e : r.gate_energies) {
        if (!energies.empty()) energies += ';';
        energies += format_number(e);
      }
      text += csv_row({format_number(r.budget_ce), format_number(r.budget), r.structure, r.gate_kind,
                       std::string(to_string(r.allocation)), r.status, format_number(r.worst_delta),
                       format_number(r.cond_error_entropy), format_number(r.entropy_limit),
                       format_number(r.total_energy), energies});
    }
  } else {
    ordered_json j = ordered_json::array();
    for (const auto& r : rows) {
      j.push_back({{"budget_ce", r.budget_ce},
                   {"budget", r.budget},
                   {"structure", r.structure},
                   {"gate_kind", r.gate_kind},
                   {"allocation_kind", to_string(r.allocation)},
                   {"status", r.status},
                   {"worst_delta", r.worst_delta},
                   {"cond_error_entropy", r.cond_error_entropy},
                   {"entropy_limit", r.entropy_limit},
                   {"total_energy", r.total_energy},
                   {"gate_energies", r.gate_energies}});
    }
    text = j.dump(2) + '\n';
  }
  emit(a.out, text, out);
  return kExitOk;
}

// validate-model

int cmd_validate_model(const std::string& spec, const Output& o, std::ostream& out) {
  const auto model = parse_model_spec(spec);
  const auto r = validate_physical(model);
  ordered_json j{{"model", model.spec()},
                 {"passed", r.passed()},
                 {"grid_points", r.grid_points},
                 {"monotonicity_violations", r.monotonicity_violations},
                 {"convexity_violations", r.convexity_violations},
                 {"limit_at_zero_ok", r.limit_at_zero_ok},
                 {"tail_decreasing", r.tail_decreasing},
                 {"failures", r.failures}};
  emit(o, j.dump(2) + '\n', out);
  return r.passed() ? kExitOk : kExitUsage;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

GateTree load_circuit(const std::string& source) {
  if (source.empty()) throw std::invalid_argument("no circuit given");
  if (source.rfind("balanced:", 0) == 0 || source.rfind("line:", 0) == 0) {
    return generate_from_spec(source);
  }
  std::ifstream f(source, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot read circuit file '" + source + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_circuit(ss.str());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Energy and reliability of noisy formulas", "enrel"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "enrel 0.1.0");

  BoundArgs bound;
  auto* b = app.add_subcommand("bound", "Lower bounds on total energy");
  b->add_option("--n", bound.n, "Input counts")->delimiter(',');
  b->add_option("--k", bound.k, "Maximum gate fan-in");
  b->add_option("--delta", bound.delta, "Reliability target")->capture_default_str();
  b->add_option("--model", bound.model, "Energy-failure model")->capture_default_str();
  b->add_option("--circuit", bound.circuit, "Circuit file or generator spec");
  add_output_options(b, bound.out, "csv");

  AllocArgs alloc;
  auto* a = app.add_subcommand("alloc", "Energy allocation for a target or a budget");
  a->add_option("--circuit", alloc.circuit, "Circuit file or generator spec")->required();
  a->add_option("--model", alloc.model, "Energy-failure model")->capture_default_str();
  a->add_option("--gamma", alloc.gamma, "Path budget");
  a->add_option("--delta", alloc.delta, "Reliability target");
  a->add_option("--budget", alloc.budget, "Total energy budget");
  a->add_option("--eta", alloc.eta, "Solver tolerance")->capture_default_str();
  a->add_option("--theta", alloc.theta, "Budget tolerance")->capture_default_str();
  add_output_options(a, alloc.out, "json");

  EvaluateArgs eval;
  auto* e = app.add_subcommand("evaluate", "Exact output error of the noisy circuit");
  e->add_option("--circuit", eval.circuit, "Circuit file or generator spec")->required();
  e->add_option("--eps", eval.eps, "Per-gate failure probabilities")->delimiter(',');
  e->add_option("--eps-uniform", eval.eps_uniform, "Same failure probability on every gate");
  e->add_option("--budget", eval.budget, "Allocate this energy first");
  e->add_option("--allocation", eval.allocation, "Allocation for --budget")
      ->check(CLI::IsMember({"heuristic", "uniform"}))
      ->capture_default_str();
  e->add_option("--model", eval.model, "Energy-failure model for --budget")->capture_default_str();
  e->add_option("--theta", eval.theta, "Budget tolerance")->capture_default_str();
  e->add_option("--audit", eval.audit, "Information audit for these inputs")->delimiter(',');
  add_output_options(e, eval.out, "json");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Heuristic against uniform allocation over a budget grid");
  s->add_option("--grid", sweep.grid, "start:stop:steps in units of cE")->required();
  s->add_option("--model", sweep.model, "Energy-failure model")->capture_default_str();
  s->add_option("--kinds", sweep.kinds, "Gate kinds")->delimiter(',');
  s->add_option("--structures", sweep.structures, "Shapes such as balanced:2:1 or line:3")
      ->delimiter(',');
  s->add_option("--allocations", sweep.allocations, "heuristic and/or uniform")->delimiter(',');
  s->add_option("--eta", sweep.eta, "Solver tolerance")->capture_default_str();
  s->add_option("--theta", sweep.theta, "Budget tolerance")->capture_default_str();
  add_output_options(s, sweep.out, "csv");

  std::string gen_spec;
  Output gen_out;
  auto* g = app.add_subcommand("gen", "Write a generated circuit as JSON");
  g->add_option("--circuit", gen_spec, "balanced:K:D:KIND or line:M:KIND")->required();
  g->add_option("--output,-o", gen_out.path, "Output file");

  std::string model_spec;
  Output model_out;
  auto* v = app.add_subcommand("validate-model", "Check that a model is physical");
  v->add_option("--model", model_spec, "Energy-failure model")->required();
  v->add_option("--output,-o", model_out.path, "Output file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (b->parsed()) return cmd_bound(bound, out);
    if (a->parsed()) return cmd_alloc(alloc, out);
    if (e->parsed()) return cmd_evaluate(eval, out);
    if (s->parsed()) return cmd_sweep(sweep, out);
    if (g->parsed()) {
      emit(gen_out, to_json(generate_from_spec(gen_spec)) + '\n', out);
      return kExitOk;
    }
    if (v->parsed()) return cmd_validate_model(model_spec, model_out, out);
    return kExitUsage;
  } catch (const ConvergenceError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitNotConverged;
  } catch (const CircuitError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& ex) {
    // DomainError, PreconditionError, invalid_argument and out_of_range.
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace enrel
