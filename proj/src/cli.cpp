// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathgauge/bounds.hpp"
#include "pathgauge/forward.hpp"
#include "pathgauge/io.hpp"
#include "pathgauge/norms.hpp"
#include "pathgauge/paths.hpp"
#include "pathgauge/rescale.hpp"
#include "pathgauge/transforms.hpp"

#ifndef PATHGAUGE_VERSION
#define PATHGAUGE_VERSION "0.0.0"
#endif

namespace pathgauge {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_exponent(const std::string& s, const char* name) {
  if (s == "inf" || s == "infinity" || s == "Inf") return kInfinity;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && v > 0.0) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string("--") + name + " expects a positive number or 'inf', got '" + s + "'");
}

json exponent_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

json network_input(const std::string& path) {
  return {{"path", path}, {"sha256", sha256_hex(read_file(path))}};
}

double relative_gap(double a, double b, double scale = 0.0) {
  const double denom = std::max({std::abs(a), std::abs(b), scale});
  return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

json violations_json(const ValidationReport& report) {
  json list = json::array();
  for (const auto& v : report.violations)
    list.push_back({{"rule", v.rule}, {"subject", v.subject}, {"message", v.message}});
  return list;
}

struct LossSpec {
  std::string name;
  double L = 0.0;
};

LossSpec parse_loss(const std::string& s) {
  if (s == "xent") return {"cross-entropy", kCrossEntropyLipschitz};
  auto value_after = [&](std::size_t prefix) {
    try {
      std::size_t used = 0;
      const std::string tail = s.substr(prefix);
      const double v = std::stod(tail, &used);
      if (used == tail.size() && v > 0.0 && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("--loss: bad value in '" + s + "'");
  };
  if (s.rfind("margin:", 0) == 0) {
    const double gamma = value_after(7);
    return {"margin", margin_loss_lipschitz(gamma)};
  }
  if (s.rfind("const:", 0) == 0) return {"constant", value_after(6)};
  throw UsageError("--loss must be xent, margin:GAMMA or const:L");
}

ArchMeta parse_meta(const std::string& s, bool with_bias) {
  std::vector<std::size_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long long x = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      v.push_back(static_cast<std::size_t>(x));
    } catch (const std::exception&) {
      throw UsageError("--meta expects D,P,K,M,din,dout as integers");
    }
  }
  if (v.size() != 6) throw UsageError("--meta expects six values D,P,K,M,din,dout");
  ArchMeta meta;
  meta.D = v[0];
  meta.P = v[1];
  meta.K = v[2];
  meta.M = v[3];
  meta.d_in = v[4];
  meta.d_out = v[5];
  meta.with_bias = with_bias;
  if (meta.D < 1 || meta.K < 1 || meta.d_in < 1 || meta.d_out < 1)
    throw UsageError("--meta requires D, K, din, dout >= 1");
  return meta;
}

json meta_json(const ArchMeta& m) {
  return {{"D", m.D},         {"P", m.P},           {"K", m.K},
          {"M", m.M},         {"d_in", m.d_in},     {"d_out", m.d_out},
          {"with_bias", m.with_bias}, {"layered_pooling", m.layered_pooling}};
}

/// Per-command state filled by CLI11 and consumed by the handlers below.
struct Options {
  std::string network;
  std::string out;
  std::string data;
  std::string q = "1";
  std::string r = "1";
  bool exact = false;
  bool naive = false;
  bool log_domain = false;
  bool force = false;
  bool no_bias = false;
  std::size_t cap = kDefaultPathCap;
  std::string op;
  std::string loss = "xent";
  std::string meta;
  std::optional<double> B;
  std::optional<double> n;
  std::optional<double> pathnorm;
  double gamma = 0.0;
  double tol = 1e-9;
  std::size_t samples = 10;
  std::uint64_t seed = 20240101;
};

struct Outcome {
  json results;
  json inputs = json::object();
  int code = 0;
  std::string summary;
};

Outcome cmd_validate(const Options& o) {
  Outcome res;
  res.inputs["network"] = network_input(o.network);
  const Network net = load_network(o.network, /*require_valid=*/false);
  const auto report = validate(net.arch, net.params);
  res.results["validation"] = {{"ok", report.ok()}, {"violations", violations_json(report)}};
  res.results["neurons"] = net.arch.size();
  res.results["edges"] = net.arch.edge_count();
  res.results["d_in"] = net.arch.input_dim();
  res.results["d_out"] = net.arch.output_dim();
  if (net.arch.acyclic()) {
    const auto pools = pool_stats(net.arch);
    res.results["D"] = depth(net.arch);
    res.results["P"] = pools.distinct_k;
    res.results["K"] = pools.max_kernel;
    res.results["M"] = pools.pool_layers;
  }
  res.code = report.ok() ? 0 : 1;
  res.summary = report.ok() ? "valid network"
                            : "invalid network: " + std::to_string(report.violations.size()) + " violation(s)";
  return res;
}

Outcome cmd_pathnorm(const Options& o) {
  Outcome res;
  const NormSpec spec{parse_exponent(o.q, "q"), parse_exponent(o.r, "r")};
  if (std::isinf(spec.q)) throw UsageError("--q must be finite for path-norms");
  if (int(o.exact) + int(o.naive) + int(o.log_domain) > 1)
    throw UsageError("--exact, --naive and --log-domain are mutually exclusive");
  res.inputs["network"] = network_input(o.network);
  const Network net = load_network(o.network);
  res.results["q"] = exponent_json(spec.q);
  res.results["r"] = exponent_json(spec.r);
  std::ostringstream summary;
  if (o.exact) {
    const double v = path_norm_exact(net.arch, net.params, spec, o.cap);
    res.results["mode"] = "exact";
    res.results["pathnorm"] = v;
    summary << "pathnorm (exact) = " << v;
  } else {
    const PathNormResult v = o.naive ? naive_forward_norm(net.arch, net.params, spec)
                                     : path_norm_fast(net.arch, net.params, spec,
                                                      o.log_domain ? NormMode::log_domain : NormMode::plain);
    res.results["mode"] = o.naive ? "naive" : (o.log_domain ? "log-domain" : "fast");
    res.results["pathnorm"] = v.value;
    res.results["overflow"] = v.overflow;
    if (o.log_domain) res.results["log10_pathnorm"] = v.log10_value;
    summary << "pathnorm (" << res.results["mode"].get<std::string>() << ") = " << v.value;
    if (o.log_domain) summary << " (log10 " << v.log10_value << ")";
    if (v.overflow) summary << " [overflow]";
  }
  res.summary = summary.str();
  return res;
}

Outcome cmd_normalize(const Options& o) {
  Outcome res;
  const double q = parse_exponent(o.q, "q");
  res.inputs["network"] = network_input(o.network);
  const Network net = load_network(o.network);
  const auto outcome = normalize(net.arch, net.params, q);
  save_network({net.arch, outcome.params}, o.out);
  json scales = json::object();
  for (const auto& [id, lambda] : outcome.scales) scales[id] = lambda;
  res.results["q"] = exponent_json(q);
  res.results["scales"] = std::move(scales);
  res.results["zero_neurons"] = outcome.zero_neurons;
  res.results["normalized"] = is_normalized(net.arch, outcome.params, q);
  res.results["out"] = o.out;
  res.summary = "normalized parameters written to " + o.out;
  return res;
}

Outcome cmd_lipschitz(const Options& o) {
  Outcome res;
  const double r = parse_exponent(o.r, "r");
  res.inputs["network"] = network_input(o.network);
  const Network net = load_network(o.network);
  const auto v = lipschitz_bound(net.arch, net.params, r);
  res.results["r"] = exponent_json(r);
  res.results["lipschitz_bound"] = v.value;
  res.results["overflow"] = v.overflow;
  std::ostringstream summary;
  summary << "||R(x)-R(x')||_r <= " << v.value << " * ||x-x'||_inf";
  res.summary = summary.str();
  return res;
}

Outcome cmd_opnorm(const Options& o) {
  Outcome res;
  const NormSpec spec{parse_exponent(o.q, "q"), parse_exponent(o.r, "r")};
  if (std::isinf(spec.q)) throw UsageError("--q must be finite");
  res.inputs["network"] = network_input(o.network);
  const Network net = load_network(o.network);
  const double pi = dag_operator_product(net.arch, net.params, spec);
  const auto phi = path_norm_fast(net.arch, net.params, spec);
  res.results["q"] = exponent_json(spec.q);
  res.results["r"] = exponent_json(spec.r);
  res.results["Pi"] = pi;
  res.results["pathnorm"] = phi.value;
  std::ostringstream summary;
  summary << "Pi = " << pi << " >= pathnorm = " << phi.value;
  res.summary = summary.str();
  return res;
}

Outcome cmd_transform(const Options& o) {
  Outcome res;
  res.inputs["network"] = network_input(o.network);
  const Network net = load_network(o.network);
  Network result;
  if (o.op == "absorb-biases") {
    auto absorbed = absorb_biases(net.arch, net.params, o.force);
    result = std::move(absorbed.net);
    res.results["bias_input"] = absorbed.bias_input;
  } else if (o.op == "drop-identity") {
    result = eliminate_identity_neurons(net.arch, net.params);
  } else {
    result = {pool_to_identity(net.arch), net.params};
  }
  save_network(result, o.out);
  res.results["op"] = o.op;
  res.results["neurons"] = {net.arch.size(), result.arch.size()};
  res.results["edges"] = {net.arch.edge_count(), result.arch.edge_count()};
  res.results["D"] = {depth(net.arch), depth(result.arch)};
  res.results["out"] = o.out;
  res.summary = o.op + ": written to " + o.out;
  return res;
}

Outcome cmd_oracle_diff(const Options& o) {
  Outcome res;
  res.inputs["network"] = network_input(o.network);
  const Network net = load_network(o.network);
  const auto& arch = net.arch;

  Matrix x;
  if (!o.data.empty()) {
    res.inputs["data"] = network_input(o.data);
    x = load_dataset(o.data, arch.input_dim()).x;
  } else {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    x = Matrix(o.samples, arch.input_dim());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (double& v : x.row(i)) v = uni(rng);
  }

  double norm_gap = 0.0;
  double opnorm_gap = 0.0;
  const auto paths = enumerate_paths(arch, o.cap);
  for (double q : {1.0, 2.0, 4.0}) {
    for (double r : {1.0, 2.0, kInfinity}) {
      const NormSpec spec{q, r};
      norm_gap = std::max(norm_gap, relative_gap(path_norm_fast(arch, net.params, spec).value,
                                                 path_norm_exact(arch, net.params, spec, o.cap)));
      // Brute-force max of pathwise products per output.
      std::vector<double> per_output;
      for (NeuronIndex v : arch.outputs()) {
        double best = 0.0;
        for (const auto& p : paths)
          if (p.end() == v) best = std::max(best, pathwise_product(arch, net.params, p, q));
        per_output.push_back(best);
      }
      opnorm_gap = std::max(opnorm_gap, relative_gap(dag_operator_product(arch, net.params, spec),
                                                     lq_norm(per_output, r)));
    }
  }

  double forward_gap = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto direct = realize(arch, net.params, x.row(i));
    const auto lifted = forward_via_lifting_terms(arch, net.params, x.row(i), o.cap);
    for (std::size_t j = 0; j < direct.size(); ++j)
      forward_gap = std::max(forward_gap, relative_gap(direct[j], lifted.values[j], lifted.magnitude[j]));
  }

  const bool pass = norm_gap < o.tol && opnorm_gap < o.tol && forward_gap < o.tol;
  res.results["paths"] = paths.size();
  res.results["samples"] = x.rows();
  res.results["max_rel_pathnorm"] = norm_gap;
  res.results["max_rel_opnorm"] = opnorm_gap;
  res.results["max_rel_forward"] = forward_gap;
  res.results["tol"] = o.tol;
  res.results["pass"] = pass;
  res.code = pass ? 0 : 1;
  std::ostringstream summary;
  summary << (pass ? "PASS" : "FAIL") << " pathnorm " << norm_gap << ", opnorm " << opnorm_gap
          << ", forward " << forward_gap;
  res.summary = summary.str();
  return res;
}

Outcome cmd_bound(const Options& o) {
  Outcome res;
  const LossSpec loss = parse_loss(o.loss);
  if (o.B.has_value() != o.n.has_value()) throw UsageError("--B and --n go together");
  if (o.meta.empty() && o.network.empty()) throw UsageError("bound needs a network or --meta");

  ArchMeta meta;
  std::optional<Network> net;
  if (!o.network.empty()) {
    res.inputs["network"] = network_input(o.network);
    net = load_network(o.network);
  }
  if (!o.meta.empty()) {
    meta = parse_meta(o.meta, !o.no_bias);
  } else {
    meta = meta_from_network(net->arch, net->params);
  }

  BoundReport report;
  report.L = loss.L;
  report.C = bound_constant_C(meta);
  report.C_sharpened = bound_constant_C_sharpened(meta);

  std::optional<double> sigma, n;
  if (!o.data.empty()) {
    res.inputs["data"] = network_input(o.data);
    const Dataset data = load_dataset(o.data, meta.d_in);
    sigma = sigma_estimate(data.x, meta.with_bias ? SigmaVariant::coordinate_with_bias
                                                  : SigmaVariant::sup_norm);
    n = static_cast<double>(data.x.rows());
    res.results["sigma_source"] = "empirical";
  } else if (o.B) {
    if (!(*o.n >= 1.0)) throw UsageError("--n must be at least 1");
    n = *o.n;
    sigma = *o.B * std::sqrt(*o.n);
    res.results["sigma_source"] = "B*sqrt(n)";
    res.results["B"] = *o.B;
  }

  std::optional<double> pathnorm;
  if (o.pathnorm) {
    pathnorm = *o.pathnorm;
    report.log10_path_norm_l1 = std::log10(*o.pathnorm);
  } else if (net) {
    const auto v = path_norm_fast(net->arch, net->params, {1.0, 1.0},
                                  o.log_domain ? NormMode::log_domain : NormMode::plain);
    pathnorm = v.value;
    report.overflow = v.overflow;
    report.log10_path_norm_l1 = v.log10_value;
  }

  res.results["meta"] = meta_json(meta);
  res.results["loss"] = loss.name;
  res.results["L"] = report.L;
  res.results["C"] = report.C;
  res.results["C_sharpened"] = report.C_sharpened ? json(*report.C_sharpened) : json(nullptr);
  res.results["C_sharpened_heuristic"] = true;
  std::ostringstream summary;
  summary << "C = " << report.C;
  if (report.C_sharpened) summary << ", C_sharpened = " << *report.C_sharpened;

  if (sigma) {
    report.sigma = *sigma;
    res.results["sigma"] = *sigma;
    res.results["n"] = *n;
    const double factor = 4.0 * *sigma / *n * report.C;
    res.results["bound_factor"] = factor;
    summary << ", 4*sigma*C/n = " << factor;
    if (report.C_sharpened) {
      res.results["bound_factor_sharpened"] = 4.0 * *sigma / *n * *report.C_sharpened;
      summary << " (sharpened " << 4.0 * *sigma / *n * *report.C_sharpened << ")";
    }
  }
  if (pathnorm) {
    report.path_norm_l1 = *pathnorm;
    res.results["pathnorm_l1"] = *pathnorm;
    res.results["log10_pathnorm_l1"] = report.log10_path_norm_l1;
    res.results["overflow"] = report.overflow;
  }
  if (sigma && pathnorm) {
    report.bound = generalization_bound(*sigma, *n, report.L, report.C, *pathnorm);
    report.log10_bound =
        generalization_bound_log10(*sigma, *n, report.L, report.C, report.log10_path_norm_l1);
    res.results["bound"] = report.bound;
    res.results["log10_bound"] = report.log10_bound;
    if (report.C_sharpened)
      res.results["bound_sharpened"] =
          generalization_bound(*sigma, *n, report.L, *report.C_sharpened, *pathnorm);
    summary << ", bound = " << report.bound;
  }
  res.summary = summary.str();
  return res;
}

Outcome cmd_margin_bound(const Options& o) {
  Outcome res;
  if (!(o.gamma > 0.0)) throw UsageError("--gamma must be positive");
  res.inputs["network"] = network_input(o.network);
  res.inputs["data"] = network_input(o.data);
  const Network net = load_network(o.network);
  const ArchMeta meta = meta_from_network(net.arch, net.params);
  const Dataset data = load_dataset(o.data, net.arch.input_dim());
  if (!data.has_labels()) throw ParseError(o.data, "margin-bound needs a label column");
  const double sigma = sigma_estimate(data.x, meta.with_bias ? SigmaVariant::coordinate_with_bias
                                                             : SigmaVariant::sup_norm);
  const double n = static_cast<double>(data.x.rows());
  const double C = bound_constant_C(meta);
  const auto pn = path_norm_fast(net.arch, net.params, {1.0, 1.0});
  const Matrix outputs = batch_realize(net.arch, net.params, data.x);
  const MarginBound b = margin_bound(outputs, data.labels, o.gamma, sigma, n, C, pn.value);
  res.results["meta"] = meta_json(meta);
  res.results["gamma"] = o.gamma;
  res.results["sigma"] = sigma;
  res.results["n"] = n;
  res.results["C"] = C;
  res.results["pathnorm_l1"] = pn.value;
  res.results["term1"] = b.term1;
  res.results["term2"] = b.term2;
  res.results["total"] = b.total;
  std::ostringstream summary;
  summary << "P(misclassification) <= " << b.term1 << " + " << b.term2 << " = " << b.total;
  res.summary = summary.str();
  return res;
}

}  // namespace

int run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Path-norms, Lipschitz and generalization bounds for DAG ReLU networks", "pathgauge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PATHGAUGE_VERSION);

  Options o;
  auto exponent = [](CLI::App* sub, const char* flag, std::string& target, const char* what) {
    sub->add_option(flag, target, what)->capture_default_str();
  };
  auto network = [&](CLI::App* sub, bool required = true) {
    auto* opt = sub->add_option("network", o.network, "Network file (JSON)");
    if (required) opt->required()->check(CLI::ExistingFile);
    else opt->check(CLI::ExistingFile);
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a network file against the model rules");
  network(validate_cmd);

  auto* pathnorm_cmd = app.add_subcommand("pathnorm", "Mixed path-norm ||Phi||_{q,r}");
  network(pathnorm_cmd);
  exponent(pathnorm_cmd, "--q", o.q, "Inner exponent q in (0, inf)");
  exponent(pathnorm_cmd, "--r", o.r, "Outer exponent r in (0, inf]");
  pathnorm_cmd->add_flag("--exact", o.exact, "Enumerate paths instead of one forward pass");
  pathnorm_cmd->add_flag("--naive", o.naive, "Forward formula without rewriting max-pooling neurons");
  pathnorm_cmd->add_flag("--log-domain", o.log_domain, "Accumulate in log space (reports log10)");
  pathnorm_cmd->add_option("--cap", o.cap, "Path budget for --exact")->capture_default_str();

  auto* normalize_cmd = app.add_subcommand("normalize", "Rescale parameters to q-normalized form");
  network(normalize_cmd);
  exponent(normalize_cmd, "--q", o.q, "Exponent q in (0, inf]");
  normalize_cmd->add_option("--out", o.out, "Output network file")->required();

  auto* lipschitz_cmd = app.add_subcommand("lipschitz", "Input Lipschitz bound ||Phi||_{1,r}");
  network(lipschitz_cmd);
  exponent(lipschitz_cmd, "--r", o.r, "Output norm exponent r in (0, inf]");

  auto* opnorm_cmd = app.add_subcommand("opnorm", "DAG operator-norm product Pi_{q,r}");
  network(opnorm_cmd);
  exponent(opnorm_cmd, "--q", o.q, "Inner exponent q in (0, inf)");
  exponent(opnorm_cmd, "--r", o.r, "Outer exponent r in (0, inf]");

  auto* transform_cmd = app.add_subcommand("transform", "Function-preserving graph rewrite");
  network(transform_cmd);
  transform_cmd->add_option("--op", o.op, "Rewrite to apply")
      ->required()
      ->check(CLI::IsMember({"absorb-biases", "drop-identity", "pool-to-id"}));
  transform_cmd->add_option("--out", o.out, "Output network file")->required();
  transform_cmd->add_flag("--force", o.force, "absorb-biases: add the bias input even without biases");

  auto* oracle_cmd = app.add_subcommand("oracle-diff", "Compare fast routes with path enumeration");
  network(oracle_cmd);
  oracle_cmd->add_option("--data", o.data, "CSV inputs (random inputs when omitted)")->check(CLI::ExistingFile);
  oracle_cmd->add_option("--samples", o.samples, "Random inputs when --data is omitted")->capture_default_str();
  oracle_cmd->add_option("--seed", o.seed, "Seed for random inputs")->capture_default_str();
  oracle_cmd->add_option("--tol", o.tol, "Maximal relative discrepancy")->capture_default_str();
  oracle_cmd->add_option("--cap", o.cap, "Path budget")->capture_default_str();

  auto* bound_cmd = app.add_subcommand("bound", "Generalization bound constants");
  network(bound_cmd, false);
  bound_cmd->add_option("--loss", o.loss, "xent, margin:GAMMA or const:L")->capture_default_str();
  bound_cmd->add_option("--data", o.data, "CSV dataset for the empirical sigma")->check(CLI::ExistingFile);
  bound_cmd->add_option("--meta", o.meta, "D,P,K,M,din,dout instead of a network");
  bound_cmd->add_option("--B", o.B, "Max L-inf norm of the inputs (sigma/n <= B/sqrt(n))");
  bound_cmd->add_option("--n", o.n, "Sample count paired with --B");
  bound_cmd->add_option("--pathnorm", o.pathnorm, "Use this L1 path-norm instead of computing it");
  bound_cmd->add_flag("--no-bias", o.no_bias, "With --meta: the network has no biases");
  bound_cmd->add_flag("--log-domain", o.log_domain, "Compute the path-norm in log space");

  auto* margin_cmd = app.add_subcommand("margin-bound", "Misclassification bound via the margin loss");
  network(margin_cmd);
  margin_cmd->add_option("--gamma", o.gamma, "Margin gamma > 0")->required();
  margin_cmd->add_option("--data", o.data, "Labelled CSV dataset")->required()->check(CLI::ExistingFile);

  std::vector<const char*> raw;
  for (const auto& a : argv) raw.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << PATHGAUGE_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  Outcome outcome;
  try {
    if (name == "validate") outcome = cmd_validate(o);
    else if (name == "pathnorm") outcome = cmd_pathnorm(o);
    else if (name == "normalize") outcome = cmd_normalize(o);
    else if (name == "lipschitz") outcome = cmd_lipschitz(o);
    else if (name == "opnorm") outcome = cmd_opnorm(o);
    else if (name == "transform") outcome = cmd_transform(o);
    else if (name == "oracle-diff") outcome = cmd_oracle_diff(o);
    else if (name == "bound") outcome = cmd_bound(o);
    else outcome = cmd_margin_bound(o);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << sub->help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  json report;
  report["tool"] = "pathgauge";
  report["version"] = PATHGAUGE_VERSION;
  report["command"] = std::vector<std::string>(argv.begin() + 1, argv.end());
  report["inputs"] = std::move(outcome.inputs);
  report["results"] = std::move(outcome.results);
  report["exit_code"] = outcome.code;
  report["wall_time_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out << report.dump(2) << "\n";
  err << outcome.summary << "\n";
  return outcome.code;
}

}  // namespace pathgauge
