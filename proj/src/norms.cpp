// SPDX-License-Identifier: Apache-2.0
#include "pathgauge/norms.hpp"

#include <algorithm>
#include <cmath>

#include "pathgauge/errors.hpp"
#include "pathgauge/forward.hpp"
#include "pathgauge/transforms.hpp"

namespace pathgauge {

void NormSpec::check() const {
  if (!(q > 0.0) || !std::isfinite(q)) throw InvalidNormSpec("q must lie in (0, inf)");
  if (!(r > 0.0) || std::isnan(r)) throw InvalidNormSpec("r must lie in (0, inf]");
}

double lq_norm(std::span<const double> x, double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
  }
  double s = 0.0;
  for (double v : x) s += std::pow(std::abs(v), q);
  return q == 1.0 ? s : std::pow(s, 1.0 / q);
}

namespace {

double pow_abs(double v, double q) { return q == 1.0 ? std::abs(v) : std::pow(std::abs(v), q); }

Parameters abs_pow(const Parameters& params, double q) {
  Parameters out = params;
  for (double& w : out.weights) w = pow_abs(w, q);
  for (double& b : out.biases) b = pow_abs(b, q);
  return out;
}

// log(exp(a) + exp(b)) with -inf as the log of zero.
double log_add(double a, double b) {
  if (a == -kInfinity) return b;
  if (b == -kInfinity) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double outer_norm(std::span<const double> per_output, double r) { return lq_norm(per_output, r); }

// Per-output values ||Phi^{->v}||_q^q, read from a forward pass of |theta|^q
// on the all-ones input. Every term is non-negative so relu acts as identity.
PathNormResult forward_formula(const Architecture& arch, const Parameters& params, NormSpec spec,
                               NormMode mode) {
  spec.check();
  require_valid(arch, params);
  PathNormResult result;
  const double q = spec.q;

  if (mode == NormMode::plain) {
    const Parameters powered = abs_pow(params, q);
    const std::vector<double> ones(arch.input_dim(), 1.0);
    const auto tr = trace(arch, powered, ones);
    result.overflow = std::any_of(tr.values.begin(), tr.values.end(),
                                  [](double v) { return std::isinf(v); });
    std::vector<double> per_output;
    for (NeuronIndex v : arch.outputs())
      per_output.push_back(q == 1.0 ? tr.values[v] : std::pow(tr.values[v], 1.0 / q));
    result.value = outer_norm(per_output, spec.r);
    if (std::isinf(result.value)) result.overflow = true;
    result.log10_value = std::log10(result.value);
    return result;
  }

  // Log-domain: log of each neuron value via log-sum-exp. Valid because
  // the graph (pools already rewritten) only sums non-negative terms.
  std::vector<double> logv(arch.size(), -kInfinity);
  for (NeuronIndex v : arch.order()) {
    if (arch.is_input(v)) {
      logv[v] = 0.0;
      continue;
    }
    const auto in = arch.incoming(v);
    const bool pool = arch.activation(v).kind == ActivationKind::kpool;
    const double log_bias = q * std::log(std::abs(params.biases[v]));
    if (pool) {
      // k-th largest of the per-antecedent terms (naive formula only).
      std::vector<double> terms;
      for (EdgeIndex e : in)
        terms.push_back(log_add(log_bias, q * std::log(std::abs(params.weights[e])) +
                                              logv[arch.edge(e).from]));
      std::sort(terms.begin(), terms.end(), std::greater<>());
      logv[v] = terms[static_cast<std::size_t>(arch.activation(v).k) - 1];
      continue;
    }
    double acc = log_bias;
    for (EdgeIndex e : in)
      acc = log_add(acc, q * std::log(std::abs(params.weights[e])) + logv[arch.edge(e).from]);
    logv[v] = acc;
  }
  std::vector<double> log_per_output;  // natural log of ||Phi^{->v}||_q
  for (NeuronIndex v : arch.outputs()) log_per_output.push_back(logv[v] / q);
  double log_total;
  if (std::isinf(spec.r)) {
    log_total = *std::max_element(log_per_output.begin(), log_per_output.end());
  } else {
    log_total = -kInfinity;
    for (double l : log_per_output) log_total = log_add(log_total, spec.r * l);
    log_total /= spec.r;
  }
  result.log10_value = log_total / std::log(10.0);
  result.value = std::exp(log_total);
  result.overflow = std::isinf(result.value);
  return result;
}

}  // namespace

PathNormResult path_norm_fast(const Architecture& arch, const Parameters& params, NormSpec spec,
                              NormMode mode) {
  return forward_formula(pool_to_identity(arch), params, spec, mode);
}

PathNormResult naive_forward_norm(const Architecture& arch, const Parameters& params,
                                  NormSpec spec) {
  return forward_formula(arch, params, spec, NormMode::plain);
}

double path_norm_exact(const Architecture& arch, const Parameters& params, NormSpec spec,
                       std::size_t cap) {
  spec.check();
  require_valid(arch, params);
  const PathLifting lifting = path_lifting(arch, params, cap);
  std::vector<double> per_output;
  std::vector<double> block;
  std::size_t row = 0;
  for (NeuronIndex v : arch.outputs()) {
    block.clear();
    while (row < lifting.index.size() && lifting.index[row].end() == v)
      block.push_back(lifting.values[row++]);
    per_output.push_back(lq_norm(block, spec.q));
  }
  return outer_norm(per_output, spec.r);
}

std::vector<double> subgraph_path_norms(const Architecture& arch, const Parameters& params,
                                        double q) {
  // Same recursion as the fast formula, over every neuron, with max in place
  // of sums when q is infinite.
  std::vector<double> acc(arch.size(), 0.0);
  const bool sup = std::isinf(q);
  for (NeuronIndex v : arch.order()) {
    if (arch.is_input(v)) {
      acc[v] = 1.0;
      continue;
    }
    double a = sup ? std::abs(params.biases[v]) : pow_abs(params.biases[v], q);
    for (EdgeIndex e : arch.incoming(v)) {
      const double w = params.weights[e];
      if (sup) a = std::max(a, std::abs(w) * acc[arch.edge(e).from]);
      else a += pow_abs(w, q) * acc[arch.edge(e).from];
    }
    acc[v] = a;
  }
  if (!sup && q != 1.0) {
    for (double& a : acc) a = std::pow(a, 1.0 / q);
  }
  return acc;
}

namespace {

double incoming_norm_pow(const Architecture& arch, const Parameters& params, NeuronIndex v,
                         double q) {
  double s = 0.0;
  for (EdgeIndex e : arch.incoming(v)) s += pow_abs(params.weights[e], q);
  return s;
}

double gamma_pow(const Architecture& arch, const Parameters& params, NeuronIndex v, double q) {
  return arch.is_input(v) ? 1.0 : pow_abs(params.biases[v], q);
}

}  // namespace

double pathwise_product(const Architecture& arch, const Parameters& params, const Path& path,
                        double q) {
  NormSpec{q, 1.0}.check();
  // Horner form of the sum: s_l = s_{l-1} * ||theta^{->p_l}||^q + |gamma_{p_l}|^q.
  double s = 0.0;
  for (std::size_t l = 0; l < path.neurons.size(); ++l) {
    const NeuronIndex v = path.neurons[l];
    if (l > 0) s *= incoming_norm_pow(arch, params, v, q);
    s += gamma_pow(arch, params, v, q);
  }
  return std::pow(s, 1.0 / q);
}

double dag_operator_product(const Architecture& arch, const Parameters& params, NormSpec spec) {
  spec.check();
  require_valid(arch, params);
  const double q = spec.q;
  std::vector<double> value(arch.size(), 0.0);
  for (NeuronIndex v : arch.order()) {
    double best = 0.0;
    for (EdgeIndex e : arch.incoming(v)) best = std::max(best, value[arch.edge(e).from]);
    value[v] = gamma_pow(arch, params, v, q) + incoming_norm_pow(arch, params, v, q) * best;
  }
  std::vector<double> per_output;
  for (NeuronIndex v : arch.outputs()) per_output.push_back(std::pow(value[v], 1.0 / q));
  return outer_norm(per_output, spec.r);
}

PathNormResult lipschitz_bound(const Architecture& arch, const Parameters& params, double r) {
  return path_norm_fast(arch, params, {1.0, r});
}

}  // namespace pathgauge
