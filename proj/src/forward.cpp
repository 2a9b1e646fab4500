// SPDX-License-Identifier: Apache-2.0
#include "pathgauge/forward.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>

#include "pathgauge/errors.hpp"

namespace pathgauge {
namespace {

// Evaluates every neuron; edge/neuron activations are filled only when
// requested.
void evaluate(const Architecture& arch, const Parameters& params, std::span<const double> x,
              std::vector<double>& values, EvaluationTrace* tr) {
  if (x.size() != arch.input_dim()) throw DimensionMismatch(arch.input_dim(), x.size());
  if (params.weights.size() != arch.edge_count() || params.biases.size() != arch.size())
    throw DimensionMismatch("parameters are not bound to this architecture");

  values.assign(arch.size(), 0.0);
  if (tr != nullptr) {
    tr->edge_activations.assign(arch.edge_count(), 0);
    tr->neuron_activations.assign(arch.size(), 0);
  }

  std::vector<double> terms;
  for (NeuronIndex v : arch.order()) {
    const auto in = arch.incoming(v);
    const Activation act = arch.activation(v);
    if (in.empty()) {
      values[v] = x[*arch.input_position(v)];
      if (tr != nullptr) tr->neuron_activations[v] = 1;
      continue;
    }
    const double b = params.biases[v];

    if (act.kind == ActivationKind::kpool) {
      terms.clear();
      for (EdgeIndex e : in) terms.push_back(b + values[arch.edge(e).from] * params.weights[e]);
      std::vector<double> sorted = terms;
      const auto k = static_cast<std::size_t>(std::clamp<int>(act.k, 1, static_cast<int>(in.size())));
      std::sort(sorted.begin(), sorted.end(), std::greater<>());
      values[v] = sorted[k - 1];
      if (tr != nullptr) {
        tr->neuron_activations[v] = 1;
        for (std::size_t i = 0; i < in.size(); ++i) {
          if (terms[i] == values[v]) {
            tr->edge_activations[in[i]] = 1;
            break;
          }
        }
      }
      continue;
    }

    double pre = b;
    for (EdgeIndex e : in) pre += values[arch.edge(e).from] * params.weights[e];
    const bool is_relu = act.kind == ActivationKind::relu;
    values[v] = is_relu ? (pre > 0.0 ? pre : 0.0) : pre;
    if (tr != nullptr) {
      const std::uint8_t a = is_relu ? static_cast<std::uint8_t>(values[v] > 0.0) : 1;
      tr->neuron_activations[v] = a;
      for (EdgeIndex e : in) tr->edge_activations[e] = a;
    }
  }
}

std::vector<double> gather_outputs(const Architecture& arch, const std::vector<double>& values) {
  std::vector<double> out;
  out.reserve(arch.output_dim());
  for (NeuronIndex v : arch.outputs()) out.push_back(values[v]);
  return out;
}

}  // namespace

std::vector<double> realize(const Architecture& arch, const Parameters& params,
                            std::span<const double> x) {
  std::vector<double> values;
  evaluate(arch, params, x, values, nullptr);
  return gather_outputs(arch, values);
}

EvaluationTrace trace(const Architecture& arch, const Parameters& params,
                      std::span<const double> x) {
  EvaluationTrace tr;
  evaluate(arch, params, x, tr.values, &tr);
  return tr;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("PATHGAUGE_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

Matrix batch_realize(const Architecture& arch, const Parameters& params, const Matrix& x,
                     unsigned threads) {
  if (x.cols() != arch.input_dim() && x.rows() > 0) throw DimensionMismatch(arch.input_dim(), x.cols());
  Matrix out(x.rows(), arch.output_dim());
  if (x.rows() == 0) return out;

  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> values;
    for (std::size_t i = begin; i < end; ++i) {
      evaluate(arch, params, x.row(i), values, nullptr);
      const auto outputs = arch.outputs();
      for (std::size_t j = 0; j < outputs.size(); ++j) out(i, j) = values[outputs[j]];
    }
  };

  if (threads == 0) threads = default_thread_count();
  const std::size_t workers = std::min<std::size_t>(threads, (x.rows() + 63) / 64);
  if (workers <= 1) {
    work(0, x.rows());
    return out;
  }
  // Everything evaluate() can throw on is checked here, so workers never throw.
  (void)arch.order();
  if (params.weights.size() != arch.edge_count() || params.biases.size() != arch.size())
    throw DimensionMismatch("parameters are not bound to this architecture");
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (x.rows() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < x.rows(); begin += chunk)
      pool.emplace_back(work, begin, std::min(x.rows(), begin + chunk));
  }
  return out;
}

}  // namespace pathgauge
