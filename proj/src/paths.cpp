// SPDX-License-Identifier: Apache-2.0
#include "pathgauge/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pathgauge/errors.hpp"
#include "pathgauge/forward.hpp"

namespace pathgauge {

std::string to_string(const Architecture& arch, const Path& p) {
  std::string s;
  for (std::size_t i = 0; i < p.neurons.size(); ++i) {
    if (i > 0) s += "->";
    s += arch.id(p.neurons[i]);
  }
  return s;
}

bool canonical_less(const Path& a, const Path& b) {
  if (a.end() != b.end()) return a.end() < b.end();
  if (a.neurons.size() != b.neurons.size()) return a.neurons.size() < b.neurons.size();
  return a.neurons < b.neurons;
}

std::vector<double> count_paths_to(const Architecture& arch) {
  std::vector<double> count(arch.size(), 0.0);
  for (NeuronIndex v : arch.order()) {
    double c = 1.0;
    for (EdgeIndex e : arch.incoming(v)) c += count[arch.edge(e).from];
    count[v] = c;
  }
  return count;
}

double count_paths(const Architecture& arch) {
  const auto count = count_paths_to(arch);
  double total = 0.0;
  for (NeuronIndex v : arch.outputs()) total += count[v];
  return total;
}

namespace {

// Appends every path ending at v, built backwards from v.
void collect_paths_to(const Architecture& arch, NeuronIndex v, std::vector<NeuronIndex>& suffix,
                      std::vector<Path>& out) {
  suffix.push_back(v);
  out.push_back(Path{{suffix.rbegin(), suffix.rend()}});
  for (EdgeIndex e : arch.incoming(v)) collect_paths_to(arch, arch.edge(e).from, suffix, out);
  suffix.pop_back();
}

void check_budget(double count, std::size_t cap) {
  if (count > static_cast<double>(cap)) throw PathBudgetExceeded(count, cap);
}

}  // namespace

std::vector<Path> enumerate_paths_to(const Architecture& arch, NeuronIndex v, std::size_t cap) {
  check_budget(count_paths_to(arch)[v], cap);
  std::vector<Path> out;
  std::vector<NeuronIndex> suffix;
  collect_paths_to(arch, v, suffix, out);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

std::vector<Path> enumerate_paths(const Architecture& arch, std::size_t cap) {
  check_budget(count_paths(arch), cap);
  std::vector<Path> out;
  std::vector<NeuronIndex> suffix;
  for (NeuronIndex v : arch.outputs()) collect_paths_to(arch, v, suffix, out);
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

double path_value(const Architecture& arch, const Parameters& params, const Path& p) {
  double value = arch.is_input(p.start()) ? 1.0 : params.biases[p.start()];
  for (std::size_t l = 1; l < p.neurons.size(); ++l)
    value *= params.weights[*arch.find_edge(p.neurons[l - 1], p.neurons[l])];
  return value;
}

PathLifting path_lifting(const Architecture& arch, const Parameters& params, std::size_t cap) {
  PathLifting lifting;
  lifting.index = enumerate_paths(arch, cap);
  lifting.values.reserve(lifting.index.size());
  for (const auto& p : lifting.index) lifting.values.push_back(path_value(arch, params, p));
  return lifting;
}

PathActivationMatrix path_activations(const Architecture& arch, const Parameters& params,
                                      std::span<const double> x, std::size_t cap) {
  const EvaluationTrace tr = trace(arch, params, x);
  PathActivationMatrix m;
  m.index = enumerate_paths(arch, cap);
  m.cols = arch.input_dim() + 1;
  m.column.reserve(m.index.size());
  m.active.reserve(m.index.size());
  for (const auto& p : m.index) {
    const auto pos = arch.input_position(p.start());
    m.column.push_back(pos ? *pos : m.bias_column());
    std::uint8_t a = tr.neuron_activations[p.start()];
    for (std::size_t l = 1; l < p.neurons.size() && a != 0; ++l)
      a &= tr.edge_activations[*arch.find_edge(p.neurons[l - 1], p.neurons[l])];
    m.active.push_back(a);
  }
  return m;
}

std::vector<double> forward_via_lifting(const Architecture& arch, const Parameters& params,
                                        std::span<const double> x, std::size_t cap) {
  return forward_via_lifting_terms(arch, params, x, cap).values;
}

LiftedOutputs forward_via_lifting_terms(const Architecture& arch, const Parameters& params,
                                        std::span<const double> x, std::size_t cap) {
  const auto m = path_activations(arch, params, x, cap);
  LiftedOutputs out{std::vector<double>(arch.output_dim(), 0.0),
                    std::vector<double>(arch.output_dim(), 0.0)};
  std::size_t slot = 0;
  for (std::size_t row = 0; row < m.rows(); ++row) {
    const Path& p = m.index[row];
    // Rows are grouped by end neuron, in output order.
    while (arch.outputs()[slot] != p.end()) ++slot;
    if (m.active[row] == 0) continue;
    const double input = m.column[row] == m.bias_column() ? 1.0 : x[m.column[row]];
    const double term = path_value(arch, params, p) * input;
    out.values[slot] += term;
    out.magnitude[slot] += std::abs(term);
  }
  return out;
}

}  // namespace pathgauge
