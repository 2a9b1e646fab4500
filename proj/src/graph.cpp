// SPDX-License-Identifier: Apache-2.0
#include "pathgauge/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include "pathgauge/errors.hpp"

namespace pathgauge {

std::string to_string(Activation a) {
  switch (a.kind) {
    case ActivationKind::input:
      return "input";
    case ActivationKind::relu:
      return "relu";
    case ActivationKind::identity:
      return "identity";
    case ActivationKind::kpool:
      return "kpool(" + std::to_string(a.k) + ")";
  }
  return "?";
}

Architecture::Architecture(std::vector<NeuronSpec> neurons, std::vector<EdgeSpec> edges,
                           std::string name)
    : name_(std::move(name)) {
  std::sort(neurons.begin(), neurons.end(),
            [](const NeuronSpec& a, const NeuronSpec& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < neurons.size(); ++i) {
    if (neurons[i].id == neurons[i - 1].id) throw DuplicateNeuron(neurons[i].id);
  }
  ids_.reserve(neurons.size());
  activations_.reserve(neurons.size());
  for (auto& n : neurons) {
    ids_.push_back(std::move(n.id));
    activations_.push_back(n.activation);
  }

  edges_.reserve(edges.size());
  for (const auto& e : edges) edges_.push_back({index_of(e.from), index_of(e.to)});
  std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].from == edges_[i - 1].from && edges_[i].to == edges_[i - 1].to)
      throw ParallelEdge(ids_[edges_[i].from], ids_[edges_[i].to]);
  }

  incoming_.assign(size(), {});
  outgoing_.assign(size(), {});
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    incoming_[edges_[e].to].push_back(e);
    outgoing_[edges_[e].from].push_back(e);
  }
  for (auto& in : incoming_) {
    std::sort(in.begin(), in.end(),
              [this](EdgeIndex a, EdgeIndex b) { return edges_[a].from < edges_[b].from; });
  }

  input_position_.assign(size(), static_cast<std::size_t>(-1));
  for (NeuronIndex v = 0; v < size(); ++v) {
    if (incoming_[v].empty()) {
      input_position_[v] = inputs_.size();
      inputs_.push_back(v);
    }
    if (outgoing_[v].empty()) outputs_.push_back(v);
  }

  // Kahn with a min-heap on index (= id order).
  std::vector<std::size_t> indegree(size());
  for (NeuronIndex v = 0; v < size(); ++v) indegree[v] = incoming_[v].size();
  std::priority_queue<NeuronIndex, std::vector<NeuronIndex>, std::greater<>> ready;
  for (NeuronIndex v = 0; v < size(); ++v)
    if (indegree[v] == 0) ready.push(v);
  std::vector<NeuronIndex> order;
  order.reserve(size());
  while (!ready.empty()) {
    const NeuronIndex v = ready.top();
    ready.pop();
    order.push_back(v);
    for (EdgeIndex e : outgoing_[v]) {
      if (--indegree[edges_[e].to] == 0) ready.push(edges_[e].to);
    }
  }
  if (order.size() == size()) order_ = std::move(order);
}

std::optional<NeuronIndex> Architecture::find(std::string_view id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<NeuronIndex>(it - ids_.begin());
}

NeuronIndex Architecture::index_of(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw UnknownNeuron(std::string(id));
}

std::optional<EdgeIndex> Architecture::find_edge(NeuronIndex from, NeuronIndex to) const {
  auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{from, to},
                             [](const Edge& a, const Edge& b) {
                               return a.from != b.from ? a.from < b.from : a.to < b.to;
                             });
  if (it == edges_.end() || it->from != from || it->to != to) return std::nullopt;
  return static_cast<EdgeIndex>(it - edges_.begin());
}

std::optional<std::size_t> Architecture::input_position(NeuronIndex v) const {
  if (input_position_[v] == static_cast<std::size_t>(-1)) return std::nullopt;
  return input_position_[v];
}

std::span<const NeuronIndex> Architecture::order() const {
  if (!order_) throw CyclicGraph();
  return *order_;
}

std::vector<NeuronSpec> Architecture::neuron_specs() const {
  std::vector<NeuronSpec> out;
  out.reserve(size());
  for (NeuronIndex v = 0; v < size(); ++v) out.push_back({ids_[v], activations_[v]});
  return out;
}

std::vector<EdgeSpec> Architecture::edge_specs() const {
  std::vector<EdgeSpec> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({ids_[e.from], ids_[e.to]});
  return out;
}

Parameters Parameters::zeros(const Architecture& arch) {
  return {std::vector<double>(arch.edge_count(), 0.0), std::vector<double>(arch.size(), 0.0)};
}

namespace {

EdgeIndex require_edge(const Architecture& arch, std::string_view from, std::string_view to) {
  auto e = arch.find_edge(arch.index_of(from), arch.index_of(to));
  if (!e) throw Error("no edge " + std::string(from) + "->" + std::string(to));
  return *e;
}

}  // namespace

double Parameters::weight(const Architecture& arch, std::string_view from,
                          std::string_view to) const {
  return weights.at(require_edge(arch, from, to));
}

void Parameters::set_weight(const Architecture& arch, std::string_view from, std::string_view to,
                            double w) {
  weights.at(require_edge(arch, from, to)) = w;
}

double Parameters::bias(const Architecture& arch, std::string_view id) const {
  return biases.at(arch.index_of(id));
}

void Parameters::set_bias(const Architecture& arch, std::string_view id, double b) {
  biases.at(arch.index_of(id)) = b;
}

ValidationReport validate(const Architecture& arch, const Parameters* params) {
  ValidationReport report;
  auto add = [&](std::string rule, std::string subject, std::string message) {
    report.violations.push_back({std::move(rule), std::move(subject), std::move(message)});
  };

  if (arch.size() == 0) add("non-empty", "", "architecture has no neurons");
  if (!arch.acyclic()) add("acyclic", "", "edge relation contains a cycle");

  for (NeuronIndex v = 0; v < arch.size(); ++v) {
    const auto& id = arch.id(v);
    const Activation act = arch.activation(v);
    const bool in = arch.is_input(v);
    const bool out = arch.is_output(v);
    if (in && out) add("in-out-disjoint", id, "neuron is both an input and an output");
    if (in && act.kind != ActivationKind::input)
      add("input-activation", id, "neuron without antecedents must be declared input");
    if (!in && act.kind == ActivationKind::input)
      add("input-activation", id, "input neuron has antecedents");
    if (out && !in && act.kind != ActivationKind::identity)
      add("output-identity", id, "output neuron must have identity activation, got " + to_string(act));
    if (act.kind == ActivationKind::kpool) {
      const auto kernel = arch.incoming(v).size();
      if (act.k < 1) add("kpool-k-positive", id, "k must be at least 1");
      else if (static_cast<std::size_t>(act.k) > kernel)
        add("kpool-k-le-kernel", id,
            "k ≤ kernel size violated: k=" + std::to_string(act.k) +
                ", kernel=" + std::to_string(kernel));
    }
  }

  if (params != nullptr) {
    if (params->weights.size() != arch.edge_count())
      add("param-weights", "", "weight count does not match edge count");
    if (params->biases.size() != arch.size())
      add("param-biases", "", "bias count does not match neuron count");
    if (params->weights.size() == arch.edge_count()) {
      for (EdgeIndex e = 0; e < arch.edge_count(); ++e) {
        if (!std::isfinite(params->weights[e]))
          add("finite", arch.id(arch.edge(e).from) + "->" + arch.id(arch.edge(e).to),
              "weight is not finite");
      }
    }
    if (params->biases.size() == arch.size()) {
      for (NeuronIndex v = 0; v < arch.size(); ++v) {
        if (arch.is_input(v) && params->biases[v] != 0.0)
          add("input-bias", arch.id(v), "input neurons carry no bias");
        else if (!std::isfinite(params->biases[v]))
          add("finite", arch.id(v), "bias is not finite");
      }
    }
  }
  return report;
}

void require_valid(const Architecture& arch, const Parameters* params) {
  const auto report = validate(arch, params);
  if (report.ok()) return;
  const auto& v = report.violations.front();
  std::string msg = "invalid network [" + v.rule + "]";
  if (!v.subject.empty()) msg += " " + v.subject;
  msg += ": " + v.message;
  if (report.violations.size() > 1)
    msg += " (+" + std::to_string(report.violations.size() - 1) + " more)";
  throw InvalidArchitecture(msg);
}

std::vector<std::string> topological_order(const Architecture& arch) {
  std::vector<std::string> out;
  for (NeuronIndex v : arch.order()) out.push_back(arch.id(v));
  return out;
}

std::vector<std::size_t> neuron_depths(const Architecture& arch) {
  std::vector<std::size_t> d(arch.size(), 0);
  for (NeuronIndex v : arch.order()) {
    for (EdgeIndex e : arch.incoming(v)) d[v] = std::max(d[v], d[arch.edge(e).from] + 1);
  }
  return d;
}

std::size_t depth(const Architecture& arch) {
  const auto d = neuron_depths(arch);
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

PoolStats pool_stats(const Architecture& arch) {
  PoolStats s;
  std::set<int> ks;
  std::set<std::size_t> levels;
  const auto d = neuron_depths(arch);
  for (NeuronIndex v = 0; v < arch.size(); ++v) {
    const auto a = arch.activation(v);
    if (a.kind != ActivationKind::kpool) continue;
    ks.insert(a.k);
    levels.insert(d[v]);
    s.max_kernel = std::max(s.max_kernel, arch.incoming(v).size());
  }
  s.distinct_k = ks.size();
  s.pool_layers = levels.size();
  if (ks.empty()) s.max_kernel = 1;

  for (std::size_t level : levels) {
    for (NeuronIndex v = 0; v < arch.size(); ++v) {
      if (d[v] == level && arch.activation(v).kind != ActivationKind::kpool)
        s.layered_pooling = false;
    }
    for (const auto& e : arch.edges()) {
      if (d[e.from] < level && d[e.to] > level) s.layered_pooling = false;
    }
  }
  return s;
}

Architecture subgraph_to(const Architecture& arch, std::string_view id) {
  const NeuronIndex target = arch.index_of(id);
  std::vector<bool> keep(arch.size(), false);
  std::vector<NeuronIndex> stack{target};
  keep[target] = true;
  while (!stack.empty()) {
    const NeuronIndex v = stack.back();
    stack.pop_back();
    for (EdgeIndex e : arch.incoming(v)) {
      const NeuronIndex u = arch.edge(e).from;
      if (!keep[u]) {
        keep[u] = true;
        stack.push_back(u);
      }
    }
  }
  std::vector<NeuronSpec> neurons;
  for (NeuronIndex v = 0; v < arch.size(); ++v)
    if (keep[v]) neurons.push_back({arch.id(v), arch.activation(v)});
  std::vector<EdgeSpec> edges;
  for (const auto& e : arch.edges()) {
    if (keep[e.from] && keep[e.to]) edges.push_back({arch.id(e.from), arch.id(e.to)});
  }
  return Architecture(std::move(neurons), std::move(edges), arch.name());
}

Parameters restrict_parameters(const Architecture& super, const Parameters& params,
                               const Architecture& sub) {
  Parameters out = Parameters::zeros(sub);
  for (EdgeIndex e = 0; e < sub.edge_count(); ++e) {
    const auto& edge = sub.edge(e);
    const auto se = super.find_edge(super.index_of(sub.id(edge.from)), super.index_of(sub.id(edge.to)));
    out.weights[e] = params.weights.at(*se);
  }
  for (NeuronIndex v = 0; v < sub.size(); ++v)
    out.biases[v] = params.biases.at(super.index_of(sub.id(v)));
  return out;
}

NetworkBuilder& NetworkBuilder::input(std::string id) {
  neurons_.push_back({std::move(id), Activation::input()});
  biases_.push_back(0.0);
  return *this;
}

NetworkBuilder& NetworkBuilder::neuron(std::string id, Activation activation, double bias) {
  neurons_.push_back({std::move(id), activation});
  biases_.push_back(bias);
  return *this;
}

NetworkBuilder& NetworkBuilder::edge(std::string from, std::string to, double weight) {
  edges_.push_back({std::move(from), std::move(to)});
  weights_.push_back(weight);
  return *this;
}

Network NetworkBuilder::build() const {
  Network net{Architecture(neurons_, edges_, name_), {}};
  net.params = Parameters::zeros(net.arch);
  for (std::size_t i = 0; i < neurons_.size(); ++i)
    net.params.biases[net.arch.index_of(neurons_[i].id)] = biases_[i];
  for (std::size_t i = 0; i < edges_.size(); ++i)
    net.params.set_weight(net.arch, edges_[i].from, edges_[i].to, weights_[i]);
  return net;
}

}  // namespace pathgauge
