// SPDX-License-Identifier: Apache-2.0
#include "pathgauge/io.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

namespace pathgauge {

using nlohmann::json;

namespace {

std::string describe(const ValidationReport& report) {
  std::string msg = "invalid network";
  for (const auto& v : report.violations) {
    msg += "\n  [" + v.rule + "]";
    if (!v.subject.empty()) msg += " " + v.subject;
    msg += ": " + v.message;
  }
  return msg;
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = field(obj, key, where);
  if (!v.is_string()) throw ParseError(where + "." + key, "expected a string");
  return v.get<std::string>();
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError(where, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(where, "number is not finite");
  return d;
}

Activation parse_activation(const json& n, const std::string& where) {
  const std::string name = string_field(n, "activation", where);
  if (name == "input") return Activation::input();
  if (name == "relu") return Activation::relu();
  if (name == "identity") return Activation::identity();
  if (name == "kpool") {
    const json& k = field(n, "k", where);
    if (!k.is_number_integer()) throw ParseError(where + ".k", "expected an integer");
    return Activation::kpool(k.get<int>());
  }
  throw ParseError(where + ".activation", "unknown activation '" + name + "'");
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : Error(describe(report)), report_(std::move(report)) {}

Network parse_network(const std::string& text, bool require_valid) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("", e.what());
  }
  if (!doc.is_object()) throw ParseError("", "top level must be an object");

  NetworkBuilder builder(doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>()
                                                                        : std::string());
  const json& neurons = field(doc, "neurons", "");
  if (!neurons.is_array()) throw ParseError("neurons", "expected a list");
  std::set<std::string> ids, inputs;
  std::vector<std::pair<std::string, Activation>> declared;
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    const std::string where = "neurons[" + std::to_string(i) + "]";
    std::string id = string_field(neurons[i], "id", where);
    if (!ids.insert(id).second) throw ParseError(where + ".id", "duplicate neuron '" + id + "'");
    const Activation act = parse_activation(neurons[i], where);
    if (act.kind == ActivationKind::input) inputs.insert(id);
    declared.emplace_back(std::move(id), act);
  }

  std::map<std::string, double> biases;
  if (doc.contains("biases")) {
    const json& b = doc["biases"];
    if (!b.is_object()) throw ParseError("biases", "expected a map from neuron id to number");
    for (const auto& [id, value] : b.items()) {
      const std::string where = "biases." + id;
      if (!ids.count(id)) throw ParseError(where, "unknown neuron '" + id + "'");
      if (inputs.count(id)) throw ParseError(where, "input neurons carry no bias");
      biases[id] = number(value, where);
    }
  }
  for (const auto& [id, act] : declared) {
    if (act.kind == ActivationKind::input) builder.input(id);
    else builder.neuron(id, act, biases.count(id) ? biases[id] : 0.0);
  }

  const json& edges = field(doc, "edges", "");
  if (!edges.is_array()) throw ParseError("edges", "expected a list");
  std::set<std::pair<std::string, std::string>> seen;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    std::string from = string_field(edges[i], "from", where);
    std::string to = string_field(edges[i], "to", where);
    if (!ids.count(from)) throw ParseError(where + ".from", "unknown neuron '" + from + "'");
    if (!ids.count(to)) throw ParseError(where + ".to", "unknown neuron '" + to + "'");
    if (!seen.emplace(from, to).second)
      throw ParseError(where, "parallel edge " + from + "->" + to);
    builder.edge(std::move(from), std::move(to), number(field(edges[i], "weight", where), where + ".weight"));
  }

  Network net = builder.build();
  if (require_valid) {
    auto report = validate(net.arch, net.params);
    if (!report.ok()) throw ValidationError(std::move(report));
  }
  return net;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Network load_network(const std::string& path, bool require_valid) {
  const std::string text = read_file(path);
  try {
    return parse_network(text, require_valid);
  } catch (const ParseError& e) {
    throw ParseError(path, e.what());
  }
}

std::string dump_network(const Network& net) {
  const Architecture& arch = net.arch;
  json doc;
  if (!arch.name().empty()) doc["name"] = arch.name();
  json neurons = json::array();
  json biases = json::object();
  for (NeuronIndex v = 0; v < arch.size(); ++v) {
    const Activation a = arch.activation(v);
    json n = {{"id", arch.id(v)}};
    switch (a.kind) {
      case ActivationKind::input: n["activation"] = "input"; break;
      case ActivationKind::relu: n["activation"] = "relu"; break;
      case ActivationKind::identity: n["activation"] = "identity"; break;
      case ActivationKind::kpool:
        n["activation"] = "kpool";
        n["k"] = a.k;
        break;
    }
    neurons.push_back(std::move(n));
    if (a.kind != ActivationKind::input) biases[arch.id(v)] = net.params.biases[v];
  }
  json edges = json::array();
  for (EdgeIndex e = 0; e < arch.edge_count(); ++e) {
    edges.push_back({{"from", arch.id(arch.edge(e).from)},
                     {"to", arch.id(arch.edge(e).to)},
                     {"weight", net.params.weights[e]}});
  }
  doc["neurons"] = std::move(neurons);
  doc["edges"] = std::move(edges);
  doc["biases"] = std::move(biases);
  return doc.dump(2) + "\n";
}

void save_network(const Network& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << dump_network(net);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

Dataset parse_dataset(const std::string& text, std::size_t d_in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  {
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      rows.push_back(split_csv_line(line));
      line_numbers.push_back(number);
    }
  }

  std::size_t first = 0;
  std::optional<bool> labelled;
  if (!rows.empty()) {
    double probe;
    if (!rows[0].empty() && !parse_double(rows[0][0], probe)) {
      first = 1;
      labelled = !rows[0].empty() && rows[0].back() == "label";
    }
  }

  Dataset data;
  std::vector<std::vector<double>> values;
  for (std::size_t r = first; r < rows.size(); ++r) {
    const std::string where = "line " + std::to_string(line_numbers[r]);
    const auto& cells = rows[r];
    if (!labelled) {
      if (cells.size() == d_in) labelled = false;
      else if (cells.size() == d_in + 1) labelled = true;
    }
    const std::size_t expected = d_in + (labelled.value_or(false) ? 1 : 0);
    if (cells.size() != expected)
      throw ParseError(where, "expected " + std::to_string(expected) + " columns, got " +
                                  std::to_string(cells.size()));
    std::vector<double> x(d_in);
    for (std::size_t j = 0; j < d_in; ++j) {
      if (!parse_double(cells[j], x[j]))
        throw ParseError(where + ", column " + std::to_string(j + 1), "not a finite number: '" + cells[j] + "'");
    }
    values.push_back(std::move(x));
    if (*labelled) {
      const std::string& cell = cells.back();
      long label = 0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), label);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw ParseError(where + ", label", "not an integer: '" + cell + "'");
      data.labels.push_back(label);
    }
  }
  data.x = Matrix::from_rows(values, d_in);
  return data;
}

Dataset load_dataset(const std::string& path, std::size_t d_in) {
  try {
    return parse_dataset(read_file(path), d_in);
  } catch (const ParseError& e) {
    throw ParseError(path, e.what());
  }
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return hex.str();
}

}  // namespace pathgauge
