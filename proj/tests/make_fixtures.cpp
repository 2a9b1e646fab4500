// SPDX-License-Identifier: Apache-2.0
//
// Regenerates the bundled random fixtures: make_fixtures <dir>.
#include <iostream>
#include <random>
#include <string>

#include "pathgauge/io.hpp"
#include "testkit.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <dir>\n";
    return 2;
  }
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20; ++i) {
    pathgauge::testkit::RandomNetOptions opt;
    opt.zero_pool_bias = i % 2 == 0;
    const auto net = pathgauge::testkit::random_network(rng, opt);
    const std::string name = (i < 10 ? "random_0" : "random_") + std::to_string(i);
    pathgauge::save_network(
        {pathgauge::Architecture(net.arch.neuron_specs(), net.arch.edge_specs(), name), net.params},
        std::string(argv[1]) + "/" + name + ".json");
  }
  return 0;
}
