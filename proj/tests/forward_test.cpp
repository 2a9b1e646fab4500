// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "pathgauge/errors.hpp"
#include "pathgauge/forward.hpp"
#include "testkit.hpp"

namespace pathgauge {
namespace {

TEST(Realize, Diamond) {
  const Network d1 = testkit::diamond();
  const std::vector<double> x{1.0};
  EXPECT_DOUBLE_EQ(realize(d1.arch, d1.params, x).at(0), 2.5);
}

TEST(Realize, MaxPoolCounterexample) {
  const Network m1 = testkit::max_pool_counterexample();
  const std::vector<double> ones{1.0, 1.0};
  EXPECT_DOUBLE_EQ(realize(m1.arch, m1.params, ones).at(0), 1.0);
}

TEST(Realize, WrongInputLength) {
  const Network d1 = testkit::diamond();
  const std::vector<double> x{1.0, 2.0};
  EXPECT_THROW(realize(d1.arch, d1.params, x), DimensionMismatch);
}

TEST(Realize, SecondLargestPool) {
  const Network net = NetworkBuilder()
                          .input("a")
                          .input("b")
                          .input("c")
                          .neuron("p", Activation::kpool(2))
                          .neuron("o", Activation::identity())
                          .edge("a", "p", 1.0)
                          .edge("b", "p", 1.0)
                          .edge("c", "p", 1.0)
                          .edge("p", "o", 1.0)
                          .build();
  const std::vector<double> x{5.0, 1.0, 5.0};
  EXPECT_DOUBLE_EQ(realize(net.arch, net.params, x).at(0), 5.0);
}

TEST(Trace, ActivationsOfDiamond) {
  const Network d1 = testkit::diamond();
  const std::vector<double> x{1.0};
  const EvaluationTrace tr = trace(d1.arch, d1.params, x);
  const auto& a = d1.arch;
  EXPECT_EQ(tr.neuron_activations[*a.find("h1")], 1);
  EXPECT_EQ(tr.neuron_activations[*a.find("h2")], 0);
  EXPECT_EQ(tr.edge_activations[*a.find_edge(*a.find("u"), *a.find("h2"))], 0);
  EXPECT_EQ(tr.edge_activations[*a.find_edge(*a.find("u"), *a.find("h1"))], 1);
}

TEST(Trace, PoolActivatesSmallestIdOnTie) {
  const Network m1 = testkit::max_pool_counterexample();
  const std::vector<double> ones{1.0, 1.0};
  const auto tr = trace(m1.arch, m1.params, ones);
  const auto& a = m1.arch;
  EXPECT_EQ(tr.edge_activations[*a.find_edge(*a.find("u1"), *a.find("v"))], 1);
  EXPECT_EQ(tr.edge_activations[*a.find_edge(*a.find("u2"), *a.find("v"))], 0);
}

TEST(BatchRealize, FixtureRows) {
  const Network d1 = testkit::diamond();
  const Matrix out = batch_realize(d1.arch, d1.params, Matrix::from_rows({{1.0}, {0.0}}, 1));
  EXPECT_EQ(out, Matrix::from_rows({{2.5}, {0.5}}, 1));
  const Network m1 = testkit::max_pool_counterexample();
  EXPECT_EQ(batch_realize(m1.arch, m1.params, Matrix::from_rows({{2.0, 7.0}}, 2)),
            Matrix::from_rows({{7.0}}, 1));
}

TEST(BatchRealize, EmptyBatchAndMismatch) {
  const Network d1 = testkit::diamond();
  EXPECT_EQ(batch_realize(d1.arch, d1.params, Matrix(0, 1)).rows(), 0u);
  EXPECT_THROW(batch_realize(d1.arch, d1.params, Matrix(3, 2)), DimensionMismatch);
}

TEST(BatchRealize, IndependentOfThreadCount) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Network net = testkit::random_network(rng);
    const Matrix x = testkit::random_inputs(rng, 500, net.arch.input_dim());
    const Matrix one = batch_realize(net.arch, net.params, x, 1);
    EXPECT_EQ(one, batch_realize(net.arch, net.params, x, 3));
    EXPECT_EQ(one, batch_realize(net.arch, net.params, x, 8));
    for (std::size_t i = 0; i < x.rows(); i += 97) {
      const auto row = realize(net.arch, net.params, x.row(i));
      for (std::size_t j = 0; j < row.size(); ++j) EXPECT_EQ(one(i, j), row[j]);
    }
  }
}

TEST(DefaultThreads, ReadsEnvironment) {
  ::setenv("PATHGAUGE_THREADS", "3", 1);
  EXPECT_EQ(default_thread_count(), 3u);
  ::setenv("PATHGAUGE_THREADS", "0", 1);
  EXPECT_GE(default_thread_count(), 1u);
  ::unsetenv("PATHGAUGE_THREADS");
}

TEST(ForwardProperty, MatchesRecursiveDefinition) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const Network net = testkit::random_network(rng);
    for (int s = 0; s < 5; ++s) {
      const auto x = testkit::random_input(rng, net.arch.input_dim());
      EXPECT_LT(testkit::max_rel_error(realize(net.arch, net.params, x),
                                       testkit::brute_realize(net.arch, net.params, x)),
                1e-12);
    }
  }
}

TEST(ForwardProperty, PositiveHomogeneityWithoutBiases) {
  std::mt19937_64 rng(23);
  testkit::RandomNetOptions opt;
  opt.biases = false;
  for (int trial = 0; trial < 100; ++trial) {
    const Network net = testkit::random_network(rng, opt);
    auto x = testkit::random_input(rng, net.arch.input_dim());
    const auto base = realize(net.arch, net.params, x);
    for (double& v : x) v *= 4.0;
    auto scaled = realize(net.arch, net.params, x);
    for (double& v : scaled) v /= 4.0;
    EXPECT_LT(testkit::max_rel_error(base, scaled), 1e-12);
  }
}

}  // namespace
}  // namespace pathgauge
