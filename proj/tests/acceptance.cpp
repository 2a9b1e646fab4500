// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pathgauge/bounds.hpp"
#include "pathgauge/errors.hpp"
#include "pathgauge/forward.hpp"
#include "pathgauge/norms.hpp"
#include "pathgauge/paths.hpp"
#include "pathgauge/rescale.hpp"
#include "pathgauge/transforms.hpp"
#include "testkit.hpp"

namespace pg = pathgauge;
namespace tk = pathgauge::testkit;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

/// Collects the worst value of a named quantity and whether it stayed within its limit.
class Tally {
 public:
  void worst(const std::string& name, double value, double limit) {
    auto& e = entries_[name];
    e.limit = limit;
    e.value = std::max(e.value, value);
    if (!(value < limit)) e.ok = false;
  }
  void check(const std::string& name, bool ok) {
    auto& e = flags_[name];
    e.total++;
    if (!ok) e.failed++;
  }
  Verdict verdict(const std::string& prefix) const {
    Verdict v;
    std::ostringstream s;
    s << prefix;
    for (const auto& [name, e] : entries_) {
      s << "; " << name << " " << e.value << " (< " << e.limit << ")";
      v.pass = v.pass && e.ok;
    }
    for (const auto& [name, f] : flags_) {
      s << "; " << name << " " << (f.total - f.failed) << "/" << f.total;
      v.pass = v.pass && f.failed == 0;
    }
    v.detail = s.str();
    return v;
  }

 private:
  struct Entry {
    double value = 0.0;
    double limit = 0.0;
    bool ok = true;
  };
  struct Flag {
    long total = 0;
    long failed = 0;
  };
  std::map<std::string, Entry> entries_;
  std::map<std::string, Flag> flags_;
};

constexpr double kQs[] = {1.0, 2.0, 4.0};
constexpr double kRs[] = {1.0, 2.0, pg::kInfinity};

double sig2(double v) {
  const double mag = std::pow(10.0, std::floor(std::log10(std::abs(v))) - 1);
  return std::round(v / mag) * mag;
}

/// v rounded to two significant digits equals the published value.
bool same_digits(double v, double published) { return std::abs(sig2(v) - published) <= 1e-9 * published; }

double l1(const pg::Network& n) { return pg::path_norm_fast(n.arch, n.params, {1.0, 1.0}).value; }

/// Output-wise error of b against a, scaled by the sum of |path terms| at x.
double output_error(const pg::Network& ref, const std::vector<double>& x, const std::vector<double>& a,
                    const std::vector<double>& b) {
  const auto scale = pg::forward_via_lifting_terms(ref.arch, ref.params, x).magnitude;
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, tk::rel_error(a[j], b[j], scale[j]));
  return worst;
}

Verdict table_reproduction() {
  const double B = 2.640000104904175, n = 1268355.0;
  const std::size_t depths[] = {18, 34, 50, 101, 152};
  const double plain[] = {0.088, 0.11, 0.14, 0.19, 0.23};
  const double sharp[] = {0.060, 0.072, 0.082, 0.11, 0.13};
  Verdict v;
  std::ostringstream s;
  for (int i = 0; i < 5; ++i) {
    pg::ArchMeta m;
    m.D = depths[i];
    m.P = 1;
    m.K = 9;
    m.M = 1;
    m.d_in = 150528;
    m.d_out = 1000;
    m.with_bias = true;
    const double f = pg::bound_factor(B, n, pg::bound_constant_C(m));
    const auto cs = pg::bound_constant_C_sharpened(m);
    const double g = cs ? pg::bound_factor(B, n, *cs) : NAN;
    v.pass = v.pass && same_digits(f, plain[i]) && cs && same_digits(g, sharp[i]);
    s << (i ? "; " : "") << "D=" << depths[i] << " " << f << "/" << g;
  }
  v.detail = s.str();
  return v;
}

Verdict sharpened_constants() {
  pg::ArchMeta m;
  m.D = 152;
  m.P = 1;
  m.K = 9;
  m.M = 1;
  const double plain = std::sqrt(m.D * std::log((3.0 + 2.0 * m.P) * m.K));
  const double sharp = *pg::bound_constant_C_sharpened(m);  // d_in = d_out = 1: log term vanishes
  std::ostringstream s;
  s << "sqrt(D ln 5K) = " << plain << ", sqrt(D ln 3 + M ln K) = " << sharp;
  return {plain >= 23.5 && plain <= 24.5 && sharp >= 12.5 && sharp <= 13.5, s.str()};
}

Verdict lifting_identity() {
  std::mt19937_64 rng(1001);
  Tally t;
  const int nets = 1000;
  for (int i = 0; i < nets; ++i) {
    const pg::Network net = tk::random_network(rng);
    for (int s = 0; s < 10; ++s) {
      const auto x = tk::random_input(rng, net.arch.input_dim());
      const auto direct = pg::realize(net.arch, net.params, x);
      const auto lifted = pg::forward_via_lifting_terms(net.arch, net.params, x);
      for (std::size_t j = 0; j < direct.size(); ++j)
        t.worst("max rel err", tk::rel_error(direct[j], lifted.values[j], lifted.magnitude[j]), 1e-9);
    }
  }
  return t.verdict(std::to_string(nets) + " nets x 10 inputs");
}

Verdict fast_norm() {
  std::mt19937_64 rng(1002);
  Tally t;
  const int nets = 500;
  for (int i = 0; i < nets; ++i) {
    const pg::Network net = tk::random_network(rng);
    for (double q : kQs)
      for (double r : kRs)
        t.worst("max rel fast/exact",
                tk::rel_error(pg::path_norm_fast(net.arch, net.params, {q, r}).value,
                              pg::path_norm_exact(net.arch, net.params, {q, r})),
                1e-9);
  }
  const pg::Network m1 = tk::max_pool_counterexample();
  const double naive = pg::naive_forward_norm(m1.arch, m1.params, {1.0, 1.0}).value;
  const double fast = pg::path_norm_fast(m1.arch, m1.params, {1.0, 1.0}).value;
  t.check("max-pool fixture naive=1,fast=2", naive == 1.0 && fast == 2.0);
  return t.verdict(std::to_string(nets) + " nets x 9 (q,r)");
}

Verdict normalization() {
  std::mt19937_64 rng(1003);
  Tally t;
  const int nets = 200;
  for (double q : {1.0, 2.0, pg::kInfinity}) {
    for (int i = 0; i < nets; ++i) {
      const pg::Network net = tk::random_network(rng);
      const pg::Network out{net.arch, pg::normalize(net.arch, net.params, q).params};
      t.check("is_normalized", pg::is_normalized(out.arch, out.params, q));
      t.worst("Phi rel", tk::max_rel_error(pg::path_lifting(net.arch, net.params).values,
                                           pg::path_lifting(out.arch, out.params).values),
              1e-12);
      for (int s = 0; s < 100; ++s) {
        const auto x = tk::random_input(rng, net.arch.input_dim());
        t.worst("realize rel",
                output_error(net, x, pg::realize(net.arch, net.params, x), pg::realize(out.arch, out.params, x)),
                1e-9);
      }
      const pg::Parameters twice = pg::normalize(out.arch, out.params, q).params;
      double drift = 0.0;
      for (std::size_t e = 0; e < twice.weights.size(); ++e)
        drift = std::max(drift, tk::rel_error(twice.weights[e], out.params.weights[e]));
      for (std::size_t v = 0; v < twice.biases.size(); ++v)
        drift = std::max(drift, tk::rel_error(twice.biases[v], out.params.biases[v]));
      t.worst("idempotence rel", drift, 1e-12);
    }
  }
  return t.verdict(std::to_string(nets) + " nets x q in {1,2,inf}");
}

Verdict operator_product() {
  std::mt19937_64 rng(1004);
  Tally t;
  const int nets = 300;
  int brute = 0;
  for (int i = 0; i < nets; ++i) {
    const pg::Network net = tk::random_network(rng);
    const bool small = pg::count_paths(net.arch) <= 1e4;
    const auto paths = small ? pg::enumerate_paths(net.arch) : std::vector<pg::Path>{};
    brute += small;
    for (double q : kQs) {
      const pg::Parameters normalized = pg::normalize(net.arch, net.params, q).params;
      for (double r : kRs) {
        const double phi = pg::path_norm_fast(net.arch, net.params, {q, r}).value;
        const double pi = pg::dag_operator_product(net.arch, net.params, {q, r});
        t.check("Phi <= Pi(1+1e-9)", phi <= pi * (1 + 1e-9));
        t.worst("normalized Phi/Pi rel",
                tk::rel_error(pg::path_norm_fast(net.arch, normalized, {q, r}).value,
                              pg::dag_operator_product(net.arch, normalized, {q, r})),
                1e-9);
        if (small) {
          std::vector<double> best(net.arch.output_dim(), 0.0);
          for (const auto& p : paths) {
            const auto j = std::find(net.arch.outputs().begin(), net.arch.outputs().end(), p.end()) -
                           net.arch.outputs().begin();
            best[j] = std::max(best[j], pg::pathwise_product(net.arch, net.params, p, q));
          }
          t.worst("DP vs brute max rel", tk::rel_error(pi, pg::lq_norm(best, r)), 1e-9);
        }
      }
    }
  }
  const pg::Network d1 = tk::diamond();
  const pg::NormSpec spec{1.0, pg::kInfinity};
  const pg::Parameters nd1 = pg::normalize(d1.arch, d1.params, 1.0).params;
  t.check("diamond 5.5/6 then 5.5/5.5",
          std::abs(pg::path_norm_fast(d1.arch, d1.params, spec).value - 5.5) < 1e-12 &&
              std::abs(pg::dag_operator_product(d1.arch, d1.params, spec) - 6.0) < 1e-12 &&
              std::abs(pg::path_norm_fast(d1.arch, nd1, spec).value - 5.5) < 1e-12 &&
              std::abs(pg::dag_operator_product(d1.arch, nd1, spec) - 5.5) < 1e-12);
  return t.verdict(std::to_string(nets) + " nets (" + std::to_string(brute) + " brute-forced)");
}

Verdict lipschitz_sampling() {
  std::mt19937_64 rng(1005);
  Tally t;
  const int nets = 100;
  std::uniform_real_distribution<double> step_scale(-6.0, 1.0);
  for (int i = 0; i < nets; ++i) {
    const pg::Network net = tk::random_network(rng);
    double bound[3];
    for (int k = 0; k < 3; ++k) bound[k] = pg::lipschitz_bound(net.arch, net.params, kRs[k]).value;
    for (int s = 0; s < 1000; ++s) {
      const auto x = tk::random_input(rng, net.arch.input_dim());
      // Half the pairs are close, so that they often share activation patterns.
      auto y = tk::random_input(rng, net.arch.input_dim(), s % 2 ? 3.0 : std::pow(10.0, step_scale(rng)));
      if (s % 2 == 0)
        for (std::size_t j = 0; j < y.size(); ++j) y[j] += x[j];
      double dx = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) dx = std::max(dx, std::abs(x[j] - y[j]));
      const auto rx = pg::realize(net.arch, net.params, x);
      const auto ry = pg::realize(net.arch, net.params, y);
      std::vector<double> diff(rx.size());
      for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = rx[j] - ry[j];
      for (int k = 0; k < 3; ++k) {
        const double lhs = pg::lq_norm(diff, kRs[k]);
        const double rhs = bound[k] * dx;
        t.check("pairs within bound", lhs <= rhs * (1 + 1e-9));
        if (rhs > 0) t.worst("max ratio", lhs / rhs, 1.0 + 1e-9);
      }
    }
  }
  return t.verdict(std::to_string(nets) + " nets x 1000 pairs x r in {1,2,inf}");
}

/// Same network under a random renaming of its neurons.
pg::Network relabel(const pg::Network& net, std::mt19937_64& rng, std::map<std::string, std::string>& rename) {
  std::vector<std::string> ids;
  for (pg::NeuronIndex v = 0; v < net.arch.size(); ++v) ids.push_back(net.arch.id(v));
  std::vector<std::string> shuffled = ids;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  for (std::size_t i = 0; i < ids.size(); ++i) rename[ids[i]] = "n" + shuffled[i];
  pg::NetworkBuilder b;
  for (pg::NeuronIndex v = 0; v < net.arch.size(); ++v) {
    if (net.arch.is_input(v)) b.input(rename[ids[v]]);
    else b.neuron(rename[ids[v]], net.arch.activation(v), net.params.biases[v]);
  }
  for (pg::EdgeIndex e = 0; e < net.arch.edge_count(); ++e)
    b.edge(rename[ids[net.arch.edge(e).from]], rename[ids[net.arch.edge(e).to]], net.params.weights[e]);
  return b.build();
}

std::map<std::vector<std::string>, double> named_lifting(const pg::Network& net,
                                                         const std::map<std::string, std::string>* rename) {
  std::map<std::vector<std::string>, double> out;
  const auto lifting = pg::path_lifting(net.arch, net.params);
  for (std::size_t i = 0; i < lifting.index.size(); ++i) {
    std::vector<std::string> key;
    for (pg::NeuronIndex v : lifting.index[i].neurons)
      key.push_back(rename ? rename->at(net.arch.id(v)) : net.arch.id(v));
    out[key] = lifting.values[i];
  }
  return out;
}

Verdict invariance() {
  std::mt19937_64 rng(1008);
  std::uniform_real_distribution<double> log_scale(-2.0, 2.0);
  Tally t;
  const int nets = 200;
  for (int i = 0; i < nets; ++i) {
    const pg::Network net = tk::random_network(rng);

    pg::Parameters p = net.params;
    for (pg::NeuronIndex v = 0; v < net.arch.size(); ++v)
      if (net.arch.is_hidden(v)) p = pg::apply_rescaling(net.arch, p, net.arch.id(v), std::exp(log_scale(rng)));
    const pg::Network scaled{net.arch, p};

    std::map<std::string, std::string> rename;
    const pg::Network renamed = relabel(net, rng, rename);

    const auto phi = named_lifting(net, &rename);
    double phi_err = 0.0;
    for (const auto& [key, value] : named_lifting(renamed, nullptr)) phi_err = std::max(phi_err, tk::rel_error(phi.at(key), value));
    t.check("relabeled index matches", named_lifting(renamed, nullptr).size() == phi.size());
    t.worst("relabel Phi rel", phi_err, 1e-12);

    auto sorted = [](std::vector<double> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    t.worst("rescale Phi rel",
            tk::max_rel_error(sorted(pg::path_lifting(net.arch, net.params).values),
                              sorted(pg::path_lifting(scaled.arch, scaled.params).values)),
            1e-12);

    for (double q : kQs) {
      for (double r : kRs) {
        const double base = pg::path_norm_fast(net.arch, net.params, {q, r}).value;
        t.worst("norm rel", tk::rel_error(base, pg::path_norm_fast(scaled.arch, scaled.params, {q, r}).value), 1e-12);
        t.worst("norm rel", tk::rel_error(base, pg::path_norm_fast(renamed.arch, renamed.params, {q, r}).value), 1e-12);
      }
    }

    // Renaming permutes inputs and outputs; map both through the new ids.
    std::vector<std::size_t> in_perm(net.arch.input_dim()), out_perm(net.arch.output_dim());
    for (std::size_t k = 0; k < in_perm.size(); ++k)
      in_perm[k] = *renamed.arch.input_position(*renamed.arch.find(rename[net.arch.id(net.arch.inputs()[k])]));
    for (std::size_t k = 0; k < out_perm.size(); ++k) {
      const auto idx = *renamed.arch.find(rename[net.arch.id(net.arch.outputs()[k])]);
      out_perm[k] = std::find(renamed.arch.outputs().begin(), renamed.arch.outputs().end(), idx) -
                    renamed.arch.outputs().begin();
    }
    for (int s = 0; s < 20; ++s) {
      const auto x = tk::random_input(rng, net.arch.input_dim());
      std::vector<double> xr(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) xr[in_perm[k]] = x[k];
      const auto base = pg::realize(net.arch, net.params, x);
      const auto rr = pg::realize(renamed.arch, renamed.params, xr);
      std::vector<double> back(base.size());
      for (std::size_t k = 0; k < base.size(); ++k) back[k] = rr[out_perm[k]];
      t.worst("realize rel", output_error(net, x, base, pg::realize(scaled.arch, scaled.params, x)), 1e-12);
      t.worst("realize rel", output_error(net, x, base, back), 1e-12);
    }
  }
  return t.verdict(std::to_string(nets) + " nets, rescaled and relabeled");
}

Verdict transform_preservation() {
  std::mt19937_64 rng(1009);
  tk::RandomNetOptions opt;
  opt.zero_pool_bias = true;  // absorb_biases requires null pool biases
  Tally t;
  int folded = 0, refused = 0, merging = 0, tries = 0;
  while (folded < 200) {
    ++tries;
    const pg::Network net = tk::random_network(rng, opt);
    const pg::BiasAbsorption abs = pg::absorb_biases(net.arch, net.params);
    pg::Network elim;
    try {
      elim = pg::eliminate_identity_neurons(abs.net.arch, abs.net.params);
    } catch (const pg::IdentityFeedsPool&) {
      ++refused;
      continue;
    }
    ++folded;
    const bool merges = tk::identity_fold_merges(abs.net.arch);
    merging += merges;
    t.worst("absorb L1 rel", tk::rel_error(l1(net), l1(abs.net)), 1e-12);
    const double elim_err = tk::rel_error(l1(abs.net), l1(elim));
    t.worst("eliminate L1 rel", elim_err, 1e-12);
    // Breakdown only; the gate above is the claim as stated.
    if (!merges) t.check("eliminate L1 equal without merges", elim_err < 1e-12);
    t.check("eliminate L1 non-increasing", l1(elim) <= l1(abs.net) * (1 + 1e-12));
    bool identity_left = false;
    for (pg::NeuronIndex v = 0; v < elim.arch.size(); ++v)
      identity_left |= elim.arch.is_hidden(v) && elim.arch.activation(v).kind == pg::ActivationKind::identity;
    t.check("no hidden identity", !identity_left);
    t.check("depth non-increasing", pg::depth(elim.arch) <= pg::depth(abs.net.arch));
    for (int s = 0; s < 100; ++s) {
      const auto x = tk::random_input(rng, net.arch.input_dim());
      auto xa = x;
      if (abs.absorbed()) xa.push_back(1.0);
      const auto base = pg::realize(net.arch, net.params, x);
      t.worst("absorb realize rel", output_error(net, x, base, pg::realize(abs.net.arch, abs.net.params, xa)), 1e-9);
      t.worst("eliminate realize rel", output_error(net, x, base, pg::realize(elim.arch, elim.params, xa)), 1e-9);
    }
  }
  std::ostringstream s;
  s << folded << " nets (" << refused << " refused: identity into pooling), " << merging
    << " with merged edges";
  return t.verdict(s.str());
}

Verdict loss_lipschitz() {
  std::mt19937_64 rng(1010);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> spread(-4.0, 1.0), gamma_dist(0.05, 5.0);
  Tally t;
  const int pairs = 100000;
  for (std::size_t d : {2u, 10u, 1000u}) {
    std::vector<double> a(d), b(d);
    for (int i = 0; i < pairs; ++i) {
      const double scale = std::pow(10.0, spread(rng));
      for (std::size_t j = 0; j < d; ++j) {
        a[j] = 5.0 * gauss(rng);
        b[j] = a[j] + scale * gauss(rng);
      }
      double dist = 0.0;
      for (std::size_t j = 0; j < d; ++j) dist += (a[j] - b[j]) * (a[j] - b[j]);
      dist = std::sqrt(dist);
      const long label = 1 + static_cast<long>(rng() % d);
      const double gamma = gamma_dist(rng);
      const double ce = std::abs(pg::cross_entropy(a, label) - pg::cross_entropy(b, label));
      const double ml = std::abs(pg::margin_loss(a, label, gamma) - pg::margin_loss(b, label, gamma));
      t.check("xent pairs", ce <= pg::kCrossEntropyLipschitz * dist * (1 + 1e-9));
      t.check("margin pairs", ml <= pg::margin_loss_lipschitz(gamma) * dist * (1 + 1e-9));
    }
  }
  return t.verdict(std::to_string(pairs) + " pairs per d_out in {2,10,1000}");
}

Verdict margin_homogeneity() {
  std::mt19937_64 rng(1011);
  tk::RandomNetOptions opt;
  opt.zero_pool_bias = true;  // the bound requires null pool biases
  Tally t;
  int cases = 0;
  while (cases < 50) {
    const pg::Network net = tk::random_network(rng, opt);
    if (net.arch.output_dim() < 2) continue;
    ++cases;
    const pg::Matrix x = tk::random_inputs(rng, 200, net.arch.input_dim());
    std::vector<long> labels(x.rows());
    for (auto& y : labels) y = 1 + static_cast<long>(rng() % net.arch.output_dim());
    const double sigma = pg::sigma_estimate(x, pg::SigmaVariant::sup_norm);
    const double C = pg::bound_constant_C(pg::meta_from_network(net.arch, net.params));
    const double gamma = 0.5;
    const pg::MarginBound base =
        pg::margin_bound(pg::batch_realize(net.arch, net.params, x), labels, gamma, sigma, 200.0, C, l1(net));
    for (double s : {0.5, 3.0, 100.0}) {
      // Output neurons' weights and biases times s: outputs and ||Phi||_1 scale by s.
      pg::Parameters p = net.params;
      for (pg::EdgeIndex e = 0; e < net.arch.edge_count(); ++e)
        if (net.arch.is_output(net.arch.edge(e).to)) p.weights[e] *= s;
      for (pg::NeuronIndex v : net.arch.outputs()) p.biases[v] *= s;
      const pg::Network scaled{net.arch, p};
      const pg::MarginBound m = pg::margin_bound(pg::batch_realize(scaled.arch, scaled.params, x), labels,
                                                 s * gamma, sigma, 200.0, C, l1(scaled));
      t.check("term1 exact", m.term1 == base.term1);
      t.worst("term2 rel", tk::rel_error(m.term2, base.term2), 1e-12);
    }
  }
  return t.verdict(std::to_string(cases) + " nets x s in {0.5,3,100}");
}

}  // namespace

int main() {
  constexpr double kNoBudget = std::numeric_limits<double>::infinity();
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "ResNet bound factors", 1.0, table_reproduction},
      {2, "sharpened constant headline values", 1.0, sharpened_constants},
      {3, "forward via path-lifting", 60.0, lifting_identity},
      {4, "fast path-norm formula", 60.0, fast_norm},
      {5, "normalization", 60.0, normalization},
      {6, "operator-norm product", 60.0, operator_product},
      {7, "Lipschitz sampling", 60.0, lipschitz_sampling},
      {8, "rescaling and relabeling invariance", kNoBudget, invariance},
      {9, "transform preservation", kNoBudget, transform_preservation},
      {10, "loss Lipschitz constants", kNoBudget, loss_lipschitz},
      {11, "margin bound homogeneity", kNoBudget, margin_homogeneity},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = v.pass && secs < c.budget_s;
    failures += !pass;
    const std::string budget = std::isinf(c.budget_s) ? "" : " / " + std::to_string(static_cast<int>(c.budget_s)) + " s";
    std::printf("criterion %2d %s: %s [%.3f s%s] %s\n", c.id, pass ? "PASS" : "FAIL", c.name, secs, budget.c_str(),
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
