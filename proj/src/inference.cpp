#include "riskbn/inference.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace riskbn {

const Marginal& Posterior::of(std::string_view node) const {
  for (const auto& m : marginals)
    if (m.node == node) return m;
  fail(ErrorCode::invalid_query, "no marginal for '" + std::string(node) + "'");
}

namespace {

struct ResolvedQuery {
  std::vector<std::size_t> targets;
  std::vector<std::pair<std::size_t, std::size_t>> evidence;  // (node, state)
};

ResolvedQuery resolve_query(const Network& net, const Query& query) {
  if (query.targets.empty())
    fail(ErrorCode::invalid_query, "query has no targets");
  ResolvedQuery rq;
  std::set<std::size_t> seen;
  for (const auto& t : query.targets) {
    std::size_t i = net.index_of(t);
    if (!seen.insert(i).second)
      fail(ErrorCode::invalid_query, "duplicate target '" + t + "'");
    if (query.evidence.count(t))
      fail(ErrorCode::invalid_query,
           "target '" + t + "' also appears in evidence");
    rq.targets.push_back(i);
  }
  rq.evidence = net.resolve(query.evidence);
  return rq;
}

std::vector<Marginal> marginals_from_joint(const Network& net,
                                           const std::vector<std::size_t>& targets,
                                           const Factor& joint) {
  std::vector<Marginal> out;
  for (std::size_t t : targets) {
    Factor m = joint;
    for (int v : joint.scope())
      if (v != static_cast<int>(t)) m = m.marginalize(v);
    out.push_back({net.spec(t).id, m.table(), {}});
  }
  return out;
}

}  // namespace

std::pair<Factor, double> joint_posterior(const Network& net,
                                          const std::vector<std::size_t>& targets,
                                          const Evidence& evidence) {
  auto ev = net.resolve(evidence);
  std::set<std::size_t> ev_nodes, target_set(targets.begin(), targets.end());
  for (auto& [n, s] : ev) ev_nodes.insert(n);

  std::vector<Factor> factors;
  factors.reserve(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    Factor f = Factor::from_cpt(net, i);
    for (auto& [n, s] : ev)
      if (f.contains(static_cast<int>(n))) f = f.restrict(static_cast<int>(n), s);
    factors.push_back(std::move(f));
  }

  std::vector<int> keep;
  for (std::size_t t : target_set) keep.push_back(static_cast<int>(t));
  Factor joint = eliminate_all_except(std::move(factors), keep);
  double z = joint.sum();
  if (!(z > 0.0))
    fail(ErrorCode::inconsistent_evidence,
         "evidence has zero probability");
  for (double& v : joint.table()) v /= z;
  return {std::move(joint), std::log(z)};
}

Posterior posterior_ve(const Network& net, const Query& query) {
  ResolvedQuery rq = resolve_query(net, query);
  auto [joint, log_z] = joint_posterior(net, rq.targets, query.evidence);
  Posterior post;
  post.log_evidence = log_z;
  post.marginals = marginals_from_joint(net, rq.targets, joint);
  return post;
}

Posterior posterior_enumeration(const Network& net, const Query& query) {
  ResolvedQuery rq = resolve_query(net, query);

  std::vector<int> fixed(net.size(), -1);
  for (auto& [n, s] : rq.evidence) fixed[n] = static_cast<int>(s);

  // guard on the space actually enumerated (evidence clamps its nodes)
  double joint_states = 1.0;
  for (std::size_t i = 0; i < net.size(); ++i)
    if (fixed[i] < 0) joint_states *= static_cast<double>(net.cardinality(i));
  if (joint_states > static_cast<double>(1ull << 26))
    fail(ErrorCode::state_space_too_large,
         "free joint state space exceeds 2^26");

  // accumulator over the targets' joint configurations (query order, first
  // target slowest); extended precision keeps the millions of partial sums
  // well inside the 1e-12 oracle tolerance
  std::size_t acc_size = 1;
  for (std::size_t t : rq.targets) acc_size *= net.cardinality(t);
  std::vector<long double> acc(acc_size, 0.0L);
  long double total = 0.0L;

  // DFS over nodes in network (topological) order with running products
  std::vector<std::size_t> state(net.size(), 0);
  auto descend = [&](auto&& self, std::size_t n, long double prod) -> void {
    if (n == net.size()) {
      std::size_t idx = 0;
      for (std::size_t t : rq.targets)
        idx = idx * net.cardinality(t) + state[t];
      acc[idx] += prod;
      total += prod;
      return;
    }
    std::size_t config = 0;
    for (std::size_t p : net.parents(n))
      config = config * net.cardinality(p) + state[p];
    std::size_t first = fixed[n] >= 0 ? static_cast<std::size_t>(fixed[n]) : 0;
    std::size_t last = fixed[n] >= 0 ? first + 1 : net.cardinality(n);
    for (std::size_t s = first; s < last; ++s) {
      double p = net.cpt(n).at(s, config);
      if (p == 0.0) continue;
      state[n] = s;
      self(self, n + 1, prod * p);
    }
    state[n] = 0;
  };
  descend(descend, 0, 1.0L);

  if (!(total > 0.0L))
    fail(ErrorCode::inconsistent_evidence, "evidence has zero probability");

  Posterior post;
  post.log_evidence = static_cast<double>(std::log(total));
  // marginalize accumulator per target
  for (std::size_t k = 0; k < rq.targets.size(); ++k) {
    std::size_t t = rq.targets[k];
    std::size_t card = net.cardinality(t);
    std::size_t inner = 1;
    for (std::size_t j = k + 1; j < rq.targets.size(); ++j)
      inner *= net.cardinality(rq.targets[j]);
    std::vector<long double> sums(card, 0.0L);
    for (std::size_t idx = 0; idx < acc.size(); ++idx)
      sums[(idx / inner) % card] += acc[idx];
    std::vector<double> dist(card);
    for (std::size_t s = 0; s < card; ++s)
      dist[s] = static_cast<double>(sums[s] / total);
    post.marginals.push_back({net.spec(t).id, std::move(dist), {}});
  }
  return post;
}

Posterior posterior_lw(const Network& net, const Query& query,
                       std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1)
    fail(ErrorCode::invalid_argument, "sample count must be >= 1");
  ResolvedQuery rq = resolve_query(net, query);
  std::vector<int> fixed(net.size(), -1);
  for (auto& [n, s] : rq.evidence) fixed[n] = static_cast<int>(s);

  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  struct Acc {
    std::vector<long double> w;    // sum of weights per state
    std::vector<long double> w2;   // sum of squared weights per state
  };
  std::vector<Acc> accs;
  for (std::size_t t : rq.targets)
    accs.push_back({std::vector<long double>(net.cardinality(t), 0.0L),
                    std::vector<long double>(net.cardinality(t), 0.0L)});
  long double sum_w = 0.0L, sum_w2 = 0.0L;

  std::vector<std::size_t> state(net.size(), 0);
  for (std::uint64_t it = 0; it < samples; ++it) {
    double w = 1.0;
    for (std::size_t n = 0; n < net.size(); ++n) {
      std::size_t config = 0;
      for (std::size_t p : net.parents(n))
        config = config * net.cardinality(p) + state[p];
      const Cpt& cpt = net.cpt(n);
      if (fixed[n] >= 0) {
        state[n] = static_cast<std::size_t>(fixed[n]);
        w *= cpt.at(state[n], config);
      } else {
        double u = uniform();
        double cum = 0.0;
        std::size_t chosen = net.cardinality(n) - 1;
        for (std::size_t s = 0; s + 1 < net.cardinality(n); ++s) {
          cum += cpt.at(s, config);
          if (u < cum) {
            chosen = s;
            break;
          }
        }
        state[n] = chosen;
      }
    }
    sum_w += w;
    sum_w2 += w * w;
    for (std::size_t k = 0; k < rq.targets.size(); ++k) {
      std::size_t s = state[rq.targets[k]];
      accs[k].w[s] += w;
      accs[k].w2[s] += w * w;
    }
  }

  if (!(sum_w > 0.0L))
    fail(ErrorCode::all_weights_zero,
         "all sample weights are zero; evidence unreachable by sampling");

  Posterior post;
  post.log_evidence = static_cast<double>(
      std::log(sum_w / static_cast<long double>(samples)));
  for (std::size_t k = 0; k < rq.targets.size(); ++k) {
    std::size_t t = rq.targets[k];
    std::size_t card = net.cardinality(t);
    Marginal m{net.spec(t).id, std::vector<double>(card, 0.0),
               std::vector<double>(card, 0.0)};
    for (std::size_t s = 0; s < card; ++s) {
      long double p = accs[k].w[s] / sum_w;
      m.probabilities[s] = static_cast<double>(p);
      // variance of the weighted ratio estimator
      long double num = accs[k].w2[s] * (1.0L - p) * (1.0L - p) +
                        (sum_w2 - accs[k].w2[s]) * p * p;
      m.std_errors[s] = static_cast<double>(std::sqrt(num) / sum_w);
    }
    post.marginals.push_back(std::move(m));
  }
  return post;
}

}  // namespace riskbn
