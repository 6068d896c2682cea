// Copyright 2026 The DIFFEE Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "diffee/datagen.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "diffee/linalg.h"

namespace diffee {
namespace {

void CheckModelArgs(int p, double s) {
  if (p < 10) {
    throw InvalidInputError("generators need p >= 10, got p = " + std::to_string(p));
  }
  if (!(s >= 0.0 && s <= 1.0)) {
    throw InvalidInputError("sparsity s must lie in [0, 1], got " + std::to_string(s));
  }
}

std::int64_t Model1EdgeCount(int p, double s) {
  const std::int64_t pairs = static_cast<std::int64_t>(p) * (p - 1) / 2;
  return static_cast<std::int64_t>(std::floor(s * static_cast<double>(pairs)));
}

std::vector<std::pair<int, int>> SupportOf(const SymMatrix& m, int* k) {
  std::vector<std::pair<int, int>> support;
  *k = 0;
  for (int i = 0; i < m.dim(); ++i) {
    for (int j = i; j < m.dim(); ++j) {
      if (m(i, j) == 0.0) continue;
      support.emplace_back(i, j);
      *k += (i == j) ? 1 : 2;
    }
  }
  return support;
}

// Symmetric matrix with zero diagonal whose upper-triangle entries are
// `value` with probability `probability`, mirrored below.
Eigen::MatrixXd SymmetricBernoulli(int p, double probability, double value,
                                   std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      if (rng.Bernoulli(probability)) {
        b(i, j) = value;
        b(j, i) = value;
      }
    }
  }
  return b;
}

// Edge quota per node: q_i = min(i, m) with the smallest m reaching the
// target, then the excess taken one at a time from the last nodes.
std::vector<std::int64_t> EdgeQuotas(int num_nodes, std::int64_t num_edges) {
  auto total = [num_nodes](std::int64_t m) {
    std::int64_t sum = 0;
    for (int i = 0; i < num_nodes; ++i) sum += std::min<std::int64_t>(i, m);
    return sum;
  };
  std::int64_t m = 0;
  while (total(m) < num_edges) ++m;
  std::vector<std::int64_t> quota(num_nodes);
  for (int i = 0; i < num_nodes; ++i) quota[i] = std::min<std::int64_t>(i, m);
  // Nodes with i >= m all hold quota m, and there are more of them than the
  // excess because m is minimal.
  std::int64_t excess = total(m) - num_edges;
  for (int i = num_nodes - 1; excess > 0; --i) {
    --quota[i];
    --excess;
  }
  return quota;
}

}  // namespace

std::string GraphModelName(GraphModel model) {
  return model == GraphModel::kModel1 ? "model1" : "model2";
}

UndirectedGraph PowerLawGraph(int num_nodes, std::int64_t num_edges, Rng& rng) {
  if (num_nodes < 1) throw InvalidInputError("graph needs at least one node");
  const std::int64_t capacity =
      static_cast<std::int64_t>(num_nodes) * (num_nodes - 1) / 2;
  if (num_edges < 0 || num_edges > capacity) {
    throw InvalidInputError("requested " + std::to_string(num_edges) +
                            " edges but p(p-1)/2 = " + std::to_string(capacity));
  }

  UndirectedGraph graph;
  graph.num_nodes = num_nodes;
  graph.degree.assign(num_nodes, 0);
  graph.edges.reserve(num_edges);

  const std::vector<std::int64_t> quota = EdgeQuotas(num_nodes, num_edges);
  std::vector<double> weight(num_nodes);
  std::vector<int> targets;
  for (int node = 1; node < num_nodes; ++node) {
    // Weights are degrees before `node` attaches; chosen targets drop to
    // zero weight so sampling is without replacement.
    for (int j = 0; j < node; ++j) weight[j] = graph.degree[j];
    std::vector<bool> taken(node, false);
    targets.clear();
    for (std::int64_t draw = 0; draw < quota[node]; ++draw) {
      const double total_weight =
          std::accumulate(weight.begin(), weight.begin() + node, 0.0);
      int pick = -1;
      if (total_weight > 0.0) {
        const double r = rng.Uniform() * total_weight;
        double cumulative = 0.0;
        for (int j = 0; j < node; ++j) {
          if (weight[j] == 0.0) continue;
          pick = j;
          cumulative += weight[j];
          if (r < cumulative) break;
        }
      } else {
        const int free = node - static_cast<int>(targets.size());
        std::uint64_t rank = rng.UniformInt(static_cast<std::uint64_t>(free));
        for (int j = 0; j < node; ++j) {
          if (taken[j]) continue;
          if (rank == 0) {
            pick = j;
            break;
          }
          --rank;
        }
      }
      taken[pick] = true;
      weight[pick] = 0.0;
      targets.push_back(pick);
    }
    for (int target : targets) {
      graph.edges.emplace_back(target, node);
      ++graph.degree[target];
      ++graph.degree[node];
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  return graph;
}

GroundTruth GenerateModel1(int p, double s, std::uint64_t seed) {
  ValidateModelArgs(GraphModel::kModel1, p, s);
  const std::int64_t num_edges = Model1EdgeCount(p, s);

  Rng graph_rng(DeriveSeed(seed, "graph"));
  const UndirectedGraph graph = PowerLawGraph(p, num_edges, graph_rng);

  // Both triangle entries of an edge get independent draws; averaging with
  // the transpose then yields the symmetric matrix.
  Rng value_rng(DeriveSeed(seed, "values"));
  const double lo = 4.0 / p;
  const double hi = 10.0 / p;
  auto draw = [&] {
    const double magnitude = value_rng.Uniform(lo, hi);
    return value_rng.Bernoulli(0.5) ? magnitude : -magnitude;
  };
  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(p, p);
  for (const auto& [i, j] : graph.edges) {
    raw(i, j) = draw();
    raw(j, i) = draw();
  }
  raw.diagonal().setOnes();
  Eigen::MatrixXd omega_d = SymMatrix::Symmetrize(raw, MatrixRole::kPrecision).matrix();

  // Hubs: highest degree, ties to the lower index.
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return graph.degree[a] > graph.degree[b];
  });
  const std::array<int, 2> hubs = {order[0], order[1]};

  std::vector<std::pair<int, int>> pool;
  for (const auto& edge : graph.edges) {
    if (edge.first == hubs[0] || edge.second == hubs[0] ||
        edge.first == hubs[1] || edge.second == hubs[1]) {
      pool.push_back(edge);
    }
  }
  // Largest magnitude first; pool is already in lexicographic order, which
  // stable_sort keeps for ties.
  std::stable_sort(pool.begin(), pool.end(), [&](const auto& a, const auto& b) {
    return std::abs(omega_d(a.first, a.second)) > std::abs(omega_d(b.first, b.second));
  });
  const size_t selected = (pool.size() * 2 + 9) / 10;  // ceil(0.2 |pool|)

  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(p, p);
  for (size_t e = 0; e < selected; ++e) {
    const auto [i, j] = pool[e];
    delta(i, j) = omega_d(i, j);
    delta(j, i) = omega_d(j, i);
  }
  Eigen::MatrixXd omega_c = omega_d - delta;

  const double lambda_min =
      std::min(MinEigenvalue(SymMatrix(omega_c, MatrixRole::kPrecision)),
               MinEigenvalue(SymMatrix(omega_d, MatrixRole::kPrecision)));
  double boost = 0.0;
  if (!(lambda_min > 0.0)) {
    boost = std::abs(lambda_min) + 0.01;
    omega_c.diagonal().array() += boost;
    omega_d.diagonal().array() += boost;
  }

  GroundTruth truth{
      .omega_c = SymMatrix(std::move(omega_c), MatrixRole::kPrecision),
      .omega_d = SymMatrix(std::move(omega_d), MatrixRole::kPrecision),
      .delta_star = SymMatrix::Zero(p, MatrixRole::kDifferential),
      .support = {},
  };
  truth.delta_star =
      Subtract(truth.omega_d, truth.omega_c, MatrixRole::kDifferential);
  if (!(MinEigenvalue(truth.omega_c) > 0.0 && MinEigenvalue(truth.omega_d) > 0.0)) {
    throw Error("model 1 precision matrices are not positive definite after repair");
  }
  truth.support = SupportOf(truth.delta_star, &truth.k);
  truth.model = GraphModel::kModel1;
  truth.s = s;
  truth.seed = seed;
  truth.graph_edges = static_cast<int>(graph.edges.size());
  truth.hubs = hubs;
  truth.hub_edge_pool = static_cast<int>(pool.size());
  truth.differential_edges = static_cast<int>(selected);
  truth.pd_boost = boost;
  return truth;
}

GroundTruth GenerateModel2(int p, double s, std::uint64_t seed) {
  CheckModelArgs(p, s);
  const Eigen::MatrixXd b_c = SymmetricBernoulli(p, 0.1, 0.5, DeriveSeed(seed, "B_c"));
  const Eigen::MatrixXd b_d = SymmetricBernoulli(p, 0.1, 0.5, DeriveSeed(seed, "B_d"));
  const Eigen::MatrixXd b_s =
      SymmetricBernoulli(p, 0.1 * s, 0.5, DeriveSeed(seed, "B_S"));

  auto shift = [](const Eigen::MatrixXd& m) {
    const double lambda_min = MinEigenvalue(SymMatrix(m, MatrixRole::kPrecision));
    return std::max(0.0, -lambda_min) + 0.1;
  };
  const Eigen::MatrixXd base_c = b_c + b_s;
  const Eigen::MatrixXd base_d = b_d + b_s;
  const double delta_c = shift(base_c);
  const double delta_d = shift(base_d);

  Eigen::MatrixXd omega_c = base_c;
  omega_c.diagonal().array() += delta_c;
  Eigen::MatrixXd omega_d = base_d;
  omega_d.diagonal().array() += delta_d;

  GroundTruth truth{
      .omega_c = SymMatrix(std::move(omega_c), MatrixRole::kPrecision),
      .omega_d = SymMatrix(std::move(omega_d), MatrixRole::kPrecision),
      .delta_star = SymMatrix::Zero(p, MatrixRole::kDifferential),
      .support = {},
  };
  truth.delta_star =
      Subtract(truth.omega_d, truth.omega_c, MatrixRole::kDifferential);
  if (!(MinEigenvalue(truth.omega_c) > 0.0 && MinEigenvalue(truth.omega_d) > 0.0)) {
    throw Error("model 2 precision matrices are not positive definite");
  }
  truth.support = SupportOf(truth.delta_star, &truth.k);
  truth.model = GraphModel::kModel2;
  truth.s = s;
  truth.seed = seed;
  truth.delta_c = delta_c;
  truth.delta_d = delta_d;
  return truth;
}

void ValidateModelArgs(GraphModel model, int p, double s) {
  CheckModelArgs(p, s);
  if (model == GraphModel::kModel1 && Model1EdgeCount(p, s) < 1) {
    throw InvalidInputError("model 1 needs floor(s * p(p-1)/2) >= 1 edge");
  }
}

GroundTruth GenerateTruth(GraphModel model, int p, double s, std::uint64_t seed) {
  return model == GraphModel::kModel1 ? GenerateModel1(p, s, seed)
                                      : GenerateModel2(p, s, seed);
}

SampleMatrix MvnSample(const SymMatrix& omega, int n, std::uint64_t seed,
                       Condition condition) {
  if (n < 1) throw InvalidInputError("MvnSample needs n >= 1");
  const double lambda_min = MinEigenvalue(omega);
  if (!(lambda_min > 0.0)) {
    throw InvalidInputError("precision matrix is not positive definite (smallest "
                            "eigenvalue " + std::to_string(lambda_min) + ")");
  }
  const SymMatrix sigma = InvertSym(omega, std::numeric_limits<double>::min());
  Eigen::LLT<Eigen::MatrixXd> llt(sigma.matrix());
  if (llt.info() != Eigen::Success) {
    throw InvalidInputError("covariance factorization failed");
  }
  const Eigen::MatrixXd lower = llt.matrixL();

  const int p = omega.dim();
  Rng rng(seed);
  Eigen::MatrixXd z(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) z(i, j) = rng.Normal();
  }
  return SampleMatrix(z * lower.transpose(), condition);
}

}  // namespace diffee
