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

// Ground-truth generators for pairs of precision matrices and the
// multivariate Gaussian sampler. Every function is a pure function of its
// parameters and seed.

#ifndef DIFFEE_DATAGEN_H_
#define DIFFEE_DATAGEN_H_

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "diffee/rng.h"
#include "diffee/types.h"

namespace diffee {

enum class GraphModel {
  kModel1 = 1,  // power-law graphs, differential edges on two hubs
  kModel2 = 2,  // random graphs with a shared component
};

std::string GraphModelName(GraphModel model);

struct GroundTruth {
  SymMatrix omega_c;
  SymMatrix omega_d;
  SymMatrix delta_star;  // omega_d - omega_c, entry-wise exact
  // Index pairs (i <= j) where delta_star is nonzero.
  std::vector<std::pair<int, int>> support;
  // Nonzero entries of delta_star over the whole matrix.
  int k = 0;
  GraphModel model = GraphModel::kModel1;
  double s = 0.0;
  std::uint64_t seed = 0;

  // Model 1 only.
  int graph_edges = 0;
  std::array<int, 2> hubs = {-1, -1};
  int hub_edge_pool = 0;  // incident edges of both hubs, pooled
  int differential_edges = 0;
  double pd_boost = 0.0;  // added to both diagonals, 0 when not needed

  // Model 2 only.
  double delta_c = 0.0;
  double delta_d = 0.0;
};

struct UndirectedGraph {
  int num_nodes = 0;
  std::vector<std::pair<int, int>> edges;  // (i, j) with i < j
  std::vector<int> degree;
};

// Preferential-attachment graph with exactly `num_edges` edges. Node i joins
// after nodes 0..i-1 and links to up to i of them, chosen without
// replacement with probability proportional to current degree. Per-node
// edge quotas are water-filled so the total hits `num_edges`; any count up to
// the complete graph is reachable.
UndirectedGraph PowerLawGraph(int num_nodes, std::int64_t num_edges, Rng& rng);

// Model 1. Omega_d lives on a power-law graph with floor(s p (p-1) / 2)
// edges, entries uniform on [-10/p, -4/p] U [4/p, 10/p], unit diagonal,
// symmetrized by averaging with its transpose. Delta* holds the top 20% by
// magnitude of the edges incident to the two highest-degree nodes (pooled);
// Omega_c = Omega_d - Delta*. If either matrix is not positive definite,
// (|lambda_min| + 0.01) I is added to both.
GroundTruth GenerateModel1(int p, double s, std::uint64_t seed);

// Model 2. Omega_x = B_x + B_S + delta_x I with symmetric Bernoulli parts:
// B_c, B_d entries 0.5 w.p. 0.1, B_S entries 0.5 w.p. 0.1 s, and
// delta_x = max(0, -lambda_min(B_x + B_S)) + 0.1.
GroundTruth GenerateModel2(int p, double s, std::uint64_t seed);

GroundTruth GenerateTruth(GraphModel model, int p, double s, std::uint64_t seed);

// Throws InvalidInputError when (model, p, s) is outside the generators'
// domain: p >= 10, s in [0, 1], and for model 1 at least one graph edge.
void ValidateModelArgs(GraphModel model, int p, double s);

// n i.i.d. rows from N(0, omega^{-1}): z ~ N(0, I), x = L z with
// L L^T = omega^{-1}. Throws InvalidInputError unless omega is positive
// definite.
SampleMatrix MvnSample(const SymMatrix& omega, int n, std::uint64_t seed,
                       Condition condition);

}  // namespace diffee

#endif  // DIFFEE_DATAGEN_H_
