#pragma once

// Shared generators for randomized diagram tests.

#include <random>
#include <string>
#include <vector>

#include "caravan/rel_moves.hpp"

namespace caravan::testing {

// Positions x_k = e_1 + ... + e_k over a fresh field with random positive
// embeddings; arc lengths are interval sums with pairwise distinct right
// endpoints, so the length lattice always has full rank 2g.
inline rel::MetricArcDiagram staircase(const arcs::Matching& m, std::mt19937& rng) {
  const int points = m.point_count();
  std::vector<std::string> symbols;
  std::vector<Rational> embeddings;
  while (true) {
    symbols.clear();
    embeddings.clear();
    bool distinct = true;
    for (int k = 0; k < points; ++k) {
      symbols.push_back("e" + std::to_string(k + 1));
      Rational value(1 + static_cast<int>(rng() % 1000000), 1 + static_cast<int>(rng() % 97));
      for (const auto& seen : embeddings) distinct = distinct && !(seen == value);
      embeddings.push_back(value);
    }
    if (distinct) break;
  }
  scalars::FieldPtr field = scalars::make_field(symbols, embeddings);
  std::vector<scalars::RealValue> xs;
  scalars::RealValue acc = scalars::RealValue::zero(field);
  for (int k = 0; k < points; ++k) {
    acc = acc + scalars::RealValue::basis(field, k);
    xs.push_back(acc);
  }
  std::vector<rel::Arc> arcs;
  for (const auto& p : m.pairs()) arcs.push_back({xs[p.left - 1], xs[p.right - 1]});
  return rel::MetricArcDiagram(field, std::move(arcs));
}

inline arcs::Matching random_nondegenerate_matching(int g, std::mt19937& rng) {
  const int points = 4 * g;
  while (true) {
    std::vector<int> order(points);
    for (int i = 0; i < points; ++i) order[i] = i + 1;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<arcs::IndexPair> pairs;
    for (int i = 0; i < points; i += 2) {
      pairs.push_back({std::min(order[i], order[i + 1]), std::max(order[i], order[i + 1])});
    }
    arcs::Matching m(pairs);
    if (arcs::is_nondegenerate(m)) return m;
  }
}

}  // namespace caravan::testing
