#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "caravan/errors.hpp"

namespace caravan::arcs {

// One arc: a pair of 1-based point indices, left < right.
struct IndexPair {
  int left = 0;
  int right = 0;
  bool operator==(const IndexPair& o) const { return left == o.left && right == o.right; }
};

// Perfect matching of 2n points on a line. Pairs are stored sorted by left
// endpoint; the arc index is the position in this order.
class Matching {
 public:
  Matching() = default;  // empty matching, the uncut line
  explicit Matching(std::vector<IndexPair> pairs);

  static Matching caravan(int g);

  int arc_count() const { return static_cast<int>(pairs_.size()); }
  int point_count() const { return 2 * arc_count(); }
  const std::vector<IndexPair>& pairs() const { return pairs_; }
  const IndexPair& pair(int i) const { return pairs_.at(i); }

  // partner[k] for k in 1..2n (index 0 unused).
  std::vector<int> partner() const;

  bool operator==(const Matching& o) const { return pairs_ == o.pairs_; }
  bool operator!=(const Matching& o) const { return !(*this == o); }

 private:
  std::vector<IndexPair> pairs_;
};

// True iff the four endpoints alternate along the line.
bool crossing(const IndexPair& a, const IndexPair& b);

// Symmetric matrix over F2, n <= 64.
class F2Matrix {
 public:
  explicit F2Matrix(int n);

  int size() const { return n_; }
  bool get(int i, int j) const { return (rows_.at(i) >> j) & 1u; }
  void set(int i, int j, bool v);
  int rank() const;

  bool operator==(const F2Matrix& o) const { return n_ == o.n_ && rows_ == o.rows_; }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> rows_;
};

F2Matrix interlacement_graph(const Matching& m);

// Rank over F2 of a square matrix given as 0/1 rows.
int f2_rank(const std::vector<std::vector<int>>& rows);

// 1 + corank of the interlacement adjacency matrix: the number of connected
// components of the reglued horizontal line, equivalently the pole count.
int component_count(const Matching& m);

bool is_nondegenerate(const Matching& m);

// Independent simulation of cutting the horizontal line at all 2n points and
// regluing left sides to the pair's right sides. Counts the orbits of the
// successor map: one chain through both infinite rays plus disjoint cycles.
int reglue_oracle(const Matching& m);

int genus(const Matching& m);

// Genus through the Euler characteristic of the glued CW model, with the pole
// count taken from reglue_oracle. Cross-checks genus().
int euler_genus_oracle(const Matching& m);

// Every perfect matching of 2n points, exactly once: the smallest unmatched
// index is paired with each larger unmatched index in increasing order.
void enumerate_matchings(int n, const std::function<void(const Matching&)>& visit);

// The sub-stream of matchings pairing point 1 with first_partner. The streams
// for first_partner = 2..2n partition enumerate_matchings(n).
void enumerate_matchings_with_first(int n, int first_partner,
                                    const std::function<void(const Matching&)>& visit);

std::uint64_t double_factorial(int odd);

// Number of nondegenerate matchings with 2g arcs.
std::uint64_t count_nondegenerate(int g);

}  // namespace caravan::arcs
