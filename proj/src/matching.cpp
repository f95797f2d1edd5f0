#include "caravan/matching.hpp"

#include <algorithm>
#include <string>

namespace caravan::arcs {

Matching::Matching(std::vector<IndexPair> pairs) : pairs_(std::move(pairs)) {
  const int n = static_cast<int>(pairs_.size());
  std::vector<bool> used(2 * n + 1, false);
  for (const auto& p : pairs_) {
    if (p.left < 1 || p.right < 1 || p.left > 2 * n || p.right > 2 * n) {
      throw InvalidInputError("matching index out of range");
    }
    if (p.left >= p.right) throw InvalidInputError("pair must have left < right");
    if (used[p.left] || used[p.right]) throw InvalidInputError("matching index used twice");
    used[p.left] = used[p.right] = true;
  }
  std::sort(pairs_.begin(), pairs_.end(),
            [](const IndexPair& a, const IndexPair& b) { return a.left < b.left; });
}

Matching Matching::caravan(int g) {
  if (g < 0) throw InvalidInputError("negative genus");
  std::vector<IndexPair> pairs;
  for (int k = 0; k < g; ++k) {
    pairs.push_back({4 * k + 1, 4 * k + 3});
    pairs.push_back({4 * k + 2, 4 * k + 4});
  }
  return Matching(std::move(pairs));
}

std::vector<int> Matching::partner() const {
  std::vector<int> partner(point_count() + 1, 0);
  for (const auto& p : pairs_) {
    partner[p.left] = p.right;
    partner[p.right] = p.left;
  }
  return partner;
}

bool crossing(const IndexPair& a, const IndexPair& b) {
  if (a.left == b.left || a.left == b.right || a.right == b.left || a.right == b.right) {
    throw InvalidInputError("crossing() on pairs sharing an index");
  }
  return (a.left < b.left && b.left < a.right && a.right < b.right) ||
         (b.left < a.left && a.left < b.right && b.right < a.right);
}

F2Matrix::F2Matrix(int n) : n_(n), rows_(n, 0) {
  if (n < 0 || n > 64) throw InvalidInputError("F2 matrix size out of range");
}

void F2Matrix::set(int i, int j, bool v) {
  std::uint64_t bit = std::uint64_t{1} << j;
  if (v) {
    rows_.at(i) |= bit;
  } else {
    rows_.at(i) &= ~bit;
  }
}

int F2Matrix::rank() const {
  std::vector<std::uint64_t> rows(rows_);
  int rank = 0;
  for (int col = 0; col < n_; ++col) {
    std::uint64_t bit = std::uint64_t{1} << col;
    int pivot = -1;
    for (int i = rank; i < n_; ++i) {
      if (rows[i] & bit) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int i = 0; i < n_; ++i) {
      if (i != rank && (rows[i] & bit)) rows[i] ^= rows[rank];
    }
    ++rank;
  }
  return rank;
}

F2Matrix interlacement_graph(const Matching& m) {
  const int n = m.arc_count();
  F2Matrix adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (crossing(m.pair(i), m.pair(j))) {
        adj.set(i, j, true);
        adj.set(j, i, true);
      }
    }
  }
  return adj;
}

int f2_rank(const std::vector<std::vector<int>>& rows) {
  const int n = static_cast<int>(rows.size());
  F2Matrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw InvalidInputError("f2_rank needs a square matrix");
    }
    for (int j = 0; j < n; ++j) m.set(i, j, rows[i][j] % 2 != 0);
  }
  return m.rank();
}

int component_count(const Matching& m) {
  return 1 + (m.arc_count() - interlacement_graph(m).rank());
}

bool is_nondegenerate(const Matching& m) {
  return interlacement_graph(m).rank() == m.arc_count();
}

int reglue_oracle(const Matching& m) {
  // Segments s_0..s_2n between consecutive cut positions; cutting at point k
  // glues the right end of s_{k-1} to the left end of the partner's segment.
  const int two_n = m.point_count();
  std::vector<int> partner = m.partner();
  std::vector<int> successor(two_n + 1, -1);  // successor[s] defined for s < two_n
  for (int k = 1; k <= two_n; ++k) successor[k - 1] = partner[k];
  std::vector<bool> seen(two_n + 1, false);
  int s = 0;
  seen[0] = true;
  while (s != two_n) {
    s = successor[s];
    seen[s] = true;
  }
  int cycles = 0;
  for (int start = 0; start <= two_n; ++start) {
    if (seen[start]) continue;
    ++cycles;
    int cur = start;
    while (!seen[cur]) {
      seen[cur] = true;
      cur = successor[cur];
    }
  }
  return 1 + cycles;
}

int genus(const Matching& m) { return interlacement_graph(m).rank() / 2; }

int euler_genus_oracle(const Matching& m) {
  // CW model of the glued surface: one face (the cut plane), 2n edges (the 4n
  // slit sides glued in pairs), n zero-vertices plus one vertex per pole.
  const int n = m.arc_count();
  const int vertices = n + reglue_oracle(m);
  const int edges = 2 * n;
  const int faces = 1;
  const int doubled = 2 - vertices + edges - faces;
  if (doubled < 0 || doubled % 2 != 0) {
    throw InvariantViolationError("Euler characteristic gives non-integral genus " +
                                  std::to_string(doubled) + "/2");
  }
  return doubled / 2;
}

namespace {

void enumerate_rec(int two_n, std::vector<int>& partner_of, std::vector<IndexPair>& acc,
                   const std::function<void(const Matching&)>& visit) {
  int first = 0;
  for (int k = 1; k <= two_n; ++k) {
    if (partner_of[k] == 0) {
      first = k;
      break;
    }
  }
  if (first == 0) {
    visit(Matching(acc));
    return;
  }
  for (int mate = first + 1; mate <= two_n; ++mate) {
    if (partner_of[mate] != 0) continue;
    partner_of[first] = mate;
    partner_of[mate] = first;
    acc.push_back({first, mate});
    enumerate_rec(two_n, partner_of, acc, visit);
    acc.pop_back();
    partner_of[first] = 0;
    partner_of[mate] = 0;
  }
}

}  // namespace

void enumerate_matchings(int n, const std::function<void(const Matching&)>& visit) {
  if (n < 1) throw InvalidInputError("enumerate_matchings needs n >= 1");
  std::vector<int> partner_of(2 * n + 1, 0);
  std::vector<IndexPair> acc;
  acc.reserve(n);
  enumerate_rec(2 * n, partner_of, acc, visit);
}

void enumerate_matchings_with_first(int n, int first_partner,
                                    const std::function<void(const Matching&)>& visit) {
  if (n < 1) throw InvalidInputError("enumerate_matchings needs n >= 1");
  if (first_partner < 2 || first_partner > 2 * n) {
    throw InvalidInputError("first partner out of range");
  }
  std::vector<int> partner_of(2 * n + 1, 0);
  partner_of[1] = first_partner;
  partner_of[first_partner] = 1;
  std::vector<IndexPair> acc;
  acc.reserve(n);
  acc.push_back({1, first_partner});
  enumerate_rec(2 * n, partner_of, acc, visit);
}

std::uint64_t double_factorial(int odd) {
  if (odd < -1) throw InvalidInputError("double factorial of negative number");
  std::uint64_t result = 1;
  for (int k = odd; k > 1; k -= 2) result *= static_cast<std::uint64_t>(k);
  return result;
}

std::uint64_t count_nondegenerate(int g) {
  if (g < 1) throw InvalidInputError("count_nondegenerate needs g >= 1");
  std::uint64_t count = 0;
  enumerate_matchings(2 * g, [&count](const Matching& m) {
    if (is_nondegenerate(m)) ++count;
  });
  return count;
}

}  // namespace caravan::arcs
