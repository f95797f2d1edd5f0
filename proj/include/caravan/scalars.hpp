#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "caravan/errors.hpp"
#include "caravan/rational.hpp"

namespace caravan::scalars {

// Declared Q-independent real basis. The field is treated as formally
// independent; the rational embeddings exist only to order and render values.
class ScalarField {
 public:
  ScalarField(std::vector<std::string> symbols, std::vector<Rational> embeddings);

  int dim() const { return static_cast<int>(symbols_.size()); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::vector<Rational>& embeddings() const { return embeddings_; }
  const std::string& symbol(int k) const { return symbols_.at(k); }
  const Rational& embedding(int k) const { return embeddings_.at(k); }

  bool operator==(const ScalarField& o) const {
    return symbols_ == o.symbols_ && embeddings_ == o.embeddings_;
  }
  bool operator!=(const ScalarField& o) const { return !(*this == o); }

 private:
  std::vector<std::string> symbols_;
  std::vector<Rational> embeddings_;
};

using FieldPtr = std::shared_ptr<const ScalarField>;

FieldPtr make_field(std::vector<std::string> symbols, std::vector<Rational> embeddings);

// Field with a single symbol "u" embedded as 1; hosts plain rational data.
FieldPtr rational_field();

// Element of the Q-vector space over the field's basis symbols. All arithmetic
// is exact on the coordinates; the embedded value is derived data.
class RealValue {
 public:
  RealValue(FieldPtr field, std::vector<Rational> coords);

  static RealValue zero(const FieldPtr& field);
  static RealValue basis(const FieldPtr& field, int k, const Rational& scale = Rational(1));

  const FieldPtr& field() const { return field_; }
  const std::vector<Rational>& coords() const { return coords_; }
  const Rational& coord(int k) const { return coords_.at(k); }

  bool formally_zero() const;
  bool formally_equal(const RealValue& o) const;
  Rational embedded() const;

  RealValue operator+(const RealValue& o) const;
  RealValue operator-(const RealValue& o) const;
  RealValue operator-() const;
  RealValue scaled(const Rational& c) const;

  std::string str() const;

 private:
  void require_same_field(const RealValue& o) const;

  FieldPtr field_;
  std::vector<Rational> coords_;
};

inline RealValue operator*(const Rational& c, const RealValue& v) { return v.scaled(c); }

enum class Ordering { Less, Equal, Greater };

// Exact coordinate equality decides Equal; otherwise the embedded values
// decide. Equal embeddings of formally distinct values raise
// EmbeddingCollisionError.
Ordering compare(const RealValue& a, const RealValue& b);

// Sign against zero under the same collision rule.
int sign(const RealValue& v);

inline bool is_less(const RealValue& a, const RealValue& b) { return compare(a, b) == Ordering::Less; }

// Finitely generated additive subgroup of R, presented by generators.
class PeriodLattice {
 public:
  PeriodLattice(FieldPtr field, std::vector<RealValue> generators);

  const FieldPtr& field() const { return field_; }
  const std::vector<RealValue>& generators() const { return generators_; }

 private:
  FieldPtr field_;
  std::vector<RealValue> generators_;
};

// Rank over Q of the generator coordinate matrix, by fraction-free elimination.
int q_rank(const PeriodLattice& lattice);

// Discrete iff the rank is at most 1.
bool is_discrete(const PeriodLattice& lattice);

// Positive generator of a nontrivial discrete lattice.
RealValue canonical_generator(const PeriodLattice& lattice);

// The lattice is a free Z-module of rank 2g.
bool is_totally_incommensurable(const PeriodLattice& lattice, int g);

// Z-module equality via Hermite normal forms over a common denominator scale.
bool same_lattice(const PeriodLattice& a, const PeriodLattice& b);

// Row-style Hermite normal form of an integer matrix: pivots positive, entries
// above each pivot reduced into [0, pivot), zero rows dropped. Two row sets
// span the same Z-module iff their forms are identical.
std::vector<std::vector<Int>> hermite_normal_form(std::vector<std::vector<Int>> rows);

// Rank over Q by Bareiss elimination after clearing row denominators.
int rational_matrix_rank(const std::vector<std::vector<Rational>>& rows);

// Exact solution x of A x = b for a matrix with full column rank, if the
// system is consistent.
std::optional<std::vector<Rational>> solve_exact(const std::vector<std::vector<Rational>>& a,
                                                 const std::vector<Rational>& b);

}  // namespace caravan::scalars
