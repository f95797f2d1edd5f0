#include "caravan/scalars.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace caravan::scalars {

ScalarField::ScalarField(std::vector<std::string> symbols, std::vector<Rational> embeddings)
    : symbols_(std::move(symbols)), embeddings_(std::move(embeddings)) {
  if (symbols_.empty()) throw InvalidInputError("scalar field needs at least one symbol");
  if (symbols_.size() != embeddings_.size()) {
    throw InvalidInputError("symbol/embedding count mismatch");
  }
  std::set<std::string> names(symbols_.begin(), symbols_.end());
  if (names.size() != symbols_.size()) throw InvalidInputError("duplicate field symbols");
  for (const auto& e : embeddings_) {
    if (e.is_zero()) throw InvalidInputError("zero embedding");
  }
  for (std::size_t i = 0; i < embeddings_.size(); ++i) {
    for (std::size_t j = i + 1; j < embeddings_.size(); ++j) {
      if (embeddings_[i] == embeddings_[j]) {
        throw InvalidInputError("embeddings must be pairwise distinct");
      }
    }
  }
}

FieldPtr make_field(std::vector<std::string> symbols, std::vector<Rational> embeddings) {
  return std::make_shared<const ScalarField>(std::move(symbols), std::move(embeddings));
}

FieldPtr rational_field() {
  static const FieldPtr field = make_field({"u"}, {Rational(1)});
  return field;
}

RealValue::RealValue(FieldPtr field, std::vector<Rational> coords)
    : field_(std::move(field)), coords_(std::move(coords)) {
  if (!field_) throw InvalidInputError("value without field");
  if (static_cast<int>(coords_.size()) != field_->dim()) {
    throw InvalidInputError("coordinate count does not match field dimension");
  }
}

RealValue RealValue::zero(const FieldPtr& field) {
  return RealValue(field, std::vector<Rational>(field->dim()));
}

RealValue RealValue::basis(const FieldPtr& field, int k, const Rational& scale) {
  std::vector<Rational> coords(field->dim());
  coords.at(k) = scale;
  return RealValue(field, std::move(coords));
}

bool RealValue::formally_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c.is_zero(); });
}

bool RealValue::formally_equal(const RealValue& o) const {
  require_same_field(o);
  return coords_ == o.coords_;
}

Rational RealValue::embedded() const {
  Rational total;
  for (int k = 0; k < field_->dim(); ++k) total += coords_[k] * field_->embedding(k);
  return total;
}

void RealValue::require_same_field(const RealValue& o) const {
  if (!(*field_ == *o.field_)) throw DomainError("values over different scalar fields");
}

RealValue RealValue::operator+(const RealValue& o) const {
  require_same_field(o);
  std::vector<Rational> coords(coords_);
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += o.coords_[k];
  return RealValue(field_, std::move(coords));
}

RealValue RealValue::operator-(const RealValue& o) const {
  require_same_field(o);
  std::vector<Rational> coords(coords_);
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] -= o.coords_[k];
  return RealValue(field_, std::move(coords));
}

RealValue RealValue::operator-() const {
  std::vector<Rational> coords(coords_);
  for (auto& c : coords) c = -c;
  return RealValue(field_, std::move(coords));
}

RealValue RealValue::scaled(const Rational& c) const {
  std::vector<Rational> coords(coords_);
  for (auto& x : coords) x *= c;
  return RealValue(field_, std::move(coords));
}

std::string RealValue::str() const {
  std::ostringstream out;
  bool first = true;
  for (int k = 0; k < field_->dim(); ++k) {
    if (coords_[k].is_zero()) continue;
    if (!first) out << " + ";
    out << coords_[k].str() << "*" << field_->symbol(k);
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

Ordering compare(const RealValue& a, const RealValue& b) {
  if (a.formally_equal(b)) return Ordering::Equal;
  Rational ea = a.embedded();
  Rational eb = b.embedded();
  if (ea == eb) {
    throw EmbeddingCollisionError("embedding collision: " + a.str() + " vs " + b.str());
  }
  return ea < eb ? Ordering::Less : Ordering::Greater;
}

int sign(const RealValue& v) {
  if (v.formally_zero()) return 0;
  int s = v.embedded().sign();
  if (s == 0) throw EmbeddingCollisionError("embedding collision: " + v.str() + " vs 0");
  return s;
}

PeriodLattice::PeriodLattice(FieldPtr field, std::vector<RealValue> generators)
    : field_(std::move(field)), generators_(std::move(generators)) {
  if (!field_) throw InvalidInputError("lattice without field");
  for (const auto& g : generators_) {
    if (!(*g.field() == *field_)) throw DomainError("lattice generator over a different field");
  }
}

namespace {

// Clears denominators row by row; rank is invariant under row scaling.
std::vector<std::vector<Int>> cleared_rows(const std::vector<std::vector<Rational>>& rows) {
  std::vector<std::vector<Int>> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    Int scale = 1;
    for (const auto& x : row) scale = int_lcm(scale, x.den());
    std::vector<Int> cleared(row.size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      cleared[k] = row[k].num() * (scale / row[k].den());
    }
    out.push_back(std::move(cleared));
  }
  return out;
}

int bareiss_rank(std::vector<std::vector<Int>> m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  Int prev = 1;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows; ++i) {
      if (m[i][col] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int i = rank + 1; i < rows; ++i) {
      for (int j = col + 1; j < cols; ++j) {
        m[i][j] = (m[rank][col] * m[i][j] - m[i][col] * m[rank][j]) / prev;
      }
      m[i][col] = 0;
    }
    prev = m[rank][col];
    ++rank;
  }
  return rank;
}

Int floor_div(const Int& a, const Int& b) {
  // b > 0; round toward minus infinity.
  Int q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}

}  // namespace

int rational_matrix_rank(const std::vector<std::vector<Rational>>& rows) {
  return bareiss_rank(cleared_rows(rows));
}

int q_rank(const PeriodLattice& lattice) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& g : lattice.generators()) rows.push_back(g.coords());
  return rational_matrix_rank(rows);
}

bool is_discrete(const PeriodLattice& lattice) { return q_rank(lattice) <= 1; }

RealValue canonical_generator(const PeriodLattice& lattice) {
  if (!is_discrete(lattice)) throw DomainError("canonical generator of a non-discrete lattice");
  const RealValue* base = nullptr;
  for (const auto& g : lattice.generators()) {
    if (!g.formally_zero()) {
      base = &g;
      break;
    }
  }
  if (base == nullptr) throw DomainError("canonical generator of the trivial lattice");
  int anchor = 0;
  while (base->coord(anchor).is_zero()) ++anchor;
  Rational acc;  // gcd of the rational multipliers against *base
  for (const auto& g : lattice.generators()) {
    if (g.formally_zero()) continue;
    Rational r = g.coord(anchor) / base->coord(anchor);
    if (!g.formally_equal(base->scaled(r))) {
      throw InternalError("rank-1 lattice with non-proportional generators");
    }
    acc = Rational::frac_gcd(acc, r);
  }
  RealValue result = base->scaled(acc);
  int s = sign(result);
  if (s < 0) result = -result;
  return result;
}

bool is_totally_incommensurable(const PeriodLattice& lattice, int g) {
  if (g < 1) throw InvalidInputError("genus must be positive");
  return q_rank(lattice) == 2 * g;
}

std::vector<std::vector<Int>> hermite_normal_form(std::vector<std::vector<Int>> rows) {
  if (rows.empty()) return rows;
  const int cols = static_cast<int>(rows[0].size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols) throw InvalidInputError("ragged matrix");
  }
  const int n = static_cast<int>(rows.size());
  int rank = 0;
  for (int col = 0; col < cols && rank < n; ++col) {
    // Euclidean reduction of all rows below `rank` in this column.
    while (true) {
      int pivot = -1;
      for (int i = rank; i < n; ++i) {
        if (rows[i][col] != 0 && (pivot < 0 || int_abs(rows[i][col]) < int_abs(rows[pivot][col]))) {
          pivot = i;
        }
      }
      if (pivot < 0) break;
      std::swap(rows[rank], rows[pivot]);
      bool reduced = true;
      for (int i = rank + 1; i < n; ++i) {
        if (rows[i][col] == 0) continue;
        Int q = rows[i][col] / rows[rank][col];
        for (int j = 0; j < cols; ++j) rows[i][j] -= q * rows[rank][j];
        if (rows[i][col] != 0) reduced = false;
      }
      if (reduced) break;
    }
    if (rows[rank][col] == 0) continue;
    if (rows[rank][col] < 0) {
      for (int j = 0; j < cols; ++j) rows[rank][j] = -rows[rank][j];
    }
    for (int i = 0; i < rank; ++i) {
      Int q = floor_div(rows[i][col], rows[rank][col]);
      if (q != 0) {
        for (int j = 0; j < cols; ++j) rows[i][j] -= q * rows[rank][j];
      }
    }
    ++rank;
  }
  rows.resize(rank);
  return rows;
}

bool same_lattice(const PeriodLattice& a, const PeriodLattice& b) {
  if (!(*a.field() == *b.field())) throw DomainError("lattices over different scalar fields");
  // One common scale for both lattices keeps Z-module equality intact.
  Int scale = 1;
  for (const auto* lat : {&a, &b}) {
    for (const auto& g : lat->generators()) {
      for (const auto& c : g.coords()) scale = int_lcm(scale, c.den());
    }
  }
  auto scaled_rows = [&scale](const PeriodLattice& lat) {
    std::vector<std::vector<Int>> rows;
    for (const auto& g : lat.generators()) {
      std::vector<Int> row(g.coords().size());
      for (std::size_t k = 0; k < row.size(); ++k) {
        row[k] = g.coord(static_cast<int>(k)).num() * (scale / g.coord(static_cast<int>(k)).den());
      }
      rows.push_back(std::move(row));
    }
    return rows;
  };
  return hermite_normal_form(scaled_rows(a)) == hermite_normal_form(scaled_rows(b));
}

std::optional<std::vector<Rational>> solve_exact(const std::vector<std::vector<Rational>>& a,
                                                 const std::vector<Rational>& b) {
  const int rows = static_cast<int>(a.size());
  if (rows != static_cast<int>(b.size())) throw InvalidInputError("system shape mismatch");
  if (rows == 0) return std::vector<Rational>{};
  const int cols = static_cast<int>(a[0].size());
  std::vector<std::vector<Rational>> m(rows, std::vector<Rational>(cols + 1));
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(a[i].size()) != cols) throw InvalidInputError("ragged matrix");
    for (int j = 0; j < cols; ++j) m[i][j] = a[i][j];
    m[i][cols] = b[i];
  }
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows; ++i) {
      if (!m[i][col].is_zero()) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    Rational inv = Rational(1) / m[rank][col];
    for (int j = col; j <= cols; ++j) m[rank][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == rank || m[i][col].is_zero()) continue;
      Rational f = m[i][col];
      for (int j = col; j <= cols; ++j) m[i][j] -= f * m[rank][j];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank < cols) throw DomainError("system does not have full column rank");
  for (int i = rank; i < rows; ++i) {
    if (!m[i][cols].is_zero()) return std::nullopt;  // inconsistent
  }
  std::vector<Rational> x(cols);
  for (int i = 0; i < rank; ++i) x[pivot_col[i]] = m[i][cols];
  return x;
}

}  // namespace caravan::scalars
