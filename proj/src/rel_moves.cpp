#include "caravan/rel_moves.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace caravan::rel {

using scalars::compare;
using scalars::Ordering;
using scalars::sign;

namespace {

struct EndRef {
  int arc = -1;
  End end = End::Left;
  bool operator==(const EndRef& o) const { return arc == o.arc && end == o.end; }
};

void check_diagram_fields(const FieldPtr& field, const std::vector<Arc>& arcs) {
  if (!field) throw InvalidInputError("diagram without field");
  for (const auto& a : arcs) {
    if (!(*a.left.field() == *field) || !(*a.right.field() == *field)) {
      throw InvalidInputError("arc endpoint over a different scalar field");
    }
  }
}

}  // namespace

MetricArcDiagram::MetricArcDiagram(FieldPtr field, std::vector<Arc> arcs)
    : field_(std::move(field)), arcs_(std::move(arcs)) {
  check_diagram_fields(field_, arcs_);
  for (const auto& a : arcs_) {
    if (sign(a.right - a.left) <= 0) throw InvalidInputError("arc with non-positive length");
  }
  std::vector<const RealValue*> ends;
  for (const auto& a : arcs_) {
    ends.push_back(&a.left);
    ends.push_back(&a.right);
  }
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      if (compare(*ends[i], *ends[j]) == Ordering::Equal) {
        throw InvalidInputError("coincident endpoint positions");
      }
    }
  }
}

MetricArcDiagram MetricArcDiagram::from_cut_diagram(const cut::CutDiagram& d) {
  std::vector<Arc> arcs;
  arcs.reserve(d.pair_count());
  for (const auto& pr : d.pairs()) arcs.push_back({pr.p.re, pr.q.re});
  return MetricArcDiagram(d.field(), std::move(arcs));
}

cut::CutDiagram MetricArcDiagram::to_cut_diagram() const {
  RealValue zero = RealValue::zero(field_);
  std::vector<cut::CutPair> pairs;
  pairs.reserve(arcs_.size());
  for (const auto& a : arcs_) pairs.push_back({{a.left, zero}, {a.right, zero}});
  return cut::CutDiagram(field_, std::move(pairs));
}

std::vector<RealValue> MetricArcDiagram::lengths() const {
  std::vector<RealValue> out;
  out.reserve(arcs_.size());
  for (int i = 0; i < arc_count(); ++i) out.push_back(length(i));
  return out;
}

PeriodLattice MetricArcDiagram::length_lattice() const { return PeriodLattice(field_, lengths()); }

arcs::Matching MetricArcDiagram::induced_matching() const {
  struct Entry {
    Rational pos;
    int arc;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < arc_count(); ++i) {
    entries.push_back({arcs_[i].left.embedded(), i});
    entries.push_back({arcs_[i].right.embedded(), i});
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.pos < b.pos; });
  std::vector<int> first_seen(arc_count(), 0);
  std::vector<arcs::IndexPair> pairs(arc_count());
  for (int pos = 1; pos <= static_cast<int>(entries.size()); ++pos) {
    int a = entries[pos - 1].arc;
    if (first_seen[a] == 0) {
      first_seen[a] = pos;
    } else {
      pairs[a] = {first_seen[a], pos};
    }
  }
  return arcs::Matching(pairs);
}

std::vector<int> MetricArcDiagram::arcs_left_to_right() const {
  std::vector<int> order(arc_count());
  for (int i = 0; i < arc_count(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [this](int a, int b) {
    return arcs_[a].left.embedded() < arcs_[b].left.embedded();
  });
  return order;
}

IntMatrix::IntMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n) {
  if (n < 0) throw InvalidInputError("negative matrix size");
}

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

void IntMatrix::row_add(int target, int source, int sign) {
  for (int j = 0; j < n_; ++j) at(target, j) += sign * at(source, j);
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (n_ != o.n_) throw DomainError("matrix size mismatch");
  IntMatrix r(n_);
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      if (at(i, k) == 0) continue;
      for (int j = 0; j < n_; ++j) r.at(i, j) += at(i, k) * o.at(k, j);
    }
  }
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix r(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
  }
  return r;
}

Int IntMatrix::determinant() const {
  if (n_ == 0) return 1;
  IntMatrix m(*this);
  Int prev = 1;
  int swaps = 0;
  for (int col = 0; col < n_; ++col) {
    int pivot = -1;
    for (int i = col; i < n_; ++i) {
      if (m.at(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int j = 0; j < n_; ++j) std::swap(m.at(col, j), m.at(pivot, j));
      ++swaps;
    }
    for (int i = col + 1; i < n_; ++i) {
      for (int j = col + 1; j < n_; ++j) {
        m.at(i, j) = (m.at(col, col) * m.at(i, j) - m.at(i, col) * m.at(col, j)) / prev;
      }
      m.at(i, col) = 0;
    }
    prev = m.at(col, col);
  }
  return (swaps % 2 == 0) ? prev : -prev;
}

std::vector<RealValue> IntMatrix::apply(const std::vector<RealValue>& v) const {
  if (static_cast<int>(v.size()) != n_) throw DomainError("vector size mismatch");
  if (n_ == 0) return {};
  std::vector<RealValue> out;
  out.reserve(n_);
  for (int i = 0; i < n_; ++i) {
    RealValue acc = RealValue::zero(v[0].field());
    for (int j = 0; j < n_; ++j) {
      if (at(i, j) == 0) continue;
      acc = acc + v[j].scaled(Rational(at(i, j)));
    }
    out.push_back(std::move(acc));
  }
  return out;
}

IntMatrix MoveTrace::product(int n) const {
  IntMatrix m = IntMatrix::identity(n);
  for (const auto& ev : events) m.row_add(ev.elem.row, ev.elem.col, ev.elem.sign);
  return m;
}

IntMatrix intersection_form(const MetricArcDiagram& m) {
  const int n = m.arc_count();
  IntMatrix omega(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int inside = 0;
      for (const RealValue* e : {&m.arc(j).left, &m.arc(j).right}) {
        if (compare(m.arc(i).left, *e) == Ordering::Less &&
            compare(*e, m.arc(i).right) == Ordering::Less) {
          ++inside;
        }
      }
      if (inside != 1) continue;  // disjoint or nested
      int s = compare(m.arc(i).left, m.arc(j).left) == Ordering::Less ? 1 : -1;
      omega.at(i, j) = s;
      omega.at(j, i) = -s;
    }
  }
  return omega;
}

bool is_caravan(const MetricArcDiagram& m) {
  if (m.arc_count() % 2 != 0) return false;
  return m.induced_matching() == arcs::Matching::caravan(m.arc_count() / 2);
}

bool is_symplectic(const IntMatrix& m, const IntMatrix& omega_from, const IntMatrix& omega_to) {
  if (m.size() != omega_from.size() || m.size() != omega_to.size()) {
    throw DomainError("symplectic check with mismatched sizes");
  }
  return m.transpose() * omega_to * m == omega_from;
}

IntMatrix standard_symplectic_form(int g) {
  IntMatrix j(2 * g);
  for (int k = 0; k < g; ++k) {
    j.at(2 * k, 2 * k + 1) = 1;
    j.at(2 * k + 1, 2 * k) = -1;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Move engine
// ---------------------------------------------------------------------------

namespace {

// Which of the two colliding cuts re-anchors across the other cut's pair.
enum class SwitchSide { MovingAcrossStatic, StaticAcrossMoving };

struct SimState {
  FieldPtr field;
  std::vector<Arc> arcs;
  IntMatrix acc;
  MoveTrace trace;

  explicit SimState(const MetricArcDiagram& m)
      : field(m.field()), arcs(m.arcs()), acc(IntMatrix::identity(m.arc_count())) {}

  int n() const { return static_cast<int>(arcs.size()); }
  RealValue& pos(EndRef e) { return e.end == End::Left ? arcs[e.arc].left : arcs[e.arc].right; }
  const RealValue& pos(EndRef e) const {
    return e.end == End::Left ? arcs[e.arc].left : arcs[e.arc].right;
  }
  RealValue length(int i) const { return arcs[i].right - arcs[i].left; }
};

void validate_positions(const SimState& st) {
  std::vector<const RealValue*> ends;
  for (const auto& a : st.arcs) {
    ends.push_back(&a.left);
    ends.push_back(&a.right);
  }
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      if (compare(*ends[i], *ends[j]) == Ordering::Equal) {
        throw InvalidMoveError("move leaves coincident endpoints");
      }
    }
  }
}

// Re-anchors `slide` across the pair of `near`, offset to `near` preserved.
// The length of slide's arc changes by +-length(near's arc).
ElementaryMove do_slide(SimState& st, EndRef slide, EndRef near) {
  const int across = near.arc;
  if (slide.arc == across) throw InternalError("slide across own arc");
  const EndRef far{across, other(near.end)};
  RealValue offset = st.pos(slide) - st.pos(near);
  RealValue event_position = st.pos(near);
  RealValue old_len = st.length(slide.arc);
  st.pos(slide) = st.pos(far) + offset;
  RealValue diff = st.length(slide.arc) - old_len;
  int s = 0;
  if (diff.formally_equal(st.length(across))) {
    s = 1;
  } else if (diff.formally_equal(-st.length(across))) {
    s = -1;
  } else {
    throw InternalError("slide is not an elementary length change");
  }
  if (sign(st.length(slide.arc)) <= 0) {
    throw InvalidMoveError("slide produces a non-positive arc length");
  }
  st.acc.row_add(slide.arc, across, s);
  ElementaryMove elem{slide.arc, across, s};
  st.trace.events.push_back({slide.arc, across, std::move(event_position), elem});
  return elem;
}

using Resolver = std::function<SwitchSide(const EndRef& moving, const EndRef& hit)>;

// Rigid translation of the arcs in `movers` by delta, switching at every
// collision of a moving endpoint with a static one. Events strictly inside a
// tie raise AmbiguousCollisionError; collisions that exist only in the
// embedding raise EmbeddingCollisionError. Returns the number of switches.
int translate_arcs(SimState& st, const std::vector<int>& movers, const RealValue& delta,
                   const Resolver& resolve) {
  if (delta.formally_zero()) return 0;
  std::vector<bool> moving(st.n(), false);
  for (int a : movers) moving.at(a) = true;
  RealValue remaining = delta;
  int events = 0;
  while (true) {
    Rational rem_emb = remaining.embedded();
    if (rem_emb.is_zero()) {
      if (!remaining.formally_zero()) {
        throw EmbeddingCollisionError("translation amount embeds to zero");
      }
      break;
    }
    std::optional<Rational> best_t;
    EndRef best_e, best_u;
    int ties = 0;
    for (int a = 0; a < st.n(); ++a) {
      if (!moving[a]) continue;
      for (End e : {End::Left, End::Right}) {
        Rational pe = st.pos({a, e}).embedded();
        for (int b = 0; b < st.n(); ++b) {
          if (moving[b]) continue;
          for (End f : {End::Left, End::Right}) {
            Rational t = (st.pos({b, f}).embedded() - pe) / rem_emb;
            if (t.sign() <= 0 || t > Rational(1)) continue;
            if (!best_t || t < *best_t) {
              best_t = t;
              best_e = {a, e};
              best_u = {b, f};
              ties = 1;
            } else if (t == *best_t) {
              ++ties;
            }
          }
        }
      }
    }
    if (!best_t) {
      for (int a = 0; a < st.n(); ++a) {
        if (!moving[a]) continue;
        st.arcs[a].left = st.arcs[a].left + remaining;
        st.arcs[a].right = st.arcs[a].right + remaining;
      }
      break;
    }
    if (ties > 1) {
      throw AmbiguousCollisionError("two collisions at the same translation parameter");
    }
    RealValue step = remaining.scaled(*best_t);
    for (int a = 0; a < st.n(); ++a) {
      if (!moving[a]) continue;
      st.arcs[a].left = st.arcs[a].left + step;
      st.arcs[a].right = st.arcs[a].right + step;
    }
    remaining = remaining.scaled(Rational(1) - *best_t);
    if (!st.pos(best_e).formally_equal(st.pos(best_u))) {
      throw EmbeddingCollisionError("collision between formally distinct positions");
    }
    ++events;
    if (resolve(best_e, best_u) == SwitchSide::MovingAcrossStatic) {
      do_slide(st, best_e, best_u);
    } else {
      do_slide(st, best_u, best_e);
    }
    if (remaining.formally_zero()) break;
  }
  return events;
}

bool strictly_between(const RealValue& a, const RealValue& x, const RealValue& b) {
  Ordering ab = compare(a, b);
  if (ab == Ordering::Less) {
    return compare(a, x) == Ordering::Less && compare(x, b) == Ordering::Less;
  }
  return compare(b, x) == Ordering::Less && compare(x, a) == Ordering::Less;
}

}  // namespace

std::pair<MetricArcDiagram, ElementaryMove> second_vassiliev_move(const MetricArcDiagram& m,
                                                                  int moving, End end, int over,
                                                                  std::optional<End> anchor) {
  if (moving < 0 || moving >= m.arc_count() || over < 0 || over >= m.arc_count()) {
    throw InvalidInputError("arc index out of range");
  }
  if (moving == over) throw InvalidInputError("cannot slide an arc across itself");
  SimState st(m);
  EndRef e{moving, end};
  auto adjacent = [&st](const EndRef& x, const EndRef& y) {
    for (int a = 0; a < st.n(); ++a) {
      for (End f : {End::Left, End::Right}) {
        EndRef w{a, f};
        if (w == x || w == y) continue;
        if (strictly_between(st.pos(x), st.pos(w), st.pos(y))) return false;
      }
    }
    return true;
  };
  std::optional<EndRef> target;
  if (anchor) {
    EndRef u{over, *anchor};
    if (!adjacent(e, u)) throw InvalidInputError("end is not adjacent to the chosen anchor");
    target = u;
  } else {
    for (End f : {End::Left, End::Right}) {
      EndRef u{over, f};
      if (!adjacent(e, u)) continue;
      if (target) {
        throw InvalidInputError("both ends of the target arc are adjacent; pick an anchor");
      }
      target = u;
    }
    if (!target) throw InvalidInputError("end is not adjacent to the target arc");
  }

  // The slide is a translation of the whole arc through the collision: the
  // sliding end passes the anchor, re-anchors across, and everything stops a
  // safe fraction beyond.
  RealValue gap = st.pos(*target) - st.pos(e);
  Rational dist = gap.embedded().abs();
  int dir = gap.embedded().sign();
  if (dir == 0) throw InternalError("coincident positions before a slide");
  EndRef self_other{moving, other(end)};
  auto clearance_from = [&](const RealValue& origin, bool skip_moving_arc) {
    std::optional<Rational> best;
    Rational base = origin.embedded();
    for (int a = 0; a < st.n(); ++a) {
      if (skip_moving_arc && a == moving) continue;
      for (End f : {End::Left, End::Right}) {
        if (a == moving && EndRef{a, f} == e) continue;
        Rational d = (st.pos({a, f}).embedded() - base) * Rational(dir);
        if (d.sign() <= 0) continue;
        if (!best || d < *best) best = d;
      }
    }
    return best;
  };
  std::optional<Rational> other_clear = clearance_from(st.pos(self_other), true);
  if (other_clear && *other_clear <= dist) {
    throw InvalidMoveError("slide is obstructed by another endpoint");
  }
  EndRef far{over, other(target->end)};
  std::vector<Rational> caps;
  if (other_clear) caps.push_back(*other_clear - dist);
  if (auto far_clear = clearance_from(st.pos(far), true)) caps.push_back(*far_clear);
  Rational theta(1, 2);
  for (const auto& cap : caps) {
    Rational limit = cap / (dist * Rational(2));
    if (limit < theta) theta = limit;
  }
  int events = translate_arcs(st, {moving}, gap.scaled(Rational(1) + theta),
                              [](const EndRef&, const EndRef&) {
                                return SwitchSide::MovingAcrossStatic;
                              });
  if (events != 1) throw InternalError("slide produced an unexpected event count");
  validate_positions(st);
  ElementaryMove elem = st.trace.events.front().elem;
  return {MetricArcDiagram(st.field, std::move(st.arcs)), elem};
}

std::pair<MetricArcDiagram, MoveTrace> translate_pair(const MetricArcDiagram& m, int arc,
                                                      const RealValue& delta) {
  if (arc < 0 || arc >= m.arc_count()) throw InvalidInputError("arc index out of range");
  SimState st(m);
  translate_arcs(st, {arc}, delta,
                 [](const EndRef&, const EndRef&) { return SwitchSide::MovingAcrossStatic; });
  validate_positions(st);
  return {MetricArcDiagram(st.field, std::move(st.arcs)), std::move(st.trace)};
}

MetricArcDiagram retarget_lengths(const MetricArcDiagram& m,
                                  const std::vector<RealValue>& new_lengths) {
  if (static_cast<int>(new_lengths.size()) != m.arc_count()) {
    throw InvalidInputError("length count mismatch");
  }
  for (const auto& len : new_lengths) {
    if (sign(len) <= 0) throw InvalidInputError("retarget length must be positive");
  }
  std::vector<Arc> arcs;
  arcs.reserve(m.arc_count());
  for (int i = 0; i < m.arc_count(); ++i) {
    arcs.push_back({m.arc(i).left, m.arc(i).left + new_lengths[i]});
  }
  std::optional<MetricArcDiagram> result;
  try {
    result.emplace(m.field(), std::move(arcs));
  } catch (const InvalidInputError& e) {
    throw InvalidRetargetError(std::string("retarget breaks the diagram: ") + e.what());
  }
  if (result->induced_matching() != m.induced_matching()) {
    throw InvalidRetargetError("retarget changes the endpoint order");
  }
  // The matching can survive an order change that swaps whole arcs; require
  // the literal (arc, side) sequence to be identical.
  auto order_key = [](const MetricArcDiagram& d) {
    struct Key {
      Rational pos;
      int arc;
      int side;
    };
    std::vector<Key> keys;
    for (int i = 0; i < d.arc_count(); ++i) {
      keys.push_back({d.arc(i).left.embedded(), i, 0});
      keys.push_back({d.arc(i).right.embedded(), i, 1});
    }
    std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) { return a.pos < b.pos; });
    std::vector<std::pair<int, int>> seq;
    seq.reserve(keys.size());
    for (const auto& k : keys) seq.emplace_back(k.arc, k.side);
    return seq;
  };
  if (order_key(*result) != order_key(m)) {
    throw InvalidRetargetError("retarget changes the endpoint order");
  }
  return *result;
}

// ---------------------------------------------------------------------------
// Caravan normalization
// ---------------------------------------------------------------------------

namespace {

bool debug_enabled() {
  static const bool enabled = std::getenv("CARAVAN_DEBUG") != nullptr;
  return enabled;
}

struct Measure {
  int total = 0;
  int right = 0;
  bool operator<(const Measure& o) const {
    return total < o.total || (total == o.total && right < o.right);
  }
};

class Normalizer {
 public:
  explicit Normalizer(const MetricArcDiagram& input)
      : st_(input),
        n_(input.arc_count()),
        finalized_(n_, false),
        budget_(2000 + 500L * n_ * n_) {}

  NormalizeResult run() {
    std::vector<RealValue> initial_lengths;
    for (int i = 0; i < n_; ++i) initial_lengths.push_back(st_.length(i));
    while (working_count() > 0) {
      auto [first, second] = step1();
      int a = first;
      int b = second;  // step 2 may swap the pair's second arc
      if (step2(a, b)) {
        finalized_[a] = finalized_[b] = true;
        mark(MarkKind::BlockDone);
        ++block_;
      }
      // otherwise re-enter step 1 from the current state
    }
    MetricArcDiagram diagram(st_.field, st_.arcs);
    if (!is_caravan(diagram)) throw InternalError("normalization did not reach a caravan");
    std::vector<RealValue> expected = st_.acc.apply(initial_lengths);
    for (int i = 0; i < n_; ++i) {
      if (!diagram.length(i).formally_equal(expected[i])) {
        throw InternalError("accumulated matrix does not reproduce the lengths");
      }
    }
    Int det = st_.acc.determinant();
    if (det != 1 && det != -1) throw InternalError("transition matrix is not unimodular");
    if (st_.trace.product(n_) != st_.acc) throw InternalError("trace does not compose to the matrix");
    return {std::move(diagram), st_.acc, std::move(st_.trace)};
  }

  MoveTrace take_trace() { return std::move(st_.trace); }

 private:
  // --- bookkeeping -------------------------------------------------------

  int working_count() const {
    int c = 0;
    for (bool f : finalized_) c += f ? 0 : 1;
    return c;
  }

  void spend() {
    if (--budget_ < 0) {
      throw TerminationViolationError("normalization exceeded its event budget");
    }
  }

  void mark(MarkKind kind, int left = -1, int right = -1) {
    st_.trace.marks.push_back({kind, block_, left, right, st_.trace.events.size()});
  }

  Rational emb(const EndRef& e) const { return st_.pos(e).embedded(); }

  std::vector<EndRef> working_statics(std::initializer_list<int> moving) const {
    std::vector<EndRef> out;
    for (int a = 0; a < n_; ++a) {
      if (finalized_[a]) continue;
      bool is_moving = false;
      for (int m : moving) is_moving = is_moving || (m == a);
      if (is_moving) continue;
      out.push_back({a, End::Left});
      out.push_back({a, End::Right});
    }
    return out;
  }

  // Largest static end strictly below `bound`, optionally restricted to a
  // half-open window (low, bound).
  std::optional<EndRef> max_static_below(const Rational& bound, std::initializer_list<int> moving,
                                         const std::optional<Rational>& low = std::nullopt) const {
    std::optional<EndRef> best;
    std::optional<Rational> best_pos;
    for (const auto& w : working_statics(moving)) {
      Rational p = emb(w);
      if (p >= bound) continue;
      if (low && p <= *low) continue;
      if (!best_pos || p > *best_pos) {
        best_pos = p;
        best = w;
      }
    }
    return best;
  }

  std::vector<EndRef> statics_in(const Rational& low, const Rational& high,
                                 std::initializer_list<int> moving) const {
    std::vector<EndRef> out;
    for (const auto& w : working_statics(moving)) {
      Rational p = emb(w);
      if (p > low && p < high) out.push_back(w);
    }
    return out;
  }

  // --- motion ------------------------------------------------------------

  // Fraction theta of base such that theta*base is at most half of every cap.
  Rational safety_fraction(const Rational& base, const std::vector<Rational>& caps) const {
    Rational theta(1, 2);
    for (const auto& cap : caps) {
      if (cap.sign() <= 0) throw InternalError("non-positive safety cap");
      Rational limit = cap / (base * Rational(2));
      if (limit < theta) theta = limit;
    }
    return theta;
  }

  // Shift already-finalized blocks further left when an upcoming move could
  // reach them. They are strictly left of all working arcs, so this never
  // produces events.
  void clear_finalized_zone(const std::vector<int>& movers, const Rational& travel,
                            const RealValue& delta) {
    std::optional<Rational> max_fin;
    for (int a = 0; a < n_; ++a) {
      if (!finalized_[a]) continue;
      Rational r = st_.arcs[a].right.embedded();
      if (!max_fin || r > *max_fin) max_fin = r;
    }
    if (!max_fin) return;
    std::optional<Rational> min_mover;
    for (int a : movers) {
      Rational l = st_.arcs[a].left.embedded();
      if (!min_mover || l < *min_mover) min_mover = l;
    }
    if (*min_mover - travel > *max_fin) return;
    std::vector<int> fin;
    for (int a = 0; a < n_; ++a) {
      if (finalized_[a]) fin.push_back(a);
    }
    int events = translate_arcs(st_, fin, delta.scaled(Rational(2)),
                                [](const EndRef&, const EndRef&) -> SwitchSide {
                                  throw InternalError("finalized block hit something");
                                });
    if (events != 0) throw InternalError("finalized block produced events");
  }

  // Runs a leftward move split into segments. Each planned collision sits at
  // the end of its own segment, whose delta is exactly the formal gap vector,
  // so the colliding positions agree formally, not just in the embedding.
  // Intermediate states may hold a transient coincidence; validity is checked
  // once at the end.
  void drive(const std::vector<int>& movers, const std::vector<RealValue>& segments,
             const std::vector<SwitchSide>& script) {
    RealValue total = RealValue::zero(st_.field);
    for (const auto& seg : segments) total = total + seg;
    Rational travel = (-total).embedded();
    if (travel.sign() <= 0) throw InternalError("drive must move left");
    clear_finalized_zone(movers, travel, total);
    std::size_t used = 0;
    int events = 0;
    for (const auto& seg : segments) {
      events += translate_arcs(st_, movers, seg, [&](const EndRef&, const EndRef&) {
        if (used >= script.size()) throw InternalError("unplanned switch event");
        return script[used++];
      });
    }
    if (static_cast<std::size_t>(events) != script.size()) {
      throw InternalError("planned switch did not happen");
    }
    validate_positions(st_);
  }

  // --- step 1 ------------------------------------------------------------

  void debug_state(const char* where) const {
    if (!debug_enabled()) return;
    std::cerr << "[normalize] " << where << ":";
    for (int i = 0; i < n_; ++i) {
      std::cerr << " arc" << i << (finalized_[i] ? "*" : "") << "=["
                << st_.arcs[i].left.embedded().to_double() << ","
                << st_.arcs[i].right.embedded().to_double() << "]";
    }
    std::cerr << "\n";
  }

  std::pair<int, int> step1() {
    mark(MarkKind::Step1Begin);
    int a = -1;
    std::optional<Rational> best;
    for (int i = 0; i < n_; ++i) {
      if (finalized_[i]) continue;
      Rational l = st_.arcs[i].left.embedded();
      if (!best || l < *best) {
        best = l;
        a = i;
      }
    }
    debug_state("step1 begin");
    while (true) {
      spend();
      Rational right_a = st_.arcs[a].right.embedded();
      auto hit = max_static_below(right_a, {a});
      if (!hit) {
        debug_state("step1 stuck");
        throw InternalError("nondegenerate diagram: no end below the leftmost arc's right end");
      }
      if (hit->end == End::Left) {
        // Crossing partner found: stop halfway to the collision.
        int b = hit->arc;
        RealValue gap = st_.arcs[a].right - st_.pos(*hit);
        drive({a}, {gap.scaled(Rational(-1, 2))}, {});
        check_pair_invariant(a, b);
        mark(MarkKind::Step2Enter);
        return {a, b};
      }
      // Nested arc: advance through the collision, sliding right(a) across it,
      // and stop a safe fraction into the gap below its far (left) end.
      int b = hit->arc;
      RealValue gap = st_.arcs[a].right - st_.pos(*hit);
      Rational o = st_.arcs[b].left.embedded();
      std::vector<Rational> caps;
      if (auto below = max_static_below(o, {a, b})) caps.push_back(o - emb(*below));
      Rational theta = safety_fraction(gap.embedded(), caps);
      drive({a}, {-gap, gap.scaled(-theta)}, {SwitchSide::MovingAcrossStatic});
    }
  }

  void check_pair_invariant(int a, int b, const std::vector<EndRef>& walkers = {}) const {
    Rational la = st_.arcs[a].left.embedded();
    Rational lb = st_.arcs[b].left.embedded();
    Rational ra = st_.arcs[a].right.embedded();
    Rational rb = st_.arcs[b].right.embedded();
    if (!(la < lb && lb < ra && ra < rb)) throw InternalError("pair invariant: order broken");
    auto middle = statics_in(lb, ra, {a, b});
    if (middle.size() != walkers.size()) {
      throw InternalError("pair invariant: middle does not match the walking ends");
    }
    for (const auto& m : middle) {
      bool known = false;
      for (const auto& w : walkers) known = known || (m == w);
      if (!known) throw InternalError("pair invariant: unexpected end in the middle");
    }
  }

  // --- step 2 ------------------------------------------------------------

  // Returns true when the pair (a, b) ends isolated; false to restart step 1.
  // The second arc may be swapped along the way.
  //
  // Interval ends are cleared one collision at a time. Left-interval ends
  // slide across arc b and park beyond it. Right-interval ends of arcs that
  // reach past the pair become a "walking end": they first slide across arc b
  // into the middle gap, travel with the pair, and are collected when right(a)
  // reaches them, sliding across arc a into the left interval. At most one
  // walking end exists at a time; the measure marks are emitted only in the
  // clean states between walks.
  bool step2(int a, int& b) {
    std::optional<Measure> prev;
    std::vector<EndRef> walkers;  // newest last; positions decrease with age
    while (true) {
      spend();
      check_pair_invariant(a, b, walkers);
      Rational la = st_.arcs[a].left.embedded();
      Rational lb = st_.arcs[b].left.embedded();
      Rational ra = st_.arcs[a].right.embedded();
      Rational rb = st_.arcs[b].right.embedded();
      auto left_zone = statics_in(la, lb, {a, b});
      auto right_zone = statics_in(ra, rb, {a, b});
      if (walkers.empty()) {
        Measure measure{static_cast<int>(left_zone.size() + right_zone.size()),
                        static_cast<int>(right_zone.size())};
        mark(MarkKind::Step2Iteration, static_cast<int>(left_zone.size()),
             static_cast<int>(right_zone.size()));
        if (debug_enabled()) {
          std::cerr << "[normalize] step2 pair=(" << a << "," << b
                    << ") L=" << left_zone.size() << " R=" << right_zone.size() << "\n";
          debug_state("step2 state");
        }
        if (prev && !(measure < *prev)) {
          throw TerminationViolationError("step-2 measure failed to decrease");
        }
        prev = measure;
        if (left_zone.empty() && right_zone.empty()) {
          mark(MarkKind::Step2Isolated);
          return true;
        }
      }
      auto max_of = [this](const std::vector<EndRef>& zone) {
        EndRef best = zone.front();
        Rational best_pos = emb(best);
        for (const auto& w : zone) {
          if (emb(w) > best_pos) {
            best_pos = emb(w);
            best = w;
          }
        }
        return best;
      };
      std::optional<EndRef> u, v;
      std::optional<Rational> d_left, d_right, d_walk;
      if (!left_zone.empty()) {
        u = max_of(left_zone);
        d_left = lb - emb(*u);
      }
      if (!right_zone.empty()) {
        v = max_of(right_zone);
        d_right = rb - emb(*v);
      }
      if (!walkers.empty()) d_walk = ra - emb(walkers.front());
      // nearest event wins; distance ties abort the run
      std::optional<Rational> best;
      for (const auto& d : {d_left, d_right, d_walk}) {
        if (!d) continue;
        if (best && *d == *best) {
          throw NormalizeAbort("two pairs of cuts meet simultaneously (or their collision "
                               "parameters collide in the embedding)",
                               st_.trace);
        }
        if (!best || *d < *best) best = *d;
      }
      if (!best) throw InternalError("no event in a non-isolated state");
      if (d_walk && *d_walk == *best) {
        collect_walker(a, b, walkers, *d_walk, d_left, d_right);
        walkers.erase(walkers.begin());
      } else if (d_left && *d_left == *best) {
        handle_left_event(a, b, *u, *d_left, d_right, d_walk, ra, lb, rb);
      } else {
        if (!handle_right_event(a, b, *v, *d_right, d_left, d_walk, lb, ra, rb, walkers)) {
          mark(MarkKind::EpochRestart);
          return false;
        }
      }
    }
  }

  // Collects the topmost walking end at right(a): it slides across arc a and
  // parks in the left interval. Walkers are always left ends (their partner
  // reaches past the pair), so the slide lengthens their arc and stays valid.
  void collect_walker(int a, int b, const std::vector<EndRef>& walkers, const Rational& d_walk,
                      const std::optional<Rational>& d_left,
                      const std::optional<Rational>& d_right) {
    const EndRef& top = walkers.front();
    if (top.end != End::Left) throw InternalError("walking end is not a left end");
    RealValue gap = st_.arcs[a].right - st_.pos(top);
    std::vector<Rational> caps;
    if (d_left) caps.push_back(*d_left - d_walk);
    if (d_right) caps.push_back(*d_right - d_walk);
    caps.push_back(st_.arcs[b].left.embedded() - st_.arcs[a].left.embedded());
    if (walkers.size() > 1) {
      caps.push_back(emb(top) - emb(walkers[1]));  // keep right(a) above the next walker
    }
    Rational theta = safety_fraction(d_walk, caps);
    drive({a, b}, {-gap, gap.scaled(-theta)}, {SwitchSide::StaticAcrossMoving});
  }

  void handle_left_event(int a, int& b, const EndRef& u, const Rational& d_left,
                         const std::optional<Rational>& d_right,
                         const std::optional<Rational>& d_walk, const Rational& ra,
                         const Rational& lb, const Rational& rb) {
    const int c = u.arc;
    const EndRef o{c, other(u.end)};
    Rational o_pos = emb(o);
    RealValue gap = st_.arcs[b].left - st_.pos(u);
    std::vector<Rational> caps{ra - lb};
    if (d_right) caps.push_back(*d_right - d_left);
    if (d_walk) caps.push_back(*d_walk - d_left);
    if (o_pos > lb && o_pos < rb) {
      if (o_pos <= ra) {
        // walkers are left ends with their partner beyond the pair, so no
        // left-interval end can belong to the walking arc
        throw InternalError("left event on the walking arc");
      }
      // left(b) slides across the straddler; the straddler becomes the pair's
      // second arc.
      auto below = max_static_below(o_pos, {a, b});
      if (below) caps.push_back(o_pos - emb(*below));
      Rational theta = safety_fraction(d_left, caps);
      drive({a, b}, {-gap, gap.scaled(-theta)}, {SwitchSide::MovingAcrossStatic});
      b = c;
    } else {
      // The met end slides across arc b and parks just beyond its right end.
      auto below = max_static_below(emb(u), {a, b});
      if (below) caps.push_back(emb(u) - emb(*below));
      Rational theta = safety_fraction(d_left, caps);
      drive({a, b}, {-gap, gap.scaled(-theta)}, {SwitchSide::StaticAcrossMoving});
    }
  }

  // Returns false when the epoch has to restart: a right-interval end whose
  // arc dips into the left interval is slid into the middle and left for the
  // resumed step 1 to absorb.
  bool handle_right_event(int a, int b, const EndRef& v, const Rational& d_right,
                          const std::optional<Rational>& d_left,
                          const std::optional<Rational>& d_walk, const Rational& lb,
                          const Rational& ra, const Rational& rb,
                          std::vector<EndRef>& walkers) {
    const int c = v.arc;
    const EndRef o{c, other(v.end)};
    Rational o_pos = emb(o);
    RealValue gap = st_.arcs[b].right - st_.pos(v);
    std::vector<Rational> caps{ra - lb};
    if (d_left) caps.push_back(*d_left - d_right);
    if (d_walk) caps.push_back(*d_walk - d_right);
    std::optional<Rational> d_right2;
    for (const auto& w : statics_in(ra, rb, {a, b})) {
      if (w == v) continue;
      Rational d = rb - emb(w);
      if (!d_right2 || d < *d_right2) d_right2 = d;
    }
    if (d_right2) caps.push_back(*d_right2 - d_right);
    if (o_pos > ra && o_pos < rb) {
      // Both ends in the right interval; right(b) slides across the third arc
      // and parks just below its far end.
      auto below = max_static_below(o_pos, {a, b});
      if (below) caps.push_back(o_pos - emb(*below));
      Rational theta = safety_fraction(d_right, caps);
      drive({a, b}, {-gap, gap.scaled(-theta)}, {SwitchSide::MovingAcrossStatic});
      return true;
    }
    Rational theta = safety_fraction(d_right, caps);
    drive({a, b}, {-gap, gap.scaled(-theta)}, {SwitchSide::StaticAcrossMoving});
    if (o_pos > rb) {
      // The arc reaches beyond the pair; its left end starts walking and will
      // be collected at right(a). Later walkers sit strictly lower.
      walkers.push_back(v);
      return true;
    }
    // o in the left interval: the relocated right end now sits nested inside
    // arc a's span, which the resumed step 1 clears with guaranteed progress.
    return false;
  }

  SimState st_;
  int n_;
  std::vector<bool> finalized_;
  long budget_;
  int block_ = 0;
};

}  // namespace

NormalizeResult caravan_normalize(const MetricArcDiagram& m) {
  if (!arcs::is_nondegenerate(m.induced_matching())) {
    throw DomainError("caravan normalization needs a nondegenerate matching");
  }
  if (m.arc_count() == 0 || is_caravan(m)) {
    return {m, IntMatrix::identity(m.arc_count()), MoveTrace{}};
  }
  Normalizer normalizer(m);
  try {
    return normalizer.run();
  } catch (const NormalizeAbort&) {
    throw;
  } catch (const AmbiguousCollisionError& e) {
    throw NormalizeAbort(e.what(), normalizer.take_trace());
  }
}

LeafObstructionReport leaf_obstruction(const MetricArcDiagram& a, const MetricArcDiagram& b) {
  if (a.arc_count() != b.arc_count()) throw DomainError("diagrams with different arc counts");
  if (!(*a.field() == *b.field())) throw DomainError("diagrams over different scalar fields");
  const int n = a.arc_count();
  if (n == 0 || n % 2 != 0) throw DomainError("leaf obstruction needs 2g arcs");
  const int g = n / 2;
  for (const MetricArcDiagram* d : {&a, &b}) {
    if (!arcs::is_nondegenerate(d->induced_matching())) {
      throw DomainError("leaf obstruction needs nondegenerate diagrams");
    }
    if (!scalars::is_totally_incommensurable(d->length_lattice(), g)) {
      throw DomainError("leaf obstruction needs totally incommensurable lengths");
    }
  }
  if (!scalars::same_lattice(a.length_lattice(), b.length_lattice())) {
    throw DomainError("diagrams generate different period lattices");
  }
  NormalizeResult na = caravan_normalize(a);
  NormalizeResult nb = caravan_normalize(b);
  auto caravan_lengths = [](const MetricArcDiagram& d) {
    std::vector<RealValue> out;
    for (int i : d.arcs_left_to_right()) out.push_back(d.length(i));
    return out;
  };
  std::vector<RealValue> la = caravan_lengths(na.diagram);
  std::vector<RealValue> lb = caravan_lengths(nb.diagram);
  const int dim = a.field()->dim();
  std::vector<std::vector<Rational>> system(dim, std::vector<Rational>(n));
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < dim; ++k) system[k][j] = la[j].coord(k);
  }
  IntMatrix basis_change(n);
  for (int i = 0; i < n; ++i) {
    auto solution = scalars::solve_exact(system, lb[i].coords());
    if (!solution) throw InternalError("caravan lengths are not related over Q");
    for (int j = 0; j < n; ++j) {
      if (!(*solution)[j].is_integer()) {
        throw InternalError("transition matrix is not integral despite equal lattices");
      }
      basis_change.at(i, j) = (*solution)[j].num();
    }
  }
  Int det = basis_change.determinant();
  if (det != 1 && det != -1) {
    throw InternalError("transition matrix is not unimodular despite equal lattices");
  }
  IntMatrix form = standard_symplectic_form(g);
  auto caravan_form = [&form](const MetricArcDiagram& d) {
    IntMatrix omega = intersection_form(d);
    std::vector<int> order = d.arcs_left_to_right();
    IntMatrix permuted(omega.size());
    for (int i = 0; i < omega.size(); ++i) {
      for (int j = 0; j < omega.size(); ++j) permuted.at(i, j) = omega.at(order[i], order[j]);
    }
    if (permuted != form) throw InternalError("caravan intersection form is not standard");
  };
  caravan_form(na.diagram);
  caravan_form(nb.diagram);
  return {basis_change, is_symplectic(basis_change, form, form)};
}

}  // namespace caravan::rel
