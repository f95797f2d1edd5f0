#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "caravan/cut_diagram.hpp"
#include "caravan/matching.hpp"
#include "caravan/scalars.hpp"

namespace caravan::rel {

using scalars::FieldPtr;
using scalars::PeriodLattice;
using scalars::RealValue;

enum class End { Left, Right };

inline End other(End e) { return e == End::Left ? End::Right : End::Left; }

struct Arc {
  RealValue left;
  RealValue right;
};

// Flattened cut diagram: 2n endpoint positions on one horizontal line, paired
// into arcs. Arc indices are stable across moves; lengths are the absolute
// periods. All endpoint positions are pairwise distinct and every length is
// positive in the embedded order.
class MetricArcDiagram {
 public:
  MetricArcDiagram(FieldPtr field, std::vector<Arc> arcs);

  static MetricArcDiagram from_cut_diagram(const cut::CutDiagram& d);
  cut::CutDiagram to_cut_diagram() const;  // flat, all imaginary parts zero

  const FieldPtr& field() const { return field_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(int i) const { return arcs_.at(i); }
  int arc_count() const { return static_cast<int>(arcs_.size()); }

  RealValue length(int i) const { return arcs_.at(i).right - arcs_.at(i).left; }
  std::vector<RealValue> lengths() const;
  PeriodLattice length_lattice() const;

  // Combinatorial matching induced by the endpoint order.
  arcs::Matching induced_matching() const;

  // Stable arc indices sorted by left endpoint position.
  std::vector<int> arcs_left_to_right() const;

 private:
  FieldPtr field_;
  std::vector<Arc> arcs_;
};

// Dense square integer matrix.
class IntMatrix {
 public:
  explicit IntMatrix(int n);
  static IntMatrix identity(int n);

  int size() const { return n_; }
  Int& at(int i, int j) { return a_.at(static_cast<std::size_t>(i) * n_ + j); }
  const Int& at(int i, int j) const { return a_.at(static_cast<std::size_t>(i) * n_ + j); }

  // row[target] += sign * row[source]; the effect of left-multiplying by the
  // elementary matrix I + sign*E[target][source].
  void row_add(int target, int source, int sign);

  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix transpose() const;
  Int determinant() const;
  std::vector<RealValue> apply(const std::vector<RealValue>& v) const;

  bool operator==(const IntMatrix& o) const { return n_ == o.n_ && a_ == o.a_; }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

 private:
  int n_ = 0;
  std::vector<Int> a_;
};

// lengths[row] += sign * lengths[col]; identity plus one off-diagonal +-1.
struct ElementaryMove {
  int row = 0;
  int col = 0;
  int sign = 0;
};

struct TraceEvent {
  int moving_arc = 0;   // arc whose end slid
  int static_arc = 0;   // arc it slid across
  RealValue position;   // where the two cuts met
  ElementaryMove elem;
};

enum class MarkKind { Step1Begin, Step2Enter, Step2Iteration, Step2Isolated, EpochRestart, BlockDone };

struct TraceMark {
  MarkKind kind;
  int block = 0;
  int left_count = -1;
  int right_count = -1;
  std::size_t event_index = 0;  // number of events recorded before this mark
};

struct MoveTrace {
  std::vector<TraceEvent> events;
  std::vector<TraceMark> marks;

  // Composition of all recorded elementary moves, latest applied last.
  IntMatrix product(int n) const;
};

// Ambiguous collision abort; carries whatever trace had accumulated.
class NormalizeAbort : public AmbiguousCollisionError {
 public:
  NormalizeAbort(const std::string& what, MoveTrace partial)
      : AmbiguousCollisionError(what), partial_trace(std::move(partial)) {}
  MoveTrace partial_trace;
};

// Antisymmetric lift of the interlacement matrix, in stable arc-index order:
// crossing arcs i, j with left(i) left of left(j) contribute +1 at (i, j).
IntMatrix intersection_form(const MetricArcDiagram& m);

// Slides one end of arc `moving` across arc `over`, realized as a translation
// of `moving` through the collision with the anchor end of `over`: the sliding
// end re-anchors beside the far end and the length changes by +-length(over).
// The anchor must be adjacent to the sliding end; when both ends of `over`
// are adjacent the caller has to pick one.
std::pair<MetricArcDiagram, ElementaryMove> second_vassiliev_move(
    const MetricArcDiagram& m, int moving, End end, int over,
    std::optional<End> anchor = std::nullopt);

// Rigid horizontal translation of one arc. Whenever a moving endpoint would
// coincide with a static endpoint the moving end switches: it re-anchors
// across the static arc and the motion continues.
std::pair<MetricArcDiagram, MoveTrace> translate_pair(const MetricArcDiagram& m, int arc,
                                                      const RealValue& delta);

// g consecutive interleaved pairs, pairs mutually disjoint.
bool is_caravan(const MetricArcDiagram& m);

struct NormalizeResult {
  MetricArcDiagram diagram;
  IntMatrix matrix;  // new lengths = matrix * old lengths, exactly
  MoveTrace trace;
};

// Reduces a nondegenerate diagram to a caravan by horizontal pair moves,
// accumulating the transition matrix in GL(2g, Z).
NormalizeResult caravan_normalize(const MetricArcDiagram& m);

// M^T * omega_to * M == omega_from.
bool is_symplectic(const IntMatrix& m, const IntMatrix& omega_from, const IntMatrix& omega_to);

struct LeafObstructionReport {
  IntMatrix matrix;  // caravan lengths of b = matrix * caravan lengths of a
  bool symplectic;   // false certifies distinct connected components
};

// Normalizes both diagrams and relates their caravan length bases; the
// integer matrix lies in GL(2g, Z) and its symplectic coset is the leaf
// obstruction.
LeafObstructionReport leaf_obstruction(const MetricArcDiagram& a, const MetricArcDiagram& b);

// Keeps every left endpoint and the matching, moves right endpoints to realize
// the requested lengths. The endpoint order must stay literally the same.
MetricArcDiagram retarget_lengths(const MetricArcDiagram& m,
                                  const std::vector<RealValue>& new_lengths);

// Standard symplectic block form: g diagonal blocks [[0,1],[-1,0]].
IntMatrix standard_symplectic_form(int g);

}  // namespace caravan::rel
