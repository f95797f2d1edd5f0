#pragma once

#include <string>
#include <vector>

#include "caravan/matching.hpp"
#include "caravan/scalars.hpp"

namespace caravan::cut {

using scalars::FieldPtr;
using scalars::PeriodLattice;
using scalars::RealValue;

struct CutPoint {
  RealValue re;
  RealValue im;
};

struct CutPair {
  CutPoint p;
  CutPoint q;
};

// Pairs of cut points in the plane, each carrying a downward vertical slit.
// Construction checks only field consistency; geometric constraints are
// reported by validate().
class CutDiagram {
 public:
  CutDiagram(FieldPtr field, std::vector<CutPair> pairs);

  const FieldPtr& field() const { return field_; }
  const std::vector<CutPair>& pairs() const { return pairs_; }
  int pair_count() const { return static_cast<int>(pairs_.size()); }

 private:
  FieldPtr field_;
  std::vector<CutPair> pairs_;
};

struct Violation {
  std::string code;
  int pair_index = -1;   // first pair involved, -1 for diagram-wide
  int other_index = -1;  // second pair for pairwise violations
  std::string detail;
};

// Violations are data, not exceptions; an empty report means valid.
std::vector<Violation> validate(const CutDiagram& d, bool require_generic);

// Projection onto a horizontal line below all cuts: the matching induced on
// the real parts sorted left to right.
arcs::Matching arc_diagram(const CutDiagram& d);

// re(q_i) - re(p_i) per pair, each strictly positive.
std::vector<RealValue> periods(const CutDiagram& d);

PeriodLattice period_lattice(const CutDiagram& d);

struct SurfaceReport {
  int genus = 0;
  int n_poles = 0;
  std::vector<int> pole_orders;  // one 2 and (n_poles - 1) ones
  std::vector<RealValue> periods;
  bool nondegenerate = false;
};

SurfaceReport build_surface(const CutDiagram& d);

// Subtracts the mean of all cut points so the coordinate sum vanishes.
CutDiagram normalize_translation(const CutDiagram& d);

// Sets every imaginary part to zero; real parts and periods unchanged.
CutDiagram flatten(const CutDiagram& d);

}  // namespace caravan::cut
