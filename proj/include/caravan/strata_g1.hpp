#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "caravan/cut_diagram.hpp"
#include "caravan/scalars.hpp"

namespace caravan::strata {

using scalars::FieldPtr;
using scalars::RealValue;

// Strata of genus-1 real-normalized differentials with one order-2 pole,
// indexed by the number of separatrices leaving the pole.
struct StratumLabel {
  enum class Kind { R1_4, R1_4_0, R1_3_cell, R1_3_0, R1_2_smooth, R1_2_sing, R1_2_0, R1_1 };

  Kind kind = Kind::R1_4;
  int cell = 0;  // 1..3 for R1_3_cell, otherwise 0

  int dimension() const;
  std::string str() const;

  bool operator==(const StratumLabel& o) const { return kind == o.kind && cell == o.cell; }
  bool operator!=(const StratumLabel& o) const { return !(*this == o); }
};

StratumLabel parse_label(const std::string& text);

// Either a two-pair cut diagram with degeneracies permitted (equal heights,
// endpoint incidences), or a singular configuration: a rational nodal curve
// with the points +-z glued, z != 0.
class G1Configuration {
 public:
  static G1Configuration smooth(FieldPtr field, cut::CutPair pair1, cut::CutPair pair2);
  static G1Configuration singular(FieldPtr field, RealValue node_re, RealValue node_im);

  bool is_smooth() const { return smooth_.has_value(); }
  const FieldPtr& field() const { return field_; }
  const cut::CutPair& pair1() const;
  const cut::CutPair& pair2() const;
  const RealValue& node_re() const;
  const RealValue& node_im() const;

 private:
  G1Configuration() = default;

  FieldPtr field_;
  std::optional<std::pair<cut::CutPair, cut::CutPair>> smooth_;
  std::optional<std::pair<RealValue, RealValue>> node_;
};

// Assigns the unique stratum of a configuration; configurations outside the
// recognized patterns raise UnclassifiableError with a diagnostic.
StratumLabel classify(const G1Configuration& c);

// The three positive gaps between the four sorted cut positions of a flat
// generic configuration.
std::array<RealValue, 3> coords_R1_4_0(const G1Configuration& c);

// Canonical member of the equivalent pair of cut diagrams representing the
// same three-separatrix differential: along the low horizontal line, the
// double cut glues to the nearest pair cut. Idempotent.
G1Configuration canonical_R1_3(const G1Configuration& c);

// Strata to whose closure the given stratum attaches, with multiplicity.
std::vector<StratumLabel> attachment(const StratumLabel& label);

// Builds a configuration with classify(sample(label, params)) == label.
// Takes one strictly positive rational per stratum dimension.
G1Configuration sample(const StratumLabel& label, const std::vector<Rational>& params);

std::vector<StratumLabel> all_labels();

}  // namespace caravan::strata
