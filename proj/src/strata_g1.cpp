#include "caravan/strata_g1.hpp"

#include <algorithm>

namespace caravan::strata {

using scalars::compare;
using scalars::Ordering;
using scalars::sign;

int StratumLabel::dimension() const {
  switch (kind) {
    case Kind::R1_4:
      return 4;
    case Kind::R1_4_0:
    case Kind::R1_3_cell:
      return 3;
    case Kind::R1_3_0:
    case Kind::R1_2_smooth:
    case Kind::R1_2_sing:
      return 2;
    case Kind::R1_2_0:
    case Kind::R1_1:
      return 1;
  }
  throw InternalError("unreachable stratum kind");
}

std::string StratumLabel::str() const {
  switch (kind) {
    case Kind::R1_4:
      return "R1(4)";
    case Kind::R1_4_0:
      return "R1_0(4)";
    case Kind::R1_3_cell:
      return "R1(3):cell" + std::to_string(cell);
    case Kind::R1_3_0:
      return "R1_0(3)";
    case Kind::R1_2_smooth:
      return "R1(2):smooth";
    case Kind::R1_2_sing:
      return "R1(2):singular";
    case Kind::R1_2_0:
      return "R1_0(2)";
    case Kind::R1_1:
      return "R1(1)";
  }
  throw InternalError("unreachable stratum kind");
}

StratumLabel parse_label(const std::string& text) {
  for (const auto& label : all_labels()) {
    if (label.str() == text) return label;
  }
  for (int cell : {2, 3}) {
    StratumLabel label{StratumLabel::Kind::R1_3_cell, cell};
    if (label.str() == text) return label;
  }
  throw ParseError("unknown stratum label: " + text);
}

std::vector<StratumLabel> all_labels() {
  using K = StratumLabel::Kind;
  return {{K::R1_4, 0},  {K::R1_4_0, 0},    {K::R1_3_cell, 1}, {K::R1_3_0, 0},
          {K::R1_2_smooth, 0}, {K::R1_2_sing, 0}, {K::R1_2_0, 0},    {K::R1_1, 0}};
}

G1Configuration G1Configuration::smooth(FieldPtr field, cut::CutPair pair1, cut::CutPair pair2) {
  G1Configuration c;
  c.field_ = std::move(field);
  for (const cut::CutPair* pr : {&pair1, &pair2}) {
    for (const RealValue* v : {&pr->p.re, &pr->p.im, &pr->q.re, &pr->q.im}) {
      if (!(*v->field() == *c.field_)) throw InvalidInputError("cut point over a different field");
    }
    if (!pr->p.im.formally_equal(pr->q.im)) {
      throw InvalidInputError("smooth configuration needs per-pair equal imaginary parts");
    }
  }
  c.smooth_ = std::make_pair(std::move(pair1), std::move(pair2));
  return c;
}

G1Configuration G1Configuration::singular(FieldPtr field, RealValue node_re, RealValue node_im) {
  G1Configuration c;
  c.field_ = std::move(field);
  if (!(*node_re.field() == *c.field_) || !(*node_im.field() == *c.field_)) {
    throw InvalidInputError("node coordinate over a different field");
  }
  if (node_re.formally_zero() && node_im.formally_zero()) {
    throw InvalidInputError("singular configuration needs a nonzero node coordinate");
  }
  c.node_ = std::make_pair(std::move(node_re), std::move(node_im));
  return c;
}

const cut::CutPair& G1Configuration::pair1() const {
  if (!smooth_) throw DomainError("not a smooth configuration");
  return smooth_->first;
}

const cut::CutPair& G1Configuration::pair2() const {
  if (!smooth_) throw DomainError("not a smooth configuration");
  return smooth_->second;
}

const RealValue& G1Configuration::node_re() const {
  if (!node_) throw DomainError("not a singular configuration");
  return node_->first;
}

const RealValue& G1Configuration::node_im() const {
  if (!node_) throw DomainError("not a singular configuration");
  return node_->second;
}

namespace {

using K = StratumLabel::Kind;

// Endpoint roles of the higher/lower pair in a smooth configuration.
struct SmoothView {
  // real parts
  RealValue ph, qh, pl, ql;
  bool flat = false;  // equal heights
};

SmoothView view_of(const G1Configuration& c) {
  const auto& a = c.pair1();
  const auto& b = c.pair2();
  SmoothView v{a.p.re, a.q.re, b.p.re, b.q.re, false};
  switch (compare(a.p.im, b.p.im)) {
    case Ordering::Equal:
      v.flat = true;
      break;
    case Ordering::Greater:
      break;  // pair1 is higher
    case Ordering::Less:
      v = {b.p.re, b.q.re, a.p.re, a.q.re, false};
      break;
  }
  return v;
}

StratumLabel classify_singular(const G1Configuration& c) {
  int re_sign = sign(c.node_re());
  int im_sign = sign(c.node_im());
  if (im_sign == 0 && re_sign != 0) return {K::R1_2_0, 0};
  if (re_sign == 0) return {K::R1_1, 0};
  return {K::R1_2_sing, 0};
}

StratumLabel classify_smooth(const G1Configuration& c) {
  SmoothView v = view_of(c);
  // Pairs must be properly ordered cuts.
  if (compare(v.ph, v.qh) != Ordering::Less || compare(v.pl, v.ql) != Ordering::Less) {
    throw UnclassifiableError("cut pair without Re p < Re q");
  }
  struct Hit {
    const RealValue* carrier;  // higher-pair endpoint
    const RealValue* rider;    // lower-pair endpoint
    bool carrier_is_p;
    bool rider_is_p;
  };
  std::vector<Hit> hits;
  for (const RealValue* hi : {&v.ph, &v.qh}) {
    for (const RealValue* lo : {&v.pl, &v.ql}) {
      if (compare(*hi, *lo) == Ordering::Equal) {
        hits.push_back({hi, lo, hi == &v.ph, lo == &v.pl});
      }
    }
  }
  if (v.flat) {
    if (hits.empty()) {
      // Generic flat configuration, four distinct positions.
      return {K::R1_4_0, 0};
    }
    if (hits.size() == 1) {
      // Three distinct cut tops at equal height: the merged double zero.
      return {K::R1_3_0, 0};
    }
    throw UnclassifiableError("flat configuration with multiple incidences");
  }
  if (hits.empty()) return {K::R1_4, 0};
  if (hits.size() == 2) {
    bool pp = false, qq = false;
    for (const auto& h : hits) {
      pp = pp || (h.carrier_is_p && h.rider_is_p);
      qq = qq || (!h.carrier_is_p && !h.rider_is_p);
    }
    if (pp && qq) return {K::R1_2_smooth, 0};
    throw UnclassifiableError("two incidences that are not the double-cut pattern");
  }
  if (hits.size() > 2) throw UnclassifiableError("more than two endpoint incidences");
  const Hit& h = hits.front();
  // Zone of the lower pair's free endpoint relative to the higher pair.
  const RealValue& free_end = h.rider_is_p ? v.ql : v.pl;
  enum { kLeftZone, kBetween, kRightZone } zone;
  if (compare(free_end, v.ph) == Ordering::Less) {
    zone = kLeftZone;
  } else if (compare(free_end, v.qh) == Ordering::Greater) {
    zone = kRightZone;
  } else {
    zone = kBetween;
  }
  // The six single-incidence patterns split into the three attachment cells.
  if (h.carrier_is_p && h.rider_is_p && zone == kBetween) return {K::R1_3_cell, 1};
  if (!h.carrier_is_p && !h.rider_is_p && zone == kBetween) return {K::R1_3_cell, 1};
  if (h.carrier_is_p && !h.rider_is_p && zone == kLeftZone) return {K::R1_3_cell, 2};
  if (!h.carrier_is_p && !h.rider_is_p && zone == kLeftZone) return {K::R1_3_cell, 2};
  if (!h.carrier_is_p && h.rider_is_p && zone == kRightZone) return {K::R1_3_cell, 3};
  if (h.carrier_is_p && h.rider_is_p && zone == kRightZone) return {K::R1_3_cell, 3};
  throw UnclassifiableError("incidence pattern outside the three cells");
}

}  // namespace

StratumLabel classify(const G1Configuration& c) {
  return c.is_smooth() ? classify_smooth(c) : classify_singular(c);
}

std::array<RealValue, 3> coords_R1_4_0(const G1Configuration& c) {
  if (classify(c) != StratumLabel{K::R1_4_0, 0}) {
    throw DomainError("coordinates are defined on the flat generic stratum only");
  }
  std::vector<RealValue> xs{c.pair1().p.re, c.pair1().q.re, c.pair2().p.re, c.pair2().q.re};
  std::sort(xs.begin(), xs.end(),
            [](const RealValue& a, const RealValue& b) { return scalars::is_less(a, b); });
  return {xs[1] - xs[0], xs[2] - xs[1], xs[3] - xs[2]};
}

G1Configuration canonical_R1_3(const G1Configuration& c) {
  StratumLabel label = classify(c);
  if (label.kind != K::R1_3_cell) {
    throw DomainError("canonical representative is defined on the three-separatrix cells");
  }
  SmoothView v = view_of(c);
  const RealValue& yh = compare(c.pair1().p.im, c.pair2().p.im) == Ordering::Greater
                            ? c.pair1().p.im
                            : c.pair2().p.im;
  const RealValue& yl = compare(c.pair1().p.im, c.pair2().p.im) == Ordering::Greater
                            ? c.pair2().p.im
                            : c.pair1().p.im;
  RealValue len_h = v.qh - v.ph;
  RealValue len_l = v.ql - v.pl;
  auto rebuild = [&](const RealValue& pl, const RealValue& ql) {
    cut::CutPair high{{v.ph, yh}, {v.qh, yh}};
    cut::CutPair low{{pl, yl}, {ql, yl}};
    return G1Configuration::smooth(c.field(), high, low);
  };
  // Non-canonical members ride the far cut; the canonical partner shortens
  // the lower pair by the higher length and rides the near cut.
  if (label.cell == 1 && compare(v.ql, v.qh) == Ordering::Equal) {
    return rebuild(v.ph, v.ph + (len_h - len_l));
  }
  if (label.cell == 2 && compare(v.ql, v.qh) == Ordering::Equal) {
    return rebuild(v.ph - (len_l - len_h), v.ph);
  }
  if (label.cell == 3 && compare(v.pl, v.ph) == Ordering::Equal) {
    return rebuild(v.qh, v.qh + (len_l - len_h));
  }
  return c;  // already canonical
}

std::vector<StratumLabel> attachment(const StratumLabel& label) {
  switch (label.kind) {
    case K::R1_4_0:
      return {{K::R1_3_0, 0}, {K::R1_3_0, 0}, {K::R1_3_0, 0}};
    case K::R1_3_cell:
      return {{K::R1_3_0, 0}};
    case K::R1_2_smooth:
    case K::R1_2_sing:
      return {{K::R1_2_0, 0}};
    default:
      return {};
  }
}

G1Configuration sample(const StratumLabel& label, const std::vector<Rational>& params) {
  if (static_cast<int>(params.size()) != label.dimension()) {
    throw DomainError("sample needs one parameter per stratum dimension");
  }
  for (const auto& p : params) {
    if (p.sign() <= 0) throw DomainError("sample parameters must be positive");
  }
  FieldPtr field = scalars::rational_field();
  auto val = [&field](const Rational& r) { return RealValue::basis(field, 0, r); };
  RealValue zero = RealValue::zero(field);
  auto smooth = [&](Rational p1, Rational q1, Rational y1, Rational p2, Rational q2, Rational y2) {
    return G1Configuration::smooth(field, {{val(p1), val(y1)}, {val(q1), val(y1)}},
                                   {{val(p2), val(y2)}, {val(q2), val(y2)}});
  };
  const Rational zero_q(0);
  switch (label.kind) {
    case K::R1_4: {
      const Rational &a = params[0], &b = params[1], &c = params[2], &t = params[3];
      return smooth(zero_q, a + b, zero_q, a, a + b + c, t);
    }
    case K::R1_4_0: {
      const Rational &a = params[0], &b = params[1], &c = params[2];
      return smooth(zero_q, a + b, zero_q, a, a + b + c, zero_q);
    }
    case K::R1_3_cell: {
      const Rational &a = params[0], &b = params[1], &t = params[2];
      switch (label.cell) {
        case 1:
          return smooth(zero_q, a + b, t, zero_q, a, zero_q);
        case 2:
          return smooth(a, a + b, t, zero_q, a, zero_q);
        case 3:
          return smooth(zero_q, a, t, a, a + b, zero_q);
        default:
          throw DomainError("cell index must be 1, 2 or 3");
      }
    }
    case K::R1_3_0: {
      const Rational &a = params[0], &b = params[1];
      return smooth(zero_q, a, zero_q, a, a + b, zero_q);
    }
    case K::R1_2_smooth: {
      const Rational &a = params[0], &t = params[1];
      return smooth(zero_q, a, t, zero_q, a, zero_q);
    }
    case K::R1_2_sing:
      return G1Configuration::singular(field, val(params[0]), val(params[1]));
    case K::R1_2_0:
      return G1Configuration::singular(field, val(params[0]), zero);
    case K::R1_1:
      return G1Configuration::singular(field, zero, val(params[0]));
  }
  throw InternalError("unreachable stratum kind");
}

}  // namespace caravan::strata
