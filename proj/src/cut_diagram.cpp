#include "caravan/cut_diagram.hpp"

#include <algorithm>

namespace caravan::cut {

using scalars::compare;
using scalars::Ordering;

CutDiagram::CutDiagram(FieldPtr field, std::vector<CutPair> pairs)
    : field_(std::move(field)), pairs_(std::move(pairs)) {
  if (!field_) throw InvalidInputError("cut diagram without field");
  for (const auto& pr : pairs_) {
    for (const RealValue* v : {&pr.p.re, &pr.p.im, &pr.q.re, &pr.q.im}) {
      if (!(*v->field() == *field_)) {
        throw InvalidInputError("cut point over a different scalar field");
      }
    }
  }
}

std::vector<Violation> validate(const CutDiagram& d, bool require_generic) {
  std::vector<Violation> out;
  const auto& pairs = d.pairs();
  const int n = d.pair_count();
  for (int i = 0; i < n; ++i) {
    if (!pairs[i].p.im.formally_equal(pairs[i].q.im)) {
      out.push_back({"pair-imaginary-mismatch", i, -1,
                     pairs[i].p.im.str() + " vs " + pairs[i].q.im.str()});
    }
    try {
      if (compare(pairs[i].p.re, pairs[i].q.re) != Ordering::Less) {
        out.push_back({"pair-real-order", i, -1,
                       "Re p must be < Re q: " + pairs[i].p.re.str() + " vs " + pairs[i].q.re.str()});
      }
    } catch (const EmbeddingCollisionError& e) {
      out.push_back({"embedding-collision", i, -1, e.what()});
    }
  }
  if (require_generic) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        try {
          if (compare(pairs[i].p.im, pairs[j].p.im) == Ordering::Equal) {
            out.push_back({"pairs-share-imaginary", i, j, ""});
          }
        } catch (const EmbeddingCollisionError& e) {
          out.push_back({"embedding-collision", i, j, e.what()});
        }
      }
    }
    std::vector<const RealValue*> res;
    for (const auto& pr : pairs) {
      res.push_back(&pr.p.re);
      res.push_back(&pr.q.re);
    }
    for (std::size_t a = 0; a < res.size(); ++a) {
      for (std::size_t b = a + 1; b < res.size(); ++b) {
        try {
          if (compare(*res[a], *res[b]) == Ordering::Equal) {
            out.push_back({"real-parts-not-distinct", static_cast<int>(a / 2),
                           static_cast<int>(b / 2), res[a]->str()});
          }
        } catch (const EmbeddingCollisionError& e) {
          out.push_back({"embedding-collision", static_cast<int>(a / 2), static_cast<int>(b / 2),
                         e.what()});
        }
      }
    }
  }
  return out;
}

arcs::Matching arc_diagram(const CutDiagram& d) {
  struct Entry {
    const RealValue* re;
    int pair;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < d.pair_count(); ++i) {
    entries.push_back({&d.pairs()[i].p.re, i});
    entries.push_back({&d.pairs()[i].q.re, i});
  }
  try {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      switch (compare(*a.re, *b.re)) {
        case Ordering::Less:
          return true;
        case Ordering::Greater:
          return false;
        case Ordering::Equal:
          throw DegenerateProjectionError("duplicate real part: " + a.re->str());
      }
      return false;
    });
  } catch (const EmbeddingCollisionError& e) {
    throw DegenerateProjectionError(std::string("projection collision: ") + e.what());
  }
  std::vector<int> first_seen(d.pair_count(), 0);
  std::vector<arcs::IndexPair> pairs(d.pair_count());
  for (int pos = 1; pos <= static_cast<int>(entries.size()); ++pos) {
    int pr = entries[pos - 1].pair;
    if (first_seen[pr] == 0) {
      first_seen[pr] = pos;
    } else {
      pairs[pr] = {first_seen[pr], pos};
    }
  }
  return arcs::Matching(pairs);
}

std::vector<RealValue> periods(const CutDiagram& d) {
  std::vector<RealValue> out;
  out.reserve(d.pair_count());
  for (const auto& pr : d.pairs()) {
    RealValue period = pr.q.re - pr.p.re;
    if (scalars::sign(period) <= 0) {
      throw InvariantViolationError("non-positive period " + period.str());
    }
    out.push_back(std::move(period));
  }
  return out;
}

PeriodLattice period_lattice(const CutDiagram& d) {
  return PeriodLattice(d.field(), periods(d));
}

SurfaceReport build_surface(const CutDiagram& d) {
  SurfaceReport report;
  arcs::Matching m = arc_diagram(d);
  report.genus = arcs::genus(m);
  report.n_poles = arcs::component_count(m);
  report.pole_orders.push_back(2);
  for (int k = 1; k < report.n_poles; ++k) report.pole_orders.push_back(1);
  report.periods = periods(d);
  report.nondegenerate = (report.n_poles == 1);
  return report;
}

CutDiagram normalize_translation(const CutDiagram& d) {
  if (d.pair_count() == 0) return d;
  RealValue re_sum = RealValue::zero(d.field());
  RealValue im_sum = RealValue::zero(d.field());
  for (const auto& pr : d.pairs()) {
    re_sum = re_sum + pr.p.re + pr.q.re;
    im_sum = im_sum + pr.p.im + pr.q.im;
  }
  Rational inv_count(1, 2 * d.pair_count());
  RealValue re_mean = re_sum.scaled(inv_count);
  RealValue im_mean = im_sum.scaled(inv_count);
  std::vector<CutPair> pairs;
  pairs.reserve(d.pair_count());
  for (const auto& pr : d.pairs()) {
    pairs.push_back({{pr.p.re - re_mean, pr.p.im - im_mean}, {pr.q.re - re_mean, pr.q.im - im_mean}});
  }
  return CutDiagram(d.field(), std::move(pairs));
}

CutDiagram flatten(const CutDiagram& d) {
  RealValue zero = RealValue::zero(d.field());
  std::vector<CutPair> pairs;
  pairs.reserve(d.pair_count());
  for (const auto& pr : d.pairs()) {
    pairs.push_back({{pr.p.re, zero}, {pr.q.re, zero}});
  }
  return CutDiagram(d.field(), std::move(pairs));
}

}  // namespace caravan::cut
