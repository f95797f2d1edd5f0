#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "caravan/rel_moves.hpp"
#include "support.hpp"

using namespace caravan::rel;
using caravan::Rational;
using caravan::arcs::Matching;
using caravan::scalars::make_field;
using caravan::scalars::RealValue;
using caravan::testing::random_nondegenerate_matching;
using caravan::testing::staircase;

namespace {

FieldPtr qf() { return caravan::scalars::rational_field(); }

RealValue rq(const FieldPtr& f, const Rational& r) { return RealValue::basis(f, 0, r); }

MetricArcDiagram diag(const FieldPtr& f, std::vector<std::pair<Rational, Rational>> ends) {
  std::vector<Arc> arcs;
  for (auto& [l, r] : ends) arcs.push_back({rq(f, l), rq(f, r)});
  return MetricArcDiagram(f, std::move(arcs));
}

}  // namespace

TEST_CASE("diagram validation and accessors") {
  auto f = qf();
  CHECK_THROWS_AS(diag(f, {{0, 0}}), caravan::InvalidInputError);
  CHECK_THROWS_AS(diag(f, {{0, 2}, {2, 3}}), caravan::InvalidInputError);
  MetricArcDiagram m = diag(f, {{0, 2}, {1, 3}});
  CHECK(m.induced_matching() == Matching({{1, 3}, {2, 4}}));
  CHECK(m.length(0).formally_equal(rq(f, 2)));
  CHECK(m.arcs_left_to_right() == std::vector<int>{0, 1});
}

TEST_CASE("intersection form") {
  auto f = qf();
  IntMatrix omega = intersection_form(diag(f, {{0, 2}, {1, 3}}));
  CHECK(omega.at(0, 1) == 1);
  CHECK(omega.at(1, 0) == -1);

  IntMatrix zero = intersection_form(diag(f, {{0, 1}, {2, 3}}));
  CHECK(zero == IntMatrix(2));

  // 2-caravan: block diagonal [[0,1],[-1,0]]
  MetricArcDiagram c2 = diag(f, {{0, 2}, {1, 3}, {10, 12}, {11, 13}});
  IntMatrix form = intersection_form(c2);
  CHECK(form == standard_symplectic_form(2));
}

TEST_CASE("intersection form reduces to the interlacement matrix mod 2") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    int g = 1 + static_cast<int>(rng() % 3);
    Matching m = random_nondegenerate_matching(g, rng);
    MetricArcDiagram d = staircase(m, rng);
    IntMatrix omega = intersection_form(d);
    auto adj = caravan::arcs::interlacement_graph(d.induced_matching());
    // stable index == matching index for staircase construction (sorted lefts)
    for (int i = 0; i < omega.size(); ++i) {
      for (int j = 0; j < omega.size(); ++j) {
        caravan::Int v = omega.at(i, j);
        if (v < 0) v = -v;
        CHECK(static_cast<int>(adj.get(i, j)) == (v == 1 ? 1 : 0));
      }
    }
  }
}

TEST_CASE("second Vassiliev move, nested shrink and its inverse") {
  auto f = qf();
  // outer arc (0, 5/2) over inner (1, 2): sliding the right end left across
  // the inner arc shrinks a to a-b
  MetricArcDiagram m = diag(f, {{0, Rational(5, 2)}, {1, 2}});
  auto [after, elem] = second_vassiliev_move(m, 0, End::Right, 1);
  CHECK(after.length(0).formally_equal(rq(f, Rational(3, 2))));
  CHECK(after.length(1).formally_equal(rq(f, 1)));
  CHECK(elem.row == 0);
  CHECK(elem.col == 1);
  CHECK(elem.sign == -1);
  // arcs are now disjoint
  CHECK(after.induced_matching() == Matching({{1, 2}, {3, 4}}));

  auto [restored, inverse] = second_vassiliev_move(after, 0, End::Right, 1);
  CHECK(restored.length(0).formally_equal(rq(f, Rational(5, 2))));
  CHECK(inverse.sign == 1);
  IntMatrix prod = IntMatrix::identity(2);
  prod.row_add(elem.row, elem.col, elem.sign);
  prod.row_add(inverse.row, inverse.col, inverse.sign);
  CHECK(prod == IntMatrix::identity(2));
}

TEST_CASE("second Vassiliev move errors") {
  auto f = qf();
  // sliding the left end of (1/2, 3/2) across (1, 3) would flip the arc
  MetricArcDiagram m = diag(f, {{Rational(1, 2), Rational(3, 2)}, {1, 3}});
  CHECK_THROWS_AS(second_vassiliev_move(m, 0, End::Left, 1), caravan::InvalidMoveError);

  // non-adjacent end
  MetricArcDiagram far = diag(f, {{0, 1}, {2, 3}, {Rational(3, 2), 4}});
  CHECK_THROWS_AS(second_vassiliev_move(far, 0, End::Left, 1), caravan::InvalidInputError);

  // both ends adjacent: caller must disambiguate
  MetricArcDiagram mid = diag(f, {{0, Rational(3, 2)}, {1, 2}});
  CHECK_THROWS_AS(second_vassiliev_move(mid, 0, End::Right, 1), caravan::InvalidInputError);
  CHECK_NOTHROW(second_vassiliev_move(mid, 0, End::Right, 1, End::Left));
}

TEST_CASE("form transport under single moves") {
  auto f = qf();
  std::vector<MetricArcDiagram> cases = {
      diag(f, {{0, Rational(5, 2)}, {1, 2}}),
      diag(f, {{0, 2}, {1, 3}}),
      diag(f, {{0, 2}, {1, 3}, {Rational(5, 2), 4}}),
  };
  for (const auto& m : cases) {
    for (int arc = 0; arc < m.arc_count(); ++arc) {
      for (End end : {End::Left, End::Right}) {
        for (int over = 0; over < m.arc_count(); ++over) {
          if (over == arc) continue;
          for (auto anchor : {std::optional<End>{}, std::optional<End>{End::Left},
                              std::optional<End>{End::Right}}) {
            try {
              auto [after, elem] = second_vassiliev_move(m, arc, end, over, anchor);
              IntMatrix e = IntMatrix::identity(m.arc_count());
              e.row_add(elem.row, elem.col, elem.sign);
              // cycles transform with the lengths, so the form transports as
              // omega_after = E * omega_before * E^T
              CHECK(e * intersection_form(m) * e.transpose() == intersection_form(after));
              // genus is preserved move by move
              CHECK(caravan::arcs::genus(after.induced_matching()) ==
                    caravan::arcs::genus(m.induced_matching()));
            } catch (const caravan::InvalidInputError&) {
            } catch (const caravan::InvalidMoveError&) {
            }
          }
        }
      }
    }
  }
}

TEST_CASE("translate_pair without collision") {
  auto f = qf();
  MetricArcDiagram m = diag(f, {{0, 2}, {1, 3}});
  auto [after, trace] = translate_pair(m, 0, rq(f, Rational(-1, 2)));
  CHECK(trace.events.empty());
  CHECK(after.induced_matching() == m.induced_matching());
  CHECK(after.arc(0).left.formally_equal(rq(f, Rational(-1, 2))));
  CHECK(after.arc(0).right.formally_equal(rq(f, Rational(3, 2))));
}

TEST_CASE("translate_pair drives a switch") {
  auto f = qf();
  // outer (0, 5/2) over inner (1, 2); moving left past the meet fires
  // one switch and the lengths become {a-b, b}
  MetricArcDiagram m = diag(f, {{0, Rational(5, 2)}, {1, 2}});
  auto [after, trace] = translate_pair(m, 0, rq(f, Rational(-7, 10)));
  REQUIRE(trace.events.size() == 1);
  CHECK(trace.events[0].elem.sign == -1);
  CHECK(after.length(0).formally_equal(rq(f, Rational(3, 2))));
  CHECK(after.length(1).formally_equal(rq(f, 1)));
  CHECK(trace.product(2).apply(m.lengths())[0].formally_equal(after.length(0)));

  // driving exactly onto the meet leaves coincident cuts
  CHECK_THROWS_AS(translate_pair(m, 0, rq(f, Rational(-1, 2))), caravan::InvalidMoveError);
}

TEST_CASE("translate_pair reversibility") {
  auto f = qf();
  MetricArcDiagram m = diag(f, {{0, Rational(5, 2)}, {1, 2}});
  RealValue delta = rq(f, Rational(-7, 10));
  auto [forward, trace1] = translate_pair(m, 0, delta);
  auto [back, trace2] = translate_pair(forward, 0, -delta);
  for (int i = 0; i < 2; ++i) {
    CHECK(back.arc(i).left.formally_equal(m.arc(i).left));
    CHECK(back.arc(i).right.formally_equal(m.arc(i).right));
  }
  IntMatrix prod = IntMatrix::identity(2);
  for (const auto& ev : trace1.events) prod.row_add(ev.elem.row, ev.elem.col, ev.elem.sign);
  for (const auto& ev : trace2.events) prod.row_add(ev.elem.row, ev.elem.col, ev.elem.sign);
  CHECK(prod == IntMatrix::identity(2));
}

TEST_CASE("translate_pair ambiguity and embedding collisions") {
  auto f = qf();
  // both ends of the moving arc meet static ends at the same parameter
  MetricArcDiagram twin =
      diag(f, {{0, 10}, {Rational(-1, 2), Rational(19, 2)}});
  CHECK_THROWS_AS(translate_pair(twin, 0, rq(f, -1)), caravan::AmbiguousCollisionError);

  // a collision that exists only in the embedding
  auto g = make_field({"a", "b"}, {Rational(1), Rational(1, 2)});
  RealValue a = RealValue::basis(g, 0);
  RealValue b = RealValue::basis(g, 1);
  MetricArcDiagram m(g, {{a, a.scaled(2)}, {b, a.scaled(3)}});
  CHECK_THROWS_AS(translate_pair(m, 0, a.scaled(Rational(-1, 2))),
                  caravan::EmbeddingCollisionError);
}

TEST_CASE("is_caravan") {
  auto f = qf();
  CHECK(is_caravan(diag(f, {{0, 2}, {1, 3}})));
  CHECK(is_caravan(diag(f, {{0, 2}, {1, 3}, {10, 12}, {11, 13}})));
  CHECK_FALSE(is_caravan(diag(f, {{0, 1}, {2, 3}})));
  CHECK_FALSE(is_caravan(diag(f, {{1, 4}, {2, 7}, {3, 6}, {5, 8}})));
}

TEST_CASE("caravan_normalize on a caravan is the identity") {
  auto f = qf();
  MetricArcDiagram m = diag(f, {{0, 2}, {1, 3}, {10, 12}, {11, 13}});
  NormalizeResult result = caravan_normalize(m);
  CHECK(result.trace.events.empty());
  CHECK(result.matrix == IntMatrix::identity(4));
  for (int i = 0; i < 4; ++i) {
    CHECK(result.diagram.arc(i).left.formally_equal(m.arc(i).left));
    CHECK(result.diagram.arc(i).right.formally_equal(m.arc(i).right));
  }
}

TEST_CASE("caravan_normalize rejects degenerate matchings") {
  auto f = qf();
  CHECK_THROWS_AS(caravan_normalize(diag(f, {{0, 1}, {2, 3}})), caravan::DomainError);
  CHECK_THROWS_AS(caravan_normalize(diag(f, {{0, 1}})), caravan::DomainError);
}

TEST_CASE("caravan_normalize after switch-driven translations") {
  std::mt19937 rng(23);
  Matching caravan2 = Matching::caravan(2);
  MetricArcDiagram m = staircase(caravan2, rng);
  // drag the second block's first arc left past the first block
  RealValue delta = (m.arc(1).right - m.arc(2).left).scaled(Rational(3, 2));
  auto [moved, trace] = translate_pair(m, 2, delta);
  CHECK(!trace.events.empty());
  NormalizeResult result = caravan_normalize(moved);
  CHECK(is_caravan(result.diagram));
  caravan::Int det = result.matrix.determinant();
  CHECK((det == 1 || det == -1));
  auto expected = result.matrix.apply(moved.lengths());
  for (int i = 0; i < moved.arc_count(); ++i) {
    CHECK(result.diagram.length(i).formally_equal(expected[i]));
  }
  CHECK(caravan::scalars::same_lattice(moved.length_lattice(), result.diagram.length_lattice()));
  CHECK(caravan::scalars::same_lattice(m.length_lattice(), result.diagram.length_lattice()));
}

TEST_CASE("caravan_normalize on random diagrams") {
  std::mt19937 rng(101);
  for (int g = 1; g <= 3; ++g) {
    for (int trial = 0; trial < 12; ++trial) {
      Matching m = random_nondegenerate_matching(g, rng);
      MetricArcDiagram d = staircase(m, rng);
      NormalizeResult result = caravan_normalize(d);
      CHECK(is_caravan(result.diagram));
      CHECK(caravan::arcs::is_nondegenerate(result.diagram.induced_matching()));
      caravan::Int det = result.matrix.determinant();
      CHECK((det == 1 || det == -1));
      // exact matrix consistency
      auto expected = result.matrix.apply(d.lengths());
      for (int i = 0; i < d.arc_count(); ++i) {
        CHECK(result.diagram.length(i).formally_equal(expected[i]));
      }
      CHECK(result.trace.product(d.arc_count()) == result.matrix);
      CHECK(caravan::scalars::same_lattice(d.length_lattice(),
                                           result.diagram.length_lattice()));
      // the matrix transports the intersection form onto the caravan's form
      CHECK(result.matrix * intersection_form(d) * result.matrix.transpose() ==
            intersection_form(result.diagram));
    }
  }
}

TEST_CASE("normalization trace preserves genus and the form transport") {
  std::mt19937 rng(77);
  Matching m = random_nondegenerate_matching(2, rng);
  MetricArcDiagram d = staircase(m, rng);
  NormalizeResult result = caravan_normalize(d);
  // replay: every elementary matrix has one off-diagonal +-1
  for (const auto& ev : result.trace.events) {
    CHECK(ev.elem.row != ev.elem.col);
    CHECK((ev.elem.sign == 1 || ev.elem.sign == -1));
  }
  CHECK(caravan::arcs::genus(result.diagram.induced_matching()) ==
        caravan::arcs::genus(d.induced_matching()));
}

TEST_CASE("step-2 measure marks decrease lexicographically") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Matching m = random_nondegenerate_matching(3, rng);
    MetricArcDiagram d = staircase(m, rng);
    NormalizeResult result = caravan_normalize(d);
    std::optional<std::pair<int, int>> prev;
    for (const auto& mark : result.trace.marks) {
      if (mark.kind == MarkKind::Step2Iteration) {
        std::pair<int, int> measure{mark.left_count + mark.right_count, mark.right_count};
        if (prev) CHECK(measure < *prev);
        prev = measure;
      } else {
        prev.reset();
      }
    }
  }
}

TEST_CASE("is_symplectic") {
  IntMatrix j = standard_symplectic_form(1);
  CHECK(is_symplectic(IntMatrix::identity(2), j, j));
  IntMatrix flip(2);
  flip.at(0, 0) = 1;
  flip.at(1, 1) = -1;
  CHECK_FALSE(is_symplectic(flip, j, j));
  IntMatrix rot(2);
  rot.at(0, 1) = 1;
  rot.at(1, 0) = -1;
  CHECK(is_symplectic(rot, j, j));
  CHECK_THROWS_AS(is_symplectic(IntMatrix::identity(3), j, j), caravan::DomainError);
}

TEST_CASE("leaf obstruction: identity, swap, and move sequences") {
  auto f2 = make_field({"e1", "e2"}, {Rational(13, 7), Rational(29, 11)});
  RealValue e1 = RealValue::basis(f2, 0);
  RealValue e2 = RealValue::basis(f2, 1);
  RealValue zero = RealValue::zero(f2);
  // caravan with lengths (e1, e2): positions 0 < e1/2 < e1 < e1/2 + e2
  auto caravan_with = [&](const RealValue& len0, const RealValue& len1) {
    RealValue half = len0.scaled(Rational(1, 2));
    return MetricArcDiagram(f2, {{zero, len0}, {half, half + len1}});
  };
  MetricArcDiagram m1 = caravan_with(e1, e2);
  LeafObstructionReport self = leaf_obstruction(m1, m1);
  CHECK(self.matrix == IntMatrix::identity(2));
  CHECK(self.symplectic);

  MetricArcDiagram swapped = caravan_with(e2, e1);
  LeafObstructionReport cross = leaf_obstruction(m1, swapped);
  CHECK(cross.matrix.determinant() == -1);
  CHECK_FALSE(cross.symplectic);
  CHECK(cross.matrix.at(0, 1) == 1);
  CHECK(cross.matrix.at(1, 0) == 1);

  // a diagram reached by recorded slides stays in the symplectic coset
  std::mt19937 rng(53);
  MetricArcDiagram moved = m1;
  int applied = 0;
  for (int attempt = 0; attempt < 40 && applied < 6; ++attempt) {
    int arc = static_cast<int>(rng() % 2);
    End end = (rng() % 2) ? End::Left : End::Right;
    std::optional<End> anchor;
    if (rng() % 2) anchor = (rng() % 2) ? End::Left : End::Right;
    try {
      moved = second_vassiliev_move(moved, arc, end, 1 - arc, anchor).first;
      ++applied;
    } catch (const caravan::InvalidInputError&) {
    } catch (const caravan::InvalidMoveError&) {
    }
  }
  REQUIRE(applied >= 1);
  LeafObstructionReport related = leaf_obstruction(m1, moved);
  CHECK(related.symplectic);

  // mismatched lattices are a precondition failure
  MetricArcDiagram scaled = caravan_with(e1.scaled(2), e2);
  CHECK_THROWS_AS(leaf_obstruction(m1, scaled), caravan::DomainError);
}

TEST_CASE("retarget_lengths") {
  auto f = qf();
  MetricArcDiagram m = diag(f, {{0, 2}, {1, 3}});
  // scaling both lengths by 2 reorders nothing here? (0,4),(1,5): order
  // preserved: 0 < 1 < 4 < 5 keeps the same matching but a different pattern
  // sequence; use a mild retarget instead.
  auto ok = retarget_lengths(m, {rq(f, Rational(9, 4)), rq(f, 2)});
  CHECK(ok.length(0).formally_equal(rq(f, Rational(9, 4))));
  CHECK(ok.induced_matching() == m.induced_matching());

  // pushing arc 0's right end past arc 1's right end changes the order
  CHECK_THROWS_AS(retarget_lengths(m, {rq(f, 4), rq(f, 2)}), caravan::InvalidRetargetError);
  CHECK_THROWS_AS(retarget_lengths(m, {rq(f, -1), rq(f, 2)}), caravan::InvalidInputError);

  // replacing (e1, e2) by (e1+e2, e2) needs room: disjoint arcs admit it
  auto sym = make_field({"e1", "e2"}, {Rational(1), Rational(2)});
  RealValue e1 = RealValue::basis(sym, 0);
  RealValue e2 = RealValue::basis(sym, 1);
  RealValue base = e1.scaled(10);
  MetricArcDiagram wide(sym, {{RealValue::zero(sym), e1}, {base, base + e2}});
  auto moved = retarget_lengths(wide, {e1 + e2, e2});
  CHECK(moved.induced_matching() == wide.induced_matching());
  CHECK(moved.length(0).formally_equal(e1 + e2));
}

TEST_CASE("empty diagram normalizes to itself") {
  auto f = qf();
  MetricArcDiagram empty(f, {});
  NormalizeResult result = caravan_normalize(empty);
  CHECK(result.diagram.arc_count() == 0);
  CHECK(result.matrix.size() == 0);
}
