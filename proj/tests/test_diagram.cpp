#include <cmath>

#include "doctest.h"
#include "sdph/diagram.hpp"
#include "sdph/phantom.hpp"
#include "sdph/rng.hpp"
#include "sdph/sdt.hpp"

using namespace sdph;

namespace {

PersistencePoint finite_point(int degree, double birth, double death) {
  PersistencePoint p;
  p.degree = degree;
  p.birth = birth;
  p.death = death;
  p.birth_cell = Voxel{0, 0, 0};
  p.death_cell = Voxel{1, 0, 0};
  return p;
}

}  // namespace

TEST_CASE("the seven pairings") {
  const auto p0sw = quadrant_of(finite_point(0, -3, -1));
  CHECK(p0sw.quadrant == Quadrant::PH0SW);
  CHECK(p0sw.size1 == 3.0);  // r0
  CHECK(p0sw.size2 == 1.0);  // r1
  CHECK(p0sw.weight == 2.0);

  const auto p1nw = quadrant_of(finite_point(1, -1, 2));
  CHECK(p1nw.quadrant == Quadrant::PH1NW);
  CHECK(p1nw.size1 == 1.0);  // r1
  CHECK(p1nw.size2 == 2.0);  // g2
  CHECK(p1nw.weight == 3.0);

  const auto p2ne = quadrant_of(finite_point(2, 1, 3));
  CHECK(p2ne.quadrant == Quadrant::PH2NE);
  CHECK(p2ne.size1 == 1.0);  // g2
  CHECK(p2ne.size2 == 3.0);  // g3
  CHECK(p2ne.weight == 2.0);

  CHECK(quadrant_of(finite_point(0, -3, 1)).quadrant == Quadrant::PH0NW);
  CHECK(quadrant_of(finite_point(1, -3, -1)).quadrant == Quadrant::PH1SW);
  CHECK(quadrant_of(finite_point(1, 1, 2)).quadrant == Quadrant::PH1NE);
  CHECK(quadrant_of(finite_point(2, -1, 2)).quadrant == Quadrant::PH2NW);
}

TEST_CASE("quadrant errors") {
  PersistencePoint essential;
  essential.degree = 0;
  essential.birth = -1.0;
  essential.essential = true;
  CHECK_THROWS_AS(quadrant_of(essential), EssentialPoint);

  CHECK_THROWS_AS(quadrant_of(finite_point(0, 0.0, 1.0)), ZeroBoundary);
  CHECK_THROWS_AS(quadrant_of(finite_point(1, -1.0, 0.0)), ZeroBoundary);
  CHECK_THROWS_AS(quadrant_of(finite_point(0, 1.0, 2.0)),
                  ImpossibleQuadrant);
  CHECK_THROWS_AS(quadrant_of(finite_point(2, -2.0, -1.0)),
                  ImpossibleQuadrant);
  CHECK_THROWS_AS(quadrant_of(finite_point(3, -2.0, -1.0)),
                  ImpossibleQuadrant);
}

TEST_CASE("the seven-way classification is exhaustive and exclusive") {
  Rng rng(99);
  int seen[7] = {0};
  for (int trial = 0; trial < 2000; ++trial) {
    const int degree = static_cast<int>(rng.index(3));
    double birth = rng.uniform(-5.0, 5.0);
    double death = rng.uniform(-5.0, 5.0);
    if (death < birth) std::swap(birth, death);
    if (birth == 0.0 || death == 0.0 || birth == death) continue;
    try {
      const auto qp = quadrant_of(finite_point(degree, birth, death));
      ++seen[static_cast<int>(qp.quadrant)];
      // Round trip: (quadrant, sizes) reconstructs (birth, death).
      const bool bneg = qp.quadrant == Quadrant::PH0SW ||
                        qp.quadrant == Quadrant::PH0NW ||
                        qp.quadrant == Quadrant::PH1SW ||
                        qp.quadrant == Quadrant::PH1NW ||
                        qp.quadrant == Quadrant::PH2NW;
      const bool dneg = qp.quadrant == Quadrant::PH0SW ||
                        qp.quadrant == Quadrant::PH1SW;
      CHECK((bneg ? -qp.size1 : qp.size1) == birth);
      CHECK((dneg ? -qp.size2 : qp.size2) == death);
    } catch (const ImpossibleQuadrant&) {
      // degree-0 NE and degree-2 SW
      CHECK(((degree == 0 && birth > 0) || (degree == 2 && death < 0)));
    }
  }
  for (int q = 0; q < 7; ++q) CHECK(seen[q] > 0);
}

TEST_CASE("aspect ratios") {
  auto p0sw = quadrant_of(finite_point(0, -2, -2 + 1e-12));
  p0sw.size2 = 2.0;  // r0 = r1 = 2
  CHECK(aspect_ratio(p0sw, AspectRatioKind::Undulation) ==
        doctest::Approx(0.0));

  const auto p1nw = quadrant_of(finite_point(1, -2, 4));
  CHECK(aspect_ratio(p1nw, AspectRatioKind::Loop) == 2.0);

  const auto p1ne = quadrant_of(finite_point(1, 3, 3 + 1e-12));
  CHECK(aspect_ratio(p1ne, AspectRatioKind::Waviness) ==
        doctest::Approx(0.0));

  CHECK_THROWS_AS(aspect_ratio(p1nw, AspectRatioKind::Undulation),
                  WrongQuadrant);
  CHECK_THROWS_AS(aspect_ratio(p0sw, AspectRatioKind::Loop), WrongQuadrant);
  CHECK_THROWS_AS(aspect_ratio(p1nw, AspectRatioKind::Waviness),
                  WrongQuadrant);

  QuadrantPoint degenerate = p1nw;
  degenerate.size1 = 0.0;
  CHECK_THROWS_AS(aspect_ratio(degenerate, AspectRatioKind::Loop),
                  DegenerateDenominator);
}

TEST_CASE("persistence filter keeps the boundary") {
  Diagram dg;
  dg.points.push_back(finite_point(0, -1.0, -0.6));  // persistence 0.4
  dg.points.push_back(finite_point(0, -1.0, -0.5));  // persistence 0.5
  dg.points.push_back(finite_point(1, -1.0, 2.0));   // persistence 3.0
  PersistencePoint ess;
  ess.degree = 0;
  ess.birth = -2.0;
  ess.essential = true;
  dg.points.push_back(ess);

  const auto kept = filter_persistence(dg, 0.5);
  REQUIRE(kept.points.size() == 3);
  CHECK(kept.points[0].persistence() == 0.5);
  CHECK(kept.points[1].persistence() == 3.0);
  CHECK(kept.points[2].essential);

  CHECK(filter_persistence(dg, 0.0).points.size() == dg.points.size());
}

TEST_CASE("persistence filter is idempotent and monotone in tau") {
  Rng rng(55);
  Diagram dg;
  for (int i = 0; i < 200; ++i) {
    const double b = rng.uniform(-4.0, 0.0);
    dg.points.push_back(finite_point(1, b, b + rng.uniform(0.0, 3.0)));
  }
  const auto once = filter_persistence(dg, 0.7);
  const auto twice = filter_persistence(once, 0.7);
  CHECK(once.points.size() == twice.points.size());

  std::size_t prev = dg.points.size();
  for (double tau : {0.1, 0.5, 1.0, 2.0}) {
    const std::size_t count = filter_persistence(dg, tau).points.size();
    CHECK(count <= prev);
    prev = count;
  }
}

TEST_CASE("ball restriction checks both anchors") {
  Ellipsoid ball;
  ball.cx = 10;
  ball.cy = 10;
  ball.cz = 5;
  ball.r_xy = 4;
  ball.r_z = 2;

  Diagram dg;
  PersistencePoint inside = finite_point(1, -1, 1);
  inside.birth_cell = Voxel{10, 10, 5};
  inside.death_cell = Voxel{10, 10, 5};
  PersistencePoint out = finite_point(1, -1, 1);
  out.birth_cell = Voxel{10, 10, 5};
  out.death_cell = Voxel{20, 10, 5};
  PersistencePoint ess;
  ess.degree = 0;
  ess.birth = -2.0;
  ess.essential = true;
  ess.birth_cell = Voxel{10, 10, 5};
  dg.points = {inside, out, ess};

  const auto kept = restrict_to_ball(dg, ball);
  REQUIRE(kept.points.size() == 1);
  CHECK(kept.points[0].death_cell == Voxel{10, 10, 5});

  Diagram missing;
  PersistencePoint anchorless = finite_point(1, -1, 1);
  anchorless.birth_cell = Voxel{-1, -1, -1};
  anchorless.death_cell = Voxel{-1, -1, -1};
  missing.points = {anchorless};
  CHECK_THROWS_AS(restrict_to_ball(missing, ball), MissingAnchors);
}

TEST_CASE("a covering set of balls retains every finite point") {
  const auto vol = make_vessel_network(
      default_phantom_spec(PhantomClass::ThinDense, {40, 40, 40}, 13));
  const auto field = signed_distance(vol);
  const auto dg = filter_persistence(persistence(field), 0.5);

  // Balls on an 8-voxel lattice with r_xy = r_z = 48: every finite point of
  // the full diagram is retained by at least one ball.
  std::vector<Ellipsoid> balls;
  for (int cz = 0; cz < 40; cz += 8)
    for (int cy = 0; cy < 40; cy += 8)
      for (int cx = 0; cx < 40; cx += 8) {
        Ellipsoid ball;
        ball.cx = cx;
        ball.cy = cy;
        ball.cz = cz;
        ball.r_xy = 48;
        ball.r_z = 48;
        balls.push_back(ball);
      }
  for (const auto& p : dg.points) {
    if (p.essential) continue;
    bool captured = false;
    for (const auto& ball : balls)
      if (ball.contains(p.birth_cell) && ball.contains(p.death_cell)) {
        captured = true;
        break;
      }
    CHECK(captured);
  }
}
