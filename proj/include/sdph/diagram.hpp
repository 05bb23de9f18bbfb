#pragma once

#include <string>
#include <vector>

#include "sdph/cubical.hpp"

namespace sdph {

// The seven sign/degree classes of signed-distance diagrams and the
// critical-size pairings they carry:
//   PH0 SW (-r0,-r1)   PH0 NW (-r0,g1)
//   PH1 SW (-r1,-r2)   PH1 NW (-r1,g2)   PH1 NE (g1,g2)
//   PH2 NW (-r2,g3)    PH2 NE (g2,g3)
enum class Quadrant { PH0SW, PH0NW, PH1SW, PH1NW, PH1NE, PH2NW, PH2NE };

std::string to_string(Quadrant q);
Quadrant quadrant_from_string(const std::string& s);

struct QuadrantPoint {
  Quadrant quadrant;
  double size1 = 0.0;  // |birth|
  double size2 = 0.0;  // |death|
  double birth = 0.0;
  double death = 0.0;
  int degree = 0;
  double weight = 0.0;  // persistence, death - birth
};

enum class AspectRatioKind { Undulation, Loop, Waviness };

// Classifies a finite diagram point into one of the seven pairings.
// Throws EssentialPoint, ZeroBoundary, or ImpossibleQuadrant.
QuadrantPoint quadrant_of(const PersistencePoint& point);

// 1 - r1/r0 on PH0 SW, g2/r1 on PH1 NW, 1 - g1/g2 on PH1 NE.
double aspect_ratio(const QuadrantPoint& qp, AspectRatioKind kind);

// Keeps points with persistence >= tau; essential points are always kept.
Diagram filter_persistence(const Diagram& diagram, double tau = 0.5);

// Axis-aligned ellipsoid with one horizontal and one vertical radius (the
// local-analysis sampling ball).
struct Ellipsoid {
  double cx = 0.0, cy = 0.0, cz = 0.0;
  double r_xy = 0.0;
  double r_z = 0.0;

  bool contains(const Voxel& v) const {
    const double dx = v.x - cx, dy = v.y - cy, dz = v.z - cz;
    return (dx * dx + dy * dy) / (r_xy * r_xy) + (dz * dz) / (r_z * r_z) <=
           1.0;
  }
};

// Keeps finite points whose birth and death anchors both lie in the ball;
// essential points are dropped. Throws MissingAnchors.
Diagram restrict_to_ball(const Diagram& diagram, const Ellipsoid& ball);

}  // namespace sdph
