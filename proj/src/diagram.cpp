#include "sdph/diagram.hpp"

#include <cmath>

namespace sdph {

std::string to_string(Quadrant q) {
  switch (q) {
    case Quadrant::PH0SW: return "PH0SW";
    case Quadrant::PH0NW: return "PH0NW";
    case Quadrant::PH1SW: return "PH1SW";
    case Quadrant::PH1NW: return "PH1NW";
    case Quadrant::PH1NE: return "PH1NE";
    case Quadrant::PH2NW: return "PH2NW";
    case Quadrant::PH2NE: return "PH2NE";
  }
  return "?";
}

Quadrant quadrant_from_string(const std::string& s) {
  if (s == "PH0SW") return Quadrant::PH0SW;
  if (s == "PH0NW") return Quadrant::PH0NW;
  if (s == "PH1SW") return Quadrant::PH1SW;
  if (s == "PH1NW") return Quadrant::PH1NW;
  if (s == "PH1NE") return Quadrant::PH1NE;
  if (s == "PH2NW") return Quadrant::PH2NW;
  if (s == "PH2NE") return Quadrant::PH2NE;
  throw Error("unknown quadrant: " + s);
}

QuadrantPoint quadrant_of(const PersistencePoint& point) {
  if (point.essential)
    throw EssentialPoint("essential points carry no quadrant pairing");
  if (point.birth == 0.0 || point.death == 0.0)
    throw ZeroBoundary("birth/death of exactly 0 has no sign quadrant");

  const bool bneg = point.birth < 0.0;
  const bool dneg = point.death < 0.0;
  QuadrantPoint qp;
  qp.birth = point.birth;
  qp.death = point.death;
  qp.degree = point.degree;
  qp.size1 = std::abs(point.birth);
  qp.size2 = std::abs(point.death);
  qp.weight = point.death - point.birth;

  switch (point.degree) {
    case 0:
      if (bneg && dneg) qp.quadrant = Quadrant::PH0SW;       // (-r0, -r1)
      else if (bneg) qp.quadrant = Quadrant::PH0NW;          // (-r0, g1)
      else
        throw ImpossibleQuadrant("degree-0 NE is excluded by SDPH theory");
      break;
    case 1:
      if (bneg && dneg) qp.quadrant = Quadrant::PH1SW;       // (-r1, -r2)
      else if (bneg) qp.quadrant = Quadrant::PH1NW;          // (-r1, g2)
      else qp.quadrant = Quadrant::PH1NE;                    // (g1, g2)
      break;
    case 2:
      if (bneg && dneg)
        throw ImpossibleQuadrant("degree-2 SW is excluded by SDPH theory");
      else if (bneg) qp.quadrant = Quadrant::PH2NW;          // (-r2, g3)
      else qp.quadrant = Quadrant::PH2NE;                    // (g2, g3)
      break;
    default:
      throw ImpossibleQuadrant("degree must be 0, 1, or 2");
  }
  return qp;
}

double aspect_ratio(const QuadrantPoint& qp, AspectRatioKind kind) {
  switch (kind) {
    case AspectRatioKind::Undulation:
      if (qp.quadrant != Quadrant::PH0SW)
        throw WrongQuadrant("undulation ratio is defined on PH0 SW");
      if (qp.size1 <= 0.0) throw DegenerateDenominator("r0 must be > 0");
      return 1.0 - qp.size2 / qp.size1;  // 1 - r1/r0
    case AspectRatioKind::Loop:
      if (qp.quadrant != Quadrant::PH1NW)
        throw WrongQuadrant("loop ratio is defined on PH1 NW");
      if (qp.size1 <= 0.0) throw DegenerateDenominator("r1 must be > 0");
      return qp.size2 / qp.size1;  // g2 / r1
    case AspectRatioKind::Waviness:
      if (qp.quadrant != Quadrant::PH1NE)
        throw WrongQuadrant("waviness ratio is defined on PH1 NE");
      if (qp.size2 <= 0.0) throw DegenerateDenominator("g2 must be > 0");
      return 1.0 - qp.size1 / qp.size2;  // 1 - g1/g2
  }
  throw Error("unreachable");
}

Diagram filter_persistence(const Diagram& diagram, double tau) {
  if (tau < 0.0) throw Error("persistence threshold must be >= 0");
  Diagram out = diagram;
  out.points.clear();
  for (const PersistencePoint& p : diagram.points) {
    if (p.essential || p.persistence() >= tau) out.points.push_back(p);
  }
  return out;
}

Diagram restrict_to_ball(const Diagram& diagram, const Ellipsoid& ball) {
  Diagram out = diagram;
  out.points.clear();
  for (const PersistencePoint& p : diagram.points) {
    if (p.essential) continue;
    if (p.birth_cell.x < 0 || p.death_cell.x < 0)
      throw MissingAnchors("restrict_to_ball requires cell anchors");
    if (ball.contains(p.birth_cell) && ball.contains(p.death_cell))
      out.points.push_back(p);
  }
  return out;
}

}  // namespace sdph
