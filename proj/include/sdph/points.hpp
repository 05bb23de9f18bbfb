#pragma once

namespace sdph {

// A 2D diagram point (birth, death) carrying its persistence weight.
struct WeightedPoint {
  double x = 0.0;
  double y = 0.0;
  double w = 1.0;
};

}  // namespace sdph
