#pragma once

#include <stdexcept>
#include <string>

namespace sdph {

// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SDPH_DEFINE_ERROR(Name)                    \
  struct Name : Error {                            \
    using Error::Error;                            \
  }

// phantom
SDPH_DEFINE_ERROR(BallOutOfBounds);
SDPH_DEFINE_ERROR(TorusOutOfBounds);
SDPH_DEFINE_ERROR(InvalidGeometry);
SDPH_DEFINE_ERROR(DegenerateSpec);

// sdt
SDPH_DEFINE_ERROR(EmptyVolume);

// cubical
SDPH_DEFINE_ERROR(TooLarge);
SDPH_DEFINE_ERROR(InvalidChunking);

// diagram
SDPH_DEFINE_ERROR(EssentialPoint);
SDPH_DEFINE_ERROR(ZeroBoundary);
SDPH_DEFINE_ERROR(ImpossibleQuadrant);
SDPH_DEFINE_ERROR(WrongQuadrant);
SDPH_DEFINE_ERROR(DegenerateDenominator);
SDPH_DEFINE_ERROR(MissingAnchors);

// texture
SDPH_DEFINE_ERROR(TooFewRows);
SDPH_DEFINE_ERROR(InvalidK);
SDPH_DEFINE_ERROR(EmptyPointSet);
SDPH_DEFINE_ERROR(GridMismatch);
SDPH_DEFINE_ERROR(NotSymmetric);
SDPH_DEFINE_ERROR(NegativeDistance);

// mixture
SDPH_DEFINE_ERROR(NotSPD);
SDPH_DEFINE_ERROR(NumericalUnderflow);
SDPH_DEFINE_ERROR(TooFewPoints);
SDPH_DEFINE_ERROR(GridTooCoarse);
SDPH_DEFINE_ERROR(ExcludedQuadrant);

// io / cli
struct FormatError : Error {
  FormatError(const std::string& file, long line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what),
        file(file),
        line(line) {}
  std::string file;
  long line;
};
SDPH_DEFINE_ERROR(ConfigError);

#undef SDPH_DEFINE_ERROR

}  // namespace sdph
