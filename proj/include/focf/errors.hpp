#pragma once

#include <stdexcept>
#include <string>

namespace focf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Positive definiteness failed; carries the first offending node.
struct NonSPDMetric : Error {
  int i, j;
  NonSPDMetric(int i_, int j_)
      : Error("metric not positive definite at node (" + std::to_string(i_) + "," +
              std::to_string(j_) + ")"),
        i(i_), j(j_) {}
};

struct ChartMismatch : Error {
  ChartMismatch() : Error("fields live on different charts") {}
};

struct NonFiniteField : Error {
  NonFiniteField() : Error("field contains non-finite values") {}
};

struct ValenceOverflow : Error {
  explicit ValenceOverflow(int v) : Error("tensor valence " + std::to_string(v) + " exceeds cap") {}
};

/// Calabi conformal factor h = 1 + (1/2)Lap0 phi lost positivity.
struct PotentialDegenerate : Error {
  PotentialDegenerate() : Error("Calabi potential degenerate: conformal factor <= 0") {}
};

struct RangeEmpty : Error {
  RangeEmpty() : Error("requested time range is empty") {}
};

struct VolumeNonPositive : Error {
  VolumeNonPositive() : Error("volume is not positive") {}
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace focf
