#pragma once

#include <stdexcept>
#include <string>

namespace axiflow {

/// An endpoint second derivative h''(0) or h''(pi) is not positive: the
/// surface is flat (or worse) at an axis point.
class AxisDegeneracyError : public std::runtime_error {
 public:
  AxisDegeneracyError(const std::string& what, double h2_0, double h2_pi)
      : std::runtime_error(what), h2_0_(h2_0), h2_pi_(h2_pi) {}
  double h2_0() const { return h2_0_; }
  double h2_pi() const { return h2_pi_; }

 private:
  double h2_0_;
  double h2_pi_;
};

/// 2 d^2 h + (h'/sin)^2 fell to the floor at an interior node.
class PinchError : public std::runtime_error {
 public:
  PinchError(const std::string& what, int node) : std::runtime_error(what), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

}  // namespace axiflow
