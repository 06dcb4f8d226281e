#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "selfsim/error.hpp"

namespace selfsim {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed intervals, kept sorted and pairwise disjoint.
/// Degenerate intervals (points) are allowed.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  IntervalUnion(std::initializer_list<Interval> parts) : IntervalUnion(std::vector<Interval>(parts)) {}

  explicit IntervalUnion(std::vector<Interval> parts) {
    for (const auto& p : parts)
      if (!(p.lo <= p.hi) || !std::isfinite(p.lo) || !std::isfinite(p.hi))
        throw Error(ErrorKind::InvalidArgument, "interval needs finite lo <= hi");
    std::sort(parts.begin(), parts.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    for (const auto& p : parts) {
      if (!parts_.empty() && p.lo <= parts_.back().hi) {
        parts_.back().hi = std::max(parts_.back().hi, p.hi);
      } else {
        parts_.push_back(p);
      }
    }
  }

  const std::vector<Interval>& parts() const noexcept { return parts_; }
  bool empty() const noexcept { return parts_.empty(); }
  std::size_t size() const noexcept { return parts_.size(); }

  double distance(double x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : parts_) {
      if (x < p.lo) best = std::min(best, p.lo - x);
      else if (x > p.hi) best = std::min(best, x - p.hi);
      else return 0.0;
    }
    return best;
  }

  bool contains(double x, double tol = 0.0) const { return distance(x) <= tol; }

  std::vector<double> endpoints() const {
    std::vector<double> out;
    for (const auto& p : parts_) {
      out.push_back(p.lo);
      out.push_back(p.hi);
    }
    return out;
  }

  friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

 private:
  std::vector<Interval> parts_;
};

}  // namespace selfsim
