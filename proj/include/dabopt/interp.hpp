#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dabopt {

// Set whenever a lookup falls outside a table and the result was clamped to the edge.
struct ClampFlag {
  bool clamped{false};
  void raise() { clamped = true; }
};

// Piecewise-linear lookup y(x) over strictly ascending x. Never extrapolates.
class Table1D {
 public:
  Table1D() = default;
  Table1D(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size() || x_.empty()) throw std::invalid_argument("Table1D: size mismatch or empty");
    for (std::size_t k = 1; k < x_.size(); ++k)
      if (!(x_[k] > x_[k - 1])) throw std::invalid_argument("Table1D: independent variable not strictly increasing");
  }

  bool empty() const { return x_.empty(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

  bool y_monotone_nondecreasing() const {
    return std::is_sorted(y_.begin(), y_.end());
  }

  double operator()(double x, ClampFlag* flag = nullptr) const {
    if (x_.size() == 1) return y_.front();
    if (x <= x_.front()) {
      if (x < x_.front() && flag) flag->raise();
      return y_.front();
    }
    if (x >= x_.back()) {
      if (x > x_.back() && flag) flag->raise();
      return y_.back();
    }
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t k = static_cast<std::size_t>(it - x_.begin());
    const double w = (x - x_[k - 1]) / (x_[k] - x_[k - 1]);
    return y_[k - 1] + w * (y_[k] - y_[k - 1]);
  }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

// Family of curves y(x) indexed by a parameter p (e.g. junction temperature):
// interpolates along x on the two bracketing curves, then linearly in p.
class CurveFamily {
 public:
  CurveFamily() = default;

  void add(double p, Table1D curve) {
    if (!params_.empty() && !(p > params_.back()))
      throw std::invalid_argument("CurveFamily: parameter values must be strictly increasing");
    params_.push_back(p);
    curves_.push_back(std::move(curve));
  }

  bool empty() const { return curves_.empty(); }
  const std::vector<double>& params() const { return params_; }
  const std::vector<Table1D>& curves() const { return curves_; }

  double operator()(double p, double x, ClampFlag* flag = nullptr) const {
    if (curves_.empty()) throw std::logic_error("CurveFamily: empty");
    if (curves_.size() == 1 || p <= params_.front()) {
      if (p < params_.front() && flag) flag->raise();
      return curves_.front()(x, flag);
    }
    if (p >= params_.back()) {
      if (p > params_.back() && flag) flag->raise();
      return curves_.back()(x, flag);
    }
    const auto it = std::upper_bound(params_.begin(), params_.end(), p);
    const std::size_t k = static_cast<std::size_t>(it - params_.begin());
    const double w = (p - params_[k - 1]) / (params_[k] - params_[k - 1]);
    const double lo = curves_[k - 1](x, flag);
    const double hi = curves_[k](x, flag);
    return lo + w * (hi - lo);
  }

 private:
  std::vector<double> params_;
  std::vector<Table1D> curves_;
};

}  // namespace dabopt
