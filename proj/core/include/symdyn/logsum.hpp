#pragma once

#include <cmath>
#include <limits>

namespace symdyn {

// Sum of exponentials e^{x_1} + e^{x_2} + ... kept as e^{shift} * (sum + comp) with
// Neumaier compensation. Exact for integer-valued sums below 2^53 when all x are 0.
class LogSum {
 public:
  void add_log(double x) {
    if (std::isinf(x) && x < 0) return;
    if (empty_) {
      shift_ = x;
      sum_ = 1.0;
      comp_ = 0.0;
      empty_ = false;
      return;
    }
    if (x > shift_ + kRescale) rescale(x);
    add_raw(std::exp(x - shift_));
  }

  void merge(const LogSum& other) {
    if (other.empty_) return;
    if (empty_) {
      *this = other;
      return;
    }
    if (other.shift_ > shift_ + kRescale) rescale(other.shift_);
    double f = std::exp(other.shift_ - shift_);
    add_raw(other.sum_ * f);
    add_raw(other.comp_ * f);
  }

  bool empty() const noexcept { return empty_; }
  double log() const {
    if (empty_) return -std::numeric_limits<double>::infinity();
    double s = sum_ + comp_;
    if (s <= 0.0) return -std::numeric_limits<double>::infinity();
    return shift_ + std::log(s);
  }
  double value() const { return empty_ ? 0.0 : std::exp(log()); }

 private:
  static constexpr double kRescale = 300.0;

  void rescale(double new_shift) {
    double f = std::exp(shift_ - new_shift);
    sum_ *= f;
    comp_ *= f;
    shift_ = new_shift;
  }
  void add_raw(double v) {
    double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }

  bool empty_ = true;
  double shift_ = 0.0;
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace symdyn
