#pragma once

namespace onenorm {

// Accumulates in long double with Neumaier compensation on top, so sums over
// N^4 terms are reproducible to well below 1e-12 regardless of magnitude mix.
class AccurateSum {
 public:
  void add(long double x) {
    const long double t = sum_ + x;
    if ((sum_ >= 0 ? sum_ : -sum_) >= (x >= 0 ? x : -x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  AccurateSum& operator+=(long double x) {
    add(x);
    return *this;
  }
  double value() const { return static_cast<double>(sum_ + comp_); }

 private:
  long double sum_ = 0.0L;
  long double comp_ = 0.0L;
};

}  // namespace onenorm
