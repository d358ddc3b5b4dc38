#include "qbiject/schedule.hpp"

#include "qbiject/error.hpp"

namespace qbiject {

const mpz_class& HeightSchedule::X(unsigned long t) const {
  if (memo_.empty()) {
    memo_.emplace_back(1);
    memo_.emplace_back(c_);
  }
  while (memo_.size() <= t) {
    // X(t+1) = c t X(t)
    const unsigned long s = memo_.size() - 1;
    memo_.push_back(memo_.back() * c_ * s);
  }
  return memo_[t];
}

mpz_class HeightSchedule::B(unsigned long t) const {
  if (t == 0) throw Error(Errc::invalid_argument, "B(t) needs t >= 1");
  return 4 * t * X(t);
}

}  // namespace qbiject
