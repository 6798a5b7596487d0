#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tape.hpp"

namespace cspstream {

// Uniform without-replacement sample of a stream. The first s arrivals fill
// the slots; arrival i (1-based, i > s) then replaces a uniform slot with
// probability s/i. After N arrivals every element is present with
// probability s/N. Draws key on the arrival index, the one place where the
// tape is sequential rather than structural.
template <typename T>
class Reservoir {
 public:
  explicit Reservoir(uint64_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("reservoir capacity must be positive");
  }

  void update(const T& e, const RandomTape& tape) {
    ++count_;
    if (count_ <= capacity_) {
      slots_.push_back(e);
      return;
    }
    double pr = static_cast<double>(capacity_) / static_cast<double>(count_);
    if (tape.bernoulli(pr, RandomTape::Ns::Reservoir, count_, 0)) {
      uint64_t i = tape.uniform_int(capacity_, RandomTape::Ns::Reservoir, count_, 1);
      slots_[static_cast<size_t>(i)] = e;
    }
  }

  const std::vector<T>& slots() const { return slots_; }
  uint64_t capacity() const { return capacity_; }
  uint64_t count() const { return count_; }
  uint64_t filled() const { return static_cast<uint64_t>(slots_.size()); }

 private:
  uint64_t capacity_;
  uint64_t count_ = 0;
  std::vector<T> slots_;
};

}  // namespace cspstream
