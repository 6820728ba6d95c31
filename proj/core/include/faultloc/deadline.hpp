// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <optional>

#include "faultloc/error.hpp"

namespace faultloc {

/// Wall-clock budget checked cooperatively at oracle-call boundaries.
/// A default-constructed deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;

  static Deadline after(std::chrono::duration<double> budget) {
    Deadline d;
    d.at_ = Clock::now() +
            std::chrono::duration_cast<Clock::duration>(budget);
    return d;
  }

  bool bounded() const noexcept { return at_.has_value(); }

  bool expired() const noexcept { return at_ && Clock::now() >= *at_; }

  void check() const {
    if (expired()) throw TimeoutError("time budget exhausted");
  }

 private:
  std::optional<Clock::time_point> at_;
};

}  // namespace faultloc
