#pragma once

// Carries the first exception thrown inside an OpenMP region out of it.

#include <exception>
#include <mutex>

namespace fracbloch::detail {

class ExceptionRelay {
 public:
  template <class F>
  void run(F&& body) noexcept {
    try {
      body();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }

  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

}  // namespace fracbloch::detail
