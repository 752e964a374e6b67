#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <mismatch/status.h>

namespace mismatch {

class Error : public std::runtime_error {
 public:
  Error(mm_status code, std::string msg)
      : std::runtime_error(std::move(msg)), code_(code) {}
  mm_status code() const noexcept { return code_; }

 private:
  mm_status code_;
};

[[noreturn]] inline void raise(mm_status code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, mm_status code, const std::string& msg) {
  if (!cond) raise(code, msg);
}

}  // namespace mismatch
