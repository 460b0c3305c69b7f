#pragma once

#include <stdexcept>
#include <string>

namespace qcafqmc {

class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, const std::string& code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace qcafqmc
