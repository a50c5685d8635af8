#pragma once

#include <stdexcept>
#include <string>

namespace sepsemi {

/** Failure classes that map onto CLI exit codes. */
enum class ErrorCode {
  invalid_input,    // exit 2: malformed or out-of-domain input
  non_convergence,  // exit 3: a numerical routine did not reach tolerance
};

struct Error : std::runtime_error {
  ErrorCode code;
  Error(ErrorCode c, const std::string& what) : std::runtime_error(what), code(c) {}
};

inline Error invalid_input(const std::string& what) { return Error(ErrorCode::invalid_input, what); }
inline Error non_convergence(const std::string& what) { return Error(ErrorCode::non_convergence, what); }

}  // namespace sepsemi
