#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tmsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  std::size_t line, column;
  ParseError(const std::string& msg, std::size_t line_, std::size_t col_)
      : Error("line " + std::to_string(line_) + ", column " + std::to_string(col_) + ": " + msg),
        line(line_),
        column(col_) {}
};

struct ValidationError : Error { using Error::Error; };
struct DecodeError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NonConvergence : Error { using Error::Error; };
struct StepUnderflow : Error { using Error::Error; };
struct BlowUp : Error { using Error::Error; };
struct UnknownKernel : Error { using Error::Error; };
struct ArityMismatch : Error { using Error::Error; };
struct NotNearInteger : Error { using Error::Error; };
struct BadDelta : Error { using Error::Error; };
struct NorthPole : Error { using Error::Error; };

struct NotNearConfiguration : Error {
  long step;  // -1 when not raised from an iteration
  NotNearConfiguration(const std::string& msg, long step_ = -1)
      : Error(step_ >= 0 ? msg + " (step " + std::to_string(step_) + ")" : msg), step(step_) {}
};

struct ContractViolation : Error {
  long window;
  ContractViolation(const std::string& msg, long window_)
      : Error(msg + " (window " + std::to_string(window_) + ")"), window(window_) {}
};

}  // namespace tmsim
