#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace css {

enum class ErrorCode {
  NotFound,
  SyntaxError,
  UnknownClass,
  UnknownProperty,
  TypeMismatch,
  UnitMismatch,
  UnknownUnit,
  InexactArithmetic,
  DuplicateSkillId,
  DescriptorInvalid,
  UnknownSkill,
  InvalidTransition,
  PreconditionViolated,
  WrongState,
  UnknownParameter,
  NotWritable,
  UnsupportedCheck,
  ParseError,
  HandshakeRequired,
  UnsupportedVersion,
  InvalidRequest,
  Timeout,
  RemoteError,
  BindFailure,
  ConnectionLost,
  UnknownCapKey,
  NoFeasibleCombination,
  OfferExpired,
  InvalidArgument,
  NoMatchForStep,
  UnboundRequiredParameter,
  StepFailedNoAlternative,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is the
/// stable, machine-readable part; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Expression grammar failure with the byte position and the tokens that
/// would have been accepted there.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, std::vector<std::string> expected,
              const std::string& found);

  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

/// Wire or document decode failure at a byte offset.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::ParseError, message), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Error reported by the remote end of a skill protocol connection. The
/// remote code is kept verbatim; remote_code() maps it back when known.
class RemoteError : public Error {
 public:
  RemoteError(std::string remote_code, const std::string& message)
      : Error(ErrorCode::RemoteError, remote_code + ": " + message),
        remote_code_(std::move(remote_code)),
        remote_message_(message) {}

  const std::string& remote_code_name() const noexcept { return remote_code_; }
  const std::string& remote_message() const noexcept { return remote_message_; }
  bool is(ErrorCode code) const { return remote_code_ == to_string(code); }

 private:
  std::string remote_code_;
  std::string remote_message_;
};

}  // namespace css
