#include "css/error.hpp"

namespace css {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::UnknownProperty: return "UnknownProperty";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::UnitMismatch: return "UnitMismatch";
    case ErrorCode::UnknownUnit: return "UnknownUnit";
    case ErrorCode::InexactArithmetic: return "InexactArithmetic";
    case ErrorCode::DuplicateSkillId: return "DuplicateSkillId";
    case ErrorCode::DescriptorInvalid: return "DescriptorInvalid";
    case ErrorCode::UnknownSkill: return "UnknownSkill";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::WrongState: return "WrongState";
    case ErrorCode::UnknownParameter: return "UnknownParameter";
    case ErrorCode::NotWritable: return "NotWritable";
    case ErrorCode::UnsupportedCheck: return "UnsupportedCheck";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::HandshakeRequired: return "HandshakeRequired";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::RemoteError: return "RemoteError";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::ConnectionLost: return "ConnectionLost";
    case ErrorCode::UnknownCapKey: return "UnknownCapKey";
    case ErrorCode::NoFeasibleCombination: return "NoFeasibleCombination";
    case ErrorCode::OfferExpired: return "OfferExpired";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoMatchForStep: return "NoMatchForStep";
    case ErrorCode::UnboundRequiredParameter: return "UnboundRequiredParameter";
    case ErrorCode::StepFailedNoAlternative: return "StepFailedNoAlternative";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string describe_syntax(std::size_t position,
                            const std::vector<std::string>& expected,
                            const std::string& found) {
  std::string msg = "syntax error at position " + std::to_string(position);
  if (!expected.empty()) {
    msg += ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
  }
  msg += found.empty() ? " but reached end of input" : " but found '" + found + "'";
  return msg;
}

}  // namespace

SyntaxError::SyntaxError(std::size_t position, std::vector<std::string> expected,
                         const std::string& found)
    : Error(ErrorCode::SyntaxError, describe_syntax(position, expected, found)),
      position_(position),
      expected_(std::move(expected)) {}

}  // namespace css
