#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "css/error.hpp"
#include "css/literal.hpp"

namespace css {

using json = nlohmann::json;

inline constexpr std::string_view kProtocolVersion = "css/1";
inline constexpr std::uint16_t kDefaultPort = 7007;

enum class MessageKind {
  Hello,
  ListSkills,
  Describe,
  Read,
  Write,
  Command,
  Feasibility,
  Subscribe,
  Result,
  Error,
  Event,
};

std::string_view to_string(MessageKind kind);
std::optional<MessageKind> parse_message_kind(std::string_view text);
bool is_request(MessageKind kind);

/// One protocol line: {"kind", "correlationId", "payload", "seq"}. seq is
/// only carried by events and trace records.
struct Message {
  MessageKind kind = MessageKind::Hello;
  std::string correlationId;
  json payload = json::object();
  std::optional<std::int64_t> seq;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Single-line JSON object terminated by LF.
std::string encode(const Message& message);

/// Strict decode of one line (a trailing LF/CRLF is ignored). Throws
/// ParseError with the byte offset of the problem.
Message decode(std::string_view line);

Message make_result(std::string correlationId, json payload);
Message make_error(std::string correlationId, std::string_view code, const std::string& message);

// Literal values on the wire and in documents: integers as JSON integers,
// reals as decimal strings (JSON numbers are accepted on input), enum values
// as strings, booleans as JSON booleans.

json literal_to_json(const Literal& value);
/// Throws TypeMismatch.
Literal literal_from_json(const json& value, Datatype type);
json parameters_to_json(const ParameterMap& values);

}  // namespace css
