#include "css/protocol.hpp"

namespace css {
namespace {

constexpr std::pair<MessageKind, std::string_view> kKinds[] = {
    {MessageKind::Hello, "hello"},
    {MessageKind::ListSkills, "list_skills"},
    {MessageKind::Describe, "describe"},
    {MessageKind::Read, "read"},
    {MessageKind::Write, "write"},
    {MessageKind::Command, "command"},
    {MessageKind::Feasibility, "feasibility"},
    {MessageKind::Subscribe, "subscribe"},
    {MessageKind::Result, "result"},
    {MessageKind::Error, "error"},
    {MessageKind::Event, "event"},
};

}  // namespace

std::string_view to_string(MessageKind kind) {
  for (const auto& [k, name] : kKinds) {
    if (k == kind) return name;
  }
  return "?";
}

std::optional<MessageKind> parse_message_kind(std::string_view text) {
  for (const auto& [k, name] : kKinds) {
    if (name == text) return k;
  }
  return std::nullopt;
}

bool is_request(MessageKind kind) {
  return kind != MessageKind::Result && kind != MessageKind::Error && kind != MessageKind::Event;
}

std::string encode(const Message& message) {
  json j = json::object();
  j["kind"] = to_string(message.kind);
  j["correlationId"] = message.correlationId;
  j["payload"] = message.payload;
  if (message.seq) j["seq"] = *message.seq;
  return j.dump(-1, ' ', false, json::error_handler_t::replace) + "\n";
}

Message decode(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.remove_suffix(1);
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte > 0 ? e.byte - 1 : 0, std::string("malformed message: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(0, "message must be a JSON object");
  Message m;
  auto kind = j.find("kind");
  if (kind == j.end() || !kind->is_string()) throw ParseError(0, "message has no 'kind'");
  auto parsed = parse_message_kind(kind->get<std::string>());
  if (!parsed) throw ParseError(0, "unknown message kind '" + kind->get<std::string>() + "'");
  m.kind = *parsed;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "kind") continue;
    if (key == "correlationId") {
      if (!it->is_string()) throw ParseError(0, "'correlationId' must be a string");
      m.correlationId = it->get<std::string>();
    } else if (key == "payload") {
      if (!it->is_object()) throw ParseError(0, "'payload' must be an object");
      m.payload = *it;
    } else if (key == "seq") {
      if (!it->is_number_integer()) throw ParseError(0, "'seq' must be an integer");
      m.seq = it->get<std::int64_t>();
    } else {
      throw ParseError(0, "unknown message field '" + key + "'");
    }
  }
  return m;
}

Message make_result(std::string correlationId, json payload) {
  return {MessageKind::Result, std::move(correlationId), std::move(payload), std::nullopt};
}

Message make_error(std::string correlationId, std::string_view code, const std::string& message) {
  return {MessageKind::Error, std::move(correlationId),
          json{{"code", std::string(code)}, {"message", message}}, std::nullopt};
}

json literal_to_json(const Literal& value) {
  switch (value.type()) {
    case Datatype::Integer: {
      const Decimal& d = value.number();
      try {
        return d.to_int64();
      } catch (const Error&) {
        return d.to_string();
      }
    }
    case Datatype::Real: return value.number().to_string();
    case Datatype::Enum: return value.symbol();
    case Datatype::Boolean: return value.flag();
  }
  return nullptr;
}

Literal literal_from_json(const json& value, Datatype type) {
  auto mismatch = [&] {
    return Error(ErrorCode::TypeMismatch,
                 "'" + value.dump() + "' is not a valid " + std::string(to_string(type)));
  };
  auto as_decimal = [&]() -> std::optional<Decimal> {
    if (value.is_number_integer()) return Decimal::from_int(value.get<std::int64_t>());
    if (value.is_number_float()) return Decimal::try_parse(value.dump());
    if (value.is_string()) return Decimal::try_parse(value.get<std::string>());
    return std::nullopt;
  };
  switch (type) {
    case Datatype::Integer: {
      auto d = as_decimal();
      if (!d || !d->is_integer()) throw mismatch();
      return Literal::integer(*d);
    }
    case Datatype::Real: {
      auto d = as_decimal();
      if (!d) throw mismatch();
      return Literal::real(*d);
    }
    case Datatype::Enum:
      if (!value.is_string()) throw mismatch();
      return Literal::symbol(value.get<std::string>());
    case Datatype::Boolean:
      if (!value.is_boolean()) throw mismatch();
      return Literal::boolean(value.get<bool>());
  }
  throw mismatch();
}

json parameters_to_json(const ParameterMap& values) {
  json j = json::object();
  for (const auto& [id, value] : values) j[id] = literal_to_json(value);
  return j;
}

}  // namespace css
