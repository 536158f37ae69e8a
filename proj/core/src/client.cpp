#include "css/client.hpp"

namespace css {

SkillClient::SkillClient(std::unique_ptr<LineChannel> channel, std::chrono::milliseconds timeout)
    : channel_(std::move(channel)), timeout_(timeout) {
  receiver_ = std::thread([this] { receive_loop(); });
}

SkillClient::~SkillClient() {
  close();
  if (receiver_.joinable()) receiver_.join();
}

void SkillClient::receive_loop() {
  while (auto line = channel_->receive()) {
    Message message;
    try {
      message = decode(*line);
    } catch (const ParseError&) {
      continue;
    }
    std::lock_guard lock(mutex_);
    if (message.kind == MessageKind::Event) {
      events_.push_back(std::move(message));
      events_ready_.notify_all();
      continue;
    }
    auto it = pending_.find(message.correlationId);
    if (it == pending_.end()) continue;
    it->second.set_value(std::move(message));
    pending_.erase(it);
  }
  std::lock_guard lock(mutex_);
  connected_ = false;
  for (auto& [id, promise] : pending_) {
    promise.set_exception(std::make_exception_ptr(
        Error(ErrorCode::ConnectionLost, "connection closed before response to " + id)));
  }
  pending_.clear();
  events_ready_.notify_all();
}

Message SkillClient::exchange(MessageKind kind, json payload,
                              std::optional<std::chrono::milliseconds> timeout) {
  std::string id;
  std::future<Message> reply;
  {
    std::lock_guard lock(mutex_);
    if (!connected_) throw Error(ErrorCode::ConnectionLost, "not connected");
    id = "c-" + std::to_string(next_id_++);
    reply = pending_[id].get_future();
  }
  try {
    channel_->send(encode({kind, id, std::move(payload), std::nullopt}));
  } catch (const Error&) {
    std::lock_guard lock(mutex_);
    pending_.erase(id);
    throw;
  }
  if (reply.wait_for(timeout.value_or(timeout_)) != std::future_status::ready) {
    std::lock_guard lock(mutex_);
    pending_.erase(id);
    throw Error(ErrorCode::Timeout,
                "no response to " + std::string(to_string(kind)) + " (" + id + ")");
  }
  return reply.get();
}

json SkillClient::invoke(MessageKind kind, json payload,
                         std::optional<std::chrono::milliseconds> timeout) {
  Message reply = exchange(kind, std::move(payload), timeout);
  if (reply.kind == MessageKind::Error) {
    throw RemoteError(reply.payload.value("code", std::string("RemoteError")),
                      reply.payload.value("message", std::string()));
  }
  return reply.payload;
}

json SkillClient::hello(const std::string& clientName) {
  return invoke(MessageKind::Hello,
                {{"client", clientName}, {"version", std::string(kProtocolVersion)}});
}

json SkillClient::list_skills() { return invoke(MessageKind::ListSkills, json::object()); }

json SkillClient::describe(const std::string& localRuntimeId) {
  return invoke(MessageKind::Describe, {{"localRuntimeId", localRuntimeId}});
}

json SkillClient::read(const std::string& localRuntimeId) {
  return invoke(MessageKind::Read, {{"localRuntimeId", localRuntimeId}});
}

void SkillClient::write(const std::string& localRuntimeId, const ParameterMap& values) {
  invoke(MessageKind::Write,
         {{"localRuntimeId", localRuntimeId}, {"values", parameters_to_json(values)}});
}

State SkillClient::command(const std::string& localRuntimeId, Command command) {
  json result = invoke(MessageKind::Command, {{"localRuntimeId", localRuntimeId},
                                              {"command", std::string(to_string(command))}});
  auto state = parse_state(result.at("newState").get<std::string>());
  if (!state) throw Error(ErrorCode::InvalidRequest, "server reported an unknown state");
  return *state;
}

FeasibilityResult SkillClient::feasibility(const std::string& localRuntimeId,
                                           const ParameterMap& inputs) {
  json result = invoke(MessageKind::Feasibility,
                       {{"localRuntimeId", localRuntimeId}, {"inputs", parameters_to_json(inputs)}});
  FeasibilityResult out;
  out.feasible = result.at("feasible").get<bool>();
  if (auto r = result.find("reason"); r != result.end() && r->is_string()) {
    out.reason = r->get<std::string>();
  }
  if (auto e = result.find("estimates"); e != result.end()) {
    for (auto it = e->begin(); it != e->end(); ++it) {
      out.estimates.emplace(it.key(), Decimal::parse(it->get<std::string>()));
    }
  }
  return out;
}

State SkillClient::subscribe(const std::string& localRuntimeId, bool active) {
  json result =
      invoke(MessageKind::Subscribe, {{"localRuntimeId", localRuntimeId}, {"active", active}});
  auto state = parse_state(result.at("state").get<std::string>());
  if (!state) throw Error(ErrorCode::InvalidRequest, "server reported an unknown state");
  return *state;
}

std::optional<Message> SkillClient::next_event(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  events_ready_.wait_for(lock, timeout, [this] { return !events_.empty() || !connected_; });
  if (events_.empty()) return std::nullopt;
  Message event = std::move(events_.front());
  events_.pop_front();
  return event;
}

bool SkillClient::connected() const {
  std::lock_guard lock(mutex_);
  return connected_;
}

void SkillClient::close() { channel_->close(); }

std::unique_ptr<SkillClient> connect_client(const Endpoint& endpoint,
                                            std::chrono::milliseconds timeout) {
  auto client = std::make_unique<SkillClient>(connect_tcp(endpoint), timeout);
  client->hello();
  return client;
}

}  // namespace css
