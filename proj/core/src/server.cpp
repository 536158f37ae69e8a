#include "css/server.hpp"

#include <condition_variable>
#include <deque>
#include <map>

namespace css {
namespace {

const std::string& require_string(const json& payload, const char* key) {
  auto it = payload.find(key);
  if (it == payload.end() || !it->is_string()) {
    throw Error(ErrorCode::InvalidRequest, std::string("payload field '") + key + "' must be a string");
  }
  return it->get_ref<const std::string&>();
}

const json& require_object(const json& payload, const char* key) {
  static const json empty = json::object();
  auto it = payload.find(key);
  if (it == payload.end()) return empty;
  if (!it->is_object()) {
    throw Error(ErrorCode::InvalidRequest, std::string("payload field '") + key + "' must be an object");
  }
  return *it;
}

json describe_parameter(const ParameterSpec& p) {
  json j{{"paramId", p.paramId},
         {"direction", to_string(p.direction)},
         {"datatype", to_string(p.datatype)}};
  if (p.unit) j["unit"] = *p.unit;
  if (p.defaultValue) j["default"] = literal_to_json(*p.defaultValue);
  if (!p.enumValues.empty()) j["enumValues"] = p.enumValues;
  return j;
}

json describe_skill(const SkillSnapshot& s) {
  json params = json::array();
  for (const auto& p : s.descriptor.parameters) params.push_back(describe_parameter(p));
  return {{"localRuntimeId", s.localRuntimeId},
          {"skillId", s.descriptor.skillId},
          {"name", s.descriptor.name ? json(*s.descriptor.name) : json(nullptr)},
          {"ontologyURL", s.descriptor.capabilityRef},
          {"parameters", params},
          {"feasibilityCheck", s.descriptor.hasFeasibilityCheck},
          {"preconditionCheck", s.descriptor.hasPreconditionCheck},
          {"skillStateMachine", s.descriptor.stateMachineProfile}};
}

json read_payload(const SkillSnapshot& s) {
  return {{"localRuntimeId", s.localRuntimeId},
          {"state", to_string(s.state)},
          {"inputValues", parameters_to_json(s.inputValues)},
          {"outputValues", parameters_to_json(s.outputValues)},
          {"lastError", s.lastError ? json(*s.lastError) : json(nullptr)},
          {"eventSeq", s.eventSeq}};
}

// Decodes wire values against the skill's parameter declarations. Unknown
// and read-only ids pass through untyped so the host reports them.
ParameterMap typed_values(const SkillDescriptor& descriptor, const json& values) {
  ParameterMap out;
  for (auto it = values.begin(); it != values.end(); ++it) {
    if (it.key() == kLocalRuntimeIdName) {
      throw Error(ErrorCode::NotWritable, "LocalRuntimeID is read-only");
    }
    const ParameterSpec* spec = descriptor.find_parameter(it.key());
    if (!spec) {
      throw Error(ErrorCode::UnknownParameter,
                  "skill '" + descriptor.skillId + "' has no parameter '" + it.key() + "'");
    }
    if (spec->direction != Direction::Input) {
      throw Error(ErrorCode::NotWritable, "parameter '" + it.key() + "' is an output");
    }
    out.emplace(it.key(), literal_from_json(*it, spec->datatype));
  }
  return out;
}

}  // namespace

class SkillServer::Session : public std::enable_shared_from_this<SkillServer::Session> {
 public:
  Session(SkillServer& server, std::unique_ptr<LineChannel> channel)
      : server_(server), channel_(std::move(channel)) {}

  void start() {
    auto self = shared_from_this();
    writer_ = std::thread([self] { self->write_loop(); });
    reader_ = std::thread([self] { self->read_loop(); });
  }

  void shutdown() {
    channel_->close();
    {
      std::lock_guard lock(out_mutex_);
      closing_ = true;
    }
    out_ready_.notify_all();
    if (reader_.joinable() && reader_.get_id() != std::this_thread::get_id()) reader_.join();
    if (writer_.joinable() && writer_.get_id() != std::this_thread::get_id()) writer_.join();
  }

  Message dispatch(const Message& request) {
    try {
      return make_result(request.correlationId, handle(request));
    } catch (const Error& e) {
      return make_error(request.correlationId, to_string(e.code()), e.what());
    } catch (const std::exception& e) {
      return make_error(request.correlationId, "InvalidRequest", e.what());
    }
  }

 private:
  void read_loop() {
    while (auto line = channel_->receive()) {
      Message response;
      try {
        Message request = decode(*line);
        if (!is_request(request.kind)) {
          response = make_error(request.correlationId, "InvalidRequest",
                                "'" + std::string(to_string(request.kind)) + "' is not a request");
        } else {
          response = dispatch(request);
        }
      } catch (const ParseError& e) {
        response = make_error("", "ParseError", e.what());
      }
      enqueue(std::move(response));
    }
    drop_subscriptions();
    {
      std::lock_guard lock(out_mutex_);
      closing_ = true;
    }
    out_ready_.notify_all();
  }

  void write_loop() {
    for (;;) {
      std::string line;
      {
        std::unique_lock lock(out_mutex_);
        out_ready_.wait(lock, [this] { return closing_ || !outbound_.empty(); });
        if (outbound_.empty()) return;
        line = std::move(outbound_.front());
        outbound_.pop_front();
      }
      try {
        channel_->send(line);
      } catch (const Error&) {
        channel_->close();
        return;
      }
    }
  }

  void enqueue(Message message) {
    {
      std::lock_guard lock(out_mutex_);
      if (closing_) return;
      if (message.kind == MessageKind::Event) message.seq = ++event_seq_;
      outbound_.push_back(encode(message));
    }
    out_ready_.notify_one();
  }

  void drop_subscriptions() {
    std::map<std::string, std::uint64_t> subs;
    {
      std::lock_guard lock(sub_mutex_);
      subs.swap(subscriptions_);
    }
    for (const auto& [id, sub] : subs) server_.host_.unsubscribe(sub);
  }

  json handle(const Message& request) {
    SkillHost& host = server_.host_;
    const json& p = request.payload;
    if (request.kind == MessageKind::Hello) {
      if (auto v = p.find("version"); v != p.end() && *v != std::string(kProtocolVersion)) {
        throw Error(ErrorCode::UnsupportedVersion, "server speaks " + std::string(kProtocolVersion));
      }
      greeted_ = true;
      return {{"serverName", server_.server_name_}, {"version", std::string(kProtocolVersion)}};
    }
    if (!greeted_) throw Error(ErrorCode::HandshakeRequired, "send hello first");
    switch (request.kind) {
      case MessageKind::ListSkills: {
        json skills = json::array();
        for (const auto& s : host.list_skills()) {
          skills.push_back({{"localRuntimeId", s.localRuntimeId},
                            {"skillId", s.descriptor.skillId},
                            {"ontologyURL", s.descriptor.capabilityRef},
                            {"state", to_string(s.state)}});
        }
        return {{"skills", skills}};
      }
      case MessageKind::Describe:
        return describe_skill(host.read_skill(require_string(p, "localRuntimeId")));
      case MessageKind::Read: return read_payload(host.read_skill(require_string(p, "localRuntimeId")));
      case MessageKind::Write: {
        const std::string& id = require_string(p, "localRuntimeId");
        SkillSnapshot s = host.read_skill(id);
        host.write_parameters(id, typed_values(s.descriptor, require_object(p, "values")));
        return {{"localRuntimeId", id}, {"acknowledged", true}};
      }
      case MessageKind::Command: {
        const std::string& id = require_string(p, "localRuntimeId");
        auto command = parse_command(require_string(p, "command"));
        if (!command) throw Error(ErrorCode::InvalidRequest, "unknown command '" + p["command"].get<std::string>() + "'");
        State next = host.fire_command(id, *command);
        return {{"localRuntimeId", id}, {"newState", to_string(next)}};
      }
      case MessageKind::Feasibility: {
        const std::string& id = require_string(p, "localRuntimeId");
        SkillSnapshot s = host.read_skill(id);
        if (!s.descriptor.hasFeasibilityCheck) {
          throw Error(ErrorCode::UnsupportedCheck,
                      "skill '" + s.descriptor.skillId + "' has no feasibility check");
        }
        FeasibilityResult r =
            host.check_feasibility(id, typed_values(s.descriptor, require_object(p, "inputs")));
        json estimates = json::object();
        for (const auto& [k, v] : r.estimates) estimates[k] = v.to_string();
        json out{{"localRuntimeId", id}, {"feasible", r.feasible}, {"estimates", estimates}};
        out["reason"] = r.reason ? json(*r.reason) : json(nullptr);
        return out;
      }
      case MessageKind::Subscribe: {
        const std::string& id = require_string(p, "localRuntimeId");
        bool active = true;
        if (auto a = p.find("active"); a != p.end()) {
          if (!a->is_boolean()) throw Error(ErrorCode::InvalidRequest, "'active' must be a boolean");
          active = a->get<bool>();
        }
        return subscribe(id, active);
      }
      default: throw Error(ErrorCode::InvalidRequest, "unsupported request");
    }
  }

  json subscribe(const std::string& id, bool active) {
    SkillHost& host = server_.host_;
    std::lock_guard lock(sub_mutex_);
    auto existing = subscriptions_.find(id);
    if (active && existing == subscriptions_.end()) {
      std::weak_ptr<Session> weak = weak_from_this();
      std::uint64_t sub = host.subscribe(id, [weak](const SkillEvent& e) {
        if (auto self = weak.lock()) {
          self->enqueue({MessageKind::Event,
                         "",
                         {{"localRuntimeId", e.localRuntimeId},
                          {"previousState", to_string(e.previous)},
                          {"newState", to_string(e.state)},
                          {"instanceSeq", e.seq},
                          {"timeMs", e.timeMs}},
                         std::nullopt});
        }
      });
      subscriptions_.emplace(id, sub);
    } else if (!active && existing != subscriptions_.end()) {
      host.unsubscribe(existing->second);
      subscriptions_.erase(existing);
    }
    SkillSnapshot s = host.read_skill(id);
    return {{"localRuntimeId", id}, {"subscribed", active}, {"state", to_string(s.state)}};
  }

  SkillServer& server_;
  std::unique_ptr<LineChannel> channel_;
  std::thread reader_;
  std::thread writer_;
  bool greeted_ = false;

  std::mutex out_mutex_;
  std::condition_variable out_ready_;
  std::deque<std::string> outbound_;
  std::int64_t event_seq_ = 0;
  bool closing_ = false;

  std::mutex sub_mutex_;
  std::map<std::string, std::uint64_t> subscriptions_;
};

SkillServer::SkillServer(SkillHost& host, std::string serverName)
    : host_(host), server_name_(serverName.empty() ? host.name() : std::move(serverName)) {}

SkillServer::~SkillServer() { stop(); }

void SkillServer::listen(const Endpoint& endpoint) {
  listener_ = std::make_unique<TcpListener>(endpoint);
  port_ = listener_->port();
  accept_thread_ = std::thread([this] {
    while (auto channel = listener_->accept()) {
      if (stopped_) break;
      attach(std::move(channel));
    }
  });
}

void SkillServer::attach(std::unique_ptr<LineChannel> channel) {
  auto session = std::make_shared<Session>(*this, std::move(channel));
  {
    std::lock_guard lock(sessions_mutex_);
    if (stopped_) return;
    sessions_.push_back(session);
  }
  session->start();
}

std::unique_ptr<LineChannel> SkillServer::connect_in_process() {
  auto [client_end, server_end] = make_loopback_pair();
  attach(std::move(server_end));
  return std::move(client_end);
}

void SkillServer::stop() {
  if (stopped_.exchange(true)) return;
  if (listener_) listener_->close();
  if (accept_thread_.joinable()) accept_thread_.join();
  std::vector<std::shared_ptr<Session>> sessions;
  {
    std::lock_guard lock(sessions_mutex_);
    sessions.swap(sessions_);
  }
  for (auto& s : sessions) s->shutdown();
}

Message SkillServer::handle_stateless(const Message& request) {
  auto session = std::make_shared<Session>(*this, make_loopback_pair().first);
  session->dispatch({MessageKind::Hello, "", json::object(), std::nullopt});
  return session->dispatch(request);
}

std::unique_ptr<SkillServer> serve(SkillHost& host, const Endpoint& endpoint) {
  auto server = std::make_unique<SkillServer>(host);
  server->listen(endpoint);
  return server;
}

}  // namespace css
