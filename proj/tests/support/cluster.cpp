#include "cluster.hpp"

namespace css::testing {

Cluster::Cluster(const WorldModel& world, Transport transport, std::int64_t start_ms) {
  for (const auto& r : world.resources) {
    auto host = std::make_unique<SkillHost>(r.id, std::make_shared<SimulatedClock>(start_ms),
                                            SkillHost::PumpMode::Background);
    host_resource(*host, r);
    auto server = std::make_unique<SkillServer>(*host);
    std::unique_ptr<SkillClient> client;
    if (transport == Transport::Tcp) {
      server->listen(Endpoint{"127.0.0.1", 0});
      client = connect_client(Endpoint{"127.0.0.1", server->port()});
    } else {
      client = std::make_unique<SkillClient>(server->connect_in_process());
      client->hello();
    }
    hosts_.emplace(r.id, std::move(host));
    servers_.emplace(r.id, std::move(server));
    clients_.emplace(r.id, std::move(client));
  }
}

Cluster::~Cluster() {
  clients_.clear();
  for (auto& [id, s] : servers_) s->stop();
}

std::map<std::string, SkillClient*> Cluster::connections() const {
  std::map<std::string, SkillClient*> out;
  for (const auto& [id, c] : clients_) out.emplace(id, c.get());
  return out;
}

}  // namespace css::testing
