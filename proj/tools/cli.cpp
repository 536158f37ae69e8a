#include "cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "css/capability_lang.hpp"
#include "css/client.hpp"
#include "css/documents.hpp"
#include "css/market.hpp"
#include "css/matcher.hpp"
#include "css/orchestrator.hpp"
#include "css/sample_world.hpp"
#include "css/server.hpp"
#include "css/skill_runtime.hpp"

namespace css::cli {
namespace {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
    case ErrorCode::ConnectionLost:
    case ErrorCode::BindFailure:
    case ErrorCode::Timeout:
      return kIo;
    case ErrorCode::NoMatchForStep:
    case ErrorCode::NoFeasibleCombination:
    case ErrorCode::OfferExpired:
    case ErrorCode::StepFailedNoAlternative:
      return kNegative;
    default:
      return kUsage;
  }
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string render_params(const ParameterMap& values) {
  std::string out;
  for (const auto& [k, v] : values) {
    if (!out.empty()) out += ", ";
    out += k + "=" + v.to_string();
  }
  return out;
}

struct Options {
  std::string format = "text";
  std::string worldPath;
  std::string now;

  bool lines() const { return format == "lines"; }
  WorldModel world() const { return worldPath.empty() ? sample_world() : load_world(worldPath); }
  Timestamp now_or(Timestamp fallback) const { return now.empty() ? fallback : Timestamp::parse(now); }
};

void add_format(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "lines"}));
}

// validate

int cmd_validate(const std::vector<std::string>& files, const Options& o, std::ostream& out) {
  int rc = kOk;
  std::optional<WorldModel> world;
  auto context_world = [&]() -> const WorldModel& {
    if (!world) world = o.world();
    return *world;
  };
  for (const auto& file : files) {
    json doc = read_json_file(file);
    std::string_view schema = schema_of(doc);
    ValidationReport report;
    if (schema == kWorldSchema) {
      report = validate_model(world_from_json(doc, std::filesystem::path(file).parent_path()));
    } else if (schema == kTaxonomySchema) {
      for (auto& p : taxonomy_from_json(doc).structural_problems()) report.push_back({Severity::Error, "classes", p});
    } else if (schema == kProductSchema) {
      product_from_json(doc, context_world());
    } else if (schema == kRequestSchema) {
      request_from_json(doc, context_world());
    } else if (schema == kOfferSchema) {
      offers_from_json(doc, context_world());
    } else {
      endpoints_from_json(doc);
    }
    if (report.empty()) {
      out << file << ": ok (" << schema << ")\n";
      continue;
    }
    for (const auto& issue : report) {
      out << file << ": " << to_string(issue.severity) << " " << issue.path << ": " << issue.message << "\n";
    }
    if (has_errors(report)) rc = kNegative;
  }
  return rc;
}

// match

int cmd_match(const std::string& required, const std::string& provided, const Options& o, std::ostream& out) {
  WorldModel world = o.world();
  MatchResult r = match_capabilities(parse_expression(required, world), parse_expression(provided, world), world);
  if (o.lines()) {
    json witness = r.witness ? parameters_to_json(*r.witness) : json(nullptr);
    out << encode(make_result("match", {{"degree", to_string(r.degree)}, {"witness", witness}}));
    for (const auto& [prop, cmp] : r.perProperty) {
      out << encode(make_result("match/" + prop, {{"property", prop},
                                                  {"required", cmp.required.to_string()},
                                                  {"provided", cmp.provided.to_string()},
                                                  {"intersection", cmp.intersection.to_string()}}));
    }
  } else {
    out << "degree: " << to_string(r.degree) << "\n";
    out << "witness: " << (r.witness ? render_params(*r.witness) : "none") << "\n";
    if (!r.perProperty.empty()) {
      out << pad("property", 14) << pad("required", 18) << pad("provided", 18) << "intersection\n";
      for (const auto& [prop, cmp] : r.perProperty) {
        out << pad(prop, 14) << pad(cmp.required.to_string(), 18) << pad(cmp.provided.to_string(), 18)
            << cmp.intersection.to_string() << "\n";
      }
    }
  }
  return r.degree == MatchDegree::Disjoint ? kNegative : kOk;
}

// plan

int cmd_plan(const std::string& productPath, const Options& o, std::ostream& out) {
  WorldModel world = o.world();
  ProductionPlan p = plan(product_from_json(read_json_file(productPath), world), world);
  if (o.lines()) {
    out << export_plan(p);
    return kOk;
  }
  for (const auto& e : p.entries) {
    const PlanChoice& c = e.chosen();
    out << e.stepId << ": " << c.resourceId << "/" << c.capabilityId << " skill " << c.skillId << " ("
        << to_string(c.matchDegree) << ") " << render_params(c.parameterAssignment) << "\n";
    for (std::size_t i = 1; i < e.choices.size(); ++i) {
      out << "  fallback: " << e.choices[i].resourceId << "/" << e.choices[i].capabilityId << " ("
          << to_string(e.choices[i].matchDegree) << ")\n";
    }
  }
  return kOk;
}

// serve

std::unique_ptr<SkillHost> make_host(const WorldModel& world, const std::string& resourceId, bool realClock,
                                     int tickMs, Timestamp start) {
  const Resource* resource = world.find_resource(resourceId);
  if (!resource) throw Error(ErrorCode::NotFound, "world has no resource '" + resourceId + "'");
  std::shared_ptr<Clock> clock;
  if (realClock) clock = std::make_shared<SystemClock>();
  else clock = std::make_shared<SimulatedClock>(start.millis);
  auto host = std::make_unique<SkillHost>(resourceId, clock, SkillHost::PumpMode::Background,
                                          std::chrono::milliseconds(tickMs));
  host_resource(*host, *resource);
  return host;
}

int cmd_serve(const std::string& resourceId, const std::string& hostName, int port, const std::string& clock,
              int tickMs, const Options& o, std::ostream& out) {
  // Block termination signals before any thread starts so sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  WorldModel world = o.world();
  auto host = make_host(world, resourceId, clock == "real", tickMs, o.now_or(Timestamp{}));
  Endpoint endpoint{hostName, static_cast<std::uint16_t>(port)};
  auto server = serve(*host, endpoint);
  endpoint.port = server->port();
  out << "serving " << resourceId << " on " << endpoint.to_string() << std::endl;
  int sig = 0;
  sigwait(&signals, &sig);
  server->stop();
  return kOk;
}

// run

int cmd_run(const std::string& productPath, const std::string& endpointsPath, bool local, bool noFeasibility,
            const std::string& outPath, const Options& o, std::ostream& out, std::ostream& err) {
  WorldModel world = o.world();
  ProductionPlan p = plan(product_from_json(read_json_file(productPath), world), world);
  Timestamp start = o.now_or(Timestamp{});

  std::set<std::string> resources;
  for (const auto& e : p.entries) {
    for (const auto& c : e.choices) resources.insert(c.resourceId);
  }

  std::vector<std::unique_ptr<SkillHost>> hosts;
  std::vector<std::unique_ptr<SkillServer>> servers;
  std::map<std::string, Endpoint> endpoints;
  if (local) {
    for (const auto& id : resources) {
      hosts.push_back(make_host(world, id, false, 100, start));
      servers.push_back(serve(*hosts.back(), Endpoint{"127.0.0.1", 0}));
      endpoints[id] = Endpoint{"127.0.0.1", servers.back()->port()};
    }
  } else {
    if (endpointsPath.empty()) throw Error(ErrorCode::InvalidArgument, "--endpoints or --local is required");
    endpoints = endpoints_from_json(read_json_file(endpointsPath));
  }

  std::vector<std::unique_ptr<SkillClient>> clients;
  std::map<std::string, SkillClient*> connections;
  for (const auto& id : resources) {
    auto it = endpoints.find(id);
    if (it == endpoints.end()) continue;
    clients.push_back(connect_client(it->second));
    connections[id] = clients.back().get();
  }

  ExecuteOptions options;
  options.useFeasibility = !noFeasibility;
  options.startTime = start;
  ExecutionResult result = execute_plan(p, connections, options);
  std::string trace = export_trace(result.trace);
  if (outPath.empty()) {
    out << trace;
  } else {
    std::ofstream file(outPath, std::ios::binary);
    if (!(file << trace)) throw Error(ErrorCode::IoError, "cannot write '" + outPath + "'");
  }
  clients.clear();
  for (auto& s : servers) s->stop();
  if (!result.ok()) {
    err << "step '" << *result.failedStep << "' failed with no alternative left\n";
    return kNegative;
  }
  return kOk;
}

// market

json award_json(const Award& a) {
  return {{"requestId", a.requestId},
          {"selected", a.offer_ids()},
          {"totalCost", a.totalCost.to_string()},
          {"strategy", to_string(a.strategy)},
          {"quantityAssumption", a.quantityAssumption}};
}

json contract_json(const Contract& c) {
  return {{"contractId", c.contractId},
          {"requestId", c.requestId},
          {"acceptedOfferIds", c.acceptedOfferIds},
          {"totalPrice", c.totalPrice.to_string()},
          {"formedAt", c.formedAt.to_string()}};
}

void print_record(std::ostream& out, const Options& o, const std::string& id, const json& payload) {
  if (o.lines()) {
    out << encode(make_result(id, payload));
    return;
  }
  out << id << "\n";
  for (auto it = payload.begin(); it != payload.end(); ++it) {
    out << "  " << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump()) << "\n";
  }
}

int cmd_market(const std::string& action, const std::string& requestPath, const std::string& offersPath,
               const std::string& acceptedAt, const Options& o, std::ostream& out) {
  WorldModel world = o.world();
  ServiceRequest request = request_from_json(read_json_file(requestPath), world);
  std::vector<ServiceOffer> offers = offers_from_json(read_json_file(offersPath), world);
  if (action == "eval") {
    for (const auto& offer : offers) {
      Admissibility a = evaluate_offer(request, offer, world);
      print_record(out, o, offer.offerId,
                   {{"offerId", offer.offerId}, {"admissible", a.admissible}, {"violations", a.violations}});
    }
    return kOk;
  }
  if (o.now.empty()) throw Error(ErrorCode::InvalidArgument, "--now is required for market " + action);
  Timestamp now = Timestamp::parse(o.now);
  Award award = select_offers(request, offers, now, world);
  if (action == "select") {
    print_record(out, o, request.requestId, award_json(award));
    return kOk;
  }
  Timestamp at = acceptedAt.empty() ? now : Timestamp::parse(acceptedAt);
  Contract contract = form_contract(award, at);
  print_record(out, o, contract.contractId, contract_json(contract));
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capability, skill and service toolkit", "css"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check documents and report model issues");
  std::vector<std::string> files;
  validate->add_option("files", files, "Documents to check")->required();
  validate->add_option("--world", o.worldPath, "World used to resolve product/request/offer documents");

  auto* match = app.add_subcommand("match", "Match a required against a provided capability");
  std::string required, provided;
  match->add_option("--required", required, "Required capability expression")->required();
  match->add_option("--provided", provided, "Provided capability expression")->required();
  match->add_option("--world", o.worldPath, "World document (default: built-in sample world)");
  add_format(match, o);

  auto* planCmd = app.add_subcommand("plan", "Plan a product against the world's resources");
  std::string productPath;
  planCmd->add_option("--product", productPath, "Product document")->required();
  planCmd->add_option("--world", o.worldPath, "World document")->required();
  add_format(planCmd, o);

  auto* serveCmd = app.add_subcommand("serve", "Serve one resource's skills over TCP");
  std::string resourceId, hostName = "127.0.0.1", clock = "simulated";
  int port = kDefaultPort, tickMs = 100;
  serveCmd->add_option("--world", o.worldPath, "World document")->required();
  serveCmd->add_option("--resource", resourceId, "Resource id")->required();
  serveCmd->add_option("--port", port, "TCP port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serveCmd->add_option("--host", hostName, "Bind address");
  serveCmd->add_option("--clock", clock, "Skill clock")->check(CLI::IsMember({"simulated", "real"}));
  serveCmd->add_option("--tick-ms", tickMs, "Tick length in milliseconds")->check(CLI::Range(1, 60000));
  serveCmd->add_option("--now", o.now, "Start time of the simulated clock");

  auto* runCmd = app.add_subcommand("run", "Plan and execute a product against served resources");
  std::string endpointsPath, outPath;
  bool local = false, noFeasibility = false;
  runCmd->add_option("--product", productPath, "Product document")->required();
  runCmd->add_option("--world", o.worldPath, "World document")->required();
  runCmd->add_option("--endpoints", endpointsPath, "Endpoints document (resourceId -> host:port)");
  runCmd->add_flag("--local", local, "Serve every planned resource in-process on ephemeral ports");
  runCmd->add_flag("--no-feasibility", noFeasibility, "Skip feasibility checks");
  runCmd->add_option("--out", outPath, "Trace file (default: stdout)");
  runCmd->add_option("--now", o.now, "Trace start time");

  auto* market = app.add_subcommand("market", "Evaluate offers, select an award, form a contract");
  market->require_subcommand(1);
  std::string requestPath, offersPath, acceptedAt, action;
  for (const char* name : {"eval", "select", "accept"}) {
    auto* sub = market->add_subcommand(name);
    sub->add_option("--request", requestPath, "Request document")->required();
    sub->add_option("--offers", offersPath, "Offer document")->required();
    sub->add_option("--world", o.worldPath, "World document (default: built-in sample world)");
    sub->add_option("--now", o.now, "Evaluation time (ISO-8601 UTC)");
    add_format(sub, o);
    if (std::string(name) == "accept") sub->add_option("--accepted-at", acceptedAt, "Acceptance time (default: --now)");
    sub->callback([&action, name] { action = name; });
  }
  market->get_subcommand("eval")->description("Check every offer against the tender");
  market->get_subcommand("select")->description("Pick the cheapest valid offer combination");
  market->get_subcommand("accept")->description("Select and form a contract");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(files, o, out);
    if (*match) return cmd_match(required, provided, o, out);
    if (*planCmd) return cmd_plan(productPath, o, out);
    if (*serveCmd) return cmd_serve(resourceId, hostName, port, clock, tickMs, o, out);
    if (*runCmd) return cmd_run(productPath, endpointsPath, local, noFeasibility, outPath, o, out, err);
    if (*market) return cmd_market(action, requestPath, offersPath, acceptedAt, o, out);
  } catch (const RemoteError& e) {
    err << "css: remote error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "css: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "css: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace css::cli
