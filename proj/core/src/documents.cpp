#include "css/documents.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "css/capability_lang.hpp"

namespace css {
namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::SchemaError, (path.empty() ? "document" : path) + ": " + message);
}

// Reads one JSON object and rejects any field nobody asked for.
class Obj {
 public:
  Obj(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value.is_object()) schema_error(path_, "expected an object");
  }
  Obj(const Obj&) = delete;

  const std::string& path() const { return path_; }
  std::string at(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  const json* opt(std::string_view key) {
    seen_.emplace(key);
    auto it = value_.find(key);
    return it == value_.end() ? nullptr : &*it;
  }
  const json& req(std::string_view key) {
    const json* v = opt(key);
    if (!v) schema_error(at(key), "missing required field");
    return *v;
  }

  std::string str(std::string_view key) { return as_string(req(key), at(key)); }
  std::optional<std::string> opt_str(std::string_view key) {
    const json* v = opt(key);
    if (!v) return std::nullopt;
    return as_string(*v, at(key));
  }
  bool boolean(std::string_view key, bool fallback) {
    const json* v = opt(key);
    if (!v) return fallback;
    if (!v->is_boolean()) schema_error(at(key), "expected a boolean");
    return v->get<bool>();
  }
  std::int64_t integer(std::string_view key) {
    const json& v = req(key);
    if (!v.is_number_integer()) schema_error(at(key), "expected an integer");
    return v.get<std::int64_t>();
  }
  Decimal decimal(std::string_view key) { return as_decimal(req(key), at(key)); }
  std::optional<Decimal> opt_decimal(std::string_view key) {
    const json* v = opt(key);
    if (!v) return std::nullopt;
    return as_decimal(*v, at(key));
  }
  Timestamp timestamp(std::string_view key) {
    std::string text = str(key);
    auto t = Timestamp::try_parse(text);
    if (!t) schema_error(at(key), "expected an ISO-8601 UTC timestamp, got '" + text + "'");
    return *t;
  }
  const json& array(std::string_view key, bool required = true) {
    static const json empty = json::array();
    const json* v = required ? &req(key) : opt(key);
    if (!v) return empty;
    if (!v->is_array()) schema_error(at(key), "expected an array");
    return *v;
  }
  std::vector<std::string> strings(std::string_view key, bool required = true) {
    std::vector<std::string> out;
    const json& a = array(key, required);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_string(a[i], at(key) + "[" + std::to_string(i) + "]"));
    return out;
  }
  std::map<std::string, std::string> string_map(std::string_view key) {
    std::map<std::string, std::string> out;
    const json* v = opt(key);
    if (!v) return out;
    Obj m(*v, at(key));
    for (auto it = v->begin(); it != v->end(); ++it) out.emplace(it.key(), m.str(it.key()));
    m.done();
    return out;
  }

  void schema(std::string_view expected) {
    std::string s = str("schema");
    if (s != expected) schema_error(at("schema"), "expected '" + std::string(expected) + "', got '" + s + "'");
  }

  void done() const {
    for (auto it = value_.begin(); it != value_.end(); ++it) {
      if (!seen_.count(it.key())) schema_error(at(it.key()), "unknown field");
    }
  }

  static std::string as_string(const json& v, const std::string& path) {
    if (!v.is_string()) schema_error(path, "expected a string");
    return v.get<std::string>();
  }
  static Decimal as_decimal(const json& v, const std::string& path) {
    std::optional<Decimal> d;
    if (v.is_string()) d = Decimal::try_parse(v.get_ref<const std::string&>());
    else if (v.is_number()) d = Decimal::try_parse(v.dump());
    if (!d) schema_error(path, "expected a decimal number, got " + v.dump());
    return *d;
  }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

Datatype datatype_field(Obj& o) {
  std::string text = o.str("datatype");
  auto t = parse_datatype(text);
  if (!t) schema_error(o.at("datatype"), "unknown datatype '" + text + "'");
  return *t;
}

Literal literal_field(const json& v, Datatype type, const std::string& path) {
  try {
    return literal_from_json(v, type);
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
}

CapabilityExpression expression_field(Obj& o, std::string_view key, const WorldModel& world) {
  std::string text = o.str(key);
  try {
    return parse_expression(text, world);
  } catch (const Error& e) {
    throw Error(e.code(), o.at(key) + ": " + e.what());
  }
}

std::vector<TaxonomyClass> classes_from(Obj& o) {
  std::vector<TaxonomyClass> classes;
  const json& a = o.array("classes");
  for (std::size_t i = 0; i < a.size(); ++i) {
    Obj c(a[i], idx(o.at("classes"), i));
    TaxonomyClass tc;
    tc.id = c.str("id");
    tc.parent = c.opt_str("parent").value_or("");
    tc.label = c.opt_str("label").value_or("");
    c.done();
    classes.push_back(std::move(tc));
  }
  return classes;
}

json classes_to_json(const Taxonomy& taxonomy) {
  json classes = json::array();
  for (const auto& c : taxonomy.classes()) {
    json j{{"id", c.id}};
    if (!c.parent.empty()) j["parent"] = c.parent;
    if (!c.label.empty()) j["label"] = c.label;
    classes.push_back(j);
  }
  return classes;
}

PropertyDefinition property_from(const json& v, const std::string& path) {
  Obj o(v, path);
  PropertyDefinition p;
  p.id = o.str("id");
  p.datatype = datatype_field(o);
  p.unit = o.opt_str("unit");
  p.enumValues = o.strings("enumValues", false);
  if (const json* r = o.opt("declaredRange")) {
    Obj range(*r, o.at("declaredRange"));
    p.declaredRange = DeclaredRange{range.decimal("lower"), range.decimal("upper")};
    range.done();
  }
  o.done();
  return p;
}

json property_to_json(const PropertyDefinition& p) {
  json j{{"id", p.id}, {"datatype", to_string(p.datatype)}};
  if (p.unit) j["unit"] = *p.unit;
  if (!p.enumValues.empty()) j["enumValues"] = p.enumValues;
  if (p.declaredRange) {
    j["declaredRange"] = {{"lower", p.declaredRange->lower.to_string()},
                          {"upper", p.declaredRange->upper.to_string()}};
  }
  return j;
}

Capability capability_from(const json& v, const std::string& path, const WorldModel& world) {
  Obj o(v, path);
  Capability c;
  c.id = o.str("id");
  c.iri = o.str("iri");
  c.expression = expression_field(o, "expression", world);
  c.propertyToParameter = o.string_map("propertyToParameter");
  o.done();
  return c;
}

json capability_to_json(const Capability& c) {
  json j{{"id", c.id}, {"iri", c.iri}, {"expression", to_string(c.expression)}};
  if (!c.propertyToParameter.empty()) j["propertyToParameter"] = c.propertyToParameter;
  return j;
}

ParameterSpec parameter_from(const json& v, const std::string& path) {
  Obj o(v, path);
  ParameterSpec p;
  p.paramId = o.str("paramId");
  std::string dir = o.str("direction");
  if (dir == "input") p.direction = Direction::Input;
  else if (dir == "output") p.direction = Direction::Output;
  else schema_error(o.at("direction"), "expected 'input' or 'output'");
  p.datatype = datatype_field(o);
  p.unit = o.opt_str("unit");
  if (const json* d = o.opt("default")) p.defaultValue = literal_field(*d, p.datatype, o.at("default"));
  p.enumValues = o.strings("enumValues", false);
  o.done();
  return p;
}

json parameter_to_json(const ParameterSpec& p) {
  json j{{"paramId", p.paramId}, {"direction", to_string(p.direction)}, {"datatype", to_string(p.datatype)}};
  if (p.unit) j["unit"] = *p.unit;
  if (p.defaultValue) j["default"] = literal_to_json(*p.defaultValue);
  if (!p.enumValues.empty()) j["enumValues"] = p.enumValues;
  return j;
}

SimulationSpec simulation_from(const json& v, const std::string& path) {
  Obj o(v, path);
  SimulationSpec s;
  if (o.opt("executeTicks")) {
    std::int64_t ticks = o.integer("executeTicks");
    if (ticks < 1 || ticks > 1000000) schema_error(o.at("executeTicks"), "must be between 1 and 1000000");
    s.executeTicks = static_cast<int>(ticks);
  }
  const json& limits = o.array("limits", false);
  for (std::size_t i = 0; i < limits.size(); ++i) {
    Obj l(limits[i], idx(o.at("limits"), i));
    s.limits.push_back({l.str("paramId"), l.opt_decimal("min"), l.opt_decimal("max")});
    l.done();
  }
  s.outputs = o.string_map("outputs");
  s.forceInfeasible = o.boolean("forceInfeasible", false);
  s.failDuringExecute = o.opt_str("failDuringExecute");
  s.preconditionViolation = o.opt_str("preconditionViolation");
  o.done();
  return s;
}

json simulation_to_json(const SimulationSpec& s) {
  json j{{"executeTicks", s.executeTicks}};
  if (!s.limits.empty()) {
    json limits = json::array();
    for (const auto& l : s.limits) {
      json lj{{"paramId", l.paramId}};
      if (l.min) lj["min"] = l.min->to_string();
      if (l.max) lj["max"] = l.max->to_string();
      limits.push_back(lj);
    }
    j["limits"] = limits;
  }
  if (!s.outputs.empty()) j["outputs"] = s.outputs;
  if (s.forceInfeasible) j["forceInfeasible"] = true;
  if (s.failDuringExecute) j["failDuringExecute"] = *s.failDuringExecute;
  if (s.preconditionViolation) j["preconditionViolation"] = *s.preconditionViolation;
  return j;
}

Resource resource_from(const json& v, const std::string& path, const WorldModel& world) {
  Obj o(v, path);
  Resource r;
  r.id = o.str("id");
  const json& caps = o.array("capabilities", false);
  for (std::size_t i = 0; i < caps.size(); ++i) {
    r.providedCapabilities.push_back(capability_from(caps[i], idx(o.at("capabilities"), i), world));
  }
  const json& skills = o.array("skills", false);
  for (std::size_t i = 0; i < skills.size(); ++i) {
    Obj s(skills[i], idx(o.at("skills"), i));
    SkillDescriptor d;
    d.skillId = s.str("skillId");
    d.name = s.opt_str("name");
    d.capabilityRef = s.str("capabilityRef");
    const json& params = s.array("parameters", false);
    for (std::size_t k = 0; k < params.size(); ++k) {
      d.parameters.push_back(parameter_from(params[k], idx(s.at("parameters"), k)));
    }
    d.hasFeasibilityCheck = s.boolean("feasibilityCheck", false);
    d.hasPreconditionCheck = s.boolean("preconditionCheck", false);
    if (auto profile = s.opt_str("stateMachine")) d.stateMachineProfile = *profile;
    if (const json* sim = s.opt("simulation")) r.simulations.emplace(d.skillId, simulation_from(*sim, s.at("simulation")));
    s.done();
    r.skills.push_back(std::move(d));
  }
  o.done();
  return r;
}

json resource_to_json(const Resource& r) {
  json caps = json::array();
  for (const auto& c : r.providedCapabilities) caps.push_back(capability_to_json(c));
  json skills = json::array();
  for (const auto& s : r.skills) {
    json params = json::array();
    for (const auto& p : s.parameters) params.push_back(parameter_to_json(p));
    json j{{"skillId", s.skillId}, {"capabilityRef", s.capabilityRef}, {"parameters", params},
           {"feasibilityCheck", s.hasFeasibilityCheck}, {"preconditionCheck", s.hasPreconditionCheck},
           {"stateMachine", s.stateMachineProfile}};
    if (s.name) j["name"] = *s.name;
    if (auto sim = r.simulations.find(s.skillId); sim != r.simulations.end()) {
      j["simulation"] = simulation_to_json(sim->second);
    }
    skills.push_back(j);
  }
  return {{"id", r.id}, {"capabilities", caps}, {"skills", skills}};
}

Product product_from(Obj& o, const WorldModel& world) {
  Product p;
  p.id = o.str("id");
  const json& steps = o.array("steps");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    Obj s(steps[i], idx(o.at("steps"), i));
    ProcessStep step;
    step.id = s.str("id");
    step.requiredCapability = expression_field(s, "requiredCapability", world);
    if (const json* values = s.opt("parameterValues")) {
      Obj vo(*values, s.at("parameterValues"));
      for (auto it = values->begin(); it != values->end(); ++it) {
        vo.opt(it.key());
        const PropertyDefinition* def = world.find_property(it.key());
        if (!def) throw Error(ErrorCode::UnknownProperty, vo.at(it.key()) + ": unknown property '" + it.key() + "'");
        step.parameterValues.emplace(it.key(), literal_field(*it, def->datatype, vo.at(it.key())));
      }
      vo.done();
    }
    s.done();
    p.steps.push_back(std::move(step));
  }
  return p;
}

json product_body(const Product& p) {
  json steps = json::array();
  for (const auto& s : p.steps) {
    steps.push_back({{"id", s.id},
                     {"requiredCapability", to_string(s.requiredCapability)},
                     {"parameterValues", parameters_to_json(s.parameterValues)}});
  }
  return {{"id", p.id}, {"steps", steps}};
}

ServiceOffer offer_from(const json& v, const std::string& path, const WorldModel& world) {
  Obj o(v, path);
  ServiceOffer f;
  f.offerId = o.str("offerId");
  f.providerId = o.str("providerId");
  f.requestId = o.str("requestId");
  f.coveredCapKeys = o.strings("coveredCapKeys");
  if (const json* caps = o.opt("providedCapabilities")) {
    Obj co(*caps, o.at("providedCapabilities"));
    for (auto it = caps->begin(); it != caps->end(); ++it) {
      f.providedCapabilities.emplace(it.key(), expression_field(co, it.key(), world));
    }
    co.done();
  }
  f.unitPrice = o.decimal("unitPrice");
  f.co2PerUnit = o.decimal("co2PerUnit");
  f.deliveryDate = o.timestamp("deliveryDate");
  auto certs = o.strings("certifications", false);
  f.certifications = {certs.begin(), certs.end()};
  f.ndaAccepted = o.boolean("ndaAccepted", false);
  f.validUntil = o.timestamp("validUntil");
  f.exclusiveGroup = o.opt_str("exclusiveGroup");
  o.done();
  return f;
}

json offer_to_json(const ServiceOffer& f) {
  json caps = json::object();
  for (const auto& [k, e] : f.providedCapabilities) caps[k] = to_string(e);
  json j{{"offerId", f.offerId},
         {"providerId", f.providerId},
         {"requestId", f.requestId},
         {"coveredCapKeys", f.coveredCapKeys},
         {"providedCapabilities", caps},
         {"unitPrice", f.unitPrice.to_string()},
         {"co2PerUnit", f.co2PerUnit.to_string()},
         {"deliveryDate", f.deliveryDate.to_string()},
         {"certifications", f.certifications},
         {"ndaAccepted", f.ndaAccepted},
         {"validUntil", f.validUntil.to_string()}};
  if (f.exclusiveGroup) j["exclusiveGroup"] = *f.exclusiveGroup;
  return j;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ParseError(e.byte > 0 ? e.byte - 1 : 0, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& document) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << document.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

std::string_view schema_of(const json& document) {
  if (!document.is_object()) schema_error("", "expected an object");
  auto it = document.find("schema");
  if (it == document.end() || !it->is_string()) schema_error("schema", "missing schema tag");
  const auto& s = it->get_ref<const std::string&>();
  for (auto known : {kTaxonomySchema, kWorldSchema, kProductSchema, kRequestSchema, kOfferSchema,
                     kEndpointsSchema}) {
    if (s == known) return known;
  }
  schema_error("schema", "unknown schema '" + s + "'");
}

Taxonomy taxonomy_from_json(const json& document) {
  Obj o(document, "");
  o.schema(kTaxonomySchema);
  Taxonomy t(classes_from(o));
  o.done();
  return t;
}

json taxonomy_to_json(const Taxonomy& taxonomy) {
  return {{"schema", kTaxonomySchema}, {"classes", classes_to_json(taxonomy)}};
}

WorldModel world_from_json(const json& document, const std::filesystem::path& base_dir) {
  Obj o(document, "");
  o.schema(kWorldSchema);
  WorldModel world;
  const json& tax = o.req("taxonomy");
  if (tax.is_string()) {
    world.taxonomy = taxonomy_from_json(read_json_file(base_dir / tax.get<std::string>()));
  } else {
    Obj t(tax, "taxonomy");
    world.taxonomy = Taxonomy(classes_from(t));
    t.done();
  }
  const json& props = o.array("properties", false);
  for (std::size_t i = 0; i < props.size(); ++i) {
    world.propertyDefs.push_back(property_from(props[i], idx("properties", i)));
  }
  const json& resources = o.array("resources", false);
  for (std::size_t i = 0; i < resources.size(); ++i) {
    world.resources.push_back(resource_from(resources[i], idx("resources", i), world));
  }
  const json& products = o.array("products", false);
  for (std::size_t i = 0; i < products.size(); ++i) {
    Obj p(products[i], idx("products", i));
    world.products.push_back(product_from(p, world));
    p.done();
  }
  const json& catalog = o.array("serviceCatalog", false);
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    world.serviceCatalog.push_back(offer_from(catalog[i], idx("serviceCatalog", i), world));
  }
  o.done();
  return world;
}

json world_to_json(const WorldModel& world) {
  json props = json::array();
  for (const auto& p : world.propertyDefs) props.push_back(property_to_json(p));
  json resources = json::array();
  for (const auto& r : world.resources) resources.push_back(resource_to_json(r));
  json j{{"schema", kWorldSchema},
         {"taxonomy", {{"classes", classes_to_json(world.taxonomy)}}},
         {"properties", props},
         {"resources", resources}};
  if (!world.products.empty()) {
    json products = json::array();
    for (const auto& p : world.products) products.push_back(product_body(p));
    j["products"] = products;
  }
  if (!world.serviceCatalog.empty()) j["serviceCatalog"] = offers_to_json(world.serviceCatalog).at("offers");
  return j;
}

WorldModel load_world(const std::filesystem::path& path) {
  return world_from_json(read_json_file(path), path.parent_path());
}

Product product_from_json(const json& document, const WorldModel& world) {
  Obj o(document, "");
  o.schema(kProductSchema);
  Product p = product_from(o, world);
  o.done();
  return p;
}

json product_to_json(const Product& product) {
  json j = product_body(product);
  j["schema"] = kProductSchema;
  return j;
}

ServiceRequest request_from_json(const json& document, const WorldModel& world) {
  Obj o(document, "");
  o.schema(kRequestSchema);
  ServiceRequest r;
  r.requestId = o.str("requestId");
  const json& caps = o.array("requiredCapabilities");
  for (std::size_t i = 0; i < caps.size(); ++i) {
    Obj c(caps[i], idx("requiredCapabilities", i));
    std::string key = c.str("capKey");
    if (r.find(key)) schema_error(c.at("capKey"), "duplicate capKey '" + key + "'");
    r.requiredCapabilities.push_back({key, expression_field(c, "expression", world)});
    c.done();
  }
  Obj t(o.req("tender"), "tender");
  r.tender.quantity = t.integer("quantity");
  if (r.tender.quantity < 1) schema_error(t.at("quantity"), "must be positive");
  r.tender.maxUnitPrice = t.decimal("maxUnitPrice");
  r.tender.maxCo2PerUnit = t.decimal("maxCo2PerUnit");
  r.tender.deliveryDeadline = t.timestamp("deliveryDeadline");
  auto certs = t.strings("requiredCertifications", false);
  r.tender.requiredCertifications = {certs.begin(), certs.end()};
  r.tender.ndaRequired = t.boolean("ndaRequired", false);
  t.done();
  r.submittedAt = o.timestamp("submittedAt");
  r.responseDeadline = o.timestamp("responseDeadline");
  if (!(r.submittedAt < r.responseDeadline)) schema_error("responseDeadline", "must be after submittedAt");
  o.done();
  return r;
}

json request_to_json(const ServiceRequest& r) {
  json caps = json::array();
  for (const auto& c : r.requiredCapabilities) {
    caps.push_back({{"capKey", c.capKey}, {"expression", to_string(c.expression)}});
  }
  const TenderCriteria& t = r.tender;
  return {{"schema", kRequestSchema},
          {"requestId", r.requestId},
          {"requiredCapabilities", caps},
          {"tender",
           {{"quantity", t.quantity},
            {"maxUnitPrice", t.maxUnitPrice.to_string()},
            {"maxCo2PerUnit", t.maxCo2PerUnit.to_string()},
            {"deliveryDeadline", t.deliveryDeadline.to_string()},
            {"requiredCertifications", t.requiredCertifications},
            {"ndaRequired", t.ndaRequired}}},
          {"submittedAt", r.submittedAt.to_string()},
          {"responseDeadline", r.responseDeadline.to_string()}};
}

std::vector<ServiceOffer> offers_from_json(const json& document, const WorldModel& world) {
  Obj o(document, "");
  o.schema(kOfferSchema);
  std::vector<ServiceOffer> offers;
  const json& list = o.array("offers");
  for (std::size_t i = 0; i < list.size(); ++i) offers.push_back(offer_from(list[i], idx("offers", i), world));
  o.done();
  return offers;
}

json offers_to_json(const std::vector<ServiceOffer>& offers) {
  json list = json::array();
  for (const auto& f : offers) list.push_back(offer_to_json(f));
  return {{"schema", kOfferSchema}, {"offers", list}};
}

std::map<std::string, Endpoint> endpoints_from_json(const json& document) {
  Obj o(document, "");
  o.schema(kEndpointsSchema);
  std::map<std::string, Endpoint> out;
  for (const auto& [id, text] : o.string_map("endpoints")) {
    try {
      out.emplace(id, Endpoint::parse(text));
    } catch (const Error& e) {
      schema_error("endpoints." + id, e.what());
    }
  }
  o.done();
  return out;
}

json endpoints_to_json(const std::map<std::string, Endpoint>& endpoints) {
  json map = json::object();
  for (const auto& [id, e] : endpoints) map[id] = e.to_string();
  return {{"schema", kEndpointsSchema}, {"endpoints", map}};
}

}  // namespace css
