#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "css/model.hpp"
#include "css/protocol.hpp"
#include "css/transport.hpp"

namespace css {

// On-disk documents: JSON objects with a top-level "schema" tag. Parsing is
// strict; unknown fields, unknown schemas and wrong value types raise
// SchemaError naming the JSON path. Decimals may be written as strings or
// numbers; timestamps are ISO-8601 UTC strings.

inline constexpr std::string_view kTaxonomySchema = "css.taxonomy/1";
inline constexpr std::string_view kWorldSchema = "css.world/1";
inline constexpr std::string_view kProductSchema = "css.product/1";
inline constexpr std::string_view kRequestSchema = "css.request/1";
inline constexpr std::string_view kOfferSchema = "css.offer/1";
inline constexpr std::string_view kEndpointsSchema = "css.endpoints/1";

/// Throws IoError or ParseError.
json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline. Throws IoError.
void write_json_file(const std::filesystem::path& path, const json& document);

/// The document's schema tag. Throws SchemaError if absent or unknown.
std::string_view schema_of(const json& document);

Taxonomy taxonomy_from_json(const json& document);
json taxonomy_to_json(const Taxonomy& taxonomy);

/// A string "taxonomy" field is a path resolved against `base_dir`.
WorldModel world_from_json(const json& document,
                           const std::filesystem::path& base_dir = {});
/// Always inlines the taxonomy.
json world_to_json(const WorldModel& world);
WorldModel load_world(const std::filesystem::path& path);

/// Expressions and values are resolved against `world`.
Product product_from_json(const json& document, const WorldModel& world);
json product_to_json(const Product& product);

ServiceRequest request_from_json(const json& document, const WorldModel& world);
json request_to_json(const ServiceRequest& request);

std::vector<ServiceOffer> offers_from_json(const json& document, const WorldModel& world);
json offers_to_json(const std::vector<ServiceOffer>& offers);

/// resourceId -> endpoint.
std::map<std::string, Endpoint> endpoints_from_json(const json& document);
json endpoints_to_json(const std::map<std::string, Endpoint>& endpoints);

}  // namespace css
