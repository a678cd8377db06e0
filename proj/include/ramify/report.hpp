#pragma once

#include <json.hpp>

#include "ramify/catalog.hpp"
#include "ramify/conductor.hpp"

namespace ramify {

// sorted keys keep reports byte-identical for identical inputs
using Json = nlohmann::json;

Json rat_json(const Rat& r);

Json rf_to_json(const RFPtr& F);
RFPtr rf_from_json(const Json& j);
Json relem_to_json(const RElem& x);
RElem relem_from_json(const Json& j, const RFPtr& F);

Json lf_to_json(const LFPtr& K);
LFPtr lf_from_json(const Json& j, Precision prec);
Json lelem_to_json(const LElem& x);
LElem lelem_from_json(const Json& j, const LFPtr& K);

Json spec_to_json(const ExtensionSpec& spec);
ExtensionSpec spec_from_json(const Json& j, Precision prec);

// the full pipeline over one extension description
Json full_report(const ExtensionSpec& spec, const std::string& digest);

std::string fnv1a_hex(const std::string& data);

} // namespace ramify
