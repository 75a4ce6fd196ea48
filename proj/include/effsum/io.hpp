#pragma once

#include "effsum/proof.hpp"
#include "effsum/verdict.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace effsum {

using Json = nlohmann::ordered_json;

inline constexpr int instance_format = 1;

struct Instance {
    std::string name;
    GroupContext group = GroupContext::int_vec(2);
    RelationOracle relation = RelationOracle::product_order();
    FiniteSet a;
    FiniteSet b;
    std::optional<std::vector<FiniteSet>> b_list;
    AuditConfig audit;
    std::optional<SystemInstance> system;
    // Generator provenance, kept verbatim.
    std::optional<Json> generator;
    // Duplicate elements dropped while parsing.
    std::vector<std::string> warnings;
};

GroupElement decode_element(const Json& j, const GroupContext& g);
Json encode_element(const GroupElement& e, const GroupContext& g);

Json encode_set(const FiniteSet& s, const GroupContext& g);
Json encode_group(const GroupContext& g);
GroupContext decode_group(const Json& j);
Json encode_relation(const RelationOracle& rel, const GroupContext& g);
RelationOracle decode_relation(const Json& j, const GroupContext& g);
Json encode_system(const SystemInstance& sys, const GroupContext& g);
SystemInstance decode_system(const Json& j, const GroupContext& g);

Instance parse_instance_text(const std::string& text);
Instance parse_instance(const std::filesystem::path& path);
Json instance_to_json(const Instance& inst);
// Two-space indented JSON with a trailing newline.
std::string dump_instance(const Instance& inst);

Json status_to_json(const PropertyStatus& s, const GroupContext& g);
PropertyStatus status_from_json(const Json& j, const GroupContext& g);

struct Report {
    std::string name;
    std::string group;
    std::string relation;
    Verdict verdict;
    std::optional<double> timing_ms;

    friend bool operator==(const Report&, const Report&) = default;
};

Json report_to_json(const Report& r, const GroupContext& g);
Report report_from_json(const Json& j, const GroupContext& g);
std::string report_to_text(const Report& r);

std::string audit_to_text(const std::vector<PropertyStatus>& statuses);
Json audit_to_json(const std::vector<PropertyStatus>& statuses, const GroupContext& g);

} // namespace effsum
