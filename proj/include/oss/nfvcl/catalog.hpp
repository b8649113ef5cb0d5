#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "descriptors.hpp"
#include "oss/core/json.hpp"
#include "oss/core/types.hpp"

namespace oss::nfvcl
{

enum class Family
{
    k8s,
    fivegc,
    vyos,
    ueransim,
    metadata
};

struct Day2Action
{
    std::string name;
    json params_schema;
    /// A failed bundle puts the whole instance in ERROR.
    bool critical = false;
};

struct BlueprintType
{
    std::string tag;
    Family family = Family::metadata;
    bool executable = false;
    std::string description;
    json config_schema;
    std::vector<Day2Action> day2_actions;
    bool requires_core = true;

    const Day2Action* action(const std::string& name) const;
};

const std::vector<BlueprintType>& catalog();
const BlueprintType* find_type(const std::string& tag);
/// UnknownBlueprintType for absent or metadata-only tags.
const BlueprintType& require_type(const std::string& tag);
std::set<std::string> executable_tags();
json catalog_to_json();

struct AreaSpec
{
    AreaId id = 0;
    bool core = false;
    json entry;
};

/// Areas of a create body in request order. SchemaViolation on duplicate ids.
std::vector<AreaSpec> body_areas(const json& body);
AreaSet areas_of(const json& body);
/// The core-flagged area. NoCoreArea / MultipleCoreAreas; nullopt only for
/// types that do not need one.
std::optional<AreaId> core_area(const BlueprintType& type, const json& body);
/// Every topology network named by the body's endpoints.
std::set<std::string> endpoint_networks(const json& body);

/// Full create-body validation: schema, area uniqueness, core rule.
void validate_body(const BlueprintType& type, const json& body);

/// One NS per area: the core area first, then the others in ascending id.
struct NsTemplate
{
    AreaId area = 0;
    std::string role;  // core | edge
    Package package;   // nsd_id not yet assigned

    /// Composition fingerprint ignoring ids and instance counts.
    std::string signature() const;
};

std::vector<NsTemplate> expand_blueprint(const BlueprintType& type, const json& body);
ResourceBudget declared_compute(const std::vector<NsTemplate>& templates);

/// Stamps NSD identity onto a template. Asserts reference validity.
Package build_package(const NsTemplate& t, const std::string& nsd_id);

/// Default create body used when the SB core instantiates for a slice.
json default_body(const std::string& tag, const AreaSet& areas, AreaId core, const json& network_endpoints);
/// Adds default entries for areas the body lacks; existing entries untouched.
json grow_body(const json& body, const AreaSet& areas);

// Configuration ---------------------------------------------------------------

/// What one NF should receive: playbook names plus variables. The engine picks
/// the delivery mechanism from the NF kind.
struct BundleSpec
{
    AreaId area = 0;
    std::string vnfd_id;
    std::string purpose;
    std::vector<std::string> playbooks;
    json vars = json::object();
};

struct ScaleSpec
{
    AreaId area = 0;
    std::string vnfd_id;
    std::string vdu;
    int delta = 0;
};

struct Day2Plan
{
    std::vector<BundleSpec> bundles;
    std::optional<ScaleSpec> scale;
};

std::vector<BundleSpec> day1_bundles(const BlueprintType& type, const json& body, const NsTemplate& t);
json initial_runtime(const BlueprintType& type, const json& body);

/// Validates params (schema plus semantic checks against the instance) and
/// derives the bundles and optional scale step.
Day2Plan plan_day2(const BlueprintType& type, const json& body, const json& runtime, const std::string& action,
                   const json& params);
/// Records a completed action in the runtime document; returns the operation
/// output.
json apply_day2(const std::string& action, const json& params, json& runtime, json& body);

NLOHMANN_JSON_SERIALIZE_ENUM(Family, {{Family::k8s, "k8s"},
                                      {Family::fivegc, "5gc"},
                                      {Family::vyos, "vyos"},
                                      {Family::ueransim, "ueransim"},
                                      {Family::metadata, "metadata"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BundleSpec, area, vnfd_id, purpose, playbooks, vars)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ScaleSpec, area, vnfd_id, vdu, delta)

} // namespace oss::nfvcl
