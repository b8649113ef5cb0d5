#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace oss
{

using AreaId = int;
using AreaSet = std::set<AreaId>;
using SimTime = double;

/// Compute dimension of a tenant quota. Whole units: vCPUs and GiB.
struct ResourceBudget
{
    std::int64_t vcpus = 0;
    std::int64_t ram_gb = 0;
    std::int64_t storage_gb = 0;

    bool operator==(const ResourceBudget&) const = default;

    ResourceBudget& operator+=(const ResourceBudget& rhs)
    {
        vcpus += rhs.vcpus;
        ram_gb += rhs.ram_gb;
        storage_gb += rhs.storage_gb;
        return *this;
    }
    ResourceBudget& operator-=(const ResourceBudget& rhs)
    {
        vcpus -= rhs.vcpus;
        ram_gb -= rhs.ram_gb;
        storage_gb -= rhs.storage_gb;
        return *this;
    }
    friend ResourceBudget operator+(ResourceBudget lhs, const ResourceBudget& rhs) { return lhs += rhs; }
    friend ResourceBudget operator-(ResourceBudget lhs, const ResourceBudget& rhs) { return lhs -= rhs; }
    friend ResourceBudget operator*(ResourceBudget lhs, std::int64_t k)
    {
        lhs.vcpus *= k;
        lhs.ram_gb *= k;
        lhs.storage_gb *= k;
        return lhs;
    }

    bool non_negative() const { return vcpus >= 0 && ram_gb >= 0 && storage_gb >= 0; }
    bool fits_within(const ResourceBudget& cap) const
    {
        return vcpus <= cap.vcpus && ram_gb <= cap.ram_gb && storage_gb <= cap.storage_gb;
    }
};

struct VlanRange
{
    int first = 0;
    int last = -1;

    bool operator==(const VlanRange&) const = default;
    bool empty() const { return last < first; }
    bool contains(int vlan) const { return vlan >= first && vlan <= last; }
    bool overlaps(const VlanRange& o) const { return !empty() && !o.empty() && first <= o.last && o.first <= last; }
};

struct TenantSpace
{
    std::string id;
    std::string name;
    ResourceBudget quota;
    VlanRange vlan_range;
};

enum class AreaKind
{
    core,
    edge
};

struct Area
{
    AreaId id = 0;
    std::string name;
    AreaKind kind = AreaKind::edge;
};

enum class LatencyClass
{
    best_effort,
    low_latency,
    ultra_low_latency
};

struct QosProfile
{
    double bandwidth_mbps = 0;
    LatencyClass latency_class = LatencyClass::best_effort;
    std::optional<std::string> slice_differentiator;

    bool operator==(const QosProfile&) const = default;
};

struct SliceRequest
{
    std::string request_id;
    std::string tenant_id;
    std::string slice_type;
    AreaSet coverage_areas;
    ResourceBudget compute;
    QosProfile qos;
};

enum class SliceState
{
    REQUESTED,
    NEGOTIATING,
    INSTANTIATING,
    ACTIVE,
    UPDATING,
    TERMINATING,
    TERMINATED,
    FAILED
};

struct SliceBindingRef
{
    std::string sboss_id;
    std::string blueprint_instance_id;

    bool operator==(const SliceBindingRef&) const = default;
};

struct StateStamp
{
    std::string state;
    SimTime at = 0;
};

struct SliceRecord
{
    std::string slice_id;
    SliceRequest request;
    SliceState state = SliceState::REQUESTED;
    std::vector<SliceBindingRef> bindings;
    std::vector<StateStamp> state_history;
};

bool is_terminal(SliceState s);
bool slice_transition_allowed(SliceState from, SliceState to);

/// Moves the record along a legal edge and stamps the history; throws
/// InvalidState on an illegal edge. Bindings are cleared on TERMINATED.
void transition(SliceRecord& record, SliceState to, SimTime at);

std::string to_string(SliceState s);

NLOHMANN_JSON_SERIALIZE_ENUM(AreaKind, {{AreaKind::core, "core"}, {AreaKind::edge, "edge"}})
NLOHMANN_JSON_SERIALIZE_ENUM(LatencyClass, {{LatencyClass::best_effort, "best_effort"},
                                            {LatencyClass::low_latency, "low_latency"},
                                            {LatencyClass::ultra_low_latency, "ultra_low_latency"}})
NLOHMANN_JSON_SERIALIZE_ENUM(SliceState, {{SliceState::REQUESTED, "REQUESTED"},
                                          {SliceState::NEGOTIATING, "NEGOTIATING"},
                                          {SliceState::INSTANTIATING, "INSTANTIATING"},
                                          {SliceState::ACTIVE, "ACTIVE"},
                                          {SliceState::UPDATING, "UPDATING"},
                                          {SliceState::TERMINATING, "TERMINATING"},
                                          {SliceState::TERMINATED, "TERMINATED"},
                                          {SliceState::FAILED, "FAILED"}})

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ResourceBudget, vcpus, ram_gb, storage_gb)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VlanRange, first, last)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TenantSpace, id, name, quota, vlan_range)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Area, id, name, kind)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(QosProfile, bandwidth_mbps, latency_class, slice_differentiator)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SliceRequest, request_id, tenant_id, slice_type, coverage_areas,
                                                compute, qos)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SliceBindingRef, sboss_id, blueprint_instance_id)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(StateStamp, state, at)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SliceRecord, slice_id, request, state, bindings, state_history)

} // namespace oss
