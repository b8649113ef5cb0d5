#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oss/core/store.hpp"
#include "oss/core/types.hpp"
#include "oss/sim/simulator.hpp"

namespace oss::nb
{

enum class SbossStatus
{
    ONBOARDED,
    UNREACHABLE
};

struct SbossMetadata
{
    AreaSet areas_served;
    std::set<std::string> capabilities;
};

struct SbossRecord
{
    std::string sboss_id;
    std::string endpoint;
    SbossMetadata metadata;
    SbossStatus status = SbossStatus::ONBOARDED;
};

struct Assignment
{
    std::string sboss_id;
    SliceRequest sub_request;
};

struct RoutingPlan
{
    std::vector<Assignment> assignments;
};

/// Minimum number of nfv-capable SB-OSS covering the request; ties go to the
/// lexicographically smallest id set, and each area to the smallest chosen id
/// serving it. NoCoverage when some area has no candidate.
RoutingPlan route_slice_request(const SliceRequest& request, const std::vector<SbossRecord>& registry);

enum class Reply
{
    PENDING,
    READY,
    FAILED
};

struct NegotiationState
{
    std::string slice_id;
    std::map<std::string, Reply> replies;
    bool rollback_issued = false;
};

enum class Verdict
{
    still_pending,
    all_ready,
    failed
};

Verdict aggregate_replies(const NegotiationState& state);

/// NB view of a slice: the slice record plus negotiation bookkeeping.
struct NbSlice
{
    std::string slice_id;
    SliceRequest request;
    SliceState state = SliceState::REQUESTED;
    std::vector<SliceBindingRef> bindings;
    std::vector<StateStamp> state_history;
    RoutingPlan plan;
    NegotiationState negotiation;
    /// sboss_id -> slice id on that SB-OSS, in dispatch order.
    std::vector<std::pair<std::string, std::string>> sb_slices;
    std::string error;

    SliceRecord record() const;
};

struct HttpResult
{
    int status = 0;
    json body;

    bool ok() const { return status >= 200 && status < 300; }
};

/// Request path and body toward one SB-OSS; the tenant travels as a header.
using Transport = std::function<HttpResult(const std::string& method, const std::string& path, const json& body,
                                           const std::string& tenant)>;

/// Plain HTTP transport ("http://host:port"). Connection failures come back
/// as status 0.
Transport http_transport(const std::string& endpoint);

class NbCore
{
public:
    explicit NbCore(sim::Simulator& sim);

    /// "local://<name>" endpoints resolve through this table.
    void register_local(const std::string& name, Transport transport) { locals_[name] = std::move(transport); }

    SbossRecord onboard(const std::string& endpoint, const SbossMetadata& metadata);
    std::vector<SbossRecord> registry() const;

    /// Idempotent by request_id.
    NbSlice request(const SliceRequest& request);
    NbSlice modify(const std::string& slice_id, const std::optional<AreaSet>& areas,
                   const std::optional<QosProfile>& qos);
    NbSlice terminate(const std::string& slice_id);
    NbSlice slice(const std::string& slice_id);
    std::vector<NbSlice> slices();

    /// Polls SB-OSS replies for every in-flight slice.
    void reconcile_all();
    NbSlice reconcile(const std::string& slice_id);

private:
    Transport transport_for(const std::string& sboss_id);
    void set_state(NbSlice& s, SliceState to);
    void save(const NbSlice& s);
    void rollback(NbSlice& s, const std::string& reason);
    void collect_bindings(NbSlice& s, const std::string& sboss_id, const json& sb_record);

    sim::Simulator& sim_;
    std::map<std::string, Transport> locals_;
};

NLOHMANN_JSON_SERIALIZE_ENUM(SbossStatus, {{SbossStatus::ONBOARDED, "ONBOARDED"},
                                           {SbossStatus::UNREACHABLE, "UNREACHABLE"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Reply, {{Reply::PENDING, "PENDING"}, {Reply::READY, "READY"}, {Reply::FAILED, "FAILED"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Verdict, {{Verdict::still_pending, "still-pending"},
                                       {Verdict::all_ready, "all-ready"},
                                       {Verdict::failed, "failed"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SbossMetadata, areas_served, capabilities)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SbossRecord, sboss_id, endpoint, metadata, status)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Assignment, sboss_id, sub_request)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(RoutingPlan, assignments)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(NegotiationState, slice_id, replies, rollback_issued)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(NbSlice, slice_id, request, state, bindings, state_history, plan,
                                                negotiation, sb_slices, error)

} // namespace oss::nb
