#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oss/nfvcl/engine.hpp"

namespace oss::sb
{

struct ProgrammabilityProfile
{
    std::set<std::string> layers_enabled{"metal", "iaas", "paas", "nfv"};
    json network_endpoints = {{"mgt", "control"},
                              {"data_nets", json::array({{{"mode", "layer2"}, {"net_name", "control"}}})}};
};

/// InvalidProfile when a layer is unknown or a dependency is missing.
void validate_profile(const ProgrammabilityProfile& profile);

enum class ActionKind
{
    INSTANTIATE,
    UPDATE
};

struct BlueprintAction
{
    ActionKind kind = ActionKind::INSTANTIATE;
    std::string blueprint_type;
    std::optional<std::string> target_instance;
    /// Create body for INSTANTIATE; for UPDATE the new body, or null when only
    /// the slice attachment changes.
    json config;
    std::string reason;
};

/// A live instance as seen by the planner.
struct LiveInstance
{
    std::string instance_id;
    std::string type_tag;
    std::string tenant_id;
    AreaSet areas;
};

/// Pure planner. `core_areas` lists the requested areas whose kind is core.
/// Action configs may carry "$action-<i>" placeholders naming the instance
/// created by an earlier action.
std::vector<BlueprintAction> plan_slice(const SliceRequest& request, const ProgrammabilityProfile& profile,
                                        const std::vector<LiveInstance>& live, const AreaSet& core_areas);

struct SliceBinding
{
    std::string slice_id;
    std::string blueprint_instance_id;
    AreaSet contributed_areas;
};

struct Executed
{
    std::string instance_id;
    bool created = false;
};

struct SbSlice
{
    std::string slice_id;
    SliceRequest request;
    SliceState state = SliceState::REQUESTED;
    std::vector<SliceBinding> bindings;
    std::vector<StateStamp> state_history;
    std::vector<BlueprintAction> plan;
    std::size_t cursor = 0;
    /// start | await_ready | await_attach
    std::string phase = "start";
    std::string current_instance;
    std::string waiting_op;
    std::vector<Executed> executed;
    std::vector<std::string> awaiting_destroy;
    std::string error;
    std::string error_code;
};

/// Per-domain slice processing on top of the blueprint engine.
class SbCore
{
public:
    SbCore(sim::Simulator& sim, nfvcl::Engine& engine);

    ProgrammabilityProfile profile() const;
    ProgrammabilityProfile set_profile(const ProgrammabilityProfile& profile);

    /// Validates, plans and gates on quota before anything runs. Returns the
    /// record as it stands after the first action was started.
    SbSlice submit(const SliceRequest& request);
    SbSlice modify(const std::string& slice_id, const std::optional<AreaSet>& areas,
                   const std::optional<QosProfile>& qos);
    SbSlice remove(const std::string& slice_id);

    SbSlice slice(const std::string& slice_id) const;
    std::vector<SbSlice> slices() const;
    std::vector<BlueprintAction> preview(const SliceRequest& request) const;

    /// Re-drives every non-terminal slice; needed after a restart.
    void reconcile_all();

private:
    std::vector<LiveInstance> live() const;
    ResourceBudget quota_ask(const SliceRequest& request, const std::vector<BlueprintAction>& plan) const;
    void kick(const std::string& slice_id);
    void drive(SbSlice& s);
    void step_forward(SbSlice& s);
    void step_teardown(SbSlice& s);
    void fail_slice(SbSlice& s, const std::string& code, const std::string& reason);
    void set_state(SbSlice& s, SliceState to);
    void save(const SbSlice& s);
    void on_instance(const nfvcl::BlueprintInstance& inst);
    void on_operation(const nfvcl::Operation& op);

    sim::Simulator& sim_;
    nfvcl::Engine& engine_;
    std::set<std::string> queue_;
    bool busy_ = false;
};

NLOHMANN_JSON_SERIALIZE_ENUM(ActionKind, {{ActionKind::INSTANTIATE, "INSTANTIATE"}, {ActionKind::UPDATE, "UPDATE"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ProgrammabilityProfile, layers_enabled, network_endpoints)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BlueprintAction, kind, blueprint_type, target_instance, config, reason)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SliceBinding, slice_id, blueprint_instance_id, contributed_areas)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Executed, instance_id, created)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SbSlice, slice_id, request, state, bindings, state_history, plan,
                                                cursor, phase, current_instance, waiting_op, executed,
                                                awaiting_destroy, error, error_code)

} // namespace oss::sb
