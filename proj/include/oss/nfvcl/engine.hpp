#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catalog.hpp"
#include "oss/sim/nfvo.hpp"
#include "topology.hpp"

namespace oss::nfvcl
{

enum class InstanceState
{
    CREATED,
    DEPLOYING,
    CONFIGURING,
    READY,
    UPDATING,
    DESTROYING,
    DESTROYED,
    ERROR
};

bool instance_transition_allowed(InstanceState from, InstanceState to);
std::string to_string(InstanceState s);

struct OwnedNs
{
    std::string ns_id;
    AreaId area = 0;
    std::string role;
    std::string nsd_id;
    std::string signature;
};

/// Work an instance waits for before its next state change.
struct Pending
{
    std::string operation_id;
    std::vector<std::string> await_ns;
    std::vector<std::string> await_terminate;
    std::vector<std::string> await_scale;
    std::vector<std::string> configure_ns;
    std::vector<BundleSpec> post_bundles;
    std::vector<std::string> await_bundles;
    std::vector<std::string> destroy_queue;
    json new_body;
    std::optional<ResourceBudget> new_declared;
    std::string day2_action;
    json day2_params;
    bool failed = false;
    std::string failure;
};

struct BlueprintInstance
{
    std::string instance_id;
    std::string type_tag;
    std::string tenant_id;
    /// api: created through the NFVCL API; sb: created by the SB core for a slice.
    std::string origin = "api";
    bool operator_owned = false;
    json config;
    AreaSet areas;
    InstanceState state = InstanceState::CREATED;
    std::vector<std::string> owned_ns;
    std::vector<OwnedNs> ns;
    std::map<std::string, json> attached_slices;
    json runtime = json::object();
    ResourceBudget declared;
    int generation = 0;
    std::vector<StateStamp> history;
    std::optional<Pending> pending;
    std::string error;

    const OwnedNs* ns_in(AreaId area) const;
};

/// Covers identity, config, areas, state and owned NS; slice attachments are
/// excluded.
std::string state_hash(const BlueprintInstance& instance);

enum class OperationStatus
{
    PENDING,
    RUNNING,
    SUCCEEDED,
    FAILED
};

struct Operation
{
    std::string operation_id;
    std::string instance_id;
    std::string kind;  // create | update | destroy | day2 | attach
    std::string action;
    json params = json::object();
    OperationStatus status = OperationStatus::PENDING;
    json output = json::object();
    std::vector<std::string> logs;
    std::vector<std::string> bundles;
    bool critical = false;
    SimTime created_at = 0;
    std::optional<SimTime> finished_at;
};

enum class Mechanism
{
    playbook_bundle,
    chart_values
};

enum class BundleStatus
{
    PENDING,
    APPLIED,
    FAILED
};

struct ConfigBundle
{
    std::string bundle_id;
    std::string instance_id;
    std::string operation_id;
    std::string ns_id;
    std::string target_vnf;
    NfKind target_kind = NfKind::VNF;
    Mechanism mechanism = Mechanism::playbook_bundle;
    std::string manager;
    std::string purpose;
    json payload;
    BundleStatus status = BundleStatus::PENDING;
};

/// YAML document listing playbooks and files for the uniform VNF/PNF manager.
std::string render_playbook_bundle(const BundleSpec& spec);

struct Accepted
{
    BlueprintInstance instance;
    std::string operation_id;
};

/// Blueprint engine. Stateless over the store: every decision is taken from
/// persisted instance, NS and bundle documents, so a fresh engine over the
/// same store resumes in-flight work when the substrate reports progress.
class Engine
{
public:
    Engine(sim::Simulator& sim, sim::Nfvo& nfvo, sim::Vnfm& vnfm, Topology& topology);

    Accepted create(const std::string& tenant, const json& body, const std::string& origin = "api");
    Accepted update(const std::string& instance_id, const std::string& tenant, const json& body);
    Accepted destroy(const std::string& instance_id, const std::string& tenant, bool force = false);
    Operation day2(const std::string& instance_id, const std::string& tenant, const std::string& action,
                   const json& params);

    /// Binds a slice and applies its QoS as a configuration bundle.
    Operation attach_slice(const std::string& instance_id, const std::string& tenant, const std::string& slice_id,
                           const json& qos);
    BlueprintInstance detach_slice(const std::string& instance_id, const std::string& slice_id);

    BlueprintInstance get(const std::string& instance_id) const;
    /// UnknownInstance when the tenant cannot see the instance.
    BlueprintInstance get_for(const std::string& instance_id, const std::string& tenant) const;
    std::vector<BlueprintInstance> list(const std::string& tenant) const;
    Operation operation(const std::string& instance_id, const std::string& operation_id) const;
    std::vector<Operation> operations(const std::string& instance_id) const;
    std::vector<ConfigBundle> bundles(const std::string& instance_id) const;

    /// Declared compute of a create body without side effects.
    ResourceBudget estimate(const json& body) const;

    void subscribe(std::function<void(const BlueprintInstance&)> listener)
    {
        instance_listeners_.push_back(std::move(listener));
    }
    void subscribe_operations(std::function<void(const Operation&)> listener)
    {
        operation_listeners_.push_back(std::move(listener));
    }

    void reconcile(const std::string& instance_id);

private:
    struct Placement
    {
        std::optional<std::string> vim_id;
        std::optional<std::string> cluster_id;
    };

    Placement place(const NsTemplate& t, const std::string& tenant) const;
    void check_endpoints(const json& body, const std::string& tenant) const;
    OwnedNs launch(BlueprintInstance& inst, const NsTemplate& t, const json& body);
    std::string dispatch(const BlueprintInstance& inst, const OwnedNs& ns, const BundleSpec& spec,
                         const std::string& operation_id);
    void move(BlueprintInstance& inst, InstanceState to);
    void save(const BlueprintInstance& inst);
    Operation new_operation(const std::string& instance_id, const std::string& kind, const std::string& action,
                            const json& params);
    void save(const Operation& op);
    void finish(Operation op, bool ok, json output, const std::string& log);
    void fail_instance(BlueprintInstance& inst, const std::string& reason);
    void step_destroy(BlueprintInstance& inst);
    void on_ns_notice(const sim::NfvoNotice& notice);
    void on_bundle(const std::string& bundle_id, bool ok);
    void progress_operation(const std::string& operation_id);

    sim::Simulator& sim_;
    sim::Nfvo& nfvo_;
    sim::Vnfm& vnfm_;
    Topology& topology_;
    std::vector<std::function<void(const BlueprintInstance&)>> instance_listeners_;
    std::vector<std::function<void(const Operation&)>> operation_listeners_;
};

NLOHMANN_JSON_SERIALIZE_ENUM(InstanceState, {{InstanceState::CREATED, "CREATED"},
                                             {InstanceState::DEPLOYING, "DEPLOYING"},
                                             {InstanceState::CONFIGURING, "CONFIGURING"},
                                             {InstanceState::READY, "READY"},
                                             {InstanceState::UPDATING, "UPDATING"},
                                             {InstanceState::DESTROYING, "DESTROYING"},
                                             {InstanceState::DESTROYED, "DESTROYED"},
                                             {InstanceState::ERROR, "ERROR"}})
NLOHMANN_JSON_SERIALIZE_ENUM(OperationStatus, {{OperationStatus::PENDING, "PENDING"},
                                               {OperationStatus::RUNNING, "RUNNING"},
                                               {OperationStatus::SUCCEEDED, "SUCCEEDED"},
                                               {OperationStatus::FAILED, "FAILED"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Mechanism, {{Mechanism::playbook_bundle, "playbook_bundle"},
                                         {Mechanism::chart_values, "chart_values"}})
NLOHMANN_JSON_SERIALIZE_ENUM(BundleStatus, {{BundleStatus::PENDING, "PENDING"},
                                            {BundleStatus::APPLIED, "APPLIED"},
                                            {BundleStatus::FAILED, "FAILED"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OwnedNs, ns_id, area, role, nsd_id, signature)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Pending, operation_id, await_ns, await_terminate, await_scale,
                                                configure_ns, post_bundles, await_bundles, destroy_queue, new_body,
                                                new_declared, day2_action, day2_params, failed, failure)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(BlueprintInstance, instance_id, type_tag, tenant_id, origin,
                                                operator_owned, config, areas, state, owned_ns, ns, attached_slices,
                                                runtime, declared, generation, history, pending, error)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Operation, operation_id, instance_id, kind, action, params, status,
                                                output, logs, bundles, critical, created_at, finished_at)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ConfigBundle, bundle_id, instance_id, operation_id, ns_id,
                                                target_vnf, target_kind, mechanism, manager, purpose, payload, status)

} // namespace oss::nfvcl
