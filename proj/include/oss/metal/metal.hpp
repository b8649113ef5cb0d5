#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oss/nfvcl/topology.hpp"
#include "oss/sim/fabric.hpp"

namespace oss::metal
{

enum class MachineState
{
    NEW,
    COMMISSIONING,
    READY,
    ALLOCATED,
    DEPLOYING,
    DEPLOYED,
    RELEASING,
    FAILED
};

enum class Power
{
    ON,
    OFF
};

bool machine_transition_allowed(MachineState from, MachineState to);
std::string to_string(MachineState s);

struct Nic
{
    std::string name;
    std::string mac;
    std::string switch_id;
    std::string port;
};

struct Machine
{
    std::string machine_id;
    std::string hostname;
    MachineState state = MachineState::NEW;
    Power power = Power::OFF;
    std::optional<ResourceBudget> resources;
    std::vector<Nic> nics;
    std::optional<std::string> os_image;
    std::optional<std::string> tenant_id;
    /// What the tenant's machines bucket was charged; released exactly once.
    std::optional<ResourceBudget> charged;
    std::vector<StateStamp> history;
    std::string failure;
};

struct TopologyGraph
{
    std::set<std::string> nodes;
    std::set<sim::Cable> edges;
    std::vector<std::string> unreachable;

    bool complete() const { return unreachable.empty(); }
};

json graph_to_json(const TopologyGraph& g);

/// Lexicographically smallest shortest node path from `from` to `to` over an
/// undirected adjacency; empty when disconnected.
std::vector<std::string> shortest_path(const std::map<std::string, std::set<std::string>>& adjacency,
                                       const std::string& from, const std::string& to);

struct OverlayNetwork
{
    std::string overlay_id;
    std::string name;
    int vlan_id = 0;
    std::string tenant_id;
    std::vector<std::string> members;
    std::vector<sim::PortRef> member_ports;
    std::vector<sim::Cable> trunk_links;
};

struct OverlayRequest
{
    std::string name;
    std::string tenant_id;
    std::vector<std::string> machines;
};

enum class StackKind
{
    iaas_stack,
    paas_vm,
    paas_baremetal
};

const std::vector<std::string>& playbook_sequence(StackKind kind);

struct StackPlan
{
    StackKind kind = StackKind::iaas_stack;
    std::vector<std::string> machines;
    std::string mgmt;
    std::string data;
    AreaSet areas;
};

enum class RunStatus
{
    PENDING,
    RUNNING,
    SUCCEEDED,
    FAILED,
    SKIPPED
};

struct PlaybookRun
{
    int step = 0;
    std::string playbook;
    std::vector<std::string> machines;
    RunStatus status = RunStatus::PENDING;
    std::optional<SimTime> started_at;
    std::optional<SimTime> finished_at;
};

enum class StackStatus
{
    RUNNING,
    SUCCEEDED,
    FAILED
};

struct Stack
{
    std::string stack_id;
    std::string tenant_id;
    StackPlan plan;
    StackStatus status = StackStatus::RUNNING;
    std::vector<PlaybookRun> runs;
    std::optional<std::string> registered;
    std::string failure;
};

/// Bare-metal fleet, physical topology and overlays, and zero-touch stacks.
class Metal
{
public:
    Metal(sim::Simulator& sim, sim::Fabric& fabric, nfvcl::Topology& topology);

    /// One NEW machine per inventory server not yet enlisted.
    std::vector<Machine> enlist();
    Machine commission(const std::string& machine_id);
    Machine deploy(const std::string& machine_id, const std::string& image, const std::string& tenant_id);
    Machine set_power(const std::string& machine_id, Power power);
    Machine release(const std::string& machine_id);

    Machine machine(const std::string& machine_id) const;
    std::vector<Machine> machines() const;

    /// LLDP walk over every switch. Unreachable switches are left out and
    /// listed in the result.
    TopologyGraph discover();

    OverlayNetwork create_overlay(const OverlayRequest& request);
    void delete_overlay(const std::string& overlay_id, const std::string& tenant);
    OverlayNetwork overlay(const std::string& overlay_id) const;
    std::vector<OverlayNetwork> overlays() const;

    Stack install_stack(const std::string& tenant, const StackPlan& plan);
    Stack stack(const std::string& stack_id) const;
    std::vector<Stack> stacks() const;

private:
    Machine move(const std::string& machine_id, MachineState to, const std::function<void(Machine&)>& also = {});
    void on_commissioned(const sim::ScheduledEvent& e);
    void on_deployed(const sim::ScheduledEvent& e);
    void on_released(const sim::ScheduledEvent& e);
    void on_stack_step(const sim::ScheduledEvent& e);
    void schedule_step(const Stack& stack, int step);
    void finish_stack(Stack& stack);
    void uncharge(Machine& m);
    void wire(OverlayNetwork& overlay, const TopologyGraph& graph);
    void unwire(const OverlayNetwork& overlay);
    void drop_from_overlays(const Machine& m);

    sim::Simulator& sim_;
    sim::Fabric& fabric_;
    nfvcl::Topology& topology_;
};

NLOHMANN_JSON_SERIALIZE_ENUM(MachineState, {{MachineState::NEW, "NEW"},
                                            {MachineState::COMMISSIONING, "COMMISSIONING"},
                                            {MachineState::READY, "READY"},
                                            {MachineState::ALLOCATED, "ALLOCATED"},
                                            {MachineState::DEPLOYING, "DEPLOYING"},
                                            {MachineState::DEPLOYED, "DEPLOYED"},
                                            {MachineState::RELEASING, "RELEASING"},
                                            {MachineState::FAILED, "FAILED"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Power, {{Power::ON, "ON"}, {Power::OFF, "OFF"}})
NLOHMANN_JSON_SERIALIZE_ENUM(StackKind, {{StackKind::iaas_stack, "iaas_stack"},
                                         {StackKind::paas_vm, "paas_vm"},
                                         {StackKind::paas_baremetal, "paas_baremetal"}})
NLOHMANN_JSON_SERIALIZE_ENUM(RunStatus, {{RunStatus::PENDING, "PENDING"},
                                         {RunStatus::RUNNING, "RUNNING"},
                                         {RunStatus::SUCCEEDED, "SUCCEEDED"},
                                         {RunStatus::FAILED, "FAILED"},
                                         {RunStatus::SKIPPED, "SKIPPED"}})
NLOHMANN_JSON_SERIALIZE_ENUM(StackStatus, {{StackStatus::RUNNING, "RUNNING"},
                                           {StackStatus::SUCCEEDED, "SUCCEEDED"},
                                           {StackStatus::FAILED, "FAILED"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Nic, name, mac, switch_id, port)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Machine, machine_id, hostname, state, power, resources, nics,
                                                os_image, tenant_id, charged, history, failure)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OverlayNetwork, overlay_id, name, vlan_id, tenant_id, members,
                                                member_ports, trunk_links)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OverlayRequest, name, tenant_id, machines)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(StackPlan, kind, machines, mgmt, data, areas)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PlaybookRun, step, playbook, machines, status, started_at,
                                                finished_at)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Stack, stack_id, tenant_id, plan, status, runs, registered, failure)

} // namespace oss::metal
