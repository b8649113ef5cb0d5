#include "oss/metal/metal.hpp"

#include <algorithm>
#include <deque>

#include "oss/core/tenancy.hpp"

namespace oss::metal
{

namespace
{
constexpr const char* kMachines = "machines";
constexpr const char* kOverlays = "overlays";
constexpr const char* kStacks = "stacks";

using Adjacency = std::map<std::string, std::set<std::string>>;

std::set<std::string> switch_ids(const sim::Inventory& inv)
{
    std::set<std::string> out;
    for (const auto& s : inv.switches)
        out.insert(s.id);
    return out;
}

bool contains(const std::vector<std::string>& v, const std::string& x)
{
    return std::find(v.begin(), v.end(), x) != v.end();
}

} // namespace

bool machine_transition_allowed(MachineState from, MachineState to)
{
    using S = MachineState;
    switch (from)
    {
    case S::NEW: return to == S::COMMISSIONING;
    case S::COMMISSIONING: return to == S::READY || to == S::FAILED;
    case S::READY: return to == S::ALLOCATED;
    case S::ALLOCATED: return to == S::DEPLOYING || to == S::FAILED;
    case S::DEPLOYING: return to == S::DEPLOYED || to == S::FAILED;
    case S::DEPLOYED: return to == S::RELEASING;
    case S::RELEASING: return to == S::READY;
    case S::FAILED: return false;
    }
    return false;
}

std::string to_string(MachineState s) { return json(s).get<std::string>(); }

const std::vector<std::string>& playbook_sequence(StackKind kind)
{
    static const std::vector<std::string> iaas{"prepare-hosts", "deploy-keystone", "deploy-nova", "deploy-neutron",
                                               "register-vim"};
    static const std::vector<std::string> paas{"prepare-hosts", "install-container-runtime",
                                               "bootstrap-control-plane", "join-workers"};
    return kind == StackKind::iaas_stack ? iaas : paas;
}

json graph_to_json(const TopologyGraph& g)
{
    json edges = json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"a", e.a}, {"b", e.b}, {"source", "lldp"}});
    return {{"nodes", g.nodes}, {"edges", edges}, {"complete", g.complete()}, {"unreachable", g.unreachable}};
}

std::vector<std::string> shortest_path(const Adjacency& adjacency, const std::string& from, const std::string& to)
{
    std::map<std::string, int> dist{{to, 0}};
    std::deque<std::string> queue{to};
    while (!queue.empty())
    {
        auto node = queue.front();
        queue.pop_front();
        auto it = adjacency.find(node);
        if (it == adjacency.end())
            continue;
        for (const auto& next : it->second)
            if (dist.emplace(next, dist[node] + 1).second)
                queue.push_back(next);
    }
    if (!dist.count(from))
        return {};
    std::vector<std::string> path{from};
    while (path.back() != to)
    {
        int d = dist[path.back()];
        for (const auto& next : adjacency.at(path.back()))
        {
            auto it = dist.find(next);
            if (it != dist.end() && it->second == d - 1)
            {
                path.push_back(next);
                break;
            }
        }
    }
    return path;
}

Metal::Metal(sim::Simulator& sim, sim::Fabric& fabric, nfvcl::Topology& topology)
    : sim_(sim), fabric_(fabric), topology_(topology)
{
    sim_.on("metal.commission", [this](const sim::ScheduledEvent& e) { on_commissioned(e); });
    sim_.on("metal.deploy", [this](const sim::ScheduledEvent& e) { on_deployed(e); });
    sim_.on("metal.release", [this](const sim::ScheduledEvent& e) { on_released(e); });
    sim_.on("metal.stack_step", [this](const sim::ScheduledEvent& e) { on_stack_step(e); });
}

// Machines --------------------------------------------------------------------

std::vector<Machine> Metal::enlist()
{
    auto inv = fabric_.inventory();
    if (!inv)
        return machines();
    auto known = machines();
    std::set<std::string> hostnames;
    for (const auto& m : known)
        hostnames.insert(m.hostname);
    std::size_t n = known.size();
    for (const auto& server : inv->servers)
    {
        if (hostnames.count(server.hostname))
            continue;
        Machine m;
        m.machine_id = "m" + std::to_string(++n);
        m.hostname = server.hostname;
        for (const auto& nic : server.nics)
            m.nics.push_back({nic.name, nic.mac, nic.switch_id, std::to_string(nic.port)});
        m.history.push_back({to_string(m.state), sim_.now()});
        insert(sim_.store(), kMachines, m.machine_id, m);
        sim_.log("metal", m.machine_id, "machine.NEW", {{"hostname", m.hostname}});
    }
    return machines();
}

Machine Metal::machine(const std::string& machine_id) const
{
    return require<Machine>(sim_.store(), kMachines, machine_id, Errc::UnknownMachine);
}

std::vector<Machine> Metal::machines() const
{
    auto out = load_all<Machine>(sim_.store(), kMachines);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return natural_less(a.machine_id, b.machine_id); });
    return out;
}

Machine Metal::move(const std::string& machine_id, MachineState to, const std::function<void(Machine&)>& also)
{
    MachineState from{};
    auto m = update<Machine>(
        sim_.store(), kMachines, machine_id,
        [&](Machine& m) {
            from = m.state;
            if (!machine_transition_allowed(m.state, to))
                fail(Errc::InvalidState, machine_id + " is " + to_string(m.state) + ", cannot go " + to_string(to),
                     {{"state", m.state}});
            m.state = to;
            m.history.push_back({to_string(to), sim_.now()});
            if (also)
                also(m);
        },
        Errc::UnknownMachine);
    sim_.log("metal", machine_id, "machine." + to_string(to), {{"from", to_string(from)}});
    return m;
}

void Metal::uncharge(Machine& m)
{
    if (m.charged && m.tenant_id)
        tenancy::release(sim_.store(), *m.tenant_id, tenancy::Bucket::machines, *m.charged);
    m.charged.reset();
    m.tenant_id.reset();
}

Machine Metal::commission(const std::string& machine_id)
{
    auto m = machine(machine_id);
    if (m.state != MachineState::NEW)
        fail(Errc::InvalidState, machine_id + " is " + to_string(m.state) + ", commissioning needs NEW",
             {{"state", m.state}});
    move(machine_id, MachineState::COMMISSIONING);
    if (!fabric_.power(m.hostname, true))
        return move(machine_id, MachineState::FAILED, [](Machine& m) {
            m.power = Power::OFF;
            m.failure = "power controller fault";
        });
    auto decision = sim_.check("machine.commission", {machine_id, m.hostname});
    m = update<Machine>(sim_.store(), kMachines, machine_id, [](Machine& m) { m.power = Power::ON; });
    sim_.schedule(sim_.durations().commission + decision.extra_delay, "metal.commission", machine_id,
                  {{"fail", decision.failed()}});
    return m;
}

void Metal::on_commissioned(const sim::ScheduledEvent& e)
{
    auto m = machine(e.subject);
    if (m.state != MachineState::COMMISSIONING)
        return;
    fabric_.power(m.hostname, false);
    if (e.payload.value("fail", false))
    {
        move(m.machine_id, MachineState::FAILED, [](Machine& m) {
            m.power = Power::OFF;
            m.failure = "ProbeFailed: hardware probe did not answer";
        });
        return;
    }
    auto inv = fabric_.require_inventory();
    const auto* server = inv.server(m.hostname);
    move(m.machine_id, MachineState::READY, [&](Machine& m) {
        m.power = Power::OFF;
        m.resources = server->resources();
        m.nics.clear();
        for (const auto& nic : server->nics)
            m.nics.push_back({nic.name, nic.mac, nic.switch_id, std::to_string(nic.port)});
    });
}

Machine Metal::deploy(const std::string& machine_id, const std::string& image, const std::string& tenant_id)
{
    auto m = machine(machine_id);
    if (m.state != MachineState::READY)
        fail(Errc::InvalidState, machine_id + " is " + to_string(m.state) + ", deployment needs READY",
             {{"state", m.state}});
    auto inv = fabric_.require_inventory();
    if (std::find(inv.images.begin(), inv.images.end(), image) == inv.images.end())
        fail(Errc::UnknownImage, "no image '" + image + "'");
    if (tenant_id != tenancy::kOperatorTenant)
        tenancy::require_tenant(sim_.store(), tenant_id);
    tenancy::reserve(sim_.store(), tenant_id, tenancy::Bucket::machines, *m.resources);

    move(machine_id, MachineState::ALLOCATED, [&](Machine& m) {
        m.tenant_id = tenant_id;
        m.charged = m.resources;
    });
    if (!fabric_.power(m.hostname, true))
        return move(machine_id, MachineState::FAILED, [&](Machine& m) {
            uncharge(m);
            m.failure = "power controller fault";
        });
    auto decision = sim_.check("machine.deploy", {machine_id, m.hostname});
    m = move(machine_id, MachineState::DEPLOYING, [&](Machine& m) {
        m.power = Power::ON;
        m.os_image = image;
    });
    sim_.schedule(sim_.durations().os_deploy + decision.extra_delay, "metal.deploy", machine_id,
                  {{"fail", decision.failed()}});
    return m;
}

void Metal::on_deployed(const sim::ScheduledEvent& e)
{
    auto m = machine(e.subject);
    if (m.state != MachineState::DEPLOYING)
        return;
    if (e.payload.value("fail", false))
    {
        move(m.machine_id, MachineState::FAILED, [&](Machine& m) {
            uncharge(m);
            m.os_image.reset();
            m.failure = "OS deployment failed";
        });
        return;
    }
    move(m.machine_id, MachineState::DEPLOYED);
}

Machine Metal::set_power(const std::string& machine_id, Power power)
{
    auto m = machine(machine_id);
    if (m.power == power)
        return m;
    if (!fabric_.power(m.hostname, power == Power::ON))
        fail(Errc::MachineUnreachable, "power controller of " + machine_id + " did not answer");
    bool interrupts = power == Power::OFF &&
                      (m.state == MachineState::DEPLOYING || m.state == MachineState::COMMISSIONING);
    if (interrupts)
        return move(machine_id, MachineState::FAILED, [&](Machine& m) {
            m.power = Power::OFF;
            uncharge(m);
            m.os_image.reset();
            m.failure = "interrupted by power off";
        });
    return update<Machine>(sim_.store(), kMachines, machine_id, [&](Machine& m) { m.power = power; });
}

Machine Metal::release(const std::string& machine_id)
{
    auto m = machine(machine_id);
    if (m.state != MachineState::DEPLOYED)
        fail(Errc::InvalidState, machine_id + " is " + to_string(m.state) + ", release needs DEPLOYED",
             {{"state", m.state}});
    drop_from_overlays(m);
    m = move(machine_id, MachineState::RELEASING, [&](Machine& m) {
        uncharge(m);
        m.os_image.reset();
    });
    sim_.schedule(sim_.durations().release, "metal.release", machine_id);
    return m;
}

void Metal::on_released(const sim::ScheduledEvent& e)
{
    auto m = machine(e.subject);
    if (m.state != MachineState::RELEASING)
        return;
    if (m.power == Power::ON)
        fabric_.power(m.hostname, false);
    move(m.machine_id, MachineState::READY, [](Machine& m) { m.power = Power::OFF; });
}

// Topology --------------------------------------------------------------------

TopologyGraph Metal::discover()
{
    auto inv = fabric_.require_inventory();
    TopologyGraph g;
    std::set<std::string> down;
    std::map<std::string, std::map<std::string, sim::Neighbor>> tables;
    for (const auto& sw : inv.switches)
    {
        try
        {
            tables[sw.id] = fabric_.read_lldp(sw.id);
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::SwitchUnreachable)
                throw;
            down.insert(sw.id);
            g.unreachable.push_back(sw.id);
        }
    }
    for (const auto& s : inv.servers)
        g.nodes.insert(s.hostname);
    for (const auto& [sw, table] : tables)
    {
        g.nodes.insert(sw);
        for (const auto& [port, peer] : table)
            if (!down.count(peer.peer_device))
                g.edges.insert(sim::Cable::normalized({sw, port}, {peer.peer_device, peer.peer_port}));
    }
    return g;
}

// Overlays --------------------------------------------------------------------

void Metal::wire(OverlayNetwork& overlay, const TopologyGraph& graph)
{
    auto inv = fabric_.require_inventory();
    auto switches = switch_ids(inv);
    Adjacency adj;
    std::map<std::pair<std::string, std::string>, sim::Cable> cable_between;
    for (const auto& e : graph.edges)
    {
        if (!switches.count(e.a.device) || !switches.count(e.b.device))
            continue;
        adj[e.a.device].insert(e.b.device);
        adj[e.b.device].insert(e.a.device);
        auto key = std::minmax(e.a.device, e.b.device);
        auto it = cable_between.find(key);
        if (it == cable_between.end() || e < it->second)
            cable_between[key] = e;
    }

    std::set<std::string> member_switches;
    for (const auto& p : overlay.member_ports)
        member_switches.insert(p.device);
    std::set<sim::Cable> trunks;
    for (auto a = member_switches.begin(); a != member_switches.end(); ++a)
        for (auto b = std::next(a); b != member_switches.end(); ++b)
        {
            auto path = shortest_path(adj, *a, *b);
            if (path.empty())
                fail(Errc::DisconnectedMembers, "no switch path between " + *a + " and " + *b,
                     {{"from", *a}, {"to", *b}});
            for (std::size_t i = 0; i + 1 < path.size(); ++i)
                trunks.insert(cable_between.at(std::minmax(path[i], path[i + 1])));
        }
    overlay.trunk_links.assign(trunks.begin(), trunks.end());

    for (const auto& p : overlay.member_ports)
        fabric_.set_access(p.device, p.port, overlay.vlan_id);
    for (const auto& c : overlay.trunk_links)
    {
        fabric_.add_trunk_vlan(c.a.device, c.a.port, overlay.vlan_id);
        fabric_.add_trunk_vlan(c.b.device, c.b.port, overlay.vlan_id);
    }
}

void Metal::unwire(const OverlayNetwork& overlay)
{
    for (const auto& p : overlay.member_ports)
        fabric_.remove_vlan(p.device, p.port, overlay.vlan_id);
    for (const auto& c : overlay.trunk_links)
    {
        fabric_.remove_vlan(c.a.device, c.a.port, overlay.vlan_id);
        fabric_.remove_vlan(c.b.device, c.b.port, overlay.vlan_id);
    }
}

OverlayNetwork Metal::create_overlay(const OverlayRequest& request)
{
    if (request.name.empty())
        fail(Errc::SchemaViolation, "overlay name must not be empty");
    if (request.machines.empty())
        fail(Errc::SchemaViolation, "an overlay needs at least one machine");
    auto tenant = tenancy::require_tenant(sim_.store(), request.tenant_id);
    for (const auto& o : overlays())
        if (o.tenant_id == tenant.id && o.name == request.name)
            fail(Errc::DuplicateName, "overlay '" + request.name + "' already exists");

    std::vector<Machine> members;
    std::set<std::string> seen;
    for (const auto& id : request.machines)
    {
        if (!seen.insert(id).second)
            fail(Errc::BadRequest, id + " is listed twice");
        auto m = machine(id);
        if (m.tenant_id != tenant.id)
            fail(Errc::TenantMismatch, id + " is not allocated to tenant " + tenant.id);
        members.push_back(std::move(m));
    }

    std::set<int> used;
    for (const auto& o : overlays())
        if (o.tenant_id == tenant.id)
            used.insert(o.vlan_id);
    std::optional<int> vlan;
    for (int v = tenant.vlan_range.first; v <= tenant.vlan_range.last && !vlan; ++v)
        if (!used.count(v))
            vlan = v;
    if (!vlan)
        fail(Errc::VlanExhausted, "tenant " + tenant.id + " has no free VLAN");

    OverlayNetwork overlay{"", request.name, *vlan, tenant.id, request.machines, {}, {}};
    for (const auto& m : members)
    {
        std::optional<sim::PortRef> port;
        for (const auto& nic : m.nics)
        {
            auto cfg = fabric_.ports(nic.switch_id);
            if (!cfg.count(nic.port))
            {
                port = sim::PortRef{nic.switch_id, nic.port};
                break;
            }
        }
        if (!port)
            fail(Errc::NoFreeNic, m.machine_id + " has no unconfigured NIC port", {{"machine", m.machine_id}});
        overlay.member_ports.push_back(*port);
    }

    auto graph = discover();
    overlay.overlay_id = next_id(sim_.store(), "overlay");
    wire(overlay, graph);
    insert(sim_.store(), kOverlays, overlay.overlay_id, overlay);
    sim_.log("metal", overlay.overlay_id, "overlay.created",
             {{"tenant", tenant.id}, {"vlan", overlay.vlan_id}, {"members", overlay.members}});
    return overlay;
}

void Metal::delete_overlay(const std::string& overlay_id, const std::string& tenant)
{
    auto o = overlay(overlay_id);
    if (o.tenant_id != tenant && tenant != tenancy::kOperatorTenant)
        fail(Errc::UnknownOverlay, "overlays/" + overlay_id + " not found");
    unwire(o);
    auto doc = sim_.store().get(kOverlays, overlay_id);
    sim_.store().commit(kOverlays, overlay_id, nullptr, doc->revision);
    sim_.log("metal", overlay_id, "overlay.deleted", {{"tenant", o.tenant_id}});
}

OverlayNetwork Metal::overlay(const std::string& overlay_id) const
{
    auto doc = sim_.store().get(kOverlays, overlay_id);
    if (!doc || doc->body.is_null())
        fail(Errc::UnknownOverlay, "overlays/" + overlay_id + " not found");
    return doc->body.get<OverlayNetwork>();
}

std::vector<OverlayNetwork> Metal::overlays() const
{
    std::vector<OverlayNetwork> out;
    for (const auto& doc : sim_.store().list(kOverlays))
        if (!doc.body.is_null())
            out.push_back(doc.body.get<OverlayNetwork>());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return natural_less(a.overlay_id, b.overlay_id); });
    return out;
}

void Metal::drop_from_overlays(const Machine& m)
{
    for (auto o : overlays())
    {
        auto it = std::find(o.members.begin(), o.members.end(), m.machine_id);
        if (it == o.members.end())
            continue;
        auto idx = it - o.members.begin();
        unwire(o);
        o.members.erase(it);
        o.member_ports.erase(o.member_ports.begin() + idx);
        o.trunk_links.clear();
        if (!o.member_ports.empty())
            wire(o, discover());
        auto doc = sim_.store().get(kOverlays, o.overlay_id);
        sim_.store().commit(kOverlays, o.overlay_id, o, doc->revision);
        sim_.log("metal", o.overlay_id, "overlay.member.removed", {{"machine", m.machine_id}});
    }
}

// Stacks ----------------------------------------------------------------------

Stack Metal::install_stack(const std::string& tenant, const StackPlan& plan)
{
    if (plan.machines.empty())
        fail(Errc::SchemaViolation, "a stack needs at least one machine");
    if (plan.areas.empty())
        fail(Errc::EmptyAreaSet, "a stack must serve at least one area");
    std::vector<Machine> members;
    for (const auto& id : plan.machines)
        members.push_back(machine(id));
    std::string owner = tenant;
    if (owner == tenancy::kOperatorTenant && members.front().tenant_id)
        owner = *members.front().tenant_id;
    for (const auto& m : members)
    {
        if (m.state != MachineState::DEPLOYED)
            fail(Errc::InvalidState, m.machine_id + " is " + to_string(m.state) + ", stacks need DEPLOYED",
                 {{"machine", m.machine_id}});
        if (m.tenant_id != owner)
            fail(Errc::TenantMismatch, m.machine_id + " is not allocated to tenant " + owner);
    }
    if (plan.mgmt == plan.data)
        fail(Errc::BadRequest, "management and data overlays must differ");
    for (const auto& ref : {plan.mgmt, plan.data})
    {
        auto o = overlay(ref);
        if (o.tenant_id != owner)
            fail(Errc::TenantMismatch, "overlay " + ref + " belongs to another tenant");
        for (const auto& m : members)
            if (!contains(o.members, m.machine_id))
                fail(Errc::BadRequest, m.machine_id + " is not attached to overlay " + ref);
    }
    if (plan.kind == StackKind::paas_vm)
        for (auto area : plan.areas)
            if (!topology_.vim_for(area, owner))
                fail(Errc::NoVimForArea, "container platform on VMs needs a VIM in area " + std::to_string(area));
    for (const auto& m : members)
        if (m.power != Power::ON)
            fail(Errc::MachineUnreachable, m.machine_id + " is powered off", {{"machine", m.machine_id}});

    Stack s;
    s.stack_id = next_id(sim_.store(), "stack");
    s.tenant_id = owner;
    s.plan = plan;
    const auto& steps = playbook_sequence(plan.kind);
    for (std::size_t i = 0; i < steps.size(); ++i)
        s.runs.push_back({static_cast<int>(i + 1), steps[i], plan.machines, RunStatus::PENDING, {}, {}});
    insert(sim_.store(), kStacks, s.stack_id, s);
    sim_.log("metal", s.stack_id, "stack.started", {{"kind", plan.kind}, {"machines", plan.machines}});
    schedule_step(s, 0);
    return stack(s.stack_id);
}

void Metal::schedule_step(const Stack& s, int step)
{
    const auto& run = s.runs[step];
    std::vector<std::string> subjects{s.stack_id, run.playbook, s.stack_id + "/" + std::to_string(run.step)};
    subjects.insert(subjects.end(), run.machines.begin(), run.machines.end());
    auto decision = sim_.check("playbook.step", subjects);
    update<Stack>(sim_.store(), kStacks, s.stack_id, [&](Stack& st) {
        st.runs[step].status = RunStatus::RUNNING;
        st.runs[step].started_at = sim_.now();
    });
    sim_.schedule(sim_.durations().playbook_step + decision.extra_delay, "metal.stack_step", s.stack_id,
                  {{"step", step}, {"fail", decision.failed()}});
}

void Metal::on_stack_step(const sim::ScheduledEvent& e)
{
    auto s = stack(e.subject);
    if (s.status != StackStatus::RUNNING)
        return;
    int step = e.payload.at("step").get<int>();
    std::string failure;
    if (e.payload.value("fail", false))
        failure = "StepFailed: " + s.runs[step].playbook;
    for (const auto& id : s.plan.machines)
    {
        auto m = machine(id);
        if (failure.empty() && (m.state != MachineState::DEPLOYED || m.power != Power::ON))
            failure = "MachineUnreachable: " + id;
    }
    auto& run = s.runs[step];
    run.finished_at = sim_.now();
    run.status = failure.empty() ? RunStatus::SUCCEEDED : RunStatus::FAILED;
    sim_.log("metal", s.stack_id, failure.empty() ? "playbook.succeeded" : "playbook.failed",
             {{"step", run.step}, {"playbook", run.playbook}});
    if (!failure.empty())
    {
        for (std::size_t i = step + 1; i < s.runs.size(); ++i)
            s.runs[i].status = RunStatus::SKIPPED;
        s.status = StackStatus::FAILED;
        s.failure = failure;
        sim_.log("metal", s.stack_id, "stack.failed", {{"reason", failure}});
    }
    else if (static_cast<std::size_t>(step + 1) == s.runs.size())
        finish_stack(s);
    auto doc = sim_.store().get(kStacks, s.stack_id);
    sim_.store().commit(kStacks, s.stack_id, s, doc->revision);
    if (s.status == StackStatus::RUNNING)
        schedule_step(s, step + 1);
}

void Metal::finish_stack(Stack& s)
{
    ResourceBudget capacity;
    for (const auto& id : s.plan.machines)
        capacity += *machine(id).resources;
    if (s.plan.kind == StackKind::iaas_stack)
    {
        auto vim = topology_.register_vim({"", s.tenant_id, s.plan.areas, capacity, "stack"});
        s.registered = vim.vim_id;
    }
    else
    {
        nfvcl::ClusterRecord c{"", s.tenant_id, s.plan.areas, capacity, json(s.plan.kind).get<std::string>(), {}};
        if (s.plan.kind == StackKind::paas_vm)
            if (auto vim = topology_.vim_for(*s.plan.areas.begin(), s.tenant_id))
                c.vim_id = vim->vim_id;
        s.registered = topology_.register_cluster(c).cluster_id;
    }
    s.status = StackStatus::SUCCEEDED;
    sim_.log("metal", s.stack_id, "stack.succeeded", {{"registered", *s.registered}, {"capacity", capacity}});
}

Stack Metal::stack(const std::string& stack_id) const
{
    return require<Stack>(sim_.store(), kStacks, stack_id, Errc::NotFound);
}

std::vector<Stack> Metal::stacks() const
{
    auto out = load_all<Stack>(sim_.store(), kStacks);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return natural_less(a.stack_id, b.stack_id); });
    return out;
}

} // namespace oss::metal
