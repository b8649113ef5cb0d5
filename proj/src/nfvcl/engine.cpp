#include "oss/nfvcl/engine.hpp"

#include <algorithm>

#include <yaml-cpp/yaml.h>

#include "oss/core/tenancy.hpp"

namespace oss::nfvcl
{

namespace
{
constexpr const char* kInstances = "blueprints";
constexpr const char* kOperations = "operations";
constexpr const char* kBundles = "bundles";
constexpr const char* kNsIndex = "nfvcl_ns_index";

YAML::Node to_node(const json& v)
{
    YAML::Node n;
    if (v.is_object())
    {
        for (const auto& [k, item] : v.items())
            n[k] = to_node(item);
    }
    else if (v.is_array())
    {
        n = YAML::Node(YAML::NodeType::Sequence);
        for (const auto& item : v)
            n.push_back(to_node(item));
    }
    else if (v.is_string())
        n = v.get<std::string>();
    else if (v.is_boolean())
        n = v.get<bool>();
    else if (v.is_number_integer())
        n = v.get<std::int64_t>();
    else if (v.is_number())
        n = v.get<double>();
    return n;
}

ResourceBudget positive_part(const ResourceBudget& b)
{
    return {std::max<std::int64_t>(b.vcpus, 0), std::max<std::int64_t>(b.ram_gb, 0),
            std::max<std::int64_t>(b.storage_gb, 0)};
}

bool contains(const std::vector<std::string>& v, const std::string& x)
{
    return std::find(v.begin(), v.end(), x) != v.end();
}

std::string vdu_key(const std::string& vnfd, const std::string& vdu) { return vnfd + "/" + vdu; }

} // namespace

bool instance_transition_allowed(InstanceState from, InstanceState to)
{
    using S = InstanceState;
    if (from == S::DESTROYED)
        return false;
    if (to == S::ERROR)
        return from != S::ERROR;
    if (to == S::DESTROYING)
        return from != S::DESTROYING;
    switch (from)
    {
    case S::CREATED: return to == S::DEPLOYING;
    case S::DEPLOYING: return to == S::CONFIGURING;
    case S::CONFIGURING: return to == S::READY;
    case S::READY: return to == S::UPDATING;
    case S::UPDATING: return to == S::READY;
    case S::DESTROYING: return to == S::DESTROYED;
    default: return false;
    }
}

std::string to_string(InstanceState s) { return json(s).get<std::string>(); }

const OwnedNs* BlueprintInstance::ns_in(AreaId area) const
{
    for (const auto& n : ns)
        if (n.area == area)
            return &n;
    return nullptr;
}

std::string state_hash(const BlueprintInstance& i)
{
    return content_hash({{"instance_id", i.instance_id},
                         {"type_tag", i.type_tag},
                         {"tenant_id", i.tenant_id},
                         {"config", i.config},
                         {"areas", i.areas},
                         {"state", i.state},
                         {"owned_ns", i.owned_ns}});
}

std::string render_playbook_bundle(const BundleSpec& spec)
{
    json doc = {{"target", spec.vnfd_id},
                {"purpose", spec.purpose},
                {"playbooks", json::array()},
                {"files", json::array({{{"path", "/etc/flex/" + spec.purpose + ".vars.json"},
                                        {"content", canonical(spec.vars)}}})}};
    for (const auto& p : spec.playbooks)
        doc["playbooks"].push_back({{"name", p}, {"vars", spec.vars}});
    YAML::Emitter out;
    out << to_node(doc);
    return out.c_str();
}

Engine::Engine(sim::Simulator& sim, sim::Nfvo& nfvo, sim::Vnfm& vnfm, Topology& topology)
    : sim_(sim), nfvo_(nfvo), vnfm_(vnfm), topology_(topology)
{
    nfvo_.subscribe([this](const sim::NfvoNotice& n) { on_ns_notice(n); });
    vnfm_.subscribe([this](const std::string& bundle_id, bool ok) { on_bundle(bundle_id, ok); });
}

// Persistence -----------------------------------------------------------------

void Engine::save(const BlueprintInstance& inst)
{
    auto& store = sim_.store();
    auto doc = store.get(kInstances, inst.instance_id);
    store.commit(kInstances, inst.instance_id, inst, doc ? doc->revision : 0);
    for (const auto& l : instance_listeners_)
        l(inst);
}

void Engine::save(const Operation& op)
{
    auto& store = sim_.store();
    auto doc = store.get(kOperations, op.operation_id);
    store.commit(kOperations, op.operation_id, op, doc ? doc->revision : 0);
    if (op.status == OperationStatus::SUCCEEDED || op.status == OperationStatus::FAILED)
        for (const auto& l : operation_listeners_)
            l(op);
}

Operation Engine::new_operation(const std::string& instance_id, const std::string& kind, const std::string& action,
                                const json& params)
{
    Operation op;
    op.operation_id = next_id(sim_.store(), "op");
    op.instance_id = instance_id;
    op.kind = kind;
    op.action = action;
    op.params = params.is_null() ? json::object() : params;
    op.status = OperationStatus::RUNNING;
    op.created_at = sim_.now();
    op.logs.push_back(std::to_string(sim_.now()) + " accepted " + kind + (action.empty() ? "" : " " + action));
    save(op);
    return op;
}

void Engine::finish(Operation op, bool ok, json output, const std::string& log)
{
    if (op.status == OperationStatus::SUCCEEDED || op.status == OperationStatus::FAILED)
        return;
    op.status = ok ? OperationStatus::SUCCEEDED : OperationStatus::FAILED;
    op.output = std::move(output);
    op.finished_at = sim_.now();
    op.logs.push_back(std::to_string(sim_.now()) + " " + log);
    save(op);
    sim_.log("engine", op.operation_id, ok ? "operation.succeeded" : "operation.failed",
             {{"instance", op.instance_id}, {"kind", op.kind}, {"action", op.action}});
}

void Engine::move(BlueprintInstance& inst, InstanceState to)
{
    if (!instance_transition_allowed(inst.state, to))
        fail(Errc::InvalidState, inst.instance_id + " cannot move " + to_string(inst.state) + " -> " + to_string(to));
    sim_.log("engine", inst.instance_id, "blueprint." + to_string(to),
             {{"from", to_string(inst.state)}, {"type", inst.type_tag}});
    inst.state = to;
    inst.history.push_back({to_string(to), sim_.now()});
}

// Queries ---------------------------------------------------------------------

BlueprintInstance Engine::get(const std::string& instance_id) const
{
    return require<BlueprintInstance>(sim_.store(), kInstances, instance_id, Errc::UnknownInstance);
}

BlueprintInstance Engine::get_for(const std::string& instance_id, const std::string& tenant) const
{
    auto inst = get(instance_id);
    if (inst.tenant_id != tenant && tenant != tenancy::kOperatorTenant)
        fail(Errc::UnknownInstance, "blueprints/" + instance_id + " not found");
    return inst;
}

std::vector<BlueprintInstance> Engine::list(const std::string& tenant) const
{
    std::vector<BlueprintInstance> out;
    for (auto& inst : load_all<BlueprintInstance>(sim_.store(), kInstances))
        if (inst.tenant_id == tenant || tenant == tenancy::kOperatorTenant)
            out.push_back(std::move(inst));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return natural_less(a.instance_id, b.instance_id); });
    return out;
}

Operation Engine::operation(const std::string& instance_id, const std::string& operation_id) const
{
    auto op = load<Operation>(sim_.store(), kOperations, operation_id);
    if (!op || op->instance_id != instance_id)
        fail(Errc::UnknownOperation, "no operation '" + operation_id + "' on " + instance_id);
    return *op;
}

std::vector<Operation> Engine::operations(const std::string& instance_id) const
{
    std::vector<Operation> out;
    for (auto& op : load_all<Operation>(sim_.store(), kOperations))
        if (op.instance_id == instance_id)
            out.push_back(std::move(op));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return natural_less(a.operation_id, b.operation_id); });
    return out;
}

std::vector<ConfigBundle> Engine::bundles(const std::string& instance_id) const
{
    std::vector<ConfigBundle> out;
    for (auto& b : load_all<ConfigBundle>(sim_.store(), kBundles))
        if (b.instance_id == instance_id)
            out.push_back(std::move(b));
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return natural_less(a.bundle_id, b.bundle_id); });
    return out;
}

ResourceBudget Engine::estimate(const json& body) const
{
    if (!body.is_object() || !body.contains("type") || !body["type"].is_string())
        fail(Errc::SchemaViolation, "body needs a string 'type'");
    return declared_compute(expand_blueprint(require_type(body["type"].get<std::string>()), body));
}

// Helpers ---------------------------------------------------------------------

Engine::Placement Engine::place(const NsTemplate& t, const std::string& tenant) const
{
    Placement p;
    bool needs_vim = false;
    bool needs_cluster = false;
    for (const auto& v : t.package.vnfds)
    {
        needs_vim = needs_vim || (v.kind == NfKind::VNF && !v.vdus.empty());
        needs_cluster = needs_cluster || v.kind == NfKind::KNF;
    }
    if (needs_vim)
    {
        auto vim = topology_.vim_for(t.area, tenant);
        if (!vim)
            fail(Errc::NoVimForArea, "no VIM serves area " + std::to_string(t.area) + " for tenant " + tenant,
                 {{"area", t.area}});
        p.vim_id = vim->vim_id;
    }
    if (needs_cluster)
    {
        auto cluster = topology_.cluster_for(t.area, tenant);
        if (!cluster)
            fail(Errc::NoClusterForArea, "no cluster serves area " + std::to_string(t.area) + " for tenant " + tenant,
                 {{"area", t.area}});
        p.cluster_id = cluster->cluster_id;
    }
    return p;
}

void Engine::check_endpoints(const json& body, const std::string& tenant) const
{
    for (const auto& net : endpoint_networks(body))
        if (!topology_.network_visible(net, tenant))
            fail(Errc::TopologyMissing, "endpoint network '" + net + "' is not in the topology", {{"network", net}});
}

OwnedNs Engine::launch(BlueprintInstance& inst, const NsTemplate& t, const json& body)
{
    auto nsd_id = inst.instance_id + "-a" + std::to_string(t.area) + "-g" + std::to_string(inst.generation);
    auto pkg = build_package(t, nsd_id);
    auto onboarded = nfvo_.onboard(pkg);
    sim_.log("engine", inst.instance_id, "package.onboarded",
             {{"nsd", nsd_id}, {"package", onboarded.package_id}, {"created", onboarded.created}});

    auto placement = place(t, inst.tenant_id);
    sim::NsPlacement where{placement.vim_id, placement.cluster_id, {}};
    for (const auto& net : endpoint_networks(body))
        where.networks.push_back(net);
    auto ns_id = nfvo_.instantiate(nsd_id, inst.tenant_id, where);
    sim_.store().commit(kNsIndex, ns_id, inst.instance_id, 0);
    OwnedNs owned{ns_id, t.area, t.role, nsd_id, t.signature()};
    inst.owned_ns.push_back(ns_id);
    inst.ns.push_back(owned);
    return owned;
}

std::string Engine::dispatch(const BlueprintInstance& inst, const OwnedNs& ns, const BundleSpec& spec,
                             const std::string& operation_id)
{
    auto pkg = nfvo_.package_for_nsd(ns.nsd_id);
    const VnfDescriptor* vnfd = pkg ? pkg->find_vnfd(spec.vnfd_id) : nullptr;
    if (!vnfd)
        fail(Errc::InvalidPackage, ns.nsd_id + " has no VNFD " + spec.vnfd_id);

    ConfigBundle b;
    b.bundle_id = next_id(sim_.store(), "bundle");
    b.instance_id = inst.instance_id;
    b.operation_id = operation_id;
    b.ns_id = ns.ns_id;
    b.target_vnf = spec.vnfd_id;
    b.target_kind = vnfd->kind;
    b.purpose = spec.purpose;
    if (vnfd->kind == NfKind::KNF)
    {
        b.mechanism = Mechanism::chart_values;
        b.manager = "helm";
        b.payload = {{"chart", *vnfd->chart_ref}, {"values", spec.vars}};
    }
    else
    {
        b.mechanism = Mechanism::playbook_bundle;
        b.manager = "flexcharm";
        b.payload = {{"format", "yaml"}, {"document", render_playbook_bundle(spec)}};
    }
    insert(sim_.store(), kBundles, b.bundle_id, b);
    sim_.log("engine", b.bundle_id, "bundle.built",
             {{"instance", inst.instance_id}, {"target", ns.ns_id + "/" + spec.vnfd_id}, {"mechanism", b.mechanism}});
    vnfm_.apply(b.bundle_id, ns.ns_id + "/" + spec.vnfd_id, b.manager, {inst.instance_id, ns.ns_id, operation_id});
    return b.bundle_id;
}

void Engine::fail_instance(BlueprintInstance& inst, const std::string& reason)
{
    std::string op_id = inst.pending ? inst.pending->operation_id : "";
    inst.error = reason;
    inst.pending.reset();
    move(inst, InstanceState::ERROR);
    save(inst);
    if (!op_id.empty())
        if (auto op = load<Operation>(sim_.store(), kOperations, op_id))
            finish(*op, false, {{"error", reason}}, "failed: " + reason);
}

// Lifecycle -------------------------------------------------------------------

Accepted Engine::create(const std::string& tenant, const json& body, const std::string& origin)
{
    if (!body.is_object() || !body.contains("type") || !body["type"].is_string())
        fail(Errc::SchemaViolation, "body needs a string 'type'");
    const auto& type = require_type(body["type"].get<std::string>());
    auto templates = expand_blueprint(type, body);
    check_endpoints(body, tenant);
    for (const auto& t : templates)
        place(t, tenant);
    auto declared = declared_compute(templates);
    tenancy::reserve(sim_.store(), tenant, tenancy::Bucket::blueprints, declared);

    BlueprintInstance inst;
    inst.instance_id = next_id(sim_.store(), "bp");
    inst.type_tag = type.tag;
    inst.tenant_id = tenant;
    inst.origin = origin;
    inst.operator_owned = origin == "api";
    inst.config = body;
    inst.areas = areas_of(body);
    inst.runtime = initial_runtime(type, body);
    inst.declared = declared;
    inst.generation = 1;
    inst.history.push_back({to_string(inst.state), sim_.now()});
    insert(sim_.store(), kInstances, inst.instance_id, inst);
    sim_.log("engine", inst.instance_id, "blueprint.CREATED", {{"type", type.tag}, {"tenant", tenant}});
    auto op = new_operation(inst.instance_id, "create", "", json::object());

    Pending p;
    p.operation_id = op.operation_id;
    move(inst, InstanceState::DEPLOYING);
    try
    {
        for (const auto& t : templates)
        {
            auto owned = launch(inst, t, body);
            p.await_ns.push_back(owned.ns_id);
            p.configure_ns.push_back(owned.ns_id);
        }
    }
    catch (const Error& e)
    {
        inst.pending = p;
        fail_instance(inst, e.what());
        return {inst, op.operation_id};
    }
    inst.pending = p;
    save(inst);
    return {inst, op.operation_id};
}

Accepted Engine::update(const std::string& instance_id, const std::string& tenant, const json& body)
{
    auto inst = get_for(instance_id, tenant);
    if (inst.state != InstanceState::READY)
        fail(Errc::InstanceNotReady, instance_id + " is " + to_string(inst.state) + ", updates need READY");
    const auto& type = require_type(inst.type_tag);
    if (!body.is_object() || body.value("type", std::string{}) != inst.type_tag)
        fail(Errc::InvalidDelta, "an update cannot change the blueprint type");
    auto templates = expand_blueprint(type, body);
    if (core_area(type, body) != core_area(type, inst.config))
        fail(Errc::InvalidDelta, "moving the core area is not supported");
    check_endpoints(body, inst.tenant_id);

    std::vector<const NsTemplate*> fresh;
    std::vector<std::pair<const OwnedNs*, const NsTemplate*>> rescale;
    std::vector<const OwnedNs*> retire;
    for (const auto& t : templates)
    {
        const auto* old = inst.ns_in(t.area);
        if (!old)
            fresh.push_back(&t);
        else if (old->signature == t.signature())
            rescale.emplace_back(old, &t);
        else
        {
            retire.push_back(old);
            fresh.push_back(&t);
        }
    }
    auto new_areas = areas_of(body);
    for (const auto& n : inst.ns)
        if (!new_areas.count(n.area))
            retire.push_back(&n);
    for (const auto* t : fresh)
        place(*t, inst.tenant_id);

    auto new_declared = declared_compute(templates);
    auto extra = positive_part(new_declared - inst.declared);
    tenancy::reserve(sim_.store(), inst.tenant_id, tenancy::Bucket::blueprints, extra);
    inst.declared += extra;

    auto op = new_operation(inst.instance_id, "update", "", body);
    Pending p;
    p.operation_id = op.operation_id;
    p.new_body = body;
    p.new_declared = new_declared;
    move(inst, InstanceState::UPDATING);

    std::vector<OwnedNs> keep_retire;
    for (const auto* r : retire)
        keep_retire.push_back(*r);
    try
    {
        for (const auto& [old, t] : rescale)
        {
            auto live = nfvo_.ns(old->ns_id);
            bool changed = false;
            for (const auto& profile : t->package.nsd.deployment_flavour)
            {
                int have = live.vdu_counts[vdu_key(profile.vnfd_ref, profile.vdu)];
                int delta = profile.instances - have;
                if (delta == 0)
                    continue;
                auto tag = op.operation_id + ":" + old->ns_id + ":" + profile.vdu;
                nfvo_.scale(old->ns_id, profile.vnfd_ref, profile.vdu, delta, tag);
                p.await_scale.push_back(tag);
                changed = true;
            }
            if (changed)
                for (auto spec : day1_bundles(type, body, *t))
                {
                    spec.purpose = "reconfigure";
                    p.post_bundles.push_back(spec);
                }
        }
        for (const auto& r : keep_retire)
        {
            nfvo_.terminate(r.ns_id);
            p.await_terminate.push_back(r.ns_id);
        }
        if (!fresh.empty())
            ++inst.generation;
        for (const auto* t : fresh)
        {
            auto owned = launch(inst, *t, body);
            p.await_ns.push_back(owned.ns_id);
            p.configure_ns.push_back(owned.ns_id);
        }
    }
    catch (const Error& e)
    {
        inst.pending = p;
        fail_instance(inst, e.what());
        return {inst, op.operation_id};
    }
    inst.pending = p;
    save(inst);
    reconcile(inst.instance_id);
    return {get(inst.instance_id), op.operation_id};
}

Accepted Engine::destroy(const std::string& instance_id, const std::string& tenant, bool force)
{
    auto inst = get_for(instance_id, tenant);
    if (inst.state == InstanceState::DESTROYED || inst.state == InstanceState::DESTROYING)
    {
        std::string op_id = inst.pending ? inst.pending->operation_id : "";
        if (op_id.empty())
            for (const auto& op : operations(instance_id))
                if (op.kind == "destroy")
                    op_id = op.operation_id;
        return {inst, op_id};
    }
    if (!inst.attached_slices.empty() && !force)
    {
        json slices = json::array();
        for (const auto& [s, _] : inst.attached_slices)
            slices.push_back(s);
        fail(Errc::SlicesStillAttached, instance_id + " still serves slices", {{"slices", slices}});
    }
    if (inst.pending && !inst.pending->operation_id.empty())
        if (auto prior = load<Operation>(sim_.store(), kOperations, inst.pending->operation_id))
            finish(*prior, false, {{"error", "superseded by destroy"}}, "superseded by destroy");

    auto op = new_operation(inst.instance_id, "destroy", "", {{"force", force}});
    Pending p;
    p.operation_id = op.operation_id;
    p.destroy_queue.assign(inst.owned_ns.rbegin(), inst.owned_ns.rend());
    inst.pending = p;
    inst.attached_slices.clear();
    move(inst, InstanceState::DESTROYING);
    save(inst);
    reconcile(inst.instance_id);
    return {get(inst.instance_id), op.operation_id};
}

Operation Engine::day2(const std::string& instance_id, const std::string& tenant, const std::string& action,
                       const json& params)
{
    auto inst = get_for(instance_id, tenant);
    const auto& type = require_type(inst.type_tag);
    const auto* spec = type.action(action);
    if (!spec)
        fail(Errc::UnknownAction, type.tag + " has no Day-2 action '" + action + "'");
    if (inst.state != InstanceState::READY)
        fail(Errc::InstanceNotReady, instance_id + " is " + to_string(inst.state) + ", Day-2 needs READY");
    auto plan = plan_day2(type, inst.config, inst.runtime, action, params.is_null() ? json::object() : params);

    if (plan.scale)
    {
        const auto* ns = inst.ns_in(plan.scale->area);
        auto pkg = nfvo_.package_for_nsd(ns->nsd_id);
        ResourceBudget flavor;
        for (const auto& vdu : pkg->find_vnfd(plan.scale->vnfd_id)->vdus)
            if (vdu.name == plan.scale->vdu)
                flavor = vdu.flavor();
        auto extra = flavor * plan.scale->delta;
        tenancy::reserve(sim_.store(), inst.tenant_id, tenancy::Bucket::blueprints, extra);
        inst.declared += extra;

        auto op = new_operation(inst.instance_id, "day2", action, params);
        op.critical = spec->critical;
        save(op);
        Pending p;
        p.operation_id = op.operation_id;
        p.day2_action = action;
        p.day2_params = params;
        p.new_declared = inst.declared;
        p.post_bundles = plan.bundles;
        auto tag = op.operation_id + ":" + ns->ns_id + ":" + plan.scale->vdu;
        nfvo_.scale(ns->ns_id, plan.scale->vnfd_id, plan.scale->vdu, plan.scale->delta, tag);
        p.await_scale.push_back(tag);
        move(inst, InstanceState::UPDATING);
        inst.pending = p;
        save(inst);
        return op;
    }

    auto op = new_operation(inst.instance_id, "day2", action, params);
    op.critical = spec->critical;
    for (const auto& b : plan.bundles)
    {
        const auto* ns = inst.ns_in(b.area);
        op.bundles.push_back(dispatch(inst, *ns, b, op.operation_id));
        op.logs.push_back(std::to_string(sim_.now()) + " dispatched " + op.bundles.back() + " to " + ns->ns_id + "/" +
                          b.vnfd_id);
    }
    save(op);
    return op;
}

Operation Engine::attach_slice(const std::string& instance_id, const std::string& tenant, const std::string& slice_id,
                               const json& qos)
{
    auto inst = get_for(instance_id, tenant);
    if (inst.tenant_id != tenant)
        fail(Errc::TenantMismatch, instance_id + " belongs to another tenant");
    if (inst.state != InstanceState::READY)
        fail(Errc::InstanceNotReady, instance_id + " is " + to_string(inst.state) + ", attaching needs READY");
    inst.attached_slices[slice_id] = qos;
    save(inst);
    sim_.log("engine", instance_id, "slice.attached", {{"slice", slice_id}});

    auto op = new_operation(inst.instance_id, "attach", "apply_qos", {{"slice", slice_id}, {"qos", qos}});
    const auto& target = inst.ns.front();
    auto pkg = nfvo_.package_for_nsd(target.nsd_id);
    BundleSpec spec{target.area, pkg->nsd.vnfd_refs.front(), "apply_qos", {"apply-qos"},
                    {{"slice", slice_id}, {"qos", qos}}};
    op.bundles.push_back(dispatch(inst, target, spec, op.operation_id));
    save(op);
    return op;
}

BlueprintInstance Engine::detach_slice(const std::string& instance_id, const std::string& slice_id)
{
    auto inst = get(instance_id);
    if (inst.attached_slices.erase(slice_id))
    {
        save(inst);
        sim_.log("engine", instance_id, "slice.detached", {{"slice", slice_id}});
    }
    return inst;
}

// Progress --------------------------------------------------------------------

void Engine::on_ns_notice(const sim::NfvoNotice& notice)
{
    auto index = sim_.store().get(kNsIndex, notice.ns_id);
    if (!index)
        return;
    auto instance_id = index->body.get<std::string>();
    if (notice.what == "scaled" || notice.what == "scale_failed")
    {
        auto inst = get(instance_id);
        if (!inst.pending || !contains(inst.pending->await_scale, notice.tag))
            return;
        std::erase(inst.pending->await_scale, notice.tag);
        if (notice.what == "scale_failed")
        {
            inst.pending->failed = true;
            inst.pending->failure = "scaling " + notice.ns_id + " failed";
        }
        save(inst);
    }
    reconcile(instance_id);
}

void Engine::on_bundle(const std::string& bundle_id, bool ok)
{
    auto b = load<ConfigBundle>(sim_.store(), kBundles, bundle_id);
    if (!b)
        return;
    b->status = ok ? BundleStatus::APPLIED : BundleStatus::FAILED;
    auto doc = sim_.store().get(kBundles, bundle_id);
    sim_.store().commit(kBundles, bundle_id, *b, doc->revision);
    auto inst = load<BlueprintInstance>(sim_.store(), kInstances, b->instance_id);
    if (inst && inst->pending && contains(inst->pending->await_bundles, bundle_id))
        reconcile(b->instance_id);
    else
        progress_operation(b->operation_id);
}

void Engine::progress_operation(const std::string& operation_id)
{
    auto op = load<Operation>(sim_.store(), kOperations, operation_id);
    if (!op || op->status != OperationStatus::RUNNING)
        return;
    bool all_done = true;
    bool any_failed = false;
    for (const auto& id : op->bundles)
    {
        auto b = require<ConfigBundle>(sim_.store(), kBundles, id, Errc::NotFound);
        all_done = all_done && b.status != BundleStatus::PENDING;
        any_failed = any_failed || b.status == BundleStatus::FAILED;
    }
    if (!all_done)
        return;
    auto inst = get(op->instance_id);
    if (any_failed)
    {
        finish(*op, false, {{"error", "configuration bundle failed"}}, "bundle apply failed");
        if (op->critical && inst.state == InstanceState::READY)
        {
            inst.error = op->action + " failed";
            move(inst, InstanceState::ERROR);
            save(inst);
        }
        return;
    }
    json output = json::object();
    if (op->kind == "day2")
    {
        output = apply_day2(op->action, op->params, inst.runtime, inst.config);
        if (inst.state != InstanceState::DESTROYED && inst.state != InstanceState::DESTROYING)
            save(inst);
    }
    else if (op->kind == "attach")
        output = {{"slice", op->params.at("slice")}, {"applied", true}};
    finish(*op, true, output, "all bundles applied");
}

void Engine::reconcile(const std::string& instance_id)
{
    auto inst = get(instance_id);
    if (!inst.pending)
        return;
    if (inst.state == InstanceState::DESTROYING)
    {
        step_destroy(inst);
        return;
    }
    if (inst.state != InstanceState::DEPLOYING && inst.state != InstanceState::CONFIGURING &&
        inst.state != InstanceState::UPDATING)
        return;

    auto& p = *inst.pending;
    std::string failure = p.failed ? p.failure : "";
    bool all_instantiated = true;
    for (const auto& id : p.await_ns)
    {
        auto st = nfvo_.ns(id).state;
        if (st == sim::NsState::FAILED)
            failure = "NS " + id + " failed to instantiate";
        all_instantiated = all_instantiated && st == sim::NsState::INSTANTIATED;
    }
    bool all_terminated = true;
    for (const auto& id : p.await_terminate)
    {
        auto st = nfvo_.ns(id).state;
        all_terminated = all_terminated && (st == sim::NsState::TERMINATED || st == sim::NsState::FAILED);
    }
    bool bundles_done = true;
    for (const auto& id : p.await_bundles)
    {
        auto b = require<ConfigBundle>(sim_.store(), kBundles, id, Errc::NotFound);
        if (b.status == BundleStatus::FAILED)
            failure = "bundle " + id + " failed on " + b.ns_id + "/" + b.target_vnf;
        bundles_done = bundles_done && b.status == BundleStatus::APPLIED;
    }
    if (!failure.empty())
    {
        fail_instance(inst, failure);
        return;
    }
    if (!all_instantiated || !all_terminated || !p.await_scale.empty())
        return;

    if (!p.configure_ns.empty() || !p.post_bundles.empty())
    {
        const auto& type = require_type(inst.type_tag);
        const json& body = p.new_body.is_null() ? inst.config : p.new_body;
        auto templates = expand_blueprint(type, body);
        for (const auto& ns_id : p.configure_ns)
        {
            auto it = std::find_if(inst.ns.begin(), inst.ns.end(), [&](const OwnedNs& n) { return n.ns_id == ns_id; });
            for (const auto& t : templates)
                if (t.area == it->area)
                    for (const auto& spec : day1_bundles(type, body, t))
                        p.await_bundles.push_back(dispatch(inst, *it, spec, p.operation_id));
        }
        for (const auto& spec : p.post_bundles)
            if (const auto* ns = inst.ns_in(spec.area))
                p.await_bundles.push_back(dispatch(inst, *ns, spec, p.operation_id));
        p.configure_ns.clear();
        p.post_bundles.clear();
        if (inst.state == InstanceState::DEPLOYING)
            move(inst, InstanceState::CONFIGURING);
        save(inst);
        if (!p.await_bundles.empty())
            return;
    }
    if (inst.state == InstanceState::DEPLOYING)
        move(inst, InstanceState::CONFIGURING);
    if (!bundles_done)
    {
        save(inst);
        return;
    }

    // Everything settled: commit the new shape.
    std::vector<std::string> gone = p.await_terminate;
    std::erase_if(inst.ns, [&](const OwnedNs& n) { return contains(gone, n.ns_id); });
    std::erase_if(inst.owned_ns, [&](const std::string& id) { return contains(gone, id); });
    json output = {{"owned_ns", inst.owned_ns}};
    if (!p.day2_action.empty())
        output = apply_day2(p.day2_action, p.day2_params, inst.runtime, inst.config);
    else if (!p.new_body.is_null())
    {
        inst.config = p.new_body;
        inst.areas = areas_of(inst.config);
    }
    if (p.new_declared)
    {
        auto surplus = positive_part(inst.declared - *p.new_declared);
        tenancy::release(sim_.store(), inst.tenant_id, tenancy::Bucket::blueprints, surplus);
        inst.declared -= surplus;
    }
    auto op_id = p.operation_id;
    inst.pending.reset();
    inst.error.clear();
    move(inst, InstanceState::READY);
    save(inst);
    if (auto op = load<Operation>(sim_.store(), kOperations, op_id))
        finish(*op, true, output, "instance READY");
}

void Engine::step_destroy(BlueprintInstance& inst)
{
    auto& queue = inst.pending->destroy_queue;
    while (!queue.empty())
    {
        auto st = nfvo_.ns(queue.front()).state;
        if (st == sim::NsState::TERMINATED || st == sim::NsState::FAILED || st == sim::NsState::NOT_INSTANTIATED)
        {
            queue.erase(queue.begin());
            continue;
        }
        if (st == sim::NsState::INSTANTIATED)
        {
            sim_.log("engine", inst.instance_id, "ns.terminate.requested", {{"ns", queue.front()}});
            nfvo_.terminate(queue.front());
        }
        save(inst);
        return;
    }
    auto op_id = inst.pending->operation_id;
    tenancy::release(sim_.store(), inst.tenant_id, tenancy::Bucket::blueprints, inst.declared);
    inst.declared = {};
    inst.owned_ns.clear();
    inst.ns.clear();
    inst.attached_slices.clear();
    inst.pending.reset();
    move(inst, InstanceState::DESTROYED);
    save(inst);
    if (auto op = load<Operation>(sim_.store(), kOperations, op_id))
        finish(*op, true, json::object(), "instance DESTROYED");
}

} // namespace oss::nfvcl
