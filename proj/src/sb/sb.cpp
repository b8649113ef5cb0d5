#include "oss/sb/sb.hpp"

#include <algorithm>

#include "oss/core/tenancy.hpp"
#include "oss/core/validation.hpp"

namespace oss::sb
{

namespace
{
constexpr const char* kSlices = "sb_slices";
constexpr const char* kProfile = "sb";
constexpr const char* kPlaceholder = "$action-";
constexpr int kCompensationAttempts = 3;

const std::set<std::string> kLayers{"metal", "iaas", "paas", "nfv"};

bool covers(const AreaSet& have, const AreaSet& want)
{
    return std::includes(have.begin(), have.end(), want.begin(), want.end());
}

AreaSet intersect(const AreaSet& a, const AreaSet& b)
{
    AreaSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

bool live_state(nfvcl::InstanceState s)
{
    using S = nfvcl::InstanceState;
    return s != S::DESTROYING && s != S::DESTROYED && s != S::ERROR;
}

json resolve(json config, const std::vector<Executed>& executed)
{
    if (config.is_string())
    {
        auto text = config.get<std::string>();
        if (text.rfind(kPlaceholder, 0) == 0)
            return executed.at(std::stoul(text.substr(std::string(kPlaceholder).size()))).instance_id;
        return config;
    }
    if (config.is_structured())
        for (auto& item : config)
            item = resolve(item, executed);
    return config;
}

ResourceBudget positive_part(const ResourceBudget& b)
{
    return {std::max<std::int64_t>(b.vcpus, 0), std::max<std::int64_t>(b.ram_gb, 0),
            std::max<std::int64_t>(b.storage_gb, 0)};
}

} // namespace

void validate_profile(const ProgrammabilityProfile& profile)
{
    for (const auto& layer : profile.layers_enabled)
        if (!kLayers.count(layer))
            fail(Errc::InvalidProfile, "unknown layer '" + layer + "'");
    const auto& l = profile.layers_enabled;
    if (l.count("nfv") && !l.count("iaas") && !l.count("paas"))
        fail(Errc::InvalidProfile, "nfv needs iaas or paas underneath");
    if (l.count("paas") && !l.count("iaas") && !l.count("metal"))
        fail(Errc::InvalidProfile, "paas needs iaas (VMs) or metal (bare metal) underneath");
}

std::vector<BlueprintAction> plan_slice(const SliceRequest& request, const ProgrammabilityProfile& profile,
                                        const std::vector<LiveInstance>& live, const AreaSet& core_areas)
{
    if (!profile.layers_enabled.count("nfv"))
        fail(Errc::LayerDisabled, "the nfv layer is disabled in this domain");
    const auto* type = nfvcl::find_type(request.slice_type);
    if (!type || !type->executable)
        fail(Errc::NoMatchingBlueprintType, "no executable blueprint type for '" + request.slice_type + "'");

    auto reusable = [&](const std::vector<std::string>& tags) -> const LiveInstance* {
        const LiveInstance* best = nullptr;
        for (const auto& inst : live)
        {
            if (std::find(tags.begin(), tags.end(), inst.type_tag) == tags.end() ||
                inst.tenant_id != request.tenant_id || !covers(inst.areas, request.coverage_areas))
                continue;
            if (!best || natural_less(inst.instance_id, best->instance_id))
                best = &inst;
        }
        return best;
    };

    if (const auto* hit = reusable({type->tag}))
        return {{ActionKind::UPDATE, type->tag, hit->instance_id, nullptr,
                 "live " + type->tag + " instance " + hit->instance_id + " covers the requested areas"}};

    auto core = *request.coverage_areas.begin();
    for (auto a : request.coverage_areas)
        if (core_areas.count(a))
        {
            core = a;
            break;
        }

    std::vector<BlueprintAction> plan;
    auto body = nfvcl::default_body(type->tag, request.coverage_areas, core, profile.network_endpoints);
    if (type->family == nfvcl::Family::ueransim)
    {
        if (const auto* core_inst = reusable({"Free5GC", "Open5GS"}))
            body["config"]["core_ref"] = core_inst->instance_id;
        else
        {
            plan.push_back({ActionKind::INSTANTIATE, "Free5GC", std::nullopt,
                            nfvcl::default_body("Free5GC", request.coverage_areas, core, profile.network_endpoints),
                            "RAN simulator needs a 5G core"});
            body["config"]["core_ref"] = std::string(kPlaceholder) + "0";
        }
    }
    plan.push_back({ActionKind::INSTANTIATE, type->tag, std::nullopt, body, "no live instance covers the request"});
    return plan;
}

SbCore::SbCore(sim::Simulator& sim, nfvcl::Engine& engine) : sim_(sim), engine_(engine)
{
    engine_.subscribe([this](const nfvcl::BlueprintInstance& inst) { on_instance(inst); });
    engine_.subscribe_operations([this](const nfvcl::Operation& op) { on_operation(op); });
}

ProgrammabilityProfile SbCore::profile() const
{
    if (auto p = load<ProgrammabilityProfile>(sim_.store(), kProfile, "profile"))
        return *p;
    return {};
}

ProgrammabilityProfile SbCore::set_profile(const ProgrammabilityProfile& profile)
{
    validate_profile(profile);
    auto doc = sim_.store().get(kProfile, "profile");
    sim_.store().commit(kProfile, "profile", profile, doc ? doc->revision : 0);
    sim_.log("sb", "profile", "profile.updated", {{"layers", profile.layers_enabled}});
    return profile;
}

std::vector<LiveInstance> SbCore::live() const
{
    std::vector<LiveInstance> out;
    for (const auto& inst : engine_.list(tenancy::kOperatorTenant))
        if (live_state(inst.state))
            out.push_back({inst.instance_id, inst.type_tag, inst.tenant_id, inst.areas});
    return out;
}

std::vector<BlueprintAction> SbCore::preview(const SliceRequest& request) const
{
    AreaSet core_areas;
    for (const auto& a : tenancy::list_areas(sim_.store()))
        if (a.kind == AreaKind::core)
            core_areas.insert(a.id);
    return plan_slice(request, profile(), live(), core_areas);
}

ResourceBudget SbCore::quota_ask(const SliceRequest& request, const std::vector<BlueprintAction>& plan) const
{
    (void)request;
    ResourceBudget ask;
    for (const auto& a : plan)
    {
        if (a.kind == ActionKind::INSTANTIATE)
            ask += engine_.estimate(a.config);
        else if (!a.config.is_null())
            ask += positive_part(engine_.estimate(a.config) - engine_.get(*a.target_instance).declared);
    }
    return ask;
}

SbSlice SbCore::submit(const SliceRequest& request)
{
    auto& store = sim_.store();
    auto check = validate_slice_request(request, tenancy::tenant_ids(store), nfvcl::executable_tags(),
                                        tenancy::area_ids(store));
    require_valid(check);
    auto plan = preview(request);
    auto ask = quota_ask(request, plan);
    if (!tenancy::admits(store, request.tenant_id, ask))
        fail(Errc::QuotaExceeded, "tenant " + request.tenant_id + " quota does not admit the slice",
             {{"ask", ask}, {"used", tenancy::usage(store, request.tenant_id).total()}});

    SbSlice s;
    s.slice_id = next_id(store, "sbs");
    s.request = request;
    s.plan = plan;
    s.state_history.push_back({to_string(s.state), sim_.now()});
    insert(store, kSlices, s.slice_id, s);
    sim_.log("sb", s.slice_id, "slice.REQUESTED", {{"tenant", request.tenant_id}, {"type", request.slice_type}});
    set_state(s, SliceState::NEGOTIATING);
    set_state(s, SliceState::INSTANTIATING);
    save(s);
    kick(s.slice_id);
    return slice(s.slice_id);
}

SbSlice SbCore::modify(const std::string& slice_id, const std::optional<AreaSet>& areas,
                       const std::optional<QosProfile>& qos)
{
    auto s = slice(slice_id);
    if (s.state != SliceState::ACTIVE)
        fail(Errc::InvalidState, "slice " + slice_id + " is " + to_string(s.state) + ", modify needs ACTIVE");
    auto request = s.request;
    if (areas)
    {
        if (!covers(*areas, request.coverage_areas))
            fail(Errc::InvalidDelta, "a modification may only add coverage areas");
        request.coverage_areas = *areas;
    }
    if (qos)
        request.qos = *qos;
    require_valid(validate_slice_request(request, tenancy::tenant_ids(sim_.store()), nfvcl::executable_tags(),
                                         tenancy::area_ids(sim_.store())));

    std::vector<BlueprintAction> plan;
    for (const auto& b : s.bindings)
    {
        auto inst = engine_.get(b.blueprint_instance_id);
        BlueprintAction a{ActionKind::UPDATE, inst.type_tag, inst.instance_id, nullptr, "re-apply slice QoS"};
        if (!covers(inst.areas, request.coverage_areas))
        {
            a.config = nfvcl::grow_body(inst.config, request.coverage_areas);
            a.reason = "grow instance to the new coverage";
        }
        plan.push_back(a);
    }
    auto ask = quota_ask(request, plan);
    if (!tenancy::admits(sim_.store(), request.tenant_id, ask))
        fail(Errc::QuotaExceeded, "tenant " + request.tenant_id + " quota does not admit the change", {{"ask", ask}});

    s.request = request;
    s.plan = plan;
    s.cursor = 0;
    s.phase = "start";
    s.executed.clear();
    set_state(s, SliceState::UPDATING);
    save(s);
    kick(slice_id);
    return slice(slice_id);
}

SbSlice SbCore::remove(const std::string& slice_id)
{
    auto s = slice(slice_id);
    if (s.state == SliceState::TERMINATED || s.state == SliceState::FAILED || s.state == SliceState::TERMINATING)
        return s;
    if (s.state != SliceState::ACTIVE)
    {
        fail_slice(s, "Cancelled", "deleted before becoming active");
        return slice(slice_id);
    }
    set_state(s, SliceState::TERMINATING);
    for (const auto& b : s.bindings)
    {
        auto inst = engine_.detach_slice(b.blueprint_instance_id, slice_id);
        if (inst.origin == "sb" && inst.attached_slices.empty() && live_state(inst.state))
        {
            engine_.destroy(inst.instance_id, inst.tenant_id);
            s.awaiting_destroy.push_back(inst.instance_id);
        }
    }
    save(s);
    kick(slice_id);
    return slice(slice_id);
}

SbSlice SbCore::slice(const std::string& slice_id) const
{
    return require<SbSlice>(sim_.store(), kSlices, slice_id, Errc::UnknownSlice);
}

std::vector<SbSlice> SbCore::slices() const
{
    auto out = load_all<SbSlice>(sim_.store(), kSlices);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return natural_less(a.slice_id, b.slice_id); });
    return out;
}

void SbCore::reconcile_all()
{
    for (const auto& s : slices())
        if (!is_terminal(s.state))
            kick(s.slice_id);
}

// Progress --------------------------------------------------------------------

void SbCore::set_state(SbSlice& s, SliceState to)
{
    if (!slice_transition_allowed(s.state, to))
        fail(Errc::InvalidState, "slice " + s.slice_id + " cannot move " + to_string(s.state) + " -> " + to_string(to));
    sim_.log("sb", s.slice_id, "slice." + to_string(to), {{"from", to_string(s.state)}});
    s.state = to;
    if (to == SliceState::TERMINATED)
        s.bindings.clear();
    s.state_history.push_back({to_string(to), sim_.now()});
}

void SbCore::save(const SbSlice& s)
{
    auto doc = sim_.store().get(kSlices, s.slice_id);
    sim_.store().commit(kSlices, s.slice_id, s, doc ? doc->revision : 0);
}

void SbCore::kick(const std::string& slice_id)
{
    queue_.insert(slice_id);
    if (busy_)
        return;
    busy_ = true;
    while (!queue_.empty())
    {
        auto id = *queue_.begin();
        queue_.erase(queue_.begin());
        auto s = slice(id);
        try
        {
            drive(s);
        }
        catch (const Error& e)
        {
            s = slice(id);
            if (!is_terminal(s.state))
                fail_slice(s, std::string(oss::to_string(e.code())), e.what());
        }
    }
    busy_ = false;
}

void SbCore::drive(SbSlice& s)
{
    if (s.state == SliceState::INSTANTIATING || s.state == SliceState::UPDATING)
        step_forward(s);
    else if (s.state == SliceState::TERMINATING)
        step_teardown(s);
}

void SbCore::step_forward(SbSlice& s)
{
    const auto& tenant = s.request.tenant_id;
    while (s.cursor < s.plan.size())
    {
        const auto& action = s.plan[s.cursor];
        if (s.phase == "start")
        {
            if (action.kind == ActionKind::INSTANTIATE)
            {
                sim_.log("sb", s.slice_id, "action.instantiate", {{"type", action.blueprint_type}});
                auto accepted = engine_.create(tenant, resolve(action.config, s.executed), "sb");
                s.executed.push_back({accepted.instance.instance_id, true});
                s.current_instance = accepted.instance.instance_id;
            }
            else
            {
                s.current_instance = *action.target_instance;
                if (!action.config.is_null())
                {
                    auto inst = engine_.get(s.current_instance);
                    if (inst.state != nfvcl::InstanceState::READY && live_state(inst.state))
                    {
                        save(s);
                        return;
                    }
                    sim_.log("sb", s.slice_id, "action.update", {{"instance", s.current_instance}});
                    engine_.update(s.current_instance, tenant, action.config);
                }
                s.executed.push_back({s.current_instance, false});
            }
            s.phase = "await_ready";
            save(s);
        }
        if (s.phase == "await_ready")
        {
            auto inst = engine_.get(s.current_instance);
            if (!live_state(inst.state))
                fail(Errc::BlueprintFailed, s.current_instance + " ended " + nfvcl::to_string(inst.state) +
                                                (inst.error.empty() ? "" : ": " + inst.error));
            if (inst.state != nfvcl::InstanceState::READY)
            {
                save(s);
                return;
            }
            auto op = engine_.attach_slice(s.current_instance, tenant, s.slice_id, s.request.qos);
            s.waiting_op = op.operation_id;
            s.phase = "await_attach";
            save(s);
        }
        if (s.phase == "await_attach")
        {
            auto op = engine_.operation(s.current_instance, s.waiting_op);
            if (op.status == nfvcl::OperationStatus::FAILED)
                fail(Errc::BundleApplyFailed, "QoS could not be applied on " + s.current_instance);
            if (op.status != nfvcl::OperationStatus::SUCCEEDED)
            {
                save(s);
                return;
            }
            auto inst = engine_.get(s.current_instance);
            SliceBinding b{s.slice_id, inst.instance_id, intersect(s.request.coverage_areas, inst.areas)};
            auto it = std::find_if(s.bindings.begin(), s.bindings.end(), [&](const SliceBinding& x) {
                return x.blueprint_instance_id == inst.instance_id;
            });
            if (it == s.bindings.end())
                s.bindings.push_back(b);
            else
                *it = b;
            ++s.cursor;
            s.phase = "start";
            s.waiting_op.clear();
        }
    }
    s.current_instance.clear();
    set_state(s, SliceState::ACTIVE);
    save(s);
}

void SbCore::step_teardown(SbSlice& s)
{
    for (const auto& id : s.awaiting_destroy)
        if (engine_.get(id).state != nfvcl::InstanceState::DESTROYED)
            return;
    s.awaiting_destroy.clear();
    set_state(s, SliceState::TERMINATED);
    save(s);
}

void SbCore::fail_slice(SbSlice& s, const std::string& code, const std::string& reason)
{
    sim_.log("sb", s.slice_id, "slice.compensating", {{"reason", reason}, {"actions", s.executed.size()}});
    std::vector<std::string> degraded;
    for (auto it = s.executed.rbegin(); it != s.executed.rend(); ++it)
    {
        bool done = false;
        for (int attempt = 1; attempt <= kCompensationAttempts && !done; ++attempt)
        {
            try
            {
                if (it->created)
                    engine_.destroy(it->instance_id, s.request.tenant_id, true);
                else
                    engine_.detach_slice(it->instance_id, s.slice_id);
                done = true;
            }
            catch (const Error& e)
            {
                sim_.log("sb", s.slice_id, "compensation.retry",
                         {{"instance", it->instance_id}, {"attempt", attempt}, {"error", e.what()}});
            }
        }
        if (!done)
            degraded.push_back(it->instance_id);
    }
    for (const auto& e : s.executed)
        if (std::none_of(s.bindings.begin(), s.bindings.end(),
                         [&](const SliceBinding& b) { return b.blueprint_instance_id == e.instance_id; }))
            s.bindings.push_back({s.slice_id, e.instance_id, {}});
    s.error = reason + (degraded.empty() ? "" : " (compensation incomplete)");
    s.error_code = code;
    s.phase = "start";
    set_state(s, SliceState::FAILED);
    save(s);
}

void SbCore::on_instance(const nfvcl::BlueprintInstance& inst)
{
    for (const auto& s : slices())
    {
        if (is_terminal(s.state))
            continue;
        bool waits = s.current_instance == inst.instance_id ||
                     std::find(s.awaiting_destroy.begin(), s.awaiting_destroy.end(), inst.instance_id) !=
                         s.awaiting_destroy.end();
        if (waits)
            kick(s.slice_id);
    }
}

void SbCore::on_operation(const nfvcl::Operation& op)
{
    for (const auto& s : slices())
        if (!is_terminal(s.state) && s.waiting_op == op.operation_id)
            kick(s.slice_id);
}

} // namespace oss::sb
