#include "oss/sim/nfvo.hpp"

namespace oss::sim
{

namespace
{
constexpr const char* kPackages = "nfvo_packages";
constexpr const char* kNsdIndex = "nfvo_nsd_index";
constexpr const char* kNs = "ns_instances";

std::string vdu_key(const std::string& vnfd, const std::string& vdu) { return vnfd + "/" + vdu; }

std::string vm_id(const std::string& ns_id, const std::string& vnfd, const std::string& vdu, int ordinal)
{
    return ns_id + "/" + vnfd + "/" + vdu + "-" + std::to_string(ordinal);
}

} // namespace

std::string to_string(NsState s) { return json(s).get<std::string>(); }

bool ns_transition_allowed(NsState from, NsState to)
{
    switch (from)
    {
    case NsState::NOT_INSTANTIATED: return to == NsState::INSTANTIATING;
    case NsState::INSTANTIATING: return to == NsState::INSTANTIATED || to == NsState::FAILED;
    case NsState::INSTANTIATED: return to == NsState::TERMINATING;
    case NsState::TERMINATING: return to == NsState::TERMINATED;
    default: return false;
    }
}

Nfvo::Nfvo(Simulator& sim, Vim& vim) : sim_(sim), vim_(vim)
{
    sim_.on("nfvo.instantiate", [this](const ScheduledEvent& e) { on_instantiate(e); });
    sim_.on("nfvo.scale", [this](const ScheduledEvent& e) { on_scale(e); });
    sim_.on("nfvo.terminate", [this](const ScheduledEvent& e) { on_terminate(e); });
}

Nfvo::Onboarded Nfvo::onboard(const nfvcl::Package& package)
{
    try
    {
        nfvcl::validate_package(package, [](const std::string&) { return true; });
    }
    catch (const Error& e)
    {
        fail(Errc::InvalidPackage, e.what());
    }
    auto id = package.content_hash();
    Onboarded out{id, false};
    if (!sim_.store().get(kPackages, id))
    {
        try
        {
            insert(sim_.store(), kPackages, id, package);
            out.created = true;
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::RevisionConflict)
                throw;
        }
    }
    auto& store = sim_.store();
    auto current = store.get(kNsdIndex, package.nsd.nsd_id);
    if (!current || current->body.get<std::string>() != id)
        store.commit(kNsdIndex, package.nsd.nsd_id, id, current ? current->revision : 0);
    if (out.created)
        sim_.log("sim", package.nsd.nsd_id, "nfvo.package.onboarded", {{"package", id}});
    return out;
}

std::size_t Nfvo::package_count() const { return sim_.store().list(kPackages).size(); }

std::optional<nfvcl::Package> Nfvo::package_for_nsd(const std::string& nsd_id) const
{
    auto index = sim_.store().get(kNsdIndex, nsd_id);
    if (!index)
        return std::nullopt;
    return load<nfvcl::Package>(sim_.store(), kPackages, index->body.get<std::string>());
}

void Nfvo::move(NsInstance& ns, NsState to)
{
    if (!ns_transition_allowed(ns.state, to))
        fail(Errc::InvalidState, ns.ns_id + " cannot move " + to_string(ns.state) + " -> " + to_string(to));
    ns.state = to;
    ns.history.push_back({to_string(to), sim_.now()});
}

void Nfvo::notify(const NfvoNotice& notice)
{
    for (const auto& l : listeners_)
        l(notice);
}

std::string Nfvo::instantiate(const std::string& nsd_id, const std::string& owner, const NsPlacement& placement)
{
    auto index = sim_.store().get(kNsdIndex, nsd_id);
    if (!index)
        fail(Errc::UnknownNsd, "no onboarded package carries NSD '" + nsd_id + "'");
    auto package_id = index->body.get<std::string>();
    auto pkg = require<nfvcl::Package>(sim_.store(), kPackages, package_id, Errc::UnknownNsd);

    bool needs_vim = false;
    for (const auto& vnfd : pkg.vnfds)
        needs_vim = needs_vim || (vnfd.kind == nfvcl::NfKind::VNF && !vnfd.vdus.empty());
    if (needs_vim && !placement.vim_id)
        fail(Errc::NoVimForArea, "NSD '" + nsd_id + "' has VDUs but no VIM was given");

    NsInstance ns;
    ns.ns_id = next_id(sim_.store(), "ns");
    ns.nsd_id = nsd_id;
    ns.package_id = package_id;
    ns.owner = owner;
    ns.area = pkg.nsd.area_id;
    ns.vim_id = placement.vim_id;
    ns.cluster_id = placement.cluster_id;
    ns.networks = placement.networks;
    ns.history.push_back({to_string(ns.state), sim_.now()});
    move(ns, NsState::INSTANTIATING);
    insert(sim_.store(), kNs, ns.ns_id, ns);

    auto decision = sim_.check("ns.instantiate", {ns.ns_id, nsd_id, owner, "area-" + std::to_string(ns.area)});
    sim_.log("sim", ns.ns_id, "ns.instantiating", {{"nsd", nsd_id}, {"owner", owner}, {"area", ns.area}});
    sim_.schedule(sim_.durations().ns_instantiate + decision.extra_delay, "nfvo.instantiate", ns.ns_id,
                  {{"fail", decision.failed()}});
    return ns.ns_id;
}

std::vector<std::string> Nfvo::boot_vdus(const NsInstance& ns, const nfvcl::Package& pkg, const std::string& vnfd,
                                         const std::string& vdu, int from, int to)
{
    std::vector<std::string> booted;
    const auto* desc = pkg.find_vnfd(vnfd);
    for (const auto& v : desc->vdus)
    {
        if (v.name != vdu)
            continue;
        for (int k = from + 1; k <= to; ++k)
        {
            auto id = vm_id(ns.ns_id, vnfd, vdu, k);
            vim_.boot(*ns.vim_id, id, v.flavor(), ns.networks, ns.owner);
            booted.push_back(id);
        }
    }
    return booted;
}

void Nfvo::on_instantiate(const ScheduledEvent& e)
{
    auto ns = this->ns(e.subject);
    if (ns.state != NsState::INSTANTIATING)
        return;
    auto pkg = require<nfvcl::Package>(sim_.store(), kPackages, ns.package_id, Errc::UnknownNsd);

    bool ok = !value_or(e.payload, "fail", false);
    std::string reason = ok ? "" : "fault injected";
    std::vector<std::string> booted;
    std::map<std::string, int> counts;
    if (ok)
    {
        try
        {
            for (const auto& ref : pkg.nsd.vnfd_refs)
            {
                const auto* vnfd = pkg.find_vnfd(ref);
                if (vnfd->kind != nfvcl::NfKind::VNF)
                    continue;
                for (const auto& vdu : vnfd->vdus)
                {
                    int n = pkg.instances_of(ref, vdu.name);
                    auto ids = boot_vdus(ns, pkg, ref, vdu.name, 0, n);
                    booted.insert(booted.end(), ids.begin(), ids.end());
                    counts[vdu_key(ref, vdu.name)] = n;
                }
            }
        }
        catch (const Error& err)
        {
            ok = false;
            reason = err.what();
            for (const auto& id : booted)
                vim_.remove(*ns.vim_id, id);
            booted.clear();
            counts.clear();
        }
    }

    update<NsInstance>(sim_.store(), kNs, ns.ns_id, [&](NsInstance& n) {
        move(n, ok ? NsState::INSTANTIATED : NsState::FAILED);
        n.vms = booted;
        n.vdu_counts = counts;
    });
    sim_.log("sim", ns.ns_id, ok ? "ns.instantiated" : "ns.failed",
             ok ? json{{"vms", booted.size()}} : json{{"reason", reason}});
    notify({ns.ns_id, ok ? "instantiated" : "failed", ""});
}

void Nfvo::scale(const std::string& ns_id, const std::string& vnfd, const std::string& vdu, int delta,
                 const std::string& tag)
{
    auto current = ns(ns_id);
    if (current.state != NsState::INSTANTIATED)
        fail(Errc::InvalidState, ns_id + " is " + to_string(current.state) + ", scaling needs INSTANTIATED");
    auto it = current.vdu_counts.find(vdu_key(vnfd, vdu));
    if (it == current.vdu_counts.end())
        fail(Errc::BadRequest, ns_id + " has no VDU " + vdu_key(vnfd, vdu));
    if (it->second + delta < 0)
        fail(Errc::BadRequest, "cannot scale " + vdu_key(vnfd, vdu) + " below zero");
    auto decision = sim_.check("ns.scale", {ns_id, current.nsd_id, current.owner});
    sim_.log("sim", ns_id, "ns.scaling", {{"vdu", vdu_key(vnfd, vdu)}, {"delta", delta}});
    sim_.schedule(sim_.durations().ns_scale + decision.extra_delay, "nfvo.scale", ns_id,
                  {{"vnfd", vnfd}, {"vdu", vdu}, {"delta", delta}, {"tag", tag}, {"fail", decision.failed()}});
}

void Nfvo::on_scale(const ScheduledEvent& e)
{
    auto current = ns(e.subject);
    auto tag = value_or<std::string>(e.payload, "tag", "");
    auto vnfd = e.payload.at("vnfd").get<std::string>();
    auto vdu = e.payload.at("vdu").get<std::string>();
    int delta = e.payload.at("delta").get<int>();
    if (current.state != NsState::INSTANTIATED || value_or(e.payload, "fail", false))
    {
        sim_.log("sim", current.ns_id, "ns.scale_failed", {{"vdu", vdu_key(vnfd, vdu)}});
        notify({current.ns_id, "scale_failed", tag});
        return;
    }
    auto pkg = require<nfvcl::Package>(sim_.store(), kPackages, current.package_id, Errc::UnknownNsd);
    int have = current.vdu_counts[vdu_key(vnfd, vdu)];
    int want = have + delta;
    std::vector<std::string> added;
    std::vector<std::string> removed;
    try
    {
        if (delta > 0)
            added = boot_vdus(current, pkg, vnfd, vdu, have, want);
        for (int k = have; k > want; --k)
        {
            auto id = vm_id(current.ns_id, vnfd, vdu, k);
            vim_.remove(*current.vim_id, id);
            removed.push_back(id);
        }
    }
    catch (const Error& err)
    {
        for (const auto& id : added)
            vim_.remove(*current.vim_id, id);
        sim_.log("sim", current.ns_id, "ns.scale_failed", {{"reason", err.what()}});
        notify({current.ns_id, "scale_failed", tag});
        return;
    }
    update<NsInstance>(sim_.store(), kNs, current.ns_id, [&](NsInstance& n) {
        n.vdu_counts[vdu_key(vnfd, vdu)] = want;
        n.vms.insert(n.vms.end(), added.begin(), added.end());
        for (const auto& id : removed)
            std::erase(n.vms, id);
    });
    sim_.log("sim", current.ns_id, "ns.scaled", {{"vdu", vdu_key(vnfd, vdu)}, {"count", want}});
    notify({current.ns_id, "scaled", tag});
}

void Nfvo::terminate(const std::string& ns_id)
{
    auto current = ns(ns_id);
    update<NsInstance>(sim_.store(), kNs, ns_id, [&](NsInstance& n) { move(n, NsState::TERMINATING); });
    auto decision = sim_.check("ns.terminate", {ns_id, current.nsd_id, current.owner});
    sim_.log("sim", ns_id, "ns.terminating", {{"nsd", current.nsd_id}});
    sim_.schedule(sim_.durations().ns_terminate + decision.extra_delay, "nfvo.terminate", ns_id);
}

void Nfvo::on_terminate(const ScheduledEvent& e)
{
    auto current = ns(e.subject);
    if (current.state != NsState::TERMINATING)
        return;
    for (const auto& vm : current.vms)
        vim_.remove(*current.vim_id, vm);
    update<NsInstance>(sim_.store(), kNs, current.ns_id, [&](NsInstance& n) {
        move(n, NsState::TERMINATED);
        n.vms.clear();
        for (auto& [_, count] : n.vdu_counts)
            count = 0;
    });
    sim_.log("sim", current.ns_id, "ns.terminated", json::object());
    notify({current.ns_id, "terminated", ""});
}

NsInstance Nfvo::ns(const std::string& ns_id) const
{
    return require<NsInstance>(sim_.store(), kNs, ns_id, Errc::UnknownNs);
}

std::vector<NsInstance> Nfvo::all() const { return load_all<NsInstance>(sim_.store(), kNs); }

// ---------------------------------------------------------------------------

Vnfm::Vnfm(Simulator& sim) : sim_(sim)
{
    sim_.on("vnfm.apply", [this](const ScheduledEvent& e) {
        bool ok = !value_or(e.payload, "fail", false);
        sim_.log("sim", e.subject, ok ? "bundle.applied" : "bundle.failed",
                 {{"target", e.payload.at("target")}, {"manager", e.payload.at("manager")}});
        for (const auto& l : listeners_)
            l(e.subject, ok);
    });
}

void Vnfm::apply(const std::string& bundle_id, const std::string& target, const std::string& manager,
                 const std::vector<std::string>& subjects)
{
    auto aliases = subjects;
    aliases.push_back(bundle_id);
    aliases.push_back(target);
    auto decision = sim_.check("bundle.apply", aliases);
    sim_.log("sim", bundle_id, "bundle.dispatched", {{"target", target}, {"manager", manager}});
    sim_.schedule(sim_.durations().config_apply + decision.extra_delay, "vnfm.apply", bundle_id,
                  {{"target", target}, {"manager", manager}, {"fail", decision.failed()}});
}

} // namespace oss::sim
