#include "oss/nb/nb.hpp"

#include <algorithm>
#include <regex>

#include <httplib.h>

#include "oss/core/tenancy.hpp"
#include "oss/core/validation.hpp"
#include "oss/nfvcl/catalog.hpp"

namespace oss::nb
{

namespace
{
constexpr const char* kSboss = "nb_sboss";
constexpr const char* kSlices = "nb_slices";
constexpr const char* kRequests = "nb_requests";

const std::set<std::string> kCapabilities{"metal", "iaas", "paas", "nfv"};

Reply reply_for(const json& sb_record)
{
    auto state = sb_record.value("state", std::string{});
    if (state == "ACTIVE")
        return Reply::READY;
    if (state == "FAILED" || state == "TERMINATED")
        return Reply::FAILED;
    return Reply::PENDING;
}

std::string error_text(const HttpResult& r)
{
    if (r.status == 0)
        return "SB-OSS unreachable";
    if (r.body.is_object() && r.body.contains("error"))
        return r.body.value("error", std::string{}) + ": " + r.body.value("message", std::string{});
    return "HTTP " + std::to_string(r.status);
}

} // namespace

SliceRecord NbSlice::record() const { return {slice_id, request, state, bindings, state_history}; }

RoutingPlan route_slice_request(const SliceRequest& request, const std::vector<SbossRecord>& registry)
{
    std::vector<const SbossRecord*> candidates;
    for (const auto& r : registry)
        if (r.status == SbossStatus::ONBOARDED && r.metadata.capabilities.count("nfv"))
            candidates.push_back(&r);
    std::sort(candidates.begin(), candidates.end(),
              [](const auto* a, const auto* b) { return a->sboss_id < b->sboss_id; });

    std::vector<AreaId> missing;
    for (auto area : request.coverage_areas)
        if (std::none_of(candidates.begin(), candidates.end(),
                         [&](const auto* c) { return c->metadata.areas_served.count(area) > 0; }))
            missing.push_back(area);
    if (!missing.empty())
        fail(Errc::NoCoverage, "no nfv-capable SB-OSS serves some requested areas", {{"areas", missing}});

    auto covers = [&](const std::vector<const SbossRecord*>& chosen) {
        for (auto area : request.coverage_areas)
            if (std::none_of(chosen.begin(), chosen.end(),
                             [&](const auto* c) { return c->metadata.areas_served.count(area) > 0; }))
                return false;
        return true;
    };

    // Combinations of each size in lexicographic order; the first cover found
    // is the minimum one with the smallest id set.
    std::vector<const SbossRecord*> chosen;
    const std::size_t n = candidates.size();
    for (std::size_t k = 1; k <= n && chosen.empty(); ++k)
    {
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i)
            idx[i] = i;
        while (true)
        {
            std::vector<const SbossRecord*> pick;
            for (auto i : idx)
                pick.push_back(candidates[i]);
            if (covers(pick))
            {
                chosen = pick;
                break;
            }
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + i - 1)
                --i;
            if (i == 0)
                break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j)
                idx[j] = idx[j - 1] + 1;
        }
    }

    RoutingPlan plan;
    std::map<std::string, AreaSet> share;
    for (auto area : request.coverage_areas)
        for (const auto* c : chosen)
            if (c->metadata.areas_served.count(area))
            {
                share[c->sboss_id].insert(area);
                break;
            }
    for (const auto* c : chosen)
    {
        if (!share.count(c->sboss_id))
            continue;
        SliceRequest sub = request;
        sub.request_id = request.request_id + "/" + c->sboss_id;
        sub.coverage_areas = share[c->sboss_id];
        plan.assignments.push_back({c->sboss_id, sub});
    }
    return plan;
}

Verdict aggregate_replies(const NegotiationState& state)
{
    bool all_ready = true;
    for (const auto& [_, r] : state.replies)
    {
        if (r == Reply::FAILED)
            return Verdict::failed;
        all_ready = all_ready && r == Reply::READY;
    }
    return all_ready ? Verdict::all_ready : Verdict::still_pending;
}

Transport http_transport(const std::string& endpoint)
{
    return [endpoint](const std::string& method, const std::string& path, const json& body,
                      const std::string& tenant) -> HttpResult {
        httplib::Client cli(endpoint);
        cli.set_connection_timeout(2);
        cli.set_read_timeout(10);
        httplib::Headers headers{{"X-Tenant-Id", tenant}};
        auto payload = body.is_null() ? std::string{} : body.dump();
        httplib::Result res;
        if (method == "GET")
            res = cli.Get(path, headers);
        else if (method == "POST")
            res = cli.Post(path, headers, payload, "application/json");
        else if (method == "PUT")
            res = cli.Put(path, headers, payload, "application/json");
        else
            res = cli.Delete(path, headers);
        if (!res)
            return {0, nullptr};
        return {res->status, json::parse(res->body, nullptr, false)};
    };
}

NbCore::NbCore(sim::Simulator& sim) : sim_(sim) {}

SbossRecord NbCore::onboard(const std::string& endpoint, const SbossMetadata& metadata)
{
    static const std::regex uri(R"(^(local|http|https)://[A-Za-z0-9._~\-]+(:[0-9]+)?(/\S*)?$)");
    if (!std::regex_match(endpoint, uri))
        fail(Errc::InvalidUri, "'" + endpoint + "' is not a valid SB-OSS endpoint");
    if (metadata.areas_served.empty())
        fail(Errc::EmptyAreaSet, "an SB-OSS must serve at least one area");
    for (const auto& c : metadata.capabilities)
        if (!kCapabilities.count(c))
            fail(Errc::SchemaViolation, "unknown capability '" + c + "'");
    auto& store = sim_.store();
    auto key = sha256_hex(endpoint);
    if (store.get(kSboss + std::string("_endpoints"), key))
        fail(Errc::DuplicateEndpoint, "endpoint " + endpoint + " is already onboarded");
    SbossRecord r{next_id(store, "sboss"), endpoint, metadata, SbossStatus::ONBOARDED};
    try
    {
        store.commit(kSboss + std::string("_endpoints"), key, r.sboss_id, 0);
    }
    catch (const Error& e)
    {
        if (e.code() == Errc::RevisionConflict)
            fail(Errc::DuplicateEndpoint, "endpoint " + endpoint + " is already onboarded");
        throw;
    }
    insert(store, kSboss, r.sboss_id, r);
    for (auto area : metadata.areas_served)
        if (!tenancy::area_ids(store).count(area))
            tenancy::ensure_area(store, area);
    sim_.log("nb", r.sboss_id, "sboss.onboarded", {{"endpoint", endpoint}, {"areas", metadata.areas_served}});
    return r;
}

std::vector<SbossRecord> NbCore::registry() const
{
    auto out = load_all<SbossRecord>(sim_.store(), kSboss);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return natural_less(a.sboss_id, b.sboss_id); });
    return out;
}

Transport NbCore::transport_for(const std::string& sboss_id)
{
    auto r = require<SbossRecord>(sim_.store(), kSboss, sboss_id, Errc::NotFound);
    const std::string local = "local://";
    if (r.endpoint.rfind(local, 0) == 0)
    {
        auto it = locals_.find(r.endpoint.substr(local.size()));
        if (it == locals_.end())
            return [](const std::string&, const std::string&, const json&, const std::string&) {
                return HttpResult{0, nullptr};
            };
        return it->second;
    }
    return http_transport(r.endpoint);
}

void NbCore::set_state(NbSlice& s, SliceState to)
{
    if (!slice_transition_allowed(s.state, to))
        fail(Errc::InvalidState, "slice " + s.slice_id + " cannot move " + to_string(s.state) + " -> " + to_string(to));
    sim_.log("nb", s.slice_id, "slice." + to_string(to), {{"from", to_string(s.state)}});
    s.state = to;
    if (to == SliceState::TERMINATED)
        s.bindings.clear();
    s.state_history.push_back({to_string(to), sim_.now()});
}

void NbCore::save(const NbSlice& s)
{
    auto doc = sim_.store().get(kSlices, s.slice_id);
    sim_.store().commit(kSlices, s.slice_id, s, doc ? doc->revision : 0);
}

void NbCore::collect_bindings(NbSlice& s, const std::string& sboss_id, const json& sb_record)
{
    if (!sb_record.is_object())
        return;
    for (const auto& b : sb_record.value("bindings", json::array()))
    {
        SliceBindingRef ref{sboss_id, b.value("blueprint_instance_id", std::string{})};
        if (std::find(s.bindings.begin(), s.bindings.end(), ref) == s.bindings.end())
            s.bindings.push_back(ref);
    }
}

void NbCore::rollback(NbSlice& s, const std::string& reason)
{
    for (auto it = s.sb_slices.rbegin(); it != s.sb_slices.rend(); ++it)
    {
        auto r = transport_for(it->first)("DELETE", "/sb/slices/" + it->second, nullptr, s.request.tenant_id);
        sim_.log("nb", s.slice_id, "rollback.issued", {{"sboss", it->first}, {"sb_slice", it->second}});
        if (r.ok())
            collect_bindings(s, it->first, r.body);
    }
    s.negotiation.rollback_issued = true;
    s.error = reason;
    set_state(s, SliceState::FAILED);
    save(s);
}

NbSlice NbCore::request(const SliceRequest& req)
{
    auto& store = sim_.store();
    if (!req.request_id.empty())
        if (auto known = store.get(kRequests, req.request_id))
            return slice(known->body.get<std::string>());

    require_valid(validate_slice_request(req, tenancy::tenant_ids(store), nfvcl::executable_tags(),
                                         tenancy::area_ids(store)));
    auto plan = route_slice_request(req, registry());

    NbSlice s;
    s.slice_id = next_id(store, "slice");
    s.request = req;
    if (s.request.request_id.empty())
        s.request.request_id = s.slice_id;
    s.plan = plan;
    s.negotiation.slice_id = s.slice_id;
    for (const auto& a : plan.assignments)
        s.negotiation.replies[a.sboss_id] = Reply::PENDING;
    s.state_history.push_back({to_string(s.state), sim_.now()});
    try
    {
        store.commit(kRequests, s.request.request_id, s.slice_id, 0);
    }
    catch (const Error& e)
    {
        if (e.code() == Errc::RevisionConflict)
            return slice(store.get(kRequests, s.request.request_id)->body.get<std::string>());
        throw;
    }
    insert(store, kSlices, s.slice_id, s);
    sim_.log("nb", s.slice_id, "slice.REQUESTED", {{"tenant", req.tenant_id}, {"type", req.slice_type}});

    set_state(s, SliceState::NEGOTIATING);
    save(s);
    for (const auto& a : plan.assignments)
    {
        auto r = transport_for(a.sboss_id)("POST", "/sb/slices", a.sub_request, req.tenant_id);
        sim_.log("nb", s.slice_id, "subrequest.dispatched", {{"sboss", a.sboss_id}, {"status", r.status}});
        if (!r.ok())
        {
            s.negotiation.replies[a.sboss_id] = Reply::FAILED;
            rollback(s, a.sboss_id + " rejected the request: " + error_text(r));
            return s;
        }
        s.sb_slices.emplace_back(a.sboss_id, r.body.at("slice_id").get<std::string>());
        s.negotiation.replies[a.sboss_id] = reply_for(r.body);
        if (s.negotiation.replies[a.sboss_id] == Reply::FAILED)
        {
            rollback(s, a.sboss_id + " failed: " + r.body.value("error", std::string{}));
            return s;
        }
    }
    set_state(s, SliceState::INSTANTIATING);
    save(s);
    return reconcile(s.slice_id);
}

NbSlice NbCore::modify(const std::string& slice_id, const std::optional<AreaSet>& areas,
                       const std::optional<QosProfile>& qos)
{
    auto s = slice(slice_id);
    if (s.state != SliceState::ACTIVE)
        fail(Errc::InvalidState, "slice " + slice_id + " is " + to_string(s.state) + ", modify needs ACTIVE");
    auto req = s.request;
    if (areas)
    {
        if (!std::includes(areas->begin(), areas->end(), req.coverage_areas.begin(), req.coverage_areas.end()))
            fail(Errc::InvalidDelta, "a modification may only add coverage areas");
        req.coverage_areas = *areas;
    }
    if (qos)
        req.qos = *qos;
    require_valid(validate_slice_request(req, tenancy::tenant_ids(sim_.store()), nfvcl::executable_tags(),
                                         tenancy::area_ids(sim_.store())));

    std::vector<SbossRecord> bound;
    for (const auto& r : registry())
        for (const auto& [sboss, _] : s.sb_slices)
            if (r.sboss_id == sboss)
                bound.push_back(r);
    RoutingPlan plan;
    try
    {
        plan = route_slice_request(req, bound);
    }
    catch (const Error& e)
    {
        if (e.code() != Errc::NoCoverage)
            throw;
        fail(Errc::RoutingChange, "the new coverage needs SB-OSS outside the bound set", e.detail());
    }

    set_state(s, SliceState::UPDATING);
    s.request = req;
    for (const auto& [sboss, sb_id] : s.sb_slices)
    {
        json body = {{"qos", req.qos}};
        for (const auto& a : plan.assignments)
            if (a.sboss_id == sboss)
            {
                AreaSet merged = a.sub_request.coverage_areas;
                for (const auto& old : s.plan.assignments)
                    if (old.sboss_id == sboss)
                        merged.insert(old.sub_request.coverage_areas.begin(), old.sub_request.coverage_areas.end());
                body["coverage_areas"] = merged;
            }
        auto r = transport_for(sboss)("PUT", "/sb/slices/" + sb_id, body, req.tenant_id);
        sim_.log("nb", s.slice_id, "modification.dispatched", {{"sboss", sboss}, {"status", r.status}});
        if (!r.ok())
        {
            s.negotiation.replies[sboss] = Reply::FAILED;
            rollback(s, sboss + " rejected the modification: " + error_text(r));
            return s;
        }
        s.negotiation.replies[sboss] = reply_for(r.body);
    }
    for (auto& a : s.plan.assignments)
        for (const auto& n : plan.assignments)
            if (a.sboss_id == n.sboss_id)
                a.sub_request.coverage_areas.insert(n.sub_request.coverage_areas.begin(),
                                                    n.sub_request.coverage_areas.end());
    for (auto& [_, r] : s.negotiation.replies)
        if (r == Reply::READY)
            r = Reply::PENDING;
    save(s);
    return reconcile(slice_id);
}

NbSlice NbCore::terminate(const std::string& slice_id)
{
    auto s = slice(slice_id);
    if (is_terminal(s.state) || s.state == SliceState::TERMINATING)
        return s;
    if (s.state != SliceState::ACTIVE)
    {
        for (auto it = s.sb_slices.rbegin(); it != s.sb_slices.rend(); ++it)
            transport_for(it->first)("DELETE", "/sb/slices/" + it->second, nullptr, s.request.tenant_id);
        s.error = "terminated before becoming active";
        set_state(s, SliceState::FAILED);
        save(s);
        return s;
    }
    set_state(s, SliceState::TERMINATING);
    for (auto it = s.sb_slices.rbegin(); it != s.sb_slices.rend(); ++it)
    {
        auto r = transport_for(it->first)("DELETE", "/sb/slices/" + it->second, nullptr, s.request.tenant_id);
        sim_.log("nb", s.slice_id, "teardown.dispatched", {{"sboss", it->first}, {"status", r.status}});
    }
    save(s);
    return s;
}

NbSlice NbCore::slice(const std::string& slice_id)
{
    return require<NbSlice>(sim_.store(), kSlices, slice_id, Errc::UnknownSlice);
}

std::vector<NbSlice> NbCore::slices()
{
    auto out = load_all<NbSlice>(sim_.store(), kSlices);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return natural_less(a.slice_id, b.slice_id); });
    return out;
}

void NbCore::reconcile_all()
{
    for (const auto& s : slices())
        if (s.state == SliceState::INSTANTIATING || s.state == SliceState::UPDATING ||
            s.state == SliceState::TERMINATING)
            reconcile(s.slice_id);
}

NbSlice NbCore::reconcile(const std::string& slice_id)
{
    auto s = slice(slice_id);
    if (s.state == SliceState::TERMINATING)
    {
        bool done = true;
        for (const auto& [sboss, sb_id] : s.sb_slices)
        {
            auto r = transport_for(sboss)("GET", "/sb/slices/" + sb_id, nullptr, s.request.tenant_id);
            auto state = r.ok() ? r.body.value("state", std::string{}) : std::string{};
            done = done && (state == "TERMINATED" || state == "FAILED");
        }
        if (done)
        {
            set_state(s, SliceState::TERMINATED);
            save(s);
        }
        return s;
    }
    if (s.state != SliceState::INSTANTIATING && s.state != SliceState::UPDATING)
        return s;

    bool changed = false;
    for (const auto& [sboss, sb_id] : s.sb_slices)
    {
        auto& reply = s.negotiation.replies[sboss];
        if (reply != Reply::PENDING)
            continue;
        auto r = transport_for(sboss)("GET", "/sb/slices/" + sb_id, nullptr, s.request.tenant_id);
        if (!r.ok())
            continue;
        auto next = reply_for(r.body);
        if (next == Reply::READY)
            collect_bindings(s, sboss, r.body);
        if (next != reply)
        {
            reply = next;
            changed = true;
            sim_.log("nb", s.slice_id, "reply." + json(next).get<std::string>(), {{"sboss", sboss}});
        }
        if (next == Reply::FAILED)
            s.error = sboss + " reported failure: " + r.body.value("error", std::string{});
    }
    switch (aggregate_replies(s.negotiation))
    {
    case Verdict::all_ready:
        set_state(s, SliceState::ACTIVE);
        save(s);
        break;
    case Verdict::failed:
        rollback(s, s.error);
        break;
    case Verdict::still_pending:
        if (changed)
            save(s);
        break;
    }
    return s;
}

} // namespace oss::nb
