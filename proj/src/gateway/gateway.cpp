#include "oss/gateway/gateway.hpp"

#include "oss/core/tenancy.hpp"
#include "oss/sim/fixtures.hpp"

namespace oss::gateway
{

namespace
{

constexpr const char* kIdempotency = "idempotency";

std::string tenant_of(const Request& r)
{
    return r.tenant.empty() ? std::string(tenancy::kOperatorTenant) : r.tenant;
}

bool is_operator(const std::string& tenant) { return tenant == tenancy::kOperatorTenant; }

json body_or_empty(const Request& r) { return r.body.is_null() ? json::object() : r.body; }

std::string query(const Request& r, const std::string& key, const std::string& fallback = {})
{
    auto it = r.query.find(key);
    return it == r.query.end() ? fallback : it->second;
}

json with_id(const json& record, const std::string& id)
{
    auto out = record;
    out["id"] = id;
    return out;
}

json nb_view(const nb::NbSlice& s)
{
    json out = s.record();
    out["id"] = s.slice_id;
    out["rollback_issued"] = s.negotiation.rollback_issued;
    out["replies"] = s.negotiation.replies;
    out["sb_slices"] = s.sb_slices;
    if (!s.error.empty())
        out["error"] = s.error;
    return out;
}

SliceRequest slice_request(const Request& r)
{
    auto req = body_or_empty(r).get<SliceRequest>();
    auto tenant = tenant_of(r);
    if (req.tenant_id.empty())
        req.tenant_id = tenant;
    else if (!is_operator(tenant) && req.tenant_id != tenant)
        fail(Errc::TenantMismatch, "request names tenant " + req.tenant_id + " but caller is " + tenant);
    return req;
}

std::optional<AreaSet> areas_field(const json& body)
{
    if (!body.contains("coverage_areas"))
        return std::nullopt;
    return body.at("coverage_areas").get<AreaSet>();
}

std::optional<QosProfile> qos_field(const json& body)
{
    if (!body.contains("qos"))
        return std::nullopt;
    return body.at("qos").get<QosProfile>();
}

json events_page(const sim::Simulator& sim, const Request& r)
{
    auto cursor = std::stoull(query(r, "cursor", "0"));
    auto limit = std::stoull(query(r, "limit", "1000"));
    auto events = sim.events_after(cursor, limit);
    auto next = events.empty() ? cursor : events.back().index;
    return {{"events", events}, {"cursor", next}};
}

} // namespace

Gateway::Gateway(DocumentStore& store, sim::SimConfig config)
    : store_(store),
      sim_(store, config),
      vim_(sim_),
      nfvo_(sim_, vim_),
      vnfm_(sim_),
      fabric_(sim_),
      topology_(store, vim_),
      engine_(sim_, nfvo_, vnfm_, topology_),
      metal_(sim_, fabric_, topology_),
      sb_(sim_, engine_),
      nb_(sim_)
{
    nb_.register_local("sb", [this](const std::string& method, const std::string& path, const json& body,
                                    const std::string& tenant) {
        auto r = local_call(method, path, body, tenant);
        return nb::HttpResult{r.status, r.body};
    });
    build_routes();
}

Response Gateway::local_call(const std::string& method, const std::string& path, const json& body,
                             const std::string& tenant)
{
    Request r;
    r.method = method;
    r.path = path;
    r.body = body;
    r.tenant = tenant;
    return router_.dispatch(r);
}

Response Gateway::call(const std::string& method, const std::string& path, const json& body,
                       const std::string& tenant)
{
    Request r;
    r.method = method;
    auto q = path.find('?');
    r.path = path.substr(0, q);
    if (q != std::string::npos)
    {
        auto rest = path.substr(q + 1);
        std::size_t i = 0;
        while (i < rest.size())
        {
            auto amp = rest.find('&', i);
            auto part = rest.substr(i, amp == std::string::npos ? std::string::npos : amp - i);
            auto eq = part.find('=');
            r.query[part.substr(0, eq)] = eq == std::string::npos ? "" : part.substr(eq + 1);
            if (amp == std::string::npos)
                break;
            i = amp + 1;
        }
    }
    r.body = body;
    r.tenant = tenant;
    return handle(r);
}

Response Gateway::handle(const Request& request)
{
    std::lock_guard lock(mutex_);
    const bool mutating = is_mutating(request.method);
    std::string key;
    if (mutating && !request.idempotency_key.empty())
    {
        key = sha256_hex(tenant_of(request) + "\n" + request.method + "\n" + request.path + "\n" +
                         request.idempotency_key);
        if (auto seen = store_.get(kIdempotency, key))
            return {seen->body.at("status").get<int>(), seen->body.at("body")};
    }
    auto response = router_.dispatch(request);
    if (mutating && response.status < 500 && !request.path.starts_with("/sim/"))
        sim_.log("api", request.path, request.method, {{"status", response.status}, {"tenant", tenant_of(request)}});
    if (!key.empty())
    {
        try
        {
            store_.commit(kIdempotency, key, {{"status", response.status}, {"body", response.body}}, 0);
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::RevisionConflict)
                throw;
            auto seen = store_.get(kIdempotency, key);
            return {seen->body.at("status").get<int>(), seen->body.at("body")};
        }
    }
    return response;
}

void Gateway::reconcile()
{
    sb_.reconcile_all();
    nb_.reconcile_all();
}

json Gateway::advance(double dt)
{
    std::lock_guard lock(mutex_);
    auto from = sim_.log_size();
    sim_.advance(dt);
    reconcile();
    return {{"now", sim_.now()}, {"events", sim_.log_size() - from}};
}

json Gateway::settle(double limit)
{
    std::lock_guard lock(mutex_);
    auto from = sim_.log_size();
    auto start = sim_.now();
    // NB polling can issue new SB work, so settle until both are quiet.
    while (true)
    {
        sim_.settle(limit - (sim_.now() - start));
        auto before = sim_.log_size();
        reconcile();
        if (sim_.idle() && sim_.log_size() == before)
            break;
        if (sim_.now() - start >= limit)
            break;
    }
    return {{"now", sim_.now()}, {"events", sim_.log_size() - from}};
}

void Gateway::build_routes()
{
    auto& R = router_;

    // API description and event feed ----------------------------------------

    R.add({"GET", "/api", "Machine-readable description of every route", {}, nullptr},
          [this](const Request&, const Params&) { return Response{200, router_.describe()}; });
    R.add({"GET", "/events", "Event log entries after a cursor", {}, nullptr},
          [this](const Request& r, const Params&) { return Response{200, events_page(sim_, r)}; });

    // Tenants and areas --------------------------------------------------------

    R.add({"POST", "/tenants", "Create a tenant space", {"BadRequest", "DuplicateTenant", "VlanPoolExhausted"},
           {{"type", "object"}, {"required", {"id"}}}, true},
          [this](const Request& r, const Params&) {
              auto b = body_or_empty(r);
              tenancy::TenantCreate req{b.at("id").get<std::string>(), b.value("name", std::string{}),
                                        b.value("quota", ResourceBudget{}),
                                        b.value("vlan_block", tenancy::kDefaultVlanBlock)};
              auto t = tenancy::create_tenant(store_, req);
              return Response{201, with_id(t, t.id)};
          });
    R.add({"GET", "/tenants", "List tenant spaces", {}, nullptr},
          [this](const Request&, const Params&) { return Response{200, tenancy::list_tenants(store_)}; });
    auto tenant_or_404 = [this](const std::string& id) {
        auto t = tenancy::find_tenant(store_, id);
        if (!t)
            fail(Errc::NotFound, "tenant " + id + " not found");
        return *t;
    };
    R.add({"GET", "/tenants/{id}", "Read a tenant space", {"NotFound"}, nullptr},
          [tenant_or_404](const Request&, const Params& p) { return Response{200, tenant_or_404(p.at("id"))}; });
    R.add({"GET", "/tenants/{id}/usage", "Quota usage of a tenant", {"NotFound"}, nullptr},
          [this, tenant_or_404](const Request&, const Params& p) {
              tenant_or_404(p.at("id"));
              return Response{200, tenancy::usage(store_, p.at("id"))};
          });
    R.add({"GET", "/usage", "Quota usage of every tenant", {}, nullptr},
          [this](const Request&, const Params&) { return Response{200, tenancy::all_usage(store_)}; });
    R.add({"POST", "/areas", "Register a numbered area", {"BadRequest"}, {{"type", "object"}, {"required", {"id"}}}},
          [this](const Request& r, const Params&) {
              auto b = body_or_empty(r);
              auto a = tenancy::ensure_area(store_, b.at("id").get<AreaId>(), b.value("kind", AreaKind::edge),
                                            b.value("name", std::string{}));
              return Response{201, a};
          });
    R.add({"GET", "/areas", "List areas", {}, nullptr},
          [this](const Request&, const Params&) { return Response{200, tenancy::list_areas(store_)}; });

    // NB-OSS -------------------------------------------------------------------

    R.add({"POST", "/nb/sboss", "Onboard an SB-OSS", {"InvalidUri", "EmptyAreaSet", "DuplicateEndpoint"},
           {{"type", "object"}, {"required", {"endpoint", "metadata"}}}, true},
          [this](const Request& r, const Params&) {
              auto b = body_or_empty(r);
              auto rec = nb_.onboard(b.at("endpoint").get<std::string>(), b.at("metadata").get<nb::SbossMetadata>());
              return Response{201, with_id(rec, rec.sboss_id)};
          });
    R.add({"GET", "/nb/sboss", "List onboarded SB-OSS", {}, nullptr},
          [this](const Request&, const Params&) { return Response{200, nb_.registry()}; });
    R.add({"POST", "/nb/slices", "Request a slice",
           {"SchemaViolation", "UnknownTenant", "UnknownSliceType", "UnknownArea", "NoCoverage", "TenantMismatch"},
           {{"type", "object"}, {"required", {"slice_type", "coverage_areas"}}}, true},
          [this](const Request& r, const Params&) { return Response{201, nb_view(nb_.request(slice_request(r)))}; });
    R.add({"GET", "/nb/slices", "List slices", {}, nullptr}, [this](const Request& r, const Params&) {
        json out = json::array();
        for (const auto& s : nb_.slices())
            if (is_operator(tenant_of(r)) || s.request.tenant_id == tenant_of(r))
                out.push_back(nb_view(s));
        return Response{200, out};
    });
    auto nb_slice_for = [this](const Request& r, const std::string& id) {
        auto s = nb_.slice(id);
        if (!is_operator(tenant_of(r)) && s.request.tenant_id != tenant_of(r))
            fail(Errc::UnknownSlice, "slice " + id + " not found");
        return s;
    };
    R.add({"GET", "/nb/slices/{id}", "Read a slice", {"UnknownSlice"}, nullptr},
          [nb_slice_for](const Request& r, const Params& p) { return Response{200, nb_view(nb_slice_for(r, p.at("id")))}; });
    R.add({"PUT", "/nb/slices/{id}", "Modify coverage or QoS of an active slice",
           {"UnknownSlice", "InvalidState", "InvalidDelta", "RoutingChange"}, {{"type", "object"}}, true},
          [this, nb_slice_for](const Request& r, const Params& p) {
              nb_slice_for(r, p.at("id"));
              auto b = body_or_empty(r);
              return Response{202, nb_view(nb_.modify(p.at("id"), areas_field(b), qos_field(b)))};
          });
    R.add({"DELETE", "/nb/slices/{id}", "Terminate a slice", {"UnknownSlice"}, nullptr, true},
          [this, nb_slice_for](const Request& r, const Params& p) {
              nb_slice_for(r, p.at("id"));
              return Response{202, nb_view(nb_.terminate(p.at("id")))};
          });

    // SB-OSS -------------------------------------------------------------------

    R.add({"POST", "/sb/slices", "Instantiate a slice in this domain",
           {"SchemaViolation", "LayerDisabled", "NoMatchingBlueprintType", "QuotaExceeded"},
           {{"type", "object"}, {"required", {"slice_type", "coverage_areas"}}}, true},
          [this](const Request& r, const Params&) {
              auto s = sb_.submit(slice_request(r));
              return Response{201, with_id(s, s.slice_id)};
          });
    R.add({"GET", "/sb/slices", "List domain slices", {}, nullptr}, [this](const Request& r, const Params&) {
        json out = json::array();
        for (const auto& s : sb_.slices())
            if (is_operator(tenant_of(r)) || s.request.tenant_id == tenant_of(r))
                out.push_back(with_id(s, s.slice_id));
        return Response{200, out};
    });
    auto sb_slice_for = [this](const Request& r, const std::string& id) {
        auto s = sb_.slice(id);
        if (!is_operator(tenant_of(r)) && s.request.tenant_id != tenant_of(r))
            fail(Errc::UnknownSlice, "slice " + id + " not found");
        return s;
    };
    R.add({"GET", "/sb/slices/{id}", "Read a domain slice", {"UnknownSlice"}, nullptr},
          [sb_slice_for](const Request& r, const Params& p) {
              auto s = sb_slice_for(r, p.at("id"));
              return Response{200, with_id(s, s.slice_id)};
          });
    R.add({"PUT", "/sb/slices/{id}", "Modify a domain slice",
           {"UnknownSlice", "InvalidState", "InvalidDelta", "QuotaExceeded"}, {{"type", "object"}}, true},
          [this, sb_slice_for](const Request& r, const Params& p) {
              sb_slice_for(r, p.at("id"));
              auto b = body_or_empty(r);
              auto s = sb_.modify(p.at("id"), areas_field(b), qos_field(b));
              return Response{202, with_id(s, s.slice_id)};
          });
    R.add({"DELETE", "/sb/slices/{id}", "Deinstantiate a domain slice", {"UnknownSlice"}, nullptr, true},
          [this, sb_slice_for](const Request& r, const Params& p) {
              sb_slice_for(r, p.at("id"));
              auto s = sb_.remove(p.at("id"));
              return Response{202, with_id(s, s.slice_id)};
          });
    R.add({"GET", "/sb/profile", "Programmability profile of this domain", {}, nullptr},
          [this](const Request&, const Params&) { return Response{200, sb_.profile()}; });
    R.add({"PUT", "/sb/profile", "Replace the programmability profile", {"InvalidProfile"}, {{"type", "object"}}},
          [this](const Request& r, const Params&) {
              return Response{200, sb_.set_profile(body_or_empty(r).get<sb::ProgrammabilityProfile>())};
          });

    // NFVCL --------------------------------------------------------------------

    R.add({"GET", "/nfvcl/catalog", "Blueprint types", {}, nullptr},
          [](const Request&, const Params&) { return Response{200, nfvcl::catalog_to_json()}; });
    R.add({"POST", "/nfvcl/blueprints", "Create a blueprint instance",
           {"UnknownBlueprintType", "SchemaViolation", "TopologyMissing", "NoCoreArea", "QuotaExceeded",
            "NoVimForArea", "NoClusterForArea"},
           {{"type", "object"}, {"required", {"type", "config", "areas"}}}, true},
          [this](const Request& r, const Params&) {
              auto a = engine_.create(tenant_of(r), body_or_empty(r));
              return Response{201, {{"id", a.instance.instance_id},
                                    {"operation_id", a.operation_id},
                                    {"instance", a.instance}}};
          });
    R.add({"GET", "/nfvcl/blueprints", "List blueprint instances", {}, nullptr},
          [this](const Request& r, const Params&) { return Response{200, engine_.list(tenant_of(r))}; });
    R.add({"GET", "/nfvcl/blueprints/{id}", "Read a blueprint instance", {"UnknownInstance"}, nullptr},
          [this](const Request& r, const Params& p) { return Response{200, engine_.get_for(p.at("id"), tenant_of(r))}; });
    R.add({"PUT", "/nfvcl/blueprints/{id}", "Update a blueprint instance",
           {"UnknownInstance", "InvalidState", "SchemaViolation", "QuotaExceeded"}, {{"type", "object"}}, true},
          [this](const Request& r, const Params& p) {
              auto a = engine_.update(p.at("id"), tenant_of(r), body_or_empty(r));
              return Response{202, {{"id", a.instance.instance_id},
                                    {"operation_id", a.operation_id},
                                    {"instance", a.instance}}};
          });
    R.add({"DELETE", "/nfvcl/blueprints/{id}", "Destroy a blueprint instance",
           {"UnknownInstance", "SlicesStillAttached"}, nullptr, true},
          [this](const Request& r, const Params& p) {
              auto a = engine_.destroy(p.at("id"), tenant_of(r), query(r, "force") == "true");
              return Response{202, {{"id", a.instance.instance_id},
                                    {"operation_id", a.operation_id},
                                    {"instance", a.instance}}};
          });
    R.add({"POST", "/nfvcl/blueprints/{id}/day2/{action}", "Run a Day-2 action",
           {"UnknownInstance", "UnknownAction", "InstanceNotReady", "QuotaExceeded"}, {{"type", "object"}}, true},
          [this](const Request& r, const Params& p) {
              auto op = engine_.day2(p.at("id"), tenant_of(r), p.at("action"), body_or_empty(r));
              return Response{202, with_id(op, op.operation_id)};
          });
    R.add({"GET", "/nfvcl/blueprints/{id}/operations", "Operations of an instance", {"UnknownInstance"}, nullptr},
          [this](const Request& r, const Params& p) {
              engine_.get_for(p.at("id"), tenant_of(r));
              return Response{200, engine_.operations(p.at("id"))};
          });
    R.add({"GET", "/nfvcl/blueprints/{id}/operations/{op}", "Read an operation",
           {"UnknownInstance", "UnknownOperation"}, nullptr},
          [this](const Request& r, const Params& p) {
              engine_.get_for(p.at("id"), tenant_of(r));
              return Response{200, engine_.operation(p.at("id"), p.at("op"))};
          });
    R.add({"GET", "/nfvcl/blueprints/{id}/bundles", "Configuration bundles of an instance", {"UnknownInstance"},
           nullptr},
          [this](const Request& r, const Params& p) {
              engine_.get_for(p.at("id"), tenant_of(r));
              return Response{200, engine_.bundles(p.at("id"))};
          });
    R.add({"GET", "/nfvcl/ns", "Network service instances on the NFVO", {}, nullptr},
          [this](const Request& r, const Params&) {
              json out = json::array();
              for (const auto& ns : nfvo_.all())
                  if (nfvcl::visible_to(ns.owner, tenant_of(r)))
                      out.push_back(ns);
              return Response{200, out};
          });
    R.add({"GET", "/nfvcl/topology", "Networks, VIMs and clusters", {}, nullptr},
          [this](const Request&, const Params&) { return Response{200, topology_.to_json()}; });
    R.add({"POST", "/nfvcl/topology/networks", "Create a named network", {"BadRequest", "DuplicateName", "CidrOverlap"},
           {{"type", "object"}, {"required", {"name", "cidr"}}}, true},
          [this](const Request& r, const Params&) {
              auto b = body_or_empty(r);
              auto n = topology_.create_network(tenant_of(r), b.at("name").get<std::string>(),
                                                b.at("cidr").get<std::string>(),
                                                b.value("mode", nfvcl::NetworkMode::layer2));
              return Response{201, with_id(n, n.name)};
          });
    R.add({"DELETE", "/nfvcl/topology/networks/{name}", "Delete a named network", {"UnknownNetwork"}, nullptr, true},
          [this](const Request& r, const Params& p) {
              topology_.delete_network(tenant_of(r), p.at("name"));
              return Response{200, {{"deleted", p.at("name")}}};
          });
    R.add({"POST", "/nfvcl/topology/vims", "Register a VIM", {"BadRequest", "EmptyAreaSet"},
           {{"type", "object"}, {"required", {"vim_id", "areas"}}}, true},
          [this](const Request& r, const Params&) {
              auto b = body_or_empty(r);
              nfvcl::VimRecord v{b.at("vim_id").get<std::string>(), tenant_of(r), b.at("areas").get<AreaSet>(),
                                 b.value("capacity", ResourceBudget{}), "static"};
              auto rec = topology_.register_vim(v);
              return Response{201, with_id(rec, rec.vim_id)};
          });
    R.add({"POST", "/nfvcl/topology/clusters", "Register a Kubernetes cluster", {"BadRequest", "EmptyAreaSet"},
           {{"type", "object"}, {"required", {"cluster_id", "areas"}}}, true},
          [this](const Request& r, const Params&) {
              auto b = body_or_empty(r);
              nfvcl::ClusterRecord c{b.at("cluster_id").get<std::string>(), tenant_of(r), b.at("areas").get<AreaSet>(),
                                     b.value("capacity", ResourceBudget{}), "static",
                                     b.value("vim_id", std::optional<std::string>{})};
              auto rec = topology_.register_cluster(c);
              return Response{201, with_id(rec, rec.cluster_id)};
          });

    // MetalCL ------------------------------------------------------------------

    R.add({"POST", "/metalcl/machines/enlist", "Enlist every inventory server as NEW", {"TopologyMissing"}, nullptr},
          [this](const Request&, const Params&) { return Response{201, metal_.enlist()}; });
    R.add({"GET", "/metalcl/machines", "List machines", {}, nullptr},
          [this](const Request&, const Params&) { return Response{200, metal_.machines()}; });
    R.add({"GET", "/metalcl/machines/{id}", "Read a machine", {"UnknownMachine"}, nullptr},
          [this](const Request&, const Params& p) { return Response{200, metal_.machine(p.at("id"))}; });
    R.add({"POST", "/metalcl/machines/{id}/commission", "Commission a machine", {"UnknownMachine", "InvalidState"},
           nullptr, true},
          [this](const Request&, const Params& p) { return Response{202, metal_.commission(p.at("id"))}; });
    R.add({"POST", "/metalcl/machines/{id}/deploy", "Deploy an OS image for a tenant",
           {"UnknownMachine", "InvalidState", "UnknownImage", "UnknownTenant", "QuotaExceeded"},
           {{"type", "object"}, {"required", {"image"}}}, true},
          [this](const Request& r, const Params& p) {
              auto b = body_or_empty(r);
              auto tenant = tenant_of(r);
              if (is_operator(tenant))
                  tenant = b.value("tenant_id", tenant);
              return Response{202, metal_.deploy(p.at("id"), b.at("image").get<std::string>(), tenant)};
          });
    R.add({"POST", "/metalcl/machines/{id}/power", "Set the power state", {"UnknownMachine", "MachineUnreachable"},
           {{"type", "object"}, {"required", {"state"}}}, true},
          [this](const Request& r, const Params& p) {
              return Response{200, metal_.set_power(p.at("id"), body_or_empty(r).at("state").get<metal::Power>())};
          });
    R.add({"POST", "/metalcl/machines/{id}/release", "Release a deployed machine", {"UnknownMachine", "InvalidState"},
           nullptr, true},
          [this](const Request&, const Params& p) { return Response{202, metal_.release(p.at("id"))}; });
    R.add({"GET", "/metalcl/topology", "Discover the physical topology", {"PartialDiscovery"}, nullptr},
          [this](const Request&, const Params&) {
              auto g = metal_.discover();
              return Response{g.complete() ? 200 : 206, metal::graph_to_json(g)};
          });
    R.add({"POST", "/metalcl/overlays", "Create an overlay network",
           {"BadRequest", "TenantMismatch", "DuplicateName", "VlanExhausted", "NoFreeNic", "DisconnectedMembers"},
           {{"type", "object"}, {"required", {"name", "machines"}}}, true},
          [this](const Request& r, const Params&) {
              auto b = body_or_empty(r);
              metal::OverlayRequest req{b.at("name").get<std::string>(), tenant_of(r),
                                        b.at("machines").get<std::vector<std::string>>()};
              if (is_operator(req.tenant_id))
                  req.tenant_id = b.value("tenant_id", req.tenant_id);
              auto o = metal_.create_overlay(req);
              return Response{201, with_id(o, o.overlay_id)};
          });
    R.add({"GET", "/metalcl/overlays", "List overlays", {}, nullptr}, [this](const Request& r, const Params&) {
        json out = json::array();
        for (const auto& o : metal_.overlays())
            if (is_operator(tenant_of(r)) || o.tenant_id == tenant_of(r))
                out.push_back(o);
        return Response{200, out};
    });
    R.add({"GET", "/metalcl/overlays/{id}", "Read an overlay", {"UnknownOverlay"}, nullptr},
          [this](const Request& r, const Params& p) {
              auto o = metal_.overlay(p.at("id"));
              if (!is_operator(tenant_of(r)) && o.tenant_id != tenant_of(r))
                  fail(Errc::UnknownOverlay, "overlay " + p.at("id") + " not found");
              return Response{200, o};
          });
    R.add({"DELETE", "/metalcl/overlays/{id}", "Delete an overlay", {"UnknownOverlay"}, nullptr, true},
          [this](const Request& r, const Params& p) {
              metal_.delete_overlay(p.at("id"), tenant_of(r));
              return Response{200, {{"deleted", p.at("id")}}};
          });
    R.add({"POST", "/metalcl/stacks", "Install an IaaS or PaaS stack",
           {"BadRequest", "EmptyAreaSet", "InvalidState", "TenantMismatch", "UnknownOverlay", "MachineUnreachable"},
           {{"type", "object"}, {"required", {"kind", "machines", "mgmt", "data", "areas"}}}, true},
          [this](const Request& r, const Params&) {
              auto s = metal_.install_stack(tenant_of(r), body_or_empty(r).get<metal::StackPlan>());
              return Response{201, with_id(s, s.stack_id)};
          });
    R.add({"GET", "/metalcl/stacks", "List stacks", {}, nullptr}, [this](const Request& r, const Params&) {
        json out = json::array();
        for (const auto& s : metal_.stacks())
            if (is_operator(tenant_of(r)) || s.tenant_id == tenant_of(r))
                out.push_back(s);
        return Response{200, out};
    });
    R.add({"GET", "/metalcl/stacks/{id}", "Read a stack", {"NotFound"}, nullptr},
          [this](const Request&, const Params& p) { return Response{200, metal_.stack(p.at("id"))}; });

    // Simulation (test namespace) ---------------------------------------------

    R.add({"POST", "/sim/advance", "Advance virtual time", {"BadRequest"},
           {{"type", "object"}, {"required", {"dt"}}}},
          [this](const Request& r, const Params&) {
              auto dt = body_or_empty(r).at("dt").get<double>();
              if (dt < 0)
                  fail(Errc::BadRequest, "dt must be non-negative");
              return Response{200, advance(dt)};
          });
    R.add({"POST", "/sim/settle", "Run until no event is pending", {}, {{"type", "object"}}},
          [this](const Request& r, const Params&) {
              return Response{200, settle(body_or_empty(r).value("limit", 1e7))};
          });
    R.add({"GET", "/sim/clock", "Current virtual time and queue", {}, nullptr},
          [this](const Request&, const Params&) {
              return Response{200, {{"now", sim_.now()}, {"idle", sim_.idle()}, {"pending", sim_.pending().size()},
                                    {"log_hash", sim_.log_hash()}}};
          });
    R.add({"GET", "/sim/events", "Event log entries after a cursor", {}, nullptr},
          [this](const Request& r, const Params&) { return Response{200, events_page(sim_, r)}; });
    R.add({"POST", "/sim/faults", "Replace the fault profile", {"BadRequest"}, {{"type", "object"}}},
          [this](const Request& r, const Params&) {
              auto profile = body_or_empty(r).get<sim::FaultProfile>();
              sim_.inject(profile);
              return Response{200, profile};
          });
    R.add({"GET", "/sim/faults", "Current fault profile", {}, nullptr},
          [this](const Request&, const Params&) { return Response{200, sim_.faults()}; });
    R.add({"POST", "/sim/inventory", "Load a data-center inventory", {"MalformedInventory", "DanglingCable"},
           {{"type", "object"}}},
          [this](const Request& r, const Params&) {
              auto b = body_or_empty(r);
              json doc = b;
              if (b.contains("fixture"))
              {
                  auto f = sim::fixture(b.at("fixture").get<std::string>());
                  if (!f)
                      fail(Errc::BadRequest, "unknown fixture '" + b.at("fixture").get<std::string>() + "'");
                  doc = *f;
              }
              auto inv = sim::load_inventory(doc);
              fabric_.load(inv);
              return Response{200, {{"servers", inv.servers.size()},
                                    {"switches", inv.switches.size()},
                                    {"ports", inv.total_ports()},
                                    {"resources", inv.total_resources()}}};
          });
    R.add({"GET", "/sim/inventory", "Loaded inventory", {"TopologyMissing"}, nullptr},
          [this](const Request&, const Params&) {
              return Response{200, sim::inventory_to_json(fabric_.require_inventory())};
          });
}

} // namespace oss::gateway
