#include "oss/nfvcl/catalog.hpp"

#include <algorithm>
#include <cctype>

#include "oss/nfvcl/schema.hpp"

namespace oss::nfvcl
{

namespace
{

json endpoints_schema()
{
    return {{"type", "object"},
            {"required", {"mgt", "data_nets"}},
            {"additionalProperties", false},
            {"properties",
             {{"mgt", {{"type", "string"}, {"minLength", 1}}},
              {"data_nets",
               {{"type", "array"},
                {"minItems", 1},
                {"items",
                 {{"type", "object"},
                  {"required", {"mode", "net_name"}},
                  {"additionalProperties", false},
                  {"properties",
                   {{"mode", {{"type", "string"}, {"enum", {"layer2", "layer3"}}}},
                    {"net_name", {{"type", "string"}, {"minLength", 1}}}}}}}}}}}};
}

json body_schema(const std::string& tag, json config_props, json config_required, json area_props)
{
    config_props["network_endpoints"] = endpoints_schema();
    area_props["id"] = {{"type", "integer"}, {"minimum", 0}};
    area_props["core"] = {{"type", "boolean"}};
    return {{"type", "object"},
            {"required", {"type", "config", "areas"}},
            {"additionalProperties", false},
            {"properties",
             {{"type", {{"type", "string"}, {"enum", {tag}}}},
              {"config",
               {{"type", "object"},
                {"required", config_required},
                {"additionalProperties", false},
                {"properties", config_props}}},
              {"areas",
               {{"type", "array"},
                {"minItems", 1},
                {"items",
                 {{"type", "object"},
                  {"required", {"id"}},
                  {"additionalProperties", false},
                  {"properties", area_props}}}}}}}};
}

json params(json props, json required)
{
    return {{"type", "object"}, {"required", required}, {"additionalProperties", false}, {"properties", props}};
}

const json kInt = {{"type", "integer"}};
const json kArea = {{"type", "integer"}, {"minimum", 0}};
const json kString = {{"type", "string"}, {"minLength", 1}};

std::vector<BlueprintType> make_catalog()
{
    std::vector<BlueprintType> out;

    out.push_back({"K8s",
                   Family::k8s,
                   true,
                   "Kubernetes cluster on virtual machines: controller in the core area, workers per area",
                   body_schema("K8s", {{"version", kString}}, {"version", "network_endpoints"},
                               {{"workers_replica", {{"type", "integer"}, {"minimum", 0}}}}),
                   {{"add_worker",
                     params({{"area", kArea}, {"count", {{"type", "integer"}, {"minimum", 1}}}}, {"area"}),
                     true},
                    {"install_plugin",
                     params({{"name",
                              {{"type", "string"}, {"enum", {"calico", "flannel", "metallb", "multus", "openebs"}}}}},
                            {"name"}),
                     false}},
                   true});

    auto fivegc = [&](const std::string& tag, const std::string& what) {
        out.push_back(
            {tag,
             Family::fivegc,
             true,
             what + " 5G core: control plane and UPF in the core area, a UPF in every other area; "
                    "VM-based (vnf) or container-based (knf) flavor",
             body_schema(tag,
                         {{"flavor", {{"type", "string"}, {"enum", {"knf", "vnf"}}}},
                          {"version", kString},
                          {"plmn", {{"type", "string"}, {"minLength", 5}}},
                          {"subscribers", {{"type", "array"}, {"items", kString}}}},
                         {"network_endpoints"},
                         {{"tac", {{"type", "integer"}, {"minimum", 1}, {"maximum", 16777215}}}}),
             {{"add_subscriber",
               params({{"imsi", {{"type", "string"}, {"minLength", 15}}},
                       {"key", kString},
                       {"opc", kString},
                       {"dnn", kString}},
                      {"imsi"}),
               false},
              {"add_slice",
               params({{"sst", {{"type", "integer"}, {"minimum", 1}, {"maximum", 255}}}, {"sd", kString}}, {"sst"}),
               true},
              {"add_tac",
               params({{"area", kArea}, {"tac", {{"type", "integer"}, {"minimum", 1}, {"maximum", 16777215}}}},
                      {"area", "tac"}),
               true}},
             true});
    };
    fivegc("Free5GC", "Free5GC");
    fivegc("Open5GS", "Open5GS");

    out.push_back({"VyOS",
                   Family::vyos,
                   true,
                   "VyOS router in every listed area",
                   body_schema("VyOS", {{"version", kString}}, {"network_endpoints"}, json::object()),
                   {{"add_route", params({{"area", kArea}, {"prefix", kString}, {"next_hop", kString}},
                                         {"area", "next_hop", "prefix"}),
                     false}},
                   true});

    out.push_back({"UERANSIM",
                   Family::ueransim,
                   true,
                   "UERANSIM gNodeB and UE simulator attached as a physical endpoint per area",
                   body_schema("UERANSIM", {{"core_ref", kString}}, {"network_endpoints"},
                               {{"ues", {{"type", "integer"}, {"minimum", 0}}}}),
                   {{"attach_ue", params({{"area", kArea}, {"imsi", {{"type", "string"}, {"minLength", 15}}}},
                                         {"area", "imsi"}),
                     false}},
                   false});

    for (const auto& [tag, what] : std::vector<std::pair<std::string, std::string>>{
             {"AmariCallbox", "EPC, 5GC, IMS, eNodeB and gNodeB appliance"},
             {"AmariSimbox", "UE emulator appliance"},
             {"DaaS", "desktop as a service over HTTPS"},
             {"ELK", "log analytics stack"},
             {"Lwm2m", "device management for sensor networks"},
             {"NextEPC", "4G/5G core network"},
             {"OpenAirInterface", "3GPP RAN and core stack"},
             {"OpenVSwitch", "multilayer software switch"},
             {"OpenWrt", "embedded routing OS"},
             {"PacketDelaySimulator", "WAN latency emulator"},
             {"Prometheus", "metrics collection and alerting"},
             {"S1Bypass", "S-Gateway bypass towards edge data centers"},
             {"TRex", "traffic generator as a service"}})
        out.push_back({tag, Family::metadata, false, what, json::object(), {}, false});
    return out;
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> connection_points(const json& body)
{
    std::vector<std::string> cps{"mgt"};
    const auto& nets = body.at("config").at("network_endpoints").at("data_nets");
    for (std::size_t i = 0; i < nets.size(); ++i)
        cps.push_back("data-" + std::to_string(i));
    return cps;
}

std::vector<VirtualLink> virtual_links(const json& body)
{
    const auto& ep = body.at("config").at("network_endpoints");
    std::vector<VirtualLink> links{{"mgt", ep.at("mgt").get<std::string>()}};
    const auto& nets = ep.at("data_nets");
    for (std::size_t i = 0; i < nets.size(); ++i)
        links.push_back({"data-" + std::to_string(i), nets[i].at("net_name").get<std::string>()});
    return links;
}

NsTemplate make_template(AreaId area, const std::string& role, const std::string& name, const json& body,
                         std::vector<VnfDescriptor> vnfds, std::vector<VduProfile> flavour)
{
    NsTemplate t;
    t.area = area;
    t.role = role;
    t.package.nsd.name = name;
    t.package.nsd.area_id = area;
    t.package.nsd.virtual_links = virtual_links(body);
    for (auto& v : vnfds)
    {
        v.connection_points = connection_points(body);
        t.package.nsd.vnfd_refs.push_back(v.vnfd_id);
    }
    t.package.vnfds = std::move(vnfds);
    t.package.nsd.deployment_flavour = std::move(flavour);
    return t;
}

std::vector<NsTemplate> expand_k8s(const json& body, AreaId core, const std::vector<AreaSpec>& areas)
{
    auto version = body.at("config").at("version").get<std::string>();
    auto image = "k8s-node-" + version;
    Vdu controller{"controller", 4, 8, 50, image};
    Vdu worker{"worker", 8, 16, 100, image};
    std::vector<NsTemplate> out;
    for (const auto& a : areas)
    {
        int workers = value_or(a.entry, "workers_replica", 1);
        if (a.id == core)
        {
            VnfDescriptor node{"k8s-core", NfKind::VNF, {controller, worker}, {}, {}, json::object(), {}, {}};
            out.push_back(make_template(a.id, "core", "k8s-core", body, {node},
                                        {{"k8s-core", "controller", 1}, {"k8s-core", "worker", workers}}));
        }
        else
        {
            VnfDescriptor node{"k8s-edge", NfKind::VNF, {worker}, {}, {}, json::object(), {}, {}};
            out.push_back(make_template(a.id, "edge", "k8s-edge", body, {node}, {{"k8s-edge", "worker", workers}}));
        }
    }
    return out;
}

VnfDescriptor fivegc_nf(const std::string& tag, const std::string& id, const std::string& vdu, bool knf,
                        ResourceBudget size, const json& config)
{
    VnfDescriptor v;
    v.vnfd_id = id;
    if (knf)
    {
        v.kind = NfKind::KNF;
        v.chart_ref = lower(tag) + "/" + vdu;
        v.default_values = {{"plmn", value_or<std::string>(config, "plmn", "00101")}};
        v.kdu_resources = size;
    }
    else
    {
        v.kind = NfKind::VNF;
        v.vdus.push_back(
            {vdu, size.vcpus, size.ram_gb, size.storage_gb, lower(tag) + "-" + value_or<std::string>(config, "version", "latest")});
    }
    return v;
}

std::vector<NsTemplate> expand_5gc(const std::string& tag, const json& body, AreaId core,
                                   const std::vector<AreaSpec>& areas)
{
    const auto& config = body.at("config");
    bool knf = value_or<std::string>(config, "flavor", "vnf") == "knf";
    ResourceBudget cp_size{4, 8, 40};
    ResourceBudget upf_size{2, 4, 20};
    std::vector<NsTemplate> out;
    for (const auto& a : areas)
    {
        auto upf = fivegc_nf(tag, "5gc-upf", "upf", knf, upf_size, config);
        std::vector<VduProfile> flavour;
        if (!knf)
            flavour.push_back({"5gc-upf", "upf", 1});
        if (a.id == core)
        {
            auto cp = fivegc_nf(tag, "5gc-core", "control-plane", knf, cp_size, config);
            if (!knf)
                flavour.insert(flavour.begin(), VduProfile{"5gc-core", "control-plane", 1});
            out.push_back(make_template(a.id, "core", "5gc-core", body, {cp, upf}, flavour));
        }
        else
        {
            out.push_back(make_template(a.id, "edge", "5gc-edge", body, {upf}, flavour));
        }
    }
    return out;
}

std::vector<NsTemplate> expand_vyos(const json& body, AreaId core, const std::vector<AreaSpec>& areas)
{
    auto image = "vyos-" + value_or<std::string>(body.at("config"), "version", "1.4");
    std::vector<NsTemplate> out;
    for (const auto& a : areas)
    {
        VnfDescriptor router{"vyos-router", NfKind::VNF, {{"router", 2, 2, 10, image}}, {}, {}, json::object(), {},
                             {}};
        auto role = a.id == core ? "core" : "edge";
        out.push_back(make_template(a.id, role, std::string("vyos-") + role, body, {router},
                                    {{"vyos-router", "router", 1}}));
    }
    return out;
}

std::vector<NsTemplate> expand_ueransim(const json& body, std::optional<AreaId> core,
                                        const std::vector<AreaSpec>& areas)
{
    std::vector<NsTemplate> out;
    for (const auto& a : areas)
    {
        VnfDescriptor gnb;
        gnb.vnfd_id = "ueransim-gnb";
        gnb.kind = NfKind::PNF;
        gnb.device_ref = "ueransim-area-" + std::to_string(a.id);
        auto role = core && a.id == *core ? "core" : "edge";
        out.push_back(make_template(a.id, role, "ueransim-ran", body, {gnb}, {}));
    }
    return out;
}

std::vector<AreaSpec> ordered(std::vector<AreaSpec> areas, std::optional<AreaId> core)
{
    std::sort(areas.begin(), areas.end(), [&](const AreaSpec& a, const AreaSpec& b) {
        bool ac = core && a.id == *core;
        bool bc = core && b.id == *core;
        if (ac != bc)
            return ac;
        return a.id < b.id;
    });
    return areas;
}

json area_entry(const json& body, AreaId area)
{
    for (const auto& a : body.at("areas"))
        if (a.at("id").get<AreaId>() == area)
            return a;
    fail(Errc::BadRequest, "instance does not cover area " + std::to_string(area));
}

const NsTemplate& template_for(const std::vector<NsTemplate>& ts, AreaId area)
{
    for (const auto& t : ts)
        if (t.area == area)
            return t;
    fail(Errc::BadRequest, "instance does not cover area " + std::to_string(area));
}

bool all_digits(const std::string& s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

} // namespace

const Day2Action* BlueprintType::action(const std::string& name) const
{
    for (const auto& a : day2_actions)
        if (a.name == name)
            return &a;
    return nullptr;
}

const std::vector<BlueprintType>& catalog()
{
    static const std::vector<BlueprintType> instance = make_catalog();
    return instance;
}

const BlueprintType* find_type(const std::string& tag)
{
    for (const auto& t : catalog())
        if (t.tag == tag)
            return &t;
    return nullptr;
}

const BlueprintType& require_type(const std::string& tag)
{
    const auto* t = find_type(tag);
    if (!t)
        fail(Errc::UnknownBlueprintType, "no blueprint type '" + tag + "'");
    if (!t->executable)
        fail(Errc::UnknownBlueprintType, "'" + tag + "' is listed in the catalog but cannot be instantiated");
    return *t;
}

std::set<std::string> executable_tags()
{
    std::set<std::string> out;
    for (const auto& t : catalog())
        if (t.executable)
            out.insert(t.tag);
    return out;
}

json catalog_to_json()
{
    json out = json::array();
    for (const auto& t : catalog())
    {
        json actions = json::object();
        for (const auto& a : t.day2_actions)
            actions[a.name] = {{"params", a.params_schema}, {"critical", a.critical}};
        out.push_back({{"tag", t.tag},
                       {"family", t.family},
                       {"executable", t.executable},
                       {"description", t.description},
                       {"requires_core", t.requires_core},
                       {"config_schema", t.config_schema},
                       {"day2_actions", actions}});
    }
    return out;
}

std::vector<AreaSpec> body_areas(const json& body)
{
    std::vector<AreaSpec> out;
    std::set<AreaId> seen;
    for (const auto& a : body.at("areas"))
    {
        AreaSpec spec{a.at("id").get<AreaId>(), value_or(a, "core", false), a};
        if (!seen.insert(spec.id).second)
            fail(Errc::SchemaViolation, "area " + std::to_string(spec.id) + " listed twice");
        out.push_back(std::move(spec));
    }
    return out;
}

AreaSet areas_of(const json& body)
{
    AreaSet out;
    for (const auto& a : body.at("areas"))
        out.insert(a.at("id").get<AreaId>());
    return out;
}

std::optional<AreaId> core_area(const BlueprintType& type, const json& body)
{
    std::vector<AreaId> cores;
    for (const auto& a : body_areas(body))
        if (a.core)
            cores.push_back(a.id);
    if (cores.size() > 1)
        fail(Errc::MultipleCoreAreas, "exactly one area may be flagged core", {{"core_areas", cores}});
    if (cores.empty())
    {
        if (type.requires_core)
            fail(Errc::NoCoreArea, type.tag + " needs one area flagged core");
        return std::nullopt;
    }
    return cores.front();
}

std::set<std::string> endpoint_networks(const json& body)
{
    std::set<std::string> out;
    for (const auto& link : virtual_links(body))
        out.insert(link.network);
    return out;
}

void validate_body(const BlueprintType& type, const json& body)
{
    require_schema(type.config_schema, body, type.tag + " request");
    body_areas(body);
    core_area(type, body);
}

std::string NsTemplate::signature() const
{
    auto nsd = package.nsd;
    nsd.nsd_id.clear();
    for (auto& p : nsd.deployment_flavour)
        p.instances = 0;
    return content_hash({{"role", role}, {"nsd", nsd}, {"vnfds", package.vnfds}});
}

std::vector<NsTemplate> expand_blueprint(const BlueprintType& type, const json& body)
{
    validate_body(type, body);
    auto core = core_area(type, body);
    auto areas = ordered(body_areas(body), core);
    switch (type.family)
    {
    case Family::k8s: return expand_k8s(body, *core, areas);
    case Family::fivegc: return expand_5gc(type.tag, body, *core, areas);
    case Family::vyos: return expand_vyos(body, *core, areas);
    case Family::ueransim: return expand_ueransim(body, core, areas);
    case Family::metadata: break;
    }
    fail(Errc::UnknownBlueprintType, type.tag + " has no expansion");
}

ResourceBudget declared_compute(const std::vector<NsTemplate>& templates)
{
    ResourceBudget total;
    for (const auto& t : templates)
        total += t.package.declared_compute();
    return total;
}

Package build_package(const NsTemplate& t, const std::string& nsd_id)
{
    Package pkg = t.package;
    pkg.nsd.nsd_id = nsd_id;
    validate_package(pkg, [](const std::string&) { return true; });
    return pkg;
}

json default_body(const std::string& tag, const AreaSet& areas, AreaId core, const json& network_endpoints)
{
    const auto& type = require_type(tag);
    json config = {{"network_endpoints", network_endpoints}};
    if (type.family == Family::k8s)
        config["version"] = "1.24";
    if (type.family == Family::fivegc)
        config["flavor"] = "vnf";
    json body = {{"type", tag}, {"config", config}, {"areas", json::array()}};
    body = grow_body(body, areas);
    for (auto& a : body["areas"])
        if (a["id"].get<AreaId>() == core && type.requires_core)
            a["core"] = true;
    return body;
}

json grow_body(const json& body, const AreaSet& areas)
{
    json out = body;
    if (!out.contains("areas"))
        out["areas"] = json::array();
    AreaSet have;
    for (const auto& a : out["areas"])
        have.insert(a.at("id").get<AreaId>());
    const auto* type = find_type(body.at("type").get<std::string>());
    for (auto id : areas)
    {
        if (have.count(id))
            continue;
        json entry = {{"id", id}};
        if (type && type->family == Family::k8s)
            entry["workers_replica"] = 1;
        out["areas"].push_back(entry);
    }
    std::sort(out["areas"].begin(), out["areas"].end(),
              [](const json& a, const json& b) { return a["id"].get<AreaId>() < b["id"].get<AreaId>(); });
    return out;
}

std::vector<BundleSpec> day1_bundles(const BlueprintType& type, const json& body, const NsTemplate& t)
{
    const auto& config = body.at("config");
    auto entry = area_entry(body, t.area);
    std::vector<BundleSpec> out;
    for (const auto& vnfd : t.package.vnfds)
    {
        BundleSpec b{t.area, vnfd.vnfd_id, "day1", {}, {{"area", t.area}, {"role", t.role}}};
        switch (type.family)
        {
        case Family::k8s:
            b.playbooks = t.role == "core" ? std::vector<std::string>{"k8s-init-controller", "k8s-join-workers"}
                                           : std::vector<std::string>{"k8s-join-workers"};
            b.vars["version"] = config.at("version");
            b.vars["workers"] = value_or(entry, "workers_replica", 1);
            break;
        case Family::fivegc:
            b.playbooks = {vnfd.vnfd_id == "5gc-core" ? "5gc-core-config" : "5gc-upf-config"};
            b.vars["plmn"] = value_or<std::string>(config, "plmn", "00101");
            if (entry.contains("tac"))
                b.vars["tac"] = entry["tac"];
            if (vnfd.vnfd_id == "5gc-core")
                b.vars["subscribers"] = config.value("subscribers", json::array());
            break;
        case Family::vyos:
            b.playbooks = {"vyos-base-config"};
            break;
        case Family::ueransim:
            b.playbooks = {"ueransim-gnb-config"};
            b.vars["ues"] = value_or(entry, "ues", 1);
            if (config.contains("core_ref"))
                b.vars["core_ref"] = config["core_ref"];
            break;
        case Family::metadata: break;
        }
        b.vars["mgt"] = config.at("network_endpoints").at("mgt");
        out.push_back(std::move(b));
    }
    return out;
}

json initial_runtime(const BlueprintType& type, const json& body)
{
    json rt = json::object();
    switch (type.family)
    {
    case Family::k8s: rt["plugins"] = json::array(); break;
    case Family::fivegc:
        rt["subscribers"] = body.at("config").value("subscribers", json::array());
        rt["slices"] = json::array();
        rt["tacs"] = json::object();
        for (const auto& a : body_areas(body))
            if (a.entry.contains("tac"))
                rt["tacs"][std::to_string(a.id)] = json::array({a.entry["tac"]});
        break;
    case Family::vyos: rt["routes"] = json::array(); break;
    case Family::ueransim:
        rt["ues"] = json::object();
        for (const auto& a : body_areas(body))
            rt["ues"][std::to_string(a.id)] = value_or(a.entry, "ues", 1);
        break;
    case Family::metadata: break;
    }
    return rt;
}

Day2Plan plan_day2(const BlueprintType& type, const json& body, const json& runtime, const std::string& action,
                   const json& params)
{
    const auto* spec = type.action(action);
    if (!spec)
        fail(Errc::UnknownAction, type.tag + " has no Day-2 action '" + action + "'");
    require_schema(spec->params_schema, params, action + " parameters");

    auto templates = expand_blueprint(type, body);
    const NsTemplate* core = nullptr;
    for (const auto& t : templates)
        if (t.role == "core")
            core = &t;

    Day2Plan plan;
    if (action == "add_worker")
    {
        auto area = params.at("area").get<AreaId>();
        const auto& t = template_for(templates, area);
        int count = value_or(params, "count", 1);
        auto vnfd = t.package.vnfds.front().vnfd_id;
        plan.scale = ScaleSpec{area, vnfd, "worker", count};
        plan.bundles.push_back({area, vnfd, action, {"k8s-join-workers"}, {{"area", area}, {"added", count}}});
    }
    else if (action == "install_plugin")
    {
        auto name = params.at("name").get<std::string>();
        const auto& plugins = runtime.at("plugins");
        if (std::find(plugins.begin(), plugins.end(), name) != plugins.end())
            fail(Errc::InvalidState, "plugin '" + name + "' already installed");
        plan.bundles.push_back({core->area, "k8s-core", action, {"k8s-install-plugin"}, {{"plugin", name}}});
    }
    else if (action == "add_subscriber")
    {
        auto imsi = params.at("imsi").get<std::string>();
        if (imsi.size() != 15 || !all_digits(imsi))
            fail(Errc::SchemaViolation, "imsi must be 15 digits");
        const auto& subs = runtime.at("subscribers");
        if (std::find(subs.begin(), subs.end(), imsi) != subs.end())
            fail(Errc::InvalidState, "subscriber " + imsi + " already provisioned");
        json vars = params;
        plan.bundles.push_back({core->area, "5gc-core", action, {"5gc-add-subscriber"}, vars});
    }
    else if (action == "add_slice")
    {
        plan.bundles.push_back({core->area, "5gc-core", action, {"5gc-add-slice"}, params});
        for (const auto& t : templates)
            plan.bundles.push_back({t.area, "5gc-upf", action, {"5gc-upf-add-slice"}, params});
    }
    else if (action == "add_tac")
    {
        auto area = params.at("area").get<AreaId>();
        template_for(templates, area);
        plan.bundles.push_back({core->area, "5gc-core", action, {"5gc-add-tac"}, params});
        plan.bundles.push_back({area, "5gc-upf", action, {"5gc-upf-add-tac"}, params});
    }
    else if (action == "add_route")
    {
        auto area = params.at("area").get<AreaId>();
        template_for(templates, area);
        plan.bundles.push_back({area, "vyos-router", action, {"vyos-add-route"}, params});
    }
    else if (action == "attach_ue")
    {
        auto area = params.at("area").get<AreaId>();
        template_for(templates, area);
        auto imsi = params.at("imsi").get<std::string>();
        if (imsi.size() != 15 || !all_digits(imsi))
            fail(Errc::SchemaViolation, "imsi must be 15 digits");
        plan.bundles.push_back({area, "ueransim-gnb", action, {"ueransim-attach-ue"}, params});
    }
    return plan;
}

json apply_day2(const std::string& action, const json& params, json& runtime, json& body)
{
    if (action == "add_worker")
    {
        auto area = params.at("area").get<AreaId>();
        int count = value_or(params, "count", 1);
        int workers = 0;
        for (auto& a : body["areas"])
            if (a["id"].get<AreaId>() == area)
            {
                workers = value_or(a, "workers_replica", 1) + count;
                a["workers_replica"] = workers;
            }
        return {{"area", area}, {"workers", workers}};
    }
    if (action == "install_plugin")
    {
        runtime["plugins"].push_back(params.at("name"));
        return {{"plugins", runtime["plugins"]}};
    }
    if (action == "add_subscriber")
    {
        runtime["subscribers"].push_back(params.at("imsi"));
        return {{"imsi", params.at("imsi")}, {"subscribers", runtime["subscribers"].size()}};
    }
    if (action == "add_slice")
    {
        runtime["slices"].push_back(params);
        return {{"slices", runtime["slices"].size()}};
    }
    if (action == "add_tac")
    {
        auto key = std::to_string(params.at("area").get<AreaId>());
        runtime["tacs"][key].push_back(params.at("tac"));
        return {{"area", params.at("area")}, {"tacs", runtime["tacs"][key]}};
    }
    if (action == "add_route")
    {
        runtime["routes"].push_back(params);
        return {{"routes", runtime["routes"].size()}};
    }
    if (action == "attach_ue")
    {
        auto key = std::to_string(params.at("area").get<AreaId>());
        runtime["ues"][key] = runtime["ues"].value(key, 0) + 1;
        return {{"area", params.at("area")}, {"ues", runtime["ues"][key]}};
    }
    return json::object();
}

} // namespace oss::nfvcl
