#include "oss/sim/fabric.hpp"

#include <algorithm>

namespace oss::sim
{

namespace
{
constexpr const char* kFabric = "fabric";
constexpr const char* kPorts = "switch_ports";

struct SwitchPorts
{
    std::map<std::string, PortConfig> ports;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SwitchPorts, ports)

PortRef switch_port(const std::string& sw, int port) { return {sw, std::to_string(port)}; }

} // namespace

Cable Cable::normalized(PortRef x, PortRef y)
{
    if (y < x)
        std::swap(x, y);
    return {std::move(x), std::move(y)};
}

std::set<Cable> Inventory::all_links() const
{
    std::set<Cable> out(cabling.begin(), cabling.end());
    for (const auto& s : servers)
        for (const auto& nic : s.nics)
            out.insert(Cable::normalized({s.hostname, nic.name}, switch_port(nic.switch_id, nic.port)));
    return out;
}

ResourceBudget Inventory::total_resources() const
{
    ResourceBudget total;
    for (const auto& s : servers)
        total += s.resources();
    return total;
}

int Inventory::total_ports() const
{
    int total = 0;
    for (const auto& s : switches)
        total += s.ports;
    return total;
}

const ServerSpec* Inventory::server(const std::string& hostname) const
{
    for (const auto& s : servers)
        if (s.hostname == hostname)
            return &s;
    return nullptr;
}

const SwitchSpec* Inventory::find_switch(const std::string& id) const
{
    for (const auto& s : switches)
        if (s.id == id)
            return &s;
    return nullptr;
}

Inventory load_inventory(const json& document)
{
    Inventory inv;
    try
    {
        for (const auto& sw : document.at("switches"))
            inv.switches.push_back({sw.at("id").get<std::string>(), sw.at("ports").get<int>()});
        for (const auto& s : document.at("servers"))
        {
            ServerSpec spec{s.at("hostname").get<std::string>(), s.at("cores").get<std::int64_t>(),
                            s.at("ram_gb").get<std::int64_t>(), s.at("storage_gb").get<std::int64_t>(), {}};
            for (const auto& nic : s.value("nics", json::array()))
                spec.nics.push_back({nic.at("name").get<std::string>(), nic.value("mac", ""),
                                     nic.at("switch").get<std::string>(), nic.at("port").get<int>()});
            inv.servers.push_back(std::move(spec));
        }
        for (const auto& c : document.value("cabling", json::array()))
        {
            inv.cabling.push_back(Cable::normalized(
                switch_port(c.at("a").at("switch").get<std::string>(), c.at("a").at("port").get<int>()),
                switch_port(c.at("b").at("switch").get<std::string>(), c.at("b").at("port").get<int>())));
        }
        inv.images = document.value("images", std::vector<std::string>{});
    }
    catch (const json::exception& e)
    {
        fail(Errc::MalformedInventory, e.what());
    }

    std::set<std::string> names;
    for (const auto& sw : inv.switches)
    {
        if (sw.id.empty() || sw.ports <= 0)
            fail(Errc::MalformedInventory, "switch needs an id and a positive port count");
        if (!names.insert(sw.id).second)
            fail(Errc::MalformedInventory, "duplicate device '" + sw.id + "'");
    }
    for (const auto& s : inv.servers)
    {
        if (s.hostname.empty() || s.cores < 0 || s.ram_gb < 0 || s.storage_gb < 0)
            fail(Errc::MalformedInventory, "server needs a hostname and non-negative resources");
        if (!names.insert(s.hostname).second)
            fail(Errc::MalformedInventory, "duplicate device '" + s.hostname + "'");
    }

    std::set<PortRef> used;
    auto claim = [&](const PortRef& p) {
        if (!used.insert(p).second)
            fail(Errc::MalformedInventory, "port " + p.device + ":" + p.port + " is cabled twice");
    };
    auto check_switch_port = [&](const std::string& sw, int port) {
        const auto* spec = inv.find_switch(sw);
        if (!spec)
            fail(Errc::DanglingCable, "link references absent switch '" + sw + "'");
        if (port < 1 || port > spec->ports)
            fail(Errc::DanglingCable, "link references port " + std::to_string(port) + " outside " + sw);
    };
    for (const auto& s : inv.servers)
    {
        std::set<std::string> nic_names;
        for (const auto& nic : s.nics)
        {
            if (!nic_names.insert(nic.name).second)
                fail(Errc::MalformedInventory, s.hostname + " has duplicate NIC " + nic.name);
            check_switch_port(nic.switch_id, nic.port);
            claim(switch_port(nic.switch_id, nic.port));
        }
    }
    for (const auto& c : inv.cabling)
    {
        for (const auto* end : {&c.a, &c.b})
        {
            check_switch_port(end->device, std::stoi(end->port));
            claim(*end);
        }
    }
    return inv;
}

json inventory_to_json(const Inventory& inv)
{
    json doc = {{"servers", json::array()}, {"switches", json::array()}, {"cabling", json::array()},
                {"images", inv.images}};
    for (const auto& sw : inv.switches)
        doc["switches"].push_back({{"id", sw.id}, {"ports", sw.ports}});
    for (const auto& s : inv.servers)
    {
        json nics = json::array();
        for (const auto& nic : s.nics)
            nics.push_back({{"name", nic.name}, {"mac", nic.mac}, {"switch", nic.switch_id}, {"port", nic.port}});
        doc["servers"].push_back({{"hostname", s.hostname},
                                  {"cores", s.cores},
                                  {"ram_gb", s.ram_gb},
                                  {"storage_gb", s.storage_gb},
                                  {"nics", nics}});
    }
    for (const auto& c : inv.cabling)
        doc["cabling"].push_back({{"a", {{"switch", c.a.device}, {"port", std::stoi(c.a.port)}}},
                                  {"b", {{"switch", c.b.device}, {"port", std::stoi(c.b.port)}}}});
    return doc;
}

// ---------------------------------------------------------------------------

void Fabric::load(const Inventory& inventory)
{
    auto& store = sim_.store();
    auto doc = store.get(kFabric, "inventory");
    store.commit(kFabric, "inventory", inventory_to_json(inventory), doc ? doc->revision : 0);
    sim_.log("sim", "fabric", "inventory.loaded",
             {{"servers", inventory.servers.size()}, {"switches", inventory.switches.size()}});
}

std::optional<Inventory> Fabric::inventory() const
{
    auto doc = sim_.store().get(kFabric, "inventory");
    if (!doc)
        return std::nullopt;
    return load_inventory(doc->body);
}

Inventory Fabric::require_inventory() const
{
    auto inv = inventory();
    if (!inv)
        fail(Errc::NotFound, "no inventory loaded");
    return *inv;
}

std::map<std::string, Neighbor> Fabric::read_lldp(const std::string& switch_id)
{
    auto inv = require_inventory();
    if (!inv.find_switch(switch_id))
        fail(Errc::NotFound, "unknown switch '" + switch_id + "'");
    if (sim_.check("switch.lldp", {switch_id}).failed())
        fail(Errc::SwitchUnreachable, "switch '" + switch_id + "' does not answer LLDP");

    std::map<std::string, Neighbor> table;
    for (const auto& link : inv.all_links())
    {
        if (link.a.device == switch_id)
            table[link.a.port] = {link.b.device, link.b.port};
        if (link.b.device == switch_id)
            table[link.b.port] = {link.a.device, link.a.port};
    }
    return table;
}

bool Fabric::power(const std::string& hostname, bool on)
{
    auto decision = sim_.check("machine.power", {hostname});
    bool ok = !decision.failed();
    sim_.log("sim", hostname, ok ? (on ? "power.on" : "power.off") : "power.fault", json::object());
    return ok;
}

std::map<std::string, PortConfig> Fabric::ports(const std::string& switch_id) const
{
    if (auto doc = oss::load<SwitchPorts>(sim_.store(), kPorts, switch_id))
        return doc->ports;
    return {};
}

namespace
{

void mutate_ports(Simulator& sim, const std::string& switch_id, const std::function<void(SwitchPorts&)>& fn)
{
    auto& store = sim.store();
    if (!store.get(kPorts, switch_id))
    {
        try
        {
            insert(store, kPorts, switch_id, SwitchPorts{});
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::RevisionConflict)
                throw;
        }
    }
    update<SwitchPorts>(store, kPorts, switch_id, fn);
}

} // namespace

void Fabric::set_access(const std::string& switch_id, const std::string& port, int vlan)
{
    mutate_ports(sim_, switch_id, [&](SwitchPorts& p) { p.ports[port] = PortConfig{"access", {vlan}}; });
    sim_.log("sim", switch_id + ":" + port, "port.access", {{"vlan", vlan}});
}

void Fabric::add_trunk_vlan(const std::string& switch_id, const std::string& port, int vlan)
{
    mutate_ports(sim_, switch_id, [&](SwitchPorts& p) {
        auto& cfg = p.ports[port];
        cfg.mode = "trunk";
        cfg.vlans.insert(vlan);
    });
    sim_.log("sim", switch_id + ":" + port, "port.trunk.add", {{"vlan", vlan}});
}

void Fabric::remove_vlan(const std::string& switch_id, const std::string& port, int vlan)
{
    mutate_ports(sim_, switch_id, [&](SwitchPorts& p) {
        auto it = p.ports.find(port);
        if (it == p.ports.end())
            return;
        it->second.vlans.erase(vlan);
        if (it->second.vlans.empty())
            p.ports.erase(it);
    });
    sim_.log("sim", switch_id + ":" + port, "port.vlan.remove", {{"vlan", vlan}});
}

} // namespace oss::sim
