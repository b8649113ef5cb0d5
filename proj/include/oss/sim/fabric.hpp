#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "oss/core/types.hpp"
#include "simulator.hpp"

namespace oss::sim
{

struct NicSpec
{
    std::string name;
    std::string mac;
    std::string switch_id;
    int port = 0;
};

struct ServerSpec
{
    std::string hostname;
    std::int64_t cores = 0;
    std::int64_t ram_gb = 0;
    std::int64_t storage_gb = 0;
    std::vector<NicSpec> nics;

    ResourceBudget resources() const { return {cores, ram_gb, storage_gb}; }
};

struct SwitchSpec
{
    std::string id;
    int ports = 0;
};

struct PortRef
{
    std::string device;
    std::string port;

    auto operator<=>(const PortRef&) const = default;
};

/// An undirected link; normalized so that a <= b.
struct Cable
{
    PortRef a;
    PortRef b;

    auto operator<=>(const Cable&) const = default;
    static Cable normalized(PortRef x, PortRef y);
};

struct Inventory
{
    std::vector<ServerSpec> servers;
    std::vector<SwitchSpec> switches;
    /// Inter-switch links; server links come from each NIC's switch port.
    std::vector<Cable> cabling;
    std::vector<std::string> images;

    /// Ground truth: every physical link (server NICs and inter-switch).
    std::set<Cable> all_links() const;
    ResourceBudget total_resources() const;
    int total_ports() const;
    const ServerSpec* server(const std::string& hostname) const;
    const SwitchSpec* find_switch(const std::string& id) const;
};

/// Parses and validates an inventory document. MalformedInventory for shape
/// problems or a port used twice; DanglingCable when a link names an absent
/// switch or an out-of-range port.
Inventory load_inventory(const json& document);
json inventory_to_json(const Inventory& inventory);

struct Neighbor
{
    std::string peer_device;
    std::string peer_port;

    bool operator==(const Neighbor&) const = default;
};

struct PortConfig
{
    std::string mode = "access";  // access | trunk
    std::set<int> vlans;
};

/// Servers, switches and cabling of the simulated data center. Switches answer
/// LLDP queries from ground truth and hold per-port VLAN configuration.
class Fabric
{
public:
    explicit Fabric(Simulator& sim) : sim_(sim) {}

    void load(const Inventory& inventory);
    std::optional<Inventory> inventory() const;
    Inventory require_inventory() const;

    /// port -> neighbor, derived from ground-truth cabling. SwitchUnreachable
    /// when a fault marks the switch unreachable.
    std::map<std::string, Neighbor> read_lldp(const std::string& switch_id);

    /// Power command through the out-of-band controller. Returns false when a
    /// fault rejects it.
    bool power(const std::string& hostname, bool on);

    std::map<std::string, PortConfig> ports(const std::string& switch_id) const;
    void set_access(const std::string& switch_id, const std::string& port, int vlan);
    void add_trunk_vlan(const std::string& switch_id, const std::string& port, int vlan);
    void remove_vlan(const std::string& switch_id, const std::string& port, int vlan);

    Simulator& sim() { return sim_; }

private:
    Simulator& sim_;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PortRef, device, port)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Cable, a, b)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Neighbor, peer_device, peer_port)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(PortConfig, mode, vlans)

} // namespace oss::sim
