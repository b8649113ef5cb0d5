#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oss/core/store.hpp"
#include "oss/core/types.hpp"
#include "oss/sim/vim.hpp"

namespace oss::nfvcl
{

enum class NetworkMode
{
    layer2,
    layer3
};

struct Cidr
{
    std::uint32_t address = 0;
    int prefix = 0;

    std::uint32_t first() const;
    std::uint32_t last() const;
    bool overlaps(const Cidr& o) const { return first() <= o.last() && o.first() <= last(); }
};

/// Parses "a.b.c.d/len" with the host bits zero. BadRequest otherwise.
Cidr parse_cidr(const std::string& text);

struct Network
{
    std::string name;
    std::string cidr;
    NetworkMode mode = NetworkMode::layer2;
    /// Owning tenant; the operator tenant means shared.
    std::string owner;
    std::vector<std::string> realized_on;
};

struct VimRecord
{
    std::string vim_id;
    std::string owner;
    AreaSet areas;
    ResourceBudget capacity;
    std::string source;  // static | stack
};

struct ClusterRecord
{
    std::string cluster_id;
    std::string owner;
    AreaSet areas;
    ResourceBudget capacity;
    std::string kind;  // static | paas_vm | paas_baremetal
    std::optional<std::string> vim_id;
};

/// Owner visibility rule shared by networks, VIMs and clusters: operator
/// resources are visible to everyone, the operator sees everything.
bool visible_to(const std::string& owner, const std::string& tenant);

/// Named networks usable as blueprint endpoints plus registered VIMs and
/// clusters. Networks are realized on every VIM that can see them.
class Topology
{
public:
    Topology(DocumentStore& store, sim::Vim& vim) : store_(store), vim_(vim) {}

    Network create_network(const std::string& tenant, const std::string& name, const std::string& cidr,
                           NetworkMode mode);
    void delete_network(const std::string& tenant, const std::string& name);
    std::optional<Network> network(const std::string& name) const;
    std::vector<Network> networks() const;
    bool network_visible(const std::string& name, const std::string& tenant) const;

    /// Registers (or re-registers) a VIM and realizes every visible network.
    VimRecord register_vim(VimRecord record);
    ClusterRecord register_cluster(ClusterRecord record);
    std::vector<VimRecord> vims() const;
    std::vector<ClusterRecord> clusters() const;

    /// Lowest-id VIM (resp. cluster) serving `area` and visible to `tenant`.
    std::optional<VimRecord> vim_for(AreaId area, const std::string& tenant) const;
    std::optional<ClusterRecord> cluster_for(AreaId area, const std::string& tenant) const;

    json to_json() const;

private:
    DocumentStore& store_;
    sim::Vim& vim_;
};

NLOHMANN_JSON_SERIALIZE_ENUM(NetworkMode, {{NetworkMode::layer2, "layer2"}, {NetworkMode::layer3, "layer3"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Network, name, cidr, mode, owner, realized_on)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VimRecord, vim_id, owner, areas, capacity, source)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(ClusterRecord, cluster_id, owner, areas, capacity, kind, vim_id)

} // namespace oss::nfvcl
