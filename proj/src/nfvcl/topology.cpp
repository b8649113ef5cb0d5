#include "oss/nfvcl/topology.hpp"

#include <algorithm>
#include <cstdio>

#include "oss/core/tenancy.hpp"

namespace oss::nfvcl
{

namespace
{
constexpr const char* kNetworks = "networks";
constexpr const char* kVims = "vims";
constexpr const char* kClusters = "clusters";

template <typename T, typename Id>
std::optional<T> lowest_serving(std::vector<T> records, AreaId area, const std::string& tenant, Id id_of)
{
    std::optional<T> best;
    for (auto& r : records)
    {
        if (!r.areas.count(area) || !visible_to(r.owner, tenant))
            continue;
        if (!best || natural_less(id_of(r), id_of(*best)))
            best = r;
    }
    return best;
}

bool realizable(const std::string& net_owner, const std::string& vim_owner)
{
    return net_owner == vim_owner || net_owner == tenancy::kOperatorTenant || vim_owner == tenancy::kOperatorTenant;
}

} // namespace

std::uint32_t Cidr::first() const { return address; }

std::uint32_t Cidr::last() const
{
    if (prefix == 0)
        return 0xffffffffu;
    return address | ((1u << (32 - prefix)) - 1);
}

Cidr parse_cidr(const std::string& text)
{
    unsigned a = 0, b = 0, c = 0, d = 0;
    int len = -1;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%u.%u.%u.%u/%d%c", &a, &b, &c, &d, &len, &tail) != 5 || a > 255 || b > 255 ||
        c > 255 || d > 255 || len < 0 || len > 32)
        fail(Errc::BadRequest, "'" + text + "' is not an IPv4 CIDR");
    Cidr out{(a << 24) | (b << 16) | (c << 8) | d, len};
    std::uint32_t host_mask = len == 32 ? 0 : (len == 0 ? 0xffffffffu : (1u << (32 - len)) - 1);
    if (out.address & host_mask)
        fail(Errc::BadRequest, "'" + text + "' has host bits set");
    return out;
}

bool visible_to(const std::string& owner, const std::string& tenant)
{
    return owner == tenant || owner == tenancy::kOperatorTenant || tenant == tenancy::kOperatorTenant;
}

Network Topology::create_network(const std::string& tenant, const std::string& name, const std::string& cidr,
                                 NetworkMode mode)
{
    if (name.empty())
        fail(Errc::SchemaViolation, "network name must not be empty");
    auto range = parse_cidr(cidr);
    if (network(name))
        fail(Errc::DuplicateName, "network '" + name + "' already exists");
    for (const auto& other : networks())
        if (other.owner == tenant && parse_cidr(other.cidr).overlaps(range))
            fail(Errc::CidrOverlap, cidr + " overlaps " + other.name + " (" + other.cidr + ")",
                 {{"network", other.name}, {"cidr", other.cidr}});

    Network net{name, cidr, mode, tenant, {}};
    for (const auto& v : vims())
        if (realizable(tenant, v.owner))
        {
            vim_.create_network(v.vim_id, name, cidr);
            net.realized_on.push_back(v.vim_id);
        }
    try
    {
        auto tombstone = store_.get(kNetworks, name);
        store_.commit(kNetworks, name, net, tombstone ? tombstone->revision : 0);
    }
    catch (const Error& e)
    {
        if (e.code() == Errc::RevisionConflict)
            fail(Errc::DuplicateName, "network '" + name + "' already exists");
        throw;
    }
    return net;
}

void Topology::delete_network(const std::string& tenant, const std::string& name)
{
    auto net = network(name);
    if (!net || !visible_to(net->owner, tenant))
        fail(Errc::UnknownNetwork, "no network '" + name + "'");
    if (net->owner != tenant && tenant != tenancy::kOperatorTenant)
        fail(Errc::TenantMismatch, "network '" + name + "' belongs to another tenant");
    for (const auto& v : net->realized_on)
        vim_.delete_network(v, name);
    auto doc = store_.get(kNetworks, name);
    store_.commit(kNetworks, name, nullptr, doc->revision);
}

std::optional<Network> Topology::network(const std::string& name) const
{
    auto doc = store_.get(kNetworks, name);
    if (!doc || doc->body.is_null())
        return std::nullopt;
    return doc->body.get<Network>();
}

std::vector<Network> Topology::networks() const
{
    std::vector<Network> out;
    for (const auto& doc : store_.list(kNetworks))
        if (!doc.body.is_null())
            out.push_back(doc.body.get<Network>());
    return out;
}

bool Topology::network_visible(const std::string& name, const std::string& tenant) const
{
    auto net = network(name);
    return net && visible_to(net->owner, tenant);
}

VimRecord Topology::register_vim(VimRecord record)
{
    if (record.vim_id.empty())
        record.vim_id = next_id(store_, "vim");
    if (record.areas.empty())
        fail(Errc::EmptyAreaSet, "a VIM must serve at least one area");
    if (!record.capacity.non_negative())
        fail(Errc::NegativeBudget, "VIM capacity must be non-negative");
    vim_.register_vim(record.vim_id, record.capacity);
    auto doc = store_.get(kVims, record.vim_id);
    store_.commit(kVims, record.vim_id, record, doc ? doc->revision : 0);

    for (const auto& net : networks())
    {
        if (!realizable(net.owner, record.owner))
            continue;
        vim_.create_network(record.vim_id, net.name, net.cidr);
        if (std::find(net.realized_on.begin(), net.realized_on.end(), record.vim_id) == net.realized_on.end())
            update<Network>(store_, kNetworks, net.name, [&](Network& n) { n.realized_on.push_back(record.vim_id); });
    }
    return record;
}

ClusterRecord Topology::register_cluster(ClusterRecord record)
{
    if (record.cluster_id.empty())
        record.cluster_id = next_id(store_, "cluster");
    if (record.areas.empty())
        fail(Errc::EmptyAreaSet, "a cluster must serve at least one area");
    auto doc = store_.get(kClusters, record.cluster_id);
    store_.commit(kClusters, record.cluster_id, record, doc ? doc->revision : 0);
    return record;
}

std::vector<VimRecord> Topology::vims() const { return load_all<VimRecord>(store_, kVims); }

std::vector<ClusterRecord> Topology::clusters() const { return load_all<ClusterRecord>(store_, kClusters); }

std::optional<VimRecord> Topology::vim_for(AreaId area, const std::string& tenant) const
{
    return lowest_serving(vims(), area, tenant, [](const VimRecord& r) { return r.vim_id; });
}

std::optional<ClusterRecord> Topology::cluster_for(AreaId area, const std::string& tenant) const
{
    return lowest_serving(clusters(), area, tenant, [](const ClusterRecord& r) { return r.cluster_id; });
}

json Topology::to_json() const
{
    return {{"networks", networks()}, {"vims", vims()}, {"clusters", clusters()}};
}

} // namespace oss::nfvcl
