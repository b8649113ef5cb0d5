#include "oss/core/tenancy.hpp"

#include <algorithm>

#include "oss/core/validation.hpp"

namespace oss::tenancy
{

namespace
{

constexpr const char* kTenants = "tenants";
constexpr const char* kUsage = "usage";
constexpr const char* kAreas = "areas";

struct VlanPool
{
    std::vector<VlanRange> allocated;
};
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VlanPool, allocated)

std::optional<VlanRange> first_free_block(const VlanPool& pool, int size)
{
    for (int start = kVlanPoolFirst; start + size - 1 <= kVlanPoolLast;)
    {
        VlanRange candidate{start, start + size - 1};
        auto clash = std::find_if(pool.allocated.begin(), pool.allocated.end(),
                                  [&](const VlanRange& r) { return r.overlaps(candidate); });
        if (clash == pool.allocated.end())
            return candidate;
        start = clash->last + 1;
    }
    return std::nullopt;
}

bool is_operator(std::string_view tenant_id) { return tenant_id == kOperatorTenant; }

} // namespace

TenantSpace create_tenant(DocumentStore& store, const TenantCreate& request)
{
    if (request.id.empty())
        fail(Errc::SchemaViolation, "tenant id must not be empty");
    if (is_operator(request.id))
        fail(Errc::DuplicateTenant, "tenant id 'operator' is reserved");
    if (!request.quota.non_negative())
        fail(Errc::NegativeBudget, "tenant quota fields must be >= 0");
    if (request.vlan_block < 1)
        fail(Errc::SchemaViolation, "vlan_block must be >= 1");
    if (store.get(kTenants, request.id))
        fail(Errc::DuplicateTenant, "tenant '" + request.id + "' already exists");

    TenantSpace tenant{request.id, request.name.empty() ? request.id : request.name, request.quota, {}};

    for (int attempt = 0; attempt < kCasRetries * 4; ++attempt)
    {
        auto doc = store.get("tenancy", "vlan_pool");
        VlanPool pool = doc ? doc->body.get<VlanPool>() : VlanPool{};
        auto block = first_free_block(pool, request.vlan_block);
        if (!block)
            fail(Errc::VlanPoolExhausted, "no free VLAN block of size " + std::to_string(request.vlan_block));
        pool.allocated.push_back(*block);
        std::sort(pool.allocated.begin(), pool.allocated.end(),
                  [](const VlanRange& a, const VlanRange& b) { return a.first < b.first; });
        try
        {
            store.commit("tenancy", "vlan_pool", json(pool), doc ? doc->revision : 0);
            tenant.vlan_range = *block;
            break;
        }
        catch (const Error& e)
        {
            if (e.code() != Errc::RevisionConflict)
                throw;
        }
    }
    if (tenant.vlan_range.empty())
        fail(Errc::CasExhausted, "VLAN pool kept changing");

    try
    {
        insert(store, kTenants, tenant.id, tenant);
    }
    catch (const Error& e)
    {
        if (e.code() == Errc::RevisionConflict)
            fail(Errc::DuplicateTenant, "tenant '" + request.id + "' already exists");
        throw;
    }
    insert(store, kUsage, tenant.id, TenantUsage{tenant.id, {}, {}});
    return tenant;
}

std::optional<TenantSpace> find_tenant(const DocumentStore& store, std::string_view id)
{
    return load<TenantSpace>(store, kTenants, id);
}

TenantSpace require_tenant(const DocumentStore& store, std::string_view id)
{
    return require<TenantSpace>(store, kTenants, id, Errc::UnknownTenant);
}

std::vector<TenantSpace> list_tenants(const DocumentStore& store)
{
    return load_all<TenantSpace>(store, kTenants);
}

std::set<std::string> tenant_ids(const DocumentStore& store)
{
    std::set<std::string> out;
    for (const auto& doc : store.list(kTenants))
        out.insert(doc.doc_id);
    return out;
}

TenantUsage usage(const DocumentStore& store, std::string_view tenant_id)
{
    if (auto u = load<TenantUsage>(store, kUsage, tenant_id))
        return *u;
    return TenantUsage{std::string(tenant_id), {}, {}};
}

std::vector<TenantUsage> all_usage(const DocumentStore& store)
{
    return load_all<TenantUsage>(store, kUsage);
}

namespace
{

void ensure_usage_doc(DocumentStore& store, std::string_view tenant_id)
{
    if (store.get(kUsage, tenant_id))
        return;
    try
    {
        insert(store, kUsage, tenant_id, TenantUsage{std::string(tenant_id), {}, {}});
    }
    catch (const Error& e)
    {
        if (e.code() != Errc::RevisionConflict)
            throw;
    }
}

ResourceBudget& bucket_of(TenantUsage& u, Bucket b)
{
    return b == Bucket::blueprints ? u.blueprints : u.machines;
}

} // namespace

bool admits(const DocumentStore& store, std::string_view tenant_id, const ResourceBudget& ask)
{
    if (is_operator(tenant_id))
        return true;
    auto tenant = require_tenant(store, tenant_id);
    return quota_admits(tenant.quota, usage(store, tenant_id).total(), ask);
}

void reserve(DocumentStore& store, std::string_view tenant_id, Bucket bucket, const ResourceBudget& ask)
{
    std::optional<ResourceBudget> quota;
    if (!is_operator(tenant_id))
        quota = require_tenant(store, tenant_id).quota;
    ensure_usage_doc(store, tenant_id);
    update<TenantUsage>(store, kUsage, tenant_id, [&](TenantUsage& u) {
        if (quota && !quota_admits(*quota, u.total(), ask))
            fail(Errc::QuotaExceeded, "tenant '" + std::string(tenant_id) + "' quota does not admit request",
                 {{"quota", *quota}, {"used", u.total()}, {"ask", ask}});
        bucket_of(u, bucket) += ask;
    });
}

void release(DocumentStore& store, std::string_view tenant_id, Bucket bucket, const ResourceBudget& amount)
{
    ensure_usage_doc(store, tenant_id);
    update<TenantUsage>(store, kUsage, tenant_id, [&](TenantUsage& u) { bucket_of(u, bucket) -= amount; });
}

Area ensure_area(DocumentStore& store, AreaId id, AreaKind kind, std::string name)
{
    if (auto existing = load<Area>(store, kAreas, std::to_string(id)))
        return *existing;
    Area area{id, name.empty() ? "area-" + std::to_string(id) : std::move(name), kind};
    try
    {
        insert(store, kAreas, std::to_string(id), area);
    }
    catch (const Error& e)
    {
        if (e.code() != Errc::RevisionConflict)
            throw;
        return require<Area>(store, kAreas, std::to_string(id), Errc::UnknownArea);
    }
    return area;
}

std::vector<Area> list_areas(const DocumentStore& store)
{
    auto areas = load_all<Area>(store, kAreas);
    std::sort(areas.begin(), areas.end(), [](const Area& a, const Area& b) { return a.id < b.id; });
    return areas;
}

AreaSet area_ids(const DocumentStore& store)
{
    AreaSet out;
    for (const auto& a : list_areas(store))
        out.insert(a.id);
    return out;
}

} // namespace oss::tenancy
