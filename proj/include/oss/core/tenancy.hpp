#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "store.hpp"
#include "types.hpp"

namespace oss::tenancy
{

inline constexpr int kVlanPoolFirst = 100;
inline constexpr int kVlanPoolLast = 4000;
inline constexpr int kDefaultVlanBlock = 100;

/// Implicit tenant used for resources created without a tenant header. It has
/// no quota limit and no VLAN range.
inline constexpr const char* kOperatorTenant = "operator";

struct TenantCreate
{
    std::string id;
    std::string name;
    ResourceBudget quota;
    int vlan_block = kDefaultVlanBlock;
};

/// Registers a tenant and carves the lowest free contiguous VLAN block out of
/// the 100-4000 pool. Disjointness holds under concurrent creation because the
/// pool is a single CAS-guarded document.
TenantSpace create_tenant(DocumentStore& store, const TenantCreate& request);

std::optional<TenantSpace> find_tenant(const DocumentStore& store, std::string_view id);
TenantSpace require_tenant(const DocumentStore& store, std::string_view id);
std::vector<TenantSpace> list_tenants(const DocumentStore& store);
std::set<std::string> tenant_ids(const DocumentStore& store);

enum class Bucket
{
    blueprints,
    machines
};

struct TenantUsage
{
    std::string tenant_id;
    ResourceBudget blueprints;
    ResourceBudget machines;

    ResourceBudget total() const { return blueprints + machines; }
};

TenantUsage usage(const DocumentStore& store, std::string_view tenant_id);
std::vector<TenantUsage> all_usage(const DocumentStore& store);

/// Adds `ask` to a usage bucket iff the tenant quota admits it, else throws
/// QuotaExceeded and leaves usage unchanged.
void reserve(DocumentStore& store, std::string_view tenant_id, Bucket bucket, const ResourceBudget& ask);

/// Quota check without mutation.
bool admits(const DocumentStore& store, std::string_view tenant_id, const ResourceBudget& ask);

/// Returns resources to a bucket.
void release(DocumentStore& store, std::string_view tenant_id, Bucket bucket, const ResourceBudget& amount);

// Areas ---------------------------------------------------------------------

Area ensure_area(DocumentStore& store, AreaId id, AreaKind kind = AreaKind::edge, std::string name = {});
std::vector<Area> list_areas(const DocumentStore& store);
AreaSet area_ids(const DocumentStore& store);

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(TenantUsage, tenant_id, blueprints, machines)

} // namespace oss::tenancy
