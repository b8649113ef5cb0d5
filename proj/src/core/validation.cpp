#include "oss/core/validation.hpp"

#include <algorithm>

namespace oss
{

bool quota_admits(const ResourceBudget& budget, const ResourceBudget& used, const ResourceBudget& ask)
{
    return (used + ask).fits_within(budget);
}

bool SliceRequestCheck::has(Errc code) const
{
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
}

SliceRequestCheck validate_slice_request(const SliceRequest& req, const std::set<std::string>& tenants,
                                         const std::set<std::string>& catalog, const AreaSet& areas)
{
    SliceRequestCheck out;
    auto& v = out.violations;

    if (!tenants.count(req.tenant_id))
        v.push_back({Errc::UnknownTenant, "tenant '" + req.tenant_id + "' is not registered"});
    if (!catalog.count(req.slice_type))
        v.push_back({Errc::UnknownSliceType, "slice type '" + req.slice_type + "' is not in the catalog"});
    if (req.coverage_areas.empty())
        v.push_back({Errc::EmptyCoverage, "coverage_areas must not be empty"});
    for (AreaId a : req.coverage_areas)
        if (!areas.count(a))
            v.push_back({Errc::UnknownArea, "area " + std::to_string(a) + " is not registered"});
    if (!req.compute.non_negative())
        v.push_back({Errc::NegativeBudget, "compute budget fields must be >= 0"});
    if (req.qos.bandwidth_mbps < 0)
        v.push_back({Errc::NegativeBudget, "qos.bandwidth_mbps must be >= 0"});
    return out;
}

void require_valid(const SliceRequestCheck& check)
{
    if (check.ok())
        return;
    const auto& first = check.violations.front();
    fail(first.code, first.message, {{"violations", to_json(check.violations)}});
}

} // namespace oss
