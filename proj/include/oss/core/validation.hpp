#pragma once

#include <set>
#include <string>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace oss
{

/// True iff used + ask fits in budget component-wise.
bool quota_admits(const ResourceBudget& budget, const ResourceBudget& used, const ResourceBudget& ask);

struct SliceRequestCheck
{
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(Errc code) const;
};

/// Pure check of a slice request against the registries. Reports every
/// violation it finds.
SliceRequestCheck validate_slice_request(const SliceRequest& req, const std::set<std::string>& tenants,
                                         const std::set<std::string>& catalog, const AreaSet& areas);

/// Throws SchemaViolation (carrying the full list) when the check fails. The
/// first violation's code becomes the error code.
void require_valid(const SliceRequestCheck& check);

} // namespace oss
