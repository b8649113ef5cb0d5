#pragma once

#include <string>
#include <vector>

#include "oss/core/errors.hpp"
#include "oss/core/json.hpp"

namespace oss::nfvcl
{

/// Structural subset of JSON Schema: type, properties, required,
/// additionalProperties (bool), items, enum, minimum, maximum, minItems,
/// minLength. Every problem is reported with its JSON pointer.
std::vector<Violation> check_schema(const json& schema, const json& value, const std::string& where = "");

/// Throws SchemaViolation with the full list when `value` does not conform.
void require_schema(const json& schema, const json& value, const std::string& what);

} // namespace oss::nfvcl
