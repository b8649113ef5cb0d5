#pragma once

#include <optional>
#include <string>

#include "oss/core/json.hpp"

namespace oss::sim
{

/// Default data-center fixture: 22 servers (32 cores, 116 GB, 4600 GB each),
/// six 128-port leaves, a 54-port spine and a 96-port management switch.
/// eno1 of every server goes to a leaf, eno2 to the management switch.
json dc22_inventory();

/// One server on one switch.
json minimal_inventory();

/// Named fixture lookup: "dc-22" or "minimal".
std::optional<json> fixture(const std::string& name);

} // namespace oss::sim
