#pragma once

#include <map>
#include <string>
#include <vector>

#include "oss/core/types.hpp"
#include "simulator.hpp"

namespace oss::sim
{

struct VimInstance
{
    std::string id;
    ResourceBudget flavor;
    std::vector<std::string> networks;
    std::string owner;
};

struct VimState
{
    std::string vim_id;
    ResourceBudget capacity;
    ResourceBudget usage;
    std::map<std::string, std::string> networks;  // name -> cidr
    std::map<std::string, VimInstance> instances;
};

/// Stand-in for an OpenStack-like VIM: networks plus flavor-sized instances,
/// with usage <= capacity enforced on every boot.
class Vim
{
public:
    explicit Vim(Simulator& sim) : sim_(sim) {}

    /// Idempotent; re-registering keeps existing networks and instances.
    void register_vim(const std::string& vim_id, const ResourceBudget& capacity);
    VimState state(const std::string& vim_id) const;
    std::vector<VimState> all() const;
    bool exists(const std::string& vim_id) const;

    void create_network(const std::string& vim_id, const std::string& name, const std::string& cidr);
    void delete_network(const std::string& vim_id, const std::string& name);

    /// Throws QuotaExceeded when usage + flavor exceeds capacity in any
    /// component, UnknownNetwork when an attachment is absent.
    void boot(const std::string& vim_id, const std::string& instance_id, const ResourceBudget& flavor,
              const std::vector<std::string>& networks, const std::string& owner);
    void remove(const std::string& vim_id, const std::string& instance_id);

private:
    Simulator& sim_;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VimInstance, id, flavor, networks, owner)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VimState, vim_id, capacity, usage, networks, instances)

} // namespace oss::sim
