#include "oss/sim/vim.hpp"

namespace oss::sim
{

namespace
{
constexpr const char* kVims = "sim_vims";
}

void Vim::register_vim(const std::string& vim_id, const ResourceBudget& capacity)
{
    if (sim_.store().get(kVims, vim_id))
    {
        update<VimState>(sim_.store(), kVims, vim_id, [&](VimState& v) { v.capacity = capacity; });
    }
    else
    {
        insert(sim_.store(), kVims, vim_id, VimState{vim_id, capacity, {}, {}, {}});
    }
    sim_.log("sim", vim_id, "vim.registered", {{"capacity", capacity}});
}

VimState Vim::state(const std::string& vim_id) const
{
    return require<VimState>(sim_.store(), kVims, vim_id, Errc::UnknownVim);
}

std::vector<VimState> Vim::all() const { return load_all<VimState>(sim_.store(), kVims); }

bool Vim::exists(const std::string& vim_id) const { return sim_.store().get(kVims, vim_id).has_value(); }

void Vim::create_network(const std::string& vim_id, const std::string& name, const std::string& cidr)
{
    bool created = false;
    update<VimState>(
        sim_.store(), kVims, vim_id,
        [&](VimState& v) {
            created = v.networks.emplace(name, cidr).second;
        },
        Errc::UnknownVim);
    if (created)
        sim_.log("sim", vim_id, "vim.network.created", {{"network", name}, {"cidr", cidr}});
}

void Vim::delete_network(const std::string& vim_id, const std::string& name)
{
    update<VimState>(
        sim_.store(), kVims, vim_id,
        [&](VimState& v) {
            if (!v.networks.erase(name))
                fail(Errc::UnknownNetwork, "network '" + name + "' not on " + vim_id);
        },
        Errc::UnknownVim);
    sim_.log("sim", vim_id, "vim.network.deleted", {{"network", name}});
}

void Vim::boot(const std::string& vim_id, const std::string& instance_id, const ResourceBudget& flavor,
               const std::vector<std::string>& networks, const std::string& owner)
{
    update<VimState>(
        sim_.store(), kVims, vim_id,
        [&](VimState& v) {
            for (const auto& net : networks)
                if (!v.networks.count(net))
                    fail(Errc::UnknownNetwork, "network '" + net + "' not on " + vim_id);
            if (v.instances.count(instance_id))
                fail(Errc::InvalidState, "instance '" + instance_id + "' already booted");
            if (!(v.usage + flavor).fits_within(v.capacity))
                fail(Errc::QuotaExceeded, vim_id + " capacity exhausted",
                     {{"capacity", v.capacity}, {"usage", v.usage}, {"flavor", flavor}});
            v.usage += flavor;
            v.instances[instance_id] = VimInstance{instance_id, flavor, networks, owner};
        },
        Errc::UnknownVim);
    sim_.log("sim", instance_id, "vim.instance.booted", {{"vim", vim_id}, {"flavor", flavor}});
}

void Vim::remove(const std::string& vim_id, const std::string& instance_id)
{
    update<VimState>(
        sim_.store(), kVims, vim_id,
        [&](VimState& v) {
            auto it = v.instances.find(instance_id);
            if (it == v.instances.end())
                fail(Errc::UnknownInstance, "instance '" + instance_id + "' not on " + vim_id);
            v.usage -= it->second.flavor;
            v.instances.erase(it);
        },
        Errc::UnknownVim);
    sim_.log("sim", instance_id, "vim.instance.deleted", {{"vim", vim_id}});
}

} // namespace oss::sim
