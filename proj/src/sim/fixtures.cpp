#include "oss/sim/fixtures.hpp"

#include <cstdio>

namespace oss::sim
{

namespace
{

std::string two_digits(int n)
{
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02d", n);
    return buf;
}

std::string mac(int server, int nic)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "52:54:00:00:%02x:%02x", server, nic);
    return buf;
}

json link(const std::string& sa, int pa, const std::string& sb, int pb)
{
    return {{"a", {{"switch", sa}, {"port", pa}}}, {"b", {{"switch", sb}, {"port", pb}}}};
}

} // namespace

json dc22_inventory()
{
    constexpr int kServers = 22;
    constexpr int kLeaves = 6;
    json switches = json::array();
    for (int i = 1; i <= kLeaves; ++i)
        switches.push_back({{"id", "sw" + std::to_string(i)}, {"ports", 128}});
    switches.push_back({{"id", "sw7"}, {"ports", 54}});
    switches.push_back({{"id", "sw8"}, {"ports", 96}});

    json servers = json::array();
    for (int i = 0; i < kServers; ++i)
    {
        json nics = json::array();
        nics.push_back({{"name", "eno1"},
                        {"mac", mac(i + 1, 1)},
                        {"switch", "sw" + std::to_string(i % kLeaves + 1)},
                        {"port", i / kLeaves + 1}});
        nics.push_back({{"name", "eno2"}, {"mac", mac(i + 1, 2)}, {"switch", "sw8"}, {"port", i + 1}});
        servers.push_back({{"hostname", "server-" + two_digits(i + 1)},
                           {"cores", 32},
                           {"ram_gb", 116},
                           {"storage_gb", 4600},
                           {"nics", nics}});
    }

    json cabling = json::array();
    for (int i = 1; i <= kLeaves; ++i)
        cabling.push_back(link("sw" + std::to_string(i), 128, "sw7", i));
    cabling.push_back(link("sw8", 96, "sw7", 7));

    return {{"servers", servers},
            {"switches", switches},
            {"cabling", cabling},
            {"images", {"ubuntu-20.04", "ubuntu-22.04"}}};
}

json minimal_inventory()
{
    return {{"servers",
             {{{"hostname", "server-01"},
               {"cores", 8},
               {"ram_gb", 32},
               {"storage_gb", 500},
               {"nics", {{{"name", "eno1"}, {"mac", mac(1, 1)}, {"switch", "sw1"}, {"port", 1}}}}}}},
            {"switches", {{{"id", "sw1"}, {"ports", 24}}}},
            {"cabling", json::array()},
            {"images", {"ubuntu-22.04"}}};
}

std::optional<json> fixture(const std::string& name)
{
    if (name == "dc-22")
        return dc22_inventory();
    if (name == "minimal")
        return minimal_inventory();
    return std::nullopt;
}

} // namespace oss::sim
