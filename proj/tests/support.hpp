#pragma once

#include <random>
#include <set>
#include <string>

#include "oss/core/store.hpp"
#include "oss/gateway/gateway.hpp"

namespace oss::test
{

/// Create body of a one-worker Kubernetes cluster in area 3.
inline json cluster_body()
{
    return json::parse(R"({
  "type": "K8s",
  "config": {
    "version": "1.24",
    "network_endpoints": {
      "mgt": "control",
      "data_nets": [
        {
          "mode": "layer2",
          "net_name": "control"
        }
      ]
    }
  },
  "areas": [
    {
      "id": 3,
      "core": true,
      "workers_replica": 1
    }
  ]
})");
}

/// Gateway plus store in one object.
struct Env
{
    MemoryStore store;
    gateway::Gateway gw;

    explicit Env(sim::SimConfig config = {}) : gw(store, config) {}

    gateway::Response call(const std::string& method, const std::string& path, const json& body = nullptr,
                           const std::string& tenant = {})
    {
        return gw.call(method, path, body, tenant);
    }
};

/// Area 3 (core) with a shared "control" network and a VIM plus a cluster
/// serving it, all owned by the operator.
inline void area_topology(Env& env, std::set<int> areas = {3})
{
    for (int a : areas)
        env.call("POST", "/areas", {{"id", a}, {"kind", a == *areas.begin() ? "core" : "edge"}});
    env.call("POST", "/nfvcl/topology/networks", {{"name", "control"}, {"cidr", "10.0.0.0/16"}});
    env.call("POST", "/nfvcl/topology/vims",
             {{"vim_id", "vim-a"}, {"areas", areas}, {"capacity", {{"vcpus", 512}, {"ram_gb", 2048}, {"storage_gb", 40000}}}});
    env.call("POST", "/nfvcl/topology/clusters",
             {{"cluster_id", "k8s-a"}, {"areas", areas}, {"capacity", {{"vcpus", 256}, {"ram_gb", 1024}, {"storage_gb", 10000}}}});
}

/// Random data center: `switches` switches joined by a random spanning tree
/// plus a few extra links, `servers` servers with one or two NICs. Returns the
/// inventory and, independently, the list of physical links it contains as
/// normalized "dev:port|dev:port" strings.
struct RandomPlan
{
    json inventory;
    std::set<std::string> links;
};

inline std::string link_key(std::string a, std::string b)
{
    if (b < a)
        std::swap(a, b);
    return a + "|" + b;
}

inline RandomPlan random_plan(std::uint64_t seed, int max_switches = 8, int max_servers = 22)
{
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    int n_sw = pick(1, max_switches);
    int n_srv = pick(1, max_servers);
    RandomPlan plan;
    json switches = json::array();
    std::vector<int> next_port(n_sw, 1);
    const int ports = 48;
    for (int i = 0; i < n_sw; ++i)
        switches.push_back({{"id", "s" + std::to_string(i + 1)}, {"ports", ports}});
    auto take = [&](int sw) { return next_port[sw]++; };
    json cabling = json::array();
    auto cable = [&](int a, int b) {
        int pa = take(a), pb = take(b);
        auto da = "s" + std::to_string(a + 1), db = "s" + std::to_string(b + 1);
        cabling.push_back({{"a", {{"switch", da}, {"port", pa}}}, {"b", {{"switch", db}, {"port", pb}}}});
        plan.links.insert(link_key(da + ":" + std::to_string(pa), db + ":" + std::to_string(pb)));
    };
    for (int i = 1; i < n_sw; ++i)
        cable(i, pick(0, i - 1));
    int extra = n_sw > 2 ? pick(0, 2) : 0;
    for (int k = 0; k < extra; ++k)
    {
        int a = pick(0, n_sw - 1), b = pick(0, n_sw - 1);
        if (a != b)
            cable(a, b);
    }
    json servers = json::array();
    for (int i = 0; i < n_srv; ++i)
    {
        json nics = json::array();
        int n_nics = pick(1, 2);
        for (int k = 0; k < n_nics; ++k)
        {
            int sw = pick(0, n_sw - 1);
            int port = take(sw);
            auto host = "h" + std::to_string(i + 1);
            auto nic = "eth" + std::to_string(k);
            nics.push_back({{"name", nic}, {"switch", "s" + std::to_string(sw + 1)}, {"port", port}});
            plan.links.insert(link_key(host + ":" + nic, "s" + std::to_string(sw + 1) + ":" + std::to_string(port)));
        }
        servers.push_back({{"hostname", "h" + std::to_string(i + 1)},
                           {"cores", pick(4, 64)},
                           {"ram_gb", pick(8, 256)},
                           {"storage_gb", pick(100, 4000)},
                           {"nics", nics}});
    }
    plan.inventory = {{"servers", servers}, {"switches", switches}, {"cabling", cabling}, {"images", {"ubuntu-22.04"}}};
    return plan;
}

/// Runs the clock in steps until `pred` holds or `max` sim-seconds passed.
template <typename Pred>
bool advance_until(gateway::Gateway& gw, Pred pred, double step = 5, double max = 20000)
{
    for (double t = 0; t <= max; t += step)
    {
        if (pred())
            return true;
        gw.advance(step);
    }
    return pred();
}

} // namespace oss::test
