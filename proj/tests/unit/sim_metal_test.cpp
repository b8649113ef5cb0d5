#include <gtest/gtest.h>

#include "../support.hpp"
#include "oss/core/tenancy.hpp"
#include "oss/sim/fixtures.hpp"

using namespace oss;
using oss::test::Env;

TEST(Simulator, FiresInTimeThenSequenceOrder)
{
    MemoryStore s;
    sim::Simulator sim(s);
    std::vector<std::string> fired;
    sim.on("k", [&](const sim::ScheduledEvent& e) { fired.push_back(e.subject); });
    sim.schedule(10, "k", "b");
    sim.schedule(5, "k", "a");
    sim.schedule(10, "k", "c");
    sim.advance(7);
    EXPECT_EQ(fired, (std::vector<std::string>{"a"}));
    EXPECT_DOUBLE_EQ(sim.now(), 7);
    sim.settle();
    EXPECT_EQ(fired, (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_TRUE(sim.idle());
}

TEST(Simulator, HandlersMayScheduleWithinTheWindow)
{
    MemoryStore s;
    sim::Simulator sim(s);
    int n = 0;
    sim.on("tick", [&](const sim::ScheduledEvent&) {
        if (++n < 5)
            sim.schedule(1, "tick", "x");
    });
    sim.schedule(1, "tick", "x");
    sim.advance(10);
    EXPECT_EQ(n, 5);
}

TEST(Simulator, BoundedFaultRulesAreConsumed)
{
    MemoryStore s;
    sim::Simulator sim(s);
    sim.inject({0, {{"m*", "machine.commission", sim::FaultEffect::fail, 0, 1}}});
    EXPECT_TRUE(sim.check("machine.commission", {"m1"}).fail);
    EXPECT_FALSE(sim.check("machine.commission", {"m1"}).fail);
    sim.inject({0, {{"*", "ns.*", sim::FaultEffect::delay, 12, -1}}});
    EXPECT_DOUBLE_EQ(sim.check("ns.instantiate", {"ns-1"}).extra_delay, 12);
    EXPECT_FALSE(sim.check("machine.deploy", {"m1"}).failed());
}

TEST(Simulator, EventCursorPaging)
{
    MemoryStore s;
    sim::Simulator sim(s);
    for (int i = 0; i < 5; ++i)
        sim.log("t", "s" + std::to_string(i), "x");
    auto page = sim.events_after(2, 2);
    ASSERT_EQ(page.size(), 2u);
    EXPECT_EQ(page[0].index, 3u);
    EXPECT_EQ(page[1].subject, "s3");
    EXPECT_TRUE(sim.events_after(5).empty());
}

TEST(Simulator, LogHashIgnoresWallTime)
{
    MemoryStore a, b;
    sim::Simulator sa(a), sb(b);
    sa.log("x", "y", "z");
    sb.log("x", "y", "z");
    EXPECT_EQ(sa.log_hash(), sb.log_hash());
    sb.log("x", "y", "w");
    EXPECT_NE(sa.log_hash(), sb.log_hash());
}

TEST(Simulator, JitterFollowsSeed)
{
    auto fire = [](std::uint64_t seed) {
        MemoryStore s;
        sim::SimConfig c;
        c.seed = seed;
        c.jitter_max = 20;
        sim::Simulator sim(s, c);
        return sim.schedule(10, "k", "a");
    };
    EXPECT_EQ(fire(3), fire(3));
    double t = fire(3);
    EXPECT_GE(t, 10);
    EXPECT_LE(t, 30);
}

TEST(Fixture, TwentyTwoServerFleet)
{
    auto inv = sim::load_inventory(sim::dc22_inventory());
    EXPECT_EQ(inv.servers.size(), 22u);
    EXPECT_EQ(inv.switches.size(), 8u);
    EXPECT_EQ(inv.total_resources().vcpus, 704);
    EXPECT_EQ(inv.total_ports(), 918);
    EXPECT_EQ(inv.all_links().size(), 22u * 2 + 7);
}

TEST(Fabric, DiscoveryMatchesFixture)
{
    Env env;
    env.call("POST", "/sim/inventory", {{"fixture", "dc-22"}});
    auto g = env.call("GET", "/metalcl/topology");
    EXPECT_EQ(g.status, 200);
    EXPECT_EQ(g.body["nodes"].size(), 30u);
    EXPECT_EQ(g.body["edges"].size(), 51u);
}

TEST(Fabric, UnreachableSwitchGivesPartialGraph)
{
    Env env;
    env.call("POST", "/sim/inventory", {{"fixture", "dc-22"}});
    env.call("POST", "/sim/faults",
             {{"faults", {{{"subject", "sw8"}, {"transition", "switch.lldp"}, {"effect", "unreachable"}}}}});
    auto g = env.call("GET", "/metalcl/topology");
    EXPECT_EQ(g.status, 206);
    EXPECT_EQ(g.body["unreachable"], json::array({"sw8"}));
}

TEST(Fabric, InventoryValidation)
{
    Env env;
    auto bad = oss::test::random_plan(5).inventory;
    bad["cabling"].push_back({{"a", {{"switch", "s1"}, {"port", 1}}}, {"b", {{"switch", "nope"}, {"port", 1}}}});
    auto r = env.call("POST", "/sim/inventory", bad);
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(r.body["error"], "DanglingCable");
    json dup = {{"switches", {{{"id", "s1"}, {"ports", 4}}}},
                {"servers",
                 {{{"hostname", "a"}, {"cores", 1}, {"ram_gb", 1}, {"storage_gb", 1},
                   {"nics", {{{"name", "eth0"}, {"switch", "s1"}, {"port", 1}}}}},
                  {{"hostname", "b"}, {"cores", 1}, {"ram_gb", 1}, {"storage_gb", 1},
                   {"nics", {{{"name", "eth0"}, {"switch", "s1"}, {"port", 1}}}}}}}};
    r = env.call("POST", "/sim/inventory", dup);
    EXPECT_EQ(r.body["error"], "MalformedInventory");
}

namespace
{

void fleet(Env& env, int machines)
{
    env.call("POST", "/sim/inventory", {{"fixture", "dc-22"}});
    env.call("POST", "/tenants",
             {{"id", "t"}, {"quota", {{"vcpus", 1000}, {"ram_gb", 4000}, {"storage_gb", 100000}}}});
    env.call("POST", "/metalcl/machines/enlist");
    for (int i = 1; i <= machines; ++i)
        env.call("POST", "/metalcl/machines/m" + std::to_string(i) + "/commission");
    env.gw.settle();
}

std::string state(Env& env, const std::string& m)
{
    return env.call("GET", "/metalcl/machines/" + m).body["state"];
}

} // namespace

TEST(Metal, LifecycleChargesAndReleases)
{
    Env env;
    fleet(env, 1);
    EXPECT_EQ(state(env, "m1"), "READY");
    auto r = env.call("POST", "/metalcl/machines/m1/deploy", {{"image", "ubuntu-22.04"}}, "t");
    EXPECT_EQ(r.status, 202);
    EXPECT_EQ(r.body["state"], "DEPLOYING");
    env.gw.settle();
    EXPECT_EQ(state(env, "m1"), "DEPLOYED");
    EXPECT_EQ(tenancy::usage(env.store, "t").machines, (ResourceBudget{32, 116, 4600}));
    env.call("POST", "/metalcl/machines/m1/release");
    env.gw.settle();
    EXPECT_EQ(state(env, "m1"), "READY");
    EXPECT_EQ(tenancy::usage(env.store, "t").machines, ResourceBudget{});
}

TEST(Metal, CommissionFaultLeavesMachineFailedAndOff)
{
    Env env;
    env.call("POST", "/sim/inventory", {{"fixture", "dc-22"}});
    env.call("POST", "/metalcl/machines/enlist");
    env.call("POST", "/sim/faults",
             {{"faults", {{{"subject", "m2"}, {"transition", "machine.commission"}, {"effect", "fail"}}}}});
    env.call("POST", "/metalcl/machines/m1/commission");
    env.call("POST", "/metalcl/machines/m2/commission");
    env.gw.settle();
    EXPECT_EQ(state(env, "m1"), "READY");
    auto m2 = env.call("GET", "/metalcl/machines/m2").body;
    EXPECT_EQ(m2["state"], "FAILED");
    EXPECT_EQ(m2["power"], "OFF");
}

TEST(Metal, PowerFaultDuringDeployFailsAndRefunds)
{
    Env env;
    fleet(env, 1);
    env.call("POST", "/sim/faults",
             {{"faults", {{{"subject", "server-01"}, {"transition", "machine.power"}, {"effect", "fail"}}}}});
    auto r = env.call("POST", "/metalcl/machines/m1/deploy", {{"image", "ubuntu-22.04"}}, "t");
    EXPECT_EQ(r.body["state"], "FAILED");
    EXPECT_EQ(tenancy::usage(env.store, "t").machines, ResourceBudget{});
}

TEST(Metal, InvalidTransitionsAndUnknowns)
{
    Env env;
    fleet(env, 1);
    EXPECT_EQ(env.call("POST", "/metalcl/machines/m2/deploy", {{"image", "ubuntu-22.04"}}, "t").body["error"],
              "InvalidState");
    EXPECT_EQ(env.call("POST", "/metalcl/machines/m1/deploy", {{"image", "win"}}, "t").body["error"], "UnknownImage");
    EXPECT_EQ(env.call("GET", "/metalcl/machines/m99").status, 404);
    EXPECT_FALSE(metal::machine_transition_allowed(metal::MachineState::NEW, metal::MachineState::DEPLOYED));
    EXPECT_TRUE(metal::machine_transition_allowed(metal::MachineState::READY, metal::MachineState::ALLOCATED));
}

TEST(Metal, OverlayWiresAccessPortsAndUnwires)
{
    Env env;
    fleet(env, 3);
    for (auto m : {"m1", "m2", "m3"})
        env.call("POST", std::string("/metalcl/machines/") + m + "/deploy", {{"image", "ubuntu-22.04"}}, "t");
    env.gw.settle();
    auto o = env.call("POST", "/metalcl/overlays", {{"name", "a"}, {"machines", {"m1", "m2", "m3"}}}, "t");
    ASSERT_EQ(o.status, 201) << o.body;
    int vlan = o.body["vlan_id"];
    EXPECT_EQ(vlan, tenancy::require_tenant(env.store, "t").vlan_range.first);
    EXPECT_EQ(o.body["member_ports"].size(), 3u);
    for (const auto& p : o.body["member_ports"])
    {
        auto cfg = env.gw.fabric().ports(p["device"]);
        EXPECT_TRUE(cfg.at(p["port"].get<std::string>()).vlans.count(vlan));
    }
    env.call("DELETE", "/metalcl/overlays/" + o.body["overlay_id"].get<std::string>(), nullptr, "t");
    for (const auto& sw : {"sw1", "sw2", "sw3", "sw7", "sw8"})
        for (const auto& [_, cfg] : env.gw.fabric().ports(sw))
            EXPECT_FALSE(cfg.vlans.count(vlan));
}

TEST(Metal, StackStepFaultSkipsTheRest)
{
    Env env;
    fleet(env, 2);
    for (auto m : {"m1", "m2"})
        env.call("POST", std::string("/metalcl/machines/") + m + "/deploy", {{"image", "ubuntu-22.04"}}, "t");
    env.gw.settle();
    auto mg = env.call("POST", "/metalcl/overlays", {{"name", "mgmt"}, {"machines", {"m1", "m2"}}}, "t");
    auto dt = env.call("POST", "/metalcl/overlays", {{"name", "data"}, {"machines", {"m1", "m2"}}}, "t");
    auto seq = metal::playbook_sequence(metal::StackKind::iaas_stack);
    env.call("POST", "/sim/faults",
             {{"faults", {{{"subject", seq[2]}, {"transition", "playbook.step"}, {"effect", "fail"}}}}});
    auto s = env.call("POST", "/metalcl/stacks",
                      {{"kind", "iaas_stack"},
                       {"machines", {"m1", "m2"}},
                       {"mgmt", mg.body["overlay_id"]},
                       {"data", dt.body["overlay_id"]},
                       {"areas", {1}}},
                      "t");
    ASSERT_EQ(s.status, 201) << s.body;
    env.gw.settle();
    auto st = env.call("GET", "/metalcl/stacks/" + s.body["stack_id"].get<std::string>()).body;
    EXPECT_EQ(st["status"], "FAILED");
    std::vector<std::string> statuses;
    for (const auto& r : st["runs"])
        statuses.push_back(r["status"]);
    std::vector<std::string> expected{"SUCCEEDED", "SUCCEEDED", "FAILED"};
    expected.resize(seq.size(), "SKIPPED");
    EXPECT_EQ(statuses, expected);
    EXPECT_TRUE(env.gw.topology().vims().empty());
}
