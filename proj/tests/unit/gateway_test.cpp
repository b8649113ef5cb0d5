#include <gtest/gtest.h>
#include <httplib.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support.hpp"
#include "oss/gateway/scenario.hpp"
#include "oss/gateway/server.hpp"

using namespace oss;
using oss::test::Env;

TEST(Gateway, StatusCodes)
{
    Env env;
    EXPECT_EQ(env.call("GET", "/nope").status, 404);
    EXPECT_EQ(env.call("GET", "/nope").body["error"], "NotFound");
    EXPECT_EQ(env.call("PATCH", "/tenants").status, 405);
    EXPECT_EQ(env.call("DELETE", "/tenants").body["error"], "MethodNotAllowed");
    EXPECT_EQ(env.call("POST", "/tenants", {{"id", "a"}}).status, 201);
    EXPECT_EQ(env.call("POST", "/tenants", {{"id", "a"}}).status, 409);
    EXPECT_EQ(env.call("POST", "/tenants", {{"name", "no id"}}).status, 400);
    EXPECT_EQ(env.call("GET", "/tenants/zz").status, 404);
    EXPECT_EQ(env.call("POST", "/sim/advance", {{"dt", -1}}).status, 400);
}

TEST(Gateway, ApiDescriptionIsStableAndComplete)
{
    Env a, b;
    auto da = a.call("GET", "/api").body;
    EXPECT_EQ(da.dump(), b.call("GET", "/api").body.dump());
    EXPECT_EQ(da["openapi"], "3.0.3");
    std::size_t ops = 0;
    for (const auto& [path, verbs] : da["paths"].items())
        ops += verbs.size();
    EXPECT_EQ(ops, a.gw.router().routes().size());
    EXPECT_TRUE(da["paths"]["/nfvcl/blueprints"].contains("post"));
    EXPECT_TRUE(da["paths"]["/nfvcl/blueprints"]["post"].contains("x-error-codes"));
}

TEST(Gateway, ReadsNeverWrite)
{
    Env env;
    oss::test::area_topology(env);
    env.call("POST", "/sim/inventory", {{"fixture", "minimal"}});
    env.call("POST", "/nfvcl/blueprints", oss::test::cluster_body());
    env.gw.settle();
    auto before = snapshot_hashes(env.store);
    for (const auto& r : env.gw.router().routes())
    {
        if (r.method != "GET")
            continue;
        std::string path;
        for (const auto& seg : gateway::split_path(r.path))
            path += "/" + (seg.front() == '{' ? std::string("bp-1") : seg);
        env.call("GET", path);
    }
    EXPECT_EQ(snapshot_hashes(env.store), before);
}

TEST(Gateway, IdempotencyKeyReplays)
{
    Env env;
    gateway::Request r;
    r.method = "POST";
    r.path = "/nfvcl/topology/networks";
    r.body = {{"name", "n"}, {"cidr", "10.0.0.0/24"}};
    r.idempotency_key = "k1";
    auto first = env.gw.handle(r);
    auto again = env.gw.handle(r);
    EXPECT_EQ(first.status, 201);
    EXPECT_EQ(again.status, 201);
    EXPECT_EQ(first.body, again.body);
    r.idempotency_key = "k2";
    EXPECT_EQ(env.gw.handle(r).body["error"], "DuplicateName");
    r.idempotency_key = "k1";
    r.tenant = "someone";
    EXPECT_NE(env.gw.handle(r).status, 201);
}

TEST(Gateway, EventCursor)
{
    Env env;
    oss::test::area_topology(env);
    env.call("POST", "/nfvcl/blueprints", oss::test::cluster_body());
    env.gw.settle();
    auto all = env.call("GET", "/events").body;
    auto n = all["events"].size();
    ASSERT_GT(n, 4u);
    EXPECT_EQ(all["cursor"], n);
    auto page = env.call("GET", "/events?cursor=2&limit=2").body;
    ASSERT_EQ(page["events"].size(), 2u);
    EXPECT_EQ(page["events"][0]["index"], 3);
    EXPECT_EQ(page["cursor"], 4);
    EXPECT_TRUE(env.call("GET", "/events?cursor=" + std::to_string(n)).body["events"].empty());
    bool api_logged = false;
    for (const auto& e : all["events"])
        api_logged = api_logged || (e["actor"] == "api" && e["subject"] == "/nfvcl/blueprints");
    EXPECT_TRUE(api_logged);
}

TEST(Scenario, StopsAtFailingStep)
{
    std::istringstream in(R"(# comment
{"call": "POST /tenants", "body": {"id": "x"}, "expect": 201, "save": {"t": "/id"}}
{"assert": "GET /tenants/${t}", "at": "/id", "equals": "x"}
{"assert": "GET /tenants/${t}", "at": "/id", "equals": "y"}
{"advance": 5}
)");
    auto steps = gateway::parse_scenario(in);
    ASSERT_EQ(steps.size(), 4u);
    Env env;
    auto rep = gateway::run_scenario(env.gw, steps);
    EXPECT_FALSE(rep.ok());
    EXPECT_EQ(rep.failed_step, 2u);
    EXPECT_EQ(rep.error, "StepFailed: step 2");
    EXPECT_EQ(rep.steps.size(), 3u);
    EXPECT_EQ(rep.vars["t"], "x");
    EXPECT_EQ(env.gw.sim().now(), 0);
}

TEST(Scenario, BundledScenarioPasses)
{
    std::ifstream in(std::string(OSS_SCENARIO_DIR) + "/e2e-layers.jsonl");
    ASSERT_TRUE(in);
    Env env;
    auto rep = gateway::run_scenario(env.gw, gateway::parse_scenario(in));
    EXPECT_TRUE(rep.ok()) << rep.error << " " << rep.steps.back().detail;
}

TEST(Restart, FreshGatewayResumesInFlightWork)
{
    auto dir = std::filesystem::temp_directory_path() / ("oss-resume-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::string id;
    {
        FileStore store(dir);
        gateway::Gateway gw(store);
        gw.call("POST", "/areas", {{"id", 3}, {"kind", "core"}});
        gw.call("POST", "/nfvcl/topology/networks", {{"name", "control"}, {"cidr", "10.0.0.0/16"}});
        gw.call("POST", "/nfvcl/topology/vims",
                {{"vim_id", "vim-a"}, {"areas", {3}}, {"capacity", {{"vcpus", 64}, {"ram_gb", 256}, {"storage_gb", 2000}}}});
        id = gw.call("POST", "/nfvcl/blueprints", oss::test::cluster_body()).body["id"];
        gw.advance(5);
    }
    FileStore store(dir);
    auto before = snapshot_hashes(store);
    gateway::Gateway gw(store);
    EXPECT_EQ(snapshot_hashes(store), before);
    EXPECT_EQ(gw.call("GET", "/nfvcl/blueprints/" + id).body["state"], "DEPLOYING");
    gw.settle();
    EXPECT_EQ(gw.call("GET", "/nfvcl/blueprints/" + id).body["state"], "READY");
    std::filesystem::remove_all(dir);
}

TEST(Server, HttpRoundTrip)
{
    MemoryStore store;
    gateway::Gateway gw(store);
    gateway::Server server(gw, {"127.0.0.1", 0, 0});
    int port = server.start();
    ASSERT_GT(port, 0);
    httplib::Client cli("127.0.0.1", port);
    auto r = cli.Post("/tenants", R"({"id":"web"})", "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 201);
    httplib::Headers h{{"X-Tenant-Id", "web"}};
    r = cli.Post("/nfvcl/topology/networks", h, R"({"name":"n","cidr":"10.1.0.0/24"})", "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 201);
    EXPECT_EQ(json::parse(r->body)["owner"], "web");
    r = cli.Get("/missing");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 404);
    EXPECT_EQ(json::parse(r->body)["error"], "NotFound");
    r = cli.Post("/tenants", "{not json", "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 400);
    server.stop();
}
