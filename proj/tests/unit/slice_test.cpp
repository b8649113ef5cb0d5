#include <gtest/gtest.h>

#include "../support.hpp"
#include "oss/core/tenancy.hpp"

using namespace oss;
using oss::test::Env;

namespace
{

void domain(Env& env, std::set<int> areas = {1, 2, 3})
{
    oss::test::area_topology(env, areas);
    env.call("POST", "/tenants", {{"id", "acme"}, {"quota", {{"vcpus", 400}, {"ram_gb", 1600}, {"storage_gb", 8000}}}});
}

json slice_body(const std::string& type, std::set<int> areas)
{
    return {{"slice_type", type}, {"coverage_areas", areas}};
}

std::string sb_state(Env& env, const json& created)
{
    return env.call("GET", "/sb/slices/" + created["slice_id"].get<std::string>()).body["state"];
}

} // namespace

TEST(SbPlanner, FreshTenantInstantiates)
{
    SliceRequest r;
    r.tenant_id = "acme";
    r.slice_type = "Free5GC";
    r.coverage_areas = {1, 2};
    auto plan = sb::plan_slice(r, {}, {}, {1});
    ASSERT_EQ(plan.size(), 1u);
    EXPECT_EQ(plan[0].kind, sb::ActionKind::INSTANTIATE);
    EXPECT_EQ(plan[0].blueprint_type, "Free5GC");
}

TEST(SbPlanner, ReusesCoveringInstanceOfSameTenant)
{
    SliceRequest r;
    r.tenant_id = "acme";
    r.slice_type = "Free5GC";
    r.coverage_areas = {1};
    std::vector<sb::LiveInstance> live{{"bp-9", "Free5GC", "acme", {1, 2}}, {"bp-3", "Free5GC", "other", {1}}};
    auto plan = sb::plan_slice(r, {}, live, {1});
    ASSERT_EQ(plan.size(), 1u);
    EXPECT_EQ(plan[0].kind, sb::ActionKind::UPDATE);
    EXPECT_EQ(plan[0].target_instance, "bp-9");
}

TEST(SbPlanner, RanSliceBringsItsCore)
{
    SliceRequest r;
    r.tenant_id = "acme";
    r.slice_type = "UERANSIM";
    r.coverage_areas = {1};
    auto plan = sb::plan_slice(r, {}, {}, {1});
    ASSERT_EQ(plan.size(), 2u);
    EXPECT_EQ(plan[1].blueprint_type, "UERANSIM");
    EXPECT_EQ(plan[0].kind, sb::ActionKind::INSTANTIATE);
}

TEST(SbPlanner, DisabledLayerRefuses)
{
    SliceRequest r;
    r.tenant_id = "acme";
    r.slice_type = "K8s";
    r.coverage_areas = {1};
    sb::ProgrammabilityProfile p;
    p.layers_enabled = {"metal", "iaas"};
    try
    {
        sb::plan_slice(r, p, {}, {1});
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), Errc::LayerDisabled);
    }
}

TEST(SbProfile, RejectsMissingDependency)
{
    Env env;
    EXPECT_EQ(env.call("PUT", "/sb/profile", {{"layers_enabled", {"nfv"}}}).body["error"], "InvalidProfile");
    EXPECT_EQ(env.call("PUT", "/sb/profile", {{"layers_enabled", {"metal", "warp"}}}).body["error"], "InvalidProfile");
    EXPECT_EQ(env.call("PUT", "/sb/profile", {{"layers_enabled", {"metal", "iaas"}}}).status, 200);
}

TEST(SbSlice, ActivatesAndDeinstantiates)
{
    Env env;
    domain(env);
    auto s = env.call("POST", "/sb/slices", slice_body("Free5GC", {1, 2}), "acme");
    ASSERT_EQ(s.status, 201) << s.body;
    env.gw.settle();
    EXPECT_EQ(sb_state(env, s.body), "ACTIVE");
    auto rec = env.call("GET", "/sb/slices/" + s.body["slice_id"].get<std::string>()).body;
    ASSERT_EQ(rec["bindings"].size(), 1u);
    auto bp = rec["bindings"][0]["blueprint_instance_id"].get<std::string>();
    EXPECT_EQ(env.gw.engine().get(bp).tenant_id, "acme");
    EXPECT_NE(tenancy::usage(env.store, "acme").blueprints, ResourceBudget{});
    env.call("DELETE", "/sb/slices/" + s.body["slice_id"].get<std::string>(), nullptr, "acme");
    env.gw.settle();
    EXPECT_EQ(sb_state(env, s.body), "TERMINATED");
    EXPECT_EQ(env.gw.engine().get(bp).state, nfvcl::InstanceState::DESTROYED);
    EXPECT_EQ(tenancy::usage(env.store, "acme").blueprints, ResourceBudget{});
}

TEST(SbSlice, SecondSliceSharesTheInstance)
{
    Env env;
    domain(env);
    auto a = env.call("POST", "/sb/slices", slice_body("Free5GC", {1, 2}), "acme");
    env.gw.settle();
    auto b = env.call("POST", "/sb/slices", slice_body("Free5GC", {2}), "acme");
    env.gw.settle();
    EXPECT_EQ(sb_state(env, b.body), "ACTIVE");
    auto ra = env.call("GET", "/sb/slices/" + a.body["slice_id"].get<std::string>()).body;
    auto rb = env.call("GET", "/sb/slices/" + b.body["slice_id"].get<std::string>()).body;
    auto bp = ra["bindings"][0]["blueprint_instance_id"];
    EXPECT_EQ(rb["bindings"][0]["blueprint_instance_id"], bp);
    EXPECT_EQ(env.gw.engine().get(bp).attached_slices.size(), 2u);

    // Dropping one slice keeps the shared instance for the other.
    env.call("DELETE", "/sb/slices/" + a.body["slice_id"].get<std::string>(), nullptr, "acme");
    env.gw.settle();
    EXPECT_EQ(env.gw.engine().get(bp).state, nfvcl::InstanceState::READY);
    EXPECT_EQ(env.gw.engine().get(bp).attached_slices.size(), 1u);
}

TEST(SbSlice, LaterFailureCompensatesEarlierActions)
{
    Env env;
    domain(env);
    auto s = env.call("POST", "/sb/slices", slice_body("UERANSIM", {1}), "acme");
    ASSERT_EQ(s.status, 201) << s.body;
    // Let the core come up, then make the RAN instantiation fail.
    ASSERT_TRUE(oss::test::advance_until(env.gw, [&] {
        auto all = env.gw.engine().list(tenancy::kOperatorTenant);
        return !all.empty() && all[0].state == nfvcl::InstanceState::READY;
    }, 1));
    env.call("POST", "/sim/faults", {{"faults", {{{"transition", "ns.instantiate"}, {"effect", "fail"}}}}});
    env.gw.settle();
    EXPECT_EQ(env.gw.engine().list(tenancy::kOperatorTenant).size(), 2u);
    EXPECT_EQ(sb_state(env, s.body), "FAILED");
    for (const auto& bp : env.gw.engine().list(tenancy::kOperatorTenant))
        EXPECT_TRUE(bp.state == nfvcl::InstanceState::DESTROYED || bp.state == nfvcl::InstanceState::ERROR)
            << bp.instance_id << " " << nfvcl::to_string(bp.state);
    EXPECT_EQ(tenancy::usage(env.store, "acme").blueprints, ResourceBudget{});
}

TEST(SbSlice, QuotaGateRejectsUpFront)
{
    Env env;
    oss::test::area_topology(env, {1});
    env.call("POST", "/tenants", {{"id", "tiny"}, {"quota", {{"vcpus", 2}, {"ram_gb", 2}, {"storage_gb", 2}}}});
    auto s = env.call("POST", "/sb/slices", slice_body("Free5GC", {1}), "tiny");
    EXPECT_EQ(s.status, 409);
    EXPECT_EQ(s.body["error"], "QuotaExceeded");
    EXPECT_TRUE(env.call("GET", "/nfvcl/blueprints").body.empty());
}

TEST(NbOnboard, Examples)
{
    Env env;
    json meta{{"areas_served", {1, 2}}, {"capabilities", {"nfv"}}};
    auto ok = env.call("POST", "/nb/sboss", {{"endpoint", "http://sb.example:8080"}, {"metadata", meta}});
    EXPECT_EQ(ok.status, 201);
    EXPECT_EQ(ok.body["status"], "ONBOARDED");
    EXPECT_EQ(env.call("POST", "/nb/sboss", {{"endpoint", "http://sb.example:8080"}, {"metadata", meta}}).body["error"],
              "DuplicateEndpoint");
    EXPECT_EQ(env.call("POST", "/nb/sboss", {{"endpoint", "ftp://x"}, {"metadata", meta}}).body["error"], "InvalidUri");
    EXPECT_EQ(env.call("POST", "/nb/sboss",
                       {{"endpoint", "http://y"}, {"metadata", {{"areas_served", json::array()}, {"capabilities", {"nfv"}}}}})
                  .body["error"],
              "EmptyAreaSet");
    EXPECT_EQ(env.call("GET", "/nb/sboss").body.size(), 1u);
}

TEST(NbRouting, SmallestCoverThenLowestIds)
{
    auto rec = [](std::string id, AreaSet a) {
        nb::SbossRecord r;
        r.sboss_id = id;
        r.endpoint = "local://" + id;
        r.metadata = {a, {"nfv"}};
        return r;
    };
    SliceRequest req;
    req.request_id = "q";
    req.coverage_areas = {1, 2, 3};
    auto plan = nb::route_slice_request(req, {rec("a", {1}), rec("b", {2, 3}), rec("c", {1, 2, 3}), rec("d", {1, 2, 3})});
    ASSERT_EQ(plan.assignments.size(), 1u);
    EXPECT_EQ(plan.assignments[0].sboss_id, "c");
    EXPECT_EQ(plan.assignments[0].sub_request.request_id, "q/c");
    plan = nb::route_slice_request(req, {rec("a", {1, 2}), rec("b", {2, 3})});
    ASSERT_EQ(plan.assignments.size(), 2u);
    EXPECT_EQ(plan.assignments[0].sub_request.coverage_areas, (AreaSet{1, 2}));
    EXPECT_EQ(plan.assignments[1].sub_request.coverage_areas, (AreaSet{3}));
    try
    {
        nb::route_slice_request(req, {rec("a", {1})});
        FAIL();
    }
    catch (const Error& e)
    {
        EXPECT_EQ(e.code(), Errc::NoCoverage);
        EXPECT_EQ(e.detail()["areas"], json::array({2, 3}));
    }
}

TEST(NbAggregate, Verdicts)
{
    nb::NegotiationState s;
    s.replies = {{"a", nb::Reply::READY}, {"b", nb::Reply::PENDING}};
    EXPECT_EQ(nb::aggregate_replies(s), nb::Verdict::still_pending);
    s.replies["b"] = nb::Reply::READY;
    EXPECT_EQ(nb::aggregate_replies(s), nb::Verdict::all_ready);
    s.replies["a"] = nb::Reply::FAILED;
    EXPECT_EQ(nb::aggregate_replies(s), nb::Verdict::failed);
}

TEST(NbSlice, NoCoverageCreatesNothing)
{
    Env env;
    domain(env);
    env.call("POST", "/nb/sboss", {{"endpoint", gateway::kLocalSbEndpoint},
                                   {"metadata", {{"areas_served", {1}}, {"capabilities", {"nfv"}}}}});
    auto r = env.call("POST", "/nb/slices", slice_body("Free5GC", {1, 2}), "acme");
    EXPECT_EQ(r.status, 409);
    EXPECT_EQ(r.body["error"], "NoCoverage");
    EXPECT_TRUE(env.call("GET", "/nb/slices").body.empty());
}

TEST(NbSlice, ValidationReportsAll)
{
    Env env;
    domain(env);
    auto r = env.call("POST", "/nb/slices", slice_body("Nope", {9}), "ghost");
    EXPECT_EQ(r.status, 400);
    EXPECT_GE(r.body["detail"]["violations"].size(), 2u);
}

TEST(NbSlice, SubDomainFailureRollsBack)
{
    Env env;
    domain(env);
    env.call("POST", "/nb/sboss", {{"endpoint", gateway::kLocalSbEndpoint},
                                   {"metadata", {{"areas_served", {1, 2, 3}}, {"capabilities", {"nfv"}}}}});
    env.call("POST", "/sim/faults", {{"faults", {{{"transition", "ns.instantiate"}, {"effect", "fail"}}}}});
    auto r = env.call("POST", "/nb/slices", slice_body("Free5GC", {1}), "acme");
    ASSERT_EQ(r.status, 201) << r.body;
    env.gw.settle();
    auto s = env.call("GET", "/nb/slices/" + r.body["slice_id"].get<std::string>(), nullptr, "acme").body;
    EXPECT_EQ(s["state"], "FAILED");
    EXPECT_TRUE(s["rollback_issued"].get<bool>());
    EXPECT_EQ(tenancy::usage(env.store, "acme").blueprints, ResourceBudget{});
}

TEST(NbSlice, QuotaRefusalInDomainRollsBack)
{
    Env env;
    oss::test::area_topology(env, {1});
    env.call("POST", "/tenants", {{"id", "tiny"}, {"quota", {{"vcpus", 2}, {"ram_gb", 2}, {"storage_gb", 2}}}});
    env.call("POST", "/nb/sboss", {{"endpoint", gateway::kLocalSbEndpoint},
                                   {"metadata", {{"areas_served", {1}}, {"capabilities", {"nfv"}}}}});
    auto r = env.call("POST", "/nb/slices", slice_body("Free5GC", {1}), "tiny");
    ASSERT_EQ(r.status, 201) << r.body;
    EXPECT_EQ(r.body["state"], "FAILED");
    EXPECT_NE(r.body["error"].get<std::string>().find("QuotaExceeded"), std::string::npos);
}

TEST(NbSlice, ModifyAndTenantScoping)
{
    Env env;
    domain(env);
    env.call("POST", "/tenants", {{"id", "other"}, {"quota", {{"vcpus", 10}, {"ram_gb", 10}, {"storage_gb", 10}}}});
    env.call("POST", "/nb/sboss", {{"endpoint", gateway::kLocalSbEndpoint},
                                   {"metadata", {{"areas_served", {1, 2, 3}}, {"capabilities", {"nfv"}}}}});
    auto r = env.call("POST", "/nb/slices", slice_body("Free5GC", {1}), "acme");
    auto id = r.body["slice_id"].get<std::string>();
    EXPECT_EQ(env.call("PUT", "/nb/slices/" + id, {{"coverage_areas", {1, 2}}}, "acme").body["error"], "InvalidState");
    env.gw.settle();
    EXPECT_EQ(env.call("GET", "/nb/slices/" + id, nullptr, "other").status, 404);
    EXPECT_EQ(env.call("DELETE", "/nb/slices/" + id, nullptr, "other").status, 404);
    auto m = env.call("PUT", "/nb/slices/" + id, {{"coverage_areas", {1, 2}}}, "acme");
    EXPECT_EQ(m.status, 202) << m.body;
    EXPECT_EQ(m.body["state"], "UPDATING");
    env.gw.settle();
    auto s = env.call("GET", "/nb/slices/" + id, nullptr, "acme").body;
    EXPECT_EQ(s["state"], "ACTIVE");
    EXPECT_EQ(s["request"]["coverage_areas"], json::array({1, 2}));
    EXPECT_EQ(env.call("PUT", "/nb/slices/" + id, {{"coverage_areas", {2}}}, "acme").body["error"], "InvalidDelta");
}
