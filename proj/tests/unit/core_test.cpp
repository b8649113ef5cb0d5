#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <thread>

#include "oss/core/store.hpp"
#include "oss/core/tenancy.hpp"
#include "oss/core/validation.hpp"

using namespace oss;

namespace
{

Errc code_of(const std::function<void()>& fn)
{
    try
    {
        fn();
    }
    catch (const Error& e)
    {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::BadRequest;
}

std::filesystem::path temp_dir(const std::string& tag)
{
    auto p = std::filesystem::temp_directory_path() / ("oss-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    return p;
}

} // namespace

TEST(Store, CasBumpsRevisionByOne)
{
    MemoryStore s;
    EXPECT_EQ(s.commit("c", "a", {{"v", 1}}, 0), 1u);
    EXPECT_EQ(s.commit("c", "a", {{"v", 2}}, 1), 2u);
    EXPECT_EQ(s.get("c", "a")->body["v"], 2);
}

TEST(Store, StaleRevisionConflictsAndLeavesDocument)
{
    MemoryStore s;
    s.commit("c", "a", {{"v", 1}}, 0);
    s.commit("c", "a", {{"v", 2}}, 1);
    EXPECT_EQ(code_of([&] { s.commit("c", "a", {{"v", 3}}, 1); }), Errc::RevisionConflict);
    EXPECT_EQ(code_of([&] { s.commit("c", "a", {{"v", 3}}, 0); }), Errc::RevisionConflict);
    EXPECT_EQ(s.get("c", "a")->revision, 2u);
    EXPECT_EQ(s.get("c", "a")->body["v"], 2);
}

TEST(Store, UpdatingAbsentIdIsUnknown)
{
    MemoryStore s;
    EXPECT_EQ(code_of([&] { s.commit("c", "zz", {{"v", 1}}, 4); }), Errc::UnknownDocument);
    EXPECT_FALSE(s.get("c", "zz"));
}

TEST(Store, ConcurrentUpdatesLoseNothing)
{
    MemoryStore s;
    s.commit("c", "n", {{"v", 0}}, 0);
    std::vector<std::thread> ts;
    for (int t = 0; t < 4; ++t)
        ts.emplace_back([&] {
            for (int i = 0; i < 100; ++i)
            {
                while (true)
                {
                    auto d = *s.get("c", "n");
                    try
                    {
                        s.commit("c", "n", {{"v", d.body["v"].get<int>() + 1}}, d.revision);
                        break;
                    }
                    catch (const Error&)
                    {
                    }
                }
            }
        });
    for (auto& t : ts)
        t.join();
    EXPECT_EQ(s.get("c", "n")->body["v"], 400);
    EXPECT_EQ(s.get("c", "n")->revision, 401u);
}

TEST(Store, ListIsOrderedById)
{
    MemoryStore s;
    for (auto id : {"b", "a", "c"})
        s.commit("c", id, json::object(), 0);
    auto l = s.list("c");
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[0].doc_id, "a");
    EXPECT_EQ(l[2].doc_id, "c");
}

TEST(Store, NextIdAndNaturalOrder)
{
    MemoryStore s;
    EXPECT_EQ(next_id(s, "bp"), "bp-1");
    EXPECT_EQ(next_id(s, "bp"), "bp-2");
    EXPECT_EQ(next_id(s, "m"), "m-1");
    EXPECT_TRUE(natural_less("vim-2", "vim-10"));
    EXPECT_FALSE(natural_less("vim-10", "vim-2"));
    EXPECT_TRUE(natural_less("a", "b"));
}

TEST(FileStore, SurvivesReopen)
{
    auto dir = temp_dir("fs");
    {
        FileStore s(dir);
        s.commit("things", "x", {{"k", "v"}}, 0);
        s.commit("things", "x", {{"k", "w"}}, 1);
    }
    FileStore s(dir);
    auto d = s.get("things", "x");
    ASSERT_TRUE(d);
    EXPECT_EQ(d->revision, 2u);
    EXPECT_EQ(d->body["k"], "w");
    EXPECT_EQ(code_of([&] { s.commit("things", "x", json::object(), 1); }), Errc::RevisionConflict);
    std::filesystem::remove_all(dir);
}

TEST(FileStore, SnapshotHashesMatchContent)
{
    auto dir = temp_dir("snap");
    FileStore s(dir);
    MemoryStore m;
    for (DocumentStore* st : {static_cast<DocumentStore*>(&s), static_cast<DocumentStore*>(&m)})
    {
        st->commit("a", "1", {{"x", 1}, {"y", {1, 2}}}, 0);
        st->commit("b", "2", "text", 0);
    }
    EXPECT_EQ(snapshot_hashes(s), snapshot_hashes(m));
    EXPECT_EQ(snapshot_hashes(s).size(), 2u);
    std::filesystem::remove_all(dir);
}

TEST(Quota, AdmitsExamples)
{
    ResourceBudget budget{100, 400, 1000};
    EXPECT_TRUE(quota_admits(budget, {60, 200, 500}, {40, 200, 500}));
    EXPECT_FALSE(quota_admits(budget, {60, 200, 500}, {41, 0, 0}));
    EXPECT_FALSE(quota_admits(budget, {0, 0, 0}, {0, 401, 0}));
    EXPECT_TRUE(quota_admits(budget, {0, 0, 0}, {0, 0, 0}));
}

TEST(Tenancy, ReserveRejectsAndKeepsUsage)
{
    MemoryStore s;
    tenancy::create_tenant(s, {"t", "", {10, 10, 10}});
    tenancy::reserve(s, "t", tenancy::Bucket::blueprints, {6, 6, 6});
    EXPECT_EQ(code_of([&] { tenancy::reserve(s, "t", tenancy::Bucket::machines, {5, 1, 1}); }),
              Errc::QuotaExceeded);
    EXPECT_EQ(tenancy::usage(s, "t").total(), (ResourceBudget{6, 6, 6}));
    tenancy::release(s, "t", tenancy::Bucket::blueprints, {6, 6, 6});
    EXPECT_EQ(tenancy::usage(s, "t").total(), ResourceBudget{});
}

TEST(Tenancy, VlanRangesAreDisjoint)
{
    MemoryStore s;
    std::vector<std::thread> ts;
    for (int i = 0; i < 8; ++i)
        ts.emplace_back([&, i] { tenancy::create_tenant(s, {"t" + std::to_string(i), "", {}, 50}); });
    for (auto& t : ts)
        t.join();
    auto all = tenancy::list_tenants(s);
    ASSERT_EQ(all.size(), 8u);
    for (std::size_t i = 0; i < all.size(); ++i)
    {
        EXPECT_EQ(all[i].vlan_range.last - all[i].vlan_range.first + 1, 50);
        EXPECT_GE(all[i].vlan_range.first, tenancy::kVlanPoolFirst);
        EXPECT_LE(all[i].vlan_range.last, tenancy::kVlanPoolLast);
        for (std::size_t j = i + 1; j < all.size(); ++j)
            EXPECT_FALSE(all[i].vlan_range.overlaps(all[j].vlan_range));
    }
}

TEST(Tenancy, PoolExhaustionAndDuplicates)
{
    MemoryStore s;
    tenancy::create_tenant(s, {"big", "", {}, 3800});
    EXPECT_EQ(code_of([&] { tenancy::create_tenant(s, {"more", "", {}, 200}); }), Errc::VlanPoolExhausted);
    EXPECT_EQ(code_of([&] { tenancy::create_tenant(s, {"big", "", {}, 1}); }), Errc::DuplicateTenant);
    tenancy::create_tenant(s, {"small", "", {}, 101});
    EXPECT_EQ(tenancy::require_tenant(s, "small").vlan_range, (VlanRange{3900, 4000}));
}

TEST(Validation, ReportsEveryViolation)
{
    SliceRequest r;
    r.tenant_id = "ghost";
    r.slice_type = "Nope";
    r.compute = {-1, 0, 0};
    auto check = validate_slice_request(r, {"acme"}, {"K8s"}, {1, 2});
    EXPECT_TRUE(check.has(Errc::UnknownTenant));
    EXPECT_TRUE(check.has(Errc::UnknownSliceType));
    EXPECT_TRUE(check.has(Errc::EmptyCoverage));
    EXPECT_TRUE(check.has(Errc::NegativeBudget));
    EXPECT_EQ(code_of([&] { require_valid(check); }), Errc::UnknownTenant);
}

TEST(Validation, UnknownAreaAndValid)
{
    SliceRequest r;
    r.tenant_id = "acme";
    r.slice_type = "K8s";
    r.coverage_areas = {1, 9};
    auto bad = validate_slice_request(r, {"acme"}, {"K8s"}, {1, 2});
    EXPECT_TRUE(bad.has(Errc::UnknownArea));
    EXPECT_EQ(bad.violations.size(), 1u);
    r.coverage_areas = {1, 2};
    EXPECT_TRUE(validate_slice_request(r, {"acme"}, {"K8s"}, {1, 2}).ok());
}

TEST(Errors, StatusMapping)
{
    EXPECT_EQ(http_status(Errc::UnknownSlice), 404);
    EXPECT_EQ(http_status(Errc::QuotaExceeded), 409);
    EXPECT_EQ(http_status(Errc::SchemaViolation), 400);
    Error e(Errc::NoCoverage, "x", {{"areas", {4}}});
    EXPECT_EQ(e.to_json()["error"], "NoCoverage");
    EXPECT_EQ(e.to_json()["detail"]["areas"][0], 4);
}
