#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <httplib.h>

#include "oss/gateway/gateway.hpp"
#include "oss/gateway/scenario.hpp"
#include "oss/gateway/server.hpp"
#include "oss/sim/fixtures.hpp"

#ifndef OSS_SCENARIO_DIR
#define OSS_SCENARIO_DIR "scenarios"
#endif

using namespace oss;
using gateway::Gateway;

namespace
{

struct Options
{
    std::string store = "oss-store";
    bool memory = false;
    std::string url;
    std::uint64_t seed = 0;
    int jitter = 0;
    std::string inventory;
    double realtime = 0;
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string tenant;
    std::string idempotency_key;
    std::string body;
    std::string query;
    bool quiet = false;
};

/// CRUD word for a route: list/get for reads, create/update/delete otherwise.
std::string verb_name(const gateway::ApiRoute& r)
{
    auto segs = gateway::split_path(r.path);
    std::string name;
    for (const auto& s : segs)
        if (s.front() != '{')
            name += (name.empty() ? "" : "-") + s;
    bool item = !segs.empty() && segs.back().front() == '{';
    if (r.method == "GET")
        return name + (item ? "-get" : "-list");
    if (r.method == "POST")
        return name + "-create";
    if (r.method == "PUT")
        return name + "-update";
    return name + "-delete";
}

json read_json_arg(const std::string& arg)
{
    if (arg.empty())
        return nullptr;
    std::string text = arg;
    if (arg.front() == '@')
    {
        std::ifstream in(arg.substr(1));
        if (!in)
            throw std::runtime_error("cannot read " + arg.substr(1));
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    return json::parse(text);
}

std::unique_ptr<DocumentStore> open_store(const Options& o)
{
    if (o.memory)
        return std::make_unique<MemoryStore>();
    return std::make_unique<FileStore>(o.store);
}

sim::SimConfig sim_config(const Options& o)
{
    sim::SimConfig c;
    c.seed = o.seed;
    c.jitter_max = o.jitter;
    return c;
}

void load_inventory(Gateway& g, const Options& o)
{
    if (o.inventory.empty() || g.fabric().inventory())
        return;
    json doc;
    if (auto f = sim::fixture(o.inventory))
        doc = *f;
    else
        doc = read_json_arg("@" + o.inventory);
    auto r = g.call("POST", "/sim/inventory", doc);
    if (r.status != 200)
        throw std::runtime_error("inventory rejected: " + r.body.dump());
}

int print(const gateway::Response& r)
{
    std::cout << r.body.dump(2) << "\n";
    return r.status >= 200 && r.status < 300 ? 0 : 1;
}

gateway::Response remote(const Options& o, const std::string& method, const std::string& path, const json& body)
{
    httplib::Client cli(o.url);
    cli.set_read_timeout(60);
    httplib::Headers h;
    if (!o.tenant.empty())
        h.emplace("X-Tenant-Id", o.tenant);
    if (!o.idempotency_key.empty())
        h.emplace("Idempotency-Key", o.idempotency_key);
    auto payload = body.is_null() ? std::string{} : body.dump();
    httplib::Result res;
    if (method == "GET")
        res = cli.Get(path, h);
    else if (method == "POST")
        res = cli.Post(path, h, payload, "application/json");
    else if (method == "PUT")
        res = cli.Put(path, h, payload, "application/json");
    else
        res = cli.Delete(path, h);
    if (!res)
        throw std::runtime_error("cannot reach " + o.url);
    return {res->status, json::parse(res->body, nullptr, false)};
}

int call_route(const Options& o, const std::string& method, std::string path, const json& body)
{
    if (!o.query.empty())
        path += "?" + o.query;
    if (!o.url.empty())
        return print(remote(o, method, path, body));
    auto store = open_store(o);
    Gateway g(*store, sim_config(o));
    load_inventory(g, o);
    gateway::Request r;
    r.method = method;
    auto q = path.find('?');
    r.path = path.substr(0, q);
    if (q != std::string::npos)
    {
        auto rest = path.substr(q + 1);
        for (std::size_t i = 0; i <= rest.size();)
        {
            auto amp = std::min(rest.find('&', i), rest.size());
            auto part = rest.substr(i, amp - i);
            auto eq = part.find('=');
            if (!part.empty())
                r.query[part.substr(0, eq)] = eq == std::string::npos ? "" : part.substr(eq + 1);
            i = amp + 1;
        }
    }
    r.body = body;
    r.tenant = o.tenant;
    r.idempotency_key = o.idempotency_key;
    return print(g.handle(r));
}

int run_file(const Options& o, const std::string& file, bool verbose, double realtime)
{
    std::ifstream in(file);
    if (!in)
    {
        std::cerr << "cannot read " << file << "\n";
        return 2;
    }
    auto steps = gateway::parse_scenario(in);
    auto store = open_store(o);
    Gateway g(*store, sim_config(o));
    load_inventory(g, o);
    gateway::RunOptions ro;
    ro.realtime_ms_per_sim_second = realtime;
    ro.on_step = [&](const gateway::StepReport& s) {
        if (o.quiet)
            return;
        std::cout << (s.ok ? "ok   " : "FAIL ") << s.index << " " << s.kind;
        if (s.detail.contains("call"))
            std::cout << " " << s.detail["call"].get<std::string>() << " -> " << s.detail["status"];
        else if (s.detail.contains("path"))
            std::cout << " " << s.detail["path"].get<std::string>() << s.detail["at"].get<std::string>() << " = "
                      << s.detail["actual"].dump();
        std::cout << "\n";
        if (verbose || !s.ok)
            std::cout << s.detail.dump(2) << "\n";
    };
    auto report = gateway::run_scenario(g, steps, ro);
    if (report.ok())
        std::cout << "passed " << report.steps.size() << " steps, log hash " << report.log_hash << "\n";
    else
        std::cout << report.error << "\n";
    return report.ok() ? 0 : 1;
}

gateway::Server* g_server = nullptr;

} // namespace

int main(int argc, char** argv)
{
    Options o;
    CLI::App app{"Operate the OSS: serve the REST gateway, call routes, run scenarios."};
    app.require_subcommand(1);
    auto* store_opt = app.add_option("--store", o.store, "Store directory")->envname("OSS_STORE");
    app.add_flag("--memory", o.memory, "Use a throwaway in-memory store");
    app.add_option("--url", o.url, "Call a running gateway instead of the local store")->envname("OSS_URL");
    app.add_option("--seed", o.seed, "Simulation seed")->envname("OSS_SEED");
    app.add_option("--jitter", o.jitter, "Max seed-derived jitter per delay, sim-seconds");
    app.add_option("--inventory", o.inventory, "Inventory file or fixture name")->envname("OSS_INVENTORY");
    app.add_option("--realtime", o.realtime, "Wall milliseconds per sim-second (0 = virtual time)")
        ->envname("OSS_REALTIME");
    app.add_option("--tenant", o.tenant, "X-Tenant-Id for calls")->envname("OSS_TENANT");
    app.add_option("--idempotency-key", o.idempotency_key, "Idempotency-Key for mutating calls");
    app.add_flag("-q,--quiet", o.quiet, "Only print the summary");

    auto* serve = app.add_subcommand("serve", "Run the HTTP gateway");
    serve->add_option("--port", o.port, "Listen port")->envname("OSS_PORT");
    serve->add_option("--host", o.host, "Listen address");

    std::string file;
    bool verbose = false;
    auto* run = app.add_subcommand("run", "Run a scenario script and report each step");
    run->add_option("script", file, "JSON-lines scenario")->required();
    run->add_flag("-v,--verbose", verbose, "Print every response");
    auto* replay = app.add_subcommand("replay", "Replay a trace of API calls and advances");
    replay->add_option("trace", file, "JSON-lines trace")->required();
    auto* demo = app.add_subcommand("demo", "Run the bundled e2e-layers scenario in real time");
    double demo_ms = 20;
    demo->add_option("--ms-per-sim-second", demo_ms, "Pacing of the demo");
    auto* api = app.add_subcommand("api-description", "Print the machine-readable API description");
    std::string fixture_name;
    auto* fixture = app.add_subcommand("fixture", "Print a bundled inventory fixture");
    fixture->add_option("name", fixture_name, "dc-22 or minimal")->required();

    std::string raw_method, raw_path;
    auto* call = app.add_subcommand("call", "Call any route: call <VERB> <path>");
    call->add_option("method", raw_method)->required();
    call->add_option("path", raw_path)->required();
    call->add_option("--body", o.body, "JSON body or @file");

    // One subcommand per route; path captures are positional arguments.
    MemoryStore scratch;
    Gateway describe_only(scratch);
    struct RouteCmd
    {
        CLI::App* cmd;
        gateway::ApiRoute route;
        std::vector<std::string> args;
    };
    std::vector<std::unique_ptr<RouteCmd>> route_cmds;
    for (const auto& r : describe_only.router().routes())
    {
        auto rc = std::make_unique<RouteCmd>();
        rc->route = r;
        rc->cmd = app.add_subcommand(verb_name(r), r.method + " " + r.path + ": " + r.summary);
        for (const auto& seg : gateway::split_path(r.path))
            if (seg.front() == '{')
                rc->args.emplace_back();
        std::size_t k = 0;
        for (const auto& seg : gateway::split_path(r.path))
            if (seg.front() == '{')
                rc->cmd->add_option(seg.substr(1, seg.size() - 2), rc->args[k++])->required();
        if (r.method != "GET" && r.method != "DELETE")
            rc->cmd->add_option("--body", o.body, "JSON body or @file");
        rc->cmd->add_option("--query", o.query, "Query string, e.g. force=true");
        route_cmds.push_back(std::move(rc));
    }

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*serve)
        {
            auto store = open_store(o);
            Gateway g(*store, sim_config(o));
            load_inventory(g, o);
            gateway::Server server(g, {o.host, o.port, o.realtime});
            g_server = &server;
            std::signal(SIGINT, [](int) {
                if (g_server)
                    g_server->stop();
            });
            std::signal(SIGTERM, [](int) {
                if (g_server)
                    g_server->stop();
            });
            auto port = server.start();
            std::cerr << "listening on " << o.host << ":" << port << "\n";
            server.run();
            return 0;
        }
        if ((*run || *replay) && !store_opt->count())
            o.memory = true;
        if (*run)
            return run_file(o, file, verbose, o.realtime);
        if (*replay)
            return run_file(o, file, true, o.realtime);
        if (*demo)
        {
            o.memory = true;
            return run_file(o, std::string(OSS_SCENARIO_DIR) + "/e2e-layers.jsonl", false, demo_ms);
        }
        if (*api)
        {
            std::cout << describe_only.api_description().dump(2) << "\n";
            return 0;
        }
        if (*fixture)
        {
            auto f = sim::fixture(fixture_name);
            if (!f)
            {
                std::cerr << "unknown fixture " << fixture_name << "\n";
                return 2;
            }
            std::cout << f->dump(2) << "\n";
            return 0;
        }
        if (*call)
            return call_route(o, raw_method, raw_path, read_json_arg(o.body));
        for (const auto& rc : route_cmds)
        {
            if (!*rc->cmd)
                continue;
            std::string path;
            std::size_t k = 0;
            for (const auto& seg : gateway::split_path(rc->route.path))
                path += "/" + (seg.front() == '{' ? rc->args[k++] : seg);
            return call_route(o, rc->route.method, path, read_json_arg(o.body));
        }
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
