#include "oss/gateway/server.hpp"

#include <chrono>

#include <httplib.h>

namespace oss::gateway
{

struct Server::Impl
{
    Gateway& gateway;
    ServeOptions options;
    httplib::Server http;
    std::thread listener;
    std::thread ticker;
    std::atomic<bool> running{false};
    int port = 0;

    Impl(Gateway& g, ServeOptions o) : gateway(g), options(std::move(o)) {}

    void handle(const httplib::Request& req, httplib::Response& res)
    {
        Request r;
        r.method = req.method;
        r.path = req.path;
        for (const auto& [k, v] : req.params)
            r.query[k] = v;
        r.tenant = req.get_header_value("X-Tenant-Id");
        r.idempotency_key = req.get_header_value("Idempotency-Key");
        if (!req.body.empty())
        {
            r.body = json::parse(req.body, nullptr, false);
            if (r.body.is_discarded())
            {
                res.status = 400;
                res.set_content(json{{"error", "BadRequest"}, {"message", "body is not JSON"}}.dump(),
                                "application/json");
                return;
            }
        }
        auto out = gateway.handle(r);
        res.status = out.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(out.body.dump(), "application/json");
    }
};

Server::Server(Gateway& gateway, ServeOptions options) : impl_(std::make_unique<Impl>(gateway, std::move(options)))
{
    auto h = [this](const httplib::Request& req, httplib::Response& res) { impl_->handle(req, res); };
    impl_->http.Get(".*", h);
    impl_->http.Post(".*", h);
    impl_->http.Put(".*", h);
    impl_->http.Delete(".*", h);
    impl_->http.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Headers", "Content-Type, X-Tenant-Id, Idempotency-Key");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, DELETE");
        res.status = 204;
    });
}

Server::~Server() { stop(); }

int Server::start()
{
    auto& i = *impl_;
    if (i.options.port == 0)
        i.port = i.http.bind_to_any_port(i.options.host);
    else
        i.port = i.http.bind_to_port(i.options.host, i.options.port) ? i.options.port : -1;
    if (i.port < 0)
        fail(Errc::BadRequest, "cannot bind " + i.options.host + ":" + std::to_string(i.options.port));
    i.running = true;
    i.listener = std::thread([&i] { i.http.listen_after_bind(); });
    if (i.options.realtime_ms_per_sim_second > 0)
        i.ticker = std::thread([&i] {
            constexpr int kTickMs = 100;
            while (i.running)
            {
                std::this_thread::sleep_for(std::chrono::milliseconds(kTickMs));
                if (i.running)
                    i.gateway.advance(kTickMs / i.options.realtime_ms_per_sim_second);
            }
        });
    return i.port;
}

void Server::run()
{
    if (impl_->listener.joinable())
        impl_->listener.join();
}

void Server::stop()
{
    auto& i = *impl_;
    i.running = false;
    i.http.stop();
    if (i.listener.joinable())
        i.listener.join();
    if (i.ticker.joinable())
        i.ticker.join();
}

} // namespace oss::gateway
