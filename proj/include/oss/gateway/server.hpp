#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "gateway.hpp"

namespace oss::gateway
{

struct ServeOptions
{
    std::string host = "127.0.0.1";
    int port = 8080;
    /// When positive, a background ticker advances one sim-second per this
    /// many wall milliseconds.
    double realtime_ms_per_sim_second = 0;
};

/// HTTP front end over a Gateway. Headers: X-Tenant-Id, Idempotency-Key.
class Server
{
public:
    Server(Gateway& gateway, ServeOptions options);
    ~Server();

    /// Binds and serves on a background thread; returns the bound port.
    int start();
    /// Blocks until stop() is called from another thread or a signal.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace oss::gateway
