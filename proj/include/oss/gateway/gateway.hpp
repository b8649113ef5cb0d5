#pragma once

#include <mutex>
#include <string>

#include "oss/metal/metal.hpp"
#include "oss/nb/nb.hpp"
#include "oss/nfvcl/engine.hpp"
#include "oss/sb/sb.hpp"
#include "oss/sim/fabric.hpp"
#include "oss/sim/nfvo.hpp"
#include "oss/sim/vim.hpp"
#include "router.hpp"

namespace oss::gateway
{

/// All services of one OSS deployment over a single store, plus the REST
/// route table. Every durable fact lives in the store; a new Gateway over the
/// same store picks up where the previous one stopped.
class Gateway
{
public:
    explicit Gateway(DocumentStore& store, sim::SimConfig config = {});

    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Serialized entry point used by the HTTP server, the CLI and tests.
    /// Replays the stored response when a mutating request repeats an
    /// Idempotency-Key.
    Response handle(const Request& request);
    Response call(const std::string& method, const std::string& path, const json& body = nullptr,
                  const std::string& tenant = {});

    /// Advances the clock, then lets SB and NB observe the outcome.
    json advance(double dt);
    json settle(double limit = 1e7);

    Router& router() { return router_; }
    json api_description() const { return router_.describe(); }

    DocumentStore& store() { return store_; }
    sim::Simulator& sim() { return sim_; }
    sim::Vim& vim() { return vim_; }
    sim::Nfvo& nfvo() { return nfvo_; }
    sim::Fabric& fabric() { return fabric_; }
    nfvcl::Topology& topology() { return topology_; }
    nfvcl::Engine& engine() { return engine_; }
    metal::Metal& metal() { return metal_; }
    sb::SbCore& sb() { return sb_; }
    nb::NbCore& nb() { return nb_; }

private:
    void build_routes();
    void reconcile();
    Response local_call(const std::string& method, const std::string& path, const json& body,
                        const std::string& tenant);

    DocumentStore& store_;
    sim::Simulator sim_;
    sim::Vim vim_;
    sim::Nfvo nfvo_;
    sim::Vnfm vnfm_;
    sim::Fabric fabric_;
    nfvcl::Topology topology_;
    nfvcl::Engine engine_;
    metal::Metal metal_;
    sb::SbCore sb_;
    nb::NbCore nb_;
    Router router_;
    std::recursive_mutex mutex_;
};

/// Name under which the in-process SB core is reachable for NB onboarding.
inline constexpr const char* kLocalSbEndpoint = "local://sb";

} // namespace oss::gateway
