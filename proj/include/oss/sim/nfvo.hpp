#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oss/nfvcl/descriptors.hpp"
#include "simulator.hpp"
#include "vim.hpp"

namespace oss::sim
{

enum class NsState
{
    NOT_INSTANTIATED,
    INSTANTIATING,
    INSTANTIATED,
    TERMINATING,
    TERMINATED,
    FAILED
};

bool ns_transition_allowed(NsState from, NsState to);
std::string to_string(NsState s);

struct NsInstance
{
    std::string ns_id;
    std::string nsd_id;
    std::string package_id;
    std::string owner;
    AreaId area = 0;
    std::optional<std::string> vim_id;
    std::optional<std::string> cluster_id;
    NsState state = NsState::NOT_INSTANTIATED;
    /// "<vnfd>/<vdu>" -> running instance count
    std::map<std::string, int> vdu_counts;
    std::vector<std::string> vms;
    std::vector<std::string> networks;
    std::vector<StateStamp> history;
};

struct NsPlacement
{
    std::optional<std::string> vim_id;
    std::optional<std::string> cluster_id;
    std::vector<std::string> networks;
};

/// Completion notice published after a scheduled NFVO operation settles.
struct NfvoNotice
{
    std::string ns_id;
    std::string what;  // instantiated | failed | terminated | scaled | scale_failed
    std::string tag;
};

/// Stand-in NFV orchestrator: content-addressed package catalog and
/// asynchronous NS lifecycle (instantiate/scale/terminate) driven by sim time.
class Nfvo
{
public:
    Nfvo(Simulator& sim, Vim& vim);

    struct Onboarded
    {
        std::string package_id;
        bool created = false;
    };

    /// Idempotent by content hash. Dangling references yield InvalidPackage.
    Onboarded onboard(const nfvcl::Package& package);
    std::size_t package_count() const;
    std::optional<nfvcl::Package> package_for_nsd(const std::string& nsd_id) const;

    /// Starts INSTANTIATING; completion after the configured delay. UnknownNsd
    /// when no package carries the NSD.
    std::string instantiate(const std::string& nsd_id, const std::string& owner, const NsPlacement& placement);
    /// Changes the running count of one VDU by `delta` (scale-out/in) without
    /// touching the NS identity.
    void scale(const std::string& ns_id, const std::string& vnfd, const std::string& vdu, int delta,
               const std::string& tag);
    void terminate(const std::string& ns_id);

    NsInstance ns(const std::string& ns_id) const;
    std::vector<NsInstance> all() const;

    void subscribe(std::function<void(const NfvoNotice&)> listener) { listeners_.push_back(std::move(listener)); }

private:
    void on_instantiate(const ScheduledEvent& e);
    void on_scale(const ScheduledEvent& e);
    void on_terminate(const ScheduledEvent& e);
    void move(NsInstance& ns, NsState to);
    void notify(const NfvoNotice& notice);
    std::vector<std::string> boot_vdus(const NsInstance& ns, const nfvcl::Package& pkg, const std::string& vnfd,
                                       const std::string& vdu, int from, int to);

    Simulator& sim_;
    Vim& vim_;
    std::vector<std::function<void(const NfvoNotice&)>> listeners_;
};

/// Stand-in VNF managers. A uniform FlexCharm-style manager applies YAML
/// playbook bundles to VNFs/PNFs; a Helm-style manager applies chart values to
/// KNFs. Both complete asynchronously.
class Vnfm
{
public:
    explicit Vnfm(Simulator& sim);

    void apply(const std::string& bundle_id, const std::string& target, const std::string& manager,
               const std::vector<std::string>& subjects);

    void subscribe(std::function<void(const std::string& bundle_id, bool ok)> listener)
    {
        listeners_.push_back(std::move(listener));
    }

private:
    Simulator& sim_;
    std::vector<std::function<void(const std::string&, bool)>> listeners_;
};

NLOHMANN_JSON_SERIALIZE_ENUM(NsState, {{NsState::NOT_INSTANTIATED, "NOT_INSTANTIATED"},
                                       {NsState::INSTANTIATING, "INSTANTIATING"},
                                       {NsState::INSTANTIATED, "INSTANTIATED"},
                                       {NsState::TERMINATING, "TERMINATING"},
                                       {NsState::TERMINATED, "TERMINATED"},
                                       {NsState::FAILED, "FAILED"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(NsInstance, ns_id, nsd_id, package_id, owner, area, vim_id,
                                                cluster_id, state, vdu_counts, vms, networks, history)

} // namespace oss::sim
