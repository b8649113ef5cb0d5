#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "oss/core/errors.hpp"
#include "oss/core/json.hpp"
#include "oss/core/types.hpp"

// SOL006-lite: a self-contained structural subset of the ETSI descriptor
// model. Ids, VDUs with flavors, connection points, virtual links and a
// deployment flavour carrying per-VDU instance counts.

namespace oss::nfvcl
{

enum class NfKind
{
    VNF,
    KNF,
    PNF
};

struct Vdu
{
    std::string name;
    std::int64_t vcpus = 0;
    std::int64_t ram_gb = 0;
    std::int64_t storage_gb = 0;
    std::string image;

    ResourceBudget flavor() const { return {vcpus, ram_gb, storage_gb}; }
    bool operator==(const Vdu&) const = default;
};

struct VnfDescriptor
{
    std::string vnfd_id;
    NfKind kind = NfKind::VNF;
    std::vector<Vdu> vdus;
    std::vector<std::string> connection_points;
    std::optional<std::string> chart_ref;   // KNF
    json default_values = json::object();   // KNF
    std::optional<std::string> device_ref;  // PNF
    ResourceBudget kdu_resources;           // KNF resource requests

    bool operator==(const VnfDescriptor&) const = default;
};

struct VirtualLink
{
    std::string name;
    std::string network;

    bool operator==(const VirtualLink&) const = default;
};

struct VduProfile
{
    std::string vnfd_ref;
    std::string vdu;
    int instances = 1;

    bool operator==(const VduProfile&) const = default;
};

struct NsDescriptor
{
    std::string nsd_id;
    std::string name;
    std::vector<std::string> vnfd_refs;
    std::vector<VirtualLink> virtual_links;
    AreaId area_id = 0;
    std::vector<VduProfile> deployment_flavour;

    bool operator==(const NsDescriptor&) const = default;
};

/// NSD plus every VNFD it references: the unit onboarded to the NFVO.
struct Package
{
    NsDescriptor nsd;
    std::vector<VnfDescriptor> vnfds;

    const VnfDescriptor* find_vnfd(const std::string& id) const;
    int instances_of(const std::string& vnfd, const std::string& vdu) const;
    /// Sum of VDU flavors times instance counts, plus KNF resource requests.
    ResourceBudget declared_compute() const;
    std::string content_hash() const;
};

/// Per-descriptor structural rules (VNF has VDUs, PNF has a device, unique
/// connection points).
std::vector<Violation> validate_vnfd(const VnfDescriptor& vnfd);

/// Reference validation: every vnfd_ref resolves inside the package and every
/// virtual link names a network accepted by `network_exists`. Throws
/// DanglingVnfdRef / DanglingLinkRef / InvalidPackage.
void validate_package(const Package& package, const std::function<bool(const std::string&)>& network_exists);

NLOHMANN_JSON_SERIALIZE_ENUM(NfKind, {{NfKind::VNF, "VNF"}, {NfKind::KNF, "KNF"}, {NfKind::PNF, "PNF"}})
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Vdu, name, vcpus, ram_gb, storage_gb, image)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VnfDescriptor, vnfd_id, kind, vdus, connection_points, chart_ref,
                                                default_values, device_ref, kdu_resources)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VirtualLink, name, network)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(VduProfile, vnfd_ref, vdu, instances)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(NsDescriptor, nsd_id, name, vnfd_refs, virtual_links, area_id,
                                                deployment_flavour)
NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Package, nsd, vnfds)

} // namespace oss::nfvcl
