#include "oss/nfvcl/descriptors.hpp"

#include <set>

namespace oss::nfvcl
{

const VnfDescriptor* Package::find_vnfd(const std::string& id) const
{
    for (const auto& v : vnfds)
        if (v.vnfd_id == id)
            return &v;
    return nullptr;
}

int Package::instances_of(const std::string& vnfd, const std::string& vdu) const
{
    for (const auto& p : nsd.deployment_flavour)
        if (p.vnfd_ref == vnfd && p.vdu == vdu)
            return p.instances;
    return 1;
}

ResourceBudget Package::declared_compute() const
{
    ResourceBudget total;
    for (const auto& ref : nsd.vnfd_refs)
    {
        const auto* vnfd = find_vnfd(ref);
        if (!vnfd)
            continue;
        for (const auto& vdu : vnfd->vdus)
            total += vdu.flavor() * instances_of(vnfd->vnfd_id, vdu.name);
        total += vnfd->kdu_resources;
    }
    return total;
}

std::string Package::content_hash() const { return oss::content_hash(json(*this)); }

std::vector<Violation> validate_vnfd(const VnfDescriptor& vnfd)
{
    std::vector<Violation> out;
    if (vnfd.vnfd_id.empty())
        out.push_back({Errc::InvalidPackage, "vnfd_id must not be empty"});
    switch (vnfd.kind)
    {
    case NfKind::VNF:
        if (vnfd.vdus.empty())
            out.push_back({Errc::InvalidPackage, vnfd.vnfd_id + ": a VNF needs at least one VDU"});
        break;
    case NfKind::KNF:
        if (!vnfd.chart_ref || vnfd.chart_ref->empty())
            out.push_back({Errc::InvalidPackage, vnfd.vnfd_id + ": a KNF needs a chart_ref"});
        break;
    case NfKind::PNF:
        if (!vnfd.vdus.empty())
            out.push_back({Errc::InvalidPackage, vnfd.vnfd_id + ": a PNF has no VDUs"});
        if (!vnfd.device_ref || vnfd.device_ref->empty())
            out.push_back({Errc::InvalidPackage, vnfd.vnfd_id + ": a PNF needs a device_ref"});
        break;
    }
    std::set<std::string> cps;
    for (const auto& cp : vnfd.connection_points)
        if (!cps.insert(cp).second)
            out.push_back({Errc::InvalidPackage, vnfd.vnfd_id + ": duplicate connection point " + cp});
    std::set<std::string> vdus;
    for (const auto& vdu : vnfd.vdus)
        if (!vdus.insert(vdu.name).second)
            out.push_back({Errc::InvalidPackage, vnfd.vnfd_id + ": duplicate VDU " + vdu.name});
    return out;
}

void validate_package(const Package& package, const std::function<bool(const std::string&)>& network_exists)
{
    for (const auto& ref : package.nsd.vnfd_refs)
        if (!package.find_vnfd(ref))
            fail(Errc::DanglingVnfdRef, package.nsd.nsd_id + " references unknown VNFD '" + ref + "'");
    for (const auto& link : package.nsd.virtual_links)
        if (!network_exists(link.network))
            fail(Errc::DanglingLinkRef,
                 package.nsd.nsd_id + " virtual link '" + link.name + "' names unknown network '" + link.network + "'");
    for (const auto& profile : package.nsd.deployment_flavour)
    {
        const auto* vnfd = package.find_vnfd(profile.vnfd_ref);
        if (!vnfd)
            fail(Errc::DanglingVnfdRef, package.nsd.nsd_id + " flavour references unknown VNFD '" + profile.vnfd_ref + "'");
        bool found = false;
        for (const auto& vdu : vnfd->vdus)
            found = found || vdu.name == profile.vdu;
        if (!found || profile.instances < 0)
            fail(Errc::InvalidPackage, package.nsd.nsd_id + " flavour names bad VDU '" + profile.vdu + "'");
    }
    for (const auto& vnfd : package.vnfds)
    {
        auto problems = validate_vnfd(vnfd);
        if (!problems.empty())
            fail(Errc::InvalidPackage, problems.front().message, {{"violations", to_json(problems)}});
    }
}

} // namespace oss::nfvcl
