#include "oss/core/errors.hpp"

namespace oss
{

std::string_view to_string(Errc code) noexcept
{
    switch (code)
    {
    case Errc::BadRequest: return "BadRequest";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::UnknownTenant: return "UnknownTenant";
    case Errc::UnknownSliceType: return "UnknownSliceType";
    case Errc::EmptyCoverage: return "EmptyCoverage";
    case Errc::UnknownArea: return "UnknownArea";
    case Errc::NegativeBudget: return "NegativeBudget";
    case Errc::InvalidUri: return "InvalidUri";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::NotFound: return "NotFound";
    case Errc::UnknownDocument: return "UnknownDocument";
    case Errc::UnknownSlice: return "UnknownSlice";
    case Errc::UnknownInstance: return "UnknownInstance";
    case Errc::UnknownBlueprintType: return "UnknownBlueprintType";
    case Errc::UnknownAction: return "UnknownAction";
    case Errc::UnknownOperation: return "UnknownOperation";
    case Errc::UnknownMachine: return "UnknownMachine";
    case Errc::UnknownImage: return "UnknownImage";
    case Errc::UnknownNsd: return "UnknownNsd";
    case Errc::UnknownNs: return "UnknownNs";
    case Errc::UnknownNetwork: return "UnknownNetwork";
    case Errc::UnknownOverlay: return "UnknownOverlay";
    case Errc::UnknownVim: return "UnknownVim";
    case Errc::RevisionConflict: return "RevisionConflict";
    case Errc::CasExhausted: return "CasExhausted";
    case Errc::InvalidState: return "InvalidState";
    case Errc::DuplicateEndpoint: return "DuplicateEndpoint";
    case Errc::DuplicateName: return "DuplicateName";
    case Errc::DuplicateTenant: return "DuplicateTenant";
    case Errc::EmptyAreaSet: return "EmptyAreaSet";
    case Errc::CidrOverlap: return "CidrOverlap";
    case Errc::VlanPoolExhausted: return "VlanPoolExhausted";
    case Errc::QuotaExceeded: return "QuotaExceeded";
    case Errc::SlicesStillAttached: return "SlicesStillAttached";
    case Errc::InstanceNotReady: return "InstanceNotReady";
    case Errc::InvalidDelta: return "InvalidDelta";
    case Errc::TenantMismatch: return "TenantMismatch";
    case Errc::RoutingChange: return "RoutingChange";
    case Errc::NoCoverage: return "NoCoverage";
    case Errc::LayerDisabled: return "LayerDisabled";
    case Errc::NoMatchingBlueprintType: return "NoMatchingBlueprintType";
    case Errc::TopologyMissing: return "TopologyMissing";
    case Errc::NoCoreArea: return "NoCoreArea";
    case Errc::MultipleCoreAreas: return "MultipleCoreAreas";
    case Errc::NoVimForArea: return "NoVimForArea";
    case Errc::NoClusterForArea: return "NoClusterForArea";
    case Errc::VlanExhausted: return "VlanExhausted";
    case Errc::NoFreeNic: return "NoFreeNic";
    case Errc::DisconnectedMembers: return "DisconnectedMembers";
    case Errc::MachineUnreachable: return "MachineUnreachable";
    case Errc::DanglingVnfdRef: return "DanglingVnfdRef";
    case Errc::DanglingLinkRef: return "DanglingLinkRef";
    case Errc::InvalidPackage: return "InvalidPackage";
    case Errc::BlueprintFailed: return "BlueprintFailed";
    case Errc::BundleApplyFailed: return "BundleApplyFailed";
    case Errc::ProbeFailed: return "ProbeFailed";
    case Errc::StepFailed: return "StepFailed";
    case Errc::PartialDiscovery: return "PartialDiscovery";
    case Errc::SwitchUnreachable: return "SwitchUnreachable";
    case Errc::MalformedInventory: return "MalformedInventory";
    case Errc::DanglingCable: return "DanglingCable";
    case Errc::SbossUnreachable: return "SbossUnreachable";
    }
    return "Unknown";
}

int http_status(Errc code) noexcept
{
    switch (code)
    {
    case Errc::BadRequest:
    case Errc::SchemaViolation:
    case Errc::UnknownTenant:
    case Errc::UnknownSliceType:
    case Errc::EmptyCoverage:
    case Errc::UnknownArea:
    case Errc::NegativeBudget:
    case Errc::InvalidUri:
    case Errc::InvalidProfile:
    case Errc::UnknownBlueprintType:
    case Errc::UnknownAction:
    case Errc::UnknownImage:
    case Errc::TopologyMissing:
    case Errc::NoCoreArea:
    case Errc::MultipleCoreAreas:
    case Errc::EmptyAreaSet:
    case Errc::InvalidDelta:
    case Errc::DanglingVnfdRef:
    case Errc::DanglingLinkRef:
    case Errc::InvalidPackage:
    case Errc::MalformedInventory:
    case Errc::DanglingCable:
    case Errc::NoMatchingBlueprintType:
        return 400;

    case Errc::NotFound:
    case Errc::UnknownDocument:
    case Errc::UnknownSlice:
    case Errc::UnknownInstance:
    case Errc::UnknownOperation:
    case Errc::UnknownMachine:
    case Errc::UnknownNsd:
    case Errc::UnknownNs:
    case Errc::UnknownNetwork:
    case Errc::UnknownOverlay:
    case Errc::UnknownVim:
        return 404;

    case Errc::SbossUnreachable:
    case Errc::SwitchUnreachable:
    case Errc::MachineUnreachable:
        return 503;

    case Errc::PartialDiscovery:
        return 206;

    default:
        return 409;
    }
}

Error::Error(Errc code, std::string message, nlohmann::json detail)
    : std::runtime_error(std::string(oss::to_string(code)) + ": " + message), code_(code),
      detail_(std::move(detail))
{
}

nlohmann::json Error::to_json() const
{
    nlohmann::json body = {{"error", std::string(oss::to_string(code_))}, {"message", what()}};
    if (!detail_.is_null())
        body["detail"] = detail_;
    return body;
}

void fail(Errc code, std::string message, nlohmann::json detail)
{
    throw Error(code, std::move(message), std::move(detail));
}

nlohmann::json to_json(const std::vector<Violation>& violations)
{
    auto out = nlohmann::json::array();
    for (const auto& v : violations)
        out.push_back({{"error", std::string(to_string(v.code))}, {"message", v.message}});
    return out;
}

} // namespace oss
