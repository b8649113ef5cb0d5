#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace oss
{

/// Every failure the control plane can report. The gateway maps each code to
/// one HTTP status (see http_status).
enum class Errc
{
    // request validation
    BadRequest,
    SchemaViolation,
    UnknownTenant,
    UnknownSliceType,
    EmptyCoverage,
    UnknownArea,
    NegativeBudget,
    InvalidUri,
    InvalidProfile,

    // lookups
    NotFound,
    UnknownDocument,
    UnknownSlice,
    UnknownInstance,
    UnknownBlueprintType,
    UnknownAction,
    UnknownOperation,
    UnknownMachine,
    UnknownImage,
    UnknownNsd,
    UnknownNs,
    UnknownNetwork,
    UnknownOverlay,
    UnknownVim,

    // conflicts
    RevisionConflict,
    CasExhausted,
    InvalidState,
    DuplicateEndpoint,
    DuplicateName,
    DuplicateTenant,
    EmptyAreaSet,
    CidrOverlap,
    VlanPoolExhausted,
    QuotaExceeded,
    SlicesStillAttached,
    InstanceNotReady,
    InvalidDelta,
    TenantMismatch,
    RoutingChange,

    // topology / placement
    NoCoverage,
    LayerDisabled,
    NoMatchingBlueprintType,
    TopologyMissing,
    NoCoreArea,
    MultipleCoreAreas,
    NoVimForArea,
    NoClusterForArea,
    VlanExhausted,
    NoFreeNic,
    DisconnectedMembers,
    MachineUnreachable,

    // descriptor packaging
    DanglingVnfdRef,
    DanglingLinkRef,
    InvalidPackage,

    // substrate / runtime failures
    BlueprintFailed,
    BundleApplyFailed,
    ProbeFailed,
    StepFailed,
    PartialDiscovery,
    SwitchUnreachable,
    MalformedInventory,
    DanglingCable,
    SbossUnreachable,
};

std::string_view to_string(Errc code) noexcept;
int http_status(Errc code) noexcept;

/// Exception carrying a typed code plus optional structured detail that is
/// surfaced verbatim in API error bodies.
class Error : public std::runtime_error
{
public:
    Error(Errc code, std::string message, nlohmann::json detail = nullptr);

    Errc code() const noexcept { return code_; }
    const nlohmann::json& detail() const noexcept { return detail_; }

    nlohmann::json to_json() const;

private:
    Errc code_;
    nlohmann::json detail_;
};

[[noreturn]] void fail(Errc code, std::string message, nlohmann::json detail = nullptr);

/// One entry in a complete violation list (validation reports all problems,
/// not only the first).
struct Violation
{
    Errc code;
    std::string message;

    bool operator==(const Violation&) const = default;
};

nlohmann::json to_json(const std::vector<Violation>& violations);

} // namespace oss
