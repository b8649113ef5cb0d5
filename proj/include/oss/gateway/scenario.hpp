#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "gateway.hpp"

namespace oss::gateway
{

/// One JSON object per line. Step forms:
///   {"call": "POST /path", "body": {...}, "tenant": "t", "expect": 201, "save": {"var": "/json/pointer"}}
///   {"advance": 60}
///   {"settle": true}
///   {"assert": "GET /path", "at": "/pointer", "equals": <json>}
///   {"wait": "GET /path", "at": "/pointer", "equals": <json>, "step": 10, "max": 7200}
/// "${var}" inside strings is substituted; a string that is exactly "${var}"
/// becomes the saved JSON value.
struct ScenarioStep
{
    json spec;
};

std::vector<ScenarioStep> parse_scenario(std::istream& in);

struct StepReport
{
    std::size_t index = 0;
    std::string kind;
    bool ok = true;
    json detail;
};

struct ScenarioReport
{
    std::vector<StepReport> steps;
    std::optional<std::size_t> failed_step;
    std::string error;
    std::string log_hash;
    json vars = json::object();

    bool ok() const { return !failed_step; }
};

struct RunOptions
{
    /// Wall milliseconds slept per simulated second; 0 runs in virtual time.
    double realtime_ms_per_sim_second = 0;
    /// Called after each step, e.g. to print progress.
    std::function<void(const StepReport&)> on_step;
};

/// Runs steps in order and stops at the first failing one (StepFailed).
ScenarioReport run_scenario(Gateway& gateway, const std::vector<ScenarioStep>& steps, const RunOptions& options = {});

json report_to_json(const ScenarioReport& report);

} // namespace oss::gateway
