#include "oss/gateway/scenario.hpp"

#include <chrono>
#include <regex>
#include <thread>

namespace oss::gateway
{

namespace
{

json substitute(const json& value, const json& vars)
{
    if (value.is_string())
    {
        static const std::regex whole(R"(^\$\{([A-Za-z0-9_.-]+)\}$)");
        static const std::regex part(R"(\$\{([A-Za-z0-9_.-]+)\})");
        const auto& s = value.get_ref<const std::string&>();
        std::smatch m;
        if (std::regex_match(s, m, whole))
        {
            if (!vars.contains(m[1].str()))
                fail(Errc::BadRequest, "unknown variable " + m[1].str());
            return vars.at(m[1].str());
        }
        std::string out;
        auto begin = s.cbegin();
        while (std::regex_search(begin, s.cend(), m, part))
        {
            out.append(begin, m[0].first);
            if (!vars.contains(m[1].str()))
                fail(Errc::BadRequest, "unknown variable " + m[1].str());
            const auto& v = vars.at(m[1].str());
            out += v.is_string() ? v.get<std::string>() : v.dump();
            begin = m[0].second;
        }
        out.append(begin, s.cend());
        return out;
    }
    if (value.is_object())
    {
        json out = json::object();
        for (const auto& [k, v] : value.items())
            out[k] = substitute(v, vars);
        return out;
    }
    if (value.is_array())
    {
        json out = json::array();
        for (const auto& v : value)
            out.push_back(substitute(v, vars));
        return out;
    }
    return value;
}

std::pair<std::string, std::string> split_call(const std::string& call)
{
    auto sp = call.find(' ');
    if (sp == std::string::npos)
        fail(Errc::BadRequest, "call must be '<VERB> <path>'");
    return {call.substr(0, sp), call.substr(sp + 1)};
}

json at_pointer(const json& body, const std::string& pointer)
{
    json::json_pointer p(pointer);
    if (!body.contains(p))
        return json{{"$missing", pointer}};
    return body.at(p);
}

void sleep_for_sim(const RunOptions& options, double dt)
{
    if (options.realtime_ms_per_sim_second > 0 && dt > 0)
        std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(dt * options.realtime_ms_per_sim_second));
}

} // namespace

std::vector<ScenarioStep> parse_scenario(std::istream& in)
{
    std::vector<ScenarioStep> steps;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line))
    {
        ++n;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        auto spec = json::parse(line, nullptr, false);
        if (spec.is_discarded() || !spec.is_object())
            fail(Errc::BadRequest, "scenario line " + std::to_string(n) + " is not a JSON object");
        steps.push_back({spec});
    }
    return steps;
}

ScenarioReport run_scenario(Gateway& gateway, const std::vector<ScenarioStep>& steps, const RunOptions& options)
{
    ScenarioReport report;
    for (std::size_t i = 0; i < steps.size(); ++i)
    {
        StepReport step{i, "", true, json::object()};
        try
        {
            const json& raw = steps[i].spec;
            if (raw.contains("call"))
            {
                step.kind = "call";
                auto spec = substitute(raw, report.vars);
                auto [method, path] = split_call(spec.at("call").get<std::string>());
                auto r = gateway.call(method, path, spec.value("body", json()), spec.value("tenant", std::string{}));
                step.detail = {{"call", spec.at("call")}, {"status", r.status}, {"body", r.body}};
                if (spec.contains("expect"))
                    step.ok = r.status == spec.at("expect").get<int>();
                else
                    step.ok = r.status >= 200 && r.status < 300;
                if (step.ok && spec.contains("save"))
                    for (const auto& [var, pointer] : spec.at("save").items())
                        report.vars[var] = at_pointer(r.body, pointer.get<std::string>());
            }
            else if (raw.contains("advance"))
            {
                step.kind = "advance";
                auto dt = raw.at("advance").get<double>();
                sleep_for_sim(options, dt);
                step.detail = gateway.advance(dt);
            }
            else if (raw.contains("settle"))
            {
                step.kind = "settle";
                auto before = gateway.sim().now();
                step.detail = gateway.settle();
                sleep_for_sim(options, gateway.sim().now() - before);
            }
            else if (raw.contains("assert") || raw.contains("wait"))
            {
                const bool wait = raw.contains("wait");
                step.kind = wait ? "wait" : "assert";
                auto spec = substitute(raw, report.vars);
                auto [method, path] = split_call(spec.at(step.kind).get<std::string>());
                auto pointer = spec.value("at", std::string{});
                auto expected = spec.at("equals");
                const double dt = spec.value("step", 10.0);
                const double max = spec.value("max", 7200.0);
                double waited = 0;
                while (true)
                {
                    auto r = gateway.call(method, path, nullptr, spec.value("tenant", std::string{}));
                    auto actual = at_pointer(r.body, pointer);
                    step.ok = actual == expected;
                    step.detail = {{"path", path}, {"at", pointer}, {"expected", expected}, {"actual", actual}};
                    if (step.ok || !wait || waited >= max)
                        break;
                    sleep_for_sim(options, dt);
                    gateway.advance(dt);
                    waited += dt;
                }
                if (wait)
                    step.detail["waited"] = waited;
            }
            else
            {
                fail(Errc::BadRequest, "step has no call, advance, settle, assert or wait");
            }
        }
        catch (const std::exception& e)
        {
            step.ok = false;
            step.detail["exception"] = e.what();
        }
        report.steps.push_back(step);
        if (options.on_step)
            options.on_step(step);
        if (!step.ok)
        {
            report.failed_step = i;
            report.error = "StepFailed: step " + std::to_string(i);
            break;
        }
    }
    report.log_hash = gateway.sim().log_hash();
    return report;
}

json report_to_json(const ScenarioReport& report)
{
    json steps = json::array();
    for (const auto& s : report.steps)
        steps.push_back({{"index", s.index}, {"kind", s.kind}, {"ok", s.ok}, {"detail", s.detail}});
    json out = {{"ok", report.ok()}, {"steps", steps}, {"log_hash", report.log_hash}};
    if (report.failed_step)
    {
        out["failed_step"] = *report.failed_step;
        out["error"] = report.error;
    }
    return out;
}

} // namespace oss::gateway
