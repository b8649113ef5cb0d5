#include "oss/gateway/router.hpp"

#include <algorithm>

#include "oss/core/errors.hpp"

namespace oss::gateway
{

namespace
{

bool match(const std::vector<std::string>& pattern, const std::vector<std::string>& actual, Params& params)
{
    if (pattern.size() != actual.size())
        return false;
    Params captured;
    for (std::size_t i = 0; i < pattern.size(); ++i)
    {
        const auto& p = pattern[i];
        if (p.size() > 2 && p.front() == '{' && p.back() == '}')
            captured[p.substr(1, p.size() - 2)] = actual[i];
        else if (p != actual[i])
            return false;
    }
    params = std::move(captured);
    return true;
}

json error_body(const std::string& code, const std::string& message)
{
    return {{"error", code}, {"message", message}};
}

} // namespace

bool is_mutating(const std::string& method) { return method != "GET"; }

std::vector<std::string> split_path(const std::string& path)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < path.size())
    {
        auto j = path.find('/', i);
        if (j == std::string::npos)
            j = path.size();
        if (j > i)
            out.push_back(path.substr(i, j - i));
        i = j + 1;
    }
    return out;
}

void Router::add(ApiRoute route, Handler handler)
{
    for (const auto& r : routes_)
        if (r.method == route.method && r.path == route.path)
            fail(Errc::BadRequest, "duplicate route " + route.method + " " + route.path);
    routes_.push_back(std::move(route));
    handlers_.push_back(std::move(handler));
}

Response Router::dispatch(const Request& request) const
{
    auto segments = split_path(request.path);
    bool path_known = false;
    // Literal segments win over captures so /a/topology beats /a/{id}.
    int best = -1;
    int best_literals = -1;
    Params best_params;
    for (std::size_t i = 0; i < routes_.size(); ++i)
    {
        Params params;
        auto pattern = split_path(routes_[i].path);
        if (!match(pattern, segments, params))
            continue;
        path_known = true;
        if (routes_[i].method != request.method)
            continue;
        int literals = static_cast<int>(pattern.size() - params.size());
        if (literals > best_literals)
        {
            best = static_cast<int>(i);
            best_literals = literals;
            best_params = params;
        }
    }
    if (best < 0)
        return path_known ? Response{405, error_body("MethodNotAllowed", request.method + " " + request.path)}
                          : Response{404, error_body("NotFound", "no route for " + request.path)};
    try
    {
        return handlers_[best](request, best_params);
    }
    catch (const Error& e)
    {
        return {http_status(e.code()), e.to_json()};
    }
    catch (const json::exception& e)
    {
        return {400, error_body("BadRequest", e.what())};
    }
}

json Router::describe() const
{
    std::vector<std::size_t> order(routes_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) {
        return std::tie(routes_[a].path, routes_[a].method) < std::tie(routes_[b].path, routes_[b].method);
    });
    json paths = json::object();
    for (auto i : order)
    {
        const auto& r = routes_[i];
        std::string verb = r.method;
        std::transform(verb.begin(), verb.end(), verb.begin(), [](unsigned char c) { return std::tolower(c); });
        json op = {{"summary", r.summary}, {"responses", json::object()}};
        for (const auto& code : r.errors)
            op["x-error-codes"].push_back(code);
        if (!r.request_schema.is_null())
            op["requestBody"] = {{"content", {{"application/json", {{"schema", r.request_schema}}}}}};
        json params = json::array();
        for (const auto& seg : split_path(r.path))
            if (seg.size() > 2 && seg.front() == '{')
                params.push_back({{"name", seg.substr(1, seg.size() - 2)}, {"in", "path"}, {"required", true}});
        params.push_back({{"name", "X-Tenant-Id"}, {"in", "header"}, {"required", false}});
        if (r.idempotency_key)
            params.push_back({{"name", "Idempotency-Key"}, {"in", "header"}, {"required", false}});
        op["parameters"] = params;
        op["responses"]["default"] = {{"description", "error body {error, message, detail}"}};
        paths[r.path][verb] = op;
    }
    return {{"openapi", "3.0.3"}, {"info", {{"title", "oss gateway"}, {"version", "1.0"}}}, {"paths", paths}};
}

} // namespace oss::gateway
