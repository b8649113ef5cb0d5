#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "oss/core/json.hpp"

namespace oss::gateway
{

struct Request
{
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    json body;
    std::string tenant;
    std::string idempotency_key;
};

struct Response
{
    int status = 200;
    json body;
};

using Params = std::map<std::string, std::string>;
using Handler = std::function<Response(const Request&, const Params&)>;

struct ApiRoute
{
    std::string method;
    /// Segments in braces are captured, e.g. /nfvcl/blueprints/{id}.
    std::string path;
    std::string summary;
    std::vector<std::string> errors;
    json request_schema;
    bool idempotency_key = false;
};

class Router
{
public:
    /// BadRequest on a duplicate (method, path).
    void add(ApiRoute route, Handler handler);

    /// 404 for an unknown path, 405 for a known path with another verb.
    /// Errors thrown by handlers become {error, message, detail} bodies.
    Response dispatch(const Request& request) const;

    const std::vector<ApiRoute>& routes() const { return routes_; }

    /// OpenAPI-shaped description, sorted by path then verb.
    json describe() const;

private:
    std::vector<ApiRoute> routes_;
    std::vector<Handler> handlers_;
};

bool is_mutating(const std::string& method);
std::vector<std::string> split_path(const std::string& path);

} // namespace oss::gateway
