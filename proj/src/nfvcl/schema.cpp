#include "oss/nfvcl/schema.hpp"

#include <algorithm>

namespace oss::nfvcl
{

namespace
{

bool type_matches(const std::string& type, const json& v)
{
    if (type == "object")
        return v.is_object();
    if (type == "array")
        return v.is_array();
    if (type == "string")
        return v.is_string();
    if (type == "integer")
        return v.is_number_integer();
    if (type == "number")
        return v.is_number();
    if (type == "boolean")
        return v.is_boolean();
    if (type == "null")
        return v.is_null();
    return true;
}

void walk(const json& schema, const json& value, const std::string& where, std::vector<Violation>& out)
{
    auto at = where.empty() ? std::string("/") : where;
    auto bad = [&](const std::string& msg) { out.push_back({Errc::SchemaViolation, at + ": " + msg}); };

    if (auto t = schema.find("type"); t != schema.end() && !type_matches(t->get<std::string>(), value))
    {
        bad("expected " + t->get<std::string>());
        return;
    }
    if (auto e = schema.find("enum"); e != schema.end())
    {
        if (std::find(e->begin(), e->end(), value) == e->end())
            bad("value " + value.dump() + " not in " + e->dump());
    }
    if (value.is_number())
    {
        if (auto m = schema.find("minimum"); m != schema.end() && value.get<double>() < m->get<double>())
            bad("below minimum " + m->dump());
        if (auto m = schema.find("maximum"); m != schema.end() && value.get<double>() > m->get<double>())
            bad("above maximum " + m->dump());
    }
    if (value.is_string())
    {
        if (auto m = schema.find("minLength"); m != schema.end() && value.get<std::string>().size() < m->get<std::size_t>())
            bad("shorter than " + m->dump());
    }
    if (value.is_array())
    {
        if (auto m = schema.find("minItems"); m != schema.end() && value.size() < m->get<std::size_t>())
            bad("fewer than " + m->dump() + " items");
        if (auto items = schema.find("items"); items != schema.end())
            for (std::size_t i = 0; i < value.size(); ++i)
                walk(*items, value[i], where + "/" + std::to_string(i), out);
    }
    if (value.is_object())
    {
        auto props = schema.value("properties", json::object());
        for (const auto& r : schema.value("required", json::array()))
            if (!value.contains(r.get<std::string>()))
                bad("missing required '" + r.get<std::string>() + "'");
        bool closed = schema.contains("additionalProperties") && schema["additionalProperties"] == false;
        for (const auto& [key, v] : value.items())
        {
            if (props.contains(key))
                walk(props[key], v, where + "/" + key, out);
            else if (closed)
                bad("unexpected property '" + key + "'");
        }
    }
}

} // namespace

std::vector<Violation> check_schema(const json& schema, const json& value, const std::string& where)
{
    std::vector<Violation> out;
    walk(schema, value, where, out);
    return out;
}

void require_schema(const json& schema, const json& value, const std::string& what)
{
    auto violations = check_schema(schema, value);
    if (!violations.empty())
        fail(Errc::SchemaViolation, what + " does not match its schema: " + violations.front().message,
             {{"violations", to_json(violations)}});
}

} // namespace oss::nfvcl
