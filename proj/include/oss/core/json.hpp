#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace nlohmann
{
template <typename T>
struct adl_serializer<std::optional<T>>
{
    static void to_json(json& j, const std::optional<T>& value)
    {
        if (value)
            j = *value;
        else
            j = nullptr;
    }

    static void from_json(const json& j, std::optional<T>& value)
    {
        if (j.is_null())
            value.reset();
        else
            value = j.get<T>();
    }
};
} // namespace nlohmann

namespace oss
{

using json = nlohmann::json;

/// Sorted keys, UTF-8, no insignificant whitespace. nlohmann::json objects are
/// std::map backed, so a compact dump is already canonical.
std::string canonical(const json& value);

/// Lower-case hex SHA-256 of the input bytes.
std::string sha256_hex(std::string_view bytes);

inline std::string content_hash(const json& value) { return sha256_hex(canonical(value)); }

/// Reads an optional member; absent or null yields the fallback.
template <typename T>
T value_or(const json& object, std::string_view key, T fallback)
{
    if (!object.is_object())
        return fallback;
    auto it = object.find(key);
    if (it == object.end() || it->is_null())
        return fallback;
    return it->template get<T>();
}

} // namespace oss
