#pragma once

// Small helpers for reading documents with error messages that name the
// offending element.

#include "deception/error.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace deception::detail {

using nlohmann::json;

inline json parse_json(std::string_view text, std::string_view what)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

inline const json& require(const json& obj, const char* key, std::string_view where)
{
    if (!obj.is_object())
        throw ValidationError(std::string(where) + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw ValidationError(std::string(where) + ": missing key '" + key + "'");
    return *it;
}

inline std::string require_string(const json& obj, const char* key, std::string_view where)
{
    const json& v = require(obj, key, where);
    if (!v.is_string())
        throw ValidationError(std::string(where) + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

inline const json& require_array(const json& obj, const char* key, std::string_view where)
{
    const json& v = require(obj, key, where);
    if (!v.is_array())
        throw ValidationError(std::string(where) + ": '" + key + "' must be an array");
    return v;
}

} // namespace deception::detail
