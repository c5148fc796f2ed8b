#pragma once

#include <json.hpp>

#include <string>

namespace bnlab::cli {

// Pretty JSON with every float at 17 significant digits; non-finite floats
// become null.
std::string dump17(const nlohmann::ordered_json& j, int indent = 2);

std::string g17(double x);

} // namespace bnlab::cli
