#pragma once

#include <string>

#include "json.hpp"

#include "bvm/kernel.hpp"

namespace bvm {

// Wire format: {"rates": {"-2": 0.15, "-1": 0.35, "1": 0.35, "2": 0.15}}.
// Keys are signed decimal integers; the zero key and unknown fields are
// rejected.
Kernel kernel_from_json(const nlohmann::json& j);
nlohmann::json kernel_to_json(const Kernel& kernel);

}  // namespace bvm
