#pragma once

#include <json.hpp>

namespace tooldc {

// Insertion-ordered everywhere: renderings and argument order must be stable.
using json = nlohmann::ordered_json;

}  // namespace tooldc
