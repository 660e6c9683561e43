#pragma once

#include <json.hpp>

#include "bgpc/checkers.hpp"
#include "bgpc/conditions.hpp"

namespace bgpc {

nlohmann::json to_json(const CheckReport& rep);
nlohmann::json to_json(const ConditionReport& rep);

/// Shortest decimal string that round-trips num / den as a double.
std::string ratio_string(std::uint64_t num, std::uint64_t den);

}  // namespace bgpc
