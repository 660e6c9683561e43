#include "bgpc/report.hpp"

#include <array>
#include <charconv>

namespace bgpc {

using nlohmann::json;

json to_json(const CheckReport& rep) {
  json j;
  j["identifiable"] = rep.identifiable;
  j["g_ranks"] = rep.g_ranks;
  j["failing_support"] = rep.failing_support ? json(rep.failing_support->members()) : json(nullptr);
  j["reason"] = rep.reason;
  return j;
}

json to_json(const ConditionReport& rep) {
  json clauses = json::array();
  for (const auto& c : rep.clauses)
    clauses.push_back({{"name", c.name}, {"passed", c.passed}, {"diagnostic", c.diagnostic}});
  return {{"satisfied", rep.satisfied}, {"clauses", clauses}};
}

std::string ratio_string(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw ParameterError("ratio with zero denominator");
  const double r = static_cast<double>(num) / static_cast<double>(den);
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), r);
  std::string s(buf.data(), res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

}  // namespace bgpc
