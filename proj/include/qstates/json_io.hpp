#pragma once

// Canonical JSON encodings of group, algebra and dual elements:
//   {"family":"heisenberg","a":..,"b":..,"c":..}
//   {"family":"bargmann","a":..,"b":..,"c":..,"e":..}
//   {"family":"euclid","A":[[..],[..],[..]],"c":[..]}
//   {"family":"su2","q":[w,x,y,z]}
//   {"family":"torus","angles":[..]}
// Algebra and dual elements use {"family":..,"coords":[..]}.
//
// Decoders report schema problems as Error{Schema} whose message starts with
// the JSON pointer of the offending value.

#include <string>

#include <json.hpp>

#include "qstates/lie.hpp"

namespace qstates {

using json = nlohmann::json;

json to_json(const GroupElement& g);
json to_json(const AlgebraElement& Z);
json to_json(const CoadjointVector& w);

GroupElement group_element_from_json(const json& j, const std::string& pointer = "");
AlgebraElement algebra_element_from_json(const json& j, const std::string& pointer = "");
CoadjointVector coadjoint_from_json(const json& j, const std::string& pointer = "");

[[noreturn]] void schema_error(const std::string& pointer, const std::string& message);
double require_number(const json& j, const std::string& key, const std::string& pointer);
double optional_number(const json& j, const std::string& key, double fallback, const std::string& pointer);

}  // namespace qstates
