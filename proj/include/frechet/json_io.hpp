#pragma once

#include <string>

#include "frechet/coupling.hpp"
#include "frechet/distribution.hpp"
#include "frechet/risk_measures.hpp"

namespace frechet {

// JSON schemas:
//   distribution  {"support":[...], "probs":[...]}
//   joint         {"dim":n, "atoms":[{"x":[...], "p":...}, ...]}
//   class         {"marginals":[<distribution>, ...]}
//   distortion    {"kind":"identity"} | {"kind":"var","p":..} |
//                 {"kind":"tvar","p":..} | {"kind":"ph","r":..} |
//                 {"kind":"dual_power","s":..} |
//                 {"kind":"piecewise_linear","points":[[u,g],...]}
// Parsers apply the same normalization as the in-memory constructors and
// throw std::invalid_argument on malformed input. Writers emit a fixed
// field order with numbers at 12 significant digits, so identical values
// serialize to identical bytes.

/// A double at 12 significant digits (%.12g), with -0 canonicalized.
std::string format_number(double v);

DiscreteDistribution parse_distribution(const std::string& json);
JointDistribution parse_joint(const std::string& json);
FrechetClass parse_class(const std::string& json);
DistortionFunction parse_distortion(const std::string& json);

std::string to_json(const DiscreteDistribution& d);
std::string to_json(const JointDistribution& j);
std::string to_json(const FrechetClass& c);

} // namespace frechet
