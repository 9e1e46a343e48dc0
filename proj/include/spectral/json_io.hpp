#pragma once

#include <nlohmann/json.hpp>

#include "spectral/interval.hpp"

namespace spectral {

// Intervals are [lo, hi] pairs; every endpoint carries the shortest round-trip
// decimal plus the hex-float.
nlohmann::json to_json(const Interval& x);
nlohmann::json to_json(const ComplexBox& z);
nlohmann::json endpoint_json(double x);

// Accepts a decimal or hex string (tight enclosure of the literal), a JSON
// number (enclosure of its shortest decimal spelling), a [lo, hi] pair as
// written by to_json, or an object with lo and hi.
Interval interval_from_json(const nlohmann::json& j);
ComplexBox complex_from_json(const nlohmann::json& j);

}  // namespace spectral
