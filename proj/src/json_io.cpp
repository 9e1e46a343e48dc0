#include "spectral/json_io.hpp"

namespace spectral {

using nlohmann::json;

json endpoint_json(double x) { return {{"dec", shortest_decimal(x)}, {"hex", hex_float(x)}}; }

json to_json(const Interval& x) { return json::array({endpoint_json(x.lo()), endpoint_json(x.hi())}); }

json to_json(const ComplexBox& z) { return {{"re", to_json(z.re)}, {"im", to_json(z.im)}}; }

namespace {

double endpoint_from_json(const json& j, bool upper) {
    if (j.is_object()) {
        // hex is exact, prefer it
        if (j.contains("hex")) return parse_double_exact(j.at("hex").get<std::string>());
        return endpoint_from_json(j.at("dec"), upper);
    }
    Interval x = interval_from_json(j);
    return upper ? x.hi() : x.lo();
}

}  // namespace

Interval interval_from_json(const json& j) {
    if (j.is_string()) return parse_interval_literal(j.get<std::string>());
    if (j.is_number_integer()) return Interval(static_cast<double>(j.get<long long>()));
    if (j.is_number()) return parse_interval_literal(shortest_decimal(j.get<double>()));
    if (j.is_array()) {
        if (j.size() != 2) throw FormatError("interval pair must have two entries");
        return {endpoint_from_json(j[0], false), endpoint_from_json(j[1], true)};
    }
    if (j.is_object() && j.contains("lo") && j.contains("hi"))
        return {endpoint_from_json(j.at("lo"), false), endpoint_from_json(j.at("hi"), true)};
    throw FormatError("cannot read an interval from " + j.dump());
}

ComplexBox complex_from_json(const json& j) {
    if (j.is_object() && j.contains("re")) {
        return {interval_from_json(j.at("re")), j.contains("im") ? interval_from_json(j.at("im")) : Interval(0.0)};
    }
    return ComplexBox(interval_from_json(j));
}

}  // namespace spectral
