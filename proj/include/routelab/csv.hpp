#pragma once

#include <routelab/graph.hpp>
#include <routelab/metrics.hpp>

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

namespace routelab::csv {

inline constexpr std::string_view kStretchHeader =
    "scheme,graph,seed,metric,pairs,mean,max,p50,p99,violation_fraction,bound";

/// RFC 4180 field quoting: fields holding a comma, quote, CR or LF are
/// wrapped in quotes with embedded quotes doubled.
inline std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Shortest representation that round-trips.
inline std::string number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

struct StretchRow {
    std::string scheme;
    std::string graph;
    std::uint64_t seed = 0;
    Metric metric = Metric::Hop;
    StretchStats stats;
    double bound = 0.0;
};

inline std::string format(const StretchRow& row) {
    std::string out;
    out += escape(row.scheme) + ',';
    out += escape(row.graph) + ',';
    out += std::to_string(row.seed) + ',';
    out += std::string(to_string(row.metric)) + ',';
    out += std::to_string(row.stats.sample_count) + ',';
    out += number(row.stats.mean) + ',';
    out += number(row.stats.max) + ',';
    out += number(row.stats.p50) + ',';
    out += number(row.stats.p99) + ',';
    out += number(row.stats.violation_fraction(row.bound)) + ',';
    out += number(row.bound);
    return out;
}

} // namespace routelab::csv
