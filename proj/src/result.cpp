#include "fsum/result.hpp"

#include "fsum/error.hpp"

namespace fsum {

const char* to_string(Method m) {
    switch (m) {
    case Method::exact_h: return "exact_h";
    case Method::single_f: return "single_f";
    case Method::asymptotic: return "asymptotic";
    case Method::monte_carlo: return "monte_carlo";
    case Method::oracle: return "oracle";
    }
    return "?";
}

const char* to_string(MetricKind k) {
    switch (k) {
    case MetricKind::outage: return "op";
    case MetricKind::effective_capacity: return "ec";
    case MetricKind::cifr: return "cifr";
    case MetricKind::tifr: return "tifr";
    case MetricKind::ora: return "ora";
    case MetricKind::opra: return "opra";
    }
    return "?";
}

Method parse_method(const std::string& s) {
    for (Method m : {Method::exact_h, Method::single_f, Method::asymptotic, Method::monte_carlo, Method::oracle})
        if (s == to_string(m))
            return m;
    if (s == "exact")
        return Method::exact_h;
    if (s == "approx")
        return Method::single_f;
    if (s == "asym")
        return Method::asymptotic;
    if (s == "mc")
        return Method::monte_carlo;
    fail(ErrorCode::invalid_parameters, "unknown method '" + s + "'");
}

MetricKind parse_metric(const std::string& s) {
    for (MetricKind k : {MetricKind::outage, MetricKind::effective_capacity, MetricKind::cifr, MetricKind::tifr,
                         MetricKind::ora, MetricKind::opra})
        if (s == to_string(k))
            return k;
    if (s == "outage")
        return MetricKind::outage;
    if (s == "effective_capacity")
        return MetricKind::effective_capacity;
    fail(ErrorCode::invalid_parameters, "unknown metric '" + s + "'");
}

} // namespace fsum
