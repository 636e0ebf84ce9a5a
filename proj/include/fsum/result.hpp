#pragma once

#include <map>
#include <string>
#include <vector>

namespace fsum {

enum class Method { exact_h, single_f, asymptotic, monte_carlo, oracle };

enum class MetricKind { outage, effective_capacity, cifr, tifr, ora, opra };

const char* to_string(Method m);
const char* to_string(MetricKind k);
Method parse_method(const std::string& s);
MetricKind parse_metric(const std::string& s);

struct MetricResult {
    double value = 0.0;
    Method method = Method::exact_h;
    double error_estimate = 0.0;
    std::map<std::string, double> diagnostics;
    std::vector<std::string> notes;
};

} // namespace fsum
