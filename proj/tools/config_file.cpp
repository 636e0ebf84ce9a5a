#include "config_file.hpp"

#include <json.hpp>

#include <fstream>

namespace fsum::cli {

namespace {

std::string scalar_text(const nlohmann::json& v) {
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_boolean())
        return v.get<bool>() ? "true" : "false";
    if (v.is_number())
        return v.dump();
    throw UsageError("config values must be strings, numbers, booleans or arrays of those");
}

bool given(CLI::App& sub, const std::string& name) {
    const CLI::Option* o = sub.get_option_no_throw("--" + name);
    return o != nullptr && o->count() > 0;
}

} // namespace

void apply_json_config(CLI::App& sub, const std::string& path,
                       const std::multimap<std::string, std::string>& exclusive) {
    std::ifstream is(path);
    if (!is)
        throw UsageError("cannot open config file " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config file " + path + ": " + e.what());
    }
    if (!doc.is_object())
        throw UsageError("config file " + path + " must hold a JSON object");

    for (const auto& [key, value] : doc.items()) {
        if (key == "config")
            throw UsageError("config files cannot name another config file");
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw UsageError("config file " + path + ": unknown key '" + key + "' for " + sub.get_name());
        if (opt->count() > 0)
            continue;
        bool shadowed = false;
        auto [lo, hi] = exclusive.equal_range(key);
        for (auto it = lo; it != hi; ++it)
            shadowed = shadowed || given(sub, it->second);
        if (shadowed)
            continue;

        std::vector<std::string> inputs;
        if (value.is_array()) {
            for (const auto& e : value)
                inputs.push_back(scalar_text(e));
        } else {
            inputs.push_back(scalar_text(value));
        }
        if (opt->get_type_size() == 0) {
            // flags take no value in CLI11; only a true entry switches them on
            if (inputs.size() != 1 || (inputs[0] != "true" && inputs[0] != "false"))
                throw UsageError("config key '" + key + "' is a flag and needs true or false");
            if (inputs[0] == "false")
                continue;
        }
        try {
            opt->add_result(inputs);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }
}

} // namespace fsum::cli
