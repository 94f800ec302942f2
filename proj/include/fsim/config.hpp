#pragma once

#include <map>
#include <string>
#include <vector>

#include "fsim/errors.hpp"

namespace fsim {

// Flat `key = value` file with [section] headers and # comments. Values stay
// strings here; typed extraction (and unknown-key rejection) happens at the
// consumer.
struct ConfigMap {
    std::map<std::string, std::string> values;  // "section.key" -> value

    bool has(const std::string& qualified) const { return values.count(qualified) > 0; }
    const std::string& get(const std::string& qualified) const;

    // "key=value" or "section.key=value"; a bare key must be unique across sections.
    void apply_override(const std::string& assignment);
};

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

double to_double(const std::string& key, const std::string& value);
int to_int(const std::string& key, const std::string& value);
bool to_bool(const std::string& key, const std::string& value);
std::vector<double> to_double_list(const std::string& key, const std::string& value);

}  // namespace fsim
