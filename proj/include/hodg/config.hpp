#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hodg {

/// Flat `key = value` text. A `[name]` line prefixes the following keys with
/// `name.`; `#` starts a comment. Later assignments of a key win.
class ConfigMap {
public:
    static ConfigMap parse(const std::string& text);
    static ConfigMap load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    void set(const std::string& key, const std::string& value);

    std::string get(const std::string& key, const std::string& fallback) const;
    double get(const std::string& key, double fallback) const;
    std::int64_t get(const std::string& key, std::int64_t fallback) const;
    int get(const std::string& key, int fallback) const;
    bool get(const std::string& key, bool fallback) const;
    std::string get(const std::string& key, const char* fallback) const {
        return get(key, std::string(fallback));
    }

    /// Keys never read through get().
    std::vector<std::string> unused() const;
    const std::map<std::string, std::string>& values() const { return values_; }

    /// Sectioned text that parses back to the same map.
    std::string format() const;

private:
    const std::string* find(const std::string& key) const;

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> read_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double x);

}  // namespace hodg
