#include "hodg/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "hodg/error.hpp"

namespace hodg {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-'))
            return false;
    return true;
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
    ConfigMap m;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ParseError("unterminated section header", line);
            section = trim(s.substr(1, s.size() - 2));
            if (!section.empty() && !valid_key(section))
                throw ParseError("bad section name '" + section + "'", line);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line);
        const std::string key = trim(s.substr(0, eq));
        if (!valid_key(key)) throw ParseError("bad key '" + key + "'", line);
        m.values_[section.empty() ? key : section + "." + key] = trim(s.substr(eq + 1));
    }
    return m;
}

ConfigMap ConfigMap::load(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot read config " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    try {
        return parse(os.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

void ConfigMap::set(const std::string& key, const std::string& value) {
    if (!valid_key(key)) throw Error("bad config key '" + key + "'");
    values_[key] = value;
}

const std::string* ConfigMap::find(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return nullptr;
    read_.insert(key);
    return &it->second;
}

std::string ConfigMap::get(const std::string& key, const std::string& fallback) const {
    const std::string* v = find(key);
    return v ? *v : fallback;
}

double ConfigMap::get(const std::string& key, double fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    double x = 0.0;
    const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
    if (ec != std::errc() || p != v->data() + v->size())
        throw Error("config key " + key + ": '" + *v + "' is not a number");
    return x;
}

std::int64_t ConfigMap::get(const std::string& key, std::int64_t fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    std::int64_t x = 0;
    const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), x);
    if (ec != std::errc() || p != v->data() + v->size())
        throw Error("config key " + key + ": '" + *v + "' is not an integer");
    return x;
}

int ConfigMap::get(const std::string& key, int fallback) const {
    const std::int64_t x = get(key, static_cast<std::int64_t>(fallback));
    if (x < INT32_MIN || x > INT32_MAX) throw Error("config key " + key + ": out of range");
    return static_cast<int>(x);
}

bool ConfigMap::get(const std::string& key, bool fallback) const {
    const std::string* v = find(key);
    if (!v) return fallback;
    if (*v == "on" || *v == "true" || *v == "yes" || *v == "1") return true;
    if (*v == "off" || *v == "false" || *v == "no" || *v == "0") return false;
    throw Error("config key " + key + ": '" + *v + "' is not on/off");
}

std::vector<std::string> ConfigMap::unused() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
        if (!read_.count(k)) out.push_back(k);
    return out;
}

std::string ConfigMap::format() const {
    std::ostringstream os;
    std::string section;
    for (const auto& [k, v] : values_) {
        if (k.find('.') == std::string::npos) os << k << " = " << v << '\n';
    }
    for (const auto& [k, v] : values_) {
        const auto dot = k.find('.');
        if (dot == std::string::npos) continue;
        const std::string s = k.substr(0, dot);
        if (s != section) {
            os << '[' << s << "]\n";
            section = s;
        }
        os << k.substr(dot + 1) << " = " << v << '\n';
    }
    return os.str();
}

std::string format_double(double x) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

}  // namespace hodg
