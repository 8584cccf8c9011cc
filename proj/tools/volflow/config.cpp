#include "volflow/config.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace volflow::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    if (t == "inf" || t == "+inf") {
        out = INFINITY;
        return true;
    }
    if (t == "-inf") {
        out = -INFINITY;
        return true;
    }
    char* end = nullptr;
    errno = 0;
    out = std::strtod(t.c_str(), &end);
    return errno == 0 && end == t.c_str() + t.size() && !std::isnan(out);
}

std::vector<std::string> split_list(const std::string& value) {
    std::string v = trim(value);
    if (v.size() >= 2 && v.front() == '[' && v.back() == ']') v = v.substr(1, v.size() - 2);
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    if (out.size() == 1 && out[0].empty()) out.clear();
    return out;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Config Config::parse(std::istream& in, const std::string& source) {
    Config cfg;
    cfg.source_ = source;
    std::string raw, section;
    int line = 0;
    auto error = [&](const std::string& msg) { throw ConfigError(source + ":" + std::to_string(line) + ": " + msg); };
    while (std::getline(in, raw)) {
        ++line;
        const auto cut = raw.find_first_of("#;");
        const std::string s = trim(cut == std::string::npos ? raw : raw.substr(0, cut));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') error("unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!valid_name(section)) error("bad section name '" + section + "'");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) error("expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        if (!valid_name(key)) error("bad key '" + key + "'");
        const std::string value = trim(s.substr(eq + 1));
        if (value.empty()) error("key '" + key + "' has no value");
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.entries_.count(full)) error("duplicate key '" + full + "' (first set on line " +
                                            std::to_string(cfg.entries_[full].line) + ")");
        cfg.entries_[full] = {value, line};
    }
    return cfg;
}

Config Config::parse_text(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    return parse(in, source);
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    return parse(in, path);
}

void Config::fail(const std::string& key, const std::string& message) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(source_ + ": " + message);
    throw ConfigError(source_ + ":" + std::to_string(it->second.line) + ": " + message);
}

void Config::note(const std::string& key, const std::string& value) const { resolved_[key] = value; }

std::string Config::text(const std::string& key, const std::string& fallback) const {
    const auto it = entries_.find(key);
    const std::string v = it == entries_.end() ? fallback : it->second.value;
    note(key, v);
    return v;
}

std::string Config::text(const std::string& key) const {
    if (!has(key)) fail(key, "missing required key '" + key + "'");
    return text(key, "");
}

double Config::number(const std::string& key, double fallback) const {
    const auto it = entries_.find(key);
    double v = fallback;
    if (it != entries_.end() && !parse_double(it->second.value, v))
        fail(key, "key '" + key + "' expects a number, got '" + it->second.value + "'");
    note(key, format_number(v));
    return v;
}

double Config::number(const std::string& key) const {
    if (!has(key)) fail(key, "missing required key '" + key + "'");
    return number(key, 0.0);
}

int Config::integer(const std::string& key, int fallback) const {
    const double v = number(key, fallback);
    if (v != std::floor(v) || std::fabs(v) > 1e9) fail(key, "key '" + key + "' expects an integer");
    return static_cast<int>(v);
}

bool Config::flag(const std::string& key, bool fallback) const {
    const auto it = entries_.find(key);
    bool v = fallback;
    if (it != entries_.end()) {
        const std::string& s = it->second.value;
        if (s == "true" || s == "yes" || s == "on" || s == "1")
            v = true;
        else if (s == "false" || s == "no" || s == "off" || s == "0")
            v = false;
        else
            fail(key, "key '" + key + "' expects true or false, got '" + s + "'");
    }
    note(key, v ? "true" : "false");
    return v;
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = entries_.find(key);
    std::vector<double> v = fallback;
    if (it != entries_.end()) {
        v.clear();
        for (const auto& item : split_list(it->second.value)) {
            double d = 0.0;
            if (!parse_double(item, d)) fail(key, "key '" + key + "' has a non-numeric entry '" + item + "'");
            v.push_back(d);
        }
    }
    if (v.empty()) fail(key, "key '" + key + "' needs a nonempty list");
    std::string joined;
    for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + format_number(v[i]);
    note(key, joined);
    return v;
}

std::vector<double> Config::numbers(const std::string& key) const {
    if (!has(key)) fail(key, "missing required key '" + key + "'");
    return numbers(key, {});
}

std::vector<std::string> Config::words(const std::string& key, const std::vector<std::string>& fallback) const {
    const auto it = entries_.find(key);
    std::vector<std::string> v = it == entries_.end() ? fallback : split_list(it->second.value);
    if (v.empty()) fail(key, "key '" + key + "' needs a nonempty list");
    std::string joined;
    for (std::size_t i = 0; i < v.size(); ++i) joined += (i ? "," : "") + v[i];
    note(key, joined);
    return v;
}

std::map<std::string, std::string> Config::section(const std::string& name) const {
    std::map<std::string, std::string> out;
    const std::string prefix = name + ".";
    for (const auto& [k, e] : entries_)
        if (k.rfind(prefix, 0) == 0) out[k.substr(prefix.size())] = e.value;
    return out;
}

void Config::check_known(const std::set<std::string>& keys, const std::set<std::string>& prefixes) const {
    for (const auto& [k, e] : entries_) {
        if (keys.count(k)) continue;
        bool ok = false;
        for (const auto& p : prefixes) ok = ok || k.rfind(p, 0) == 0;
        if (!ok) throw ConfigError(source_ + ":" + std::to_string(e.line) + ": unknown key '" + k + "'");
    }
}

std::string Config::resolved() const {
    std::string out;
    for (const auto& [k, v] : resolved_) out += (out.empty() ? "" : "; ") + k + "=" + v;
    return out;
}

}  // namespace volflow::cli
