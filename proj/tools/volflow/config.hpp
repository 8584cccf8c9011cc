#pragma once

// Flat experiment configuration:
//
//   # comment            (also ';')
//   [section]
//   key = value
//   list = 0.1, 0.2, 0.5   (brackets around a list are optional)
//
// Keys are addressed as "section.key"; keys before the first header have no
// prefix. Every malformed line is reported as "<source>:<line>: <message>".

#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace volflow::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Config {
public:
    static Config parse(std::istream& in, const std::string& source);
    static Config parse_text(const std::string& text, const std::string& source = "<config>");
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    const std::string& source() const { return source_; }

    std::string text(const std::string& key, const std::string& fallback) const;
    std::string text(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    double number(const std::string& key) const;
    int integer(const std::string& key, int fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
    std::vector<double> numbers(const std::string& key) const;
    std::vector<std::string> words(const std::string& key, const std::vector<std::string>& fallback) const;

    /// Keys under "section." with the prefix stripped.
    std::map<std::string, std::string> section(const std::string& name) const;

    /// Rejects keys that are neither listed nor under one of the prefixes.
    void check_known(const std::set<std::string>& keys, const std::set<std::string>& prefixes = {}) const;

    /// Every key the run read, with defaults filled in, as "k=v; k=v".
    std::string resolved() const;

    /// Throws ConfigError pointing at the line of key (or just the source
    /// when the key is absent).
    [[noreturn]] void fail(const std::string& key, const std::string& message) const;

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    void note(const std::string& key, const std::string& value) const;

    std::string source_;
    std::map<std::string, Entry> entries_;
    mutable std::map<std::string, std::string> resolved_;
};

/// "%.17g" with inf/nan spelled out; shared by the CSV writer and the
/// resolved-config record.
std::string format_number(double v);

}  // namespace volflow::cli
