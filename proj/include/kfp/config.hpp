#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "kfp/numeric.hpp"

namespace kfp {

/// configuration problems carry the offending key so the CLI can name it
struct ConfigError : std::runtime_error {
    std::string key;
    explicit ConfigError(const std::string& k, const std::string& what)
        : std::runtime_error(what), key(k)
    {
    }
};

/// Nested key/value configuration: "[section]" headers followed by
/// "key = value" lines; '#' starts a comment.
class Config {
public:
    static Config parse(const std::string& text)
    {
        Config cfg;
        cfg.text_ = text;
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("", "config line " + std::to_string(lineno) + ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("", "config line " + std::to_string(lineno) + ": expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError("", "config line " + std::to_string(lineno) + ": empty key");
            cfg.values_[section + "." + key] = value;
        }
        return cfg;
    }

    static Config load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw ConfigError("", "cannot open config file: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str());
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const
    {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ConfigError(key, "missing required config key: " + key);
        return it->second;
    }

    std::string get_string(const std::string& key, const std::string& fallback) const
    {
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double get_double(const std::string& key) const { return to_double(key, get_string(key)); }
    double get_double(const std::string& key, double fallback) const
    {
        return has(key) ? to_double(key, get_string(key)) : fallback;
    }

    long get_int(const std::string& key) const { return to_int(key, get_string(key)); }
    long get_int(const std::string& key, long fallback) const
    {
        return has(key) ? to_int(key, get_string(key)) : fallback;
    }

    bool get_bool(const std::string& key, bool fallback) const
    {
        if (!has(key)) return fallback;
        const std::string v = get_string(key);
        if (v == "true" || v == "on" || v == "1") return true;
        if (v == "false" || v == "off" || v == "0") return false;
        throw ConfigError(key, "config key " + key + ": expected a boolean, got '" + v + "'");
    }

    /// whitespace-separated list of numbers
    std::vector<double> get_double_list(const std::string& key) const
    {
        std::istringstream in(get_string(key));
        std::vector<double> out;
        double x;
        while (in >> x) out.push_back(x);
        if (out.empty()) throw ConfigError(key, "config key " + key + ": expected a list of numbers");
        return out;
    }

    /// FNV-1a hash of the raw text, embedded in artifact headers
    std::uint64_t hash() const
    {
        return fnv1a_hash(std::span<const char>(text_.data(), text_.size()));
    }

    const std::string& text() const { return text_; }

private:
    static std::string trim(const std::string& s)
    {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    static double to_double(const std::string& key, const std::string& v)
    {
        try {
            std::size_t pos = 0;
            const double x = std::stod(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw ConfigError(key, "config key " + key + ": expected a number, got '" + v + "'");
        }
    }

    static long to_int(const std::string& key, const std::string& v)
    {
        try {
            std::size_t pos = 0;
            const long x = std::stol(v, &pos);
            if (pos != v.size()) throw std::invalid_argument(v);
            return x;
        } catch (const std::exception&) {
            throw ConfigError(key, "config key " + key + ": expected an integer, got '" + v + "'");
        }
    }

    std::map<std::string, std::string> values_;
    std::string text_;
};

}  // namespace kfp
