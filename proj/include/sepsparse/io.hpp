#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sepsparse/errors.hpp"

namespace sepsparse {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

}  // namespace detail

/// Single-column CSV of reals; blank lines are skipped.
inline std::vector<double> read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open signal file: " + path);
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            throw InvalidInputError("malformed CSV at line " + std::to_string(lineno) + ": " + t);
        }
        if (used != t.size())
            throw InvalidInputError("malformed CSV at line " + std::to_string(lineno) + ": " + t);
        out.push_back(v);
    }
    if (out.empty()) throw InvalidInputError("signal file is empty: " + path);
    return out;
}

inline void write_signal_csv(const std::string& path, const std::vector<double>& signal) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("cannot write signal file: " + path);
    out.precision(17);
    for (double v : signal) out << v << "\n";
}

/// Flat key=value configuration file. '#' starts a comment.
inline std::map<std::string, std::string> read_kv_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::string t = detail::trim(line);
        if (t.empty()) continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw InvalidInputError("config line " + std::to_string(lineno) + " is not key=value");
        kv[detail::trim(t.substr(0, eq))] = detail::trim(t.substr(eq + 1));
    }
    return kv;
}

inline std::vector<std::string> split_list(const std::string& s, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::string t = detail::trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

}  // namespace sepsparse
