// Plain-text reports: `key = value` lines ending in `verdict = pass|fail`.
#pragma once

#include "numeric.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#ifndef HOMGROW_VERSION
#define HOMGROW_VERSION "0.0.0"
#endif

namespace homgrow {

inline std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr))
        throw std::runtime_error("sha256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

inline std::string file_sha256(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open '" + path + "'");
    return sha256_hex(std::string(std::istreambuf_iterator<char>(in), {}));
}

class Report {
public:
    Report(std::string command, std::uint64_t seed)
    {
        add("tool", "homgrow");
        add("version", HOMGROW_VERSION);
        add("command", std::move(command));
        add("seed", seed);
    }

    void input(const std::string& path) { add("input." + std::to_string(inputs_++), path + " sha256:" + file_sha256(path)); }

    void add(const std::string& key, const std::string& value) { lines_.emplace_back(key, value); }
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
    void add(const std::string& key, const Rational& value) { add(key, to_string(value)); }
    void add(const std::string& key, const Integer& value) { add(key, to_string(value)); }
    template <typename T>
    requires std::is_integral_v<T> void add(const std::string& key, T value) { add(key, std::to_string(value)); }

    template <typename T>
    void add_list(const std::string& key, const std::vector<T>& values)
    {
        std::string s;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i)
                s += ",";
            if constexpr (std::is_same_v<T, Rational> || std::is_same_v<T, Integer>)
                s += to_string(values[i]);
            else if constexpr (std::is_same_v<T, std::string>)
                s += values[i];
            else
                s += std::to_string(values[i]);
        }
        add(key, s);
    }

    /// A failed check makes the verdict fail.
    void check(const std::string& key, bool ok)
    {
        add(key, ok);
        pass_ = pass_ && ok;
    }

    bool pass() const { return pass_; }

    std::string str() const
    {
        std::ostringstream out;
        for (const auto& [k, v] : lines_)
            out << k << " = " << v << '\n';
        out << "verdict = " << (pass_ ? "pass" : "fail") << '\n';
        return out.str();
    }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
    std::size_t inputs_ = 0;
    bool pass_ = true;
};

} // namespace homgrow
