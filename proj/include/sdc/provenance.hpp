#pragma once

#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sdc {

/// Ordered key=value record describing how an object was produced. Later `set` calls on an
/// existing key overwrite in place, so serialization order is first-insertion order.
class Provenance {
  public:
    void set(const std::string& key, const std::string& value) {
        if (key.empty() || key.find_first_of("=\n") != std::string::npos)
            throw invalid_argument("provenance key '" + key + "' is empty or contains '=' or a newline");
        if (value.find('\n') != std::string::npos) throw invalid_argument("provenance value contains a newline");
        for (auto& [k, v] : entries_)
            if (k == key) {
                v = value;
                return;
            }
        entries_.emplace_back(key, value);
    }
    template <class T>
    void set(const std::string& key, const T& value) {
        set(key, std::to_string(value));
    }
    void set(const std::string& key, const char* value) { set(key, std::string(value)); }

    std::optional<std::string> get(const std::string& key) const {
        for (const auto& [k, v] : entries_)
            if (k == key) return v;
        return std::nullopt;
    }

    /// Copies every entry of `other`, prefixing keys.
    void merge(const Provenance& other, const std::string& prefix = "") {
        for (const auto& [k, v] : other.entries_) set(prefix + k, v);
    }

    const std::vector<std::pair<std::string, std::string>>& entries() const noexcept { return entries_; }

    std::string to_text() const {
        std::string s;
        for (const auto& [k, v] : entries_) s += k + '=' + v + '\n';
        return s;
    }

    static Provenance from_text(std::istream& in) {
        Provenance p;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw invalid_argument("provenance line without '=': " + line);
            p.set(line.substr(0, eq), line.substr(eq + 1));
        }
        return p;
    }

    friend bool operator==(const Provenance&, const Provenance&) = default;

  private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace sdc
