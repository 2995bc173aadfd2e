#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "numeric_format.hpp"

namespace bellmax {

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

inline std::string json_array(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += fmt17(v[i]);
    }
    return out + "]";
}

inline std::string json_array(const std::vector<int>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(v[i]);
    }
    return out + "]";
}

/// Insertion-ordered JSON object assembly.  All doubles go through fmt17 so
/// identical inputs always print byte-identically.
class JsonObject {
  public:
    JsonObject& field(const std::string& key, double v) { return raw(key, fmt17(v)); }
    JsonObject& field(const std::string& key, int v) { return raw(key, std::to_string(v)); }
    JsonObject& field(const std::string& key, std::uint64_t v) { return raw(key, std::to_string(v)); }
    JsonObject& field(const std::string& key, bool v) { return raw(key, v ? "true" : "false"); }
    JsonObject& field_str(const std::string& key, const std::string& s) {
        return raw(key, "\"" + json_escape(s) + "\"");
    }
    JsonObject& field_raw(const std::string& key, const std::string& json) { return raw(key, json); }

    std::string str() const { return "{" + body_ + "}"; }

  private:
    JsonObject& raw(const std::string& key, const std::string& val) {
        if (!body_.empty()) body_ += ',';
        body_ += "\"" + json_escape(key) + "\":" + val;
        return *this;
    }

    std::string body_;
};

}  // namespace bellmax
