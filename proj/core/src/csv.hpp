#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace snowforge::csv {

inline std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Splits one record. Quoted fields may contain commas and doubled quotes;
/// embedded newlines are not supported. Returns false on a malformed quote.
inline bool split(std::string_view line, std::vector<std::string>& fields) {
    fields.clear();
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string cur;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
            was_quoted = false;
        } else if (c == '"' && cur.empty() && !was_quoted) {
            quoted = true;
            was_quoted = true;
        } else {
            cur += c;
        }
    }
    if (quoted) return false;
    fields.push_back(std::move(cur));
    return true;
}

}  // namespace snowforge::csv
