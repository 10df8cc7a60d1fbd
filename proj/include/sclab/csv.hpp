#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace sclab::csv {

// RFC 4180: quote fields holding a comma, quote, CR or LF; double inner quotes.
inline std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Writer {
public:
    explicit Writer(const std::vector<std::string>& header) { row(header); }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << quote(fields[i]);
        }
        out_ << "\r\n";
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

}  // namespace sclab::csv
