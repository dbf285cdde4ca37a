#include "qexp/emit.hpp"

#include <cstdio>
#include <string>

namespace qexp::cli {
namespace {

std::string number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void comment(std::ostream& out, const std::string& prefix, const nlohmann::json& j) {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object())
            comment(out, name, value);
        else
            out << "# " << name << " = " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
}

}  // namespace

void write_csv(std::ostream& out, const Table& t, const nlohmann::json& meta) {
    comment(out, "", meta);
    for (std::size_t c = 0; c < t.names.size(); ++c) out << (c ? "," : "") << t.names[c];
    out << '\n';
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << number(t.columns[c][r]);
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& t, const nlohmann::json& meta) {
    nlohmann::ordered_json doc;
    doc["meta"] = meta;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < t.names.size(); ++c) data[t.names[c]] = t.columns[c];
    doc["data"] = std::move(data);
    out << doc.dump(1) << '\n';
}

}  // namespace qexp::cli
