#include "emosent/json17.hpp"

#include <cmath>

#include "emosent/csv.hpp"

namespace emosent {

namespace {

void write(std::string& out, const nlohmann::ordered_json& v, int indent) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent), ' ');
    switch (v.type()) {
        case nlohmann::json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad + nlohmann::json(it.key()).dump() + ": ";
                write(out, it.value(), indent + 2);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ",\n";
                out += pad;
                write(out, v[i], indent + 2);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double d = v.get<double>();
            out += std::isfinite(d) ? csv::fixed17(d) : "null";
            return;
        }
        default:
            out += v.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    }
}

}  // namespace

std::string dump_json17(const nlohmann::ordered_json& value) {
    std::string out;
    write(out, value, 0);
    out += '\n';
    return out;
}

}  // namespace emosent
