#include "ssdt_cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace ssdt::cli {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

void write_header(std::ostream& out, std::initializer_list<std::string_view> names) {
    bool first = true;
    for (std::string_view name : names) {
        if (!first) out << ',';
        out << name;
        first = false;
    }
    out << '\n';
}

void write_row(std::ostream& out, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) out << ',';
        out << format_double(values[i]);
    }
    out << '\n';
}

void write_row(std::ostream& out, std::initializer_list<double> values) {
    write_row(out, std::span<const double>(values.begin(), values.size()));
}

}  // namespace ssdt::cli
