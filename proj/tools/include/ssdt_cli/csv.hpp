#pragma once

#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace ssdt::cli {

/// Locale-free rendering with 17 significant digits.
std::string format_double(double value);

void write_header(std::ostream& out, std::initializer_list<std::string_view> names);
void write_row(std::ostream& out, std::span<const double> values);
void write_row(std::ostream& out, std::initializer_list<double> values);

}  // namespace ssdt::cli
