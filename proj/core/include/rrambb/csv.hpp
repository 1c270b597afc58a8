#pragma once

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace rrambb {

/// Shortest text that round-trips the double; +inf prints as `inf`.
std::string format_double(double v);

/// Minimal CSV emitter: header on construction, one call per row.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((emit(fields, first)), ...);
    out_ << '\n';
  }

 private:
  template <typename T>
  void emit(const T& v, bool& first) {
    if (!first) out_ << ',';
    first = false;
    if constexpr (std::is_floating_point_v<T>) {
      out_ << format_double(static_cast<double>(v));
    } else {
      out_ << v;
    }
  }

  std::ostream& out_;
};

/// Splits one CSV line on commas (no quoting support; our files never quote).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace rrambb
