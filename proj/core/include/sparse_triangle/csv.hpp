#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace sparse_triangle::csv {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

/// Minimal CSV row writer; values are never quoted.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> columns);

  Writer& field(double value);
  Writer& field(long long value);
  Writer& field(unsigned long long value);
  Writer& field(std::size_t value) { return field(static_cast<unsigned long long>(value)); }
  Writer& field(int value) { return field(static_cast<long long>(value)); }
  Writer& field(std::string_view value);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  bool row_started_ = false;
};

}  // namespace sparse_triangle::csv
