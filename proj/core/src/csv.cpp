#include "sparse_triangle/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace sparse_triangle::csv {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return {buffer.data(), end};
}

void Writer::header(std::initializer_list<std::string_view> columns) {
  for (auto column : columns) field(column);
  end_row();
}

void Writer::separator() {
  if (row_started_) out_ << ',';
  row_started_ = true;
}

Writer& Writer::field(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

Writer& Writer::field(long long value) {
  separator();
  out_ << value;
  return *this;
}

Writer& Writer::field(unsigned long long value) {
  separator();
  out_ << value;
  return *this;
}

Writer& Writer::field(std::string_view value) {
  separator();
  out_ << value;
  return *this;
}

void Writer::end_row() {
  out_ << '\n';
  row_started_ = false;
}

}  // namespace sparse_triangle::csv
