#include "hostpara/io.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <system_error>

namespace hostpara {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: " + std::string(text));
    return v;
}

void CsvWriter::separator() {
    if (row_started_) os_ << ',';
    row_started_ = true;
}

CsvWriter& CsvWriter::field(double v) {
    separator();
    os_ << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::field(int v) {
    separator();
    os_ << v;
    return *this;
}

CsvWriter& CsvWriter::field(long long v) {
    separator();
    os_ << v;
    return *this;
}

CsvWriter& CsvWriter::field(std::size_t v) {
    separator();
    os_ << v;
    return *this;
}

CsvWriter& CsvWriter::field(bool v) {
    separator();
    os_ << (v ? "true" : "false");
    return *this;
}

CsvWriter& CsvWriter::field(std::string_view v) {
    separator();
    os_ << v;
    return *this;
}

void CsvWriter::end_row() {
    os_ << '\n';
    row_started_ = false;
}

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace hostpara
