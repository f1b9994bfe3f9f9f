#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace hostpara {

inline constexpr const char* kSchemaVersion = "1.0";
inline constexpr const char* kLibraryVersion = "0.3.0";

/// %.17g equivalent: 17 significant digits, '.' decimal point, locale independent.
std::string format_double(double v);

/// Parses what format_double wrote. Throws std::invalid_argument on junk.
double parse_double(std::string_view text);

/// Row-oriented CSV writer: '\n' line endings, no quoting (fields never contain commas).
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    CsvWriter& field(double v);
    CsvWriter& field(int v);
    CsvWriter& field(long long v);
    CsvWriter& field(std::size_t v);
    CsvWriter& field(bool v);
    CsvWriter& field(std::string_view v);
    CsvWriter& field(const char* v) { return field(std::string_view(v)); }
    void end_row();

private:
    void separator();

    std::ostream& os_;
    bool row_started_ = false;
};

/// 64-bit FNV-1a, used for provenance hashes of canonical config text.
std::uint64_t fnv1a64(std::string_view text);
std::string hex64(std::uint64_t v);

}  // namespace hostpara
