#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace floqbog {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

/// RFC-4180-style writer: comma separated, '.' decimals, quoted fields when needed.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);

    CsvWriter& field(double v);
    CsvWriter& field(int v);
    CsvWriter& field(std::string_view v);
    CsvWriter& field(const std::optional<int>& v);
    void end_row();

private:
    void separator();

    std::ostream& m_out;
    bool m_row_started = false;
};

} // namespace floqbog
