#include "floqbog/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace floqbog {

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : m_out(out)
{
    for (const auto& h : header)
        field(std::string_view(h));
    end_row();
}

void CsvWriter::separator()
{
    if (m_row_started)
        m_out << ',';
    m_row_started = true;
}

CsvWriter& CsvWriter::field(double v)
{
    separator();
    m_out << format_double(v);
    return *this;
}

CsvWriter& CsvWriter::field(int v)
{
    separator();
    m_out << v;
    return *this;
}

CsvWriter& CsvWriter::field(std::string_view v)
{
    separator();
    if (v.find_first_of(",\"\r\n") == std::string_view::npos) {
        m_out << v;
        return *this;
    }
    m_out << '"';
    for (char c : v) {
        if (c == '"')
            m_out << '"';
        m_out << c;
    }
    m_out << '"';
    return *this;
}

CsvWriter& CsvWriter::field(const std::optional<int>& v)
{
    if (v)
        return field(*v);
    separator();
    return *this;
}

void CsvWriter::end_row()
{
    m_out << "\r\n";
    m_row_started = false;
}

} // namespace floqbog
