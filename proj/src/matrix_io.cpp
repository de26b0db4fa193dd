#include "commfact/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

namespace commfact {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t')
            ++j;
        if (j > i)
            tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no) {
    T value{};
    const auto* first = token.data();
    const auto* last = token.data() + token.size();
    if (!token.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || token.empty())
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse '" +
                         std::string(token) + "'");
    return value;
}

Complex parse_entry(std::string_view token, std::size_t line_no) {
    const auto comma = token.find(',');
    if (comma == std::string_view::npos || token.find(',', comma + 1) != std::string_view::npos)
        throw ParseError("line " + std::to_string(line_no) + ": entry '" + std::string(token) +
                         "' is not of the form re,im");
    const double re = parse_number<double>(token.substr(0, comma), line_no);
    const double im = parse_number<double>(token.substr(comma + 1), line_no);
    if (!std::isfinite(re) || !std::isfinite(im))
        throw ParseError("line " + std::to_string(line_no) + ": non-finite entry");
    return {re, im};
}

} // namespace

std::string format_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

void write_matrix(std::ostream& os, const ComplexMatrix& m) {
    os << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j)
                os << ' ';
            os << format_real(m(i, j).real()) << ',' << format_real(m(i, j).imag());
        }
        os << '\n';
    }
}

std::string matrix_to_string(const ComplexMatrix& m) {
    std::ostringstream os;
    write_matrix(os, m);
    return os.str();
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_matrix(os, m);
    if (!os)
        throw std::runtime_error("write to " + path.string() + " failed");
}

ComplexMatrix matrix_from_string(const std::string& text) {
    if (text.find('\r') != std::string::npos)
        throw ParseError("CR characters are not allowed (LF line endings only)");
    auto lines = split_lines(text);
    if (lines.empty())
        throw ParseError("empty input");

    const auto header = split_tokens(lines[0]);
    if (header.size() != 2)
        throw ParseError("line 1: expected 'rows cols'");
    const auto rows = parse_number<long long>(header[0], 1);
    const auto cols = parse_number<long long>(header[1], 1);
    if (rows <= 0 || cols <= 0)
        throw ParseError("line 1: dimensions must be positive");

    if (lines.size() != static_cast<std::size_t>(rows) + 1)
        throw ParseError("expected " + std::to_string(rows) + " rows, found " +
                         std::to_string(lines.size() - 1));

    ComplexMatrix m(rows, cols);
    for (long long i = 0; i < rows; ++i) {
        const std::size_t line_no = static_cast<std::size_t>(i) + 2;
        const auto tokens = split_tokens(lines[i + 1]);
        if (tokens.size() != static_cast<std::size_t>(cols))
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(cols) + " entries, found " +
                             std::to_string(tokens.size()));
        for (long long j = 0; j < cols; ++j)
            m(i, j) = parse_entry(tokens[j], line_no);
    }
    return m;
}

ComplexMatrix read_matrix(std::istream& is) {
    std::ostringstream buf;
    buf << is.rdbuf();
    return matrix_from_string(buf.str());
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw ParseError("cannot open " + path.string());
    return read_matrix(is);
}

ComplexMatrix points_as_column(std::span<const Complex> points) {
    ComplexMatrix column(static_cast<Eigen::Index>(points.size()), 1);
    for (std::size_t i = 0; i < points.size(); ++i)
        column(static_cast<Eigen::Index>(i), 0) = points[i];
    return column;
}

std::vector<Complex> column_as_points(const ComplexMatrix& column) {
    if (column.cols() != 1)
        throw DimensionError("point sets are stored as a single column");
    return {column.data(), column.data() + column.rows()};
}

} // namespace commfact
