#include "intdiff/io.hpp"

#include "intdiff/error.hpp"
#include "intdiff/format.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

namespace intdiff {
namespace {

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& b, std::size_t at) {
    return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
           std::uint32_t{b[at + 3]};
}

void put_be32(std::vector<std::uint8_t>& b, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        b.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void put_le64(std::vector<std::uint8_t>& b, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

std::uint64_t read_le64(const std::vector<std::uint8_t>& b, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | b[at + static_cast<std::size_t>(i)];
    }
    return v;
}

bool parse_double(std::string_view cell, double& out) {
    while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) {
        cell.remove_prefix(1);
    }
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r')) {
        cell.remove_suffix(1);
    }
    if (!cell.empty() && cell.front() == '+') {
        cell.remove_prefix(1);
    }
    if (cell.empty()) {
        return false;
    }
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
    return res.ec == std::errc() && res.ptr == cell.data() + cell.size();
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return cells;
}

std::string trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return std::string(s);
}

}  // namespace

IdxArray read_idx(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_bytes(path);
    if (bytes.size() < 4) {
        throw ParseError("IDX file '" + path.string() + "' is shorter than its magic number", bytes.size());
    }
    if (bytes[0] != 0 || bytes[1] != 0 || bytes[2] != 0x08 || bytes[3] == 0) {
        throw ParseError("bad IDX magic in '" + path.string() + "' (expected 0x000008NN)", 0);
    }
    const std::size_t ndims = bytes[3];
    const std::size_t header = 4 + 4 * ndims;
    if (bytes.size() < header) {
        throw ParseError("IDX header truncated in '" + path.string() + "'", bytes.size());
    }
    IdxArray out;
    std::size_t count = 1;
    for (std::size_t d = 0; d < ndims; ++d) {
        out.dims.push_back(read_be32(bytes, 4 + 4 * d));
        count *= out.dims.back();
    }
    if (bytes.size() - header < count) {
        throw ParseError("IDX payload truncated in '" + path.string() + "': expected " + std::to_string(count) +
                             " bytes",
                         bytes.size());
    }
    if (bytes.size() - header > count) {
        throw ParseError("IDX file '" + path.string() + "' has trailing bytes", header + count);
    }
    out.data.assign(bytes.begin() + static_cast<std::ptrdiff_t>(header), bytes.end());
    return out;
}

void write_idx(const std::filesystem::path& path, const IdxArray& array) {
    std::size_t count = 1;
    for (auto d : array.dims) {
        count *= d;
    }
    if (array.dims.empty() || array.dims.size() > 255 || count != array.data.size()) {
        throw ValidationError("IDX dimensions do not match the payload size");
    }
    std::vector<std::uint8_t> bytes{0, 0, 0x08, static_cast<std::uint8_t>(array.dims.size())};
    for (auto d : array.dims) {
        put_be32(bytes, d);
    }
    bytes.insert(bytes.end(), array.data.begin(), array.data.end());
    write_bytes(path, bytes);
}

DataMatrix load_idx(const std::filesystem::path& path) {
    const IdxArray a = read_idx(path);
    const Index rows = a.dims[0];
    const Index cols = rows == 0 ? 0 : static_cast<Index>(a.data.size()) / rows;
    Eigen::MatrixXd m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            m(i, j) = a.data[static_cast<std::size_t>(i * cols + j)] / 255.0;
        }
    }
    return DataMatrix(std::move(m));
}

std::vector<int> load_idx_labels(const std::filesystem::path& path) {
    const IdxArray a = read_idx(path);
    if (a.dims.size() != 1) {
        throw ParseError("IDX label file '" + path.string() + "' must be one-dimensional (magic 0x00000801)", 3);
    }
    return {a.data.begin(), a.data.end()};
}

IdxArray to_idx(const DataMatrix& m, std::vector<std::uint32_t> dims) {
    IdxArray a;
    a.dims = std::move(dims);
    a.data.reserve(static_cast<std::size_t>(m.values.size()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            const double v = std::round(m.values(i, j) * 255.0);
            a.data.push_back(static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0)));
        }
    }
    return a;
}

DataMatrix load_csv(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> raw = read_bytes(path);
    const std::string text(raw.begin(), raw.end());
    std::vector<std::vector<double>> rows;
    std::vector<RowId> ids;
    bool ids_from_file = false;
    std::size_t width = 0;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string_view line(text.data() + pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split_commas(line);
        std::vector<double> values(cells.size());
        bool numeric = true;
        std::size_t bad = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_double(cells[c], values[c])) {
                numeric = false;
                bad = c;
                break;
            }
        }
        if (first) {
            first = false;
            if (!numeric) {
                ids_from_file = trim(cells[0]) == "row_id";
                width = cells.size();
                continue;
            }
        }
        if (!numeric) {
            throw ParseError("non-numeric cell '" + trim(cells[bad]) + "' in column " + std::to_string(bad + 1) +
                                 " of '" + path.string() + "' line " + std::to_string(line_no),
                             line_no);
        }
        if (width == 0) {
            width = cells.size();
        } else if (cells.size() != width) {
            throw ParseError("row has " + std::to_string(cells.size()) + " cells, expected " + std::to_string(width) +
                                 " in '" + path.string() + "' line " + std::to_string(line_no),
                             line_no);
        }
        if (ids_from_file) {
            if (values[0] != std::floor(values[0])) {
                throw ParseError("row_id is not an integer in '" + path.string() + "' line " +
                                     std::to_string(line_no),
                                 line_no);
            }
            ids.push_back(static_cast<RowId>(values[0]));
            values.erase(values.begin());
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) {
        throw ParseError("no data rows in '" + path.string() + "'", line_no);
    }
    const std::size_t cols = rows.front().size();
    Eigen::MatrixXd m(static_cast<Index>(rows.size()), static_cast<Index>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    DataMatrix out = ids_from_file ? DataMatrix(std::move(m), std::move(ids)) : DataMatrix(std::move(m));
    out.validate();
    return out;
}

void save_csv(const std::filesystem::path& path, const DataMatrix& m) {
    std::string out = "row_id";
    for (Index j = 0; j < m.cols(); ++j) {
        out += ",f" + std::to_string(j + 1);
    }
    out += '\n';
    for (Index i = 0; i < m.rows(); ++i) {
        out += std::to_string(m.row_ids[static_cast<std::size_t>(i)]);
        for (Index j = 0; j < m.cols(); ++j) {
            out += ',';
            out += to_chars(m.values(i, j));
        }
        out += '\n';
    }
    write_text_file(path, out);
}

void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(16 + 8 * static_cast<std::size_t>(m.size()));
    put_le64(bytes, static_cast<std::uint64_t>(m.rows()));
    put_le64(bytes, static_cast<std::uint64_t>(m.cols()));
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            put_le64(bytes, std::bit_cast<std::uint64_t>(m(i, j)));
        }
    }
    write_bytes(path, bytes);
}

void save_matrix(const std::filesystem::path& path, const DataMatrix& m) {
    save_matrix(path, m.values);
}

DataMatrix load_matrix(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_bytes(path);
    if (bytes.size() < 16) {
        throw ParseError("binary matrix header truncated in '" + path.string() + "'", bytes.size());
    }
    const std::uint64_t rows = read_le64(bytes, 0);
    const std::uint64_t cols = read_le64(bytes, 8);
    if (cols != 0 && rows > (bytes.size() - 16) / 8 / cols) {
        throw ParseError("binary matrix payload truncated in '" + path.string() + "'", bytes.size());
    }
    const std::size_t expected = 16 + 8 * rows * cols;
    if (bytes.size() != expected) {
        throw ParseError("binary matrix payload size mismatch in '" + path.string() + "'",
                         std::min(bytes.size(), expected));
    }
    Eigen::MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
    std::size_t at = 16;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j, at += 8) {
            m(i, j) = std::bit_cast<double>(read_le64(bytes, at));
        }
    }
    return DataMatrix(std::move(m));
}

void save_labels(const std::filesystem::path& path, const std::vector<RowId>& ids, const std::vector<int>& labels) {
    if (ids.size() != labels.size()) {
        throw SizeError("label count does not match row id count");
    }
    std::string out = "row_id,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += std::to_string(ids[i]) + ',' + std::to_string(labels[i]) + '\n';
    }
    write_text_file(path, out);
}

std::vector<int> load_labels(const std::filesystem::path& path) {
    const DataMatrix m = load_csv(path);
    if (m.cols() != 1) {
        throw ParseError("label file '" + path.string() + "' must have exactly one label column", 1);
    }
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(m.rows()));
    for (Index i = 0; i < m.rows(); ++i) {
        labels.push_back(static_cast<int>(m.values(i, 0)));
    }
    return labels;
}

std::string read_text_file(const std::filesystem::path& path) {
    const auto bytes = read_bytes(path);
    return {bytes.begin(), bytes.end()};
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    write_bytes(path, std::vector<std::uint8_t>(contents.begin(), contents.end()));
}

}  // namespace intdiff
