#pragma once

#include "intdiff/data_matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace intdiff {

/// Raw IDX array with unsigned-byte payload (type code 0x08).
struct IdxArray {
    std::vector<std::uint32_t> dims;
    std::vector<std::uint8_t> data;
};

IdxArray read_idx(const std::filesystem::path& path);
void write_idx(const std::filesystem::path& path, const IdxArray& array);

/// First dimension becomes rows, the rest is flattened row-major; bytes are
/// rescaled to [0, 1] by /255.
DataMatrix load_idx(const std::filesystem::path& path);
/// Label file (magic 0x00000801) as raw integers.
std::vector<int> load_idx_labels(const std::filesystem::path& path);
/// Inverse of load_idx for values on the byte grid: round(v * 255).
IdxArray to_idx(const DataMatrix& m, std::vector<std::uint32_t> dims);

/// Numeric CSV. A first line containing any non-numeric cell is a header; a
/// header whose first cell is `row_id` makes the first column the row ids.
DataMatrix load_csv(const std::filesystem::path& path);
/// Header `row_id,f1..fD`, shortest round-trip decimal formatting.
void save_csv(const std::filesystem::path& path, const DataMatrix& m);

/// Little-endian binary: uint64 rows, uint64 cols, then row-major f64.
void save_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
void save_matrix(const std::filesystem::path& path, const DataMatrix& m);
DataMatrix load_matrix(const std::filesystem::path& path);

/// `row_id,label`
void save_labels(const std::filesystem::path& path, const std::vector<RowId>& ids, const std::vector<int>& labels);
std::vector<int> load_labels(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace intdiff
