#include "intdiff/data_matrix.hpp"

#include "intdiff/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace intdiff {

std::vector<RowId> default_row_ids(Index n) {
    std::vector<RowId> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), RowId{0});
    return ids;
}

DataMatrix::DataMatrix(Eigen::MatrixXd v) : values(std::move(v)), row_ids(default_row_ids(values.rows())) {}

DataMatrix::DataMatrix(Eigen::MatrixXd v, std::vector<RowId> ids) : values(std::move(v)), row_ids(std::move(ids)) {
    if (static_cast<Index>(row_ids.size()) != values.rows()) {
        throw SizeError("row id count " + std::to_string(row_ids.size()) + " does not match row count " +
                        std::to_string(values.rows()));
    }
}

void DataMatrix::validate() const {
    if (static_cast<Index>(row_ids.size()) != values.rows()) {
        throw SizeError("row id count does not match row count");
    }
    if (!values.allFinite()) {
        throw ValidationError("data matrix contains non-finite values");
    }
    std::vector<RowId> sorted = row_ids;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ValidationError("data matrix has duplicate row ids");
    }
}

DataMatrix DataMatrix::subset(std::span<const Index> rows) const {
    DataMatrix out;
    out.values.resize(static_cast<Index>(rows.size()), values.cols());
    out.row_ids.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.values.row(static_cast<Index>(i)) = values.row(rows[i]);
        out.row_ids.push_back(row_ids[static_cast<std::size_t>(rows[i])]);
    }
    return out;
}

DataMatrix DataMatrix::with_values(Eigen::MatrixXd v) const {
    if (v.rows() != values.rows()) {
        throw SizeError("replacement values change the row count");
    }
    return DataMatrix(std::move(v), row_ids);
}

void require_aligned(std::span<const RowId> a, std::span<const RowId> b, const char* context) {
    if (a.size() != b.size() || !std::equal(a.begin(), a.end(), b.begin())) {
        throw AlignmentError(std::string(context) + ": row ids of the two inputs are not aligned");
    }
}

}  // namespace intdiff
