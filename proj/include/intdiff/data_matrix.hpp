#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace intdiff {

using Index = Eigen::Index;
using RowId = std::int64_t;

/// Dense observations x features matrix. Row identities travel with the rows
/// through every transformation that does not subset them.
struct DataMatrix {
    Eigen::MatrixXd values;
    std::vector<RowId> row_ids;

    DataMatrix() = default;
    /// Row ids default to 0..N-1.
    explicit DataMatrix(Eigen::MatrixXd v);
    DataMatrix(Eigen::MatrixXd v, std::vector<RowId> ids);

    Index rows() const { return values.rows(); }
    Index cols() const { return values.cols(); }

    /// Throws ValidationError on non-finite values or duplicate ids and
    /// SizeError when the id count disagrees with the row count.
    void validate() const;

    DataMatrix subset(std::span<const Index> rows) const;
    /// Same row ids, new values (must have the same row count).
    DataMatrix with_values(Eigen::MatrixXd v) const;
};

std::vector<RowId> default_row_ids(Index n);

/// Throws AlignmentError unless both id vectors are identical.
void require_aligned(std::span<const RowId> a, std::span<const RowId> b, const char* context);

}  // namespace intdiff
