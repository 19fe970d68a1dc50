#pragma once

#include "intdiff/data_matrix.hpp"
#include "intdiff/denoise.hpp"
#include "intdiff/operator.hpp"
#include "intdiff/spectral.hpp"

#include <Eigen/Dense>

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace intdiff {

enum class FusionStrategy {
    integrated,           // MGD, entropy elbows, J = P1^t1 P2^t2
    alternating,          // (P1 P2)^t
    alternating_local,    // MGD, then (P1 P2)^t
    alternating_powered,  // entropy exponents without MGD
    concatenation,        // z-scored feature concatenation
    distance_sum,         // kernel on D1^2 + D2^2
    affinity_sum,         // (K1 + K2) / 2
    affinity_product,     // K1 o K2
};

inline constexpr std::array<FusionStrategy, 8> kAllStrategies = {
    FusionStrategy::integrated,    FusionStrategy::alternating,  FusionStrategy::alternating_local,
    FusionStrategy::alternating_powered, FusionStrategy::concatenation, FusionStrategy::distance_sum,
    FusionStrategy::affinity_sum,  FusionStrategy::affinity_product,
};

std::string_view to_string(FusionStrategy s);
/// Throws ConfigError on an unknown name.
FusionStrategy parse_strategy(std::string_view name);

/// Which modality's operator multiplies first.
enum class FusionOrder { first_then_second, second_then_first };

std::string_view to_string(FusionOrder o);
FusionOrder parse_order(std::string_view name);

struct FusionConfig {
    Bandwidth bandwidth;
    MgdConfig mgd;
    int t_max = 64;
    std::optional<Index> entropy_top_k;
    FusionOrder order = FusionOrder::first_then_second;
    int alternating_t = 1;
};

/// A fused row-stochastic operator plus how it was built.
struct IntegratedOperator {
    Eigen::MatrixXd values;
    std::pair<int, int> exponents{1, 1};
    std::pair<int, int> source_elbows{0, 0};  // (0, 0) when no elbows were computed
    FusionStrategy strategy = FusionStrategy::integrated;
    FusionOrder order = FusionOrder::first_then_second;
    std::vector<RowId> row_ids;
    std::vector<double> bandwidths;
    /// Present when the operator is D^-1 K for a single symmetric kernel.
    std::optional<Eigen::VectorXd> degrees;
    /// Per-modality entropy curves, when elbows were computed.
    std::vector<EntropyCurve> entropy_curves;

    Index size() const { return values.rows(); }
    void validate(double tolerance = 1e-9) const;
    /// Reversible view (requires `degrees`).
    DiffusionOperator as_diffusion_operator() const;
};

/// (k1, k2) / gcd(k1, k2). Both elbows must be positive.
std::pair<int, int> reduce_exponents(int k1, int k2);

IntegratedOperator alternating(const DiffusionOperator& op1, const DiffusionOperator& op2, int t,
                               FusionOrder order = FusionOrder::first_then_second);

/// Caches per-modality kernels, MGD outputs and elbows so several strategies
/// over one dataset pair share the expensive steps.
class FusionWorkspace {
public:
    FusionWorkspace(DataMatrix first, DataMatrix second, FusionConfig config);
    ~FusionWorkspace();
    FusionWorkspace(FusionWorkspace&&) noexcept;
    FusionWorkspace& operator=(FusionWorkspace&&) noexcept;

    IntegratedOperator fuse(FusionStrategy strategy);

    const FusionConfig& config() const { return config_; }
    const DataMatrix& modality(int which) const;
    /// Modality after MGD (computed on first use).
    const DataMatrix& denoised(int which);
    /// Single-modality operator on raw (false) or MGD-denoised (true) data.
    const DiffusionOperator& modality_operator(int which, bool denoised);
    const EntropyCurve& entropy_curve(int which, bool denoised);

private:
    struct Cache;
    DataMatrix data_[2];
    FusionConfig config_;
    std::unique_ptr<Cache> cache_;

    IntegratedOperator powered_product(bool denoised, FusionStrategy tag);
};

IntegratedOperator integrated(const DataMatrix& first, const DataMatrix& second, const FusionConfig& config);
IntegratedOperator fuse_baseline(const DataMatrix& first, const DataMatrix& second, FusionStrategy strategy,
                                 const FusionConfig& config);

/// Per-feature z-scores; constant features become 0.
DataMatrix zscore_columns(const DataMatrix& data);

}  // namespace intdiff
