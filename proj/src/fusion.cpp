#include "intdiff/fusion.hpp"

#include "intdiff/error.hpp"

#include <numeric>
#include <string>

namespace intdiff {

std::string_view to_string(FusionStrategy s) {
    switch (s) {
    case FusionStrategy::integrated:
        return "integrated";
    case FusionStrategy::alternating:
        return "alternating";
    case FusionStrategy::alternating_local:
        return "alternating_local";
    case FusionStrategy::alternating_powered:
        return "alternating_powered";
    case FusionStrategy::concatenation:
        return "concatenation";
    case FusionStrategy::distance_sum:
        return "distance_sum";
    case FusionStrategy::affinity_sum:
        return "affinity_sum";
    case FusionStrategy::affinity_product:
        return "affinity_product";
    }
    return "unknown";
}

FusionStrategy parse_strategy(std::string_view name) {
    for (FusionStrategy s : kAllStrategies) {
        if (to_string(s) == name) {
            return s;
        }
    }
    throw ConfigError("unknown fusion strategy '" + std::string(name) + "'");
}

std::string_view to_string(FusionOrder o) {
    return o == FusionOrder::first_then_second ? "first_then_second" : "second_then_first";
}

FusionOrder parse_order(std::string_view name) {
    if (name == "first_then_second") {
        return FusionOrder::first_then_second;
    }
    if (name == "second_then_first") {
        return FusionOrder::second_then_first;
    }
    throw ConfigError("unknown fusion order '" + std::string(name) + "'");
}

void IntegratedOperator::validate(double tolerance) const {
    if (values.rows() != values.cols() || static_cast<Index>(row_ids.size()) != values.rows()) {
        throw SizeError("fused operator has inconsistent dimensions");
    }
    if (!values.allFinite() || (values.array() < 0.0).any()) {
        throw NumericalError("fused operator has negative or non-finite entries");
    }
    if (const double err = row_sum_error(values); err > tolerance) {
        throw NumericalError("fused operator rows deviate from 1 by " + std::to_string(err));
    }
}

DiffusionOperator IntegratedOperator::as_diffusion_operator() const {
    if (!degrees) {
        throw ValidationError("operator '" + std::string(to_string(strategy)) + "' is not reversible");
    }
    return DiffusionOperator{values, *degrees, row_ids};
}

std::pair<int, int> reduce_exponents(int k1, int k2) {
    if (k1 < 1 || k2 < 1) {
        throw ValidationError("elbow timescales must be positive");
    }
    const int g = std::gcd(k1, k2);
    return {k1 / g, k2 / g};
}

IntegratedOperator alternating(const DiffusionOperator& op1, const DiffusionOperator& op2, int t, FusionOrder order) {
    require_aligned(op1.row_ids, op2.row_ids, "alternating");
    if (t < 1) {
        throw ValidationError("alternating diffusion needs t >= 1");
    }
    const Eigen::MatrixXd step =
        order == FusionOrder::first_then_second ? Eigen::MatrixXd(op1.values * op2.values) : Eigen::MatrixXd(op2.values * op1.values);
    IntegratedOperator out;
    out.values = stochastic_power(step, t);
    out.exponents = {t, t};
    out.strategy = FusionStrategy::alternating;
    out.order = order;
    out.row_ids = op1.row_ids;
    return out;
}

DataMatrix zscore_columns(const DataMatrix& data) {
    Eigen::MatrixXd z = data.values;
    const double n = static_cast<double>(z.rows());
    for (Index j = 0; j < z.cols(); ++j) {
        const double mean = z.col(j).mean();
        z.col(j).array() -= mean;
        const double sd = std::sqrt(z.col(j).squaredNorm() / n);
        if (sd > 0.0) {
            z.col(j) /= sd;
        } else {
            z.col(j).setZero();
        }
    }
    return data.with_values(std::move(z));
}

struct FusionWorkspace::Cache {
    std::optional<DataMatrix> denoised[2];
    std::optional<Kernel> kernel[2][2];
    std::optional<DiffusionOperator> op[2][2];
    std::optional<EntropyCurve> curve[2][2];
};

FusionWorkspace::FusionWorkspace(DataMatrix first, DataMatrix second, FusionConfig config)
    : data_{std::move(first), std::move(second)}, config_(std::move(config)), cache_(std::make_unique<Cache>()) {
    data_[0].validate();
    data_[1].validate();
    require_aligned(data_[0].row_ids, data_[1].row_ids, "fusion");
    config_.mgd.validate();
}

FusionWorkspace::~FusionWorkspace() = default;
FusionWorkspace::FusionWorkspace(FusionWorkspace&&) noexcept = default;
FusionWorkspace& FusionWorkspace::operator=(FusionWorkspace&&) noexcept = default;

const DataMatrix& FusionWorkspace::modality(int which) const {
    return data_[which];
}

const DataMatrix& FusionWorkspace::denoised(int which) {
    auto& slot = cache_->denoised[which];
    if (!slot) {
        slot = mgd(data_[which], config_.mgd);
    }
    return *slot;
}

namespace {

const Kernel& cached_kernel(std::optional<Kernel>& slot, const DataMatrix& data, const Bandwidth& bw) {
    if (!slot) {
        slot = gaussian_kernel(data, bw);
    }
    return *slot;
}

IntegratedOperator single_kernel_operator(const Kernel& k, FusionStrategy tag, std::vector<double> bandwidths) {
    const DiffusionOperator op = diffusion_operator(k);
    IntegratedOperator out;
    out.values = op.values;
    out.degrees = op.degrees;
    out.row_ids = op.row_ids;
    out.strategy = tag;
    out.bandwidths = std::move(bandwidths);
    return out;
}

}  // namespace

const DiffusionOperator& FusionWorkspace::modality_operator(int which, bool use_denoised) {
    auto& slot = cache_->op[which][use_denoised];
    if (!slot) {
        const DataMatrix& d = use_denoised ? denoised(which) : data_[which];
        slot = diffusion_operator(cached_kernel(cache_->kernel[which][use_denoised], d, config_.bandwidth));
    }
    return *slot;
}

const EntropyCurve& FusionWorkspace::entropy_curve(int which, bool use_denoised) {
    auto& slot = cache_->curve[which][use_denoised];
    if (!slot) {
        const Eigen::VectorXd ev = operator_eigenvalues(modality_operator(which, use_denoised));
        slot = select_timescale(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())),
                                config_.t_max, config_.entropy_top_k);
    }
    return *slot;
}

IntegratedOperator FusionWorkspace::powered_product(bool use_denoised, FusionStrategy tag) {
    const DiffusionOperator& p1 = modality_operator(0, use_denoised);
    const DiffusionOperator& p2 = modality_operator(1, use_denoised);
    const EntropyCurve& c1 = entropy_curve(0, use_denoised);
    const EntropyCurve& c2 = entropy_curve(1, use_denoised);
    const auto [t1, t2] = reduce_exponents(c1.elbow, c2.elbow);
    const Eigen::MatrixXd a = stochastic_power(p1.values, t1);
    const Eigen::MatrixXd b = stochastic_power(p2.values, t2);

    IntegratedOperator out;
    out.values = config_.order == FusionOrder::first_then_second ? Eigen::MatrixXd(a * b) : Eigen::MatrixXd(b * a);
    normalize_rows(out.values);
    out.exponents = {t1, t2};
    out.source_elbows = {c1.elbow, c2.elbow};
    out.strategy = tag;
    out.order = config_.order;
    out.row_ids = p1.row_ids;
    out.bandwidths = {cache_->kernel[0][use_denoised]->bandwidth, cache_->kernel[1][use_denoised]->bandwidth};
    out.entropy_curves = {c1, c2};
    return out;
}

IntegratedOperator FusionWorkspace::fuse(FusionStrategy strategy) {
    switch (strategy) {
    case FusionStrategy::integrated:
        return powered_product(true, strategy);
    case FusionStrategy::alternating_powered:
        return powered_product(false, strategy);
    case FusionStrategy::alternating:
    case FusionStrategy::alternating_local: {
        const bool use_denoised = strategy == FusionStrategy::alternating_local;
        IntegratedOperator out = alternating(modality_operator(0, use_denoised), modality_operator(1, use_denoised),
                                             config_.alternating_t, config_.order);
        out.strategy = strategy;
        out.bandwidths = {cache_->kernel[0][use_denoised]->bandwidth, cache_->kernel[1][use_denoised]->bandwidth};
        return out;
    }
    case FusionStrategy::concatenation: {
        const DataMatrix z1 = zscore_columns(data_[0]);
        const DataMatrix z2 = zscore_columns(data_[1]);
        Eigen::MatrixXd joined(z1.rows(), z1.cols() + z2.cols());
        joined << z1.values, z2.values;
        const Kernel k = gaussian_kernel(z1.with_values(std::move(joined)), config_.bandwidth);
        return single_kernel_operator(k, strategy, {k.bandwidth});
    }
    case FusionStrategy::distance_sum: {
        const Eigen::MatrixXd d = squared_distances(data_[0].values) + squared_distances(data_[1].values);
        const Kernel k = gaussian_kernel_from_distances(d, config_.bandwidth, data_[0].row_ids);
        return single_kernel_operator(k, strategy, {k.bandwidth});
    }
    case FusionStrategy::affinity_sum:
    case FusionStrategy::affinity_product: {
        const Kernel& k1 = cached_kernel(cache_->kernel[0][0], data_[0], config_.bandwidth);
        const Kernel& k2 = cached_kernel(cache_->kernel[1][0], data_[1], config_.bandwidth);
        Kernel k;
        k.row_ids = k1.row_ids;
        k.values = strategy == FusionStrategy::affinity_sum ? Eigen::MatrixXd(0.5 * (k1.values + k2.values))
                                                            : Eigen::MatrixXd(k1.values.cwiseProduct(k2.values));
        return single_kernel_operator(k, strategy, {k1.bandwidth, k2.bandwidth});
    }
    }
    throw ConfigError("unhandled fusion strategy");
}

IntegratedOperator integrated(const DataMatrix& first, const DataMatrix& second, const FusionConfig& config) {
    return FusionWorkspace(first, second, config).fuse(FusionStrategy::integrated);
}

IntegratedOperator fuse_baseline(const DataMatrix& first, const DataMatrix& second, FusionStrategy strategy,
                                 const FusionConfig& config) {
    return FusionWorkspace(first, second, config).fuse(strategy);
}

}  // namespace intdiff
