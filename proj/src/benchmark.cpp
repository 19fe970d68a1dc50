#include "intdiff/benchmark.hpp"

#include "intdiff/config.hpp"
#include "intdiff/embed.hpp"
#include "intdiff/error.hpp"
#include "intdiff/format.hpp"
#include "intdiff/io.hpp"
#include "intdiff/rng.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace intdiff {

std::string_view to_string(Protocol p) {
    switch (p) {
    case Protocol::digits_knn: return "digits_knn";
    case Protocol::tree_demap: return "tree_demap";
    case Protocol::digits_denoise: return "digits_denoise";
    case Protocol::mi_recovery: return "mi_recovery";
    }
    return "unknown";
}

Protocol parse_protocol(std::string_view name) {
    for (Protocol p : {Protocol::digits_knn, Protocol::tree_demap, Protocol::digits_denoise, Protocol::mi_recovery}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    throw ConfigError("unknown protocol '" + std::string(name) + "'");
}

namespace {

void require_levels(const std::vector<double>& levels, const char* what) {
    if (levels.empty()) {
        throw ConfigError(std::string(what) + " needs at least one level");
    }
    std::vector<double> sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ConfigError(std::string(what) + " levels must be distinct");
    }
    for (double v : levels) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string(what) + " levels must be finite and nonnegative");
        }
    }
}

bool wants(const BenchmarkConfig& c, Protocol p) {
    return std::find(c.protocols.begin(), c.protocols.end(), p) != c.protocols.end();
}

}  // namespace

void BenchmarkConfig::validate() const {
    if (protocols.empty()) {
        throw ConfigError("benchmark needs at least one protocol");
    }
    if (seeds < 1) {
        throw ConfigError("benchmark needs seeds >= 1");
    }
    if (embed_dims < 1 || knn < 1) {
        throw ConfigError("embed_dims and knn must be positive");
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train_fraction must lie in (0, 1)");
    }
    if (threads < 0) {
        throw ConfigError("threads must be >= 0");
    }
    if ((wants(*this, Protocol::digits_knn) || wants(*this, Protocol::digits_denoise) ||
         wants(*this, Protocol::tree_demap)) &&
        strategies.empty()) {
        throw ConfigError("benchmark needs at least one fusion strategy");
    }
    if (wants(*this, Protocol::mi_recovery) && mi_strategies.empty()) {
        throw ConfigError("MI protocol needs at least one denoising strategy");
    }
    if (digits.subset < 10 || !(digits.intensity_scale > 0.0) || !(digits.nu1 >= 0.0) || digits.embed_t < 0) {
        throw ConfigError("invalid digits protocol settings");
    }
    require_levels(digits.nu2, "digits nu2");
    require_levels(tree.levels, "tree");
    require_levels(mi.dropout, "MI dropout");
    for (double p : mi.dropout) {
        if (p > 1.0) {
            throw ConfigError("dropout levels must lie in [0, 1]");
        }
    }
    if (tree.noisy_branch1 < 0 || tree.noisy_branch1 >= tree.tree.branches || tree.noisy_branch2 < 0 ||
        tree.noisy_branch2 >= tree.tree.branches) {
        throw ConfigError("noisy branch index out of range");
    }
    if (!(tree.base_noise >= 0.0) || !(tree.noise_unit >= 0.0) || tree.embed_t < 0) {
        throw ConfigError("invalid tree protocol settings");
    }
    if (mi.bins < 2) {
        throw ConfigError("MI needs at least 2 bins");
    }
}

void to_json(nlohmann::json& j, const BenchmarkConfig& c) {
    std::vector<std::string> protocols, strategies, mi_strategies;
    for (Protocol p : c.protocols) protocols.emplace_back(to_string(p));
    for (FusionStrategy s : c.strategies) strategies.emplace_back(to_string(s));
    for (DenoiseStrategy s : c.mi_strategies) mi_strategies.emplace_back(to_string(s));
    j = {{"protocols", protocols},
         {"strategies", strategies},
         {"mi_strategies", mi_strategies},
         {"seeds", c.seeds},
         {"seed", c.seed},
         {"embed_dims", c.embed_dims},
         {"knn", c.knn},
         {"train_fraction", c.train_fraction},
         {"fusion", c.fusion},
         {"threads", c.threads},
         {"digits",
          {{"images", c.digits.images},
           {"labels", c.digits.labels},
           {"subset", c.digits.subset},
           {"intensity_scale", c.digits.intensity_scale},
           {"nu1", c.digits.nu1},
           {"nu2", c.digits.nu2},
           {"bandwidth", c.digits.bandwidth},
           {"embed_t", c.digits.embed_t}}},
         {"tree",
          {{"tree", c.tree.tree},
           {"base_noise", c.tree.base_noise},
           {"noise_unit", c.tree.noise_unit},
           {"noisy_branch1", c.tree.noisy_branch1},
           {"noisy_branch2", c.tree.noisy_branch2},
           {"levels", c.tree.levels},
           {"bandwidth", c.tree.bandwidth},
           {"embed_t", c.tree.embed_t}}},
         {"mi",
          {{"coupled", c.mi.coupled},
           {"dropout", c.mi.dropout},
           {"bandwidth", c.mi.bandwidth},
           {"bins", c.mi.bins}}}};
}

void from_json(const nlohmann::json& j, BenchmarkConfig& c) {
    using detail::read_key;
    require_known_keys(j,
                       {"protocols", "strategies", "mi_strategies", "seeds", "seed", "embed_dims", "knn",
                        "train_fraction", "fusion", "threads", "digits", "tree", "mi"},
                       "benchmark config");
    if (j.contains("protocols")) {
        std::vector<std::string> names;
        read_key(j, "protocols", names);
        c.protocols.clear();
        for (const auto& n : names) c.protocols.push_back(parse_protocol(n));
    }
    if (j.contains("strategies")) {
        std::vector<std::string> names;
        read_key(j, "strategies", names);
        c.strategies.clear();
        for (const auto& n : names) c.strategies.push_back(parse_strategy(n));
    }
    if (j.contains("mi_strategies")) {
        std::vector<std::string> names;
        read_key(j, "mi_strategies", names);
        c.mi_strategies.clear();
        for (const auto& n : names) c.mi_strategies.push_back(parse_denoise_strategy(n));
    }
    read_key(j, "seeds", c.seeds);
    read_key(j, "seed", c.seed);
    read_key(j, "embed_dims", c.embed_dims);
    read_key(j, "knn", c.knn);
    read_key(j, "train_fraction", c.train_fraction);
    read_key(j, "fusion", c.fusion);
    read_key(j, "threads", c.threads);
    if (j.contains("digits")) {
        const auto& d = j["digits"];
        require_known_keys(d, {"images", "labels", "subset", "intensity_scale", "nu1", "nu2", "bandwidth", "embed_t"},
                           "digits protocol");
        read_key(d, "images", c.digits.images);
        read_key(d, "labels", c.digits.labels);
        read_key(d, "subset", c.digits.subset);
        read_key(d, "intensity_scale", c.digits.intensity_scale);
        read_key(d, "nu1", c.digits.nu1);
        read_key(d, "nu2", c.digits.nu2);
        read_key(d, "bandwidth", c.digits.bandwidth);
        read_key(d, "embed_t", c.digits.embed_t);
    }
    if (j.contains("tree")) {
        const auto& t = j["tree"];
        require_known_keys(t,
                           {"tree", "base_noise", "noise_unit", "noisy_branch1", "noisy_branch2", "levels",
                            "bandwidth", "embed_t"},
                           "tree protocol");
        read_key(t, "tree", c.tree.tree);
        read_key(t, "base_noise", c.tree.base_noise);
        read_key(t, "noise_unit", c.tree.noise_unit);
        read_key(t, "noisy_branch1", c.tree.noisy_branch1);
        read_key(t, "noisy_branch2", c.tree.noisy_branch2);
        read_key(t, "levels", c.tree.levels);
        read_key(t, "bandwidth", c.tree.bandwidth);
        read_key(t, "embed_t", c.tree.embed_t);
    }
    if (j.contains("mi")) {
        const auto& m = j["mi"];
        require_known_keys(m, {"coupled", "dropout", "bandwidth", "bins"}, "MI protocol");
        read_key(m, "coupled", c.mi.coupled);
        read_key(m, "dropout", c.mi.dropout);
        read_key(m, "bandwidth", c.mi.bandwidth);
        read_key(m, "bins", c.mi.bins);
    }
    c.validate();
}

namespace {

struct Keyed {
    std::size_t protocol_rank;
    std::size_t level;
    int seed;
    BenchmarkRow row;
};

struct Cell {
    std::function<std::vector<Keyed>()> run;
};

std::size_t rank_of(const BenchmarkConfig& c, Protocol p) {
    return static_cast<std::size_t>(std::find(c.protocols.begin(), c.protocols.end(), p) - c.protocols.begin());
}

FusionConfig with_bandwidth(FusionConfig f, const Bandwidth& b) {
    f.bandwidth = b;
    f.mgd.bandwidth = b;
    return f;
}

struct DigitsData {
    DataMatrix images;
    std::vector<int> labels;
};

void add_digits_cells(const BenchmarkConfig& c, std::vector<Cell>& cells) {
    const bool knn = wants(c, Protocol::digits_knn);
    const bool den = wants(c, Protocol::digits_denoise);
    if (!knn && !den) {
        return;
    }
    auto data = std::make_shared<DigitsData>();
    data->images = load_idx(c.digits.images);
    data->labels = load_idx_labels(c.digits.labels);
    if (data->labels.size() != static_cast<std::size_t>(data->images.rows())) {
        throw AlignmentError("digit images and labels differ in length");
    }
    if (c.digits.subset > data->images.rows()) {
        throw ConfigError("digits subset larger than the dataset");
    }
    const FusionConfig fusion = with_bandwidth(c.fusion, c.digits.bandwidth);
    for (std::size_t li = 0; li < c.digits.nu2.size(); ++li) {
        for (int s = 0; s < c.seeds; ++s) {
            cells.push_back({[&c, data, fusion, li, s, knn, den] {
                std::vector<Index> idx(static_cast<std::size_t>(data->images.rows()));
                std::iota(idx.begin(), idx.end(), Index{0});
                std::mt19937_64 rng(derive_seed(c.seed, "digits/subset", static_cast<std::uint64_t>(s)));
                std::shuffle(idx.begin(), idx.end(), rng);
                idx.resize(static_cast<std::size_t>(c.digits.subset));
                std::sort(idx.begin(), idx.end());
                DataMatrix base = data->images.subset(idx);
                base.values *= c.digits.intensity_scale;
                std::vector<int> labels;
                labels.reserve(idx.size());
                for (Index i : idx) labels.push_back(data->labels[static_cast<std::size_t>(i)]);

                const double nu2 = c.digits.nu2[li];
                const std::uint64_t noise_seed =
                    derive_seed(derive_seed(c.seed, "digits/noise", static_cast<std::uint64_t>(s)), "level", li);
                const MultimodalSet set = make_noisy_pair(base, c.digits.nu1, nu2, noise_seed, labels);
                const DataMatrix& noisier = nu2 >= c.digits.nu1 ? set.modality2 : set.modality1;
                const std::uint64_t split_seed = derive_seed(c.seed, "digits/split", static_cast<std::uint64_t>(s));

                FusionWorkspace ws(set.modality1, set.modality2, fusion);
                std::vector<Keyed> out;
                for (FusionStrategy st : c.strategies) {
                    const IntegratedOperator op = ws.fuse(st);
                    const std::string name(to_string(st));
                    if (knn) {
                        const Embedding e = diffusion_map(op, c.embed_dims, c.digits.embed_t);
                        const double acc = knn_accuracy(e, labels, c.knn, split_seed, c.train_fraction);
                        out.push_back({rank_of(c, Protocol::digits_knn), li, s,
                                       {Protocol::digits_knn, name, nu2, s, "knn_accuracy", acc}});
                    }
                    if (den) {
                        const Eigen::MatrixXd denoised = op.values * noisier.values;
                        const double acc = knn_accuracy(denoised, labels, c.knn, split_seed, c.train_fraction);
                        out.push_back({rank_of(c, Protocol::digits_denoise), li, s,
                                       {Protocol::digits_denoise, name, nu2, s, "knn_accuracy", acc}});
                    }
                }
                return out;
            }});
        }
    }
}

void add_tree_cells(const BenchmarkConfig& c, std::vector<Cell>& cells) {
    if (!wants(c, Protocol::tree_demap)) {
        return;
    }
    const FusionConfig fusion = with_bandwidth(c.fusion, c.tree.bandwidth);
    for (std::size_t li = 0; li < c.tree.levels.size(); ++li) {
        for (int s = 0; s < c.seeds; ++s) {
            cells.push_back({[&c, fusion, li, s] {
                const double level = c.tree.levels[li];
                TreeSpec spec = c.tree.tree;
                spec.seed = derive_seed(c.seed, "tree", static_cast<std::uint64_t>(s));
                const auto branches = static_cast<std::size_t>(spec.branches);
                spec.branch_noise.assign(branches, c.tree.base_noise);
                spec.branch_noise2.assign(branches, c.tree.base_noise);
                spec.branch_noise[static_cast<std::size_t>(c.tree.noisy_branch1)] += c.tree.noise_unit * level;
                spec.branch_noise2[static_cast<std::size_t>(c.tree.noisy_branch2)] += c.tree.noise_unit * level;
                const MultimodalSet set = make_tree(spec);

                FusionWorkspace ws(set.modality1, set.modality2, fusion);
                std::vector<Keyed> out;
                for (FusionStrategy st : c.strategies) {
                    const IntegratedOperator op = ws.fuse(st);
                    const Embedding e = diffusion_map(op, c.embed_dims, c.tree.embed_t);
                    out.push_back({rank_of(c, Protocol::tree_demap), li, s,
                                   {Protocol::tree_demap, std::string(to_string(st)), level, s, "demap",
                                    demap(e, *set.geodesics)}});
                }
                return out;
            }});
        }
    }
}

void add_mi_cells(const BenchmarkConfig& c, std::vector<Cell>& cells) {
    if (!wants(c, Protocol::mi_recovery)) {
        return;
    }
    const FusionConfig fusion = with_bandwidth(c.fusion, c.mi.bandwidth);
    for (std::size_t li = 0; li < c.mi.dropout.size(); ++li) {
        for (int s = 0; s < c.seeds; ++s) {
            cells.push_back({[&c, fusion, li, s] {
                CoupledSpec spec = c.mi.coupled;
                spec.dropout = c.mi.dropout[li];
                spec.seed = derive_seed(c.seed, "mi", static_cast<std::uint64_t>(s));
                const MultimodalSet set = make_coupled(spec);
                const EvalReport report = mi_recovery_benchmark(set, c.mi_strategies, fusion, c.mi.bins);
                std::vector<Keyed> out;
                for (DenoiseStrategy st : c.mi_strategies) {
                    const std::string name(to_string(st));
                    out.push_back({rank_of(c, Protocol::mi_recovery), li, s,
                                   {Protocol::mi_recovery, name, spec.dropout, s, "mutual_information",
                                    report.table.at(name)}});
                }
                return out;
            }});
        }
    }
}

}  // namespace

BenchmarkResult run_benchmark(const BenchmarkConfig& config, const ProgressFn& progress) {
    config.validate();
    std::vector<Cell> cells;
    add_digits_cells(config, cells);
    add_tree_cells(config, cells);
    add_mi_cells(config, cells);

    std::vector<std::vector<Keyed>> outputs(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex progress_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                outputs[i] = cells[i].run();
            } catch (...) {
                errors[i] = std::current_exception();
            }
            if (progress) {
                std::lock_guard lock(progress_mutex);
                progress(++done, cells.size());
            }
        }
    };

    unsigned threads = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, cells.size())));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }

    std::vector<Keyed> all;
    for (auto& o : outputs) {
        std::move(o.begin(), o.end(), std::back_inserter(all));
    }
    std::stable_sort(all.begin(), all.end(), [](const Keyed& a, const Keyed& b) {
        if (a.protocol_rank != b.protocol_rank) return a.protocol_rank < b.protocol_rank;
        if (a.level != b.level) return a.level < b.level;
        return a.seed < b.seed;
    });
    BenchmarkResult result;
    result.rows.reserve(all.size());
    for (auto& k : all) {
        result.rows.push_back(std::move(k.row));
    }
    return result;
}

double BenchmarkResult::mean(Protocol p, std::string_view strategy, double noise) const {
    double sum = 0.0;
    int count = 0;
    for (const auto& r : rows) {
        if (r.protocol == p && r.strategy == strategy && r.noise == noise) {
            sum += r.value;
            ++count;
        }
    }
    return count == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / count;
}

std::vector<double> BenchmarkResult::noise_levels(Protocol p) const {
    std::vector<double> levels;
    for (const auto& r : rows) {
        if (r.protocol == p && std::find(levels.begin(), levels.end(), r.noise) == levels.end()) {
            levels.push_back(r.noise);
        }
    }
    std::sort(levels.begin(), levels.end());
    return levels;
}

std::vector<std::string> BenchmarkResult::strategies(Protocol p) const {
    std::vector<std::string> names;
    for (const auto& r : rows) {
        if (r.protocol == p && std::find(names.begin(), names.end(), r.strategy) == names.end()) {
            names.push_back(r.strategy);
        }
    }
    return names;
}

void write_benchmark_csv(std::ostream& out, const BenchmarkResult& result) {
    out << "protocol,strategy,noise,seed,metric,value\n";
    for (const auto& r : result.rows) {
        out << to_string(r.protocol) << ',' << r.strategy << ',' << to_chars(r.noise) << ',' << r.seed << ','
            << r.metric << ',' << to_chars(r.value) << '\n';
    }
}

namespace {

double parse_double_field(std::string_view s, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("benchmark CSV: bad number '" + std::string(s) + "'", line);
    }
    return v;
}

}  // namespace

BenchmarkResult read_benchmark_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "protocol,strategy,noise,seed,metric,value") {
        throw ParseError("benchmark CSV header mismatch", 1);
    }
    BenchmarkResult result;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            f.push_back(cell);
        }
        if (f.size() != 6) {
            throw ParseError("benchmark CSV: expected 6 fields", line_no);
        }
        BenchmarkRow r;
        try {
            r.protocol = parse_protocol(f[0]);
        } catch (const ConfigError& e) {
            throw ParseError(std::string("benchmark CSV: ") + e.what(), line_no);
        }
        r.strategy = f[1];
        r.noise = parse_double_field(f[2], line_no);
        r.seed = static_cast<int>(parse_double_field(f[3], line_no));
        r.metric = f[4];
        r.value = parse_double_field(f[5], line_no);
        result.rows.push_back(std::move(r));
    }
    return result;
}

namespace {

constexpr const char* kLineColours[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string line_plot_svg(const BenchmarkResult& result, Protocol p) {
    const std::vector<double> levels = result.noise_levels(p);
    const std::vector<std::string> names = result.strategies(p);
    if (levels.empty()) {
        throw ValidationError("no benchmark rows for protocol " + std::string(to_string(p)));
    }
    std::string metric;
    for (const auto& r : result.rows) {
        if (r.protocol == p) {
            metric = r.metric;
            break;
        }
    }

    std::vector<std::vector<double>> means(names.size());
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t s = 0; s < names.size(); ++s) {
        for (double level : levels) {
            const double m = result.mean(p, names[s], level);
            means[s].push_back(m);
            if (std::isfinite(m)) {
                lo = std::min(lo, m);
                hi = std::max(hi, m);
            }
        }
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double width = 720, height = 480, left = 70, right = 190, top = 40, bottom = 60;
    const double plot_w = width - left - right, plot_h = height - top - bottom;
    const double x0 = levels.front(), x1 = levels.size() > 1 ? levels.back() : levels.front() + 1.0;
    auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * plot_w; };
    auto py = [&](double y) { return top + (hi - y) / (hi - lo) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt2(left) << "\" y=\"24\" font-size=\"14\" font-family=\"sans-serif\">"
        << to_string(p) << "</text>\n";
    svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    svg << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(top + plot_h) << "\" x2=\"" << fmt2(left + plot_w)
        << "\" y2=\"" << fmt2(top + plot_h) << "\"/>\n";
    svg << "<line x1=\"" << fmt2(left) << "\" y1=\"" << fmt2(top) << "\" x2=\"" << fmt2(left) << "\" y2=\""
        << fmt2(top + plot_h) << "\"/>\n";
    svg << "</g>\n<g class=\"ticks\" font-size=\"11\" font-family=\"sans-serif\">\n";
    for (double level : levels) {
        svg << "<text x=\"" << fmt2(px(level)) << "\" y=\"" << fmt2(top + plot_h + 18)
            << "\" text-anchor=\"middle\">" << fmt_tick(level) << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double y = lo + (hi - lo) * k / 4.0;
        svg << "<text x=\"" << fmt2(left - 8) << "\" y=\"" << fmt2(py(y) + 4) << "\" text-anchor=\"end\">"
            << fmt_tick(y) << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text x=\"" << fmt2(left + plot_w / 2) << "\" y=\"" << fmt2(height - 15)
        << "\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">noise</text>\n";
    svg << "<text x=\"15\" y=\"" << fmt2(top + plot_h / 2) << "\" transform=\"rotate(-90 15 " << fmt2(top + plot_h / 2)
        << ")\" text-anchor=\"middle\" font-size=\"12\" font-family=\"sans-serif\">" << metric << "</text>\n";

    svg << "<g class=\"series\">\n";
    for (std::size_t s = 0; s < names.size(); ++s) {
        const char* colour = kLineColours[s % std::size(kLineColours)];
        svg << "<polyline data-strategy=\"" << names[s] << "\" fill=\"none\" stroke=\"" << colour
            << "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (!std::isfinite(means[s][i])) {
                continue;
            }
            svg << (first ? "" : " ") << fmt2(px(levels[i])) << ',' << fmt2(py(means[s][i]));
            first = false;
        }
        svg << "\"/>\n";
    }
    svg << "</g>\n<g class=\"legend\" font-size=\"11\" font-family=\"sans-serif\">\n";
    for (std::size_t s = 0; s < names.size(); ++s) {
        const double y = top + 16.0 * static_cast<double>(s);
        svg << "<g class=\"legend-entry\"><line x1=\"" << fmt2(width - right + 15) << "\" y1=\"" << fmt2(y)
            << "\" x2=\"" << fmt2(width - right + 35) << "\" y2=\"" << fmt2(y) << "\" stroke=\""
            << kLineColours[s % std::size(kLineColours)] << "\" stroke-width=\"2\"/><text x=\""
            << fmt2(width - right + 40) << "\" y=\"" << fmt2(y + 4) << "\">" << names[s] << "</text></g>\n";
    }
    svg << "</g>\n</svg>\n";
    return svg.str();
}

}  // namespace intdiff
