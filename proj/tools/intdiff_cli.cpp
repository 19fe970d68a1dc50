// Command-line front end: generate, mgd, entropy, fuse, denoise, embed, eval, benchmark.

#include "intdiff/benchmark.hpp"
#include "intdiff/config.hpp"
#include "intdiff/denoise.hpp"
#include "intdiff/embed.hpp"
#include "intdiff/error.hpp"
#include "intdiff/eval.hpp"
#include "intdiff/format.hpp"
#include "intdiff/fusion.hpp"
#include "intdiff/io.hpp"
#include "intdiff/rng.hpp"
#include "intdiff/run_config.hpp"
#include "intdiff/spectral.hpp"
#include "intdiff/synthetic.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace intdiff;

namespace {

using Override = std::function<void(RunConfig&)>;

template <class T, class Apply>
CLI::Option* flag(CLI::App* app, std::vector<Override>& overrides, const std::string& name, const std::string& help,
          Apply apply) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    overrides.push_back([opt, value, apply](RunConfig& c) {
        if (opt->count() > 0) {
            apply(c, *value);
        }
    });
    return opt;
}

bool is_csv(const std::string& path) {
    return fs::path(path).extension() == ".csv";
}

DataMatrix load_data(const std::string& path, const char* what) {
    if (path.empty()) {
        throw ConfigError(std::string("missing ") + what + " path");
    }
    return is_csv(path) ? load_csv(path) : load_matrix(path);
}

fs::path prepare_output(const RunConfig& c) {
    const fs::path out(c.output);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + out.string() + "': " + ec.message());
    }
    return out;
}

void write_resolved(const fs::path& out, const RunConfig& c, const std::string& command) {
    nlohmann::json j = c;
    j["command"] = command;
    write_text_file(out / "config.json", dump_config(j));
}

std::string to_csv(const std::function<void(std::ostream&)>& writer) {
    std::ostringstream os;
    writer(os);
    return os.str();
}

int cmd_generate(RunConfig& c) {
    const fs::path out = prepare_output(c);
    GenerateSettings& g = c.generate;
    MultimodalSet set;
    if (g.kind == "tree") {
        g.tree.seed = derive_seed(c.seed, "generate/tree");
        set = make_tree(g.tree);
    } else if (g.kind == "coupled") {
        g.coupled.seed = derive_seed(c.seed, "generate/coupled");
        set = make_coupled(g.coupled);
    } else {
        const DataMatrix images = load_idx(g.images);
        const std::vector<int> all_labels = load_idx_labels(g.labels);
        if (static_cast<Index>(all_labels.size()) != images.rows()) {
            throw AlignmentError("digit images and labels differ in length");
        }
        if (g.subset < 1 || g.subset > images.rows()) {
            throw ConfigError("digits subset must lie in [1, " + std::to_string(images.rows()) + "]");
        }
        std::vector<Index> idx(static_cast<std::size_t>(images.rows()));
        std::iota(idx.begin(), idx.end(), Index{0});
        std::mt19937_64 rng(derive_seed(c.seed, "generate/subset"));
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(static_cast<std::size_t>(g.subset));
        std::sort(idx.begin(), idx.end());
        DataMatrix base = images.subset(idx);
        base.values *= g.intensity_scale;
        std::vector<int> labels;
        for (Index i : idx) labels.push_back(all_labels[static_cast<std::size_t>(i)]);
        set = make_noisy_pair(base, g.nu1, g.nu2, derive_seed(c.seed, "generate/noise"), labels);
    }

    save_matrix(out / "modality1.bin", set.modality1);
    save_matrix(out / "modality2.bin", set.modality2);
    save_labels(out / "labels.csv", set.modality1.row_ids, set.labels);
    if (set.ground_truth) {
        save_matrix(out / "ground_truth.bin", *set.ground_truth);
    }
    if (set.geodesics) {
        save_matrix(out / "geodesics.bin", *set.geodesics);
    }
    if (!set.coupled_pairs.empty()) {
        std::string pairs = "feature1,feature2\n";
        for (const auto& [a, b] : set.coupled_pairs) {
            pairs += std::to_string(a) + ',' + std::to_string(b) + '\n';
        }
        write_text_file(out / "pairs.csv", pairs);
    }
    write_resolved(out, c, "generate");
    std::cout << "wrote " << set.size() << " points to " << out.string() << '\n';
    return 0;
}

int cmd_mgd(RunConfig& c) {
    const DataMatrix data = load_data(c.input, "input");
    const fs::path out = prepare_output(c);
    const MgdResult r = mgd_detailed(data, c.fusion.mgd);
    save_matrix(out / "denoised.bin", r.output);
    std::string levels = "depth,correction\n";
    for (std::size_t d = 0; d < r.level_corrections.size(); ++d) {
        levels += std::to_string(d) + ',' + to_chars(r.level_corrections[d]) + '\n';
    }
    write_text_file(out / "mgd_levels.csv", levels);
    write_resolved(out, c, "mgd");
    std::cout << "levels=" << r.level_corrections.size() << " degenerate_stops=" << r.degenerate_stops << '\n';
    return 0;
}

int cmd_entropy(RunConfig& c) {
    const DataMatrix data = load_data(c.input, "input");
    const fs::path out = prepare_output(c);
    const DiffusionOperator op = diffusion_operator(gaussian_kernel(data, c.fusion.bandwidth));
    const Eigen::VectorXd ev = operator_eigenvalues(op);
    const EntropyCurve curve =
        select_timescale(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())), c.fusion.t_max,
                         c.fusion.entropy_top_k);
    write_text_file(out / "entropy.csv", to_csv([&](std::ostream& os) { write_entropy_csv(os, curve); }));
    write_resolved(out, c, "entropy");
    std::cout << "elbow=" << curve.elbow << '\n';
    return 0;
}

int cmd_fuse(RunConfig& c) {
    const FusionStrategy strategy = parse_strategy(c.strategy);
    const DataMatrix a = load_data(c.input1, "input1");
    const DataMatrix b = load_data(c.input2, "input2");
    const fs::path out = prepare_output(c);
    FusionWorkspace ws(a, b, c.fusion);
    const IntegratedOperator op = ws.fuse(strategy);
    save_matrix(out / "operator.bin", op.values);
    if (op.degrees) {
        save_matrix(out / "operator_degrees.bin", Eigen::MatrixXd(*op.degrees));
    }
    nlohmann::json sidecar = op;
    sidecar["seed"] = c.seed;
    sidecar["fusion"] = c.fusion;
    write_text_file(out / "operator.json", dump_config(sidecar));
    for (std::size_t k = 0; k < op.entropy_curves.size(); ++k) {
        write_text_file(out / ("entropy_modality" + std::to_string(k + 1) + ".csv"),
                        to_csv([&](std::ostream& os) { write_entropy_csv(os, op.entropy_curves[k]); }));
    }
    write_resolved(out, c, "fuse");
    std::cout << "strategy=" << to_string(op.strategy) << " exponents=" << op.exponents.first << ','
              << op.exponents.second << '\n';
    return 0;
}

Eigen::MatrixXd load_operator(const RunConfig& c) {
    if (c.operator_path.empty()) {
        throw ConfigError("missing operator path");
    }
    const DataMatrix op = load_matrix(c.operator_path);
    if (op.rows() != op.cols()) {
        throw SizeError("operator must be square");
    }
    return op.values;
}

int cmd_denoise(RunConfig& c) {
    const Eigen::MatrixXd op = load_operator(c);
    const DataMatrix data = load_data(c.input, "input");
    if (c.denoise_t < 1) {
        throw ConfigError("denoise_t must be positive");
    }
    const fs::path out = prepare_output(c);
    save_matrix(out / "denoised.bin", apply_operator(op, data, c.denoise_t));
    write_resolved(out, c, "denoise");
    return 0;
}

int cmd_embed(RunConfig& c) {
    const Eigen::MatrixXd op = load_operator(c);
    if (c.dims < 1 || c.embed_t < 0) {
        throw ConfigError("dims must be positive and embed_t nonnegative");
    }
    std::vector<int> labels;
    if (!c.labels.empty()) {
        labels = load_labels(c.labels);
        if (static_cast<Index>(labels.size()) != op.rows()) {
            throw AlignmentError("labels do not match operator size");
        }
    }
    const fs::path out = prepare_output(c);
    // A degrees file next to the operator means it is D^-1 K; use the symmetric route.
    const fs::path degrees_path = fs::path(c.operator_path).parent_path() / "operator_degrees.bin";
    Embedding e;
    if (fs::exists(degrees_path)) {
        const DataMatrix degrees = load_matrix(degrees_path);
        if (degrees.rows() != op.rows() || degrees.cols() != 1) {
            throw SizeError("operator degrees do not match the operator");
        }
        DiffusionOperator reversible{op, degrees.values.col(0), default_row_ids(op.rows())};
        e = diffusion_map(reversible, c.dims, c.embed_t);
    } else {
        e = diffusion_map(op, c.dims, c.embed_t);
    }
    write_text_file(out / "embedding.csv", to_csv([&](std::ostream& os) { write_embedding_csv(os, e); }));
    if (e.dims() >= 2) {
        write_text_file(out / "embedding.svg",
                        labels.empty() ? scatter_2d(e) : scatter_2d(e, std::span<const int>(labels)));
    }
    write_resolved(out, c, "embed");
    std::cout << "dims=" << e.dims() << (e.complex_pairs ? " complex_pairs" : "")
              << (e.svd_fallback ? " svd_fallback" : "") << '\n';
    return 0;
}

int cmd_eval(RunConfig& c) {
    EvalReport report;
    if (c.metric == "knn") {
        const DataMatrix points = load_data(c.embedding.empty() ? c.input : c.embedding, "embedding");
        if (c.labels.empty()) {
            throw ConfigError("knn needs labels");
        }
        const std::vector<int> labels = load_labels(c.labels);
        report.metric = "knn_accuracy";
        report.value =
            knn_accuracy(points.values, labels, c.knn, derive_seed(c.seed, "eval/split"), c.train_fraction);
        report.n_points = points.rows();
        report.config = {{"k", c.knn}, {"train_fraction", c.train_fraction}, {"seed", c.seed}};
    } else if (c.metric == "demap") {
        const DataMatrix points = load_data(c.embedding.empty() ? c.input : c.embedding, "embedding");
        const DataMatrix geo = load_data(c.geodesics, "geodesics");
        report.metric = "demap";
        report.value = demap(points.values, geo.values);
        report.n_points = points.rows();
    } else if (c.metric == "mi") {
        const DataMatrix a = load_data(c.input1, "input1");
        const DataMatrix b = load_data(c.input2, "input2");
        const DataMatrix pairs = load_data(c.pairs, "pairs");
        if (pairs.cols() != 2 || pairs.rows() == 0) {
            throw ParseError("pairs file needs two columns and at least one row", 1);
        }
        double total = 0.0;
        for (Index p = 0; p < pairs.rows(); ++p) {
            const auto ca = static_cast<Index>(pairs.values(p, 0));
            const auto cb = static_cast<Index>(pairs.values(p, 1));
            if (ca < 0 || ca >= a.cols() || cb < 0 || cb >= b.cols()) {
                throw SizeError("pair column out of range");
            }
            const Eigen::VectorXd x = a.values.col(ca), y = b.values.col(cb);
            const double mi = mutual_information(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                                                 std::span<const double>(y.data(), static_cast<std::size_t>(y.size())),
                                                 c.bins)
                                  .nats;
            report.table[std::to_string(ca) + ":" + std::to_string(cb)] = mi;
            total += mi;
        }
        report.metric = "mutual_information";
        report.value = total / static_cast<double>(pairs.rows());
        report.n_points = a.rows();
        report.config = {{"bins", c.bins}};
    } else {
        throw ConfigError("unknown metric '" + c.metric + "' (knn, demap, mi)");
    }
    const fs::path out = prepare_output(c);
    write_text_file(out / "report.json", dump_config(report.to_json()));
    write_resolved(out, c, "eval");
    std::cout << report.metric << '=' << to_chars(report.value) << '\n';
    return 0;
}

int cmd_benchmark(RunConfig& c) {
    c.benchmark.seed = c.seed;
    c.benchmark.validate();
    const fs::path out = prepare_output(c);
    const BenchmarkResult result = run_benchmark(c.benchmark, [](std::size_t done, std::size_t total) {
        std::cerr << "\rcells " << done << '/' << total << std::flush;
    });
    std::cerr << '\n';
    write_text_file(out / "benchmark.csv", to_csv([&](std::ostream& os) { write_benchmark_csv(os, result); }));
    for (Protocol p : c.benchmark.protocols) {
        write_text_file(out / (std::string(to_string(p)) + ".svg"), line_plot_svg(result, p));
    }
    write_resolved(out, c, "benchmark");
    std::cout << "rows=" << result.rows.size() << '\n';
    return 0;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integrated diffusion: multimodal operator fusion, denoising and benchmarks"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("-c,--config", config_path, "JSON run config; flags override its values");

    std::vector<Override> ov;
    auto common = [&](CLI::App* sub) {
        flag<std::string>(sub, ov, "-o,--out", "Output directory", [](RunConfig& c, auto v) { c.output = v; });
        flag<std::uint64_t>(sub, ov, "--seed", "Root seed", [](RunConfig& c, auto v) { c.seed = v; });
    };
    auto kernel = [&](CLI::App* sub) {
        flag<double>(sub, ov, "--epsilon", "Fixed kernel bandwidth (squared-distance units)", [](RunConfig& c, auto v) {
            c.fusion.bandwidth = Bandwidth::fixed(v);
            c.fusion.mgd.bandwidth = c.fusion.bandwidth;
        });
        flag<int>(sub, ov, "--knn-bandwidth", "k for the median k-NN bandwidth", [](RunConfig& c, auto v) {
            c.fusion.bandwidth = Bandwidth::median_knn(v, c.fusion.bandwidth.scale);
            c.fusion.mgd.bandwidth = c.fusion.bandwidth;
        });
    };
    auto mgd_flags = [&](CLI::App* sub) {
        flag<int>(sub, ov, "--mgd-t", "MGD diffusion steps per level", [](RunConfig& c, auto v) { c.fusion.mgd.t = v; });
        flag<int>(sub, ov, "--tau", "MGD minimum cluster size", [](RunConfig& c, auto v) { c.fusion.mgd.tau = v; });
        flag<int>(sub, ov, "--clusters", "MGD clusters per level", [](RunConfig& c, auto v) { c.fusion.mgd.c = v; });
        flag<int>(sub, ov, "--max-depth", "MGD recursion cap", [](RunConfig& c, auto v) { c.fusion.mgd.max_depth = v; });
    };

    auto* generate = app.add_subcommand("generate", "Write a synthetic multimodal dataset");
    common(generate);
    flag<std::string>(generate, ov, "--kind", "tree, digits or coupled", [](RunConfig& c, auto v) { c.generate.kind = v; });
    flag<double>(generate, ov, "--nu1", "Digit noise for modality 1", [](RunConfig& c, auto v) { c.generate.nu1 = v; });
    flag<double>(generate, ov, "--nu2", "Digit noise for modality 2", [](RunConfig& c, auto v) { c.generate.nu2 = v; });
    flag<int>(generate, ov, "--subset", "Digit subset size", [](RunConfig& c, auto v) { c.generate.subset = v; });
    flag<std::vector<double>>(generate, ov, "--branch-noise", "Tree noise per branch, modality 1",
                              [](RunConfig& c, auto v) { c.generate.tree.branch_noise = v; })
        ->delimiter(',');
    flag<std::vector<double>>(generate, ov, "--branch-noise2", "Tree noise per branch, modality 2",
                              [](RunConfig& c, auto v) { c.generate.tree.branch_noise2 = v; })
        ->delimiter(',');
    flag<double>(generate, ov, "--dropout", "Coupled-feature dropout probability",
                 [](RunConfig& c, auto v) { c.generate.coupled.dropout = v; });

    auto* mgd_cmd = app.add_subcommand("mgd", "Multiscale graph denoising of one matrix");
    common(mgd_cmd);
    kernel(mgd_cmd);
    mgd_flags(mgd_cmd);
    flag<std::string>(mgd_cmd, ov, "-i,--input", "Input matrix (.bin or .csv)", [](RunConfig& c, auto v) { c.input = v; });

    auto* entropy = app.add_subcommand("entropy", "Spectral entropy curve and elbow");
    common(entropy);
    kernel(entropy);
    flag<std::string>(entropy, ov, "-i,--input", "Input matrix", [](RunConfig& c, auto v) { c.input = v; });
    flag<int>(entropy, ov, "--t-max", "Largest timescale", [](RunConfig& c, auto v) { c.fusion.t_max = v; });
    flag<Index>(entropy, ov, "--top-k", "Use only the k largest eigenvalues",
                [](RunConfig& c, auto v) { c.fusion.entropy_top_k = v; });

    auto* fuse = app.add_subcommand("fuse", "Build a fused diffusion operator");
    common(fuse);
    kernel(fuse);
    mgd_flags(fuse);
    flag<std::string>(fuse, ov, "--input1", "Modality 1 matrix", [](RunConfig& c, auto v) { c.input1 = v; });
    flag<std::string>(fuse, ov, "--input2", "Modality 2 matrix", [](RunConfig& c, auto v) { c.input2 = v; });
    flag<std::string>(fuse, ov, "-s,--strategy", "Fusion strategy", [](RunConfig& c, auto v) { c.strategy = v; });
    flag<int>(fuse, ov, "--t-max", "Largest timescale for elbows", [](RunConfig& c, auto v) { c.fusion.t_max = v; });
    flag<std::string>(fuse, ov, "--order", "first_then_second or second_then_first",
                      [](RunConfig& c, auto v) { c.fusion.order = parse_order(v); });
    flag<int>(fuse, ov, "--alternating-t", "Power of the alternating walk",
              [](RunConfig& c, auto v) { c.fusion.alternating_t = v; });

    auto* denoise = app.add_subcommand("denoise", "Apply an operator to data: A^t X");
    common(denoise);
    flag<std::string>(denoise, ov, "--operator", "Operator matrix", [](RunConfig& c, auto v) { c.operator_path = v; });
    flag<std::string>(denoise, ov, "-i,--input", "Data matrix", [](RunConfig& c, auto v) { c.input = v; });
    flag<int>(denoise, ov, "-t,--steps", "Number of applications", [](RunConfig& c, auto v) { c.denoise_t = v; });

    auto* embed = app.add_subcommand("embed", "Diffusion map of an operator");
    common(embed);
    flag<std::string>(embed, ov, "--operator", "Operator matrix", [](RunConfig& c, auto v) { c.operator_path = v; });
    flag<int>(embed, ov, "--dims", "Embedding dimensions", [](RunConfig& c, auto v) { c.dims = v; });
    flag<int>(embed, ov, "-t,--time", "Diffusion time", [](RunConfig& c, auto v) { c.embed_t = v; });
    flag<std::string>(embed, ov, "--labels", "Labels CSV for the scatter plot", [](RunConfig& c, auto v) { c.labels = v; });

    auto* eval = app.add_subcommand("eval", "kNN accuracy, DeMAP or mutual information");
    common(eval);
    flag<std::string>(eval, ov, "--metric", "knn, demap or mi", [](RunConfig& c, auto v) { c.metric = v; });
    flag<std::string>(eval, ov, "--embedding", "Embedding CSV", [](RunConfig& c, auto v) { c.embedding = v; });
    flag<std::string>(eval, ov, "-i,--input", "Point matrix", [](RunConfig& c, auto v) { c.input = v; });
    flag<std::string>(eval, ov, "--labels", "Labels CSV", [](RunConfig& c, auto v) { c.labels = v; });
    flag<std::string>(eval, ov, "--geodesics", "Geodesic distance matrix", [](RunConfig& c, auto v) { c.geodesics = v; });
    flag<std::string>(eval, ov, "--input1", "Modality 1 matrix (mi)", [](RunConfig& c, auto v) { c.input1 = v; });
    flag<std::string>(eval, ov, "--input2", "Modality 2 matrix (mi)", [](RunConfig& c, auto v) { c.input2 = v; });
    flag<std::string>(eval, ov, "--pairs", "Feature pair CSV (mi)", [](RunConfig& c, auto v) { c.pairs = v; });
    flag<int>(eval, ov, "-k", "Neighbours for knn", [](RunConfig& c, auto v) { c.knn = v; });
    flag<int>(eval, ov, "--bins", "Bins per variable for mi", [](RunConfig& c, auto v) { c.bins = v; });

    auto* bench = app.add_subcommand("benchmark", "Run the sweep protocols");
    common(bench);
    flag<std::string>(bench, ov, "--protocols", "Comma-separated protocol list", [](RunConfig& c, auto v) {
        c.benchmark.protocols.clear();
        for (const auto& p : split_list(v)) c.benchmark.protocols.push_back(parse_protocol(p));
    });
    flag<std::string>(bench, ov, "--strategies", "Comma-separated fusion strategies", [](RunConfig& c, auto v) {
        c.benchmark.strategies.clear();
        for (const auto& s : split_list(v)) c.benchmark.strategies.push_back(parse_strategy(s));
    });
    flag<int>(bench, ov, "--seeds", "Replicates per noise level", [](RunConfig& c, auto v) { c.benchmark.seeds = v; });
    flag<int>(bench, ov, "--threads", "Worker threads (0 = all cores)", [](RunConfig& c, auto v) { c.benchmark.threads = v; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            from_json(parse_json_config(read_text_file(config_path), config_path), cfg);
        }
        for (const auto& apply : ov) {
            apply(cfg);
        }
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "generate") return cmd_generate(cfg);
        if (name == "mgd") return cmd_mgd(cfg);
        if (name == "entropy") return cmd_entropy(cfg);
        if (name == "fuse") return cmd_fuse(cfg);
        if (name == "denoise") return cmd_denoise(cfg);
        if (name == "embed") return cmd_embed(cfg);
        if (name == "eval") return cmd_eval(cfg);
        return cmd_benchmark(cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
