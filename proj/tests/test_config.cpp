#include "intdiff/benchmark.hpp"
#include "intdiff/config.hpp"
#include "intdiff/error.hpp"
#include "intdiff/run_config.hpp"

#include <doctest.h>

#include <sstream>

using namespace intdiff;
using nlohmann::json;

namespace {

BenchmarkConfig tiny_tree_benchmark() {
    BenchmarkConfig cfg;
    cfg.protocols = {Protocol::tree_demap};
    cfg.tree.tree.branches = 3;
    cfg.tree.tree.points_per_branch = 20;
    cfg.tree.tree.ambient_dim = 10;
    cfg.tree.noisy_branch1 = 1;
    cfg.tree.noisy_branch2 = 2;
    cfg.tree.levels = {0, 1, 2, 3, 4, 5, 6, 7, 8};
    cfg.fusion.mgd.tau = 16;
    cfg.fusion.t_max = 16;
    cfg.embed_dims = 5;
    cfg.seed = 42;
    return cfg;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
        ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("bandwidth json") {
    json j = Bandwidth::fixed(2.5);
    CHECK(j.at("kind") == "fixed");
    CHECK(j.get<Bandwidth>().epsilon == 2.5);
    j = Bandwidth::median_knn(7, 0.5);
    const Bandwidth b = j.get<Bandwidth>();
    CHECK(b.kind == Bandwidth::Kind::median_knn);
    CHECK(b.knn == 7);
    CHECK(b.scale == 0.5);
    CHECK_THROWS_AS(json::parse(R"({"kind":"adaptive"})").get<Bandwidth>(), ConfigError);
    CHECK_THROWS_AS(json::parse(R"({"kind":"fixed","epsilon":-1})").get<Bandwidth>(), ConfigError);
}

TEST_CASE("fusion config round trip") {
    FusionConfig cfg;
    cfg.mgd.t = 5;
    cfg.mgd.tau = 40;
    cfg.entropy_top_k = 30;
    cfg.order = FusionOrder::second_then_first;
    const json j = cfg;
    const FusionConfig back = j.get<FusionConfig>();
    CHECK(back.mgd.t == 5);
    CHECK(back.mgd.tau == 40);
    CHECK(back.entropy_top_k == Index{30});
    CHECK(back.order == FusionOrder::second_then_first);
    CHECK(json(back) == j);
}

TEST_CASE("partial configs keep defaults") {
    RunConfig cfg;
    from_json(json::parse(R"({"fusion":{"mgd":{"tau":50}},"dims":3})"), cfg);
    CHECK(cfg.fusion.mgd.tau == 50);
    CHECK(cfg.fusion.mgd.t == MgdConfig{}.t);
    CHECK(cfg.dims == 3);
    CHECK(cfg.strategy == "integrated");
}

TEST_CASE("unknown keys are rejected") {
    RunConfig cfg;
    CHECK_THROWS_AS(from_json(json::parse(R"({"dimz":3})"), cfg), ConfigError);
    CHECK_THROWS_AS(from_json(json::parse(R"({"fusion":{"mgd":{"taux":3}}})"), cfg), ConfigError);
    CHECK_THROWS_AS(from_json(json::parse(R"({"dims":"three"})"), cfg), ConfigError);
    CHECK_THROWS_AS(parse_json_config("{not json", "test"), ConfigError);
}

TEST_CASE("run config round trip") {
    RunConfig cfg;
    cfg.seed = 9;
    cfg.generate.kind = "coupled";
    cfg.generate.tree.branch_noise = {0, 1};
    cfg.benchmark.protocols = {Protocol::mi_recovery};
    cfg.benchmark.strategies = {FusionStrategy::alternating};
    const json j = cfg;
    RunConfig back;
    from_json(j, back);
    CHECK(json(back) == j);
    CHECK(dump_config(j) == dump_config(json(back)));
}

TEST_CASE("benchmark config validation") {
    BenchmarkConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.seeds = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    CHECK_THROWS_AS(parse_protocol("fig9"), ConfigError);
    for (Protocol p : BenchmarkConfig{}.protocols) {
        CHECK(parse_protocol(to_string(p)) == p);
    }
}

TEST_CASE("benchmark grid size and reproducibility") {
    const BenchmarkConfig cfg = tiny_tree_benchmark();
    const BenchmarkResult first = run_benchmark(cfg);
    CHECK(first.rows.size() == 8 * 9 * 5);
    CHECK(first.noise_levels(Protocol::tree_demap).size() == 9);
    CHECK(first.strategies(Protocol::tree_demap).size() == 8);

    std::ostringstream a, b;
    write_benchmark_csv(a, first);
    write_benchmark_csv(b, run_benchmark(cfg));
    CHECK(a.str() == b.str());
    CHECK(count_of(a.str(), "\n") == 361);

    std::istringstream in(a.str());
    const BenchmarkResult back = read_benchmark_csv(in);
    std::ostringstream c;
    write_benchmark_csv(c, back);
    CHECK(c.str() == a.str());

    const std::string svg = line_plot_svg(first, Protocol::tree_demap);
    CHECK(count_of(svg, "<polyline") == 8);
    CHECK(count_of(svg, "legend-entry") == 8);
}

TEST_CASE("benchmark csv parse errors name the line") {
    std::istringstream in("protocol,strategy,noise,seed,metric,value\ntree_demap,integrated,1,0,demap,abc\n");
    try {
        read_benchmark_csv(in);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
}

TEST_CASE("seed means") {
    BenchmarkResult r;
    r.rows.push_back({Protocol::mi_recovery, "none", 0.7, 0, "mutual_information", 0.2});
    r.rows.push_back({Protocol::mi_recovery, "none", 0.7, 1, "mutual_information", 0.4});
    CHECK(r.mean(Protocol::mi_recovery, "none", 0.7) == doctest::Approx(0.3));
    CHECK(std::isnan(r.mean(Protocol::mi_recovery, "integrated", 0.7)));
}
