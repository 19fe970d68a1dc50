#include "intdiff/io.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "intdiff_test_cli";

int run(const std::string& args) {
    const std::string command = std::string(INTDIFF_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string bytes(const fs::path& p) { return intdiff::read_text_file(p); }

void write_small_tree_config(const fs::path& path) {
    intdiff::write_text_file(path, R"({"generate":{"tree":{"branches":3,"points_per_branch":20,"ambient_dim":8,
        "branch_noise":[0.1,0.1,0.5]}},"fusion":{"mgd":{"tau":16},"t_max":16}})");
}

}  // namespace

TEST_CASE("generate tree writes six files") {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
    write_small_tree_config(kWork / "tree.json");
    const std::string cfg = "-c " + (kWork / "tree.json").string();
    REQUIRE(run(cfg + " generate -o " + (kWork / "a").string() + " --seed 3") == 0);
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(kWork / "a")) {
        ++files;
    }
    CHECK(files == 6);
    for (const char* name : {"modality1.bin", "modality2.bin", "labels.csv", "ground_truth.bin", "geodesics.bin",
                             "config.json"}) {
        CHECK(fs::exists(kWork / "a" / name));
    }

    std::map<fs::path, std::string> first;
    for (const auto& entry : fs::directory_iterator(kWork / "a")) {
        first[entry.path()] = bytes(entry.path());
    }
    REQUIRE(run(cfg + " generate -o " + (kWork / "a").string() + " --seed 3") == 0);
    for (const auto& [path, contents] : first) {
        CHECK(bytes(path) == contents);
    }
}

TEST_CASE("zero-noise digit pair equals its base") {
    const fs::path out = kWork / "digits";
    const std::string data = INTDIFF_DATA_DIR;
    intdiff::write_text_file(kWork / "digits.json",
                             R"({"generate":{"kind":"digits","subset":200,"images":")" + data +
                                 R"(/digits8x8-images.idx3-ubyte","labels":")" + data +
                                 R"(/digits8x8-labels.idx1-ubyte"}})");
    REQUIRE(run("-c " + (kWork / "digits.json").string() + " generate --nu1 0 --nu2 0 -o " + out.string()) == 0);
    const std::string base = bytes(out / "ground_truth.bin");
    CHECK(bytes(out / "modality1.bin") == base);
    CHECK(bytes(out / "modality2.bin") == base);
}

TEST_CASE("fuse, embed and evaluate") {
    fs::create_directories(kWork);
    write_small_tree_config(kWork / "tree.json");
    const std::string cfg = "-c " + (kWork / "tree.json").string();
    const fs::path data = kWork / "fuse_data";
    REQUIRE(run(cfg + " generate -o " + data.string()) == 0);
    const std::string inputs =
        " --input1 " + (data / "modality1.bin").string() + " --input2 " + (data / "modality2.bin").string();

    const fs::path fused = kWork / "fused";
    REQUIRE(run(cfg + " fuse -s integrated" + inputs + " -o " + fused.string()) == 0);
    const auto sidecar = nlohmann::json::parse(bytes(fused / "operator.json"));
    const int t1 = sidecar.at("exponents").at(0), t2 = sidecar.at("exponents").at(1);
    int a = t1, b = t2;
    while (b != 0) {
        a = std::exchange(b, a % b);
    }
    CHECK(a == 1);
    CHECK(fs::exists(fused / "entropy_modality1.csv"));
    CHECK(fs::exists(fused / "config.json"));

    const fs::path alt = kWork / "alt";
    REQUIRE(run(cfg + " fuse -s alternating --alternating-t 3" + inputs + " -o " + alt.string()) == 0);
    const auto alt_sidecar = nlohmann::json::parse(bytes(alt / "operator.json"));
    CHECK(alt_sidecar.at("exponents") == nlohmann::json::array({3, 3}));

    const fs::path emb = kWork / "emb";
    REQUIRE(run(cfg + " embed --dims 5 --operator " + (fused / "operator.bin").string() + " --labels " +
                (data / "labels.csv").string() + " -o " + emb.string()) == 0);
    CHECK(fs::exists(emb / "embedding.svg"));

    const fs::path rep = kWork / "report";
    REQUIRE(run(cfg + " eval --metric demap --embedding " + (emb / "embedding.csv").string() + " --geodesics " +
                (data / "geodesics.bin").string() + " -o " + rep.string()) == 0);
    const auto report = nlohmann::json::parse(bytes(rep / "report.json"));
    CHECK(report.at("metric") == "demap");
    CHECK(report.at("value").get<double>() > 0.5);
}

TEST_CASE("exit codes") {
    fs::create_directories(kWork);
    CHECK(run("fuse -s fancy --input1 x.bin --input2 y.bin -o " + (kWork / "bad").string()) == 2);
    CHECK(run("denoise --operator " + (kWork / "missing.bin").string() + " -i " + (kWork / "missing.bin").string() +
              " -o " + (kWork / "bad").string()) == 3);
    CHECK(run("") == 2);
    CHECK(run("generate --bogus-flag") == 2);
    intdiff::write_text_file(kWork / "broken.json", R"({"dimz": 4})");
    CHECK(run("-c " + (kWork / "broken.json").string() + " generate -o " + (kWork / "bad").string()) == 2);
}
