#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "privamp/hash_family.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
    int code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(PRIVAMP_CLI_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
        out.append(buf, got);
    int status = pclose(pipe);
    return RunResult{WEXITSTATUS(status), out};
}

fs::path temp_dir() {
    fs::path dir = fs::temp_directory_path() / "privamp_cli_test";
    fs::create_directories(dir);
    return dir;
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in),
                                     std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("params: extractable length") {
    auto r = run_cli("params --hmin 100 --delta 0.00048828125");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out).at("l") == 80);

    CHECK(json::parse(run_cli("params --hmin 0 --delta 0.25").out).at("l") == 0);
}

TEST_CASE("params: distance for a given output length") {
    auto r = run_cli("params --hmin 20 --l 8");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out).at("delta").get<double>() ==
          Catch::Approx(0.0078125));
}

TEST_CASE("params: short-seed construction") {
    auto r = run_cli(
        "params --hmin 400 --n 1048576 --l 256 --eps 2.3283064365386963e-10");
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("k") == 332);
    CHECK(j.at("s") == 664);
    CHECK(j.at("delta2").get<double>() == Catch::Approx(std::exp2(-256.0)));
    CHECK(j.contains("delta"));
}

TEST_CASE("params: family-driven bound") {
    auto r = run_cli("params --hmin 30 --l 4 --family poly:12:4");
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j.contains("delta"));
    CHECK(j.contains("eps_star"));
    CHECK(j.at("delta").get<double>() > 0.0);
}

TEST_CASE("params: usage errors") {
    CHECK(run_cli("params --delta 0.25").code == 2);      // missing hmin
    CHECK(run_cli("params --hmin 10").code == 2);          // no unknown chosen
    CHECK(run_cli("params --hmin 10 --l 4 --delta 0.1").code == 2);
    CHECK(run_cli("params --hmin 10 --l 8 --family poly:12:4").code == 2);
}

TEST_CASE("extract: identity seed keeps the low bits") {
    auto dir = temp_dir();
    auto in = dir / "in.bin", out = dir / "out.bin";
    write_bytes(in, {0xEF, 0xBE});
    auto r = run_cli("extract --in " + in.string() + " --family mul:16:8" +
                     " --seed-hex 0001 --out " + out.string());
    CHECK(r.code == 0);
    CHECK(read_bytes(out) == std::vector<std::uint8_t>{0xEF});

    std::ifstream meta(out.string() + ".meta");
    std::string line;
    std::getline(meta, line);
    CHECK(line == "bits=8");
}

TEST_CASE("extract: deterministic and zero-preserving") {
    auto dir = temp_dir();
    auto in = dir / "zeros.bin", out1 = dir / "o1.bin", out2 = dir / "o2.bin";
    write_bytes(in, std::vector<std::uint8_t>(16, 0x00));

    for (const char* fam : {"mul:128:32", "poly:128:16:16", "concat:128:8:16"}) {
        auto desc = privamp::hashing::HashFamilyDescriptor::parse(fam);
        std::string seed(desc.seed_bits() / 4, 'a');
        auto r1 = run_cli(std::string("extract --in ") + in.string() +
                          " --family " + fam + " --seed-hex " + seed +
                          " --out " + out1.string());
        CHECK(r1.code == 0);
        auto bytes1 = read_bytes(out1);
        CHECK(bytes1.size() == (desc.l + 7) / 8);
        for (auto b : bytes1) CHECK(b == 0);

        auto r2 = run_cli(std::string("extract --in ") + in.string() +
                          " --family " + fam + " --seed-hex " + seed +
                          " --out " + out2.string());
        CHECK(r2.code == 0);
        CHECK(read_bytes(out2) == bytes1);
    }
}

TEST_CASE("extract: usage errors") {
    auto dir = temp_dir();
    auto in = dir / "short.bin", out = dir / "nope.bin";
    write_bytes(in, {0xAB});
    // input shorter than n bits
    CHECK(run_cli("extract --in " + in.string() +
                  " --family mul:16:8 --seed-hex 0001 --out " + out.string())
              .code == 2);
    // seed length mismatch
    write_bytes(in, {0xAB, 0xCD});
    CHECK(run_cli("extract --in " + in.string() +
                  " --family mul:16:8 --seed-hex 01 --out " + out.string())
              .code == 2);
    // missing input file
    CHECK(run_cli("extract --in " + (dir / "missing.bin").string() +
                  " --family mul:16:8 --seed-hex 0001 --out " + out.string())
              .code == 2);
}

TEST_CASE("family-audit") {
    auto r = run_cli("family-audit --family mul:4:2");
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j.at("delta_hat") == "1/4");
    CHECK(j.at("delta") == "1/4");
    CHECK(j.at("pass") == true);

    CHECK(json::parse(run_cli("family-audit --family poly:12:4").out)
              .at("delta_hat") == "1/8");

    // over budget
    CHECK(run_cli("family-audit --family mul:12:4").code == 2);
    CHECK(run_cli("family-audit --family mul:4:2 --budget 0").code == 2);
}

TEST_CASE("verify subcommand") {
    auto dir = temp_dir();
    auto report = dir / "report.json";
    auto r = run_cli("verify --suite projection --trials 5 --rng-seed 3 --report " +
                     report.string());
    CHECK(r.code == 0);
    std::ifstream rin(report);
    auto j = json::parse(rin);
    CHECK(j.at("suite") == "projection");
    CHECK(j.at("passed") == true);

    CHECK(run_cli("verify --suite nope --trials 5 --rng-seed 3").code == 2);
    CHECK(run_cli("verify --suite metric --trials 0 --rng-seed 3").code == 2);
}

TEST_CASE("unknown subcommand exits with usage error") {
    CHECK(run_cli("frobnicate").code == 2);
    CHECK(run_cli("").code == 2);
}
