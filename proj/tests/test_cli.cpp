#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "lrt/gridfile.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LIGHTRAY_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
#ifdef _WIN32
    return rc;
#else
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
#endif
}

fs::path scratch(const std::string& leaf) {
    const fs::path dir = fs::temp_directory_path() / "lrt_cli_tests" / leaf;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("trace writes a readable geodesic polyline") {
    const fs::path dir = scratch("trace");
    const fs::path cfg = dir / "cfg.json";
    write_text(cfg, "{\"output_dir\": \"" + (dir / "out").string() +
                        "\", \"trace\": {\"alpha\": 0.7, \"mu\": 0.25}}");
    REQUIRE(run_cli("-c " + cfg.string() + " trace") == 0);

    const lrt::GridFile g = lrt::GridFile::read((dir / "out" / "geodesic.grid").string());
    CHECK(g.field_kind == "geodesic");
    CHECK(g.components == 5);
    REQUIRE(g.axes.size() == 1);
    REQUIRE(g.data.size() == g.expected_len());
    CHECK(g.data[0] == 0.0);  // arc length starts at zero
    for (double v : g.data) REQUIRE(std::isfinite(v));
    const std::size_t last = g.data.size() - 5;
    CHECK(std::hypot(g.data[last + 1], g.data[last + 2]) ==
          doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("forward-ray output is byte-reproducible") {
    const fs::path dir = scratch("repro");
    for (const char* leaf : {"a", "b"}) {
        const fs::path cfg = dir / (std::string(leaf) + ".json");
        write_text(cfg, "{\"output_dir\": \"" + (dir / leaf).string() +
                            "\", \"metric\": \"gaussian-bump:0.1,0.5\","
                            " \"rays\": {\"n_base\": 8, \"n_dir\": 9}}");
        REQUIRE(run_cli("-c " + cfg.string() + " forward-ray") == 0);
    }
    const std::string a = read_bytes(dir / "a" / "sinogram.grid");
    const std::string b = read_bytes(dir / "b" / "sinogram.grid");
    REQUIRE(!a.empty());
    CHECK(a == b);
}

TEST_CASE("selftest battery passes end to end") {
    const fs::path dir = scratch("selftest");
    CHECK(run_cli("--set=output_dir=" + (dir / "out").string() + " selftest") == 0);
}

TEST_CASE("bad inputs exit with code 1") {
    const fs::path dir = scratch("bad");
    const fs::path bad = dir / "bad.json";
    write_text(bad, "{\"grid\": {\"nz\": 3}}");
    CHECK(run_cli("-c " + bad.string() + " trace") == 1);
    CHECK(run_cli("-c " + (dir / "missing.json").string() + " trace") == 1);
    CHECK(run_cli("--set=grid.nt=4 trace") == 1);
    CHECK(run_cli("--bogus trace") == 1);
    CHECK(run_cli("") == 1);  // a subcommand is required
}
