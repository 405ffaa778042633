#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "kforge/geomio.hpp"

using namespace kforge;

namespace {

std::shared_ptr<const ProfileSolution> default_solution() {
    static const auto sol = std::make_shared<const ProfileSolution>(
        assemble_profile(ProfileParams::defaults()));
    return sol;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cli(std::vector<std::string> args) {
    std::vector<char*> argv;
    args.insert(args.begin(), "kforge");
    for (auto& a : args) argv.push_back(a.data());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempPath {
    std::string path;
    explicit TempPath(std::string p) : path(std::move(p)) {}
    ~TempPath() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("OBJ export layout and round trip") {
    ImmersionMap m(default_solution());
    const GridSpec grid = GridSpec::full(64, 32);
    TempPath obj("/tmp/kforge_test_mesh.obj");
    TempPath csv(obj.path + ".curvature.csv");
    export_obj(m, grid, obj.path);

    std::ifstream in(obj.path);
    REQUIRE(in.good());
    std::string line;
    std::vector<Eigen::Vector3d> verts;
    int faces = 0;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) {
            Eigen::Vector3d p;
            std::istringstream ls(line.substr(2));
            ls >> p[0] >> p[1] >> p[2];
            verts.push_back(p);
        } else if (line.rfind("f ", 0) == 0) {
            ++faces;
            std::istringstream ls(line.substr(2));
            int idx;
            while (ls >> idx) {
                CHECK(idx >= 1);
                CHECK(idx <= 64 * 32);
            }
        }
    }
    CHECK(verts.size() == 64 * 32);
    CHECK(faces == 64 * 31);
    // vertices reproduce the map to print precision
    for (int j : {0, 13, 31}) {
        for (int i : {0, 7, 63}) {
            const Eigen::Vector3d want = m(grid.u_at(i), grid.v_at(j));
            CHECK((verts[static_cast<std::size_t>(j) * 64 + i] - want).norm() <= 1e-12);
        }
    }
    const std::string cc = slurp(csv.path);
    CHECK(cc.substr(0, cc.find('\n')) == "u,v,H");
}

TEST_CASE("exports are deterministic") {
    ImmersionMap m(default_solution());
    const GridSpec grid = GridSpec::full(32, 16);
    TempPath a("/tmp/kforge_det_a.obj"), b("/tmp/kforge_det_b.obj");
    TempPath ac(a.path + ".curvature.csv"), bc(b.path + ".curvature.csv");
    export_obj(m, grid, a.path);
    export_obj(m, grid, b.path);
    CHECK(slurp(a.path) == slurp(b.path));
    CHECK(slurp(ac.path) == slurp(bc.path));
}

TEST_CASE("JSON embeds the run configuration") {
    RunConfig cfg;
    const Json j = to_json(cfg);
    CHECK(j["profile"]["n"] == 2);
    CHECK(j["profile"]["alpha"] == 0.2);
    CHECK(j["cantor_depth"] == 3);
    CHECK(j["zero_tol"] == 1e-10);
    const Json again = to_json(cfg);
    CHECK(j.dump() == again.dump());
}

TEST_CASE("cli profile subcommand") {
    TempPath out("/tmp/kforge_cli_profile.csv");
    CHECK(cli({"profile", "--out", out.path, "--resolution", "64"}) == 0);
    const std::string text = slurp(out.path);
    CHECK(text.substr(0, text.find('\n')) == "r,nu,psi,rho,delta,mu,c1,c2,theta,psi_eff");
    // 64 samples + header
    CHECK(std::count(text.begin(), text.end(), '\n') == 65);
}

TEST_CASE("cli rejects invalid parameters with exit code 2") {
    CHECK(cli({"profile", "--alpha", "0.2", "--beta", "0.35", "--gamma", "0.5",
               "--out", "/tmp/kforge_cli_bad.csv"}) == 2);
    CHECK(cli({"profile", "--no-such-flag"}) == 2);
    CHECK(cli({"frobnicate"}) == 2);
}

TEST_CASE("cli verify fast suite passes") {
    TempPath out("/tmp/kforge_cli_verify.json");
    CHECK(cli({"verify", "--suite", "fast", "--out", out.path}) == 0);
    const Json rep = Json::parse(slurp(out.path));
    CHECK(rep.contains("config"));
    CHECK(rep.contains("checks"));
    bool all_ok = true;
    for (const auto& c : rep["checks"]) all_ok = all_ok && c["ok"].get<bool>();
    CHECK(all_ok);
}
