#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>

#include <json.hpp>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = DWT_CLI_PATH;
const std::string kData = DWT_DATA_DIR;

int run(const std::string& args, const std::string& out_file = "") {
    std::string cmd = kCli + " " + args;
    if (!out_file.empty()) cmd += " > " + out_file + " 2>/dev/null";
    else cmd += " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

}  // namespace

TEST_CASE("validate accepts fixtures and reports on stdout") {
    write_file("/tmp/dwt_cli_cfg1.json",
               "{\"potential\": \"" + kData + "/golden.json\"}");
    CHECK(run("validate --config /tmp/dwt_cli_cfg1.json", "/tmp/dwt_cli_out1.json") == 0);
    CHECK(slurp("/tmp/dwt_cli_out1.json").find("\"ok\": true") != std::string::npos);
}

TEST_CASE("exit codes distinguish failure classes") {
    // 3: unreadable config path
    CHECK(run("solve --config /nonexistent/cfg.json") == 3);
    // 3: config missing required keys
    write_file("/tmp/dwt_cli_cfg2.json", "{}");
    CHECK(run("solve --config /tmp/dwt_cli_cfg2.json") == 3);
    // 1: validation failure (negative level)
    write_file("/tmp/dwt_cli_bad_pot.json",
               "{\"kind\": \"reduced\", \"H0\": {\"plateaus\": [[1, -2.0]], \"tail\": 1.0},"
               " \"H1\": {\"plateaus\": [], \"tail\": 1.0}}");
    write_file("/tmp/dwt_cli_cfg3.json",
               "{\"potential\": \"/tmp/dwt_cli_bad_pot.json\", \"beta\": 2.0}");
    CHECK(run("validate --config /tmp/dwt_cli_cfg3.json", "/tmp/dwt_cli_out3.json") == 1);
    CHECK(run("solve --config /tmp/dwt_cli_cfg3.json") == 1);
    // 0: same potential through the happy path
    write_file("/tmp/dwt_cli_cfg4.json",
               "{\"potential\": \"" + kData + "/golden.json\", \"beta\": 2.0}");
    CHECK(run("solve --config /tmp/dwt_cli_cfg4.json") == 0);
}

TEST_CASE("solve reports the closed-form eigenvalue for constants") {
    write_file("/tmp/dwt_cli_cfg5.json",
               "{\"potential\": \"" + kData + "/constant.json\", \"beta\": 3.0,"
               " \"words\": [\"0\", \"1\"]}");
    REQUIRE(run("solve --config /tmp/dwt_cli_cfg5.json", "/tmp/dwt_cli_out5.json") == 0);
    auto out = nlohmann::json::parse(slurp("/tmp/dwt_cli_out5.json"));
    // loglam1 = -beta (h0+h1)/2 = -3
    CHECK(out.at(0).at("loglam1").get<double>() == Catch::Approx(-3.0).margin(1e-12));
    CHECK(out.at(0).at("mu").at("0").get<double>() == Catch::Approx(0.5).margin(1e-12));
    CHECK(out.at(0).at("mu").at("1").get<double>() == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("classify emits the balanced-regime profile") {
    write_file("/tmp/dwt_cli_cfg6.json",
               "{\"potential\": \"" + kData + "/golden.json\"}");
    REQUIRE(run("classify --config /tmp/dwt_cli_cfg6.json", "/tmp/dwt_cli_out6.json") == 0);
    std::string out = slurp("/tmp/dwt_cli_out6.json");
    CHECK(out.find("\"regime\": \"barycenter\"") != std::string::npos);
    CHECK(out.find("\"gamma\": 2.0") != std::string::npos);
    CHECK(out.find("\"kappa\": 1") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across reruns") {
    write_file("/tmp/dwt_cli_cfg7.json",
               "{\"potential\": \"" + kData + "/kappa2.json\","
               " \"beta\": {\"min\": 5.0, \"max\": 25.0, \"step\": 5.0}}");
    REQUIRE(run("sweep --config /tmp/dwt_cli_cfg7.json --out /tmp/dwt_cli_sweep_a.csv") == 0);
    REQUIRE(run("sweep --config /tmp/dwt_cli_cfg7.json --out /tmp/dwt_cli_sweep_b.csv") == 0);
    std::string a = slurp("/tmp/dwt_cli_sweep_a.csv");
    CHECK(!a.empty());
    CHECK(a == slurp("/tmp/dwt_cli_sweep_b.csv"));
    CHECK(slurp("/tmp/dwt_cli_sweep_a.csv.slopes.json") ==
          slurp("/tmp/dwt_cli_sweep_b.csv.slopes.json"));

    write_file("/tmp/dwt_cli_cfg8.json",
               "{\"family\": \"constants\","
               " \"s\": {\"min\": 0.5, \"max\": 1.5, \"steps\": 3},"
               " \"t\": {\"min\": 0.5, \"max\": 1.5, \"steps\": 3}}");
    REQUIRE(run("phase-grid --config /tmp/dwt_cli_cfg8.json --out /tmp/dwt_cli_grid_a.csv") == 0);
    REQUIRE(run("phase-grid --config /tmp/dwt_cli_cfg8.json --out /tmp/dwt_cli_grid_b.csv") == 0);
    std::string g = slurp("/tmp/dwt_cli_grid_a.csv");
    CHECK(g.find("s,t,regime,gamma,kappa,c,w0,w1") == 0);
    CHECK(g == slurp("/tmp/dwt_cli_grid_b.csv"));
}

TEST_CASE("barrier and subaction commands produce their tables") {
    write_file("/tmp/dwt_cli_cfg9.json",
               "{\"potential\": \"" + kData + "/golden.json\", \"beta\": 60.0, \"nmax\": 16}");
    REQUIRE(run("barrier --config /tmp/dwt_cli_cfg9.json", "/tmp/dwt_cli_out9.json") == 0);
    std::string out = slurp("/tmp/dwt_cli_out9.json");
    CHECK(out.find("\"nonselection\": false") != std::string::npos);
    CHECK(out.find("\"gamma\": 2.0") != std::string::npos);
    REQUIRE(run("subaction --config /tmp/dwt_cli_cfg9.json", "/tmp/dwt_cli_out10.json") == 0);
    std::string sub = slurp("/tmp/dwt_cli_out10.json");
    CHECK(sub.find("\"supdist_calibrated_vs_limit\": ") != std::string::npos);
    CHECK(sub.find("\"v_limit\"") != std::string::npos);
}

TEST_CASE("oracle-check confirms the analytic solver") {
    write_file("/tmp/dwt_cli_cfg11.json",
               "{\"potential\": \"" + kData + "/golden.json\", \"beta\": [5.0],"
               " \"depth\": 6, \"words_maxlen\": 4}");
    REQUIRE(run("oracle-check --config /tmp/dwt_cli_cfg11.json", "/tmp/dwt_cli_out11.json") == 0);
    std::string out = slurp("/tmp/dwt_cli_out11.json");
    CHECK(out.find("\"rel_lam1_diff\"") != std::string::npos);
    CHECK(out.find("\"max_mu_abs_diff\"") != std::string::npos);
}

TEST_CASE("nonselect runs the bundled schedule") {
    write_file("/tmp/dwt_cli_cfg12.json",
               "{\"schedule\": \"" + kData + "/nonselect_schedule.json\"}");
    REQUIRE(run("nonselect --config /tmp/dwt_cli_cfg12.json --out /tmp/dwt_cli_out12.csv") == 0);
    std::string out = slurp("/tmp/dwt_cli_out12.csv");
    CHECK(out.find("k,beta,mu0,mu1") == 0);
    // six stages -> header plus six rows
    int lines = 0;
    for (char c : out)
        if (c == '\n') ++lines;
    CHECK(lines == 7);
    std::string rules = slurp("/tmp/dwt_cli_out12.csv.rules.json");
    CHECK(rules.find("\"pass\": true") != std::string::npos);
}
