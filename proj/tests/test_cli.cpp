#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "vdb/graph_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string tool_path() {
    const char* p = std::getenv("VDBTOOL");
    REQUIRE_MESSAGE(p != nullptr, "VDBTOOL must point at the built binary");
    return p;
}

struct RunOutput {
    int exit_code = -1;
    std::string stdout_text;
};

RunOutput run(const std::string& args) {
    static int counter = 0;
    const fs::path out = fs::temp_directory_path() / ("vdbtool_out_" +
                                                      std::to_string(counter++) + ".txt");
    const std::string cmd = tool_path() + " " + args + " > " + out.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    RunOutput r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream f(out);
    std::stringstream buf;
    buf << f.rdbuf();
    r.stdout_text = buf.str();
    fs::remove(out);
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("construct then compute round trip") {
    const fs::path dir = fs::temp_directory_path() / "vdb_cli_test";
    fs::create_directories(dir);
    const fs::path g6 = dir / "min10.g6";

    RunOutput c = run("construct --n 10 --k 3 --out " + g6.string());
    CHECK(c.exit_code == 0);
    CHECK(c.stdout_text.find("certificate: pass") != std::string::npos);

    RunOutput sombor = run("compute " + g6.string() + " --index sombor --json");
    CHECK(sombor.exit_code == 0);
    json j = json::parse(sombor.stdout_text);
    CHECK(j["n"] == 10);
    CHECK(j["m"] == 12);
    CHECK(j["k"] == 3);
    CHECK(j["ti"].get<double>() == doctest::Approx(42.566441610255355).epsilon(1e-12));

    RunOutput gsc = run("compute " + g6.string() + " --index gsc --alpha 0.5 --json");
    CHECK(json::parse(gsc.stdout_text)["ti"].get<double>() ==
          doctest::Approx(26.719584668915470).epsilon(1e-12));

    fs::remove_all(dir);
}

TEST_CASE("construct writes edge lists with the right classes") {
    const fs::path dir = fs::temp_directory_path() / "vdb_cli_edges";
    fs::create_directories(dir);
    const fs::path edges = dir / "min21.edges";

    RunOutput c = run("construct --n 21 --k 5 --format edges --out " + edges.string());
    CHECK(c.exit_code == 0);

    vdb::Graph g = vdb::parse_edge_list_text(slurp(edges));
    vdb::EdgeClassCounts classes = vdb::edge_class_counts(g);
    CHECK(classes.at(2, 2) == 12);
    CHECK(classes.at(2, 3) == 2);
    CHECK(classes.at(3, 3) == 11);

    fs::remove_all(dir);
}

TEST_CASE("exit codes") {
    // malformed graph6 input
    const fs::path dir = fs::temp_directory_path() / "vdb_cli_err";
    fs::create_directories(dir);
    const fs::path bad = dir / "bad.g6";
    std::ofstream(bad) << "C l\n";
    CHECK(run("compute " + bad.string()).exit_code == 2);

    // unreadable file
    CHECK(run("compute " + (dir / "missing.g6").string()).exit_code == 2);

    // hypothesis violations
    CHECK(run("construct --n 9 --k 3").exit_code == 3);
    CHECK(run("verify --n 8 --k 3 --index sombor --class chemical").exit_code == 3);

    // verification failure
    CHECK(run("property --index gsc --alpha -1 --dmax 20").exit_code == 1);
    CHECK(run("property --index sombor --dmax 20").exit_code == 0);

    // usage error
    CHECK(run("compute").exit_code != 0);
    CHECK(run("frobnicate").exit_code != 0);

    fs::remove_all(dir);
}

TEST_CASE("property sweep front-end") {
    RunOutput r = run("property --index psombor --sweep 1.2:2.0:0.2 --dmax 15 --json");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    REQUIRE(j.is_array());
    CHECK(j.size() == 5);
    for (const auto& e : j) CHECK(e["report"]["pstar_holds"] == "pass");
}

TEST_CASE("descend summary and trace files") {
    const fs::path dir = fs::temp_directory_path() / "vdb_cli_descend";
    fs::remove_all(dir);
    fs::create_directories(dir);

    RunOutput r = run("descend --n 15 --k 3 --seeds 3 --seed 11 --chemical --index sombor "
                      "--trace-dir " + (dir / "traces").string() + " --json");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["all_monotone"] == true);
    CHECK(j["starts"] == 3);
    CHECK(j["all_at_or_above_closed_form"] == true);
    CHECK(fs::exists(dir / "traces" / "descend_11.jsonl"));
    CHECK(fs::exists(dir / "traces" / "descend_13.jsonl"));

    // infeasible pair
    CHECK(run("descend --n 4 --k 4 --seeds 1 --chemical").exit_code == 3);

    fs::remove_all(dir);
}

TEST_CASE("descend from a given start finds no move on a minimum graph") {
    const fs::path dir = fs::temp_directory_path() / "vdb_cli_start";
    fs::create_directories(dir);
    const fs::path g6 = dir / "min.g6";
    run("construct --n 10 --k 3 --out " + g6.string());

    RunOutput r = run("descend --start " + g6.string() + " --index sombor --json");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.stdout_text);
    CHECK(j["total_steps"] == 0);
    CHECK(j["zero_step_runs"] == 1);
    CHECK(j["min_final"].get<double>() ==
          doctest::Approx(42.566441610255355).epsilon(1e-12));

    CHECK(run("descend --seeds 2").exit_code == 2);  // neither --start nor --n/--k

    fs::remove_all(dir);
}

TEST_CASE("--out files are byte-identical across reruns") {
    const fs::path dir = fs::temp_directory_path() / "vdb_cli_det";
    fs::create_directories(dir);
    const fs::path g6 = dir / "g.g6";
    run("construct --n 13 --k 3 --out " + g6.string());

    const fs::path o1 = dir / "r1.json", o2 = dir / "r2.json";
    run("compute " + g6.string() + " --index gsombor --alpha 0.75 --out " + o1.string());
    run("compute " + g6.string() + " --index gsombor --alpha 0.75 --out " + o2.string());
    CHECK(slurp(o1) == slurp(o2));
    CHECK(!slurp(o1).empty());

    const fs::path d1 = dir / "d1.json", d2 = dir / "d2.json";
    run("descend --n 12 --k 3 --seeds 2 --seed 5 --index sombor --out " + d1.string());
    run("descend --n 12 --k 3 --seeds 2 --seed 5 --index sombor --out " + d2.string());
    CHECK(slurp(d1) == slurp(d2));

    fs::remove_all(dir);
}

}  // TEST_SUITE
