// End-to-end checks of the cebitc binary. The test runner provides:
//   CEBITC       absolute path to the built binary
//   CEBIT_DEMOS  directory with the shipped .cbt sources

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "cebit/optics.hpp"

using json = nlohmann::ordered_json;
using namespace cebit;

namespace {

std::string env_or_die(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) throw std::runtime_error(std::string(name) + " is not set");
    return v;
}

std::string cli() { return env_or_die("CEBITC"); }
std::string demo_file(const std::string& rel) { return env_or_die("CEBIT_DEMOS") + "/" + rel; }

struct CmdResult {
    int status = -1;
    std::string output;
};

CmdResult run_cmd(const std::string& cmd, bool merge_stderr = true) {
    std::string full = cmd + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(full.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + full);
    std::string out;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int rc = pclose(pipe);
    CmdResult r;
    r.output = std::move(out);
    if (WIFEXITED(rc)) r.status = WEXITSTATUS(rc);
    return r;
}

json run_json(const std::string& args) {
    CmdResult r = run_cmd(cli() + " " + args, false);
    if (r.status != 0)
        throw std::runtime_error("command failed (" + std::to_string(r.status) + "): " + args);
    return json::parse(r.output);
}

std::string temp_path(const std::string& stem) {
    return "/tmp/cebitc_test_" + std::to_string(::getpid()) + "_" + stem;
}

std::string write_temp(const std::string& stem, const std::string& content) {
    std::string path = temp_path(stem);
    std::ofstream out(path, std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path);
    return path;
}

}  // namespace

TEST_CASE("compile emits a loadable netlist with the documented shape") {
    CmdResult r = run_cmd(cli() + " compile " + demo_file("ghz.cbt"));
    REQUIRE(r.status == 0);
    CHECK(r.output.rfind("# cebits 3\n", 0) == 0);

    Netlist nl = netlist_from_text(3, r.output);
    REQUIRE(nl.components.size() == 15);
    CHECK(nl.components[0] == Component::bs(0.5, 0.0, 0, 2));
    CHECK(nl.components[1] == Component::bs(0.5, 0.0, 1, 3));
    CHECK(nl.components.back() == Component::detector_bank());
    CHECK_NOTHROW(validate_netlist(nl));
}

TEST_CASE("compile --emit json mirrors the netlist") {
    json j = run_json("compile --emit json " + demo_file("ghz.cbt"));
    CHECK(j["n_cebits"] == 3);
    CHECK(j["beams"] == 4);
    REQUIRE(j["components"].size() == 15);
    CHECK(j["components"][0]["kind"] == "BS");
    CHECK(j["components"][0]["reflectivity"] == 0.5);
    CHECK(j["components"][0]["beams"] == json::array({0, 2}));
    CHECK(j["components"].back()["kind"] == "DETECTOR_BANK");
}

TEST_CASE("run reports intensities and the declared correlation") {
    json j = run_json("run " + demo_file("ghz.cbt"));
    CHECK(j["n_cebits"] == 3);
    CHECK(j["total_intensity"] == 1.0);
    CHECK(j["bases"] == "xyy");
    CHECK(j["expectation"] == -1.0);
    REQUIRE(j["intensities"].size() == 8);
    for (const char* dark : {"000", "011", "101", "110"})
        CHECK(j["intensities"][dark] == 0.0);
    for (const char* bright : {"001", "010", "100", "111"})
        CHECK(j["intensities"][bright] == 0.25);
}

TEST_CASE("run --report expectations prints one line") {
    CmdResult r = run_cmd(cli() + " run --report expectations " + demo_file("ghz.cbt"));
    CHECK(r.status == 0);
    CHECK(r.output == "xyy -1\n");
}

TEST_CASE("run --report intensities prints labelled lines") {
    CmdResult r = run_cmd(cli() + " run --report intensities " + demo_file("ghz.cbt"));
    CHECK(r.status == 0);
    CHECK(r.output.rfind("000 0\n", 0) == 0);
    CHECK(r.output.find("001 0.25\n") != std::string::npos);
    CHECK(r.output.find("111 0.25\n") != std::string::npos);
}

TEST_CASE("the grammar tour compiles and runs") {
    CmdResult c = run_cmd(cli() + " compile " + demo_file("grammar_tour.cbt"));
    REQUIRE(c.status == 0);
    CHECK_NOTHROW(netlist_from_text(3, c.output));
    json j = run_json("run " + demo_file("grammar_tour.cbt"));
    CHECK(j["n_cebits"] == 3);
    CHECK(j["total_intensity"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("demo ghz prints the full correlation table") {
    json j = run_json("demo ghz");
    CHECK(j["scenario"] == "ghz");
    CHECK(j["xyy_yxy_yyx_product"] == -1.0);
    CHECK(j["xxx_expectation"] == 1.0);
    REQUIRE(j["settings"].size() == 4);
    for (int i = 0; i < 3; ++i) CHECK(j["settings"][i]["expectation"] == -1.0);
    CHECK(j["settings"][3]["expectation"] == 1.0);
    CHECK(j["settings"][0]["setting"] == "xyy");
    CHECK(j["settings"][0]["dark_ports"] == json::array({"000", "011", "101", "110"}));
    CHECK(j["settings"][3]["dark_ports"] == json::array({"001", "010", "100", "111"}));
}

TEST_CASE("demo ghz honours --setting and rejects junk") {
    json j = run_json("demo ghz --setting yxy");
    REQUIRE(j["settings"].size() == 1);
    CHECK(j["settings"][0]["setting"] == "yxy");
    CHECK(j["settings"][0]["expectation"] == -1.0);

    CmdResult bad = run_cmd(cli() + " demo ghz --setting zzz");
    CHECK(bad.status == 1);
}

TEST_CASE("demo teleport relays the default cebit") {
    json j = run_json("demo teleport");
    CHECK(j["scenario"] == "teleport");
    CHECK(j["fidelity"] == 1.0);
    CHECK(j["c0"] == json::array({0.6, 0.0}));
    CHECK(j["c1"] == json::array({0.0, 0.8}));
    CHECK(j["recovered"]["v"] == json::array({0.6, 0.0}));
    CHECK(j["recovered"]["h"] == json::array({0.0, 0.8}));
    REQUIRE(j["beams"].size() == 4);
}

TEST_CASE("demo teleport accepts explicit preparation phases") {
    json j = run_json("demo teleport --phi1 2.1 --phi2 0.7");
    CHECK(j["phi1"] == 2.1);
    CHECK(j["phi2"] == 0.7);
    CHECK(j["fidelity"] == 1.0);
    double c0re = j["c0"][0].get<double>();
    CHECK(c0re == doctest::Approx(0.5 * (1.0 + std::cos(2.1))).epsilon(1e-9));
}

TEST_CASE("demo teleport --sweep reports the fidelity floor") {
    json j = run_json("demo teleport --sweep 25 --seed 7");
    CHECK(j["sweep"] == 25);
    CHECK(j["seed"] == 7);
    CHECK(j["min_fidelity"].get<double>() >= 1.0 - 1e-12);
    CHECK(j["mean_fidelity"].get<double>() >= j["min_fidelity"].get<double>());
}

TEST_CASE("demo errcorr corrects the default polarization flip") {
    json j = run_json("demo errcorr");
    CHECK(j["scenario"] == "errcorr");
    CHECK(j["variant"] == "flip");
    CHECK(j["error"] == "pol");
    CHECK(j["exit_beam"] == 3);
    CHECK(j["inferred_error"] == "pol");
    CHECK(j["fidelity"] == 1.0);
    CHECK(j["recovered"]["v"] == json::array({0.6, 0.0}));
    CHECK(j["recovered"]["h"] == json::array({0.0, 0.8}));
}

TEST_CASE("demo errcorr exit beams cover all four sites") {
    struct Row {
        const char* site;
        int exit;
    };
    for (Row row : {Row{"none", 0}, Row{"mid", 1}, Row{"msc", 2}, Row{"pol", 3}}) {
        json flip = run_json(std::string("demo errcorr --error ") + row.site);
        CHECK(flip["exit_beam"] == row.exit);
        CHECK(flip["inferred_error"] == row.site);
        json phase = run_json(std::string("demo errcorr --phase-variant --error ") + row.site);
        CHECK(phase["variant"] == "phase");
        CHECK(phase["exit_beam"] == row.exit);
        CHECK(phase["fidelity"] == 1.0);
    }
    CmdResult bad = run_cmd(cli() + " demo errcorr --error bogus");
    CHECK(bad.status == 1);
}

TEST_CASE("demo errcorr --sweep checks every site") {
    json j = run_json("demo errcorr --sweep 10 --seed 3");
    CHECK(j["runs"] == 40);
    CHECK(j["all_inferred_correct"] == true);
    CHECK(j["min_fidelity"].get<double>() >= 1.0 - 1e-12);
}

TEST_CASE("resources --cebits reports the exponential cost") {
    json three = run_json("resources --cebits 3");
    CHECK(three["beams"] == 4);
    CHECK(three["detectors"] == 8);
    CHECK(three["power_fraction_min"] == 0.25);
    json five = run_json("resources --cebits 5");
    CHECK(five["beams"] == 16);
    CHECK(five["detectors"] == 32);
}

TEST_CASE("resources --beams inverts the scaling rule") {
    CHECK(run_json("resources --beams 1e64")["max_cebits"] == 214);
    CHECK(run_json("resources --beams 1e72")["max_cebits"] == 240);
    CHECK(run_json("resources --beams 4")["max_cebits"] == 3);
}

TEST_CASE("resources --circuit counts the compiled components") {
    json j = run_json("resources --circuit " + demo_file("ghz.cbt"));
    CHECK(j["n_cebits"] == 3);
    CHECK(j["beams"] == 4);
    CHECK(j["component_total"] == 15);
    CHECK(j["component_counts"]["BS"] == 8);
    CHECK(j["component_counts"]["HWP"] == 1);
    CHECK(j["component_counts"]["PBS"] == 2);
    CHECK(j["component_counts"]["QWP"] == 1);
    CHECK(j["component_counts"]["PHASE"] == 2);
    CHECK(j["component_counts"]["DETECTOR_BANK"] == 1);
}

TEST_CASE("resources argument validation") {
    CHECK(run_cmd(cli() + " resources").status == 1);
    CHECK(run_cmd(cli() + " resources --cebits 3 --beams 4").status == 1);
    CHECK(run_cmd(cli() + " resources --cebits 0").status == 3);
    CHECK(run_cmd(cli() + " resources --beams 0.5").status == 3);
}

TEST_CASE("decompose factors a 2x2 unitary both ways") {
    std::string file = write_temp("hadamard.json",
                                  "[[0.7071067811865476, 0.7071067811865476],"
                                  " [0.7071067811865476, -0.7071067811865476]]");
    json w = run_json("decompose --method waveplates " + file);
    CHECK(w["method"] == "waveplates");
    CHECK(w["max_error"].get<double>() < 1e-10);
    CHECK(w.contains("theta_q1"));
    CHECK(w.contains("theta_h"));
    CHECK(w.contains("theta_q2"));

    json m = run_json("decompose --method mz " + file);
    CHECK(m["max_error"].get<double>() < 1e-10);
    CHECK(m.contains("phi_in"));
    CHECK(m.contains("phi_arm"));
    CHECK(m.contains("phi_out"));
    std::remove(file.c_str());
}

TEST_CASE("decompose --method multiport meshes a 4x4 unitary") {
    // Complex entries use [re, im]; this is the four-beam Fourier mixer.
    std::string file = write_temp(
        "dft4.json",
        "{\"matrix\": ["
        "[0.5, 0.5, 0.5, 0.5],"
        "[0.5, [0, 0.5], -0.5, [0, -0.5]],"
        "[0.5, -0.5, 0.5, -0.5],"
        "[0.5, [0, -0.5], -0.5, [0, 0.5]]]}");
    json j = run_json("decompose --method multiport " + file);
    CHECK(j["n_beams"] == 4);
    CHECK(j["max_error"].get<double>() < 1e-9);
    CHECK(j["component_count"].get<std::size_t>() <= 4 * 3 / 2 + 4);
    CHECK(j["components"].size() == j["component_count"].get<std::size_t>());
    std::remove(file.c_str());
}

TEST_CASE("decompose rejects bad inputs with the right exit codes") {
    std::string skewed = write_temp("skewed.json", "[[1, 1], [0, 1]]");
    CHECK(run_cmd(cli() + " decompose --method waveplates " + skewed).status == 3);
    std::remove(skewed.c_str());

    std::string garbage = write_temp("garbage.json", "not json at all");
    CHECK(run_cmd(cli() + " decompose --method multiport " + garbage).status == 3);
    std::remove(garbage.c_str());

    CHECK(run_cmd(cli() + " decompose --method waveplates /no/such/file.json").status == 1);
    CHECK(run_cmd(cli() + " decompose --method fft /tmp/whatever.json").status == 1);
}

TEST_CASE("malformed sources exit with code 2 and a position") {
    for (const char* name : {"malformed/bad_char.cbt", "malformed/bad_arity.cbt",
                             "malformed/bad_bounds.cbt"}) {
        CmdResult r = run_cmd(cli() + " compile " + demo_file(name));
        CHECK(r.status == 2);
        CHECK(r.output.find("line ") != std::string::npos);
        CHECK(r.output.find(", column ") != std::string::npos);
        CmdResult rr = run_cmd(cli() + " run " + demo_file(name));
        CHECK(rr.status == 2);
    }
    CmdResult r = run_cmd(cli() + " compile " + demo_file("malformed/bad_char.cbt"));
    CHECK(r.output.find("unexpected character '@'") != std::string::npos);
}

TEST_CASE("semantic errors exit with code 3") {
    std::string late = write_temp("late_expect.cbt", "cebits 1;\nexpect z;\nH pol;\n");
    CHECK(run_cmd(cli() + " compile " + late).status == 3);
    std::remove(late.c_str());

    std::string pos_pair = write_temp("pos_pair.cbt", "cebits 3;\nCNOT pos0 pos1;\n");
    CmdResult r = run_cmd(cli() + " compile " + pos_pair);
    CHECK(r.status == 3);
    CHECK(r.output.find("polarization") != std::string::npos);
    std::remove(pos_pair.c_str());
}

TEST_CASE("usage problems exit with code 1") {
    CHECK(run_cmd(cli() + " compile /no/such/circuit.cbt").status == 1);
    CHECK(run_cmd(cli()).status == 1);
    CHECK(run_cmd(cli() + " frobnicate").status == 1);
    CmdResult help = run_cmd(cli() + " --help");
    CHECK(help.status == 0);
    CHECK(help.output.find("compile") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
    for (const std::string& args :
         {std::string("demo ghz"), std::string("demo teleport --sweep 20 --seed 99"),
          std::string("run ") + demo_file("ghz.cbt")}) {
        CmdResult a = run_cmd(cli() + " " + args);
        CmdResult b = run_cmd(cli() + " " + args);
        CHECK(a.status == 0);
        CHECK(a.output == b.output);
        CHECK(!a.output.empty());
    }
}
