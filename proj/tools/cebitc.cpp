// cebitc: compile, run, and demo driver for the cebit wave-optics toolkit.
//
// Exit codes: 0 success, 1 usage or unreadable file, 2 circuit source parse
// error (message carries line and column), 3 semantic or numeric error.

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cebit/dsl.hpp"
#include "cebit/scenarios.hpp"

using json = nlohmann::ordered_json;
using namespace cebit;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Rounds to 12 significant digits (values below 1e-12 collapse to zero) so
// reports are stable across platforms and FP noise never reaches the output.
double printable(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    if (std::abs(v) < 1e-12) return 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

json jcomplex(Complex z) { return json::array({printable(z.real()), printable(z.imag())}); }

json jjones(const Jones& j) { return json{{"v", jcomplex(j.v)}, {"h", jcomplex(j.h)}}; }

std::string basis_state_label(std::size_t index, int n_cebits) {
    std::string s(static_cast<std::size_t>(n_cebits), '0');
    for (int i = 0; i < n_cebits; ++i)
        if (index >> (n_cebits - 1 - i) & 1) s[static_cast<std::size_t>(i)] = '1';
    return s;
}

// Accepts "1.5", "-2i", "1+2i", "0.6-0.8i", "i", "-i" (also 'j' for the unit).
Complex parse_complex(const std::string& raw) {
    std::string s;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw UsageError("empty complex number");

    auto parse_part = [&](std::string part, bool imaginary) -> double {
        if (imaginary) {
            char tail = part.empty() ? '\0' : part.back();
            if (tail != 'i' && tail != 'I' && tail != 'j')
                throw UsageError("imaginary part of '" + raw + "' must end in i");
            part.pop_back();
            if (part.empty() || part == "+") part = "1";
            else if (part == "-") part = "-1";
        }
        try {
            std::size_t used = 0;
            double v = std::stod(part, &used);
            if (used != part.size()) throw std::invalid_argument(part);
            return v;
        } catch (const std::exception&) {
            throw UsageError("cannot parse complex number '" + raw + "'");
        }
    };

    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    if (split == std::string::npos) {
        char tail = s.back();
        if (tail == 'i' || tail == 'I' || tail == 'j') return {0.0, parse_part(s, true)};
        return {parse_part(s, false), 0.0};
    }
    return {parse_part(s.substr(0, split), false), parse_part(s.substr(split), true)};
}

json component_json(const Component& c) {
    json j;
    j["kind"] = std::string(component_kind_name(c.kind));
    switch (c.kind) {
        case ComponentKind::Hwp:
        case ComponentKind::Qwp:
        case ComponentKind::Rotator:
            j["angle"] = printable(c.param);
            break;
        case ComponentKind::Phase:
            j["phi"] = printable(c.param);
            break;
        case ComponentKind::Bs:
            j["reflectivity"] = printable(c.param);
            j["phase"] = printable(c.aux);
            break;
        default:
            break;
    }
    j["beams"] = c.beams;
    return j;
}

json netlist_json(const Netlist& nl) {
    json j;
    j["n_cebits"] = nl.n_cebits;
    j["beams"] = std::uint64_t{1} << (nl.n_cebits - 1);
    j["components"] = json::array();
    for (const Component& c : nl.components) j["components"].push_back(component_json(c));
    return j;
}

void emit(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

std::pair<Complex, Complex> random_unit_pair(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    Complex a{gauss(rng), gauss(rng)}, b{gauss(rng), gauss(rng)};
    double s = std::sqrt(std::norm(a) + std::norm(b));
    if (s == 0.0) return {Complex{1.0}, Complex{0.0}};
    return {a / s, b / s};
}

FlipTarget flip_target_from_name(const std::string& name) {
    for (FlipTarget t : {FlipTarget::None, FlipTarget::Pol, FlipTarget::Mid, FlipTarget::Msc})
        if (name == flip_target_name(t)) return t;
    throw UsageError("unknown error site '" + name + "' (use none, pol, mid, or msc)");
}

Complex matrix_entry_from_json(const json& e) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
        return {e[0].get<double>(), e[1].get<double>()};
    throw std::invalid_argument("matrix entries must be numbers or [re, im] pairs");
}

Matrix matrix_from_json_file(const std::string& path) {
    json doc;
    try {
        doc = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("matrix file '" + path + "': " + e.what());
    }
    if (doc.is_object() && doc.contains("matrix")) doc = doc["matrix"];
    if (!doc.is_array() || doc.empty())
        throw std::invalid_argument("matrix file must hold a 2-D array (rows of entries)");
    std::size_t rows = doc.size();
    if (!doc[0].is_array() || doc[0].empty())
        throw std::invalid_argument("matrix file must hold a 2-D array (rows of entries)");
    std::size_t cols = doc[0].size();
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!doc[r].is_array() || doc[r].size() != cols)
            throw std::invalid_argument("matrix rows must all have the same length");
        for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = matrix_entry_from_json(doc[r][c]);
    }
    return m;
}

// ---- subcommand bodies ----

int cmd_compile(const std::string& file, const std::string& emit_form) {
    dsl::Ast ast = dsl::parse_source(read_file(file));
    Netlist nl = compile_circuit(dsl::to_circuit(ast));
    if (emit_form == "json") {
        emit(netlist_json(nl));
    } else {
        std::printf("# cebits %d\n%s", nl.n_cebits, netlist_to_text(nl).c_str());
    }
    return 0;
}

int cmd_run(const std::string& file, const std::string& report) {
    dsl::Ast ast = dsl::parse_source(read_file(file));
    GateCircuit circuit = dsl::to_circuit(ast);
    Netlist nl = compile_circuit(circuit);
    CebitRegister reg(circuit.n_cebits,
                      BasisLabel::from_string(std::string(circuit.n_cebits, '0')));
    reg = run_netlist(std::move(reg), nl);
    std::vector<double> intensities = detector_intensities(reg);

    bool has_expect = !circuit.gates.empty() && circuit.gates.back().kind == Gate::Kind::Expect;
    double expectation = 0.0;
    std::string bases_str;
    if (has_expect) {
        const std::vector<PauliAxis>& bases = circuit.gates.back().bases;
        bases_str = pauli_basis_to_string(bases);
        std::size_t mask = 0;
        for (std::size_t c = 0; c < bases.size(); ++c)
            if (bases[c] != PauliAxis::I) mask |= std::size_t{1} << c;
        for (std::size_t b = 0; b < intensities.size(); ++b)
            expectation += (std::popcount(b & mask) & 1) ? -intensities[b] : intensities[b];
    }

    if (report == "intensities") {
        for (std::size_t b = 0; b < intensities.size(); ++b)
            std::printf("%s %.12g\n", basis_state_label(b, circuit.n_cebits).c_str(),
                        printable(intensities[b]));
    } else if (report == "expectations") {
        if (!has_expect)
            throw std::invalid_argument("circuit has no expect statement to report");
        std::printf("%s %.12g\n", bases_str.c_str(), printable(expectation));
    } else {
        json j;
        j["n_cebits"] = circuit.n_cebits;
        j["total_intensity"] = printable(reg.total_intensity());
        json ji = json::object();
        for (std::size_t b = 0; b < intensities.size(); ++b)
            ji[basis_state_label(b, circuit.n_cebits)] = printable(intensities[b]);
        j["intensities"] = ji;
        if (has_expect) {
            j["bases"] = bases_str;
            j["expectation"] = printable(expectation);
        }
        emit(j);
    }
    return 0;
}

json ghz_setting_row(const std::string& letters) {
    PauliBasis basis = pauli_basis_from_string(letters);
    CebitRegister analyzed =
        run_netlist(prepare_named_state(NamedState::Ghz), ghz_interferometer(basis));
    std::vector<double> intensities = detector_intensities(analyzed);
    json row;
    row["setting"] = letters;
    row["expectation"] = printable(pauli_expectation(prepare_named_state(NamedState::Ghz), basis));
    json ji = json::object();
    json dark = json::array();
    for (std::size_t b = 0; b < intensities.size(); ++b) {
        std::string label = basis_state_label(b, 3);
        ji[label] = printable(intensities[b]);
        if (intensities[b] < 1e-12) dark.push_back(label);
    }
    row["intensities"] = ji;
    row["dark_ports"] = dark;
    return row;
}

int cmd_demo_ghz(const std::string& setting) {
    json out;
    out["scenario"] = "ghz";
    json rows = json::array();
    if (setting.empty()) {
        double product = 1.0;
        for (const char* s : {"xyy", "yxy", "yyx"}) {
            json row = ghz_setting_row(s);
            product *= row["expectation"].get<double>();
            rows.push_back(std::move(row));
        }
        json xxx = ghz_setting_row("xxx");
        out["xyy_yxy_yyx_product"] = printable(product);
        out["xxx_expectation"] = xxx["expectation"];
        rows.push_back(std::move(xxx));
    } else {
        rows.push_back(ghz_setting_row(setting));
    }
    out["settings"] = std::move(rows);
    emit(out);
    return 0;
}

json teleport_json(const TeleportOutcome& t) {
    json j;
    j["scenario"] = "teleport";
    j["c0"] = jcomplex(t.c0);
    j["c1"] = jcomplex(t.c1);
    j["phi1"] = printable(t.phi1);
    j["phi2"] = printable(t.phi2);
    json beams = json::array();
    for (const Jones& b : t.beams) beams.push_back(jjones(b));
    j["beams"] = beams;
    j["recovered"] = jjones(t.recovered);
    j["fidelity"] = printable(t.fidelity);
    return j;
}

int cmd_demo_teleport(const std::string& c0_str, const std::string& c1_str, bool have_phis,
                      double phi1, double phi2, int sweep, std::uint64_t seed) {
    if (sweep > 0) {
        std::mt19937_64 rng(seed);
        double min_fid = 1.0, sum_fid = 0.0;
        Complex worst0{1.0}, worst1{0.0};
        for (int i = 0; i < sweep; ++i) {
            auto [c0, c1] = random_unit_pair(rng);
            TeleportOutcome t = teleport(c0, c1);
            sum_fid += t.fidelity;
            if (t.fidelity < min_fid) {
                min_fid = t.fidelity;
                worst0 = c0;
                worst1 = c1;
            }
        }
        json j;
        j["scenario"] = "teleport";
        j["sweep"] = sweep;
        j["seed"] = seed;
        j["min_fidelity"] = min_fid;  // unrounded: the whole point is the tail
        j["mean_fidelity"] = sum_fid / sweep;
        j["worst_c0"] = jcomplex(worst0);
        j["worst_c1"] = jcomplex(worst1);
        emit(j);
        return 0;
    }
    TeleportOutcome t = have_phis ? teleport_with_phases(phi1, phi2)
                                  : teleport(parse_complex(c0_str), parse_complex(c1_str));
    emit(teleport_json(t));
    return 0;
}

json syndrome_json(const SyndromeOutcome& s, Complex c0, Complex c1) {
    json j;
    j["exit_beam"] = s.exit_beam;
    j["inferred_error"] = std::string(flip_target_name(s.error_applied));
    j["recovered"] = jjones(s.recovered);
    j["fidelity"] = printable(jones_fidelity({c0, c1}, s.recovered));
    return j;
}

int cmd_demo_errcorr(const std::string& error_name, const std::string& c0_str,
                     const std::string& c1_str, bool phase_variant, int sweep,
                     std::uint64_t seed) {
    auto run_one = [&](Complex c0, Complex c1, FlipTarget site) -> SyndromeOutcome {
        CebitRegister enc = encode_threefold(c0, c1);
        if (phase_variant) return phase_error_network(enc, site);
        return correct_flips(apply_flip(std::move(enc), site));
    };
    const char* variant = phase_variant ? "phase" : "flip";
    if (sweep > 0) {
        std::mt19937_64 rng(seed);
        double min_fid = 1.0;
        bool all_inferred = true;
        constexpr FlipTarget kSites[4] = {FlipTarget::None, FlipTarget::Pol, FlipTarget::Mid,
                                          FlipTarget::Msc};
        for (int i = 0; i < sweep; ++i) {
            auto [c0, c1] = random_unit_pair(rng);
            for (FlipTarget site : kSites) {
                SyndromeOutcome s = run_one(c0, c1, site);
                all_inferred = all_inferred && s.error_applied == site;
                min_fid = std::min(min_fid, jones_fidelity({c0, c1}, s.recovered));
            }
        }
        json j;
        j["scenario"] = "errcorr";
        j["variant"] = variant;
        j["sweep"] = sweep;
        j["seed"] = seed;
        j["runs"] = sweep * 4;
        j["all_inferred_correct"] = all_inferred;
        j["min_fidelity"] = min_fid;  // unrounded on purpose
        emit(j);
        return 0;
    }
    Complex c0 = parse_complex(c0_str), c1 = parse_complex(c1_str);
    FlipTarget site = flip_target_from_name(error_name);
    SyndromeOutcome s = run_one(c0, c1, site);
    json j;
    j["scenario"] = "errcorr";
    j["variant"] = variant;
    j["error"] = error_name;
    j["c0"] = jcomplex(c0);
    j["c1"] = jcomplex(c1);
    json sj = syndrome_json(s, c0, c1);
    for (auto& [k, v] : sj.items()) j[k] = v;
    emit(j);
    return 0;
}

json resource_json(const ResourceReport& r) {
    json j;
    j["scenario"] = "resources";
    j["n_cebits"] = r.n_cebits;
    j["beams"] = r.beams;
    j["detectors"] = r.detectors;
    j["power_fraction_min"] = r.power_fraction_min;
    return j;
}

int cmd_resources_circuit(const std::string& circuit_file) {
    dsl::Ast ast = dsl::parse_source(read_file(circuit_file));
    Netlist nl = compile_circuit(dsl::to_circuit(ast));
    ResourceReport r = resource_report(nl.n_cebits, &nl);
    json j = resource_json(r);
    json counts = json::object();
    for (const auto& [kind, count] : r.component_counts) counts[kind] = count;
    j["component_counts"] = counts;
    j["component_total"] = nl.components.size();
    emit(j);
    return 0;
}

int cmd_resources_cebits(int n_cebits) {
    emit(resource_json(resource_report(n_cebits)));
    return 0;
}

int cmd_resources_beams(double beam_budget) {
    json j;
    j["scenario"] = "resources";
    j["beam_budget"] = beam_budget;
    j["max_cebits"] = max_cebits(beam_budget);
    emit(j);
    return 0;
}

int cmd_decompose(const std::string& method, const std::string& matrix_file) {
    Matrix u = matrix_from_json_file(matrix_file);
    json j;
    j["method"] = method;
    if (method == "multiport") {
        std::vector<Component> mesh = decompose_multiport(u);
        Matrix rebuilt = multiport_transfer(mesh, u.rows());
        j["n_beams"] = u.rows();
        j["component_count"] = mesh.size();
        j["max_error"] = max_abs_diff(rebuilt, u);  // unrounded
        json comps = json::array();
        for (const Component& c : mesh) comps.push_back(component_json(c));
        j["components"] = comps;
    } else {
        if (u.rows() != 2 || u.cols() != 2)
            throw std::invalid_argument(method + " decomposition needs a 2x2 matrix");
        Mat2 m{u.at(0, 0), u.at(0, 1), u.at(1, 0), u.at(1, 1)};
        if (method == "waveplates") {
            WaveplateAngles w = decompose_su2_waveplates(m);
            j["theta_q1"] = printable(w.theta_q1);
            j["theta_h"] = printable(w.theta_h);
            j["theta_q2"] = printable(w.theta_q2);
            j["max_error"] = phase_aligned_distance(m, waveplate_reconstruction(w));
        } else {
            MachZehnderPhases p = decompose_su2_mz(m);
            j["phi_in"] = printable(p.phi_in);
            j["phi_arm"] = printable(p.phi_arm);
            j["phi_out"] = printable(p.phi_out);
            j["max_error"] = phase_aligned_distance(m, mz_reconstruction(p));
        }
    }
    emit(j);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classical wave-optics cebit toolkit"};
    app.require_subcommand(1);

    // compile
    std::string compile_file, emit_form = "netlist";
    CLI::App* compile = app.add_subcommand("compile", "lower a circuit to an optical netlist");
    compile->add_option("file", compile_file, "circuit source (.cbt)")->required();
    compile->add_option("--emit", emit_form, "output form")
        ->check(CLI::IsMember({"netlist", "json"}))
        ->capture_default_str();

    // run
    std::string run_file, report = "json";
    CLI::App* run = app.add_subcommand("run", "compile and propagate |0...0> through a circuit");
    run->add_option("file", run_file, "circuit source (.cbt)")->required();
    run->add_option("--report", report, "output form")
        ->check(CLI::IsMember({"intensities", "expectations", "json"}))
        ->capture_default_str();

    // demo
    CLI::App* demo = app.add_subcommand("demo", "built-in scenario walkthroughs");
    demo->require_subcommand(1);

    std::string ghz_setting;
    CLI::App* ghz = demo->add_subcommand("ghz", "three-cebit correlation table");
    ghz->add_option("--setting", ghz_setting, "one three-letter setting such as xyy")
        ->check(CLI::IsMember({"xyy", "yxy", "yyx", "xxx"}));

    std::string tp_c0 = "0.6", tp_c1 = "0.8i";
    double tp_phi1 = 0.0, tp_phi2 = 0.0;
    int tp_sweep = 0;
    std::uint64_t tp_seed = 12345;
    CLI::App* tp = demo->add_subcommand("teleport", "interferometric state transfer");
    tp->add_option("--c0", tp_c0, "input amplitude c0 (complex)")->capture_default_str();
    tp->add_option("--c1", tp_c1, "input amplitude c1 (complex)")->capture_default_str();
    CLI::Option* o_phi1 = tp->add_option("--phi1", tp_phi1, "preparation delay phi1");
    CLI::Option* o_phi2 = tp->add_option("--phi2", tp_phi2, "preparation delay phi2");
    tp->add_option("--sweep", tp_sweep, "run this many random states instead");
    tp->add_option("--seed", tp_seed, "sweep RNG seed")->capture_default_str();

    std::string ec_error = "pol", ec_c0 = "0.6", ec_c1 = "0.8i";
    bool ec_phase = false;
    int ec_sweep = 0;
    std::uint64_t ec_seed = 12345;
    CLI::App* ec = demo->add_subcommand("errcorr", "threefold-redundancy error correction");
    ec->add_option("--error", ec_error, "error site: none, pol, mid, or msc")
        ->capture_default_str();
    ec->add_option("--c0", ec_c0, "encoded amplitude c0 (complex)")->capture_default_str();
    ec->add_option("--c1", ec_c1, "encoded amplitude c1 (complex)")->capture_default_str();
    ec->add_flag("--phase-variant", ec_phase, "correct a sigma_z error via Hadamard sandwich");
    ec->add_option("--sweep", ec_sweep, "run this many random states across all four sites");
    ec->add_option("--seed", ec_seed, "sweep RNG seed")->capture_default_str();

    // resources
    int res_cebits = 0;
    double res_beams = 0.0;
    std::string res_circuit;
    CLI::App* res = app.add_subcommand("resources", "beam/detector accounting");
    CLI::Option* o_rc = res->add_option("--cebits", res_cebits, "register width to cost");
    CLI::Option* o_rb = res->add_option("--beams", res_beams, "beam budget to invert");
    CLI::Option* o_rf = res->add_option("--circuit", res_circuit, "circuit file to cost");
    o_rc->excludes(o_rb)->excludes(o_rf);
    o_rb->excludes(o_rf);

    // decompose
    std::string dec_method = "waveplates", dec_file;
    CLI::App* dec = app.add_subcommand("decompose", "factor a unitary into components");
    dec->add_option("--method", dec_method, "waveplates, mz, or multiport")
        ->check(CLI::IsMember({"waveplates", "mz", "multiport"}))
        ->capture_default_str();
    dec->add_option("matrix", dec_file, "JSON file with the matrix (entries: number or [re, im])")
        ->required();

    try {
        app.parse(argc, argv);

        if (*compile) return cmd_compile(compile_file, emit_form);
        if (*run) return cmd_run(run_file, report);
        if (*ghz) return cmd_demo_ghz(ghz_setting);
        if (*tp) {
            bool have_phis = o_phi1->count() > 0 || o_phi2->count() > 0;
            return cmd_demo_teleport(tp_c0, tp_c1, have_phis, tp_phi1, tp_phi2, tp_sweep,
                                     tp_seed);
        }
        if (*ec) return cmd_demo_errcorr(ec_error, ec_c0, ec_c1, ec_phase, ec_sweep, ec_seed);
        if (*res) {
            if (o_rf->count()) return cmd_resources_circuit(res_circuit);
            if (o_rc->count()) return cmd_resources_cebits(res_cebits);
            if (o_rb->count()) return cmd_resources_beams(res_beams);
            throw UsageError("resources needs --cebits, --beams, or --circuit");
        }
        if (*dec) return cmd_decompose(dec_method, dec_file);
        throw UsageError("no subcommand selected");
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const dsl::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
