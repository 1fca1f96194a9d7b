#include "cebit/optics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace cebit {

namespace {

constexpr Complex kI{0.0, 1.0};

bool takes_angle(ComponentKind kind) {
    return kind == ComponentKind::Hwp || kind == ComponentKind::Qwp ||
           kind == ComponentKind::Rotator || kind == ComponentKind::Phase;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string_view component_kind_name(ComponentKind kind) {
    switch (kind) {
        case ComponentKind::Hwp: return "HWP";
        case ComponentKind::Qwp: return "QWP";
        case ComponentKind::Rotator: return "ROTATOR";
        case ComponentKind::Phase: return "PHASE";
        case ComponentKind::Pbs: return "PBS";
        case ComponentKind::Bs: return "BS";
        case ComponentKind::Swap: return "SWAP";
        case ComponentKind::DetectorBank: return "DETECTOR_BANK";
    }
    throw std::invalid_argument("unknown component kind");
}

Component Component::hwp(double angle, std::vector<std::uint32_t> beams) {
    return {ComponentKind::Hwp, angle, 0.0, std::move(beams)};
}
Component Component::qwp(double angle, std::vector<std::uint32_t> beams) {
    return {ComponentKind::Qwp, angle, 0.0, std::move(beams)};
}
Component Component::rotator(double angle, std::vector<std::uint32_t> beams) {
    return {ComponentKind::Rotator, angle, 0.0, std::move(beams)};
}
Component Component::phase(double delay, std::vector<std::uint32_t> beams) {
    return {ComponentKind::Phase, delay, 0.0, std::move(beams)};
}
Component Component::pbs(std::uint32_t b0, std::uint32_t b1) {
    return {ComponentKind::Pbs, 0.0, 0.0, {b0, b1}};
}
Component Component::bs(double reflectivity, double phase, std::uint32_t b0, std::uint32_t b1) {
    return {ComponentKind::Bs, reflectivity, phase, {b0, b1}};
}
Component Component::swap_beams(std::uint32_t b0, std::uint32_t b1) {
    return {ComponentKind::Swap, 0.0, 0.0, {b0, b1}};
}
Component Component::detector_bank() { return {ComponentKind::DetectorBank, 0.0, 0.0, {}}; }

Mat2 jones_matrix(ComponentKind kind, double parameter) {
    switch (kind) {
        case ComponentKind::Hwp: {
            double c = std::cos(2.0 * parameter), s = std::sin(2.0 * parameter);
            return {c, s, s, -c};
        }
        case ComponentKind::Qwp: {
            double c = std::cos(parameter), s = std::sin(parameter);
            // R(t) diag(1, i) R(-t)
            return {c * c + kI * s * s, (1.0 - kI) * s * c, (1.0 - kI) * s * c,
                    s * s + kI * c * c};
        }
        case ComponentKind::Rotator: {
            double c = std::cos(parameter), s = std::sin(parameter);
            return {c, -s, s, c};
        }
        case ComponentKind::Phase:
            return {1.0, 0.0, 0.0, std::exp(kI * parameter)};
        default:
            throw std::invalid_argument("component kind has no Jones matrix");
    }
}

Mat2 bs_matrix(double reflectivity, double phase) {
    if (reflectivity < 0.0 || reflectivity > 1.0)
        throw std::invalid_argument("beam splitter reflectivity must lie in [0, 1]");
    double r = std::sqrt(reflectivity);
    double t = std::sqrt(1.0 - reflectivity);
    Complex e = std::exp(kI * phase);
    return {t, r * e, r * e, -t * e * e};
}

void validate_component(const Component& c, int n_cebits) {
    if (n_cebits < 1 || n_cebits > kDefaultCebitCap)
        throw std::invalid_argument("netlist register width out of range");
    const std::uint64_t beam_count = std::uint64_t{1} << (n_cebits - 1);
    for (std::uint32_t b : c.beams)
        if (b >= beam_count) throw std::out_of_range("component touches a beam out of range");
    for (std::size_t i = 0; i < c.beams.size(); ++i)
        for (std::size_t j = i + 1; j < c.beams.size(); ++j)
            if (c.beams[i] == c.beams[j])
                throw std::invalid_argument("component lists a beam twice");
    switch (c.kind) {
        case ComponentKind::Hwp:
        case ComponentKind::Qwp:
        case ComponentKind::Rotator:
        case ComponentKind::Phase:
            if (c.beams.empty())
                throw std::invalid_argument("polarization component needs at least one beam");
            break;
        case ComponentKind::Pbs:
        case ComponentKind::Bs:
        case ComponentKind::Swap:
            if (c.beams.size() != 2)
                throw std::invalid_argument("two-beam component needs exactly two beams");
            if (c.kind == ComponentKind::Bs && (c.param < 0.0 || c.param > 1.0))
                throw std::invalid_argument("beam splitter reflectivity must lie in [0, 1]");
            break;
        case ComponentKind::DetectorBank:
            break;
    }
}

void validate_netlist(const Netlist& nl) {
    for (std::size_t i = 0; i < nl.components.size(); ++i) {
        const Component& c = nl.components[i];
        validate_component(c, nl.n_cebits);
        if (c.kind == ComponentKind::DetectorBank && i + 1 != nl.components.size())
            throw std::invalid_argument("detector bank must be the final component");
    }
}

CebitRegister apply_component(CebitRegister reg, const Component& c) {
    validate_component(c, reg.n_cebits());
    switch (c.kind) {
        case ComponentKind::Hwp:
        case ComponentKind::Qwp:
        case ComponentKind::Rotator: {
            Mat2 u = jones_matrix(c.kind, c.param);
            for (std::uint32_t b : c.beams) {
                Complex v = reg[2 * b], h = reg[2 * b + 1];
                reg[2 * b] = u.a * v + u.b * h;
                reg[2 * b + 1] = u.c * v + u.d * h;
            }
            break;
        }
        case ComponentKind::Phase: {
            Complex e = std::exp(kI * c.param);
            for (std::uint32_t b : c.beams) {
                reg[2 * b] *= e;
                reg[2 * b + 1] *= e;
            }
            break;
        }
        case ComponentKind::Pbs:
            std::swap(reg[2 * c.beams[0] + 1], reg[2 * c.beams[1] + 1]);
            break;
        case ComponentKind::Bs: {
            Mat2 m = bs_matrix(c.param, c.aux);
            for (int pol = 0; pol < 2; ++pol) {
                std::size_t i0 = 2 * c.beams[0] + pol, i1 = 2 * c.beams[1] + pol;
                Complex a0 = reg[i0], a1 = reg[i1];
                reg[i0] = m.a * a0 + m.b * a1;
                reg[i1] = m.c * a0 + m.d * a1;
            }
            break;
        }
        case ComponentKind::Swap:
            std::swap(reg[2 * c.beams[0]], reg[2 * c.beams[1]]);
            std::swap(reg[2 * c.beams[0] + 1], reg[2 * c.beams[1] + 1]);
            break;
        case ComponentKind::DetectorBank:
            break;
    }
    return reg;
}

CebitRegister run_netlist(CebitRegister reg, const Netlist& nl) {
    if (reg.n_cebits() != nl.n_cebits)
        throw std::invalid_argument("register width does not match netlist");
    validate_netlist(nl);
    for (const Component& c : nl.components) reg = apply_component(std::move(reg), c);
    return reg;
}

std::vector<double> detector_intensities(const CebitRegister& reg) {
    std::vector<double> out(reg.dim());
    for (std::size_t i = 0; i < reg.dim(); ++i) out[i] = std::norm(reg[i]);
    return out;
}

Matrix transfer_matrix(const Netlist& nl) {
    if (nl.n_cebits > 12)
        throw std::invalid_argument("transfer matrix capped at 12 cebits (4096 amplitudes)");
    validate_netlist(nl);
    const std::size_t dim = std::size_t{1} << nl.n_cebits;
    Matrix m(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        CebitRegister basis = CebitRegister::zero(nl.n_cebits);
        basis[col] = 1.0;
        CebitRegister out = run_netlist(std::move(basis), nl);
        for (std::size_t row = 0; row < dim; ++row) m.at(row, col) = out[row];
    }
    return m;
}

std::string netlist_to_text(const Netlist& nl) {
    validate_netlist(nl);
    std::string out;
    for (const Component& c : nl.components) {
        out += component_kind_name(c.kind);
        if (takes_angle(c.kind)) {
            out += ' ';
            out += format_double(c.param);
        } else if (c.kind == ComponentKind::Bs) {
            out += ' ';
            out += format_double(c.param);
            out += ' ';
            out += format_double(c.aux);
        }
        for (std::uint32_t b : c.beams) {
            out += ' ';
            out += std::to_string(b);
        }
        out += '\n';
    }
    return out;
}

Netlist netlist_from_text(int n_cebits, std::string_view text) {
    Netlist nl;
    nl.n_cebits = n_cebits;
    std::istringstream lines{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string kind_name;
        if (!(fields >> kind_name)) continue;
        Component c;
        bool known = false;
        for (ComponentKind kind :
             {ComponentKind::Hwp, ComponentKind::Qwp, ComponentKind::Rotator,
              ComponentKind::Phase, ComponentKind::Pbs, ComponentKind::Bs, ComponentKind::Swap,
              ComponentKind::DetectorBank}) {
            if (kind_name == component_kind_name(kind)) {
                c.kind = kind;
                known = true;
                break;
            }
        }
        if (!known)
            throw std::invalid_argument("netlist line " + std::to_string(lineno) +
                                        ": unknown component kind '" + kind_name + "'");
        auto read_double = [&](double& v) {
            if (!(fields >> v))
                throw std::invalid_argument("netlist line " + std::to_string(lineno) +
                                            ": expected a parameter");
        };
        if (takes_angle(c.kind)) {
            read_double(c.param);
        } else if (c.kind == ComponentKind::Bs) {
            read_double(c.param);
            read_double(c.aux);
        }
        long long beam = 0;
        while (fields >> beam) {
            if (beam < 0)
                throw std::invalid_argument("netlist line " + std::to_string(lineno) +
                                            ": negative beam index");
            c.beams.push_back(static_cast<std::uint32_t>(beam));
        }
        if (!fields.eof())
            throw std::invalid_argument("netlist line " + std::to_string(lineno) +
                                        ": malformed field");
        nl.components.push_back(std::move(c));
    }
    validate_netlist(nl);
    return nl;
}

}  // namespace cebit
