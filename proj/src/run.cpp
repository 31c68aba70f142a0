#include "rotordyn/run.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rotordyn/assembly.hpp"
#include "rotordyn/campbell.hpp"
#include "rotordyn/errors.hpp"
#include "rotordyn/frf.hpp"
#include "rotordyn/modal.hpp"
#include "rotordyn/model_io.hpp"
#include "rotordyn/units.hpp"

namespace rotordyn {

namespace {

// ---------------------------------------------------------------------------
// SHA-256 of the model file, for the provenance header.

class Sha256 {
public:
    void update(const uint8_t* data, size_t len) {
        for (size_t i = 0; i < len; ++i) {
            buffer_[buffer_len_++] = data[i];
            ++total_;
            if (buffer_len_ == 64) {
                process_block();
                buffer_len_ = 0;
            }
        }
    }

    std::string hex_digest() {
        const uint64_t bits = total_ * 8;
        uint8_t pad = 0x80;
        update(&pad, 1);
        const uint8_t zero = 0;
        while (buffer_len_ != 56) update(&zero, 1);
        for (int i = 7; i >= 0; --i) {
            const uint8_t byte = static_cast<uint8_t>(bits >> (8 * i));
            buffer_[buffer_len_++] = byte;
            if (buffer_len_ == 64) {
                process_block();
                buffer_len_ = 0;
            }
        }
        std::ostringstream out;
        for (uint32_t word : state_) {
            char buf[9];
            std::snprintf(buf, sizeof buf, "%08x", word);
            out << buf;
        }
        return out.str();
    }

private:
    static uint32_t rotr(uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void process_block() {
        static constexpr std::array<uint32_t, 64> k = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (uint32_t(buffer_[4 * i]) << 24) | (uint32_t(buffer_[4 * i + 1]) << 16) |
                   (uint32_t(buffer_[4 * i + 2]) << 8) | uint32_t(buffer_[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
        uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
        for (int i = 0; i < 64; ++i) {
            const uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const uint32_t ch = (e & f) ^ (~e & g);
            const uint32_t temp1 = h + s1 + ch + k[static_cast<size_t>(i)] + w[i];
            const uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const uint32_t temp2 = s0 + maj;
            h = g;
            g = f;
            f = e;
            e = d + temp1;
            d = c;
            c = b;
            b = a;
            a = temp1 + temp2;
        }
        state_[0] += a;
        state_[1] += b;
        state_[2] += c;
        state_[3] += d;
        state_[4] += e;
        state_[5] += f;
        state_[6] += g;
        state_[7] += h;
    }

    std::array<uint32_t, 8> state_ = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                      0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    uint8_t buffer_[64] = {};
    size_t buffer_len_ = 0;
    uint64_t total_ = 0;
};

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open model file '" + path + "'");
    Sha256 hash;
    char buf[4096];
    while (in.read(buf, sizeof buf) || in.gcount() > 0)
        hash.update(reinterpret_cast<const uint8_t*>(buf), static_cast<size_t>(in.gcount()));
    return hash.hex_digest();
}

// ---------------------------------------------------------------------------
// Deterministic CSV output: fixed column order, fixed row order, 17
// significant digits, '\n' endings, atomic replace.

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_int(long v) { return std::to_string(v); }

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ModelError("cannot write output file '" + path + "'");
        out << content;
        if (!out) throw ModelError("failed writing output file '" + path + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string provenance_line(const RunConfig& config, const std::string& echo) {
    return "# rotordyn " + std::string(kToolVersion) + " | model=" + config.model_path +
           " sha256=" + sha256_file(config.model_path) + " | " + echo;
}

std::string thermal_echo(const std::optional<ThermalLoad>& thermal) {
    if (!thermal) return "thermal=none";
    if (thermal->mode == ThermalMode::PrescribedForce)
        return "thermal=force axial_force_n=" + fmt(thermal->prescribed_force);
    return "thermal=fixed delta_t_k=" + fmt(thermal->delta_t);
}

std::vector<double> rpm_grid(const RunConfig& config) {
    if (!(config.min_rpm < config.max_rpm) || config.steps < 2)
        throw ModelError("sweep requires --min-rpm < --max-rpm and --steps >= 2");
    std::vector<double> rpm(static_cast<size_t>(config.steps));
    for (int i = 0; i < config.steps; ++i)
        rpm[static_cast<size_t>(i)] =
            config.min_rpm + (config.max_rpm - config.min_rpm) * i / (config.steps - 1);
    return rpm;
}

std::string with_suffix(const std::string& path, const std::string& suffix) {
    const std::filesystem::path p(path);
    std::filesystem::path out = p.parent_path() / p.stem();
    out += suffix;
    out += p.extension();
    return out.string();
}

std::string campbell_csv(const RunConfig& config, const std::vector<double>& rpm,
                         const CampbellData& data, const std::string& echo) {
    std::ostringstream out;
    out << provenance_line(config, echo) << "\n";
    out << "speed_rpm,branch_id,freq_hz,damping_ratio,whirl,mac\n";
    for (size_t i = 0; i < rpm.size(); ++i) {
        for (const Branch& branch : data.branches) {
            if (!branch.covers(static_cast<int>(i))) continue;
            const BranchPoint& point = branch.at(static_cast<int>(i));
            out << fmt(rpm[i]) << ',' << fmt_int(branch.id) << ',' << fmt(rad_s_to_hz(point.omega))
                << ',' << fmt(point.zeta) << ',' << whirl_name(point.whirl) << ',' << fmt(point.mac)
                << "\n";
        }
    }
    return out.str();
}

std::string frf_csv(const RunConfig& config, const FrfResult& frf, const std::string& echo) {
    std::ostringstream out;
    out << provenance_line(config, echo) << "\n";
    out << "freq_hz,re_h,im_h,magnitude,phase_deg,method\n";
    for (size_t i = 0; i < frf.omega.size(); ++i) {
        const std::complex<double> h = frf.h[static_cast<Eigen::Index>(i)];
        out << fmt(rad_s_to_hz(frf.omega[i])) << ',' << fmt(h.real()) << ',' << fmt(h.imag()) << ','
            << fmt(std::abs(h)) << ',' << fmt(std::arg(h) * 180.0 / std::numbers::pi) << ','
            << frf_method_name(frf.method) << "\n";
    }
    return out.str();
}

}  // namespace

DofIndex parse_dof_spec(const std::string& spec) {
    std::istringstream in(spec);
    std::string head, id, dir;
    if (!std::getline(in, head, ':') || !std::getline(in, id, ':') || !std::getline(in, dir) ||
        head != "node" || id.empty())
        throw ModelError("DOF spec must look like node:<id>:<y|z|ty|tz> (got '" + spec + "')");
    DofIndex dof;
    try {
        size_t used = 0;
        dof.node = std::stoi(id, &used);
        if (used != id.size()) throw std::invalid_argument(id);
    } catch (const std::exception&) {
        throw ModelError("DOF spec has a non-integer node id (got '" + spec + "')");
    }
    if (dir == "y") dof.direction = Direction::Y;
    else if (dir == "z") dof.direction = Direction::Z;
    else if (dir == "ty") dof.direction = Direction::ThetaY;
    else if (dir == "tz") dof.direction = Direction::ThetaZ;
    else throw ModelError("DOF spec direction must be y, z, ty or tz (got '" + spec + "')");
    return dof;
}

std::optional<ThermalLoad> effective_thermal(const RunConfig& config, const RotorModel& model) {
    const bool any_flag = config.delta_t_k || config.thermal_mode || config.axial_force_n;
    if (!any_flag) return model.thermal;

    ThermalLoad thermal;
    std::string mode;
    if (config.thermal_mode) {
        mode = *config.thermal_mode;
    } else {
        mode = config.axial_force_n ? "force" : "fixed";
    }
    if (mode == "fixed") {
        if (config.axial_force_n)
            throw ModelError("--axial-force-n requires --thermal-mode force");
        thermal.mode = ThermalMode::FullyConstrainedAxial;
        thermal.delta_t = config.delta_t_k.value_or(0.0);
    } else if (mode == "force") {
        if (!config.axial_force_n)
            throw ModelError("--thermal-mode force requires --axial-force-n");
        thermal.mode = ThermalMode::PrescribedForce;
        thermal.prescribed_force = *config.axial_force_n;
        thermal.delta_t = config.delta_t_k.value_or(0.0);
    } else {
        throw ModelError("--thermal-mode must be 'fixed' or 'force' (got '" + mode + "')");
    }
    return thermal;
}

int run_modes(const RunConfig& config) {
    const RotorModel model = load_model(config.model_path);
    const std::optional<ThermalLoad> thermal = effective_thermal(config, model);
    const double speed = rpm_to_rad_s(config.speed_rpm);
    const AssembledSystem sys = assemble(model, speed, thermal);
    const ModalSolution solution = solve_modes(sys);

    const std::string echo = "modes speed_rpm=" + fmt(config.speed_rpm) + " " + thermal_echo(thermal);
    std::ostringstream out;
    out << provenance_line(config, echo) << "\n";
    out << "mode_index,freq_hz,damping_ratio,whirl,re_s,im_s\n";
    long index = 1;
    for (const Mode& mode : solution.modes) {
        out << fmt_int(index++) << ',' << fmt(rad_s_to_hz(mode.omega)) << ',' << fmt(mode.zeta) << ','
            << whirl_name(mode.whirl) << ',' << fmt(mode.s.real()) << ',' << fmt(mode.s.imag())
            << "\n";
    }
    write_atomic(config.out_path, out.str());
    return kExitOk;
}

int run_campbell(const RunConfig& config) {
    const RotorModel model = load_model(config.model_path);
    const std::optional<ThermalLoad> thermal = effective_thermal(config, model);
    const std::vector<double> rpm = rpm_grid(config);
    std::vector<double> speeds(rpm.size());
    for (size_t i = 0; i < rpm.size(); ++i) speeds[i] = rpm_to_rad_s(rpm[i]);

    const std::string sweep_echo = "campbell min_rpm=" + fmt(config.min_rpm) +
                                   " max_rpm=" + fmt(config.max_rpm) +
                                   " steps=" + fmt_int(config.steps);

    if (!thermal) {
        const CampbellData data = sweep(model, speeds, std::nullopt);
        for (const std::string& warning : data.warnings) std::cerr << "warning: " << warning << "\n";
        write_atomic(config.out_path, campbell_csv(config, rpm, data, sweep_echo + " thermal=none"));
        return kExitOk;
    }

    // Thermal comparison: the requested condition goes to --out, the
    // no-pre-stress baseline to <out stem>_nothermal<ext>, identical grids.
    const CampbellData with_thermal = sweep(model, speeds, thermal);
    const CampbellData baseline = sweep(model, speeds, std::nullopt);
    for (const CampbellData* data : {&with_thermal, &baseline})
        for (const std::string& warning : data->warnings) std::cerr << "warning: " << warning << "\n";
    write_atomic(config.out_path,
                 campbell_csv(config, rpm, with_thermal, sweep_echo + " " + thermal_echo(thermal)));
    write_atomic(with_suffix(config.out_path, "_nothermal"),
                 campbell_csv(config, rpm, baseline, sweep_echo + " thermal=none"));
    return kExitOk;
}

int run_critical(const RunConfig& config) {
    const RotorModel model = load_model(config.model_path);
    const std::optional<ThermalLoad> thermal = effective_thermal(config, model);
    if (!(config.excitation_order > 0.0)) throw ModelError("--order must be positive");
    const std::vector<double> rpm = rpm_grid(config);
    std::vector<double> speeds(rpm.size());
    for (size_t i = 0; i < rpm.size(); ++i) speeds[i] = rpm_to_rad_s(rpm[i]);

    const CampbellData data = sweep(model, speeds, thermal);
    for (const std::string& warning : data.warnings) std::cerr << "warning: " << warning << "\n";
    const std::vector<CriticalSpeed> criticals =
        find_critical_speeds(data, config.excitation_order, make_speed_resolver(model, thermal));

    const std::string echo = "critical order=" + fmt(config.excitation_order) + " min_rpm=" +
                             fmt(config.min_rpm) + " max_rpm=" + fmt(config.max_rpm) +
                             " steps=" + fmt_int(config.steps) + " " + thermal_echo(thermal);
    std::ostringstream out;
    out << provenance_line(config, echo) << "\n";
    out << "branch_id,excitation_order,critical_rpm,residual_hz\n";
    for (const CriticalSpeed& critical : criticals) {
        out << fmt_int(critical.branch_id) << ',' << fmt(critical.excitation_order) << ','
            << fmt(rad_s_to_rpm(critical.speed)) << ',' << fmt(rad_s_to_hz(critical.residual))
            << "\n";
    }
    write_atomic(config.out_path, out.str());
    return kExitOk;
}

int run_frf(const RunConfig& config) {
    const RotorModel model = load_model(config.model_path);
    const std::optional<ThermalLoad> thermal = effective_thermal(config, model);
    if (!(config.fmin_hz < config.fmax_hz) || config.points < 2)
        throw ModelError("frf requires --fmin-hz < --fmax-hz and --points >= 2");
    if (config.fmin_hz < 0.0) throw ModelError("frf requires --fmin-hz >= 0");
    const DofIndex resp = parse_dof_spec(config.resp_dof);
    const DofIndex exc = parse_dof_spec(config.exc_dof);

    std::vector<double> omega(static_cast<size_t>(config.points));
    for (int i = 0; i < config.points; ++i)
        omega[static_cast<size_t>(i)] = hz_to_rad_s(
            config.fmin_hz + (config.fmax_hz - config.fmin_hz) * i / (config.points - 1));

    const double speed = rpm_to_rad_s(config.speed_rpm);
    const AssembledSystem sys = assemble(model, speed, thermal);

    const bool want_modal = config.method == "modal" || config.method == "all";
    const bool want_real13 = config.method == "real13" || config.method == "all";
    const bool want_direct = config.method == "direct" || config.method == "all";
    if (!want_modal && !want_real13 && !want_direct)
        throw ModelError("--method must be modal, real13, direct or all (got '" + config.method + "')");

    std::optional<ModalSolution> solution;
    if (want_modal || want_real13) solution = solve_modes(sys);

    const std::string base_echo = "frf resp=" + config.resp_dof + " exc=" + config.exc_dof +
                                  " fmin_hz=" + fmt(config.fmin_hz) + " fmax_hz=" + fmt(config.fmax_hz) +
                                  " points=" + fmt_int(config.points) + " speed_rpm=" +
                                  fmt(config.speed_rpm) + " " + thermal_echo(thermal);

    const bool multiple = config.method == "all";
    auto out_path = [&](const char* suffix) {
        return multiple ? with_suffix(config.out_path, std::string("_") + suffix) : config.out_path;
    };

    std::optional<FrfResult> modal_frf, real13_frf, direct_frf;
    if (want_modal) modal_frf = receptance_modal(*solution, sys.dof_map, resp, exc, omega);
    if (want_real13) real13_frf = receptance_real_form(*solution, sys.dof_map, resp, exc, omega);
    if (want_direct) direct_frf = receptance_direct(sys, resp, exc, omega);

    if (want_modal)
        write_atomic(out_path("modal"), frf_csv(config, *modal_frf, base_echo + " method=modal"));
    if (want_real13)
        write_atomic(out_path("real13"), frf_csv(config, *real13_frf, base_echo + " method=real13"));
    if (want_direct)
        write_atomic(out_path("direct"), frf_csv(config, *direct_frf, base_echo + " method=direct"));

    // Run-report deviation summary between the synthesis forms.
    if (want_real13) {
        const FrfResult reference =
            modal_frf ? *modal_frf : receptance_modal(*solution, sys.dof_map, resp, exc, omega);
        std::cout << "# deviation real13_vs_modal max_rel=" << fmt(max_relative_deviation(*real13_frf, reference))
                  << "\n";
    }
    if (want_modal && want_direct) {
        std::cout << "# deviation modal_vs_direct max_rel=" << fmt(max_relative_deviation(*modal_frf, *direct_frf))
                  << "\n";
    }
    return kExitOk;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"rotor-bearing lateral dynamics: modes, Campbell diagrams, critical speeds, FRFs"};
    app.require_subcommand(1);

    RunConfig config;

    auto add_common = [&config](CLI::App* cmd) {
        cmd->add_option("--model", config.model_path, "model JSON document")->required();
        cmd->add_option("--out", config.out_path, "output CSV path")->required();
        cmd->add_option("--delta-t-k", config.delta_t_k, "uniform temperature rise (K)");
        cmd->add_option("--thermal-mode", config.thermal_mode,
                        "thermal constraint mode: fixed (axially constrained) or force (prescribed)");
        cmd->add_option("--axial-force-n", config.axial_force_n,
                        "prescribed axial force (N, tension positive; force mode)");
    };
    auto add_sweep = [&config](CLI::App* cmd) {
        cmd->add_option("--min-rpm", config.min_rpm, "sweep start (RPM)")->required();
        cmd->add_option("--max-rpm", config.max_rpm, "sweep end (RPM)")->required();
        cmd->add_option("--steps", config.steps, "number of grid speeds (>= 2)")->required();
    };

    CLI::App* modes = app.add_subcommand("modes", "complex modes at one spin speed");
    add_common(modes);
    modes->add_option("--speed-rpm", config.speed_rpm, "spin speed (RPM)");

    CLI::App* campbell = app.add_subcommand("campbell", "speed sweep with tracked branches");
    add_common(campbell);
    add_sweep(campbell);

    CLI::App* critical = app.add_subcommand("critical", "excitation-order line crossings");
    add_common(critical);
    add_sweep(critical);
    critical->add_option("--order", config.excitation_order, "excitation order s_e (> 0)");

    CLI::App* frf = app.add_subcommand("frf", "cross-receptance over a frequency grid");
    add_common(frf);
    frf->add_option("--resp", config.resp_dof, "response DOF, node:<id>:<y|z|ty|tz>")->required();
    frf->add_option("--exc", config.exc_dof, "excitation DOF, node:<id>:<y|z|ty|tz>")->required();
    frf->add_option("--fmin-hz", config.fmin_hz, "grid start (Hz)")->required();
    frf->add_option("--fmax-hz", config.fmax_hz, "grid end (Hz)")->required();
    frf->add_option("--points", config.points, "grid point count (>= 2)")->required();
    frf->add_option("--method", config.method, "modal | real13 | direct | all");
    frf->add_option("--speed-rpm", config.speed_rpm, "spin speed (RPM)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (modes->parsed()) {
            config.subcommand = Subcommand::Modes;
            return run_modes(config);
        }
        if (campbell->parsed()) {
            config.subcommand = Subcommand::Campbell;
            return run_campbell(config);
        }
        if (critical->parsed()) {
            config.subcommand = Subcommand::Critical;
            return run_critical(config);
        }
        config.subcommand = Subcommand::Frf;
        return run_frf(config);
    } catch (const ModelError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInput;
    } catch (const SolverError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace rotordyn
