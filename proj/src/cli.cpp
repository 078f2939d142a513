#include "cst/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <random>

#include <CLI11.hpp>

#include "cst/error.hpp"
#include "cst/harmonics.hpp"
#include "cst/io.hpp"
#include "cst/kernel.hpp"
#include "cst/parallel.hpp"
#include "cst/phantom.hpp"
#include "cst/projector.hpp"
#include "cst/reconstruct.hpp"
#include "cst/system.hpp"

namespace cst {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

class Log {
  public:
    bool quiet = false;
    bool json_lines = false;

    void info(const std::string& event, const std::string& message, const json& fields = json::object()) const {
        if (quiet) return;
        if (json_lines) {
            json line = fields;
            line["event"] = event;
            line["message"] = message;
            std::cerr << line.dump() << '\n';
        } else {
            std::cerr << "[" << event << "] " << message << '\n';
        }
    }
};

struct Timer {
    Clock::time_point start = Clock::now();
    double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

struct Common {
    Log log;
    std::string config_path;
    std::optional<std::string> manifest_path;
};

RunManifest new_manifest(const std::string& command, const std::optional<RunConfig>& config) {
    RunManifest m;
    m.command = command;
    m.code_version = CST_VERSION;
    m.rng_algorithm = rng_algorithm;
    if (config) {
        m.config = config_to_json(*config);
        m.config_hash = config_hash(m.config);
        m.seed = config->noise.seed;
    }
    return m;
}

void finish(const Common& common, RunManifest& manifest, const fs::path& fallback) {
    const fs::path path = common.manifest_path ? fs::path(*common.manifest_path)
                                               : fs::path(fallback.string() + ".manifest.json");
    write_manifest(path, manifest);
    common.log.info("manifest", path.string());
}

RunConfig config_or_default(const std::string& path) {
    if (path.empty()) return parse_config(json::object());
    return load_config(path);
}

void timed(RunManifest& manifest, const Log& log, const std::string& stage, const std::function<void()>& body) {
    const Timer t;
    body();
    manifest.timings.emplace_back(stage, t.seconds());
    log.info(stage, "done in " + std::to_string(t.seconds()) + " s", {{"stage", stage}, {"seconds", t.seconds()}});
}

void check_matrices(const KernelMatrixSet& set, const ScanConfig& scan) {
    if (set.M != scan.N_p || set.order() < scan.N || set.R != scan.R || set.r_M_star != scan.r_M_star)
        throw ShapeError("kernel matrices do not match the scan configuration");
}

int cmd_phantom(const Common& c, const std::string& out) {
    const RunConfig config = config_or_default(c.config_path);
    auto manifest = new_manifest("phantom", config);
    Volume volume;
    timed(manifest, c.log, "phantom", [&] { volume = make_phantom(config.phantom); });
    if (support_below(volume, config.scan.r_m)) {
        c.log.info("warning", "phantom support reaches inside r_m");
        manifest.results["support_below_r_m"] = true;
    }
    write_volume(out, volume);
    manifest.outputs = {out};
    finish(c, manifest, out);
    return exit_ok;
}

int cmd_project(const Common& c, const std::string& in, const std::string& out, const std::string& interp) {
    const RunConfig config = config_or_default(c.config_path);
    auto manifest = new_manifest("project", config);
    const Volume volume = read_volume(in);
    if (interp != "trilinear" && interp != "nearest") throw ConfigError("--interp must be trilinear or nearest");
    DataTensor data;
    timed(manifest, c.log, "project", [&] {
        data = project(volume, config.scan, interp == "nearest" ? Interpolation::nearest : Interpolation::trilinear);
    });
    write_data(out, data);
    manifest.inputs = {in};
    manifest.outputs = {out};
    manifest.results["dims"] = {data.n_p(), data.n_alpha(), data.n_beta()};
    finish(c, manifest, out);
    return exit_ok;
}

int cmd_noise(const Common& c, const std::string& in, const std::string& out, std::optional<double> snr,
              std::optional<std::uint64_t> seed) {
    RunConfig config = config_or_default(c.config_path);
    if (snr) config.noise.snr_db = *snr;
    if (seed) config.noise.seed = *seed;
    auto manifest = new_manifest("noise", config);
    const DataTensor data = read_data(in);
    NoisyData noisy;
    timed(manifest, c.log, "noise", [&] { noisy = add_noise(data, config.noise); });
    write_data(out, noisy.data);
    manifest.inputs = {in};
    manifest.outputs = {out};
    manifest.results["epsilon_percent"] = noisy.epsilon_percent;
    c.log.info("noise", "epsilon = " + std::to_string(noisy.epsilon_percent) + " %",
               {{"epsilon_percent", noisy.epsilon_percent}});
    finish(c, manifest, out);
    return exit_ok;
}

KernelMatrixSet load_or_build(const Common& c, RunManifest& manifest, const RunConfig& config,
                              const std::string& matrices) {
    KernelMatrixSet set;
    if (!matrices.empty() && fs::exists(fs::path(matrices) / "set.json")) {
        timed(manifest, c.log, "load-matrices", [&] { set = read_matrix_set(matrices); });
        manifest.inputs.push_back(matrices);
    } else {
        std::optional<fs::path> cache;
        if (!matrices.empty()) {
            fs::create_directories(matrices);
            cache = fs::path(matrices);
        }
        timed(manifest, c.log, "build-matrices", [&] { set = assemble_all(config.scan, cache); });
        if (cache) write_matrix_set(*cache, set);
    }
    check_matrices(set, config.scan);
    return set;
}

int cmd_build_matrices(const Common& c, const std::string& out) {
    const RunConfig config = config_or_default(c.config_path);
    auto manifest = new_manifest("build-matrices", config);
    KernelMatrixSet set;
    timed(manifest, c.log, "build-matrices", [&] { set = assemble_all(config.scan, fs::path(out)); });
    write_matrix_set(out, set);
    manifest.outputs = {out};
    finish(c, manifest, fs::path(out) / "build");
    return exit_ok;
}

int cmd_reconstruct(const Common& c, const std::string& data_path, const std::string& out,
                    const std::string& matrices, std::optional<double> lambda, const std::string& residuals,
                    const std::string& coefficients) {
    RunConfig config = config_or_default(c.config_path);
    if (lambda) config.scan.lambda = *lambda;
    auto manifest = new_manifest("reconstruct", config);
    const DataTensor data = read_data(data_path);
    manifest.inputs.push_back(data_path);
    const KernelMatrixSet set = load_or_build(c, manifest, config, matrices);
    ReconResult result;
    timed(manifest, c.log, "reconstruct",
          [&] { result = reconstruct(data, set, config.scan, output_geometry(config)); });
    manifest.timings.emplace_back("dsht", result.timings.dsht_seconds);
    manifest.timings.emplace_back("solve", result.timings.solve_seconds);
    manifest.timings.emplace_back("idsht", result.timings.idsht_seconds);
    manifest.timings.emplace_back("interpolate", result.timings.interpolate_seconds);
    write_volume(out, result.volume);
    manifest.outputs = {out};
    if (!residuals.empty()) {
        std::ofstream csv(residuals);
        if (!csv) throw IoError("cannot write " + residuals);
        csv << "l,m,normal_residual,data_residual\n";
        csv.precision(17);
        const int N = result.coefficients.order();
        for (int l = 0; l <= N; ++l)
            for (int m = -l; m <= l; ++m) {
                const auto i = packed_index(l, m);
                csv << l << ',' << m << ',' << result.normal_residuals[i] << ',' << result.data_residuals[i] << '\n';
            }
        manifest.outputs.push_back(residuals);
    }
    if (!coefficients.empty()) {
        write_harmonics(coefficients, result.coefficients);
        manifest.outputs.push_back(coefficients);
    }
    manifest.results["lambda"] = result.lambda;
    finish(c, manifest, out);
    return exit_ok;
}

int cmd_metrics(const Common& c, const std::string& reference, const std::string& test, const std::string& out) {
    std::optional<RunConfig> config;
    if (!c.config_path.empty()) config = load_config(c.config_path);
    auto manifest = new_manifest("metrics", config);
    const Volume f = read_volume(reference);
    const Volume g = read_volume(test);
    const double e2 = nmse(f, g), e1 = nmae(f, g);
    std::printf("nmse_percent,nmae_percent\n%.17g,%.17g\n", e2, e1);
    manifest.inputs = {reference, test};
    manifest.results = {{"nmse_percent", e2}, {"nmae_percent", e1}};
    if (!out.empty()) {
        std::ofstream file(out);
        if (!file) throw IoError("cannot write " + out);
        file << manifest.results.dump(2) << '\n';
        manifest.outputs = {out};
    }
    finish(c, manifest, out.empty() ? fs::path(test).concat(".metrics") : fs::path(out));
    return exit_ok;
}

int cmd_kernel_check(const Common& c, int l_max, int samples, const std::string& out, const std::string& csv) {
    const RunConfig config = config_or_default(c.config_path);
    const ScanConfig& s = config.scan;
    auto manifest = new_manifest("kernel-check", config);
    std::mt19937_64 engine(s.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst_expansion = 0, worst_ratio = 0;
    int roots = 0;
    struct RootRow {
        int l;
        double r0, diagonal, ratio;
    };
    std::vector<RootRow> rows;
    timed(manifest, c.log, "kernel-check", [&] {
        for (int i = 0; i < samples; ++i) {
            const double p = s.R + (s.r_M_star - s.R) * (1e-6 + (1 - 1e-6) * unit(engine));
            const double r = s.R + (p - s.R) * unit(engine);
            for (int l = 0; l <= l_max; ++l) {
                const double a = kernel_direct({p, r, l}, s.R);
                const double b = kernel_expanded({p, r, l}, s.R);
                worst_expansion = std::max(worst_expansion, std::abs(a - b) / (1 + std::abs(a)));
            }
        }
        for (int l = 1; l <= l_max; ++l)
            for (double r0 : diagonal_roots(l, s.R, s.r_m, s.r_M)) {
                const double ratio = gradient_ratio(r0, l, s.R);
                rows.push_back({l, r0, kernel_diagonal(r0, l, s.R), ratio});
                worst_ratio = std::max(worst_ratio, std::abs(ratio - 2.0));
                ++roots;
            }
    });
    const bool ok = worst_expansion <= 1e-9 && worst_ratio <= 1e-3;
    manifest.results = {{"max_expansion_error", worst_expansion},
                        {"max_ratio_deviation", worst_ratio},
                        {"roots", roots},
                        {"pass", ok}};
    for (int l = 1; l <= l_max; ++l) {
        std::printf("l=%d roots:", l);
        for (const RootRow& row : rows)
            if (row.l == l) std::printf(" %.10f (ratio %.6f)", row.r0, row.ratio);
        std::printf("\n");
    }
    if (!csv.empty()) {
        std::ofstream file(csv);
        if (!file) throw IoError("cannot write " + csv);
        file << "l,r0,diagonal,gradient_ratio\n";
        char line[128];
        for (const RootRow& row : rows) {
            std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", row.l, row.r0, row.diagonal, row.ratio);
            file << line;
        }
        manifest.outputs.push_back(csv);
    }
    std::printf("expansion max rel err %.3e, gradient ratio max |r-2| %.3e over %d roots: %s\n", worst_expansion,
                worst_ratio, roots, ok ? "PASS" : "FAIL");
    if (!out.empty()) {
        std::ofstream file(out);
        if (!file) throw IoError("cannot write " + out);
        file << manifest.results.dump(2) << '\n';
        manifest.outputs.push_back(out);
    }
    finish(c, manifest, out.empty() ? fs::path("cst-kernel-check") : fs::path(out));
    return ok ? exit_ok : exit_numerical;
}

int cmd_sht_roundtrip(const Common& c, int N, int n_theta, const std::string& sampling, std::uint64_t seed,
                      const std::string& out) {
    auto manifest = new_manifest("sht-roundtrip", std::nullopt);
    manifest.seed = seed;
    if (N < 0) throw ConfigError("--order must be >= 0");
    if (n_theta <= 0) n_theta = N + 1;
    if (sampling != "gauss_legendre" && sampling != "uniform")
        throw ConfigError("--sampling must be gauss_legendre or uniform");
    const SphereGrid grid(N, n_theta, sampling == "uniform" ? ThetaSampling::uniform : ThetaSampling::gauss_legendre);
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> c_in(packed_size(N));
    for (int l = 0; l <= N; ++l) {
        c_in[packed_index(l, 0)] = normal(engine);
        for (int m = 1; m <= l; ++m) {
            const cplx v(normal(engine), normal(engine));
            c_in[packed_index(l, m)] = v;
            c_in[packed_index(l, -m)] = (m % 2 ? -1.0 : 1.0) * std::conj(v);
        }
    }
    double err = 0;
    timed(manifest, c.log, "sht-roundtrip", [&] {
        const auto samples = grid.inverse_real(c_in);
        const auto c_out = grid.forward(std::span<const double>(samples));
        for (std::size_t i = 0; i < c_in.size(); ++i) err = std::max(err, std::abs(c_out[i] - c_in[i]));
    });
    const bool ok = err < 1e-10;
    manifest.results = {{"N", N}, {"n_theta", n_theta}, {"sampling", sampling}, {"max_error", err}, {"pass", ok}};
    std::printf("N=%d n_theta=%d %s max coefficient error %.3e: %s\n", N, n_theta, sampling.c_str(), err,
                ok ? "PASS" : "FAIL");
    if (!out.empty()) {
        std::ofstream file(out);
        if (!file) throw IoError("cannot write " + out);
        file << manifest.results.dump(2) << '\n';
        manifest.outputs = {out};
    }
    finish(c, manifest, out.empty() ? fs::path("cst-sht-roundtrip") : fs::path(out));
    return ok ? exit_ok : exit_numerical;
}

int parse_axis(const std::string& axis) {
    if (axis == "x" || axis == "0") return 0;
    if (axis == "y" || axis == "1") return 1;
    if (axis == "z" || axis == "2") return 2;
    throw ConfigError("--axis must be x, y, z or 0, 1, 2");
}

std::string magic_of(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char buf[8] = {};
    in.read(buf, 8);
    return std::string(buf, 8);
}

int cmd_slice(const Common& c, const std::string& in, const std::string& out, const std::string& axis, int index,
              const std::string& format) {
    auto manifest = new_manifest("slice", std::nullopt);
    const int a = parse_axis(axis);
    Slice slice;
    const std::string magic = magic_of(in);
    try {
        if (magic.rfind("CSTVOL", 0) == 0)
            slice = extract_slice(read_volume(in), a, index);
        else if (magic.rfind("CSTDATA", 0) == 0)
            slice = extract_slice(read_data(in), a, index);
        else
            throw IoError(in + ": not a volume or data file");
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    if (format == "pgm")
        write_pgm(out, slice);
    else if (format == "csv")
        write_csv(out, slice);
    else
        throw ConfigError("--format must be pgm or csv");
    manifest.inputs = {in};
    manifest.outputs = {out};
    manifest.results = {{"axis", a}, {"index", index}, {"width", slice.width}, {"height", slice.height}};
    finish(c, manifest, out);
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Compton scattering tomography on toric surfaces"};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    unsigned threads = 0;
    app.add_option("--threads", threads, "Worker thread cap (0 = all cores)");
    app.add_flag("--quiet", common.log.quiet, "Suppress progress output");
    app.add_flag("--json-log", common.log.json_lines, "Progress as JSON lines on stderr");
    std::string manifest;
    app.add_option("--manifest", manifest, "Manifest path (default: beside the output)");

    auto with_config = [&](CLI::App* sub) { sub->add_option("--config", common.config_path, "JSON configuration"); };

    std::string in, out, csv, interp = "trilinear", matrices, residuals, coefficients, format = "pgm", axis = "z",
                                 sampling = "gauss_legendre";
    std::optional<double> snr, lambda;
    std::optional<std::uint64_t> seed;
    int index = 0, l_max = 20, samples = 10000, order = 32, n_theta = 0;
    std::uint64_t sht_seed = 1;
    std::vector<std::string> pair;

    auto* phantom = app.add_subcommand("phantom", "Voxelize the configured phantom");
    with_config(phantom);
    phantom->add_option("--out", out, "Output volume (.t3v)")->required();

    auto* proj = app.add_subcommand("project", "Toric Radon transform of a volume");
    with_config(proj);
    proj->add_option("--in", in, "Input volume")->required();
    proj->add_option("--out", out, "Output data tensor (.t3d)")->required();
    proj->add_option("--interp", interp, "trilinear or nearest");

    auto* noise = app.add_subcommand("noise", "Add Gaussian noise at a prescribed SNR");
    with_config(noise);
    noise->add_option("--in", in, "Input data tensor")->required();
    noise->add_option("--out", out, "Output data tensor")->required();
    noise->add_option("--snr", snr, "SNR in dB (overrides the config)");
    noise->add_option("--seed", seed, "Noise seed (overrides the config)");

    auto* build = app.add_subcommand("build-matrices", "Assemble the kernel matrices A_0..A_N");
    with_config(build);
    build->add_option("--out", out, "Output directory")->required();

    auto* recon = app.add_subcommand("reconstruct", "Invert projection data");
    with_config(recon);
    recon->add_option("--data", in, "Input data tensor")->required();
    recon->add_option("--out", out, "Output volume")->required();
    recon->add_option("--matrices", matrices, "Matrix set or cache directory");
    recon->add_option("--lambda", lambda, "Tikhonov weight (overrides the config)");
    recon->add_option("--residuals", residuals, "Per-(l, m) residual CSV");
    recon->add_option("--coefficients", coefficients, "Write recovered f_lm (.t3h)");

    auto* metrics = app.add_subcommand("metrics", "NMSE and NMAE of a volume against a reference");
    with_config(metrics);
    metrics->add_option("volumes", pair, "Reference and test volume")->required()->expected(2);
    metrics->add_option("--out", out, "JSON report");

    auto* kcheck = app.add_subcommand("kernel-check", "Compare kernel forms and diagonal gradients");
    with_config(kcheck);
    kcheck->add_option("--l-max", l_max, "Largest degree");
    kcheck->add_option("--samples", samples, "Random (p, r) points");
    kcheck->add_option("--out", out, "JSON report");
    kcheck->add_option("--csv", csv, "Per-root CSV: l, r0, diagonal value, gradient ratio");

    auto* sht = app.add_subcommand("sht-roundtrip", "DSHT/IDSHT roundtrip on random band-limited data");
    sht->add_option("--order", order, "Expansion order N");
    sht->add_option("--n-theta", n_theta, "Polar samples (default N + 1)");
    sht->add_option("--sampling", sampling, "gauss_legendre or uniform");
    sht->add_option("--seed", sht_seed, "Coefficient seed");
    sht->add_option("--out", out, "JSON report");

    auto* slice = app.add_subcommand("slice", "Export one plane of a volume or data tensor");
    slice->add_option("--in", in, "Input volume or data tensor")->required();
    slice->add_option("--out", out, "Output file")->required();
    slice->add_option("--axis", axis, "x, y or z");
    slice->add_option("--index", index, "Plane index")->required();
    slice->add_option("--format", format, "pgm or csv");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }
    if (!manifest.empty()) common.manifest_path = manifest;
    set_thread_limit(threads);

    try {
        if (*phantom) return cmd_phantom(common, out);
        if (*proj) return cmd_project(common, in, out, interp);
        if (*noise) return cmd_noise(common, in, out, snr, seed);
        if (*build) return cmd_build_matrices(common, out);
        if (*recon) return cmd_reconstruct(common, in, out, matrices, lambda, residuals, coefficients);
        if (*metrics) return cmd_metrics(common, pair[0], pair[1], out);
        if (*kcheck) return cmd_kernel_check(common, l_max, samples, out, csv);
        if (*sht) return cmd_sht_roundtrip(common, order, n_theta, sampling, sht_seed, out);
        if (*slice) return cmd_slice(common, in, out, axis, index, format);
    } catch (const ConfigError& e) {
        std::cerr << "cst: configuration error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ShapeError& e) {
        std::cerr << "cst: shape error: " << e.what() << '\n';
        return exit_usage;
    } catch (const IoError& e) {
        std::cerr << "cst: I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "cst: I/O error: " << e.what() << '\n';
        return exit_io;
    } catch (const NumericalError& e) {
        std::cerr << "cst: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const DomainError& e) {
        std::cerr << "cst: numerical failure: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "cst: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace cst
