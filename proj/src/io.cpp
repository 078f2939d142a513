#include "cst/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "cst/error.hpp"

namespace cst {

namespace fs = std::filesystem;

namespace {

constexpr char volume_magic[8] = {'C', 'S', 'T', 'V', 'O', 'L', '\0', '\0'};
constexpr char data_magic[8] = {'C', 'S', 'T', 'D', 'A', 'T', 'A', '\0'};
constexpr char harmonics_magic[8] = {'C', 'S', 'T', 'H', 'A', 'R', 'M', '\0'};
constexpr char matrix_magic[8] = {'C', 'S', 'T', 'M', 'A', 'T', 'R', 'X'};

template <class T>
T to_little(T value) {
    if constexpr (std::endian::native == std::endian::little) {
        return value;
    } else {
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &value, sizeof(T));
        std::reverse(bytes, bytes + sizeof(T));
        std::memcpy(&value, bytes, sizeof(T));
        return value;
    }
}

void put_u32(std::ostream& out, std::uint32_t v) {
    v = to_little(v);
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t get_u32(std::istream& in) {
    std::uint32_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    return to_little(v);
}

void write_binary(const fs::path& path, const char (&magic)[8], json header, std::span<const double> payload) {
    header["endianness"] = "little";
    header["dtype"] = "float64";
    header["count"] = payload.size();
    const std::string text = header.dump();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(magic, 8);
    put_u32(out, format_version);
    put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size_bytes()));
    } else {
        for (double v : payload) {
            const double le = to_little(v);
            out.write(reinterpret_cast<const char*>(&le), sizeof le);
        }
    }
    if (!out) throw IoError("write failed for " + path.string());
}

std::pair<json, std::vector<double>> read_binary(const fs::path& path, const char (&magic)[8]) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char found[8];
    in.read(found, 8);
    if (!in || std::memcmp(found, magic, 8) != 0) throw IoError(path.string() + ": wrong file type");
    const std::uint32_t version = get_u32(in);
    if (version != format_version)
        throw IoError(path.string() + ": unsupported format version " + std::to_string(version));
    const std::uint32_t length = get_u32(in);
    std::string text(length, '\0');
    in.read(text.data(), length);
    if (!in) throw IoError(path.string() + ": truncated header");
    json header;
    try {
        header = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(path.string() + ": bad header: " + e.what());
    }
    if (header.value("endianness", "") != "little" || header.value("dtype", "") != "float64")
        throw IoError(path.string() + ": unsupported encoding");
    const auto count = header.at("count").get<std::size_t>();
    std::vector<double> payload(count);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw IoError(path.string() + ": truncated payload");
    if (in.peek() != std::char_traits<char>::eof()) throw IoError(path.string() + ": trailing bytes");
    if constexpr (std::endian::native != std::endian::little)
        for (double& v : payload) v = to_little(v);
    return {std::move(header), std::move(payload)};
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 json_vec(const json& j) {
    if (!j.is_array() || j.size() != 3) throw ConfigError("expected a 3-element array");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json geometry_json(const VolumeGeometry& g) {
    return {{"dims", g.dims}, {"origin", vec_json(g.origin)}, {"spacing", vec_json(g.spacing)}};
}

VolumeGeometry json_geometry(const json& j) {
    VolumeGeometry g;
    g.dims = j.at("dims").get<std::array<int, 3>>();
    g.origin = json_vec(j.at("origin"));
    g.spacing = json_vec(j.at("spacing"));
    return g;
}

void check_keys(const json& section, const std::string& name, std::initializer_list<const char*> allowed) {
    if (!section.is_object()) throw ConfigError("config: section '" + name + "' must be an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : section.items())
        if (!keys.count(item.key())) throw ConfigError("config: unknown key '" + name + "." + item.key() + "'");
}

template <class T>
void read_key(const json& section, const char* key, T& out) {
    if (!section.contains(key)) return;
    try {
        out = section.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config: bad value for '") + key + "'");
    }
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json matrix_key_json(const MatrixKey& key) {
    return {{"R", key.R}, {"M", key.M}, {"r_M_star", key.r_M_star}, {"l", key.l}};
}

MatrixKey json_matrix_key(const json& j) {
    return {j.at("R").get<double>(), j.at("M").get<int>(), j.at("r_M_star").get<double>(), j.at("l").get<int>()};
}

bool same_key(const MatrixKey& a, const MatrixKey& b) {
    return a.R == b.R && a.M == b.M && a.r_M_star == b.r_M_star && a.l == b.l;
}

json snr_json(double snr) {
    if (std::isinf(snr)) return snr > 0 ? "inf" : "-inf";
    return snr;
}

double json_snr(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        throw ConfigError("config: snr_db must be a number or \"inf\"");
    }
    if (!j.is_number()) throw ConfigError("config: snr_db must be a number or \"inf\"");
    return j.get<double>();
}

}  // namespace

void write_volume(const fs::path& path, const Volume& volume) {
    write_binary(path, volume_magic, {{"kind", "volume"}, {"geometry", geometry_json(volume.geometry())}},
                 volume.values());
}

Volume read_volume(const fs::path& path) {
    auto [header, payload] = read_binary(path, volume_magic);
    Volume volume(json_geometry(header.at("geometry")));
    if (payload.size() != volume.values().size()) throw IoError(path.string() + ": payload size mismatch");
    volume.values() = std::move(payload);
    return volume;
}

void write_data(const fs::path& path, const DataTensor& data) {
    write_binary(path, data_magic,
                 {{"kind", "data"}, {"p", data.p()}, {"alpha", data.alpha()}, {"beta", data.beta()},
                  {"layout", "p,alpha,beta"}},
                 data.values());
}

DataTensor read_data(const fs::path& path) {
    auto [header, payload] = read_binary(path, data_magic);
    DataTensor data(header.at("p").get<std::vector<double>>(), header.at("alpha").get<std::vector<double>>(),
                    header.at("beta").get<std::vector<double>>());
    if (payload.size() != data.values().size()) throw IoError(path.string() + ": payload size mismatch");
    data.values() = std::move(payload);
    return data;
}

void write_harmonics(const fs::path& path, const HarmonicStack& stack) {
    const auto& c = stack.data();
    const std::span<const double> flat(reinterpret_cast<const double*>(c.data()), 2 * c.size());
    write_binary(path, harmonics_magic,
                 {{"kind", "harmonics"}, {"N", stack.order()}, {"n_radial", stack.n_radial()},
                  {"layout", "lm,radial,re-im"}},
                 flat);
}

HarmonicStack read_harmonics(const fs::path& path) {
    auto [header, payload] = read_binary(path, harmonics_magic);
    HarmonicStack stack(header.at("N").get<int>(), header.at("n_radial").get<int>());
    auto& c = stack.data();
    if (payload.size() != 2 * c.size()) throw IoError(path.string() + ": payload size mismatch");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = cplx(payload[2 * i], payload[2 * i + 1]);
    return stack;
}

std::string matrix_cache_name(const MatrixKey& key) {
    std::string bytes(sizeof(double) * 2 + sizeof(int), '\0');
    std::memcpy(bytes.data(), &key.R, sizeof(double));
    std::memcpy(bytes.data() + sizeof(double), &key.r_M_star, sizeof(double));
    std::memcpy(bytes.data() + 2 * sizeof(double), &key.M, sizeof(int));
    return "A_l" + std::to_string(key.l) + "_" + hex16(fnv1a(bytes)) + ".t3m";
}

void write_matrix(const fs::path& path, const MatrixKey& key, const Matrix& A) {
    json header{{"kind", "matrix"}, {"key", matrix_key_json(key)}, {"rows", A.rows()}, {"cols", A.cols()},
                {"layout", "row-major"}};
    write_binary(path, matrix_magic, header, std::span<const double>(A.data(), static_cast<std::size_t>(A.size())));
}

std::pair<MatrixKey, Matrix> read_matrix(const fs::path& path) {
    auto [header, payload] = read_binary(path, matrix_magic);
    const auto rows = header.at("rows").get<Eigen::Index>();
    const auto cols = header.at("cols").get<Eigen::Index>();
    if (static_cast<std::size_t>(rows * cols) != payload.size()) throw IoError(path.string() + ": payload size mismatch");
    Matrix A(rows, cols);
    std::copy(payload.begin(), payload.end(), A.data());
    return {json_matrix_key(header.at("key")), std::move(A)};
}

Matrix read_matrix(const fs::path& path, const MatrixKey& key) {
    auto [found, A] = read_matrix(path);
    if (!same_key(found, key)) throw IoError(path.string() + ": matrix key mismatch");
    return A;
}

void write_matrix_set(const fs::path& dir, const KernelMatrixSet& set) {
    fs::create_directories(dir);
    json index{{"R", set.R},       {"r_M_star", set.r_M_star}, {"M", set.M},
               {"r", set.r},       {"p", set.p},               {"order", set.order()},
               {"files", json::array()}, {"version", format_version}};
    for (int l = 0; l <= set.order(); ++l) {
        const MatrixKey key{set.R, set.M, set.r_M_star, l};
        const auto name = matrix_cache_name(key);
        write_matrix(dir / name, key, set.A[l]);
        index["files"].push_back(name);
    }
    std::ofstream out(dir / "set.json");
    if (!out) throw IoError("cannot write " + (dir / "set.json").string());
    out << index.dump(2) << '\n';
}

KernelMatrixSet read_matrix_set(const fs::path& dir) {
    std::ifstream in(dir / "set.json");
    if (!in) throw IoError("cannot open " + (dir / "set.json").string());
    json index;
    try {
        index = json::parse(in);
    } catch (const json::exception& e) {
        throw IoError("bad matrix set index: " + std::string(e.what()));
    }
    if (index.value("version", 0u) != format_version) throw IoError("matrix set: unsupported format version");
    KernelMatrixSet set;
    set.R = index.at("R").get<double>();
    set.r_M_star = index.at("r_M_star").get<double>();
    set.M = index.at("M").get<int>();
    set.r = index.at("r").get<std::vector<double>>();
    set.p = index.at("p").get<std::vector<double>>();
    const auto files = index.at("files").get<std::vector<std::string>>();
    for (std::size_t l = 0; l < files.size(); ++l)
        set.A.push_back(read_matrix(dir / files[l], MatrixKey{set.R, set.M, set.r_M_star, static_cast<int>(l)}));
    return set;
}

RunConfig parse_config(const json& document) {
    check_keys(document, "config", {"scan", "phantom", "noise", "recon"});
    RunConfig config;
    ScanConfig& scan = config.scan;
    bool has_alpha = false, has_r = false;
    if (document.contains("scan")) {
        const json& s = document.at("scan");
        check_keys(s, "scan",
                   {"R", "r_m", "r_M", "r_M_star", "N", "N_alpha", "N_beta", "N_p", "N_r", "N_gamma", "N_psi",
                    "seed", "theta_sampling"});
        read_key(s, "R", scan.R);
        read_key(s, "r_m", scan.r_m);
        read_key(s, "r_M", scan.r_M);
        read_key(s, "r_M_star", scan.r_M_star);
        read_key(s, "N", scan.N);
        read_key(s, "N_alpha", scan.N_alpha);
        read_key(s, "N_beta", scan.N_beta);
        read_key(s, "N_p", scan.N_p);
        read_key(s, "N_r", scan.N_r);
        read_key(s, "N_gamma", scan.N_gamma);
        read_key(s, "N_psi", scan.N_psi);
        read_key(s, "seed", scan.seed);
        has_alpha = s.contains("N_alpha");
        has_r = s.contains("N_r");
        if (s.contains("theta_sampling")) {
            const auto name = s.at("theta_sampling").get<std::string>();
            if (name == "gauss_legendre")
                scan.theta_sampling = ThetaSampling::gauss_legendre;
            else if (name == "uniform")
                scan.theta_sampling = ThetaSampling::uniform;
            else
                throw ConfigError("config: theta_sampling must be gauss_legendre or uniform");
        }
    }
    if (!has_alpha) scan.N_alpha = 2 * scan.N + 1;
    if (!has_r) scan.N_r = scan.N_p;

    config.noise.seed = scan.seed;
    if (document.contains("noise")) {
        const json& n = document.at("noise");
        check_keys(n, "noise", {"snr_db", "seed"});
        if (n.contains("snr_db")) config.noise.snr_db = json_snr(n.at("snr_db"));
        read_key(n, "seed", config.noise.seed);
    }

    if (document.contains("recon")) {
        const json& r = document.at("recon");
        check_keys(r, "recon", {"lambda", "output"});
        read_key(r, "lambda", scan.lambda);
        if (r.contains("output")) {
            check_keys(r.at("output"), "recon.output", {"dims", "origin", "spacing"});
            try {
                config.recon.output = json_geometry(r.at("output"));
            } catch (const json::exception&) {
                throw ConfigError("config: recon.output needs dims, origin and spacing");
            }
        }
    }

    int size = 32;
    json phantom = document.value("phantom", json::object());
    check_keys(phantom, "phantom", {"preset", "size", "dims", "origin", "spacing", "balls", "crack"});
    read_key(phantom, "size", size);
    const std::string preset = phantom.value("preset", phantom.contains("balls") ? "none" : "default");
    if (preset == "default")
        config.phantom = default_phantom(size, scan.R);
    else if (preset == "none")
        config.phantom = PhantomSpec{{}, std::nullopt, default_phantom(size, scan.R).geometry};
    else
        throw ConfigError("config: unknown phantom preset '" + preset + "'");
    auto& g = config.phantom.geometry;
    try {
        if (phantom.contains("dims")) g.dims = phantom.at("dims").get<std::array<int, 3>>();
        if (phantom.contains("origin")) g.origin = json_vec(phantom.at("origin"));
        if (phantom.contains("spacing")) g.spacing = json_vec(phantom.at("spacing"));
        if (phantom.contains("balls")) {
            config.phantom.balls.clear();
            for (const json& b : phantom.at("balls")) {
                check_keys(b, "phantom.balls[]", {"center", "radius", "intensity"});
                config.phantom.balls.push_back(
                    {json_vec(b.at("center")), b.at("radius").get<double>(), b.at("intensity").get<double>()});
            }
        }
        if (phantom.contains("crack")) {
            const json& c = phantom.at("crack");
            if (c.is_null()) {
                config.phantom.crack.reset();
            } else {
                check_keys(c, "phantom.crack",
                           {"ball", "axis", "position", "thickness", "range_axis", "range", "background"});
                Crack crack;
                read_key(c, "ball", crack.ball);
                read_key(c, "axis", crack.axis);
                read_key(c, "position", crack.position);
                read_key(c, "thickness", crack.thickness);
                read_key(c, "range_axis", crack.range_axis);
                read_key(c, "background", crack.background);
                if (c.contains("range")) {
                    const auto range = c.at("range").get<std::array<double, 2>>();
                    crack.range_lo = range[0];
                    crack.range_hi = range[1];
                }
                config.phantom.crack = crack;
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: bad phantom section: ") + e.what());
    }
    try {
        g.validate();
    } catch (const ShapeError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    scan.validate();
    return config;
}

RunConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json document;
    try {
        document = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("config: " + std::string(e.what()));
    }
    return parse_config(document);
}

json config_to_json(const RunConfig& config) {
    const ScanConfig& s = config.scan;
    json scan{{"R", s.R},
              {"r_m", s.r_m},
              {"r_M", s.r_M},
              {"r_M_star", s.r_M_star},
              {"N", s.N},
              {"N_alpha", s.N_alpha},
              {"N_beta", s.N_beta},
              {"N_p", s.N_p},
              {"N_r", s.N_r},
              {"N_gamma", s.N_gamma},
              {"N_psi", s.N_psi},
              {"seed", s.seed},
              {"theta_sampling", s.theta_sampling == ThetaSampling::uniform ? "uniform" : "gauss_legendre"}};
    json balls = json::array();
    for (const Ball& b : config.phantom.balls)
        balls.push_back({{"center", vec_json(b.center)}, {"radius", b.radius}, {"intensity", b.intensity}});
    const auto& g = config.phantom.geometry;
    json phantom{{"preset", "none"},
                 {"dims", g.dims},
                 {"origin", vec_json(g.origin)},
                 {"spacing", vec_json(g.spacing)},
                 {"balls", balls}};
    if (config.phantom.crack) {
        const Crack& c = *config.phantom.crack;
        phantom["crack"] = {{"ball", c.ball},
                            {"axis", c.axis},
                            {"position", c.position},
                            {"thickness", c.thickness},
                            {"range_axis", c.range_axis},
                            {"range", {c.range_lo, c.range_hi}},
                            {"background", c.background}};
    }
    json recon{{"lambda", s.lambda}};
    if (config.recon.output) recon["output"] = geometry_json(*config.recon.output);
    return {{"scan", scan},
            {"phantom", phantom},
            {"noise", {{"snr_db", snr_json(config.noise.snr_db)}, {"seed", config.noise.seed}}},
            {"recon", recon}};
}

std::string config_hash(const json& document) { return hex16(fnv1a(document.dump())); }

VolumeGeometry output_geometry(const RunConfig& config) {
    return config.recon.output ? *config.recon.output : config.phantom.geometry;
}

json manifest_to_json(const RunManifest& m) {
    json timings = json::object();
    for (const auto& [stage, seconds] : m.timings) timings[stage] = seconds;
    return {{"command", m.command},         {"config", m.config},   {"config_hash", m.config_hash},
            {"inputs", m.inputs},           {"outputs", m.outputs}, {"code_version", m.code_version},
            {"rng", {{"algorithm", m.rng_algorithm}, {"seed", m.seed}}}, {"timings_seconds", timings}, {"results", m.results}};
}

void write_manifest(const fs::path& path, const RunManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest " + path.string());
    out << manifest_to_json(manifest).dump(2) << '\n';
}

Slice extract_slice(std::span<const double> values, std::array<int, 3> dims, int axis, int index) {
    if (axis < 0 || axis > 2) throw DomainError("slice: axis must be 0, 1 or 2");
    if (index < 0 || index >= dims[axis])
        throw DomainError("slice: index " + std::to_string(index) + " outside [0, " + std::to_string(dims[axis]) + ")");
    const int a = axis == 0 ? 1 : 0;
    const int b = axis == 2 ? 1 : 2;
    const std::array<std::size_t, 3> stride{1, static_cast<std::size_t>(dims[0]),
                                            static_cast<std::size_t>(dims[0]) * dims[1]};
    Slice slice{dims[a], dims[b], {}};
    slice.values.resize(static_cast<std::size_t>(slice.width) * slice.height);
    for (int v = 0; v < slice.height; ++v)
        for (int u = 0; u < slice.width; ++u)
            slice.values[static_cast<std::size_t>(v) * slice.width + u] =
                values[index * stride[axis] + u * stride[a] + v * stride[b]];
    return slice;
}

Slice extract_slice(const Volume& volume, int axis, int index) {
    return extract_slice(volume.values(), volume.dims(), axis, index);
}

Slice extract_slice(const DataTensor& data, int axis, int index) {
    return extract_slice(data.values(),
                         {static_cast<int>(data.n_beta()), static_cast<int>(data.n_alpha()), static_cast<int>(data.n_p())},
                         axis, index);
}

void write_pgm(const fs::path& path, const Slice& slice) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : slice.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (slice.values.empty()) lo = hi = 0;
    const double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "P5\n" << slice.width << ' ' << slice.height << "\n65535\n";
    for (double v : slice.values) {
        const auto q = static_cast<std::uint16_t>(std::lround((v - lo) * scale));
        const unsigned char bytes[2] = {static_cast<unsigned char>(q >> 8), static_cast<unsigned char>(q & 0xff)};
        out.write(reinterpret_cast<const char*>(bytes), 2);
    }
    if (!out) throw IoError("write failed for " + path.string());
    std::ofstream side(path.string() + ".json");
    if (!side) throw IoError("cannot write PGM sidecar for " + path.string());
    side << json{{"min", lo}, {"max", hi}, {"maxval", 65535}, {"value", "min + pixel * (max - min) / 65535"}}.dump(2)
         << '\n';
}

std::vector<std::uint16_t> read_pgm(const fs::path& path, int& width, int& height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string magic;
    int maxval = 0;
    in >> magic >> width >> height >> maxval;
    in.get();
    if (magic != "P5" || maxval != 65535 || width < 0 || height < 0) throw IoError(path.string() + ": not a 16-bit PGM");
    std::vector<std::uint16_t> pixels(static_cast<std::size_t>(width) * height);
    for (auto& p : pixels) {
        unsigned char bytes[2];
        in.read(reinterpret_cast<char*>(bytes), 2);
        p = static_cast<std::uint16_t>((bytes[0] << 8) | bytes[1]);
    }
    if (!in) throw IoError(path.string() + ": truncated PGM");
    return pixels;
}

void write_csv(const fs::path& path, const Slice& slice) {
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    for (int v = 0; v < slice.height; ++v) {
        for (int u = 0; u < slice.width; ++u)
            std::fprintf(f, u ? ",%.17g" : "%.17g", slice.values[static_cast<std::size_t>(v) * slice.width + u]);
        std::fputc('\n', f);
    }
    if (std::fclose(f) != 0) throw IoError("write failed for " + path.string());
}

Slice read_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    Slice slice;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int count = 0;
        const char* s = line.c_str();
        while (*s) {
            char* end = nullptr;
            const double v = std::strtod(s, &end);
            if (end == s) throw IoError(path.string() + ": bad number in CSV");
            slice.values.push_back(v);
            ++count;
            s = end;
            if (*s == ',') ++s;
        }
        if (slice.height == 0)
            slice.width = count;
        else if (count != slice.width)
            throw IoError(path.string() + ": ragged CSV");
        ++slice.height;
    }
    return slice;
}

}  // namespace cst
