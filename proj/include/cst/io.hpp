#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cst/geometry.hpp"
#include "cst/harmonics.hpp"
#include "cst/phantom.hpp"
#include "cst/system.hpp"
#include "cst/volume.hpp"

namespace cst {

using json = nlohmann::json;

// Binary layout shared by all formats: 8-byte magic, uint32 version, uint32
// header length, JSON header, float64 payload. Integers and floats are
// little-endian.
inline constexpr std::uint32_t format_version = 1;

void write_volume(const std::filesystem::path& path, const Volume& volume);
Volume read_volume(const std::filesystem::path& path);

void write_data(const std::filesystem::path& path, const DataTensor& data);
DataTensor read_data(const std::filesystem::path& path);

void write_harmonics(const std::filesystem::path& path, const HarmonicStack& stack);
HarmonicStack read_harmonics(const std::filesystem::path& path);

struct MatrixKey {
    double R = 0;
    int M = 0;
    double r_M_star = 0;
    int l = 0;
};

/// File name of the cached matrix for a key, e.g. "A_l3_<hash>.t3m".
std::string matrix_cache_name(const MatrixKey& key);

void write_matrix(const std::filesystem::path& path, const MatrixKey& key, const Matrix& A);
/// Throws IoError when the stored key differs from `key`.
Matrix read_matrix(const std::filesystem::path& path, const MatrixKey& key);
/// Reads a matrix file together with its key.
std::pair<MatrixKey, Matrix> read_matrix(const std::filesystem::path& path);

/// Directory holding one matrix file per degree plus set.json.
void write_matrix_set(const std::filesystem::path& dir, const KernelMatrixSet& set);
KernelMatrixSet read_matrix_set(const std::filesystem::path& dir);

struct ReconOptions {
    std::optional<VolumeGeometry> output;  // defaults to the phantom geometry
};

struct RunConfig {
    ScanConfig scan;
    PhantomSpec phantom;
    NoiseSpec noise;
    ReconOptions recon;
};

/// Parses a configuration document with optional sections scan, phantom,
/// noise and recon. Unknown keys are ConfigErrors.
RunConfig parse_config(const json& document);
RunConfig load_config(const std::filesystem::path& path);
json config_to_json(const RunConfig& config);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const json& document);

VolumeGeometry output_geometry(const RunConfig& config);

struct RunManifest {
    std::string command;
    json config = json::object();
    std::string config_hash;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string code_version;
    std::string rng_algorithm;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> timings;
    json results = json::object();
};

json manifest_to_json(const RunManifest& manifest);
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

/// 2D cut through a 3D array, row-major (height rows of width values).
struct Slice {
    int width = 0;
    int height = 0;
    std::vector<double> values;
};

/// dims are fastest-first. The slice spans the two remaining axes, the lower
/// numbered axis running along a row.
Slice extract_slice(std::span<const double> values, std::array<int, 3> dims, int axis, int index);
Slice extract_slice(const Volume& volume, int axis, int index);
/// Axis 0 fixes beta_k, 1 fixes alpha_n, 2 fixes p_j.
Slice extract_slice(const DataTensor& data, int axis, int index);

/// 16-bit binary PGM, min-max scaled; the scaling goes to `path` + ".json".
void write_pgm(const std::filesystem::path& path, const Slice& slice);
std::vector<std::uint16_t> read_pgm(const std::filesystem::path& path, int& width, int& height);

void write_csv(const std::filesystem::path& path, const Slice& slice);
Slice read_csv(const std::filesystem::path& path);

}  // namespace cst
