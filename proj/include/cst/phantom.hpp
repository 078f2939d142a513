#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cst/geometry.hpp"
#include "cst/harmonics.hpp"
#include "cst/volume.hpp"

namespace cst {

struct Ball {
    Vec3 center;
    double radius = 0;
    double intensity = 0;
};

/// Slab of half-width thickness / 2 around `position` along `axis`, limited to
/// [range_lo, range_hi] along `range_axis`, cleared inside ball `ball`.
struct Crack {
    int ball = 0;
    int axis = 0;
    double position = 0;
    double thickness = 0;
    int range_axis = 2;
    double range_lo = 0;
    double range_hi = 0;
    double background = 0;
};

struct PhantomSpec {
    std::vector<Ball> balls;
    std::optional<Crack> crack;
    VolumeGeometry geometry;
};

/// Two nested balls with a crack through the larger one, on an n^3 grid of
/// side 1 with origin (1/n, 1/n, R).
PhantomSpec default_phantom(int n, double R);

/// Voxel value = sum of intensities of the balls containing its center, with
/// crack voxels set to the background.
Volume make_phantom(const PhantomSpec& spec);

/// True when some nonzero voxel center lies closer to the origin than r_m.
bool support_below(const Volume& volume, double r_m);

struct NoiseSpec {
    double snr_db = 20;
    std::uint64_t seed = 1;
};

inline constexpr const char* rng_algorithm = "std::mt19937_64 + std::normal_distribution";

struct NoisyData {
    DataTensor data;
    double epsilon_percent = 0;
};

/// Zero-mean Gaussian noise rescaled so that the drawn sample has exactly the
/// requested SNR; infinite SNR returns the data unchanged.
NoisyData add_noise(const DataTensor& data, const NoiseSpec& spec);

/// 100 * 10^(-snr / 20).
double epsilon_for_snr(double snr_db);

/// (100 / n) |f - g|_2^2 / max f_i^2.
double nmse(const Volume& f, const Volume& f_tilde);
/// (100 / n) |f - g|_1 / max |f_i|.
double nmae(const Volume& f, const Volume& f_tilde);

/// Trilinear samples of a volume at (radii[i], theta_k, phi_n), layout [i][n][k].
std::vector<double> sample_spherical(const Volume& volume, std::span<const double> radii, const SphereGrid& grid);

}  // namespace cst
