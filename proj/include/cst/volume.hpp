#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cst/geometry.hpp"

namespace cst {

/// Regular voxel grid; voxel (i, j, k) has its center at origin + (i, j, k) * spacing.
struct VolumeGeometry {
    std::array<int, 3> dims{0, 0, 0};
    Vec3 origin;
    Vec3 spacing{1, 1, 1};

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    Vec3 center(int i, int j, int k) const {
        return {origin.x + i * spacing.x, origin.y + j * spacing.y, origin.z + k * spacing.z};
    }
    void validate() const;

    friend bool operator==(const VolumeGeometry& a, const VolumeGeometry& b) {
        return a.dims == b.dims && a.origin.x == b.origin.x && a.origin.y == b.origin.y &&
               a.origin.z == b.origin.z && a.spacing.x == b.spacing.x && a.spacing.y == b.spacing.y &&
               a.spacing.z == b.spacing.z;
    }
};

/// Scalar field (electron density) on a voxel grid, x index fastest.
class Volume {
  public:
    Volume() = default;
    explicit Volume(VolumeGeometry geometry);

    const VolumeGeometry& geometry() const { return geometry_; }
    const std::array<int, 3>& dims() const { return geometry_.dims; }

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * geometry_.dims[1] + j) * geometry_.dims[0] + i;
    }
    double& at(int i, int j, int k) { return values_[index(i, j, k)]; }
    double at(int i, int j, int k) const { return values_[index(i, j, k)]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Trilinear interpolation of voxel values; voxels beyond the grid count as zero.
    double sample_trilinear(Vec3 point) const {
        const double fx = (point.x - geometry_.origin.x) * inv_spacing_.x;
        const double fy = (point.y - geometry_.origin.y) * inv_spacing_.y;
        const double fz = (point.z - geometry_.origin.z) * inv_spacing_.z;
        if (!(fx > -1.0 && fy > -1.0 && fz > -1.0 && fx < geometry_.dims[0] && fy < geometry_.dims[1] &&
              fz < geometry_.dims[2]))
            return 0.0;
        const double bx = std::floor(fx), by = std::floor(fy), bz = std::floor(fz);
        const int i0 = static_cast<int>(bx), j0 = static_cast<int>(by), k0 = static_cast<int>(bz);
        const double tx = fx - bx, ty = fy - by, tz = fz - bz;
        double acc = 0;
        for (int dk = 0; dk < 2; ++dk) {
            const int k = k0 + dk;
            if (k < 0 || k >= geometry_.dims[2]) continue;
            const double wz = dk ? tz : 1.0 - tz;
            for (int dj = 0; dj < 2; ++dj) {
                const int j = j0 + dj;
                if (j < 0 || j >= geometry_.dims[1]) continue;
                const double wyz = wz * (dj ? ty : 1.0 - ty);
                const std::size_t row = (static_cast<std::size_t>(k) * geometry_.dims[1] + j) * geometry_.dims[0];
                if (i0 >= 0) acc += wyz * (1.0 - tx) * values_[row + i0];
                if (i0 + 1 < geometry_.dims[0]) acc += wyz * tx * values_[row + i0 + 1];
            }
        }
        return acc;
    }

    /// Value of the voxel whose cell contains the point, zero outside.
    double sample_nearest(Vec3 point) const {
        const long i = std::lround((point.x - geometry_.origin.x) * inv_spacing_.x);
        const long j = std::lround((point.y - geometry_.origin.y) * inv_spacing_.y);
        const long k = std::lround((point.z - geometry_.origin.z) * inv_spacing_.z);
        if (i < 0 || j < 0 || k < 0 || i >= geometry_.dims[0] || j >= geometry_.dims[1] || k >= geometry_.dims[2])
            return 0.0;
        return values_[index(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k))];
    }

    /// Axis-aligned box outside of which every sample is zero.
    std::pair<Vec3, Vec3> support_box() const;

  private:
    VolumeGeometry geometry_;
    Vec3 inv_spacing_{1, 1, 1};
    std::vector<double> values_;
};

/// Projection data g[j][n][k] over torus diameters p_j, detector azimuths alpha_n
/// and detector polar angles beta_k, k index fastest.
class DataTensor {
  public:
    DataTensor() = default;
    DataTensor(std::vector<double> p, std::vector<double> alpha, std::vector<double> beta);

    const std::vector<double>& p() const { return p_; }
    const std::vector<double>& alpha() const { return alpha_; }
    const std::vector<double>& beta() const { return beta_; }
    std::size_t n_p() const { return p_.size(); }
    std::size_t n_alpha() const { return alpha_.size(); }
    std::size_t n_beta() const { return beta_.size(); }

    std::size_t index(std::size_t j, std::size_t n, std::size_t k) const {
        return (j * alpha_.size() + n) * beta_.size() + k;
    }
    double& at(std::size_t j, std::size_t n, std::size_t k) { return values_[index(j, n, k)]; }
    double at(std::size_t j, std::size_t n, std::size_t k) const { return values_[index(j, n, k)]; }

    /// All detector samples for one diameter, alpha-major.
    std::span<const double> slab(std::size_t j) const {
        return {values_.data() + j * alpha_.size() * beta_.size(), alpha_.size() * beta_.size()};
    }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

  private:
    std::vector<double> p_, alpha_, beta_;
    std::vector<double> values_;
};

}  // namespace cst
