#include "cst/volume.hpp"

#include "cst/error.hpp"

namespace cst {

void VolumeGeometry::validate() const {
    for (int d : dims)
        if (d < 1) throw ShapeError("volume: dimensions must be positive");
    if (!(spacing.x > 0 && spacing.y > 0 && spacing.z > 0)) throw ShapeError("volume: spacing must be positive");
}

Volume::Volume(VolumeGeometry geometry) : geometry_(geometry) {
    geometry_.validate();
    inv_spacing_ = {1.0 / geometry_.spacing.x, 1.0 / geometry_.spacing.y, 1.0 / geometry_.spacing.z};
    values_.assign(geometry_.voxel_count(), 0.0);
}

std::pair<Vec3, Vec3> Volume::support_box() const {
    const auto& g = geometry_;
    const Vec3 lo = g.origin - g.spacing;
    const Vec3 hi{g.origin.x + g.dims[0] * g.spacing.x, g.origin.y + g.dims[1] * g.spacing.y,
                  g.origin.z + g.dims[2] * g.spacing.z};
    return {lo, hi};
}

DataTensor::DataTensor(std::vector<double> p, std::vector<double> alpha, std::vector<double> beta)
    : p_(std::move(p)), alpha_(std::move(alpha)), beta_(std::move(beta)) {
    for (std::size_t j = 1; j < p_.size(); ++j)
        if (!(p_[j] > p_[j - 1])) throw ShapeError("DataTensor: p axis must be strictly increasing");
    values_.assign(p_.size() * alpha_.size() * beta_.size(), 0.0);
}

}  // namespace cst
