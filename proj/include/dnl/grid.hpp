#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnl {

enum class Geometry { cartesian, radial };

/// Surface measure of the unit sphere in R^N (2 for N = 1).
inline double unit_sphere_area(int n_dim) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n_dim) / std::tgamma(0.5 * n_dim);
}

/// Uniform cell-centred grid on [x_lo, x_hi]. In radial geometry x is |x| in R^N.
class Grid1D {
public:
    Grid1D(Geometry geometry, int n_dim, double x_lo, double x_hi, int n_cells)
        : geometry_(geometry), n_dim_(geometry == Geometry::cartesian ? 1 : n_dim), x_lo_(x_lo), x_hi_(x_hi),
          n_cells_(n_cells) {
        if (!(x_lo < x_hi)) throw std::invalid_argument("grid: x_lo must be < x_hi");
        if (n_cells < 4) throw std::invalid_argument("grid: n_cells must be >= 4");
        if (geometry == Geometry::radial && x_lo < 0.0) throw std::invalid_argument("grid: radial grid needs x_lo >= 0");
        if (geometry == Geometry::radial && n_dim < 1) throw std::invalid_argument("grid: radial grid needs N >= 1");
    }

    static Grid1D cartesian(double x_lo, double x_hi, int n_cells) {
        return Grid1D(Geometry::cartesian, 1, x_lo, x_hi, n_cells);
    }
    static Grid1D radial(int n_dim, double r_hi, int n_cells, double r_lo = 0.0) {
        return Grid1D(Geometry::radial, n_dim, r_lo, r_hi, n_cells);
    }

    Geometry geometry() const { return geometry_; }
    bool is_radial() const { return geometry_ == Geometry::radial; }
    int n_dim() const { return n_dim_; }
    double x_lo() const { return x_lo_; }
    double x_hi() const { return x_hi_; }
    int n_cells() const { return n_cells_; }
    double h() const { return (x_hi_ - x_lo_) / n_cells_; }

    double center(int i) const { return x_lo_ + (i + 0.5) * h(); }
    /// Face i sits between cells i-1 and i; faces 0 and n_cells are the boundary.
    double face(int i) const { return x_lo_ + i * h(); }

    /// True when the left end is the symmetry centre r = 0.
    bool left_is_symmetry() const { return is_radial() && x_lo_ == 0.0; }

    double face_area(int i) const {
        if (!is_radial()) return 1.0;
        return unit_sphere_area(n_dim_) * std::pow(face(i), n_dim_ - 1);
    }

    double cell_volume(int i) const {
        if (!is_radial()) return h();
        const double a = face(i), b = face(i + 1);
        return unit_sphere_area(n_dim_) * (std::pow(b, n_dim_) - std::pow(a, n_dim_)) / n_dim_;
    }

    std::vector<double> centers() const {
        std::vector<double> c(n_cells_);
        for (int i = 0; i < n_cells_; ++i) c[i] = center(i);
        return c;
    }

    bool operator==(const Grid1D&) const = default;

private:
    Geometry geometry_;
    int n_dim_;
    double x_lo_;
    double x_hi_;
    int n_cells_;
};

/// Cell values on a grid at one time.
class Field {
public:
    Field(Grid1D grid, double time, std::vector<double> values)
        : grid_(grid), time_(time), values_(std::move(values)) {
        if (static_cast<int>(values_.size()) != grid_.n_cells())
            throw std::invalid_argument("field: value count does not match grid");
        for (double v : values_)
            if (!std::isfinite(v)) throw std::invalid_argument("field: non-finite value");
    }

    template <class F>
    static Field sample(const Grid1D& grid, double time, F&& fn) {
        std::vector<double> v(grid.n_cells());
        for (int i = 0; i < grid.n_cells(); ++i) v[i] = fn(grid.center(i));
        return Field(grid, time, std::move(v));
    }

    const Grid1D& grid() const { return grid_; }
    double time() const { return time_; }
    const std::vector<double>& values() const { return values_; }
    double operator[](int i) const { return values_[i]; }
    int size() const { return static_cast<int>(values_.size()); }

private:
    Grid1D grid_;
    double time_;
    std::vector<double> values_;
};

}  // namespace dnl
