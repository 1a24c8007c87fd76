#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace asianpde {

/// Uniform tensor mesh on [t_min, t_max] x [x_min, x_max].
///
/// For the pricing problem the time axis is reversed time tau = T - t with
/// t_min = 0 and t_max = T.
struct Grid {
    double x_min = 0.0;
    double x_max = 1.0;
    std::size_t n_x = 3;
    std::size_t n_t = 3;
    double t_min = 0.0;
    double t_max = 1.0;

    double h() const { return (x_max - x_min) / static_cast<double>(n_x - 1); }
    double dt() const { return (t_max - t_min) / static_cast<double>(n_t - 1); }
    double x(std::size_t j) const {
        return j + 1 == n_x ? x_max : x_min + (x_max - x_min) * static_cast<double>(j) / static_cast<double>(n_x - 1);
    }
    double t(std::size_t n) const {
        return n + 1 == n_t ? t_max : t_min + (t_max - t_min) * static_cast<double>(n) / static_cast<double>(n_t - 1);
    }

    /// 2x refinement: every node of this grid is a node of the result.
    Grid refined() const;

    /// Throws ConfigError unless n_x, n_t >= 3 and both extents are positive.
    void validate() const;
};

enum class SolutionComponent { u2, general };

/// Node values of a finite-difference solve, row n holding time t(n).
class GridSolution {
public:
    GridSolution(Grid grid, SolutionComponent component, std::string source_id);

    const Grid& grid() const { return grid_; }
    SolutionComponent component() const { return component_; }
    const std::string& source_id() const { return source_id_; }

    double operator()(std::size_t n, std::size_t j) const { return values_[n * grid_.n_x + j]; }
    double& at(std::size_t n, std::size_t j) { return values_[n * grid_.n_x + j]; }
    std::span<const double> row(std::size_t n) const {
        return {values_.data() + n * grid_.n_x, grid_.n_x};
    }
    std::span<double> row(std::size_t n) { return {values_.data() + n * grid_.n_x, grid_.n_x}; }
    std::span<const double> values() const { return values_; }

    /// Bilinear interpolation; throws ConfigError outside the mesh.
    double interpolate(double t, double x) const;

    /// Extremes of the boundary and initial data the solve consumed.
    double data_min = 0.0;
    double data_max = 0.0;

    /// Largest excursion of any node outside [data_min, data_max].
    double maximum_principle_excess() const;

private:
    Grid grid_;
    SolutionComponent component_;
    std::string source_id_;
    std::vector<double> values_;
};

/// CSV with `#` provenance lines and columns t,x,value.
void write_solution_csv(std::ostream& out, const GridSolution& sol);

}  // namespace asianpde
