#pragma once

// Uniform 2D grids, matrix and scalar fields, 4th-order central stencils.

#include <functional>
#include <string>
#include <vector>

#include "solsurf/matlie.hpp"

namespace solsurf::sigma {

using matlie::cd;
using matlie::CMatrix;

enum class Chart { euclidean, minkowski };

const char* chart_name(Chart c);
Chart chart_from_name(const std::string& s);

struct Grid2 {
    Chart chart = Chart::euclidean;
    double x0 = 0.0, y0 = 0.0; // coordinates of node (0, 0)
    double h1 = 0.05, h2 = 0.05;
    int n1 = 101, n2 = 101;

    // Centered grid with equal spacing in both axes.
    static Grid2 centered(Chart c, double cx, double cy, double h, int n);
    // Square box [lo, hi]^2 with n nodes per axis.
    static Grid2 box(Chart c, double lo, double hi, int n);

    double x(int i1) const { return x0 + h1 * i1; }
    double y(int i2) const { return y0 + h2 * i2; }
    std::size_t size() const { return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2); }
    std::size_t index(int i1, int i2) const { return static_cast<std::size_t>(i2) * n1 + i1; }
    // Same spacing, half the step; node count 2n-1 keeps the extent.
    Grid2 refined() const;
    void validate() const;
};

bool same_grid(const Grid2& a, const Grid2& b);
void require_same_grid(const Grid2& a, const Grid2& b);

// Nodes closer than `margin` to the boundary carry NaN and are never read by checks.
class MatField {
public:
    MatField() = default;
    MatField(const Grid2& g, int n, int margin);

    static MatField generate(const Grid2& g, int n, int margin,
                             const std::function<CMatrix(int i1, int i2)>& fn);

    const Grid2& grid() const { return grid_; }
    int dim() const { return n_; }
    int margin() const { return margin_; }
    void set_margin(int m) { margin_ = m; }
    bool empty() const { return data_.empty(); }
    bool valid(int i1, int i2) const;

    CMatrix at(std::size_t k) const;
    CMatrix at(int i1, int i2) const { return at(grid_.index(i1, i2)); }
    void set(std::size_t k, const CMatrix& m);
    void set(int i1, int i2, const CMatrix& m) { set(grid_.index(i1, i2), m); }

    cd* node(std::size_t k) { return data_.data() + k * static_cast<std::size_t>(n_) * n_; }
    const cd* node(std::size_t k) const { return data_.data() + k * static_cast<std::size_t>(n_) * n_; }
    const std::vector<cd>& raw() const { return data_; }
    std::vector<cd>& raw() { return data_; }

private:
    Grid2 grid_;
    int n_ = 0;
    int margin_ = 0;
    std::vector<cd> data_;
};

struct ScalarField {
    Grid2 grid;
    int margin = 0;
    std::vector<double> v;

    double at(int i1, int i2) const { return v[grid.index(i1, i2)]; }
    // Maximum over nodes at distance >= max(margin, min_margin) from the boundary.
    double interior_max(int min_margin = 0) const;
    double interior_min(int min_margin = 0) const;
    std::size_t interior_count(int min_margin = 0) const;
};

// Shared region of several fields.
int common_margin(std::initializer_list<const MatField*> fs);

MatField map(const MatField& a, const std::function<CMatrix(const CMatrix&)>& fn);
MatField zip(const MatField& a, const MatField& b, const std::function<CMatrix(const CMatrix&, const CMatrix&)>& fn);
MatField add(const MatField& a, const MatField& b);
MatField sub(const MatField& a, const MatField& b);
MatField scale(const MatField& a, cd s);
MatField axpy(cd s, const MatField& x, const MatField& y); // s*x + y

ScalarField frob(const MatField& a);
double interior_max_norm(const MatField& a, int min_margin = 0);
double interior_max_diff(const MatField& a, const MatField& b, int min_margin = 0);
double max_abs_entry(const MatField& a);

// Real-axis stencils; axis 0 is x (i1), axis 1 is y (i2). Each adds 2 to the margin.
MatField d_axis(const MatField& f, int axis);
// Second derivatives add 4 (margin doubled).
MatField dd_axis(const MatField& f, int axis);
MatField d_xy(const MatField& f);

// Chart derivatives D1, D2 and second order D11, D12, D22.
MatField D1(const MatField& f);
MatField D2(const MatField& f);
MatField D11(const MatField& f);
MatField D12(const MatField& f);
MatField D22(const MatField& f);

// Coordinate-axis tangents from chart derivatives: for the Euclidean chart
// d/dx = D1 + D2, d/dy = i (D1 - D2); for Minkowski they coincide.
void axis_from_chart(Chart c, const CMatrix& d1, const CMatrix& d2, CMatrix& dx, CMatrix& dy);

} // namespace solsurf::sigma
