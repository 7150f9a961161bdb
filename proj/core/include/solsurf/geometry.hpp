#pragma once

// su(2) embedding, first fundamental form, Gaussian curvature, file export.

#include <array>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "solsurf/grid.hpp"

namespace solsurf::geom {

using matlie::cd;
using matlie::CMatrix;
using sigma::Grid2;
using sigma::MatField;
using sigma::ScalarField;
using Vec3 = std::array<double, 3>;

inline constexpr double kTolMetric = 1e-8;

struct EmbeddedSurface {
    Grid2 grid;
    int margin = 0;
    std::vector<Vec3> points;
    std::vector<Vec3> normals; // zero where the tangent rank drops
};

// F = i(a s1 + b s2 + c s3) -> (a, b, c), using the su-projection of F.
Vec3 embed_su2(const CMatrix& f);
CMatrix unembed_su2(const Vec3& p);
EmbeddedSurface embed_su2(const MatField& f);

// Metric components per node: g11, g12, g22 with g_ab = inner(d_a F, d_b F) on
// the real coordinate axes.
struct Metric {
    Grid2 grid;
    int margin = 0;
    std::vector<double> g11, g12, g22;
    double det(std::size_t k) const { return g11[k] * g22[k] - g12[k] * g12[k]; }
};
Metric first_fundamental_form(const MatField& f);

// Brioschi formula with 4th-order stencils on the metric. Nodes with
// det g <= tol_metric are masked (NaN) and counted.
struct Curvature {
    ScalarField K;
    std::size_t masked = 0;
};
Curvature gauss_curvature(const Metric& g, double tol_metric = kTolMetric);

// --- files ---
nlohmann::json grid_to_json(const Grid2& g);
Grid2 grid_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json field_to_json(const MatField& f);
MatField field_from_json(const nlohmann::json& j);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

void export_obj(const EmbeddedSurface& s, const std::string& path);
std::string obj_string(const EmbeddedSurface& s);
void export_csv(const ScalarField& f, const std::string& path);
std::string csv_string(const ScalarField& f);
void export_field_json(const MatField& f, const std::string& path, const nlohmann::json& extra = {});
MatField import_field_json(const std::string& path);

// 17 significant digits.
std::string fmt_double(double x);

} // namespace solsurf::geom
