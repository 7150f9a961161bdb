#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "../support.hpp"
#include "solsurf/error.hpp"
#include "solsurf/geometry.hpp"

using namespace solsurf;
using namespace solsurf::geom;
using sigma::Chart;

namespace {

// sphere of radius r in (theta, phi) coordinates, away from the poles
MatField sphere(const Grid2& g, double r)
{
    return MatField::generate(g, 2, 0, [&](int i1, int i2) {
        const double t = g.x(i1), p = g.y(i2);
        return unembed_su2({r * std::sin(t) * std::cos(p), r * std::sin(t) * std::sin(p), r * std::cos(t)});
    });
}

std::filesystem::path temp_file(const std::string& name)
{
    return std::filesystem::temp_directory_path() / ("solsurf_test_" + name);
}

} // namespace

TEST_CASE("su(2) embedding is an isometry for the trace inner product")
{
    std::mt19937 rng(17);
    for (int k = 0; k < 5; ++k) {
        const CMatrix a = testsupport::random_su(rng, 2), b = testsupport::random_su(rng, 2);
        const Vec3 pa = embed_su2(a), pb = embed_su2(b);
        CHECK((unembed_su2(pa) - a).norm() < 1e-15);
        const double dot = pa[0] * pb[0] + pa[1] * pb[1] + pa[2] * pb[2];
        CHECK(std::abs(dot - matlie::inner(a, b)) < 1e-14);
    }
    CHECK_THROWS_AS(embed_su2(matlie::zeros(3)), Error);
}

TEST_CASE("sphere: metric and Gaussian curvature 1/r^2")
{
    const double r = 2.0;
    const Grid2 g = Grid2::centered(Chart::minkowski, 1.2, 0.3, 0.02, 61);
    const Metric m = first_fundamental_form(sphere(g, r));
    const std::size_t k = g.index(30, 30);
    CHECK(m.g11[k] == doctest::Approx(r * r).epsilon(1e-8));
    CHECK(std::abs(m.g12[k]) < 1e-9);
    CHECK(m.g22[k] == doctest::Approx(r * r * std::sin(1.2) * std::sin(1.2)).epsilon(1e-8));
    const Curvature c = gauss_curvature(m);
    CHECK(c.masked == 0);
    CHECK(c.K.interior_max() == doctest::Approx(1.0 / (r * r)).epsilon(0.01));
    CHECK(c.K.interior_min() == doctest::Approx(1.0 / (r * r)).epsilon(0.01));
}

TEST_CASE("plane has zero curvature; a degenerate map is masked")
{
    const Grid2 g = Grid2::box(Chart::minkowski, -1.0, 1.0, 31);
    const MatField plane = MatField::generate(g, 2, 0, [&](int i1, int i2) {
        return unembed_su2({g.x(i1) + 0.3 * g.y(i2), g.y(i2), 0.5});
    });
    CHECK(std::abs(gauss_curvature(first_fundamental_form(plane)).K.interior_max()) < 1e-10);
    const MatField line = MatField::generate(g, 2, 0, [&](int i1, int) { return unembed_su2({g.x(i1), 0.0, 0.0}); });
    const Curvature c = gauss_curvature(first_fundamental_form(line));
    CHECK(c.masked == c.K.interior_count());
    CHECK(c.masked > 0);
}

TEST_CASE("field JSON round trip is exact")
{
    const Grid2 g = Grid2::centered(Chart::euclidean, 0.1, 0.2, 0.05, 21);
    std::mt19937 rng(23);
    MatField f(g, 3, 2);
    for (int i2 = 2; i2 < g.n2 - 2; ++i2)
        for (int i1 = 2; i1 < g.n1 - 2; ++i1) f.set(i1, i2, testsupport::random_matrix(rng, 3));
    const auto path = temp_file("field.json");
    export_field_json(f, path.string(), {{"tag", "x"}});
    const MatField back = import_field_json(path.string());
    std::filesystem::remove(path);
    CHECK(sigma::same_grid(back.grid(), g));
    CHECK(back.margin() == 2);
    CHECK(sigma::interior_max_diff(back, f) == 0.0);
    CHECK(matrix_from_json(matrix_to_json(f.at(5, 7))) == f.at(5, 7));
    CHECK_THROWS(field_from_json(nlohmann::json{{"grid", grid_to_json(g)}, {"n", 3}, {"values", {1, 2}}}));
}

TEST_CASE("OBJ and CSV output")
{
    const Grid2 g = Grid2::box(Chart::minkowski, 0.0, 1.0, 9);
    const MatField f = MatField::generate(g, 2, 3, [&](int i1, int i2) { return unembed_su2({g.x(i1), g.y(i2), 0.0}); });
    const EmbeddedSurface s = embed_su2(f);
    const std::string obj = obj_string(s);
    std::istringstream in(obj);
    std::string line;
    int v = 0, faces = 0;
    double x = 0, y = 0, z = 0;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) {
            std::istringstream ls(line.substr(2));
            ls >> x >> y >> z;
            ++v;
        }
        if (line.rfind("f ", 0) == 0) ++faces;
    }
    CHECK(v == 9);
    CHECK(faces == 8);
    // last vertex is node (5, 5)
    CHECK(x == g.x(5));
    CHECK(y == g.y(5));
    CHECK(z == 0.0);

    ScalarField sf{g, 4, std::vector<double>(g.size(), 0.25)};
    CHECK(csv_string(sf) == "x1,x2,value\n0.5,0.5,0.25\n");
    CHECK(fmt_double(0.1) == "0.10000000000000001");
}

TEST_CASE("text files")
{
    const auto path = temp_file("t.txt");
    write_text(path.string(), "abc\n");
    CHECK(read_text(path.string()) == "abc\n");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(read_text(path.string()), Error);
    CHECK_THROWS_AS(write_text("/nonexistent-dir/x", "a"), Error);
}
