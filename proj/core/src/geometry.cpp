#include "solsurf/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace solsurf::geom {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

MatField scalar_to_field(const Grid2& g, int margin, const std::vector<double>& v)
{
    MatField f(g, 1, margin);
    for (int i2 = margin; i2 < g.n2 - margin; ++i2)
        for (int i1 = margin; i1 < g.n1 - margin; ++i1) {
            const std::size_t k = g.index(i1, i2);
            f.node(k)[0] = cd(v[k], 0.0);
        }
    return f;
}

double val(const MatField& f, std::size_t k) { return f.node(k)[0].real(); }

} // namespace

std::string fmt_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Vec3 embed_su2(const CMatrix& f)
{
    if (f.rows() != 2 || f.cols() != 2) throw Error(ErrorKind::dimension_mismatch, "embed_su2 needs N = 2");
    const CMatrix p = matlie::project_su(f).mat;
    // i(a s1 + b s2 + c s3) = [[ic, ia + b], [ia - b, -ic]]
    return {p(0, 1).imag(), p(0, 1).real(), p(0, 0).imag()};
}

CMatrix unembed_su2(const Vec3& p)
{
    CMatrix m(2, 2);
    const cd I(0.0, 1.0);
    m << I * p[2], I * p[0] + p[1], I * p[0] - p[1], -I * p[2];
    return m;
}

EmbeddedSurface embed_su2(const MatField& f)
{
    if (f.dim() != 2) throw Error(ErrorKind::dimension_mismatch, "embed_su2 needs N = 2");
    EmbeddedSurface s;
    s.grid = f.grid();
    s.margin = f.margin();
    const Grid2& g = f.grid();
    s.points.assign(g.size(), Vec3{kNaN, kNaN, kNaN});
    s.normals.assign(g.size(), Vec3{0.0, 0.0, 0.0});
    for (int i2 = s.margin; i2 < g.n2 - s.margin; ++i2)
        for (int i1 = s.margin; i1 < g.n1 - s.margin; ++i1) s.points[g.index(i1, i2)] = embed_su2(f.at(i1, i2));
    // normals from central differences of the embedded points
    for (int i2 = s.margin + 1; i2 < g.n2 - s.margin - 1; ++i2)
        for (int i1 = s.margin + 1; i1 < g.n1 - s.margin - 1; ++i1) {
            const Vec3& xp = s.points[g.index(i1 + 1, i2)];
            const Vec3& xm = s.points[g.index(i1 - 1, i2)];
            const Vec3& yp = s.points[g.index(i1, i2 + 1)];
            const Vec3& ym = s.points[g.index(i1, i2 - 1)];
            Vec3 a{xp[0] - xm[0], xp[1] - xm[1], xp[2] - xm[2]};
            Vec3 b{yp[0] - ym[0], yp[1] - ym[1], yp[2] - ym[2]};
            Vec3 n{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
            const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
            const double scale = std::sqrt((a[0] * a[0] + a[1] * a[1] + a[2] * a[2]) * (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]));
            if (len > 1e-10 * scale && len > 0.0) s.normals[g.index(i1, i2)] = {n[0] / len, n[1] / len, n[2] / len};
        }
    return s;
}

Metric first_fundamental_form(const MatField& f)
{
    MatField dx = sigma::d_axis(f, 0), dy = sigma::d_axis(f, 1);
    const Grid2& g = f.grid();
    Metric m;
    m.grid = g;
    m.margin = dx.margin();
    m.g11.assign(g.size(), kNaN);
    m.g12.assign(g.size(), kNaN);
    m.g22.assign(g.size(), kNaN);
    for (int i2 = m.margin; i2 < g.n2 - m.margin; ++i2)
        for (int i1 = m.margin; i1 < g.n1 - m.margin; ++i1) {
            const std::size_t k = g.index(i1, i2);
            const CMatrix a = dx.at(k), b = dy.at(k);
            m.g11[k] = matlie::inner(a, a);
            m.g12[k] = matlie::inner(a, b);
            m.g22[k] = matlie::inner(b, b);
        }
    return m;
}

Curvature gauss_curvature(const Metric& mt, double tol_metric)
{
    const Grid2& g = mt.grid;
    MatField E = scalar_to_field(g, mt.margin, mt.g11);
    MatField F = scalar_to_field(g, mt.margin, mt.g12);
    MatField G = scalar_to_field(g, mt.margin, mt.g22);
    MatField Eu = sigma::d_axis(E, 0), Ev = sigma::d_axis(E, 1);
    MatField Fu = sigma::d_axis(F, 0), Fv = sigma::d_axis(F, 1);
    MatField Gu = sigma::d_axis(G, 0), Gv = sigma::d_axis(G, 1);
    MatField Evv = sigma::dd_axis(E, 1), Guu = sigma::dd_axis(G, 0), Fuv = sigma::d_xy(F);
    Curvature c;
    const int m = mt.margin + 4;
    c.K = ScalarField{g, m, std::vector<double>(g.size(), kNaN)};
    for (int i2 = m; i2 < g.n2 - m; ++i2)
        for (int i1 = m; i1 < g.n1 - m; ++i1) {
            const std::size_t k = g.index(i1, i2);
            const double e = mt.g11[k], f = mt.g12[k], gg = mt.g22[k];
            const double det = e * gg - f * f;
            if (!(det > tol_metric)) {
                ++c.masked;
                continue;
            }
            const Eigen::Matrix3d a{{-0.5 * val(Evv, k) + val(Fuv, k) - 0.5 * val(Guu, k), 0.5 * val(Eu, k),
                                     val(Fu, k) - 0.5 * val(Ev, k)},
                                    {val(Fv, k) - 0.5 * val(Gu, k), e, f},
                                    {0.5 * val(Gv, k), f, gg}};
            const Eigen::Matrix3d b{{0.0, 0.5 * val(Ev, k), 0.5 * val(Gu, k)}, {0.5 * val(Ev, k), e, f},
                                    {0.5 * val(Gu, k), f, gg}};
            c.K.v[k] = (a.determinant() - b.determinant()) / (det * det);
        }
    return c;
}

nlohmann::json grid_to_json(const Grid2& g)
{
    return {{"chart", sigma::chart_name(g.chart)},
            {"origin", {g.x0, g.y0}},
            {"spacing", {g.h1, g.h2}},
            {"dims", {g.n1, g.n2}}};
}

Grid2 grid_from_json(const nlohmann::json& j)
{
    Grid2 g;
    g.chart = sigma::chart_from_name(j.at("chart").get<std::string>());
    g.x0 = j.at("origin").at(0).get<double>();
    g.y0 = j.at("origin").at(1).get<double>();
    g.h1 = j.at("spacing").at(0).get<double>();
    g.h2 = j.at("spacing").at(1).get<double>();
    g.n1 = j.at("dims").at(0).get<int>();
    g.n2 = j.at("dims").at(1).get<int>();
    g.validate();
    return g;
}

nlohmann::json matrix_to_json(const CMatrix& m)
{
    nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int k = 0; k < m.cols(); ++k) {
            re.push_back(m(i, k).real());
            im.push_back(m(i, k).imag());
        }
    return {{"n", m.rows()}, {"re", re}, {"im", im}};
}

CMatrix matrix_from_json(const nlohmann::json& j)
{
    const int n = j.at("n").get<int>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (static_cast<int>(re.size()) != n * n || static_cast<int>(im.size()) != n * n)
        throw Error(ErrorKind::invalid_argument, "matrix entry count does not match n");
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) m(i, k) = cd(re[i * n + k].get<double>(), im[i * n + k].get<double>());
    return m;
}

nlohmann::json field_to_json(const MatField& f)
{
    const Grid2& g = f.grid();
    nlohmann::json vals = nlohmann::json::array();
    for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1) {
            if (f.valid(i1, i2))
                vals.push_back(matrix_to_json(f.at(i1, i2)));
            else
                vals.push_back(nullptr);
        }
    return {{"grid", grid_to_json(g)}, {"n", f.dim()}, {"margin", f.margin()}, {"values", vals}};
}

MatField field_from_json(const nlohmann::json& j)
{
    const Grid2 g = grid_from_json(j.at("grid"));
    const int n = j.at("n").get<int>();
    const int margin = j.value("margin", 0);
    const auto& vals = j.at("values");
    if (vals.size() != g.size()) throw Error(ErrorKind::invalid_argument, "field value count does not match grid");
    MatField f(g, n, margin);
    for (int i2 = 0; i2 < g.n2; ++i2)
        for (int i1 = 0; i1 < g.n1; ++i1) {
            const auto& v = vals[g.index(i1, i2)];
            if (v.is_null()) continue;
            f.set(i1, i2, matrix_from_json(v));
        }
    return f;
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error(ErrorKind::io, "write to '" + path + "' failed");
}

std::string read_text(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string obj_string(const EmbeddedSurface& s)
{
    const Grid2& g = s.grid;
    const int m = s.margin;
    const int w = g.n1 - 2 * m, h = g.n2 - 2 * m;
    std::ostringstream o;
    o << "# solsurf surface " << w << "x" << h << "\n";
    for (int i2 = m; i2 < g.n2 - m; ++i2)
        for (int i1 = m; i1 < g.n1 - m; ++i1) {
            const Vec3& p = s.points[g.index(i1, i2)];
            o << "v " << fmt_double(p[0]) << ' ' << fmt_double(p[1]) << ' ' << fmt_double(p[2]) << "\n";
        }
    auto id = [w](int a, int b) { return b * w + a + 1; };
    for (int b = 0; b + 1 < h; ++b)
        for (int a = 0; a + 1 < w; ++a) {
            o << "f " << id(a, b) << ' ' << id(a + 1, b) << ' ' << id(a + 1, b + 1) << "\n";
            o << "f " << id(a, b) << ' ' << id(a + 1, b + 1) << ' ' << id(a, b + 1) << "\n";
        }
    return o.str();
}

void export_obj(const EmbeddedSurface& s, const std::string& path) { write_text(path, obj_string(s)); }

std::string csv_string(const ScalarField& f)
{
    const Grid2& g = f.grid;
    const int m = f.margin;
    std::ostringstream o;
    o << "x1,x2,value\n";
    for (int i2 = m; i2 < g.n2 - m; ++i2)
        for (int i1 = m; i1 < g.n1 - m; ++i1)
            o << fmt_double(g.x(i1)) << ',' << fmt_double(g.y(i2)) << ',' << fmt_double(f.v[g.index(i1, i2)]) << "\n";
    return o.str();
}

void export_csv(const ScalarField& f, const std::string& path) { write_text(path, csv_string(f)); }

void export_field_json(const MatField& f, const std::string& path, const nlohmann::json& extra)
{
    nlohmann::json j = field_to_json(f);
    if (extra.is_object())
        for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    write_text(path, j.dump());
}

MatField import_field_json(const std::string& path)
{
    return field_from_json(nlohmann::json::parse(read_text(path)));
}

} // namespace solsurf::geom
