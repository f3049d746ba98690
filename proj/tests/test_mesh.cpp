#include "mesh_readers.hpp"
#include "support.hpp"

#include <helimin/mesh_io.hpp>

#include <gtest/gtest.h>

#include <filesystem>

using namespace helimin;
using namespace testing_support;

namespace {

double max_interior_H(const SurfaceMesh& m)
{
    double mx = 0.0;
    for (double h : discrete_mean_curvature(m))
        if (!std::isnan(h)) mx = std::max(mx, h);
    return mx;
}

SurfaceMesh mesh_of(const MotifField& f, Region d, int grid, bool clip = true, int layers = 1)
{
    MeshParams p;
    p.domain = d;
    p.grid = grid;
    p.clip = clip;
    p.layers = layers;
    return build_mesh(f, p);
}

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "helimin_mesh_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void check_structure(const SurfaceMesh& m)
{
    const std::size_t n = m.vertices.size();
    EXPECT_EQ(m.k_gauss.size(), n);
    EXPECT_EQ(m.abs_g.size(), n);
    EXPECT_EQ(m.in_omega_N.size(), n);
    EXPECT_EQ(m.layer.size(), n);
    EXPECT_EQ(m.parameter.size(), n);
    Vec3 lo = m.vertices.at(0), hi = lo;
    for (const auto& v : m.vertices) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }
    const double bbox2 = std::pow(norm(hi - lo), 2);
    for (const auto& t : m.triangles) {
        for (auto i : t) ASSERT_LT(i, n);
        const double area = 0.5 * norm(cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]));
        EXPECT_GT(area, 1e-14 * bbox2);
    }
}

} // namespace

TEST(BuildMesh, HelicoidAnnulusIsMinimal)
{
    const auto f = helicoid(1.0);
    const Annulus d{0.0, 0.5 + 1e-3, 3.0};
    const auto coarse = mesh_of(f, d, 64), fine = mesh_of(f, d, 128);
    check_structure(fine);
    const double h1 = max_interior_H(coarse), h2 = max_interior_H(fine);
    EXPECT_LT(h2, 1e-3);
    EXPECT_LT(h2, 0.5 * h1);
    // the inner circle maps onto the axis, every vertex lies on the helicoid
    for (std::size_t v = 0; v < fine.vertices.size(); ++v) {
        const auto& x = fine.vertices[v];
        const double rho = std::hypot(x.x, x.y);
        if (rho < 1e-6) continue;
        const double wrap = std::remainder(std::atan2(x.y, x.x) - x.z, pi);
        EXPECT_NEAR(wrap, 0.0, 1e-9);
    }
}

TEST(BuildMesh, DiscreteCurvatureConvergesForEachFamily)
{
    struct Case {
        const char* name;
        MotifField f;
        Region d;
    };
    const std::vector<Case> cases{
        {"pair", same_pair(0.5, 1.0), Rectangle{-1.5, 1.5, -1.5, 1.5}},
        {"dipole", dipole(0.45, 1.0), Rectangle{-1.5, 1.5, -1.5, 1.5}},
        {"chain10", chain10(0.3, 1.0), Rectangle{-1, 1, -1, 1}},
        {"tgb", MotifField::tgb(0.3, 1.0), Rectangle{0, 2, -1, 1}},
        {"utgb", MotifField::utgb(0.3, 1.0), Rectangle{0, 2, -1, 1}},
    };
    for (const auto& c : cases) {
        const double h1 = max_interior_H(mesh_of(c.f, c.d, 96));
        const double h2 = max_interior_H(mesh_of(c.f, c.d, 192));
        EXPECT_LT(h2, 0.5 * h1) << c.name;
        EXPECT_LT(h2, 0.05) << c.name;
    }
}

TEST(BuildMesh, ClipKeepsOmegaN)
{
    const auto m = mesh_of(dipole(0.45, 1.0), Rectangle{-1.5, 1.5, -1.5, 1.5}, 128);
    std::vector<std::uint8_t> used(m.vertices.size(), 0);
    for (const auto& t : m.triangles)
        for (auto i : t) used[i] = 1;
    for (std::size_t v = 0; v < m.vertices.size(); ++v)
        if (used[v]) {
            EXPECT_GE(m.abs_g[v], 1.0);
            EXPECT_EQ(m.in_omega_N[v], 1);
        }
    const auto unclipped = mesh_of(dipole(0.45, 1.0), Rectangle{-1.5, 1.5, -1.5, 1.5}, 128, false);
    EXPECT_GT(unclipped.triangles.size(), m.triangles.size());
}

TEST(BuildMesh, DiscreteGaussCurvatureMatchesExact)
{
    const auto m = mesh_of(same_pair(0.5, 1.0), Rectangle{-1.5, 1.5, -1.5, 1.5}, 256);
    const auto K = discrete_gaussian_curvature(m);
    double worst = 0.0;
    for (std::size_t v = 0; v < K.size(); ++v)
        if (!std::isnan(K[v])) worst = std::max(worst, std::abs(K[v] - m.k_gauss[v]) / (std::abs(m.k_gauss[v]) + 0.1));
    EXPECT_LT(worst, 0.02);
}

TEST(BuildMesh, LayersAreExactTranslates)
{
    const auto f = same_pair(0.15, 1.0);
    const auto m = mesh_of(f, Rectangle{-1.5, 1.5, -1.5, 1.5}, 64, false, 3);
    const double T = 2 * pi * 0.15;
    EXPECT_NEAR(m.layer_period, T, 1e-15);
    const std::size_t per = m.vertices.size() / 3;
    ASSERT_EQ(per * 3, m.vertices.size());
    for (std::size_t v = 0; v < per; ++v)
        for (int l = 1; l < 3; ++l) {
            const auto& a = m.vertices[v];
            const auto& b = m.vertices[v + l * per];
            EXPECT_EQ(b.x, a.x);
            EXPECT_EQ(b.y, a.y);
            EXPECT_EQ(b.z, a.z + l * m.layer_period);
            EXPECT_EQ(m.layer[v + l * per], l);
        }
    EXPECT_EQ(m.triangles.size() % 3, 0u);

    // pitch quantum of 0.1 and 0.25 is 0.05
    const auto g = MotifField::finite({{Complex(0.5, 0), 0.1}, {Complex(-0.5, 0), 0.25}});
    EXPECT_NEAR(mesh_of(g, Rectangle{-1, 1, -1, 1}, 16, false, 2).layer_period, 2 * pi * 0.05, 1e-12);
}

TEST(BuildMesh, Errors)
{
    const auto g = MotifField::finite({{Complex(0.5, 0), 1.0}, {Complex(-0.5, 0), std::sqrt(2.0)}});
    try {
        mesh_of(g, Rectangle{-1, 1, -1, 1}, 16, false, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IncommensuratePitches);
    }
    EXPECT_NO_THROW(mesh_of(g, Rectangle{-1, 1, -1, 1}, 16, false, 1));
    try {
        mesh_of(dipole(0.1, 1.0), Rectangle{-2, 2, -2, 2}, 32, true);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::GridTooCoarse);
    }
    EXPECT_THROW(mesh_of(helicoid(1.0), Rectangle{-1, 1, -1, 1}, 1), Error);
}

TEST(BuildMesh, SeamsAndChainStrip)
{
    // sites inside a rectangle: the unwrap leaves seams, every triangle stays continuous
    const auto f = same_pair(0.5, 1.0);
    const auto m = mesh_of(f, Rectangle{-1.5, 1.5, -1.5, 1.5}, 64, false);
    check_structure(m);
    for (const auto& t : m.triangles)
        for (int e = 0; e < 3; ++e) {
            const auto a = t[e], b = t[(e + 1) % 3];
            const double dh = detail::h_increment(f, m.parameter[a], m.parameter[b]);
            EXPECT_NEAR(m.vertices[b].z - m.vertices[a].z, dh, 1e-9);
        }
    const auto strip = mesh_of(MotifField::tgb(0.3, 1.0), Rectangle{0, 2, -1, 1}, 64);
    check_structure(strip);
    EXPECT_GT(strip.triangles.size(), 0u);
}

TEST(BuildMesh, Deterministic)
{
    const auto a = mesh_of(dipole(0.45, 1.0), Rectangle{-1.5, 1.5, -1.5, 1.5}, 64);
    MeshParams p;
    p.domain = Rectangle{-1.5, 1.5, -1.5, 1.5};
    p.grid = 64;
    p.clip = true;
    p.threads = 3;
    const auto b = build_mesh(dipole(0.45, 1.0), p);
    EXPECT_EQ(ply_bytes(a), ply_bytes(b));
    EXPECT_EQ(obj_text(a), obj_text(b));
}

TEST(MeshIo, EmptyMeshHeaderOnly)
{
    SurfaceMesh m;
    m.provenance = "{}";
    const auto obj = scratch("empty.obj"), ply = scratch("empty.ply");
    write_obj(m, obj);
    write_ply(m, ply);
    EXPECT_EQ(slurp(obj.string()), "# helimin mesh\n# provenance {}\n");
    EXPECT_EQ(slurp(obj_sidecar_path(obj).string()), "vertex_id,K,abs_g,layer\n");
    const auto r = read_ply(ply.string());
    EXPECT_TRUE(r.vertices.empty());
    EXPECT_TRUE(r.triangles.empty());
}

TEST(MeshIo, UnitTriangle)
{
    SurfaceMesh m;
    m.provenance = "{}";
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}};
    m.parameter = {0.0, 1.0, Complex(0, 1)};
    m.k_gauss = {0, 0, 0};
    m.abs_g = {1, 1, 1};
    m.in_omega_N = {1, 1, 1};
    m.layer = {0, 0, 0};
    EXPECT_EQ(obj_text(m), "# helimin mesh\n# provenance {}\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
    const auto path = scratch("tri.obj");
    write_obj(m, path);
    const auto first = slurp(path.string());
    write_obj(m, path);
    EXPECT_EQ(slurp(path.string()), first);
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
}

TEST(MeshIo, RoundTripIsBitExact)
{
    const auto m = mesh_of(dipole(0.45, 1.0), Rectangle{-1.5, 1.5, -1.5, 1.5}, 64, true, 1);
    const auto obj = scratch("dipole.obj"), ply = scratch("dipole.ply");
    write_obj(m, obj);
    write_ply(m, ply);
    for (const auto& r : {read_obj(obj.string()), read_ply(ply.string())}) {
        ASSERT_EQ(r.vertices.size(), m.vertices.size());
        ASSERT_EQ(r.triangles, m.triangles);
        EXPECT_EQ(r.provenance, m.provenance);
        for (std::size_t v = 0; v < m.vertices.size(); ++v) {
            EXPECT_EQ(r.vertices[v].x, m.vertices[v].x);
            EXPECT_EQ(r.vertices[v].y, m.vertices[v].y);
            EXPECT_EQ(r.vertices[v].z, m.vertices[v].z);
        }
    }
    const auto r = read_ply(ply.string());
    for (std::size_t v = 0; v < m.vertices.size(); ++v) EXPECT_EQ(r.abs_g[v], static_cast<float>(m.abs_g[v]));
    EXPECT_EQ(nlohmann::json::parse(m.provenance)["field"], to_json(dipole(0.45, 1.0)));
}

TEST(MeshIo, UnwritablePathNamesThePath)
{
    SurfaceMesh m;
    try {
        write_obj(m, "/nonexistent_dir_for_helimin/x.obj");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
        EXPECT_NE(std::string(e.what()).find("/nonexistent_dir_for_helimin/x.obj"), std::string::npos);
    }
}
