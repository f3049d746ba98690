#pragma once

// Triangle meshes of the immersion sampled on a parameter grid.

#include <helimin/detail/parallel.hpp>
#include <helimin/field_json.hpp>
#include <helimin/immersion.hpp>
#include <helimin/region.hpp>

#include <array>
#include <cstdint>
#include <map>
#include <tuple>

namespace helimin {

struct MeshParams {
    Region domain = Rectangle{-1.0, 1.0, -1.0, 1.0};
    int grid = 256; // cells per side (radial and angular for discs and annuli)
    int layers = 1;
    bool clip = false;
    unsigned threads = 1;
};

struct SurfaceMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::vector<Complex> parameter; // z of each vertex
    std::vector<double> k_gauss;
    std::vector<double> abs_g;
    std::vector<std::uint8_t> in_omega_N;
    std::vector<int> layer;
    double layer_period = 0.0;
    std::string provenance; // compact JSON: field and sampling parameters
};

namespace detail {

struct ParameterGrid {
    int ni = 0, nj = 0; // cells
    std::function<Complex(int, int)> point;
    std::function<double(Complex)> local_step; // cell size near z
    double step = 0.0;
};

inline ParameterGrid parameter_grid(const Region& domain, int n)
{
    ParameterGrid g;
    g.ni = g.nj = n;
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Rectangle>) {
                const double dx = (r.x1 - r.x0) / n, dy = (r.y1 - r.y0) / n;
                g.point = [r, dx, dy](int i, int j) { return Complex(r.x0 + i * dx, r.y0 + j * dy); };
                g.step = std::max(dx, dy);
                g.local_step = [s = g.step](Complex) { return s; };
            } else {
                Complex c;
                double r0 = 0.0, r1 = 0.0;
                if constexpr (std::is_same_v<R, Disc>) {
                    c = r.center;
                    r1 = r.radius;
                } else {
                    c = r.center;
                    r0 = r.r_inner;
                    r1 = r.r_outer;
                }
                const double dr = (r1 - r0) / n, dt = 2.0 * pi / n;
                g.point = [c, r0, dr, dt](int i, int j) { return c + std::polar(r0 + i * dr, j * dt); };
                g.step = std::max(dr, r1 * dt);
                g.local_step = [c, dr, dt](Complex z) { return std::max(dr, std::abs(z - c) * dt); };
            }
        },
        domain);
    return g;
}

inline std::string mesh_provenance(const MotifField& f, const MeshParams& p)
{
    nlohmann::json j;
    j["field"] = to_json(f);
    nlohmann::json d;
    std::visit(
        [&](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, Rectangle>) {
                d = {{"type", "rectangle"}, {"x0", r.x0}, {"x1", r.x1}, {"y0", r.y0}, {"y1", r.y1}};
            } else if constexpr (std::is_same_v<R, Disc>) {
                d = {{"type", "disc"}, {"cx", r.center.real()}, {"cy", r.center.imag()}, {"radius", r.radius}};
            } else {
                d = {{"type", "annulus"}, {"cx", r.center.real()}, {"cy", r.center.imag()}, {"r_inner", r.r_inner},
                    {"r_outer", r.r_outer}};
            }
        },
        p.domain);
    j["domain"] = d;
    j["grid"] = p.grid;
    j["layers"] = p.layers;
    j["clip"] = p.clip;
    return j.dump();
}

} // namespace detail

/// Samples r(z) = (z - conj P, h) on the grid. h and P are continued along a
/// fixed spanning tree (the row through the base corner, then every column);
/// triangles that straddle the resulting seams get their own copies of the
/// far-side vertices, continued from the triangle's first vertex.
inline SurfaceMesh build_mesh(const MotifField& f, const MeshParams& params)
{
    validate(params.domain);
    if (params.grid < 2) fail(ErrorCode::InvalidArgument, "grid must have at least 2 cells per side");
    if (params.layers < 1) fail(ErrorCode::InvalidArgument, "layers must be at least 1");
    const auto grid = detail::parameter_grid(params.domain, params.grid);
    SurfaceMesh mesh;
    mesh.layer_period = params.layers > 1 ? height_period(f) : 0.0;
    mesh.provenance = detail::mesh_provenance(f, params);

    const int ni = grid.ni + 1, nj = grid.nj + 1;
    const auto idx = [nj](int i, int j) { return static_cast<std::size_t>(i) * nj + j; };
    std::vector<Complex> z(static_cast<std::size_t>(ni) * nj);
    for (int i = 0; i < ni; ++i)
        for (int j = 0; j < nj; ++j) z[idx(i, j)] = grid.point(i, j);

    const Rectangle box = bounding_box(params.domain);
    const auto sites = f.sites_in(box.x0 - grid.step, box.x1 + grid.step, box.y0 - grid.step, box.y1 + grid.step);
    // the |g| = 1 curve sits about |p|/2 from each site; ask for 4 cells across it
    if (params.clip)
        for (const auto& s : sites)
            if (grid.local_step(s.center + 0.5 * std::abs(s.pitch)) > std::abs(s.pitch) / 8.0)
                fail(ErrorCode::GridTooCoarse, "grid too coarse to resolve the |g| = 1 boundary near a motif");
    std::vector<double> guard;
    for (const auto& s : sites) guard.push_back(std::max(2.0 * grid.local_step(s.center), 1e-3 * std::abs(s.pitch)));
    std::vector<std::uint8_t> valid(z.size(), 1);
    for (std::size_t k = 0; k < z.size(); ++k)
        for (std::size_t q = 0; q < sites.size(); ++q)
            if (std::abs(z[k] - sites[q].center) < guard[q]) valid[k] = 0;

    // base: the corner farthest from every site
    const std::array<std::pair<int, int>, 4> corners{{{0, 0}, {ni - 1, 0}, {0, nj - 1}, {ni - 1, nj - 1}}};
    int bi = 0, bj = 0;
    double best = -1.0;
    for (auto [ci, cj] : corners) {
        double d = std::numeric_limits<double>::infinity();
        for (const auto& s : sites) d = std::min(d, std::abs(z[idx(ci, cj)] - s.center));
        if (sites.empty()) d = 0.0;
        if (d > best) {
            best = d;
            bi = ci;
            bj = cj;
        }
    }
    if (!(f.distance_to_sites(z[idx(bi, bj)]) > f.guard_radius()))
        fail(ErrorCode::DegenerateGeometry, "every corner of the domain lies on a motif site");

    std::vector<double> h(z.size(), 0.0);
    std::vector<Complex> P(z.size(), 0.0);
    {
        const auto jet = eval_jet(f, z[idx(bi, bj)]);
        h[idx(bi, bj)] = jet.h;
        P[idx(bi, bj)] = jet.P;
    }
    // Tree edges step over sites that fall exactly on a grid vertex.
    auto on_site = [&](std::size_t k) { return f.distance_to_sites(z[k]) <= f.guard_radius(); };
    auto walk = [&](auto at, std::size_t last, int from, int count, int dir) {
        for (int t = from + dir; t >= 0 && t < count; t += dir) {
            const std::size_t k = at(t);
            if (on_site(k)) continue;
            h[k] = h[last] + detail::h_increment(f, z[last], z[k]);
            P[k] = P[last] + detail::P_increment(f, z[last], z[k]);
            last = k;
        }
    };
    auto row = [&](int i) { return idx(i, bj); };
    walk(row, idx(bi, bj), bi, ni, 1);
    walk(row, idx(bi, bj), bi, ni, -1);
    for (int i = 0; i < ni; ++i) {
        // a column whose root is a site starts from the neighbouring root
        std::size_t root = idx(i, bj);
        if (on_site(root)) root = idx(i + (i > bi ? -1 : 1), bj);
        auto col = [&, i](int j) { return idx(i, j); };
        walk(col, root, bj, nj, 1);
        walk(col, root, bj, nj, -1);
    }

    // per-vertex samples in parallel
    std::vector<Complex> hz(z.size(), 0.0), hzz(z.size(), 0.0);
    detail::parallel_chunks(z.size(), params.threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t k = b; k < e; ++k) {
            if (!valid[k]) continue;
            const auto jet = detail::jet_unchecked(f, z[k]);
            hz[k] = jet.hz;
            hzz[k] = jet.hzz;
        }
    });

    // layer-0 vertices: originals first, seam copies appended on demand
    struct Local {
        std::size_t source;
        double h;
        Complex P;
    };
    std::vector<Local> local;
    std::vector<std::int64_t> slot(z.size(), -1);
    auto original = [&](std::size_t k) {
        if (slot[k] < 0) {
            slot[k] = static_cast<std::int64_t>(local.size());
            local.push_back({k, h[k], P[k]});
        }
        return static_cast<std::uint32_t>(slot[k]);
    };
    std::map<std::tuple<std::size_t, long long, long long, long long>, std::uint32_t> copies;
    const double quantum = 1e-7 * f.length_scale();
    auto copy_of = [&](std::size_t k, double hk, Complex Pk) {
        const auto key = std::make_tuple(k, std::llround((hk - h[k]) / quantum), std::llround((Pk - P[k]).real() / quantum),
            std::llround((Pk - P[k]).imag() / quantum));
        auto it = copies.find(key);
        if (it != copies.end()) return it->second;
        const auto id = static_cast<std::uint32_t>(local.size());
        local.push_back({k, hk, Pk});
        copies.emplace(key, id);
        return id;
    };

    const double bbox_scale = [&] {
        const double w = box.x1 - box.x0, hgt = box.y1 - box.y0;
        return std::max(w, hgt);
    }();
    std::vector<std::array<std::uint32_t, 3>> tris;
    auto add_triangle = [&](std::size_t a, std::size_t b, std::size_t c) {
        if (!valid[a] || !valid[b] || !valid[c]) return;
        if (params.clip && (!in_omega_N(hz[a]) || !in_omega_N(hz[b]) || !in_omega_N(hz[c]))) return;
        std::array<std::uint32_t, 3> t{original(a), 0, 0};
        const std::size_t others[] = {b, c};
        for (int q = 0; q < 2; ++q) {
            const std::size_t k = others[q];
            const double hk = h[a] + detail::h_increment(f, z[a], z[k]);
            const Complex Pk = P[a] + detail::P_increment(f, z[a], z[k]);
            const bool same = std::abs(hk - h[k]) <= quantum && std::abs(Pk - P[k]) <= quantum;
            t[q + 1] = same ? original(k) : copy_of(k, hk, Pk);
        }
        tris.push_back(t);
    };
    for (int i = 0; i + 1 < ni; ++i)
        for (int j = 0; j + 1 < nj; ++j) {
            const std::size_t v00 = idx(i, j), v10 = idx(i + 1, j), v11 = idx(i + 1, j + 1), v01 = idx(i, j + 1);
            add_triangle(v00, v10, v11);
            add_triangle(v00, v11, v01);
        }

    std::vector<Vec3> pos(local.size());
    for (std::size_t v = 0; v < local.size(); ++v) {
        const Complex w = z[local[v].source] - std::conj(local[v].P);
        pos[v] = {w.real(), w.imag(), local[v].h};
    }
    double extent = bbox_scale;
    if (!pos.empty()) {
        Vec3 lo = pos[0], hi = pos[0];
        for (const auto& p : pos) {
            lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
            hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
        }
        extent = norm(hi - lo);
    }
    const double min_area = 1e-14 * extent * extent;
    std::erase_if(tris, [&](const auto& t) {
        return 0.5 * norm(cross(pos[t[1]] - pos[t[0]], pos[t[2]] - pos[t[0]])) <= min_area;
    });

    const std::size_t nv = local.size();
    for (int l = 0; l < params.layers; ++l) {
        const double offset = l * mesh.layer_period;
        const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
        for (std::size_t v = 0; v < nv; ++v) {
            const std::size_t k = local[v].source;
            mesh.vertices.push_back({pos[v].x, pos[v].y, pos[v].z + offset});
            mesh.parameter.push_back(z[k]);
            mesh.k_gauss.push_back(curvature_from_jet(hz[k], hzz[k]));
            mesh.abs_g.push_back(gauss_map_from_hz(hz[k]).modulus());
            mesh.in_omega_N.push_back(in_omega_N(hz[k]) ? 1 : 0);
            mesh.layer.push_back(l);
        }
        for (const auto& t : tris) mesh.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
    return mesh;
}

/// Vertices whose one-ring is closed: every incident edge borders two triangles.
inline std::vector<std::uint8_t> interior_vertices(const SurfaceMesh& mesh)
{
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> edges;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            const auto a = t[e], b = t[(e + 1) % 3];
            edges[{std::min(a, b), std::max(a, b)}]++;
        }
    std::vector<std::uint8_t> interior(mesh.vertices.size(), 0);
    for (const auto& t : mesh.triangles)
        for (auto v : t) interior[v] = 1;
    for (const auto& [e, count] : edges)
        if (count != 2) interior[e.first] = interior[e.second] = 0;
    return interior;
}

/// |H| from the cotangent Laplacian with barycentric areas, NaN off the interior.
inline std::vector<double> discrete_mean_curvature(const SurfaceMesh& mesh)
{
    const std::size_t n = mesh.vertices.size();
    std::vector<Vec3> lap(n, Vec3{0, 0, 0});
    std::vector<double> area(n, 0.0);
    for (const auto& t : mesh.triangles) {
        const Vec3 p[3] = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
        const double a2 = norm(cross(p[1] - p[0], p[2] - p[0]));
        for (int k = 0; k < 3; ++k) {
            area[t[k]] += a2 / 6.0;
            // angle at k weights the opposite edge
            const int i = (k + 1) % 3, j = (k + 2) % 3;
            const Vec3 u = p[i] - p[k], v = p[j] - p[k];
            const double cot = dot(u, v) / norm(cross(u, v));
            lap[t[i]] += (p[j] - p[i]) * (0.5 * cot);
            lap[t[j]] += (p[i] - p[j]) * (0.5 * cot);
        }
    }
    const auto interior = interior_vertices(mesh);
    std::vector<double> H(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t v = 0; v < n; ++v)
        if (interior[v] && area[v] > 0.0) H[v] = 0.5 * norm(lap[v]) / area[v];
    return H;
}

/// Angle-deficit Gaussian curvature (2 pi - sum of angles) / barycentric area.
inline std::vector<double> discrete_gaussian_curvature(const SurfaceMesh& mesh)
{
    const std::size_t n = mesh.vertices.size();
    std::vector<double> angle(n, 0.0), area(n, 0.0);
    for (const auto& t : mesh.triangles) {
        const Vec3 p[3] = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
        const double a2 = norm(cross(p[1] - p[0], p[2] - p[0]));
        for (int k = 0; k < 3; ++k) {
            const Vec3 u = p[(k + 1) % 3] - p[k], v = p[(k + 2) % 3] - p[k];
            angle[t[k]] += std::atan2(norm(cross(u, v)), dot(u, v));
            area[t[k]] += a2 / 6.0;
        }
    }
    const auto interior = interior_vertices(mesh);
    std::vector<double> K(n, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t v = 0; v < n; ++v)
        if (interior[v] && area[v] > 0.0) K[v] = (2.0 * pi - angle[v]) / area[v];
    return K;
}

} // namespace helimin
