#pragma once

// OBJ (ASCII, with a sidecar attribute CSV) and binary little-endian PLY.
// Files are written to a temporary sibling and renamed into place.

#include <helimin/mesh.hpp>

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace helimin {

namespace detail {

inline std::string format_g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_atomically(const std::filesystem::path& path, const std::string& bytes)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) fail(ErrorCode::Io, "cannot open '" + tmp.string() + "' for writing");
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        os.flush();
        if (!os) fail(ErrorCode::Io, "write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorCode::Io, "cannot move output into place at '" + path.string() + "'");
    }
}

template <class T>
void put_le(std::string& out, T value)
{
    char b[sizeof(T)];
    std::memcpy(b, &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    out.append(b, sizeof(T));
}

} // namespace detail

inline std::filesystem::path obj_sidecar_path(const std::filesystem::path& obj)
{
    auto p = obj;
    p.replace_extension(".attributes.csv");
    return p;
}

inline std::string obj_text(const SurfaceMesh& mesh)
{
    std::string s = "# helimin mesh\n# provenance " + mesh.provenance + "\n";
    for (const auto& v : mesh.vertices)
        s += "v " + detail::format_g17(v.x) + ' ' + detail::format_g17(v.y) + ' ' + detail::format_g17(v.z) + '\n';
    for (const auto& t : mesh.triangles)
        s += "f " + std::to_string(t[0] + 1) + ' ' + std::to_string(t[1] + 1) + ' ' + std::to_string(t[2] + 1) + '\n';
    return s;
}

inline std::string attribute_csv(const SurfaceMesh& mesh)
{
    std::string s = "vertex_id,K,abs_g,layer\n";
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        s += std::to_string(v) + ',' + detail::format_g17(mesh.k_gauss[v]) + ',' + detail::format_g17(mesh.abs_g[v])
            + ',' + std::to_string(mesh.layer[v]) + '\n';
    return s;
}

/// Writes the OBJ and its attribute CSV next to it.
inline void write_obj(const SurfaceMesh& mesh, const std::filesystem::path& path)
{
    detail::write_atomically(path, obj_text(mesh));
    detail::write_atomically(obj_sidecar_path(path), attribute_csv(mesh));
}

inline std::string ply_bytes(const SurfaceMesh& mesh)
{
    std::string s = "ply\nformat binary_little_endian 1.0\ncomment provenance " + mesh.provenance + "\n";
    s += "element vertex " + std::to_string(mesh.vertices.size()) + "\n";
    s += "property double x\nproperty double y\nproperty double z\n";
    s += "property float k_gauss\nproperty float abs_g\nproperty float layer\nproperty uchar in_omega_n\n";
    s += "element face " + std::to_string(mesh.triangles.size()) + "\n";
    s += "property list uchar uint vertex_indices\nend_header\n";
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        detail::put_le(s, mesh.vertices[v].x);
        detail::put_le(s, mesh.vertices[v].y);
        detail::put_le(s, mesh.vertices[v].z);
        detail::put_le(s, static_cast<float>(mesh.k_gauss[v]));
        detail::put_le(s, static_cast<float>(mesh.abs_g[v]));
        detail::put_le(s, static_cast<float>(mesh.layer[v]));
        detail::put_le(s, mesh.in_omega_N[v]);
    }
    for (const auto& t : mesh.triangles) {
        detail::put_le(s, std::uint8_t{3});
        for (auto i : t) detail::put_le(s, i);
    }
    return s;
}

inline void write_ply(const SurfaceMesh& mesh, const std::filesystem::path& path)
{
    detail::write_atomically(path, ply_bytes(mesh));
}

} // namespace helimin
