// helimin: meshes, reports and stability verdicts for helical motif surfaces.
//
// Exit codes: 0 success (or stable), 2 configuration error, 3 numeric failure,
// 4 unstable, 5 indeterminate. Data goes to stdout or --out, diagnostics to stderr.

#include <helimin/axes.hpp>
#include <helimin/field_json.hpp>
#include <helimin/graph.hpp>
#include <helimin/level_set.hpp>
#include <helimin/mesh_io.hpp>
#include <helimin/multipole.hpp>
#include <helimin/quadrature.hpp>
#include <helimin/stability.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace helimin;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

/// Configuration problems detected by the tool itself (not by the library).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string field;
    std::string family;
    double pitch = 0.3;
    double length = 1.0;
    std::string domain;
    int grid = 0; // 0 picks the per-command default
    int layers = 1;
    bool clip = false;
    double tol = 0.0; // 0 picks the per-analysis default
    std::string out;
    std::string format = "both";
    unsigned threads = 1;
    std::uint64_t seed = 1;
    int kmax = 0;
    double radius = 0.0;
    int periods = 2;
    double level = 1.0;
    std::string sweep;
    int samples = 100;
    bool omega_n = false;
    bool exact = false;
    std::size_t cells = 20000;
};

std::string g17(double v) { return detail::format_g17(v); }

bool looks_inline(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    return first != std::string::npos && s[first] == '{';
}

std::string read_text(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read field spec '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string field_text(const RunConfig& c) { return looks_inline(c.field) ? c.field : read_text(c.field); }

PairFamily parse_family(const std::string& s)
{
    if (s == "same-handed" || s == "pair") return PairFamily::SameHanded;
    if (s == "dipole") return PairFamily::Dipole;
    if (s == "tgb") return PairFamily::Tgb;
    if (s == "utgb") return PairFamily::Utgb;
    throw ConfigError("unknown family '" + s + "' (same-handed, dipole, tgb, utgb)");
}

/// --field wins over --family; exactly one must be present.
MotifField resolve_field(const RunConfig& c)
{
    if (!c.field.empty() && !c.family.empty()) throw ConfigError("give either --field or --family, not both");
    if (!c.field.empty()) return field_from_json(field_text(c));
    if (!c.family.empty()) return family_field(parse_family(c.family), c.pitch, c.length);
    throw ConfigError("a field is required (--field or --family)");
}

std::string field_stem(const RunConfig& c)
{
    if (!c.field.empty() && !looks_inline(c.field)) return fs::path(c.field).stem().string();
    if (!c.family.empty()) return c.family;
    return "mesh";
}

/// Same geometry with every pitch magnitude replaced by p (signs kept).
MotifField with_pitch(const MotifField& f, double p)
{
    if (f.kind() == FieldKind::Tgb) return MotifField::tgb(p, f.spacing());
    if (f.kind() == FieldKind::Utgb) return MotifField::utgb(p, f.spacing());
    std::vector<HelicalMotif> m(f.motifs().begin(), f.motifs().end());
    for (auto& q : m) q.pitch = q.pitch < 0 ? -p : p;
    return MotifField::finite(std::move(m));
}

std::vector<double> parse_list(const std::string& s, std::size_t count, const std::string& what)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' in " + what);
        }
    }
    if (v.size() != count) throw ConfigError(what + " needs " + std::to_string(count) + " numbers");
    return v;
}

Region parse_domain(const std::string& s)
{
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("domain must look like rect:x0,x1,y0,y1");
    const auto kind = s.substr(0, colon), rest = s.substr(colon + 1);
    Region r;
    if (kind == "rect") {
        const auto v = parse_list(rest, 4, "rect domain");
        r = Rectangle{v[0], v[1], v[2], v[3]};
    } else if (kind == "annulus") {
        const auto v = parse_list(rest, 4, "annulus domain");
        r = Annulus{Complex(v[0], v[1]), v[2], v[3]};
    } else if (kind == "disc") {
        const auto v = parse_list(rest, 3, "disc domain");
        r = Disc{Complex(v[0], v[1]), v[2]};
    } else {
        throw ConfigError("unknown domain kind '" + kind + "' (rect, annulus, disc)");
    }
    validate(r);
    return r;
}

/// Square around the sites with room for the cores, or two chain periods.
Rectangle default_box(const MotifField& f)
{
    if (f.is_chain()) {
        const double l = f.spacing();
        return {0.0, 2.0 * l, -l, l};
    }
    Complex c = 0.0;
    for (const auto& q : f.motifs()) c += q.center;
    c /= static_cast<double>(f.motifs().size());
    double spread = 0.0, sep = 0.0;
    for (const auto& a : f.motifs()) {
        spread = std::max(spread, std::abs(a.center - c));
        for (const auto& b : f.motifs()) sep = std::max(sep, std::abs(a.center - b.center));
    }
    const double half = spread + std::max(sep, 2.0 * f.max_abs_pitch());
    return {c.real() - half, c.real() + half, c.imag() - half, c.imag() + half};
}

Region domain_of(const RunConfig& c, const MotifField& f)
{
    return c.domain.empty() ? Region(default_box(f)) : parse_domain(c.domain);
}

struct Sweep {
    std::string name;
    std::vector<double> values;
};

Sweep parse_sweep(const std::string& s)
{
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("sweep must look like p=start:stop:step");
    Sweep out;
    out.name = s.substr(0, eq);
    std::string rest = s.substr(eq + 1);
    std::replace(rest.begin(), rest.end(), ':', ',');
    const auto v = parse_list(rest, 3, "sweep");
    if (!(v[2] > 0.0) || v[1] < v[0]) throw ConfigError("sweep needs start <= stop and a positive step");
    for (long i = 0;; ++i) {
        const double x = v[0] + static_cast<double>(i) * v[2];
        if (x > v[1] + 1e-9 * v[2]) break;
        out.values.push_back(x);
    }
    return out;
}

/// Writes to <out>/<name> atomically, or to stdout when no directory is set.
void emit(const RunConfig& c, const std::string& name, const std::string& text)
{
    if (c.out.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::error_code ec;
    fs::create_directories(c.out, ec);
    if (ec) fail(ErrorCode::Io, "cannot create output directory '" + c.out + "'");
    detail::write_atomically(fs::path(c.out) / name, text);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

MeshParams mesh_params(const RunConfig& c, const MotifField& f, int default_grid)
{
    MeshParams p;
    p.domain = domain_of(c, f);
    p.grid = c.grid > 0 ? c.grid : default_grid;
    p.layers = c.layers;
    p.clip = c.clip;
    p.threads = c.threads;
    return p;
}

double max_abs_H(const SurfaceMesh& m)
{
    double mx = 0.0;
    for (double h : discrete_mean_curvature(m))
        if (!std::isnan(h)) mx = std::max(mx, std::abs(h));
    return mx;
}

// ---- mesh ----------------------------------------------------------------------------

int cmd_mesh(const RunConfig& c)
{
    if (c.format != "obj" && c.format != "ply" && c.format != "both")
        throw ConfigError("format must be obj, ply or both");
    const auto f = resolve_field(c);
    const auto mesh = build_mesh(f, mesh_params(c, f, 256));
    const fs::path dir = c.out.empty() ? fs::path(".") : fs::path(c.out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) fail(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");
    const auto stem = field_stem(c);
    if (c.format != "ply") write_obj(mesh, dir / (stem + ".obj"));
    if (c.format != "obj") write_ply(mesh, dir / (stem + ".ply"));
    return 0;
}

// ---- report ----------------------------------------------------------------------------

int report_curvature(const RunConfig& c)
{
    const auto f = resolve_field(c);
    if (!c.sweep.empty()) {
        const auto sw = parse_sweep(c.sweep);
        if (sw.name != "p") throw ConfigError("curvature sweeps run over p");
        std::string csv = "p,max_abs_H\n";
        for (double p : sw.values) {
            const auto g = with_pitch(f, p);
            csv += g17(p) + ',' + g17(max_abs_H(build_mesh(g, mesh_params(c, g, 256)))) + '\n';
        }
        emit(c, "curvature.csv", csv);
        return 0;
    }
    const auto params = mesh_params(c, f, 256);
    const auto mesh = build_mesh(f, params);
    const double h = max_abs_H(mesh);
    nlohmann::json j;
    j["field"] = to_json(f);
    j["grid"] = params.grid;
    j["clip"] = params.clip;
    j["vertices"] = mesh.vertices.size();
    j["max_abs_H"] = h;
    j["max_abs_H_scaled"] = h * f.length_scale();
    emit(c, "curvature.json", dump(j));
    return 0;
}

nlohmann::json quadrature_json(const QuadratureResult& r)
{
    return {{"value", r.value}, {"tail_estimate", r.tail_estimate}, {"error_estimate", r.error_estimate}};
}

int report_area(const RunConfig& c)
{
    const auto f = resolve_field(c);
    if (c.domain.empty()) throw ConfigError("area needs --domain");
    const auto r = integrate_area(f, parse_domain(c.domain), c.tol > 0 ? c.tol : 1e-10, c.omega_n);
    auto j = quadrature_json(r);
    j["field"] = to_json(f);
    j["omega_N_only"] = c.omega_n;
    emit(c, "area.json", dump(j));
    return 0;
}

int report_total_curvature(const RunConfig& c)
{
    const auto f = resolve_field(c);
    const auto r = c.domain.empty() ? total_curvature_unbounded(f, c.tol > 0 ? c.tol : 1e-6)
                                    : total_curvature(f, parse_domain(c.domain), c.tol > 0 ? c.tol : 1e-8);
    auto j = quadrature_json(r);
    j["field"] = to_json(f);
    j["over_4pi"] = r.value / (4.0 * pi);
    emit(c, "total-curvature.json", dump(j));
    return 0;
}

int report_multipole(const RunConfig& c)
{
    const auto f = resolve_field(c);
    const int kmax = c.kmax > 0 ? c.kmax : 8;
    const auto m = multipole(f, kmax);
    // b_k = sum_j p_j z_j^k, and c_k = -b_k / k for k >= 1
    std::vector<Complex> b(static_cast<std::size_t>(kmax) + 1, 0.0);
    for (const auto& q : f.motifs()) {
        Complex power = 1.0;
        for (int k = 0; k <= kmax; ++k, power *= q.center) b[k] += q.pitch * power;
    }
    auto num = [](double v) { return g17(v == 0.0 ? 0.0 : v); };
    std::string csv = "k,b_re,b_im,c_re,c_im\n";
    for (int k = 0; k <= kmax; ++k) {
        const Complex ck = k == 0 ? Complex(0.0) : m.coefficients[k - 1];
        csv += std::to_string(k) + ',' + num(b[k].real()) + ',' + num(b[k].imag()) + ',' + num(ck.real()) + ','
            + num(ck.imag()) + '\n';
    }
    emit(c, "multipole.csv", csv);
    return 0;
}

int report_far_field(const RunConfig& c)
{
    const auto f = resolve_field(c);
    const int kmax = c.kmax > 0 ? c.kmax : 12;
    const auto m = multipole(f, 1);
    const double radius = c.radius > 0 ? c.radius : 10.0 * std::max(m.convergence_radius, f.max_abs_pitch());
    const auto r = far_field_check(f, radius, kmax);
    nlohmann::json j;
    j["field"] = to_json(f);
    j["radius"] = r.radius;
    j["kmax"] = r.kmax;
    j["max_abs_error"] = r.max_abs_error;
    j["max_rel_error"] = r.max_rel_error;
    j["fitted_pitch"] = r.fitted_pitch;
    j["total_pitch"] = r.total_pitch;
    emit(c, "far-field.json", dump(j));
    return 0;
}

int report_transition(const RunConfig& c)
{
    if (c.family.empty()) throw ConfigError("transition needs --family");
    const auto fam = parse_family(c.family);
    TransitionOptions opt;
    if (c.grid > 0) opt.grid = c.grid;
    if (c.tol > 0) opt.tolerance = c.tol;
    const auto r = detect_transition(fam, c.length, opt);
    nlohmann::json j;
    j["family"] = to_string(r.family);
    j["length"] = r.length;
    j["grid"] = opt.grid;
    j["critical_estimate"] = r.critical_estimate;
    j["ratio"] = r.ratio;
    j["count_below"] = r.count_below;
    j["count_above"] = r.count_above;
    j["bracket_width"] = r.bracket_width;
    emit(c, "transition.json", dump(j));
    return 0;
}

GridSpec axis_grid(const RunConfig& c, const MotifField& f, const Rectangle& box)
{
    const double width = std::max(box.x1 - box.x0, box.y1 - box.y0);
    double pmin = f.max_abs_pitch();
    for (const auto& q : f.motifs()) pmin = std::min(pmin, std::abs(q.pitch));
    const double step = std::min(width / ((c.grid > 0 ? c.grid : 400) - 1), pmin / 25.0);
    return {box, step};
}

nlohmann::json axes_json(const std::vector<AxisCurve>& axes, double length)
{
    const auto m = axis_metrics(axes);
    nlohmann::json j;
    j["component_count"] = axes.size();
    j["separation"] = std::isfinite(m.separation) ? nlohmann::json(m.separation) : nlohmann::json(nullptr);
    j["S"] = std::isfinite(m.separation) ? nlohmann::json(m.separation / length) : nlohmann::json(nullptr);
    auto list = nlohmann::json::array();
    for (std::size_t i = 0; i < axes.size(); ++i)
        list.push_back({{"label", axes[i].label}, {"enclosed_sites", axes[i].enclosed_sites},
            {"inclination", m.inclination[i]}, {"points", axes[i].planar_points.size()},
            {"period_offset", {axes[i].period_offset.x, axes[i].period_offset.y, axes[i].period_offset.z}}});
    j["axes"] = std::move(list);
    return j;
}

int report_axes(const RunConfig& c)
{
    if (!c.sweep.empty()) {
        if (c.family.empty()) throw ConfigError("axis sweeps need --family");
        const auto fam = parse_family(c.family);
        const auto sw = parse_sweep(c.sweep);
        if (sw.name != "p") throw ConfigError("axis sweeps run over p");
        std::string csv = "p,S,inclination,component_count\n";
        for (double p : sw.values) {
            const auto f = family_field(fam, p, c.length);
            const auto axes = extract_axes(f, c.periods, axis_grid(c, f, family_box(fam, c.length)));
            const auto m = axis_metrics(axes);
            double incl = 0.0;
            for (double a : m.inclination) incl = std::max(incl, a);
            const std::string S = std::isfinite(m.separation) ? g17(m.separation / c.length) : std::string("nan");
            csv += g17(p) + ',' + S + ',' + g17(incl) + ',' + std::to_string(axes.size()) + '\n';
        }
        emit(c, "axes.csv", csv);
        return 0;
    }
    const auto f = resolve_field(c);
    const Rectangle box = c.domain.empty()
        ? (c.family.empty() ? default_box(f) : family_box(parse_family(c.family), c.length))
        : bounding_box(parse_domain(c.domain));
    const auto axes = extract_axes(f, c.periods, axis_grid(c, f, box));
    auto j = axes_json(axes, f.is_chain() ? f.spacing() : f.length_scale());
    j["field"] = to_json(f);
    emit(c, "axes.json", dump(j));
    return 0;
}

int report_levelset(const RunConfig& c)
{
    const auto f = resolve_field(c);
    const Rectangle box = c.domain.empty() ? default_box(f) : bounding_box(parse_domain(c.domain));
    const int n = c.grid > 0 ? c.grid : 512;
    const GridSpec grid{box, std::max(box.x1 - box.x0, box.y1 - box.y0) / (n - 1)};
    std::ostringstream os;
    write_polylines_csv(os, trace_level_set(f, c.level, grid));
    emit(c, "levelset.csv", os.str());
    return 0;
}

/// Uniform points in the domain's box, kept inside the domain and away from the sites.
std::vector<Complex> random_points(const RunConfig& c, const MotifField& f, const Region& d, int count)
{
    const Rectangle box = bounding_box(d);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> ux(box.x0, box.x1), uy(box.y0, box.y1);
    const double keep = 0.05 * f.max_abs_pitch();
    std::vector<Complex> pts;
    for (int tries = 0; static_cast<int>(pts.size()) < count && tries < 1000 * count; ++tries) {
        const Complex z(ux(rng), uy(rng));
        if (contains(d, z) && f.distance_to_sites(z) > keep) pts.push_back(z);
    }
    if (static_cast<int>(pts.size()) < count) throw ConfigError("domain leaves no room away from the motif sites");
    return pts;
}

int report_enneper(const RunConfig& c)
{
    const auto f = resolve_field(c);
    const auto pts = random_points(c, f, domain_of(c, f), c.samples);
    const auto r = check_enneper_conditions(f, pts);
    nlohmann::json j;
    j["field"] = to_json(f);
    j["seed"] = c.seed;
    j["samples"] = r.samples;
    j["max_residual"] = r.max_residual;
    j["max_relative_residual"] = r.max_relative_residual;
    j["min_regularity"] = r.min_regularity;
    emit(c, "enneper.json", dump(j));
    return 0;
}

int report_graph(const RunConfig& c)
{
    const auto f = resolve_field(c);
    const auto gf = harmonic_graph(f);
    const Rectangle box = c.domain.empty() ? default_box(f) : bounding_box(parse_domain(c.domain));
    const int n = c.grid > 0 ? c.grid : 64;
    const double keep = 0.05 * f.max_abs_pitch();
    std::string csv = "x,y,h,H,deviation\n";
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const Complex z(box.x0 + (box.x1 - box.x0) * (i + 0.5) / n, box.y0 + (box.y1 - box.y0) * (j + 0.5) / n);
            if (f.distance_to_sites(z) <= keep) continue;
            const auto d = graph_derivatives(gf, z);
            csv += g17(z.real()) + ',' + g17(z.imag()) + ',' + g17(gf.height(z)) + ',' + g17(mean_curvature(d)) + ','
                + g17(dimensionless_deviation(gf, z)) + '\n';
        }
    emit(c, "graph.csv", csv);
    return 0;
}

int cmd_report(const std::string& analysis, const RunConfig& c)
{
    if (analysis == "curvature") return report_curvature(c);
    if (analysis == "area") return report_area(c);
    if (analysis == "total-curvature") return report_total_curvature(c);
    if (analysis == "multipole") return report_multipole(c);
    if (analysis == "far-field") return report_far_field(c);
    if (analysis == "transition") return report_transition(c);
    if (analysis == "axes") return report_axes(c);
    if (analysis == "levelset") return report_levelset(c);
    if (analysis == "enneper") return report_enneper(c);
    if (analysis == "graph") return report_graph(c);
    throw ConfigError("unknown analysis '" + analysis + "'");
}

// ---- stability ---------------------------------------------------------------------------

/// Exact rational from a JSON number, via its shortest round-trip text.
Rational exact_number(const nlohmann::json& v)
{
    if (!v.is_number()) throw ConfigError("field spec: expected a number");
    std::string text = v.dump();
    const auto e = text.find_first_of("eE");
    if (e == std::string::npos) return parse_rational(text);
    const Rational mantissa = parse_rational(text.substr(0, e));
    const int exponent = std::stoi(text.substr(e + 1));
    Rational scale = 1;
    for (int k = 0; k < std::abs(exponent); ++k) scale *= 10;
    return exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa / scale);
}

int cmd_stability(const RunConfig& c)
{
    StabilityReport r;
    MotifField f = resolve_field(c);
    if (f.is_chain()) fail(ErrorCode::WrongFamily, "stability criteria apply to finite motif sets");
    if (c.exact) {
        std::vector<ExactMotif> motifs;
        if (!c.field.empty()) {
            const auto j = nlohmann::json::parse(field_text(c));
            for (const auto& m : j.at("motifs")) {
                const Rational y = m.contains("y") ? exact_number(m.at("y")) : Rational(0);
                motifs.push_back({GaussianRational(exact_number(m.at("x")), y), exact_number(m.at("pitch"))});
            }
        } else {
            for (const auto& q : f.motifs())
                motifs.push_back({GaussianRational(Rational(q.center.real()), Rational(q.center.imag())),
                    Rational(q.pitch)});
        }
        r = decide_stability_exact(motifs);
    } else {
        StabilityTolerance tol;
        if (c.tol > 0) tol.zero = c.tol;
        r = decide_stability(f, tol);
    }
    if (!c.domain.empty()) {
        SphericalAreaOptions opt;
        opt.cells = c.cells;
        opt.threads = c.threads;
        r.spherical_area = spherical_image_area(f, parse_domain(c.domain), opt);
    }
    auto j = to_json(r);
    j["field"] = to_json(f);
    j["exact"] = c.exact;
    emit(c, "stability.json", dump(j));
    switch (r.verdict) {
    case Verdict::Stable: return 0;
    case Verdict::Unstable: return 4;
    case Verdict::Indeterminate: return 5;
    }
    return 5;
}

bool config_error(ErrorCode code)
{
    return code == ErrorCode::InvalidArgument || code == ErrorCode::Io || code == ErrorCode::WrongFamily;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Minimal surfaces with helical motifs: meshes, reports and stability"};
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "TOML/INI file; flags override it, it overrides defaults");
    app.require_subcommand(1);

    RunConfig c;
    std::string analysis;

    auto common = [&](CLI::App* s) {
        s->add_option("--field", c.field, "field spec: JSON file path or inline JSON object");
        s->add_option("--family", c.family, "built-in pair family: same-handed, dipole, tgb, utgb");
        s->add_option("--pitch", c.pitch, "pitch magnitude for --family")->check(CLI::PositiveNumber);
        s->add_option("--R,--length", c.length, "separation R or chain spacing for --family")->check(CLI::PositiveNumber);
        s->add_option("--domain", c.domain, "rect:x0,x1,y0,y1 | annulus:cx,cy,r0,r1 | disc:cx,cy,r (default: around the sites)");
        s->add_option("--tol", c.tol, "tolerance (0 = analysis default)")->check(CLI::NonNegativeNumber);
        s->add_option("--out", c.out, "output directory (default: stdout for reports, . for meshes)");
        s->add_option("--threads", c.threads, "worker cap")->check(CLI::Range(1u, 256u));
        s->add_option("--seed", c.seed, "random seed");
    };

    auto* mesh = app.add_subcommand("mesh", "build a mesh and write OBJ/PLY");
    common(mesh);
    mesh->add_option("--grid", c.grid, "cells per side (0 = 256)")->check(CLI::NonNegativeNumber);
    mesh->add_option("--layers", c.layers, "stacked layers")->check(CLI::PositiveNumber);
    mesh->add_flag("--clip", c.clip, "keep only triangles inside Omega_N");
    mesh->add_option("--format", c.format, "obj, ply or both");

    auto* report = app.add_subcommand("report", "run an analysis and print JSON or CSV");
    common(report);
    report->add_option("analysis", analysis,
              "curvature | area | total-curvature | multipole | far-field | transition | axes | levelset | enneper | graph")
        ->required();
    report->add_option("--grid", c.grid, "grid size (0 = analysis default)")->check(CLI::NonNegativeNumber);
    report->add_flag("--clip", c.clip, "clip meshes to Omega_N (curvature)");
    report->add_option("--sweep", c.sweep, "parameter sweep p=start:stop:step (curvature, axes)");
    report->add_option("--kmax", c.kmax, "multipole order (0 = 8 for multipole, 12 for far-field)");
    report->add_option("--radius", c.radius, "far-field circle radius (0 = 10 max(|z_j|, |p|))");
    report->add_option("--periods", c.periods, "turns lifted per axis")->check(CLI::PositiveNumber);
    report->add_option("--level", c.level, "level |g| = c for levelset")->check(CLI::PositiveNumber);
    report->add_option("--samples", c.samples, "random points for enneper")->check(CLI::PositiveNumber);
    report->add_flag("--omega-n", c.omega_n, "restrict the area to Omega_N");

    auto* stab = app.add_subcommand("stability", "decide stability; exit 0 stable, 4 unstable, 5 indeterminate");
    common(stab);
    stab->add_flag("--exact", c.exact, "exact rational arithmetic on the JSON numbers");
    stab->add_option("--cells", c.cells, "sphere partition size for the spherical image area")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try {
        if (mesh->parsed()) return cmd_mesh(c);
        if (report->parsed()) return cmd_report(analysis, c);
        if (stab->parsed()) return cmd_stability(c);
    } catch (const ConfigError& e) {
        std::cerr << "helimin: " << e.what() << '\n';
        return exit_config;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "helimin: field spec: " << e.what() << '\n';
        return exit_config;
    } catch (const Error& e) {
        std::cerr << "helimin: " << e.what() << '\n';
        return config_error(e.code()) ? exit_config : exit_numeric;
    } catch (const std::exception& e) {
        std::cerr << "helimin: " << e.what() << '\n';
        return exit_numeric;
    }
    return exit_config;
}
