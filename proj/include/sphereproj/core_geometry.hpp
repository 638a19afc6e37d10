#pragma once

#include "sphereproj/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace sphereproj {

inline constexpr double kUnitNormTolerance = 1e-12;

/// Unit vector in R^(q+1). Construction enforces |x| = 1 within 1e-12.
class SpherePoint {
public:
    SpherePoint() = default;

    explicit SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {
        if (coords_.size() < 2)
            throw DomainError("SpherePoint needs at least 2 coordinates (q >= 1)");
        double s = 0.0;
        for (double c : coords_) s += c * c;
        if (!(std::abs(std::sqrt(s) - 1.0) <= kUnitNormTolerance))
            throw InvariantViolation("SpherePoint coordinates are not of unit norm");
    }

    SpherePoint(std::initializer_list<double> coords)
        : SpherePoint(std::vector<double>(coords)) {}

    /// Ambient dimension q+1.
    std::size_t dim() const noexcept { return coords_.size(); }
    /// Sphere dimension q.
    int q() const noexcept { return static_cast<int>(coords_.size()) - 1; }

    double operator[](std::size_t i) const noexcept { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }

    SpherePoint operator-() const {
        SpherePoint p = *this;
        for (double& c : p.coords_) c = -c;
        return p;
    }

    friend bool operator==(const SpherePoint&, const SpherePoint&) = default;

private:
    std::vector<double> coords_;
};

inline double dot(const SpherePoint& a, const SpherePoint& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("points live on spheres of different dimension");
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

/// Dot product clamped into [-1, 1].
inline double clamped_dot(const SpherePoint& a, const SpherePoint& b) {
    return std::clamp(dot(a, b), -1.0, 1.0);
}

inline double geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
    return std::acos(clamped_dot(a, b));
}

/// Surface measure of S^d, 2 pi^((d+1)/2) / Gamma((d+1)/2).
inline double surface_area(int d) {
    if (d < 1) throw DomainError("surface_area: sphere dimension must be >= 1");
    const double h = 0.5 * (d + 1);
    return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

inline SpherePoint normalize(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    const double norm = std::sqrt(s);
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw DomainError("normalize: vector has zero or non-finite norm");
    std::vector<double> out(v.begin(), v.end());
    for (double& c : out) c /= norm;
    return SpherePoint(std::move(out));
}

inline SpherePoint normalize(std::initializer_list<double> v) {
    return normalize(std::span<const double>(v.begin(), v.size()));
}

/// (sin t cos p, sin t sin p, cos t) on S^2.
inline SpherePoint from_polar(double theta, double phi) {
    const double s = std::sin(theta);
    return SpherePoint({s * std::cos(phi), s * std::sin(phi), std::cos(theta)});
}

/// Finite proxy for the sphere used when taking a sup.
struct EvaluationSet {
    std::vector<SpherePoint> points;
    std::string label;

    EvaluationSet() = default;
    EvaluationSet(std::vector<SpherePoint> pts, std::string tag)
        : points(std::move(pts)), label(std::move(tag)) {
        if (points.empty()) throw DomainError("EvaluationSet must be non-empty");
        const std::size_t d = points.front().dim();
        for (const auto& p : points)
            if (p.dim() != d) throw DimensionMismatch("EvaluationSet mixes dimensions");
    }

    std::size_t size() const noexcept { return points.size(); }
    int q() const noexcept { return points.front().q(); }
};

/// Row-major copy of a point list, stride = ambient dimension.
inline std::vector<double> flatten(std::span<const SpherePoint> pts) {
    std::vector<double> out;
    if (pts.empty()) return out;
    out.reserve(pts.size() * pts.front().dim());
    for (const auto& p : pts) {
        if (p.dim() != pts.front().dim()) throw DimensionMismatch("mixed point dimensions");
        out.insert(out.end(), p.coords().begin(), p.coords().end());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Seeded randomness for tests and experiments.

using Rng = std::mt19937_64;

inline SpherePoint random_sphere_point(Rng& rng, int q = 2) {
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> v(static_cast<std::size_t>(q) + 1);
    for (;;) {
        double s = 0.0;
        for (double& c : v) {
            c = g(rng);
            s += c * c;
        }
        if (s > 1e-20) return normalize(v);
    }
}

/// Random 3x3 rotation (row-major) from a random unit quaternion.
inline std::array<double, 9> random_rotation3(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    double w = g(rng), x = g(rng), y = g(rng), z = g(rng);
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n, x /= n, y /= n, z /= n;
    return {1 - 2 * (y * y + z * z), 2 * (x * y - z * w),     2 * (x * z + y * w),
            2 * (x * y + z * w),     1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
            2 * (x * z - y * w),     2 * (y * z + x * w),     1 - 2 * (x * x + y * y)};
}

inline SpherePoint rotate(const std::array<double, 9>& r, const SpherePoint& p) {
    if (p.dim() != 3) throw DimensionMismatch("rotate: expects a point on S^2");
    std::vector<double> v(3);
    for (int i = 0; i < 3; ++i) v[i] = r[3 * i] * p[0] + r[3 * i + 1] * p[1] + r[3 * i + 2] * p[2];
    return normalize(v);
}

// ---------------------------------------------------------------------------
// Text I/O helpers shared by the point-set and rule file formats.

namespace io {

/// Shortest-round-trip is not enough for the file formats; always 17 digits.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

/// Parses "key=value" integer tokens from a "# k1=v1 k2=v2" header line.
inline bool header_field(std::string_view header, std::string_view key, long long& out) {
    for (auto tok : split_ws(header)) {
        if (tok.size() > key.size() + 1 && tok.substr(0, key.size()) == key &&
            tok[key.size()] == '=') {
            auto v = tok.substr(key.size() + 1);
            auto res = std::from_chars(v.data(), v.data() + v.size(), out);
            return res.ec == std::errc{} && res.ptr == v.data() + v.size();
        }
    }
    return false;
}

} // namespace io

/// Writes "# q=<d> N=<count>" followed by one point per line.
inline void save_points(std::span<const SpherePoint> pts, const std::string& path) {
    if (pts.empty()) throw DomainError("save_points: empty point set");
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "# q=" << pts.front().q() << " N=" << pts.size() << '\n';
    for (const auto& p : pts) {
        for (std::size_t i = 0; i < p.dim(); ++i)
            out << (i ? " " : "") << io::format_double(p[i]);
        out << '\n';
    }
    if (!out.flush()) throw Error("write failed: " + path);
}

inline std::vector<SpherePoint> load_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path, 0);
    std::string line;
    if (!std::getline(in, line) || line.rfind('#', 0) != 0)
        throw LoadError("missing '# q=<d> N=<count>' header", 1);
    long long q = 0, count = 0;
    if (!io::header_field(line, "q", q) || !io::header_field(line, "N", count) || q < 1 ||
        count < 0)
        throw LoadError("malformed header: " + line, 1);

    std::vector<SpherePoint> pts;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = io::split_ws(line);
        if (toks.empty()) continue;
        if (toks.size() != static_cast<std::size_t>(q) + 1)
            throw LoadError("line " + std::to_string(lineno) + ": expected " +
                                std::to_string(q + 1) + " coordinates",
                            lineno);
        std::vector<double> c(toks.size());
        for (std::size_t i = 0; i < toks.size(); ++i)
            if (!io::parse_double(toks[i], c[i]))
                throw LoadError("line " + std::to_string(lineno) + ": bad number", lineno);
        try {
            pts.emplace_back(std::move(c));
        } catch (const Error& e) {
            throw LoadError("line " + std::to_string(lineno) + ": " + e.what(), lineno);
        }
    }
    if (pts.size() != static_cast<std::size_t>(count))
        throw LoadError("header declares N=" + std::to_string(count) + " but file has " +
                            std::to_string(pts.size()) + " points",
                        1);
    return pts;
}

} // namespace sphereproj
