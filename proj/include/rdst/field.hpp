#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rdst/errors.hpp"

namespace rdst {

enum class Provenance { operational, short_time, series, fd, oracle, other };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::operational: return "operational";
        case Provenance::short_time: return "short-time";
        case Provenance::series: return "series";
        case Provenance::fd: return "fd";
        case Provenance::oracle: return "oracle";
        case Provenance::other: return "other";
    }
    return "?";
}

/// Solution samples u (and optionally u_x) on the tensor grid xs x ts.
class SolutionField {
public:
    SolutionField() = default;
    SolutionField(std::vector<double> xs, std::vector<double> ts, Provenance prov,
                  bool with_flux = false)
        : xs_(std::move(xs)),
          ts_(std::move(ts)),
          prov_(prov),
          u_(xs_.size() * ts_.size(), 0.0) {
        if (with_flux) ux_.assign(xs_.size() * ts_.size(), 0.0);
    }

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ts() const { return ts_; }
    Provenance provenance() const { return prov_; }
    bool has_flux() const { return !ux_.empty(); }

    double& u(std::size_t ix, std::size_t it) { return u_[index(ix, it)]; }
    double u(std::size_t ix, std::size_t it) const { return u_[index(ix, it)]; }
    double& ux(std::size_t ix, std::size_t it) { return ux_[index(ix, it)]; }
    double ux(std::size_t ix, std::size_t it) const { return ux_[index(ix, it)]; }

    void add_note(std::string note) { notes_.push_back(std::move(note)); }
    const std::vector<std::string>& notes() const { return notes_; }

    /// CSV with header `x,t,u[,ux]`, 17 significant digits, row-major in t
    /// then x. Deterministic given the field contents.
    std::string to_csv() const {
        std::string out = has_flux() ? "x,t,u,ux\n" : "x,t,u\n";
        char buf[128];
        for (std::size_t it = 0; it < ts_.size(); ++it) {
            for (std::size_t ix = 0; ix < xs_.size(); ++ix) {
                if (has_flux())
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", xs_[ix], ts_[it],
                                  u(ix, it), ux(ix, it));
                else
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", xs_[ix], ts_[it],
                                  u(ix, it));
                out += buf;
            }
        }
        return out;
    }

    void write_csv(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open for writing: " + path);
        f << to_csv();
    }

    static SolutionField from_csv(std::istream& in, Provenance prov = Provenance::other) {
        std::string line;
        if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
        const bool with_flux = line.find(",ux") != std::string::npos;
        std::vector<double> xs, ts;
        std::vector<std::array<double, 4>> rows;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::array<double, 4> row{0, 0, 0, 0};
            std::istringstream ss(line);
            std::string cell;
            for (int c = 0; c < (with_flux ? 4 : 3) && std::getline(ss, cell, ','); ++c)
                row[static_cast<std::size_t>(c)] = std::stod(cell);
            rows.push_back(row);
        }
        // reconstruct the tensor grid: unique xs within the first t-block
        for (const auto& r : rows) {
            if (ts.empty() || r[1] != ts.back()) ts.push_back(r[1]);
        }
        std::vector<double> uniq_t;
        for (double t : ts)
            if (uniq_t.empty() || t != uniq_t.back()) uniq_t.push_back(t);
        ts = uniq_t;
        const std::size_t nx = ts.empty() ? rows.size() : rows.size() / ts.size();
        for (std::size_t i = 0; i < nx; ++i) xs.push_back(rows[i][0]);
        SolutionField f(xs, ts, prov, with_flux);
        for (std::size_t it = 0; it < ts.size(); ++it)
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const auto& r = rows[it * nx + ix];
                f.u(ix, it) = r[2];
                if (with_flux) f.ux(ix, it) = r[3];
            }
        return f;
    }

private:
    std::size_t index(std::size_t ix, std::size_t it) const { return it * xs_.size() + ix; }

    std::vector<double> xs_, ts_;
    Provenance prov_ = Provenance::other;
    std::vector<double> u_, ux_;
    std::vector<std::string> notes_;
};

struct FieldErrorMetrics {
    double max_abs = 0.0;
    double l2 = 0.0;
    double x_at_max = std::numeric_limits<double>::quiet_NaN();
    double t_at_max = std::numeric_limits<double>::quiet_NaN();
    std::size_t count = 0;
};

/// Pointwise error metrics between two fields on a common grid, restricted to
/// an x-interval. Grids must match exactly (no interpolation rule here).
inline FieldErrorMetrics compare_fields(const SolutionField& fa, const SolutionField& fb,
                                        double x_lo = -std::numeric_limits<double>::infinity(),
                                        double x_hi = std::numeric_limits<double>::infinity(),
                                        bool flux = false) {
    if (fa.xs() != fb.xs() || fa.ts() != fb.ts())
        throw std::invalid_argument("compare_fields: grids differ and no interpolation rule is declared");
    if (flux && (!fa.has_flux() || !fb.has_flux()))
        throw std::invalid_argument("compare_fields: flux comparison requested but a field has no flux");
    FieldErrorMetrics m;
    double sq = 0.0;
    for (std::size_t it = 0; it < fa.ts().size(); ++it) {
        for (std::size_t ix = 0; ix < fa.xs().size(); ++ix) {
            const double x = fa.xs()[ix];
            if (x < x_lo || x > x_hi) continue;
            const double d = flux ? fa.ux(ix, it) - fb.ux(ix, it) : fa.u(ix, it) - fb.u(ix, it);
            const double ad = std::abs(d);
            sq += d * d;
            ++m.count;
            if (ad > m.max_abs) {
                m.max_abs = ad;
                m.x_at_max = x;
                m.t_at_max = fa.ts()[it];
            }
        }
    }
    m.l2 = m.count ? std::sqrt(sq / static_cast<double>(m.count)) : 0.0;
    return m;
}

} // namespace rdst
