#include "mgems/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mgems/errors.hpp"
#include "mgems/rng.hpp"

namespace mgems::metrics {

namespace {

bool dominates_or_equal(const Point& a, const Point& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
    }
    return true;
}

bool strictly_dominates(const Point& a, const Point& b) {
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strict = true;
    }
    return strict;
}

// Keep one copy of each non-dominated point.
std::vector<Point> nondominated_unique(const std::vector<Point>& pts) {
    std::vector<Point> out;
    for (const auto& p : pts) {
        bool keep = true;
        for (const auto& q : pts) {
            if (&p != &q && strictly_dominates(q, p)) {
                keep = false;
                break;
            }
        }
        if (keep && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
}

double box_volume(const Point& p, const Point& ref) {
    double v = 1.0;
    for (std::size_t k = 0; k < p.size(); ++k) v *= ref[k] - p[k];
    return v;
}

double hv_exact(std::vector<Point> pts, const Point& ref);

// Exclusive contribution of p against the points that follow it.
double hv_exclusive(const Point& p, const std::vector<Point>& rest, const Point& ref) {
    std::vector<Point> limited;
    limited.reserve(rest.size());
    for (const auto& q : rest) {
        Point l(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) l[k] = std::max(p[k], q[k]);
        limited.push_back(std::move(l));
    }
    return box_volume(p, ref) - hv_exact(nondominated_unique(limited), ref);
}

// WFG-style recursion; exact for any m but exponential, so reserved for the
// low-dimension path.
double hv_exact(std::vector<Point> pts, const Point& ref) {
    if (pts.empty()) return 0.0;
    const std::size_t m = ref.size();
    if (m == 1) {
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& p : pts) lo = std::min(lo, p[0]);
        return ref[0] - lo;
    }
    if (m == 2) {
        std::sort(pts.begin(), pts.end());
        double area = 0.0;
        double prev_y = ref[1];
        for (const auto& p : pts) {
            if (p[1] < prev_y) {
                area += (ref[0] - p[0]) * (prev_y - p[1]);
                prev_y = p[1];
            }
        }
        return area;
    }
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<Point> rest(pts.begin() + static_cast<std::ptrdiff_t>(i) + 1, pts.end());
        total += hv_exclusive(pts[i], rest, ref);
    }
    return total;
}

} // namespace

HypervolumeResult hypervolume(const std::vector<Point>& front, const Point& ref,
                              std::size_t mc_samples, std::uint64_t mc_seed) {
    if (front.empty()) return {0.0, std::nullopt};
    const std::size_t m = ref.size();
    for (const auto& p : front) {
        if (p.size() != m) throw ContractError("hypervolume: dimension mismatch");
        for (std::size_t k = 0; k < m; ++k) {
            if (p[k] > ref[k]) throw ContractError("hypervolume: point exceeds the reference point");
        }
    }
    std::vector<Point> pts = nondominated_unique(front);

    if (m <= 4) return {hv_exact(std::move(pts), ref), std::nullopt};

    // Monte-Carlo estimate over the bounding box [componentwise min, ref].
    Point lo(m, std::numeric_limits<double>::infinity());
    for (const auto& p : pts) {
        for (std::size_t k = 0; k < m; ++k) lo[k] = std::min(lo[k], p[k]);
    }
    double box = 1.0;
    for (std::size_t k = 0; k < m; ++k) box *= ref[k] - lo[k];
    if (box <= 0.0) return {0.0, 0.0};

    Rng rng(mc_seed);
    std::size_t hits = 0;
    Point sample(m);
    for (std::size_t s = 0; s < mc_samples; ++s) {
        for (std::size_t k = 0; k < m; ++k) sample[k] = rng.uniform(lo[k], ref[k]);
        for (const auto& p : pts) {
            if (dominates_or_equal(p, sample)) {
                ++hits;
                break;
            }
        }
    }
    const double frac = static_cast<double>(hits) / static_cast<double>(mc_samples);
    const double se = box * std::sqrt(frac * (1.0 - frac) / static_cast<double>(mc_samples));
    return {box * frac, se};
}

double gd_ideal(const std::vector<Point>& front, const Point& ideal) {
    if (front.empty()) throw ContractError("gd_ideal: empty front");
    double sum = 0.0;
    for (const auto& p : front) {
        double d2 = 0.0;
        for (std::size_t k = 0; k < ideal.size(); ++k) d2 += (p[k] - ideal[k]) * (p[k] - ideal[k]);
        sum += std::sqrt(d2);
    }
    return sum / static_cast<double>(front.size());
}

double igd(const std::vector<Point>& approximation, const std::vector<Point>& reference_set) {
    if (approximation.empty() || reference_set.empty())
        throw ContractError("igd: both sets must be nonempty");
    double sum = 0.0;
    for (const auto& y : reference_set) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& x : approximation) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < y.size(); ++k) d2 += (x[k] - y[k]) * (x[k] - y[k]);
            best = std::min(best, d2);
        }
        sum += std::sqrt(best);
    }
    return sum / static_cast<double>(reference_set.size());
}

namespace {

std::vector<Point> minmax_normalize(const std::vector<Point>& front) {
    const std::size_t m = front.front().size();
    Point lo(m, std::numeric_limits<double>::infinity());
    Point hi(m, -std::numeric_limits<double>::infinity());
    for (const auto& p : front) {
        for (std::size_t k = 0; k < m; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    }
    std::vector<Point> out(front.size(), Point(m, 0.0));
    for (std::size_t i = 0; i < front.size(); ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            const double span = hi[k] - lo[k];
            out[i][k] = (span > 1e-12) ? (front[i][k] - lo[k]) / span : 0.0;
        }
    }
    return out;
}

} // namespace

KneeResult knee_point(const std::vector<Point>& front) {
    if (front.size() < 2) throw ContractError("knee_point: front needs at least two members");
    if (front.size() == 2) {
        const std::size_t idx = front[1][0] < front[0][0] ? 1 : 0;
        return {idx, 0.0, true};
    }
    const std::size_t m = front.front().size();
    const std::vector<Point> norm = minmax_normalize(front);

    // Extreme member per objective: minimal normalized value, ties resolved
    // by lower first objective then index.
    std::vector<std::size_t> extreme(m, 0);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t i = 1; i < norm.size(); ++i) {
            if (norm[i][k] < norm[extreme[k]][k] - 1e-15 ||
                (std::abs(norm[i][k] - norm[extreme[k]][k]) <= 1e-15 &&
                 front[i][0] < front[extreme[k]][0])) {
                extreme[k] = i;
            }
        }
    }
    std::vector<Point> e(m);
    for (std::size_t k = 0; k < m; ++k) e[k] = norm[extreme[k]];

    // Hyperplane a . x = 1 through the extremes; fall back to the diagonal
    // plane sum(x) = 1 when the extreme points are degenerate.
    Point a(m, 1.0);
    {
        std::vector<Point> mat = e;
        Point rhs(m, 1.0), sol(m, 0.0);
        bool singular = false;
        for (std::size_t col = 0; col < m && !singular; ++col) {
            std::size_t pivot = col;
            for (std::size_t r = col + 1; r < m; ++r)
                if (std::abs(mat[r][col]) > std::abs(mat[pivot][col])) pivot = r;
            if (std::abs(mat[pivot][col]) < 1e-12) {
                singular = true;
                break;
            }
            std::swap(mat[col], mat[pivot]);
            std::swap(rhs[col], rhs[pivot]);
            for (std::size_t r = 0; r < m; ++r) {
                if (r == col) continue;
                const double f = mat[r][col] / mat[col][col];
                for (std::size_t c = col; c < m; ++c) mat[r][c] -= f * mat[col][c];
                rhs[r] -= f * rhs[col];
            }
        }
        if (!singular) {
            for (std::size_t i = 0; i < m; ++i) sol[i] = rhs[i] / mat[i][i];
            bool usable = true;
            for (double v : sol)
                if (!std::isfinite(v)) usable = false;
            if (usable) a = sol;
        }
    }
    double a_norm = 0.0;
    for (double v : a) a_norm += v * v;
    a_norm = std::sqrt(a_norm);
    if (a_norm < 1e-15) a_norm = 1.0;

    KneeResult best{0, -1.0, false};
    for (std::size_t i = 0; i < norm.size(); ++i) {
        double dot = 0.0;
        for (std::size_t k = 0; k < m; ++k) dot += a[k] * norm[i][k];
        const double dist = std::abs(dot - 1.0) / a_norm;
        if (dist > best.distance + 1e-12) {
            best.index = i;
            best.distance = dist;
        } else if (std::abs(dist - best.distance) <= 1e-12 && front[i][0] < front[best.index][0]) {
            best.index = i;
        }
    }
    return best;
}

std::vector<double> diversity_index(const std::vector<Point>& front) {
    if (front.empty()) throw ContractError("diversity_index: empty front");
    if (front.size() == 1) return {0.0};
    const std::vector<Point> norm = minmax_normalize(front);
    const std::size_t n = norm.size();
    const std::size_t k = std::min<std::size_t>(5, n - 1);

    std::vector<double> out(n, 0.0);
    std::vector<double> dists(n);
    for (std::size_t i = 0; i < n; ++i) {
        dists.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (std::size_t c = 0; c < norm[i].size(); ++c) {
                const double diff = norm[i][c] - norm[j][c];
                d2 += diff * diff;
            }
            dists.push_back(std::sqrt(d2));
        }
        std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k - 1), dists.end());
        const double sum = std::accumulate(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k), 0.0);
        out[i] = sum / static_cast<double>(k);
    }
    return out;
}

double mismatch_pct(double load_kw, double supply_kw) {
    if (load_kw <= 0.0) throw ContractError("mismatch_pct: load must be positive");
    return std::abs((load_kw - supply_kw) / load_kw) * 100.0;
}

double mismatch_improvement(double m_baseline_pct, double m_moo_pct) {
    if (m_baseline_pct <= 0.0)
        throw ContractError("mismatch_improvement: baseline mismatch must be positive");
    return (m_baseline_pct - m_moo_pct) / m_baseline_pct * 100.0;
}

Point default_reference_point(const std::vector<Point>& front) {
    if (front.empty()) throw ContractError("default_reference_point: empty front");
    const std::size_t m = front.front().size();
    Point lo(m, std::numeric_limits<double>::infinity());
    Point hi(m, -std::numeric_limits<double>::infinity());
    for (const auto& p : front) {
        for (std::size_t k = 0; k < m; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    }
    Point ref(m);
    for (std::size_t k = 0; k < m; ++k) {
        ref[k] = hi[k] + std::max(0.1 * (hi[k] - lo[k]), 1e-6);
    }
    return ref;
}

} // namespace mgems::metrics
