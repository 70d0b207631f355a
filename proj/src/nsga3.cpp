#include "mgems/nsga3.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

#include "mgems/errors.hpp"

namespace mgems::nsga3 {

namespace {

bool all_finite(const ObjectiveVector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

bool DecisionVector::within_bounds(double tol) const {
    if (values.size() != bounds.size()) return false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < bounds[i].lower - tol || values[i] > bounds[i].upper + tol) return false;
    }
    return true;
}

void DecisionVector::clip() {
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = std::clamp(values[i], bounds[i].lower, bounds[i].upper);
    }
}

void OptimizerConfig::validate() const {
    if (population_size == 0) throw ContractError("population_size must be positive");
    if (generations == 0) throw ContractError("generations must be positive");
    if (crossover_probability < 0.0 || crossover_probability > 1.0)
        throw ContractError("crossover_probability must lie in [0,1]");
    if (mutation_probability && (*mutation_probability < 0.0 || *mutation_probability > 1.0))
        throw ContractError("mutation_probability must lie in [0,1]");
    if (crossover_distribution_index <= 0.0 || mutation_distribution_index <= 0.0)
        throw ContractError("distribution indices must be positive");
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    if (a.size() != b.size()) throw ContractError("dominates: objective vectors differ in length");
    bool strictly_better = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const ObjectiveVector> objectives) {
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> fronts;
    if (n == 0) return fronts;

    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> domination_count(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objectives[i], objectives[j])) {
                dominated[i].push_back(j);
                ++domination_count[j];
            } else if (dominates(objectives[j], objectives[i])) {
                dominated[j].push_back(i);
                ++domination_count[i];
            }
        }
    }

    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i) {
        if (domination_count[i] == 0) current.push_back(i);
    }
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            for (std::size_t j : dominated[i]) {
                if (--domination_count[j] == 0) next.push_back(j);
            }
        }
        current = std::move(next);
    }
    return fronts;
}

std::vector<std::vector<std::size_t>> nondominated_sort(std::vector<Individual>& pop) {
    std::vector<ObjectiveVector> objs;
    objs.reserve(pop.size());
    for (const auto& ind : pop) objs.push_back(ind.objectives);
    auto fronts = nondominated_sort(std::span<const ObjectiveVector>(objs));
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        for (std::size_t i : fronts[f]) pop[i].rank = static_cast<int>(f);
    }
    return fronts;
}

namespace {

void enumerate_simplex(std::size_t m, unsigned partitions, std::vector<unsigned>& acc,
                       unsigned remaining, std::vector<std::vector<double>>& out) {
    if (acc.size() == m - 1) {
        std::vector<double> dir(m);
        for (std::size_t i = 0; i < m - 1; ++i) dir[i] = static_cast<double>(acc[i]) / partitions;
        dir[m - 1] = static_cast<double>(remaining) / partitions;
        out.push_back(std::move(dir));
        return;
    }
    for (unsigned k = 0; k <= remaining; ++k) {
        acc.push_back(k);
        enumerate_simplex(m, partitions, acc, remaining - k, out);
        acc.pop_back();
    }
}

} // namespace

ReferenceDirectionSet das_dennis(std::size_t m, const std::vector<Layer>& layers) {
    if (m < 2) throw ContractError("das_dennis: at least two objectives required");
    if (layers.empty()) throw ContractError("das_dennis: at least one layer required");

    ReferenceDirectionSet set;
    std::map<std::vector<long long>, bool> seen;  // quantized dedupe key
    std::string desc;
    for (const Layer& layer : layers) {
        if (layer.partitions == 0) throw ContractError("das_dennis: partition count must be >= 1");
        if (!(layer.scale > 0.0) || layer.scale > 1.0)
            throw ContractError("das_dennis: layer scale must lie in (0,1]");

        std::vector<std::vector<double>> pts;
        std::vector<unsigned> acc;
        enumerate_simplex(m, layer.partitions, acc, layer.partitions, pts);

        const double centroid = 1.0 / static_cast<double>(m);
        for (auto& p : pts) {
            if (layer.scale < 1.0) {
                for (double& c : p) c = layer.scale * c + (1.0 - layer.scale) * centroid;
            }
            std::vector<long long> key(m);
            for (std::size_t i = 0; i < m; ++i) key[i] = llround(p[i] * 1e12);
            if (seen.emplace(std::move(key), true).second) set.directions.push_back(std::move(p));
        }
        if (!desc.empty()) desc += " + ";
        char buf[64];
        std::snprintf(buf, sizeof buf, "H=%u@%.3g", layer.partitions, layer.scale);
        desc += buf;
    }
    set.layering = desc;
    return set;
}

namespace {

// Achievement scalarizing function used to locate extreme points.
double asf(const ObjectiveVector& translated, std::size_t axis) {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < translated.size(); ++k) {
        const double w = (k == axis) ? 1.0 : 1e-6;
        worst = std::max(worst, translated[k] / w);
    }
    return worst;
}

// Solve E a = 1 by Gaussian elimination; returns false when singular.
bool solve_plane(std::vector<std::vector<double>> e, std::vector<double>& a) {
    const std::size_t m = e.size();
    a.assign(m, 0.0);
    std::vector<double> rhs(m, 1.0);
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < m; ++r) {
            if (std::abs(e[r][col]) > std::abs(e[pivot][col])) pivot = r;
        }
        if (std::abs(e[pivot][col]) < 1e-12) return false;
        std::swap(e[col], e[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == col) continue;
            const double factor = e[r][col] / e[col][col];
            for (std::size_t c = col; c < m; ++c) e[r][c] -= factor * e[col][c];
            rhs[r] -= factor * rhs[col];
        }
    }
    for (std::size_t i = 0; i < m; ++i) a[i] = rhs[i] / e[i][i];
    return true;
}

struct Normalization {
    std::vector<double> ideal;
    std::vector<double> span;  // nadir - ideal, floored
};

Normalization normalize_setup(const std::vector<Individual>& pool,
                              const std::vector<std::size_t>& considered,
                              const std::vector<std::size_t>& first_front) {
    const std::size_t m = pool[considered.front()].objectives.size();
    Normalization norm;
    norm.ideal.assign(m, std::numeric_limits<double>::infinity());
    for (std::size_t i : considered) {
        for (std::size_t k = 0; k < m; ++k) {
            norm.ideal[k] = std::min(norm.ideal[k], pool[i].objectives[k]);
        }
    }

    // Extreme points along each axis (ASF over the considered set).
    std::vector<std::vector<double>> extremes(m, std::vector<double>(m));
    for (std::size_t axis = 0; axis < m; ++axis) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_idx = considered.front();
        for (std::size_t i : considered) {
            ObjectiveVector translated(m);
            for (std::size_t k = 0; k < m; ++k) translated[k] = pool[i].objectives[k] - norm.ideal[k];
            const double v = asf(translated, axis);
            if (v < best) {
                best = v;
                best_idx = i;
            }
        }
        for (std::size_t k = 0; k < m; ++k)
            extremes[axis][k] = pool[best_idx].objectives[k] - norm.ideal[k];
    }

    std::vector<double> intercepts;
    std::vector<double> a;
    bool ok = solve_plane(extremes, a);
    if (ok) {
        intercepts.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            if (a[k] <= 1e-12 || !std::isfinite(a[k])) {
                ok = false;
                break;
            }
            intercepts[k] = 1.0 / a[k];
        }
    }
    if (!ok) {
        // Degenerate extremes: fall back to the per-objective max over the
        // first front.
        intercepts.assign(m, 0.0);
        for (std::size_t k = 0; k < m; ++k) {
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t i : first_front) mx = std::max(mx, pool[i].objectives[k] - norm.ideal[k]);
            intercepts[k] = mx;
        }
    }
    norm.span.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        norm.span[k] = (intercepts[k] > 1e-12) ? intercepts[k] : 1.0;
    }
    return norm;
}

struct Association {
    std::size_t niche = 0;
    double distance = 0.0;
};

Association associate_one(const ObjectiveVector& objectives, const Normalization& norm,
                          const ReferenceDirectionSet& refs) {
    const std::size_t m = objectives.size();
    std::vector<double> f(m);
    for (std::size_t k = 0; k < m; ++k) f[k] = (objectives[k] - norm.ideal[k]) / norm.span[k];

    Association best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t r = 0; r < refs.directions.size(); ++r) {
        const auto& w = refs.directions[r];
        double wn = 0.0, proj = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            wn += w[k] * w[k];
            proj += f[k] * w[k];
        }
        wn = std::sqrt(wn);
        const double t = (wn > 0.0) ? proj / wn : 0.0;
        double d2 = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double diff = f[k] - t * w[k] / wn;
            d2 += diff * diff;
        }
        const double d = std::sqrt(d2);
        if (d < best.distance) best = {r, d};
    }
    return best;
}

} // namespace

std::vector<Individual> survive(std::vector<Individual> pool,
                                const ReferenceDirectionSet& refs,
                                std::size_t target,
                                Rng& rng) {
    if (target > pool.size()) throw ContractError("survive: target exceeds pool size");
    if (target == 0) return {};

    auto fronts = nondominated_sort(pool);

    std::vector<Individual> next;
    next.reserve(target);
    std::size_t f = 0;
    for (; f < fronts.size(); ++f) {
        if (next.size() + fronts[f].size() > target) break;
        for (std::size_t i : fronts[f]) next.push_back(pool[i]);
        if (next.size() == target) return next;
    }

    // fronts[f] is the splitting front; fill the remaining slots by niching.
    const std::size_t remaining = target - next.size();
    std::vector<std::size_t> considered;
    for (std::size_t g = 0; g <= f; ++g)
        considered.insert(considered.end(), fronts[g].begin(), fronts[g].end());
    const Normalization norm = normalize_setup(pool, considered, fronts[0]);

    for (std::size_t i : considered) {
        const Association assoc = associate_one(pool[i].objectives, norm, refs);
        pool[i].niche = assoc.niche;
        pool[i].perpendicular_distance = assoc.distance;
    }
    for (auto& ind : next) {
        // Mirror niche data onto already-copied survivors.
        const Association assoc = associate_one(ind.objectives, norm, refs);
        ind.niche = assoc.niche;
        ind.perpendicular_distance = assoc.distance;
    }

    std::vector<std::size_t> niche_count(refs.size(), 0);
    for (const auto& ind : next) ++niche_count[*ind.niche];

    // Candidates from the splitting front grouped by niche.
    std::vector<std::vector<std::size_t>> per_niche(refs.size());
    for (std::size_t i : fronts[f]) per_niche[*pool[i].niche].push_back(i);

    for (std::size_t picked = 0; picked < remaining; ++picked) {
        // Least-crowded niche among those that still have candidates.
        std::size_t best_count = std::numeric_limits<std::size_t>::max();
        std::vector<std::size_t> tied;
        for (std::size_t r = 0; r < refs.size(); ++r) {
            if (per_niche[r].empty()) continue;
            if (niche_count[r] < best_count) {
                best_count = niche_count[r];
                tied.assign(1, r);
            } else if (niche_count[r] == best_count) {
                tied.push_back(r);
            }
        }
        const std::size_t niche = tied[tied.size() == 1 ? 0 : rng.index(tied.size())];

        auto& candidates = per_niche[niche];
        double best_dist = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> pos_tied;
        for (std::size_t p = 0; p < candidates.size(); ++p) {
            const double d = pool[candidates[p]].perpendicular_distance;
            if (d < best_dist - 1e-15) {
                best_dist = d;
                pos_tied.assign(1, p);
            } else if (std::abs(d - best_dist) <= 1e-15) {
                pos_tied.push_back(p);
            }
        }
        const std::size_t pos = pos_tied[pos_tied.size() == 1 ? 0 : rng.index(pos_tied.size())];
        next.push_back(pool[candidates[pos]]);
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pos));
        ++niche_count[niche];
    }
    return next;
}

std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& p1,
                                                        const DecisionVector& p2,
                                                        const OptimizerConfig& cfg,
                                                        Rng& rng) {
    if (p1.values.size() != p2.values.size())
        throw ContractError("sbx_crossover: parents differ in length");
    DecisionVector c1 = p1;
    DecisionVector c2 = p2;
    if (rng.uniform() > cfg.crossover_probability) return {c1, c2};

    const double eta = cfg.crossover_distribution_index;
    for (std::size_t i = 0; i < p1.values.size(); ++i) {
        if (rng.uniform() > 0.5) continue;
        const double y1 = std::min(p1.values[i], p2.values[i]);
        const double y2 = std::max(p1.values[i], p2.values[i]);
        const double yl = p1.bounds[i].lower;
        const double yu = p1.bounds[i].upper;
        if (y2 - y1 < 1e-14) continue;

        const double u = rng.uniform();
        auto spread = [&](double beta_bound) {
            const double alpha = 2.0 - std::pow(beta_bound, -(eta + 1.0));
            if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
            return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
        };

        const double beta1 = 1.0 + 2.0 * (y1 - yl) / (y2 - y1);
        const double beta2 = 1.0 + 2.0 * (yu - y2) / (y2 - y1);
        const double betaq1 = spread(beta1);
        const double betaq2 = spread(beta2);

        double child1 = 0.5 * ((y1 + y2) - betaq1 * (y2 - y1));
        double child2 = 0.5 * ((y1 + y2) + betaq2 * (y2 - y1));
        child1 = std::clamp(child1, yl, yu);
        child2 = std::clamp(child2, yl, yu);
        if (rng.uniform() > 0.5) std::swap(child1, child2);
        c1.values[i] = child1;
        c2.values[i] = child2;
    }
    return {c1, c2};
}

DecisionVector polynomial_mutation(const DecisionVector& p,
                                   const OptimizerConfig& cfg,
                                   Rng& rng) {
    DecisionVector out = p;
    const std::size_t n = p.values.size();
    if (n == 0) return out;
    const double pm = cfg.mutation_probability ? *cfg.mutation_probability
                                               : 1.0 / static_cast<double>(n);
    const double eta = cfg.mutation_distribution_index;

    for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform() >= pm) continue;
        const double yl = p.bounds[i].lower;
        const double yu = p.bounds[i].upper;
        const double span = yu - yl;
        if (span < 1e-14) continue;
        const double y = p.values[i];
        const double delta1 = (y - yl) / span;
        const double delta2 = (yu - y) / span;
        const double u = rng.uniform();
        const double mut_pow = 1.0 / (eta + 1.0);
        double deltaq;
        if (u < 0.5) {
            const double xy = 1.0 - delta1;
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(xy, eta + 1.0);
            deltaq = std::pow(val, mut_pow) - 1.0;
        } else {
            const double xy = 1.0 - delta2;
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(xy, eta + 1.0);
            deltaq = 1.0 - std::pow(val, mut_pow);
        }
        out.values[i] = std::clamp(y + deltaq * span, yl, yu);
    }
    return out;
}

namespace {

constexpr int kMaxConsecutiveRejects = 1000;

DecisionVector sample_uniform(const std::vector<Bounds>& bounds, Rng& rng) {
    DecisionVector d;
    d.bounds = bounds;
    d.values.reserve(bounds.size());
    for (const Bounds& b : bounds) d.values.push_back(rng.uniform(b.lower, b.upper));
    return d;
}

// Evaluate a candidate; resample uniformly while objectives come back
// non-finite. Aborts after kMaxConsecutiveRejects rejections in a row.
Individual evaluate_candidate(DecisionVector decision, const Problem& problem, Rng& rng,
                              int& consecutive_rejects) {
    for (;;) {
        ObjectiveVector objs = problem.evaluate(decision.values);
        if (objs.size() != problem.n_objectives)
            throw ContractError("optimize: callback returned wrong objective count");
        if (all_finite(objs)) {
            consecutive_rejects = 0;
            Individual ind;
            ind.decision = std::move(decision);
            ind.objectives = std::move(objs);
            return ind;
        }
        if (++consecutive_rejects > kMaxConsecutiveRejects) {
            throw EvaluationError(
                "optimize: more than 1000 consecutive non-finite evaluations; "
                "check the objective callback over the given bounds");
        }
        decision = sample_uniform(problem.bounds, rng);
    }
}

} // namespace

ParetoFront optimize(const Problem& problem,
                     const OptimizerConfig& cfg,
                     const ReferenceDirectionSet& refs) {
    cfg.validate();
    if (!problem.evaluate) throw ContractError("optimize: missing evaluation callback");
    if (problem.bounds.empty()) throw ContractError("optimize: empty bounds");
    if (problem.n_objectives < 2) throw ContractError("optimize: at least two objectives required");
    if (cfg.population_size < refs.size())
        throw ContractError("optimize: population_size must be >= number of reference directions");

    Rng rng(cfg.rng_seed);
    int rejects = 0;

    std::vector<Individual> pop;
    pop.reserve(cfg.population_size);
    for (std::size_t i = 0; i < cfg.population_size; ++i) {
        pop.push_back(evaluate_candidate(sample_uniform(problem.bounds, rng), problem, rng, rejects));
    }

    // Generation 1 is the evaluated initial population.
    for (std::size_t gen = 1; gen < cfg.generations; ++gen) {
        std::vector<std::size_t> order(pop.size());
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);

        std::vector<Individual> offspring;
        offspring.reserve(pop.size() + 1);
        for (std::size_t i = 0; i + 1 < order.size(); i += 2) {
            auto [c1, c2] = sbx_crossover(pop[order[i]].decision, pop[order[i + 1]].decision, cfg, rng);
            c1 = polynomial_mutation(c1, cfg, rng);
            c2 = polynomial_mutation(c2, cfg, rng);
            offspring.push_back(evaluate_candidate(std::move(c1), problem, rng, rejects));
            offspring.push_back(evaluate_candidate(std::move(c2), problem, rng, rejects));
        }
        if (order.size() % 2 == 1) {
            DecisionVector c = polynomial_mutation(pop[order.back()].decision, cfg, rng);
            offspring.push_back(evaluate_candidate(std::move(c), problem, rng, rejects));
        }

        for (auto& child : offspring) pop.push_back(std::move(child));
        pop = survive(std::move(pop), refs, cfg.population_size, rng);
    }

    auto fronts = nondominated_sort(pop);
    ParetoFront front;
    if (fronts.empty()) return front;
    front.objective_min.assign(problem.n_objectives, std::numeric_limits<double>::infinity());
    front.objective_max.assign(problem.n_objectives, -std::numeric_limits<double>::infinity());
    for (std::size_t i : fronts[0]) {
        for (std::size_t k = 0; k < problem.n_objectives; ++k) {
            front.objective_min[k] = std::min(front.objective_min[k], pop[i].objectives[k]);
            front.objective_max[k] = std::max(front.objective_max[k], pop[i].objectives[k]);
        }
        front.members.push_back({std::move(pop[i].decision), std::move(pop[i].objectives)});
    }
    return front;
}

} // namespace mgems::nsga3
