#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mgems/rng.hpp"

namespace mgems::nsga3 {

/// Inclusive box bounds for one decision variable.
struct Bounds {
    double lower = 0.0;
    double upper = 1.0;
};

/// A point in decision space together with its box.
struct DecisionVector {
    std::vector<double> values;
    std::vector<Bounds> bounds;

    bool within_bounds(double tol = 0.0) const;
    void clip();
};

/// Objective values, minimization sense for every component.
using ObjectiveVector = std::vector<double>;

struct Individual {
    DecisionVector decision;
    ObjectiveVector objectives;
    int rank = 0;
    std::optional<std::size_t> niche;
    double perpendicular_distance = 0.0;
};

/// Das-Dennis reference directions on the unit simplex.
struct ReferenceDirectionSet {
    std::vector<std::vector<double>> directions;
    std::string layering;

    std::size_t size() const { return directions.size(); }
};

/// One simplex-lattice layer: `partitions` divisions, scaled toward the
/// centroid by `scale` (1.0 = the boundary simplex itself).
struct Layer {
    unsigned partitions = 1;
    double scale = 1.0;
};

struct OptimizerConfig {
    std::size_t population_size = 210;
    std::size_t generations = 200;
    double crossover_probability = 0.9;
    double crossover_distribution_index = 30.0;
    std::optional<double> mutation_probability;  // nullopt -> 1/n
    double mutation_distribution_index = 20.0;
    std::uint64_t rng_seed = 1;

    void validate() const;
};

/// The problem handed to the optimizer: a total evaluation callback over the
/// bounded box. The callback must be pure and safe to call from multiple
/// workers; all other optimizer state is single-threaded per instance.
struct Problem {
    std::size_t n_objectives = 0;
    std::vector<Bounds> bounds;
    std::function<ObjectiveVector(std::span<const double>)> evaluate;
};

struct ParetoFront {
    struct Member {
        DecisionVector decision;
        ObjectiveVector objectives;
    };
    std::vector<Member> members;
    // Per-objective min/max over the members, recorded as normalization bounds.
    std::vector<double> objective_min;
    std::vector<double> objective_max;

    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }
};

/// Pareto dominance, minimization sense: a <= b componentwise with at least
/// one strict improvement. Throws ContractError on length mismatch.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Fast non-dominated sort. Returns fronts as index lists (front 0 first)
/// and updates each individual's rank. Empty input -> empty result.
std::vector<std::vector<std::size_t>> nondominated_sort(std::vector<Individual>& pop);

/// Sort working on bare objective vectors; ranks are reported through the
/// returned front partition only.
std::vector<std::vector<std::size_t>> nondominated_sort(std::span<const ObjectiveVector> objectives);

/// Das-Dennis simplex-lattice reference directions for m objectives.
/// A single layer with H partitions yields C(H+m-1, m-1) points; multiple
/// layers are unioned after scaling toward the centroid, duplicates removed.
/// Throws ContractError for m < 2, a zero partition count, or a scale
/// outside (0, 1].
ReferenceDirectionSet das_dennis(std::size_t m, const std::vector<Layer>& layers);

/// NSGA-III environmental selection over parents+offspring. Whole fronts are
/// admitted while they fit; the splitting front is filled by reference-point
/// niching (normalize, associate, fill least-crowded niches; ties resolved by
/// smaller perpendicular distance, then by an RNG draw).
/// Throws ContractError when target exceeds the input size.
std::vector<Individual> survive(std::vector<Individual> pool,
                                const ReferenceDirectionSet& refs,
                                std::size_t target,
                                Rng& rng);

/// Simulated binary crossover. Children are clipped into the shared box.
std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& p1,
                                                        const DecisionVector& p2,
                                                        const OptimizerConfig& cfg,
                                                        Rng& rng);

/// Bounded polynomial mutation.
DecisionVector polynomial_mutation(const DecisionVector& p,
                                   const OptimizerConfig& cfg,
                                   Rng& rng);

/// Run the generational loop and return the rank-0 set of the final
/// population. Generation 1 is the evaluated initial population, so
/// cfg.generations == 1 extracts the non-dominated members of the initial
/// sample. Individuals evaluating to non-finite objectives are resampled;
/// more than 1000 consecutive rejections abort with EvaluationError.
/// Deterministic for a fixed cfg.rng_seed.
ParetoFront optimize(const Problem& problem,
                     const OptimizerConfig& cfg,
                     const ReferenceDirectionSet& refs);

} // namespace mgems::nsga3
