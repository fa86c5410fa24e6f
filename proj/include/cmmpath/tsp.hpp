#ifndef CMMPATH_TSP_HPP
#define CMMPATH_TSP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "cmmpath/timing.hpp"

namespace cmmpath {

enum class SolverKind { NearestNeighbor, SimulatedAnnealing, Genetic, AntColony, BruteForce };

const char* to_string(SolverKind kind);

// Closed tour over the matrix MPs. The depot (matrix node 0) is implicitly
// first and last and never permuted. `order` holds matrix MP indices 1..m.
struct Tour {
    std::vector<int> order;
    double total_time = 0.0;
    bool tainted = false;  // contains an A_inf leg
    SolverKind solver = SolverKind::NearestNeighbor;
    std::uint64_t seed = 0;
    long iterations = 0;
    // Best-ever cost snapshots, one per cooling level / generation /
    // colony iteration. Non-increasing by construction.
    std::vector<double> best_history;
};

struct SaParams {
    double t0 = 0.0;            // <= 0: mean finite entry * m
    double cooling = 0.995;     // geometric factor per level
    long iters_per_temp = 0;    // <= 0: 100 * m proposals per level
    double t_end_factor = 1e-6; // stop at t0 * factor
    long max_proposals = -1;    // >= 0 caps total proposals (0 returns the seed tour)
};

struct GaParams {
    int population = 80;
    int generations = 400;
    double crossover_rate = 0.9;
    double mutation_rate = 0.2;
};

struct AcoParams {
    int ants = 24;
    int iterations = 250;
    double alpha = 1.0;   // pheromone weight
    double beta = 3.0;    // desirability weight
    double evaporation = 0.1;
};

struct SolverParams {
    SaParams sa;
    GaParams ga;
    AcoParams aco;
    std::uint64_t seed = 1;
};

struct PreprocessResult {
    TimeMatrix reduced;
    std::vector<int> kept;  // original matrix index per reduced index (1-based slot i-1 -> kept[i-1])
    std::vector<std::string> excluded_ids;
};

// Repeatedly drops MPs whose rows (depot included) are entirely A_inf;
// such points cannot appear on any untainted tour. MPs reachable only
// through other dropped MPs fall in later sweeps.
PreprocessResult preprocess_inaccessible(const TimeMatrix& T);

// Exact optimum by enumeration, m <= 10. Ties break lexicographically.
Tour brute_force(const TimeMatrix& T);

// Greedy from the depot; ties go to the lowest index.
Tour nearest_neighbor(const TimeMatrix& T);

// Simulated annealing over permutations: NN-seeded, 50/50 mix of 2-opt
// reversals and pair swaps, geometric cooling, best-ever tracking.
Tour solve_sa(const TimeMatrix& T, const SaParams& params, std::uint64_t seed);

// Order-crossover GA with swap mutation, tournament selection, elitism of
// one, and the NN tour injected into the initial population.
Tour solve_ga(const TimeMatrix& T, const GaParams& params, std::uint64_t seed);

// Ant system on directed edges with desirability 1/T (A_inf edges get a
// vanishing weight, so they are chosen only when nothing else remains).
Tour solve_aco(const TimeMatrix& T, const AcoParams& params, std::uint64_t seed);

}  // namespace cmmpath

#endif
