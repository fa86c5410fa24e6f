#include "cmmpath/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cmmpath {

const char* to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::NearestNeighbor: return "nn";
        case SolverKind::SimulatedAnnealing: return "sa";
        case SolverKind::Genetic: return "ga";
        case SolverKind::AntColony: return "aco";
        case SolverKind::BruteForce: return "brute";
    }
    return "nn";
}

namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1p-53;
}

void require_nonempty(const TimeMatrix& T) {
    if (T.mp_count() < 1) throw std::invalid_argument("solver: matrix has no MPs");
}

Tour finalize(std::vector<int> order, const TimeMatrix& T, SolverKind kind,
              std::uint64_t seed, long iterations, std::vector<double> history = {}) {
    Tour t;
    t.order = std::move(order);
    const TourCost cost = tour_time(t.order, T);
    t.total_time = cost.seconds;
    t.tainted = cost.tainted;
    t.solver = kind;
    t.seed = seed;
    t.iterations = iterations;
    t.best_history = std::move(history);
    return t;
}

}  // namespace

PreprocessResult preprocess_inaccessible(const TimeMatrix& T) {
    const int m = T.mp_count();
    std::vector<bool> alive(m + 1, true);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 1; i <= m; ++i) {
            if (!alive[i]) continue;
            bool any_finite = false;
            for (int q = 0; q <= m && !any_finite; ++q)
                if (q != i && alive[q] && !T.is_inf(i, q)) any_finite = true;
            if (!any_finite) {
                alive[i] = false;
                changed = true;
            }
        }
    }

    PreprocessResult res;
    for (int i = 1; i <= m; ++i) {
        if (alive[i])
            res.kept.push_back(i);
        else
            res.excluded_ids.push_back(T.label(i));
    }
    const int mk = static_cast<int>(res.kept.size());
    res.reduced = TimeMatrix(mk, T.a_inf());
    std::vector<std::string> labels;
    labels.reserve(mk);
    for (int i = 0; i < mk; ++i) labels.push_back(T.label(res.kept[i]));
    res.reduced.set_labels(std::move(labels));
    for (int i = 0; i <= mk; ++i) {
        for (int q = 0; q <= mk; ++q) {
            const int oi = i == 0 ? 0 : res.kept[i - 1];
            const int oq = q == 0 ? 0 : res.kept[q - 1];
            res.reduced.set(i, q, T.at(oi, oq));
        }
    }
    return res;
}

Tour brute_force(const TimeMatrix& T) {
    require_nonempty(T);
    const int m = T.mp_count();
    if (m > 10) throw std::invalid_argument("brute_force: only supported up to 10 MPs");
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 1);
    std::vector<int> best = perm;
    double best_cost = tour_time(perm, T).seconds;
    long count = 1;
    while (std::next_permutation(perm.begin(), perm.end())) {
        ++count;
        const double c = tour_time(perm, T).seconds;
        if (c < best_cost) {  // strict: first (lexicographic) order wins ties
            best_cost = c;
            best = perm;
        }
    }
    return finalize(std::move(best), T, SolverKind::BruteForce, 0, count);
}

Tour nearest_neighbor(const TimeMatrix& T) {
    require_nonempty(T);
    const int m = T.mp_count();
    std::vector<bool> visited(m + 1, false);
    std::vector<int> order;
    order.reserve(m);
    int current = 0;
    for (int step = 0; step < m; ++step) {
        int best = -1;
        double best_cost = 0.0;
        for (int q = 1; q <= m; ++q) {
            if (visited[q]) continue;
            const double c = T.at(current, q);
            if (best < 0 || c < best_cost) {
                best = q;
                best_cost = c;
            }
        }
        visited[best] = true;
        order.push_back(best);
        current = best;
    }
    return finalize(std::move(order), T, SolverKind::NearestNeighbor, 0, m);
}

// ---------------------------------------------------------------------------
// Simulated annealing

namespace {

// Cost of edges entering/leaving tour positions, depot-aware.
struct TourView {
    const TimeMatrix& T;
    const std::vector<int>& order;
    int node(int pos) const { return order[pos]; }
    int pred(int pos) const { return pos == 0 ? 0 : order[pos - 1]; }
    int succ(int pos) const { return pos + 1 == static_cast<int>(order.size()) ? 0 : order[pos + 1]; }
};

double mean_finite_entry(const TimeMatrix& T) {
    double sum = 0.0;
    long n = 0;
    for (int i = 0; i <= T.mp_count(); ++i)
        for (int q = 0; q <= T.mp_count(); ++q)
            if (i != q && !T.is_inf(i, q)) {
                sum += T.at(i, q);
                ++n;
            }
    return n > 0 ? sum / static_cast<double>(n) : 1.0;
}

}  // namespace

Tour solve_sa(const TimeMatrix& T, const SaParams& params, std::uint64_t seed) {
    require_nonempty(T);
    const int m = T.mp_count();
    std::vector<int> cur = nearest_neighbor(T).order;
    if (m < 2 || params.max_proposals == 0)
        return finalize(std::move(cur), T, SolverKind::SimulatedAnnealing, seed, 0);

    std::mt19937_64 rng(seed);
    const double t0 = params.t0 > 0.0 ? params.t0 : mean_finite_entry(T) * m;
    const long per_level = params.iters_per_temp > 0 ? params.iters_per_temp : 100L * m;
    const double t_end = t0 * params.t_end_factor;

    double cur_cost = tour_time(cur, T).seconds;
    std::vector<int> best = cur;
    double best_cost = cur_cost;
    std::vector<double> history;
    long proposals = 0;

    const TourView view{T, cur};
    for (double temp = t0; temp >= t_end; temp *= params.cooling) {
        for (long it = 0; it < per_level; ++it) {
            if (params.max_proposals >= 0 && proposals >= params.max_proposals) break;
            ++proposals;
            int a = static_cast<int>(bounded(rng, m));
            int b = static_cast<int>(bounded(rng, m));
            if (a == b) continue;
            if (a > b) std::swap(a, b);
            const bool reversal = (rng() & 1u) == 0u;
            double delta;
            if (reversal) {
                if (a == 0 && b == m - 1) continue;  // whole-tour reversal is a no-op
                delta = T.at(view.pred(a), view.node(b)) + T.at(view.node(a), view.succ(b)) -
                        T.at(view.pred(a), view.node(a)) - T.at(view.node(b), view.succ(b));
            } else if (b == a + 1) {
                delta = T.at(view.pred(a), view.node(b)) + T.at(view.node(a), view.succ(b)) -
                        T.at(view.pred(a), view.node(a)) - T.at(view.node(b), view.succ(b));
            } else {
                delta = T.at(view.pred(a), view.node(b)) + T.at(view.node(b), view.succ(a)) +
                        T.at(view.pred(b), view.node(a)) + T.at(view.node(a), view.succ(b)) -
                        T.at(view.pred(a), view.node(a)) - T.at(view.node(a), view.succ(a)) -
                        T.at(view.pred(b), view.node(b)) - T.at(view.node(b), view.succ(b));
            }
            if (delta <= 0.0 || uniform01(rng) < std::exp(-delta / temp)) {
                if (reversal)
                    std::reverse(cur.begin() + a, cur.begin() + b + 1);
                else
                    std::swap(cur[a], cur[b]);
                cur_cost += delta;
                if (cur_cost < best_cost) {
                    best_cost = cur_cost;
                    best = cur;
                }
            }
        }
        // Knock out accumulated floating-point drift once per level.
        cur_cost = tour_time(cur, T).seconds;
        history.push_back(tour_time(best, T).seconds);
        if (params.max_proposals >= 0 && proposals >= params.max_proposals) break;
    }
    return finalize(std::move(best), T, SolverKind::SimulatedAnnealing, seed, proposals,
                    std::move(history));
}

// ---------------------------------------------------------------------------
// Genetic algorithm

namespace {

std::vector<int> order_crossover(const std::vector<int>& p1, const std::vector<int>& p2,
                                 std::mt19937_64& rng) {
    const int m = static_cast<int>(p1.size());
    int c1 = static_cast<int>(bounded(rng, m));
    int c2 = static_cast<int>(bounded(rng, m));
    if (c1 > c2) std::swap(c1, c2);
    std::vector<int> child(m, 0);
    std::vector<bool> used(m + 1, false);
    for (int i = c1; i <= c2; ++i) {
        child[i] = p1[i];
        used[p1[i]] = true;
    }
    int write = (c2 + 1) % m;
    for (int k = 0; k < m; ++k) {
        const int gene = p2[(c2 + 1 + k) % m];
        if (used[gene]) continue;
        child[write] = gene;
        write = (write + 1) % m;
    }
    return child;
}

}  // namespace

Tour solve_ga(const TimeMatrix& T, const GaParams& params, std::uint64_t seed) {
    require_nonempty(T);
    if (params.population < 1) throw std::invalid_argument("solve_ga: population must be >= 1");
    const int m = T.mp_count();
    std::mt19937_64 rng(seed);

    auto cost_of = [&](const std::vector<int>& o) { return tour_time(o, T).seconds; };

    std::vector<std::vector<int>> pop;
    pop.reserve(params.population);
    pop.push_back(nearest_neighbor(T).order);  // NN seed individual
    std::vector<int> base(m);
    std::iota(base.begin(), base.end(), 1);
    while (static_cast<int>(pop.size()) < params.population) {
        std::vector<int> ind = base;
        for (int i = m - 1; i > 0; --i)
            std::swap(ind[i], ind[bounded(rng, static_cast<std::uint64_t>(i) + 1)]);
        pop.push_back(std::move(ind));
    }
    std::vector<double> costs(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) costs[i] = cost_of(pop[i]);

    auto best_index = [&]() {
        std::size_t bi = 0;
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (costs[i] < costs[bi]) bi = i;
        return bi;
    };
    std::vector<int> best = pop[best_index()];
    double best_cost = costs[best_index()];
    std::vector<double> history;

    auto tournament = [&]() -> const std::vector<int>& {
        std::size_t winner = bounded(rng, pop.size());
        for (int k = 0; k < 2; ++k) {
            const std::size_t c = bounded(rng, pop.size());
            if (costs[c] < costs[winner]) winner = c;
        }
        return pop[winner];
    };

    for (int gen = 0; gen < params.generations; ++gen) {
        std::vector<std::vector<int>> next;
        next.reserve(pop.size());
        next.push_back(best);  // elitism of one
        while (next.size() < pop.size()) {
            const std::vector<int>& p1 = tournament();
            const std::vector<int>& p2 = tournament();
            std::vector<int> child =
                (m >= 2 && uniform01(rng) < params.crossover_rate)
                    ? order_crossover(p1, p2, rng)
                    : p1;
            if (m >= 2 && uniform01(rng) < params.mutation_rate) {
                const int a = static_cast<int>(bounded(rng, m));
                int b = static_cast<int>(bounded(rng, m - 1));
                if (b >= a) ++b;
                std::swap(child[a], child[b]);
            }
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        for (std::size_t i = 0; i < pop.size(); ++i) costs[i] = cost_of(pop[i]);
        const std::size_t bi = best_index();
        if (costs[bi] < best_cost) {
            best_cost = costs[bi];
            best = pop[bi];
        }
        history.push_back(best_cost);
    }
    return finalize(std::move(best), T, SolverKind::Genetic, seed, params.generations,
                    std::move(history));
}

// ---------------------------------------------------------------------------
// Ant colony

Tour solve_aco(const TimeMatrix& T, const AcoParams& params, std::uint64_t seed) {
    require_nonempty(T);
    const int m = T.mp_count();
    const int n = m + 1;
    std::mt19937_64 rng(seed);

    const double nn_cost = std::max(tour_time(nearest_neighbor(T).order, T).seconds, 1e-9);
    const double tau0 = static_cast<double>(m) / nn_cost;
    std::vector<double> tau(static_cast<std::size_t>(n) * n, tau0);
    auto tau_at = [&](int i, int q) -> double& { return tau[static_cast<std::size_t>(i) * n + q]; };

    std::vector<int> best = nearest_neighbor(T).order;
    double best_cost = tour_time(best, T).seconds;
    std::vector<double> history;

    std::vector<int> tour_buf(m);
    std::vector<bool> visited(n);
    std::vector<double> weights(n);

    for (int iter = 0; iter < params.iterations; ++iter) {
        std::vector<std::vector<int>> ant_tours;
        std::vector<double> ant_costs;
        ant_tours.reserve(params.ants);
        for (int ant = 0; ant < params.ants; ++ant) {
            std::fill(visited.begin(), visited.end(), false);
            int current = 0;
            for (int step = 0; step < m; ++step) {
                double total = 0.0;
                for (int q = 1; q <= m; ++q) {
                    if (visited[q]) {
                        weights[q] = 0.0;
                        continue;
                    }
                    const double eta = 1.0 / std::max(T.at(current, q), 1e-9);
                    weights[q] = std::pow(std::max(tau_at(current, q), 1e-12), params.alpha) *
                                 std::pow(eta, params.beta);
                    total += weights[q];
                }
                int chosen = -1;
                if (total > 0.0) {
                    double u = uniform01(rng) * total;
                    for (int q = 1; q <= m; ++q) {
                        if (visited[q] || weights[q] == 0.0) continue;
                        u -= weights[q];
                        if (u <= 0.0) {
                            chosen = q;
                            break;
                        }
                    }
                }
                if (chosen < 0) {  // numeric corner: fall back to lowest unvisited
                    for (int q = 1; q <= m; ++q)
                        if (!visited[q]) {
                            chosen = q;
                            break;
                        }
                }
                visited[chosen] = true;
                tour_buf[step] = chosen;
                current = chosen;
            }
            const double c = tour_time(tour_buf, T).seconds;
            ant_tours.push_back(tour_buf);
            ant_costs.push_back(c);
            if (c < best_cost) {
                best_cost = c;
                best = tour_buf;
            }
        }
        for (double& t : tau) t *= (1.0 - params.evaporation);
        for (std::size_t a = 0; a < ant_tours.size(); ++a) {
            const double deposit = 1.0 / std::max(ant_costs[a], 1e-9);
            int prev = 0;
            for (int node : ant_tours[a]) {
                tau_at(prev, node) += deposit;
                prev = node;
            }
            tau_at(prev, 0) += deposit;
        }
        // Elitist reinforcement of the best-ever tour.
        {
            const double deposit = 1.0 / std::max(best_cost, 1e-9);
            int prev = 0;
            for (int node : best) {
                tau_at(prev, node) += deposit;
                prev = node;
            }
            tau_at(prev, 0) += deposit;
        }
        history.push_back(best_cost);
    }
    return finalize(std::move(best), T, SolverKind::AntColony, seed,
                    static_cast<long>(params.iterations) * params.ants, std::move(history));
}

}  // namespace cmmpath
