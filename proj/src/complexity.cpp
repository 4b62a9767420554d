#include "qtime/complexity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "qtime/error.hpp"

namespace qtime {

namespace {

// Off-diagonal magnitude below which a state is treated as exactly diagonal.
// The Bures formula cannot resolve distances much below sqrt(machine epsilon),
// so diagonal states are answered directly.
constexpr double kDiagonalSnap = 1e-14;

// Largest dimension (three qubits) handled by the pruned search.
constexpr std::size_t kMaxSearchDimension = 8;

// Relative regularization of the concavity cuts.
constexpr double kCutSmoothing = 1e-14;

// Group label per sorted spectrum position; equal labels mark degenerate values.
std::vector<std::uint8_t> degeneracy_labels(const std::vector<double>& values) {
    std::vector<std::uint8_t> labels(values.size());
    std::uint8_t label = 0;
    double group_start = values.empty() ? 0.0 : values.front();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (group_start - values[i] > kDegeneracyTolerance) {
            ++label;
            group_start = values[i];
        }
        labels[i] = label;
    }
    return labels;
}

// Enumerates every distinct arrangement as a list of spectrum indices per
// diagonal position, in lexicographic order of the group labels.
template <typename Visit>
void for_each_arrangement(const std::vector<double>& values, Visit&& visit) {
    const std::vector<std::uint8_t> labels = degeneracy_labels(values);
    std::vector<std::size_t> group_first(static_cast<std::size_t>(labels.back()) + 1);
    for (std::size_t i = labels.size(); i-- > 0;) group_first[labels[i]] = i;

    std::vector<std::uint8_t> arrangement = labels;
    std::vector<std::uint8_t> index(values.size());
    std::vector<std::size_t> next(group_first.size());
    do {
        std::copy(group_first.begin(), group_first.end(), next.begin());
        for (std::size_t pos = 0; pos < arrangement.size(); ++pos) {
            index[pos] = static_cast<std::uint8_t>(next[arrangement[pos]]++);
        }
        visit(index);
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
}

bool is_diagonal(const ComplexMatrix& m) {
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c)
            if (r != c && std::abs(m(r, c)) > kDiagonalSnap) return false;
    return true;
}

using Pairing = std::vector<std::pair<std::size_t, std::size_t>>;

// Pairings used for the pinching bound: one per qubit (partners differ in that
// qubit's bit) plus a greedy matching on the largest coherences.
std::vector<Pairing> bound_pairings(const ComplexMatrix& rho) {
    const std::size_t n = rho.dim();
    std::vector<Pairing> out;
    for (std::size_t bit = 1; bit < n; bit <<= 1) {
        Pairing p;
        for (std::size_t i = 0; i < n; ++i)
            if ((i & bit) == 0) p.emplace_back(i, i | bit);
        out.push_back(std::move(p));
    }
    std::vector<std::pair<std::size_t, std::size_t>> all;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
    std::stable_sort(all.begin(), all.end(), [&](const auto& x, const auto& y) {
        return std::abs(rho(x.first, x.second)) > std::abs(rho(y.first, y.second));
    });
    std::vector<bool> used(n, false);
    Pairing greedy;
    for (const auto& [i, j] : all) {
        if (used[i] || used[j]) continue;
        used[i] = used[j] = true;
        greedy.emplace_back(i, j);
    }
    out.push_back(std::move(greedy));
    return out;
}

} // namespace

std::vector<DensityMatrix> diagonal_candidates(const Spectrum& spectrum) {
    const auto& values = spectrum.values();
    std::vector<DensityMatrix> out;
    std::vector<double> diag(values.size());
    for_each_arrangement(values, [&](const std::vector<std::uint8_t>& index) {
        for (std::size_t i = 0; i < index.size(); ++i) diag[i] = values[index[i]];
        out.push_back(DensityMatrix::diagonal(diag));
    });
    return out;
}

std::size_t candidate_count(const Spectrum& spectrum) {
    std::size_t count = 0;
    for_each_arrangement(spectrum.values(), [&](const std::vector<std::uint8_t>&) { ++count; });
    return count;
}

double root_fidelity_with_diagonal(const ComplexMatrix& rho, const std::vector<double>& diagonal) {
    const std::size_t n = rho.dim();
    if (diagonal.size() != n) throw Error("dimension-mismatch", "diagonal length differs from state dimension");
    std::vector<double> root(n);
    for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(std::max(diagonal[i], 0.0));
    ComplexMatrix m(n);
    for (std::size_t r = 0; r < n; ++r) {
        m(r, r) = rho(r, r).real() * diagonal[r];
        for (std::size_t c = r + 1; c < n; ++c) {
            const Complex z = rho(r, c) * (root[r] * root[c]);
            m(r, c) = z;
            m(c, r) = std::conj(z);
        }
    }
    double sum = 0.0;
    for (double mu : hermitian_eigenvalues(m)) sum += std::sqrt(std::max(mu, 0.0));
    return sum;
}

ComplexityWitness complexity_search(const DensityMatrix& state, std::span<const double> hint) {
    const ComplexMatrix& rho = state.matrix();
    const std::vector<double>& values = state.spectrum().values();
    const std::size_t n = rho.dim();

    ComplexityWitness out;
    if (is_diagonal(rho)) {
        out.diagonal.resize(n);
        for (std::size_t i = 0; i < n; ++i) out.diagonal[i] = rho(i, i).real();
        return out;
    }

    std::vector<double> diag(n);
    double best = -1.0;
    auto consider = [&](double f) {
        if (f > best) {
            best = f;
            out.diagonal = diag;
        }
    };

    if (n <= 4) {
        for_each_arrangement(values, [&](const std::vector<std::uint8_t>& index) {
            for (std::size_t i = 0; i < n; ++i) diag[i] = values[index[i]];
            ++out.exact_evaluations;
            consider(root_fidelity_with_diagonal(rho, diag));
        });
        out.complexity.value = bures_from_root_fidelity(best);
        return out;
    }

    if (n > kMaxSearchDimension) {
        throw Error("unsupported-dimension", "complexity search supports at most three qubits");
    }
    const EigenSystem es = hermitian_eig(HermitianOperator(rho));
    ComplexMatrix root_rho(n);
    std::vector<double> eigen_weight(n * n);  // [i * n + k] = lambda_k |v_k(i)|^2
    for (std::size_t k = 0; k < n; ++k) {
        const double lk = std::max(es.values[k], 0.0);
        const double sk = std::sqrt(lk);
        for (std::size_t i = 0; i < n; ++i) {
            eigen_weight[i * n + k] = lk * std::norm(es.vectors(i, k));
            for (std::size_t j = 0; j < n; ++j) root_rho(i, j) += es.vectors(i, k) * sk * std::conj(es.vectors(j, k));
        }
    }

    // Exact evaluation of f(d) = Tr sqrt(A diag(d) A), A = sqrt(rho). f is
    // concave in d, so when the inner matrix is well conditioned its gradient
    // gives a cut f(d') <= f(d) + g . (d' - d) valid for every ordering d'.
    // Cuts are stored as tables over (position, spectrum index).
    std::vector<std::vector<double>> cuts;
    std::vector<double> cut_offsets;
    std::vector<double> last_slope;
    std::vector<std::vector<double>> cut_slopes;
    auto evaluate = [&]() {
        ++out.exact_evaluations;
        ComplexMatrix m(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r; c < n; ++c) {
                Complex s{};
                for (std::size_t j = 0; j < n; ++j) s += root_rho(r, j) * diag[j] * root_rho(j, c);
                m(r, c) = s;
                m(c, r) = std::conj(s);
            }
        for (std::size_t r = 0; r < n; ++r) m(r, r) = m(r, r).real();
        const EigenSystem inner = hermitian_eig_tridiagonal(m);
        double f = 0.0;
        for (double mu : inner.values) f += std::sqrt(std::max(mu, 0.0));
        // The cut comes from the smoothed function Tr sqrt(M + eps I), which
        // is concave, dominates f and has a bounded gradient even when M is
        // nearly singular. Its offset uses the smoothed value.
        const double eps = kCutSmoothing * std::max(inner.values.front(), 1e-300);
        const ComplexMatrix aw = root_rho * inner.vectors;
        last_slope.assign(n, 0.0);
        double smoothed = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double mu = std::max(inner.values[k], 0.0) + eps;
            smoothed += std::sqrt(mu);
            const double w = 0.5 / std::sqrt(mu);
            for (std::size_t i = 0; i < n; ++i) last_slope[i] += w * std::norm(aw(i, k));
        }
        double dot = 0.0;
        std::vector<double> table(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            dot += last_slope[i] * diag[i];
            for (std::size_t v = 0; v < n; ++v) table[i * n + v] = last_slope[i] * values[v];
        }
        cuts.push_back(std::move(table));
        cut_slopes.push_back(last_slope);
        cut_offsets.push_back(smoothed - dot);
        consider(f);
        return f;
    };
    auto cut_bound = [&](std::size_t c, const std::uint8_t* index) {
        const double* table = cuts[c].data();
        double s = cut_offsets[c];
        for (std::size_t i = 0; i < n; ++i) s += table[i * n + index[i]];
        return s;
    };

    // Seeds: match the largest spectrum values to the largest populations
    // (and to the hint ordering when given), then climb along supergradients
    // from the better seed. An ordering that maximizes its own linearization
    // is already the global optimum.
    std::vector<std::size_t> rank(n);
    auto place_by = [&](const auto& key) {
        std::iota(rank.begin(), rank.end(), 0);
        std::stable_sort(rank.begin(), rank.end(), [&](std::size_t x, std::size_t y) { return key(x) > key(y); });
        std::vector<double> placed(n);
        for (std::size_t r = 0; r < n; ++r) placed[rank[r]] = values[r];
        return placed;
    };
    std::vector<double> best_slope;
    auto evaluate_seed = [&](std::vector<double> candidate) {
        diag = std::move(candidate);
        const double before = best;
        const double f = evaluate();
        if (f > before) best_slope = last_slope;
        return f;
    };
    evaluate_seed(place_by([&](std::size_t i) { return rho(i, i).real(); }));
    if (hint.size() == n) {
        std::vector<double> hinted = place_by([&](std::size_t i) { return hint[i]; });
        if (hinted != out.diagonal) evaluate_seed(std::move(hinted));
    }
    double current = best;
    for (int step = 0; step < 16 && !best_slope.empty(); ++step) {
        const std::vector<double> slope = best_slope;
        std::vector<double> next = place_by([&](std::size_t i) { return slope[i]; });
        if (next == out.diagonal) break;
        const double f = evaluate_seed(std::move(next));
        if (!(f > current)) break;
        current = f;
    }
    const std::size_t seed_cuts = cuts.size();

    // Pinching onto 2x2 blocks fixes every diagonal state, so the pinched
    // fidelity bounds the true one. bound_terms[p][k][a * n + b] is block k of
    // pairing p holding spectrum values a and b.
    const std::vector<Pairing> pairings = bound_pairings(rho);
    std::vector<std::vector<std::vector<double>>> bound_terms(pairings.size());
    for (std::size_t p = 0; p < pairings.size(); ++p) {
        for (const auto& [i, j] : pairings[p]) {
            const double rii = rho(i, i).real();
            const double rjj = rho(j, j).real();
            const double gap = std::sqrt(std::max(rii * rjj - std::norm(rho(i, j)), 0.0));
            std::vector<double> table(n * n);
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b)
                    table[a * n + b] = std::sqrt(std::max(
                        values[a] * rii + values[b] * rjj + 2.0 * std::sqrt(values[a] * values[b]) * gap, 0.0));
            bound_terms[p].push_back(std::move(table));
        }
    }

    // Surviving orderings go into a lazy max-heap: an entry is only tightened
    // against cuts added since it was last inspected, and only at the top.
    struct Entry {
        double bound;
        std::uint32_t slot;
        std::uint32_t cuts_seen;
        bool operator<(const Entry& o) const { return bound < o.bound || (bound == o.bound && slot > o.slot); }
    };
    std::vector<std::uint8_t> open_index;
    std::vector<Entry> heap;

    // Depth-first enumeration over positions (most populated first) keeps
    // prefix sums of every seed cut and eigen column. A subtree is dropped
    // when the best completion of a bound, found by the rearrangement
    // inequality, cannot beat the incumbent.
    constexpr std::size_t kMax = kMaxSearchDimension;
    const std::vector<std::uint8_t> labels = degeneracy_labels(values);
    std::array<std::size_t, kMax> order{};
    std::iota(order.begin(), order.begin() + n, 0);
    std::stable_sort(order.begin(), order.begin() + n,
                     [&](std::size_t x, std::size_t y) { return rho(x, x).real() > rho(y, y).real(); });
    std::array<std::size_t, kMax> depth_of{};
    for (std::size_t d = 0; d < n; ++d) depth_of[order[d]] = d;

    // tail_positions[(c * n + depth) * n + j]: the positions still open at
    // `depth`, sorted by decreasing weight of bound c. Bounds 0..seed_cuts-1
    // are the cuts, the rest the eigen columns.
    const std::size_t n_bounds = seed_cuts + n;
    std::vector<double> weight(n_bounds * n);
    for (std::size_t c = 0; c < seed_cuts; ++c)
        for (std::size_t i = 0; i < n; ++i) weight[c * n + i] = cut_slopes[c][i];
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) weight[(seed_cuts + k) * n + i] = eigen_weight[i * n + k] ;
    std::vector<std::uint8_t> tail_positions(n_bounds * n * n);
    for (std::size_t c = 0; c < n_bounds; ++c) {
        std::array<std::size_t, kMax> pos{};
        std::iota(pos.begin(), pos.begin() + n, 0);
        std::stable_sort(pos.begin(), pos.begin() + n,
                         [&](std::size_t x, std::size_t y) { return weight[c * n + x] > weight[c * n + y]; });
        for (std::size_t depth = 0; depth < n; ++depth) {
            std::size_t j = 0;
            for (std::size_t t = 0; t < n; ++t)
                if (depth_of[pos[t]] >= depth) tail_positions[(c * n + depth) * n + j++] = static_cast<std::uint8_t>(pos[t]);
        }
    }

    std::array<std::uint8_t, kMax> index{};
    std::vector<double> sums((n + 1) * n_bounds, 0.0);  // [depth * n_bounds + bound]
    for (std::size_t c = 0; c < seed_cuts; ++c) sums[c] = cut_offsets[c];

    // Largest sum of weight * value over the open positions.
    auto best_completion = [&](std::size_t c, std::size_t depth, unsigned used) {
        const std::uint8_t* tail = &tail_positions[(c * n + depth) * n];
        const double* w = &weight[c * n];
        double s = 0.0;
        std::size_t v = 0;
        for (std::size_t j = 0; j < n - depth; ++j) {
            while (used & (1U << v)) ++v;
            s += w[tail[j]] * values[v++];
        }
        return s;
    };

    auto leaf = [&]() {
        const double* full = &sums[n * n_bounds];
        double bound = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < seed_cuts; ++c) bound = std::min(bound, full[c]);
        if (bound <= best) return;
        double eigen_bound = 0.0;
        for (std::size_t k = 0; k < n; ++k) eigen_bound += std::sqrt(std::max(full[seed_cuts + k], 0.0));
        bound = std::min(bound, eigen_bound);
        if (bound <= best) return;
        for (std::size_t p = 0; p < pairings.size(); ++p) {
            double s = 0.0;
            for (std::size_t k = 0; k < pairings[p].size(); ++k) {
                const auto& [i, j] = pairings[p][k];
                s += bound_terms[p][k][index[i] * n + index[j]];
            }
            bound = std::min(bound, s);
            if (bound <= best) return;
        }
        heap.push_back({bound, static_cast<std::uint32_t>(open_index.size() / n),
                        static_cast<std::uint32_t>(seed_cuts)});
        open_index.insert(open_index.end(), index.begin(), index.begin() + n);
    };

    auto descend = [&](auto& self, std::size_t depth, unsigned used) -> void {
        if (depth == n) {
            leaf();
            return;
        }
        const double* here = &sums[depth * n_bounds];
        if (depth > 0 && depth + 1 < n) {
            for (std::size_t c = 0; c < seed_cuts; ++c)
                if (here[c] + best_completion(c, depth, used) <= best) return;
            if (depth + 3 < n) {
                double eigen_bound = 0.0;
                for (std::size_t k = 0; k < n; ++k)
                    eigen_bound += std::sqrt(std::max(here[seed_cuts + k] + best_completion(seed_cuts + k, depth, used), 0.0));
                if (eigen_bound <= best) return;
            }
        }
        const std::size_t pos = order[depth];
        double* next = &sums[(depth + 1) * n_bounds];
        for (std::size_t v = 0; v < n; ++v) {
            if ((used >> v) & 1U) continue;
            if (v > 0 && labels[v] == labels[v - 1] && !((used >> (v - 1)) & 1U)) continue;
            index[pos] = static_cast<std::uint8_t>(v);
            for (std::size_t c = 0; c < n_bounds; ++c) next[c] = here[c] + weight[c * n + pos] * values[v];
            self(self, depth + 1, used | (1U << v));
        }
    };
    descend(descend, 0, 0U);
    std::make_heap(heap.begin(), heap.end());

    while (!heap.empty() && heap.front().bound > best) {
        std::pop_heap(heap.begin(), heap.end());
        Entry e = heap.back();
        heap.pop_back();
        const std::uint8_t* index = open_index.data() + static_cast<std::size_t>(e.slot) * n;
        if (e.cuts_seen < cuts.size()) {
            // Refine only until the entry is no longer the top candidate.
            const double next_top = heap.empty() ? best : std::max(best, heap.front().bound);
            std::size_t c = e.cuts_seen;
            while (c < cuts.size() && e.bound >= next_top) e.bound = std::min(e.bound, cut_bound(c++, index));
            e.cuts_seen = static_cast<std::uint32_t>(c);
            if (e.bound > best) {
                heap.push_back(e);
                std::push_heap(heap.begin(), heap.end());
            }
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) diag[i] = values[index[i]];
        evaluate();
    }

    out.complexity.value = bures_from_root_fidelity(best);
    return out;
}

ComplexityValue state_complexity(const DensityMatrix& rho) {
    return complexity_search(rho).complexity;
}

bool preserves_complexity(const ComplexMatrix& u) {
    for (std::size_t r = 0; r < u.dim(); ++r) {
        if (std::abs(std::abs(u(r, r)) - 1.0) > 1e-12) return false;
        for (std::size_t c = 0; c < u.dim(); ++c)
            if (r != c && u(r, c) != Complex{}) return false;
    }
    return true;
}

PaceValue pace(const DensityMatrix& rho0, const HermitianOperator& h, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error("domain", "time step must be positive");
    if (h.dim() != rho0.dim()) throw Error("dimension-mismatch", "Hamiltonian and state dimensions differ");
    const DensityMatrix evolved = apply_operator(rho0, unitary_evolution(h, dt), false);
    const double c0 = state_complexity(rho0).value;
    const double c1 = state_complexity(evolved).value;
    return {(c1 - c0) / dt, dt};
}

std::vector<TrajectoryPoint> complexity_trajectory(const DensityMatrix& rho0, const HermitianOperator& h,
                                                   const std::vector<double>& taus) {
    if (h.dim() != rho0.dim()) throw Error("dimension-mismatch", "Hamiltonian and state dimensions differ");
    for (std::size_t i = 0; i < taus.size(); ++i) {
        if (!std::isfinite(taus[i]) || (i > 0 && taus[i] < taus[i - 1])) {
            throw Error("invalid-grid", "tau grid must be finite and ascending");
        }
    }
    std::vector<TrajectoryPoint> out;
    out.reserve(taus.size());
    for (double tau : taus) {
        const DensityMatrix rho = tau == 0.0 ? rho0 : apply_operator(rho0, unitary_evolution(h, tau), false);
        out.push_back({tau, state_complexity(rho)});
    }
    return out;
}

} // namespace qtime
