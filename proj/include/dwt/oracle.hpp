#ifndef DWT_ORACLE_HPP
#define DWT_ORACLE_HPP

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dwt/errors.hpp"
#include "dwt/potential.hpp"

// Independent cross-checks for the analytic machinery.  Everything here works
// on a finite-range truncation of the potential and uses generic linear
// algebra on the 2^m transfer matrix -- no fundamental series, no
// characteristic equation.  Computations run in __float128: at low
// temperature lam - 1 sits far below double precision's representable
// neighborhood of 1, and the spectral gap of the metastable pair is of the
// same tiny order.

namespace dwt::oracle {

using quad = __float128;

// Truncation of a reduced potential to range m+1: crossing energies freeze at
// their limits for run lengths >= m-1, so the energy depends on exactly m+1
// coordinates.
struct TruncatedPotential {
    ReducedPotential r;
    int depth = 0;  // m

    double energy(Side s, long long n) const {
        if (n >= depth - 1) return r.hinf(s);
        return r.h[idx(s)].value(n);
    }

    // Energy of the (m+1)-letter word u . b: 0 when the word starts with a
    // doubled letter, otherwise the crossing energy of the leading run.
    double word_energy(const std::vector<uint8_t>& w) const {
        if (w[0] == w[1]) return 0.0;
        size_t j = 1;
        while (1 + j < w.size() && w[1 + j] == w[1]) ++j;
        Side s = (w[0] == 0) ? Side::Zero : Side::One;
        if (1 + j < w.size()) return energy(s, static_cast<long long>(j));
        return r.hinf(s);  // run not closed within the word: frozen limit value
    }
};

inline TruncatedPotential truncate(const ReducedPotential& r, int depth) {
    if (depth < 2 || depth > 14)
        throw ValidationError("truncate: depth must lie in [2, 14]");
    return TruncatedPotential{r, depth};
}

// The reduced potential whose energies are exactly the truncated ones, for
// feeding the analytic pipeline with the same finite-range data.
inline ReducedPotential truncated_as_reduced(const TruncatedPotential& t) {
    ReducedPotential out;
    for (int s = 0; s < 2; ++s) {
        std::vector<double> head;
        for (long long n = 1; n <= t.depth - 2; ++n)
            head.push_back(t.energy(static_cast<Side>(s), n));
        out.h[s] = PlateauSeq::from_values(head, t.r.hinf(static_cast<Side>(s)));
    }
    out.limit_approximation = t.r.limit_approximation;
    out.eps_bracket = t.r.eps_bracket;
    return out;
}

namespace detail {

inline double to_double(quad x) { return static_cast<double>(x); }

inline quad qabs(quad x) { return x < 0 ? -x : x; }

// Dense LU with partial pivoting over __float128; solves for A and A^T from
// the same factorization.
struct QuadLU {
    int n = 0;
    std::vector<quad> a;  // row-major, overwritten with L\U
    std::vector<int> piv;

    void factor(std::vector<quad> m, int dim) {
        n = dim;
        a = std::move(m);
        piv.resize(static_cast<size_t>(n));
        for (int k = 0; k < n; ++k) {
            int p = k;
            quad best = qabs(a[static_cast<size_t>(k) * n + k]);
            for (int i = k + 1; i < n; ++i) {
                quad v = qabs(a[static_cast<size_t>(i) * n + k]);
                if (v > best) {
                    best = v;
                    p = i;
                }
            }
            piv[static_cast<size_t>(k)] = p;
            if (p != k)
                for (int j = 0; j < n; ++j)
                    std::swap(a[static_cast<size_t>(k) * n + j], a[static_cast<size_t>(p) * n + j]);
            quad d = a[static_cast<size_t>(k) * n + k];
            if (d == 0) d = a[static_cast<size_t>(k) * n + k] = static_cast<quad>(1e-300);  // keep iteration alive
            for (int i = k + 1; i < n; ++i) {
                quad f = a[static_cast<size_t>(i) * n + k] / d;
                a[static_cast<size_t>(i) * n + k] = f;
                if (f != 0)
                    for (int j = k + 1; j < n; ++j)
                        a[static_cast<size_t>(i) * n + j] -= f * a[static_cast<size_t>(k) * n + j];
            }
        }
    }

    // Solve A x = b in place.
    void solve(std::vector<quad>& b) const {
        for (int k = 0; k < n; ++k) {
            std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(piv[static_cast<size_t>(k)])]);
            // apply L stored below the diagonal lazily below
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < i; ++j)
                b[static_cast<size_t>(i)] -= a[static_cast<size_t>(i) * n + j] * b[static_cast<size_t>(j)];
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j)
                b[static_cast<size_t>(i)] -= a[static_cast<size_t>(i) * n + j] * b[static_cast<size_t>(j)];
            b[static_cast<size_t>(i)] /= a[static_cast<size_t>(i) * n + i];
        }
    }

    // Solve A^T x = b in place:  A = P^T L U  =>  A^T = U^T L^T P.
    void solve_transposed(std::vector<quad>& b) const {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j)
                b[static_cast<size_t>(i)] -= a[static_cast<size_t>(j) * n + i] * b[static_cast<size_t>(j)];
            b[static_cast<size_t>(i)] /= a[static_cast<size_t>(i) * n + i];
        }
        for (int i = n - 1; i >= 0; --i)
            for (int j = i + 1; j < n; ++j)
                b[static_cast<size_t>(i)] -= a[static_cast<size_t>(j) * n + i] * b[static_cast<size_t>(j)];
        for (int k = n - 1; k >= 0; --k)
            std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(piv[static_cast<size_t>(k)])]);
    }
};

inline void matvec(const std::vector<quad>& m, int n, const std::vector<quad>& x,
                   std::vector<quad>& y, bool transposed = false) {
    y.assign(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        quad acc = 0;
        if (!transposed) {
            const quad* row = &m[static_cast<size_t>(i) * n];
            for (int j = 0; j < n; ++j) acc += row[j] * x[static_cast<size_t>(j)];
        } else {
            for (int j = 0; j < n; ++j) acc += m[static_cast<size_t>(j) * n + i] * x[static_cast<size_t>(j)];
        }
        y[static_cast<size_t>(i)] = acc;
    }
}

inline quad dot(const std::vector<quad>& x, const std::vector<quad>& y) {
    quad s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline quad norm_inf(const std::vector<quad>& x) {
    quad m = 0;
    for (quad v : x) m = std::max(m, qabs(v));
    return m;
}

inline void scale_to_unit(std::vector<quad>& x) {
    quad m = norm_inf(x);
    if (m == 0) throw NumericError("oracle: zero vector in iteration");
    for (quad& v : x) v /= m;
}

}  // namespace detail

// Perron data of the depth-m transfer matrix.
struct TransferMatrixData {
    int depth = 0;
    double beta = 0.0;
    double loglam1 = 0.0;   // log(lam - 1), quad-accurate before the cast
    double lam1 = 0.0;      // lam - 1 (may underflow to 0 in double; loglam1 never does)
    int power_iterations = 0;
    int refine_iterations = 0;
    double residual = 0.0;  // ||A r - (lam-1) r||_inf / ||r||_inf
    std::vector<double> mu_states;  // Gibbs mass of every m-cylinder, lexicographic
};

// Gibbs mass of a cylinder word (|word| <= depth) by summing state masses.
inline double oracle_gibbs(const TransferMatrixData& td, const std::string& word) {
    if (word.empty() || static_cast<int>(word.size()) > td.depth)
        throw ValidationError("oracle_gibbs: word length must be in [1, depth]");
    int m = td.depth;
    int k = static_cast<int>(word.size());
    uint32_t prefix = 0;
    for (char c : word) {
        if (c != '0' && c != '1') throw ValidationError("oracle_gibbs: bad symbol");
        prefix = (prefix << 1) | static_cast<uint32_t>(c - '0');
    }
    double s = 0.0;
    uint32_t lo = prefix << (m - k);
    uint32_t hi = lo + (1u << (m - k));
    for (uint32_t u = lo; u < hi; ++u) s += td.mu_states[u];
    return s;
}

// Full Perron solve of the 2^m transfer matrix.  Pipeline:
//   1. form A = M - I exactly (the only entries near 1 are exactly 1);
//   2. cheap power iteration on M for a Rayleigh shift candidate;
//   3. two-column inverse subspace iteration on (A - shift I) to split the
//      metastable eigenpair, taking the branch with a positive Ritz vector;
//   4. the same factorization solves the transposed problem for the left
//      vector; state masses are l .* r normalized.
inline TransferMatrixData transfer_matrix_gibbs(const TruncatedPotential& t, double beta) {
    using namespace detail;
    const int m = t.depth;
    const int n = 1 << m;
    TransferMatrixData td;
    td.depth = m;
    td.beta = beta;

    // A[u][v] = e^{-beta H(u.b)} - delta_{uv} for v = (u without its first
    // letter) followed by b.
    std::vector<quad> A(static_cast<size_t>(n) * n, 0);
    std::vector<uint8_t> w(static_cast<size_t>(m) + 1);
    for (int u = 0; u < n; ++u) {
        for (int i = 0; i < m; ++i) w[static_cast<size_t>(i)] = (u >> (m - 1 - i)) & 1;
        int shifted = (u << 1) & (n - 1);
        for (int b = 0; b < 2; ++b) {
            w[static_cast<size_t>(m)] = static_cast<uint8_t>(b);
            int v = shifted | b;
            A[static_cast<size_t>(u) * n + v] += expq(static_cast<quad>(-beta) *
                                                      static_cast<quad>(t.word_energy(w)));
        }
        A[static_cast<size_t>(u) * n + u] -= 1;
    }

    // Power iteration on M = A + I; either converges (healthy gap) or stalls
    // on the metastable pair, in which case its Rayleigh quotient still lands
    // between the paired eigenvalues, which is all the shift needs.
    std::vector<quad> v(static_cast<size_t>(n), 1), av;
    quad shift = 0;
    const int kPowerMax = 100;
    for (td.power_iterations = 0; td.power_iterations < kPowerMax; ++td.power_iterations) {
        matvec(A, n, v, av);
        quad rq = dot(v, av) / dot(v, v);  // Rayleigh quotient of A, i.e. lam-1
        for (int i = 0; i < n; ++i) av[static_cast<size_t>(i)] += v[static_cast<size_t>(i)];
        scale_to_unit(av);
        quad diff = 0;
        for (int i = 0; i < n; ++i) diff = std::max(diff, qabs(av[static_cast<size_t>(i)] - v[static_cast<size_t>(i)]));
        v = av;
        shift = rq;
        if (diff < static_cast<quad>(1e-20)) break;
    }

    auto positivity = [&](std::vector<quad>& vec) {
        // Perron vectors are strictly positive after sign normalization.
        quad pos = 0, neg = 0;
        for (quad x : vec) {
            if (x > 0) pos += x;
            if (x < 0) neg -= x;
        }
        if (neg > pos)
            for (quad& x : vec) x = -x;
        quad mn = vec[0], mx = vec[0];
        for (quad x : vec) {
            mn = std::min(mn, x);
            mx = std::max(mx, x);
        }
        return mn > 0 && mx > 0;
    };

    // Two-column inverse subspace iteration at a shift; returns the Perron
    // Ritz value and vector from the 2-dimensional Ritz problem.
    std::vector<quad> x1 = v;  // start near the Perron direction
    std::vector<quad> x2(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        x2[static_cast<size_t>(i)] = (__builtin_popcount(static_cast<unsigned>(i)) & 1) ? -1 : 1;
    QuadLU lu;
    std::vector<quad> r;
    quad s_perron = shift;
    auto subspace_pass = [&](quad sh, int iters) {
        {
            std::vector<quad> As = A;
            for (int i = 0; i < n; ++i) As[static_cast<size_t>(i) * n + i] -= sh;
            lu.factor(std::move(As), n);
        }
        for (int it = 0; it < iters; ++it) {
            lu.solve(x1);
            lu.solve(x2);
            scale_to_unit(x1);
            quad c = dot(x1, x2) / dot(x1, x1);
            for (int i = 0; i < n; ++i) x2[static_cast<size_t>(i)] -= c * x1[static_cast<size_t>(i)];
            scale_to_unit(x2);
            ++td.refine_iterations;
        }
        // Ritz values of A on span{x1, x2}: 2x2 problem C y = s y, C = G^{-1} B.
        std::vector<quad> a1, a2;
        matvec(A, n, x1, a1);
        matvec(A, n, x2, a2);
        quad g11 = dot(x1, x1), g12 = dot(x1, x2), g22 = dot(x2, x2);
        quad b11 = dot(x1, a1), b12 = dot(x1, a2), b21 = dot(x2, a1), b22 = dot(x2, a2);
        quad det = g11 * g22 - g12 * g12;
        if (det == 0) throw NumericError("oracle: degenerate iteration subspace");
        quad c11 = (g22 * b11 - g12 * b21) / det;
        quad c12 = (g22 * b12 - g12 * b22) / det;
        quad c21 = (g11 * b21 - g12 * b11) / det;
        quad c22 = (g11 * b22 - g12 * b12) / det;
        quad tr = c11 + c22, dt = c11 * c22 - c12 * c21;
        quad disc = tr * tr - 4 * dt;
        if (disc < 0) {
            // The second column drifted onto a complex pair.  The first column
            // alone already carries a real direction near the Perron root, so
            // fall back to its Rayleigh quotient.
            r = x1;
            std::vector<quad> ar1;
            matvec(A, n, r, ar1);
            s_perron = dot(r, ar1) / dot(r, r);
            return;
        }
        quad sq = sqrtq(disc);
        auto ritz_vector = [&](quad s, std::vector<quad>& out) {
            quad y1, y2;
            if (qabs(c12) > qabs(c21)) {
                y1 = c12;
                y2 = s - c11;
            } else if (c21 != 0) {
                y1 = s - c22;
                y2 = c21;
            } else {
                y1 = (qabs(s - c11) < qabs(s - c22)) ? 1 : 0;
                y2 = 1 - y1;
            }
            out.assign(static_cast<size_t>(n), 0);
            for (int i = 0; i < n; ++i)
                out[static_cast<size_t>(i)] =
                    y1 * x1[static_cast<size_t>(i)] + y2 * x2[static_cast<size_t>(i)];
            scale_to_unit(out);
        };
        // B was formed with A itself, so the Ritz values approximate lam-1
        // directly; the shift only enters through the factored operator.  The
        // Perron root dominates every real part, so it is the larger branch.
        quad s_hi = (tr + sq) / 2;
        s_perron = s_hi;
        ritz_vector(s_hi, r);
    };
    subspace_pass(shift, 12);
    // Rayleigh-quotient iteration seeded at the Ritz data: refactor just
    // beside the current estimate (not exactly on it, to keep the
    // factorization regular), solve once, update the quotient.  Each step
    // squares the distance to the root, so a handful of steps reach quad
    // roundoff even when the metastable pair is only ~e^{-beta gamma} apart,
    // and positivity becomes a meaningful acceptance check.
    {
        std::vector<quad> ar1;
        for (int it = 0; it < 8; ++it) {
            quad nudge = s_perron + qabs(s_perron) * static_cast<quad>(1e-20) +
                         static_cast<quad>(1e-4000L);
            std::vector<quad> As = A;
            for (int i = 0; i < n; ++i) As[static_cast<size_t>(i) * n + i] -= nudge;
            lu.factor(std::move(As), n);
            lu.solve(r);
            scale_to_unit(r);
            ++td.refine_iterations;
            matvec(A, n, r, ar1);
            quad s_new = dot(r, ar1) / dot(r, r);
            bool settled = qabs(s_new - s_perron) <= qabs(s_new) * static_cast<quad>(1e-30);
            s_perron = s_new;
            if (settled) break;
        }
    }
    if (!positivity(r)) throw NumericError("oracle: right Perron vector not positive");

    // Residual check against A directly.
    std::vector<quad> ar;
    matvec(A, n, r, ar);
    quad resid = 0;
    for (int i = 0; i < n; ++i)
        resid = std::max(resid, qabs(ar[static_cast<size_t>(i)] - s_perron * r[static_cast<size_t>(i)]));
    td.residual = to_double(resid / norm_inf(r));
    if (!(td.residual < 1e-22))
        throw NumericError("oracle: Perron residual too large: " + std::to_string(td.residual));

    // Left vector from the transposed solves at the same shift.
    std::vector<quad> l(static_cast<size_t>(n), 1);
    for (int it = 0; it < 6; ++it) {
        lu.solve_transposed(l);
        scale_to_unit(l);
    }
    if (!positivity(l)) throw NumericError("oracle: left Perron vector not positive");
    std::vector<quad> al;
    matvec(A, n, l, al, /*transposed=*/true);
    quad lres = 0;
    for (int i = 0; i < n; ++i)
        lres = std::max(lres, qabs(al[static_cast<size_t>(i)] - s_perron * l[static_cast<size_t>(i)]));
    if (!(to_double(lres / norm_inf(l)) < 1e-22))
        throw NumericError("oracle: left Perron residual too large");

    if (!(s_perron > 0)) throw NumericError("oracle: lam - 1 not positive");
    td.lam1 = to_double(s_perron);
    td.loglam1 = to_double(logq(s_perron));

    // State masses of the Gibbs measure: l .* r normalized.
    std::vector<quad> pi(static_cast<size_t>(n));
    quad tot = 0;
    for (int i = 0; i < n; ++i) {
        pi[static_cast<size_t>(i)] = l[static_cast<size_t>(i)] * r[static_cast<size_t>(i)];
        tot += pi[static_cast<size_t>(i)];
    }
    td.mu_states.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) td.mu_states[static_cast<size_t>(i)] = to_double(pi[static_cast<size_t>(i)] / tot);
    return td;
}

// ------------------------------------------------------------------
// Brute-force Peierls barrier by enumerating excursion block patterns.
// A journey from s^inf across the wall into the class [sbar^n s] is a word
//   s^{m_1} sbar^{v_1} s^{m_2} sbar^{v_2} ... sbar^{v_r}   with v_r >= n,
// whose cost is the sum of the crossing energies of every sbar-run plus every
// interior s-run.  Runs on the home side before the first crossing are free.

struct BruteBarrierResult {
    double value = 0.0;     // minimal enumerated cost
    double bound = 0.0;     // unenumerated patterns cannot beat value - bound
    long long patterns = 0;
};

inline BruteBarrierResult brute_force_barrier(const TruncatedPotential& t, Side from,
                                              Side target_side, long long target_run,
                                              int max_blocks = 3, long long max_block_len = 32,
                                              long long budget = 1000000) {
    if (target_run < 1) throw ValidationError("brute_force_barrier: run length >= 1 required");
    BruteBarrierResult res;
    if (from == target_side) {
        // reaching a class on the home side costs nothing (stay in the well
        // until the class pattern starts)
        res.patterns = 1;
        return res;
    }
    Side cross = from;          // sbar-runs seen from `from` cost H^{from}
    Side back = other(from);    // interior home runs cost H^{other}
    double best = std::numeric_limits<double>::infinity();
    long long count = 0;

    // cost of all r-block patterns, choosing each run length in [1, L]
    std::function<void(int, double)> dfs = [&](int blocks_left, double cost) {
        if (++count > budget)
            throw NumericError("brute_force_barrier: enumeration budget exceeded");
        if (blocks_left == 0) return;
        for (long long vlen = 1; vlen <= max_block_len; ++vlen) {
            // close here: the last crossing run must cover the target length
            best = std::min(best, cost + t.energy(cross, std::max(vlen, target_run)));
            if (blocks_left > 1)
                for (long long mlen = 1; mlen <= max_block_len; ++mlen)
                    dfs(blocks_left - 1, cost + t.energy(cross, vlen) + t.energy(back, mlen));
        }
    };
    dfs(max_blocks, 0.0);
    res.value = best;
    res.patterns = count;
    // Every admissible pattern costs at least the cheapest single crossing of
    // length >= target_run (all energies are nonnegative), and the frozen
    // energies take finitely many values, so that floor is computable exactly.
    double floor_cost = t.r.hinf(cross);
    for (long long k = target_run; k <= std::max<long long>(t.depth, target_run + 1); ++k)
        floor_cost = std::min(floor_cost, t.energy(cross, k));
    res.bound = std::max(0.0, res.value - floor_cost);
    return res;
}

// Cheapest excursion that returns to the home fixed point: patterns
// s^{m_1} sbar^{v_1} ... sbar^{v_r} s^inf; the final return through the wall
// costs the limit energy of the home side's crossing family.
inline BruteBarrierResult brute_force_return(const TruncatedPotential& t, Side home,
                                             int max_blocks = 3, long long max_block_len = 32,
                                             long long budget = 1000000) {
    Side cross = home;
    Side back = other(home);
    double best = std::numeric_limits<double>::infinity();
    long long count = 0;
    std::function<void(int, double)> dfs = [&](int blocks_left, double cost) {
        if (++count > budget)
            throw NumericError("brute_force_return: enumeration budget exceeded");
        if (blocks_left == 0) return;
        for (long long vlen = 1; vlen <= max_block_len; ++vlen) {
            double c = cost + t.energy(cross, vlen);
            best = std::min(best, c + t.r.hinf(back));  // close the excursion
            if (blocks_left > 1)
                for (long long mlen = 1; mlen <= max_block_len; ++mlen)
                    dfs(blocks_left - 1, c + t.energy(back, mlen));
        }
    };
    dfs(max_blocks, 0.0);
    BruteBarrierResult res;
    res.value = best;
    res.patterns = count;
    double floor_cost = t.r.hinf(cross);
    for (long long k = 1; k <= t.depth; ++k) floor_cost = std::min(floor_cost, t.energy(cross, k));
    res.bound = std::max(0.0, res.value - (floor_cost + t.r.hinf(back)));
    return res;
}

}  // namespace dwt::oracle

#endif
