#ifndef DWT_NONSELECTION_HPP
#define DWT_NONSELECTION_HPP

#include <cmath>
#include <string>
#include <vector>

#include "dwt/errors.hpp"
#include "dwt/potential.hpp"
#include "dwt/series.hpp"
#include "dwt/spectrum.hpp"

namespace dwt::nonselection {

// Staged construction that keeps the Gibbs mass oscillating between the two
// wells along a sequence of inverse temperatures.  Stage k sets both energy
// families to the level eps_k on the index blocks (p_{k-1}, p_k] resp.
// (q_{k-1}, q_k], with the blocks interleaved so that the deep side alternates.
struct Stage {
    double p = 0.0;
    double q = 0.0;
    double eps = 0.0;
    double beta = 0.0;
};

struct StageParams {
    std::vector<Stage> stages;
    // Level of the first block past the last stage; the zero tail of the built
    // potential is a limit approximation bracketed at this level.
    double eps_next = 0.0;
};

struct BuildResult {
    ReducedPotential r;
    // Parameter sets taken straight from the asymptotic construction can
    // overflow/underflow doubles; they are accepted and flagged, not rejected.
    bool astronomical = false;
};

// Interleaving requirement on the block ends:
//   p0 < q0 < q1 < p1 < p2 < q2 < q3 < p3 < ...
inline void check_ordering(const StageParams& sp) {
    const auto& st = sp.stages;
    if (st.empty()) throw ValidationError("nonselection: empty schedule");
    std::vector<double> seq;
    for (size_t k = 0; k < st.size(); ++k) {
        if (k % 2 == 0) {
            seq.push_back(st[k].p);
            seq.push_back(st[k].q);
        } else {
            seq.push_back(st[k].q);
            seq.push_back(st[k].p);
        }
    }
    if (!(seq.front() >= 1.0)) throw ValidationError("nonselection: first block end must be >= 1");
    for (size_t i = 0; i + 1 < seq.size(); ++i)
        if (!(seq[i] < seq[i + 1]))
            throw ValidationError("nonselection: interleaving order violated at position " +
                                  std::to_string(i));
    for (size_t k = 0; k < st.size(); ++k) {
        if (!(st[k].eps > 0.0) && st[k].eps != 0.0)
            throw ValidationError("nonselection: negative stage level");
        if (k > 0 && !(st[k].eps <= st[k - 1].eps))
            throw ValidationError("nonselection: stage levels must decrease");
        if (k > 0 && !(st[k].beta >= st[k - 1].beta))
            throw ValidationError("nonselection: stage temperatures must cool");
    }
}

inline BuildResult build_example(const StageParams& sp) {
    check_ordering(sp);
    BuildResult out;
    bool astro = false;
    for (const auto& s : sp.stages) {
        if (!(s.p < 1.15e18 && s.q < 1.15e18)) astro = true;
        if (s.eps == 0.0 || !std::isfinite(s.beta)) astro = true;
    }
    PlateauSeq h0, h1;
    double prev_p = 0.0, prev_q = 0.0;
    const double cap = 1.15e18;  // symbolic acceptance: clamp what doubles can't index
    auto as_len = [&](double d) {
        if (!(d < cap)) {
            astro = true;
            d = cap;
        }
        return static_cast<long long>(d);
    };
    for (const auto& s : sp.stages) {
        h0.plateaus.push_back({as_len(s.p - prev_p), s.eps});
        h1.plateaus.push_back({as_len(s.q - prev_q), s.eps});
        prev_p = s.p;
        prev_q = s.q;
    }
    out.astronomical = astro;
    h0.tail = 0.0;
    h1.tail = 0.0;
    out.r.h[0] = h0;
    out.r.h[1] = h1;
    out.r.limit_approximation = true;
    out.r.eps_bracket = sp.eps_next;
    return out;
}

struct RuleThresholds {
    double decay_max = 1e-4;          // p_k^2 e^{-beta_k eps_k} and the q analogue
    double beta_eps_next_max = 0.1;   // beta_k * eps_{k+1}
    double ratio_min = 10.0;          // q/p on even stages, p/q on odd stages
};

struct RuleRow {
    int k = 0;
    double p2_decay = 0.0, q2_decay = 0.0;
    double beta_eps_next = 0.0;
    double ratio = 0.0;
    double partial_sum = 0.0;  // sum_{j<=k} (p_j - p_{j-1}) e^{-eps_j}, reported only
    bool pass = false;
};

struct RuleReport {
    std::vector<RuleRow> rows;
    bool pass = true;
};

inline RuleReport check_rules(const StageParams& sp, const RuleThresholds& th = {}) {
    check_ordering(sp);
    RuleReport rep;
    double prev_p = 0.0, psum = 0.0;
    for (size_t k = 0; k < sp.stages.size(); ++k) {
        const Stage& s = sp.stages[k];
        RuleRow row;
        row.k = static_cast<int>(k);
        row.p2_decay = std::exp(2.0 * std::log(s.p) - s.beta * s.eps);
        row.q2_decay = std::exp(2.0 * std::log(s.q) - s.beta * s.eps);
        double eps_next = (k + 1 < sp.stages.size()) ? sp.stages[k + 1].eps : sp.eps_next;
        row.beta_eps_next = s.beta * eps_next;
        row.ratio = (k % 2 == 0) ? s.q / s.p : s.p / s.q;
        psum += (s.p - prev_p) * std::exp(-s.eps);
        prev_p = s.p;
        row.partial_sum = psum;  // summability is an asymptotic statement; not asserted
        row.pass = row.p2_decay <= th.decay_max && row.q2_decay <= th.decay_max &&
                   row.beta_eps_next <= th.beta_eps_next_max && row.ratio >= th.ratio_min;
        rep.pass = rep.pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

// Structure constants of one stage evaluated at its own temperature:
//   alpha_s = lam^{B} (lam-1) sum_{n>B} lam^{-n} e^{-beta H_n}   in [e^{-beta eps'}, 1]
//   theta_s = sum_{n<=B} lam^{-n} e^{-beta H_n}                  <= B e^{-beta eps}
//   delta   = lam^{(p+q)/2} (lam-1)
// with B = p for side 0 and B = q for side 1.
struct Diagnostics {
    double alpha0 = 0.0, theta0 = 0.0;
    double alpha1 = 0.0, theta1 = 0.0;
    double delta = 0.0;
    double delta_cross_rel = 0.0;  // |delta^2 - (alpha0 + ...) (alpha1 + ...)| / delta^2
};

struct StageResult {
    int k = 0;
    double beta = 0.0;
    double mu0 = 0.0, mu1 = 0.0;
    double loglam1 = 0.0;
    Diagnostics diag;
};

inline Diagnostics stage_diagnostics(const ReducedPotential& r, const SpectralData& sd, double p,
                                     double q) {
    Diagnostics d;
    double L = sd.loglam();
    double t = sd.loglam1;
    long long pi = static_cast<long long>(p), qi = static_cast<long long>(q);
    double la0 = p * L + t + eval_F_from(r, Side::Zero, sd.beta, t, pi + 1).F.logv;
    double la1 = q * L + t + eval_F_from(r, Side::One, sd.beta, t, qi + 1).F.logv;
    double lt0 = eval_F_range(r, Side::Zero, sd.beta, t, 1, pi).F.logv;
    double lt1 = eval_F_range(r, Side::One, sd.beta, t, 1, qi).F.logv;
    d.alpha0 = std::exp(la0);
    d.alpha1 = std::exp(la1);
    d.theta0 = std::exp(lt0);
    d.theta1 = std::exp(lt1);
    double logdelta = 0.5 * (p + q) * L + t;
    d.delta = std::exp(logdelta);
    // consistency: delta^2 = (alpha0 + lam^p (lam-1) theta0)(alpha1 + ...)
    double lhs = 2.0 * logdelta;
    double rhs = log_add(la0, p * L + t + lt0) + log_add(la1, q * L + t + lt1);
    d.delta_cross_rel = std::abs(std::expm1(rhs - lhs));
    return d;
}

// Run the whole schedule: at each stage temperature solve the spectral
// problem for the full staged potential and record the well masses and the
// stage diagnostics.  Requires the bracketing level to be resolvable at every
// evaluated temperature.
inline std::vector<StageResult> oscillation_experiment(const StageParams& sp,
                                                       double bracket_tol = 0.1) {
    BuildResult built = build_example(sp);
    if (built.astronomical)
        throw NumericError("oscillation_experiment: schedule is astronomical; "
                           "only desk-scale schedules can be evaluated");
    for (size_t k = 0; k < sp.stages.size(); ++k) {
        double eps_next = (k + 1 < sp.stages.size()) ? sp.stages[k + 1].eps : sp.eps_next;
        if (sp.stages[k].beta * eps_next > bracket_tol)
            throw NumericError("oscillation_experiment: bracketing error beta*eps' = " +
                               std::to_string(sp.stages[k].beta * eps_next) +
                               " above tolerance at stage " + std::to_string(k));
    }
    std::vector<StageResult> out;
    for (size_t k = 0; k < sp.stages.size(); ++k) {
        const Stage& s = sp.stages[k];
        SpectralData sd = solve_lambda(built.r, s.beta);
        CylinderTables ct = eigenfunction_table(built.r, sd, 4);
        StageResult sr;
        sr.k = static_cast<int>(k);
        sr.beta = s.beta;
        sr.mu0 = gibbs_cylinder(built.r, sd, ct, "0");
        sr.mu1 = gibbs_cylinder(built.r, sd, ct, "1");
        sr.loglam1 = sd.loglam1;
        sr.diag = stage_diagnostics(built.r, sd, s.p, s.q);
        out.push_back(sr);
    }
    return out;
}

// A six-stage schedule small enough to evaluate directly while satisfying all
// rule thresholds with margin.  Levels and temperatures follow the recursion
//   beta_k = C_k / eps_k,   eps_{k+1} = 0.05 eps_k / C_k,
// with C_k = 4 log(max(p_k, q_k)) + 20, which pins
//   p_k^2 e^{-beta_k eps_k} <= e^{-20}  and  beta_k eps_{k+1} = 0.05.
inline StageParams desk_scale_default() {
    StageParams sp;
    const double p[6] = {2.0, 3.6e5, 7.2e5, 1.296e11, 2.592e11, 4.6656e16};
    const double q[6] = {600.0, 1200.0, 2.16e8, 4.32e8, 7.776e13, 1.5552e14};
    double eps = 1.0;
    for (int k = 0; k < 6; ++k) {
        double C = 4.0 * std::log(std::max(p[k], q[k])) + 20.0;
        Stage s;
        s.p = p[k];
        s.q = q[k];
        s.eps = eps;
        s.beta = C / eps;
        sp.stages.push_back(s);
        eps = 0.05 * eps / C;
    }
    sp.eps_next = eps;
    return sp;
}

}  // namespace dwt::nonselection

#endif
