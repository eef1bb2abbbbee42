#ifndef DWT_SPECTRUM_HPP
#define DWT_SPECTRUM_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "dwt/errors.hpp"
#include "dwt/log_value.hpp"
#include "dwt/potential.hpp"
#include "dwt/series.hpp"

namespace dwt {

inline constexpr int kDefaultNmax = 64;

// Perron data of the transfer operator at inverse temperature beta.  The
// eigenvalue is carried as t = log(lam - 1); lam itself lives in (1, 2].
struct SpectralData {
    double beta = 0.0;
    double loglam1 = 0.0;          // log(lam - 1)
    double residual = 0.0;         // |log F0 + log F1| at the root
    double logF[2] = {0, 0};       // fundamental series at the root
    double logFt[2] = {0, 0};
    int iterations = 0;
    bool converged = false;

    double loglam() const { return softplus(loglam1); }
    double lam() const { return 1.0 + std::exp(loglam1); }
};

// Root of F0(lam) F1(lam) = 1 by bisection in t = log(lam-1) on the a-priori
// bracket [ -beta (max H0 + max H1)/2 - 1, 0 ], then Newton polish using
// d(log F)/dt = -(lam-1)/lam * Ft/F.
inline SpectralData solve_lambda(const ReducedPotential& r, double beta, double tol = 1e-13,
                                 int max_iter = 500) {
    validate_reduced(r).require_ok("solve_lambda: invalid reduced potential");
    if (!(beta > 0.0)) throw ValidationError("solve_lambda: beta must be positive");
    SpectralData sd;
    sd.beta = beta;

    auto g = [&](double t, SeriesResult* s0 = nullptr, SeriesResult* s1 = nullptr) {
        SeriesResult a = eval_F(r, Side::Zero, beta, t);
        SeriesResult b = eval_F(r, Side::One, beta, t);
        if (s0) *s0 = a;
        if (s1) *s1 = b;
        return a.F.logv + b.F.logv;
    };

    double tlo = -beta * (r.hmax(Side::Zero) + r.hmax(Side::One)) / 2.0 - 1.0;
    double thi = 0.0;  // lam = 2
    double glo = g(tlo), ghi = g(thi);
    if (glo < 0.0 || ghi > 0.0)
        throw NumericError("solve_lambda: a-priori bracket failed (glo=" + std::to_string(glo) +
                           ", ghi=" + std::to_string(ghi) + ")");
    double t = 0.5 * (tlo + thi), gt = 0.0;
    int it = 0;
    for (; it < max_iter; ++it) {
        t = 0.5 * (tlo + thi);
        gt = g(t);
        if (std::abs(gt) <= tol) break;
        if (gt > 0.0)
            tlo = t;
        else
            thi = t;
        if (thi - tlo < 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    // Newton polish on g(t); the derivative is strictly negative.
    for (int k = 0; k < 12; ++k) {
        SeriesResult s0, s1;
        gt = g(t, &s0, &s1);
        if (std::abs(gt) <= tol * 0.1) break;
        double log_slope = (t - softplus(t)) +
                           log_add(s0.Ft.logv - s0.F.logv, s1.Ft.logv - s1.F.logv);
        double step = (gt > 0 ? 1.0 : -1.0) * std::exp(std::log(std::abs(gt)) - log_slope);
        double tn = t + step;  // slope is negative: g>0 means t must increase
        if (!(tn > tlo && tn < thi)) tn = 0.5 * (tlo + thi);
        if (g(tn) > 0.0)
            tlo = tn;
        else
            thi = tn;
        t = tn;
    }
    SeriesResult s0, s1;
    gt = g(t, &s0, &s1);
    sd.loglam1 = t;
    // the residual is a difference of log-series whose own magnitude grows
    // with beta, so the attainable accuracy is relative to that magnitude
    double scale = std::max({1.0, std::abs(s0.F.logv), std::abs(s1.F.logv)});
    sd.residual = std::abs(gt) / scale;
    sd.logF[0] = s0.F.logv;
    sd.logF[1] = s1.F.logv;
    sd.logFt[0] = s0.Ft.logv;
    sd.logFt[1] = s1.Ft.logv;
    sd.iterations = it;
    sd.converged = sd.residual <= tol;
    if (!sd.converged)
        throw NumericError("solve_lambda: residual " + std::to_string(sd.residual) +
                           " above tolerance");
    // a-priori bounds: 1 <= lam <= 2 and lam - 1 >= e^{-beta (maxH0+maxH1)/2}
    if (sd.loglam1 > 1e-12 ||
        sd.loglam1 < -beta * (r.hmax(Side::Zero) + r.hmax(Side::One)) / 2.0 - 1e-9)
        throw NumericError("solve_lambda: root escaped the a-priori interval");
    return sd;
}

// Log eigenfunction value on the cylinder class [s^n sbar ...], relative to
// the base point Phi([01]) = 1:
//   Phi(0^n 1) = lam^{n-1} (sum_{k>=n} lam^{-k} e^{-beta H^1_k}) Phi(10)
// and symmetrically with the sides swapped; Phi(10) = F0 Phi(01).
inline double logphi_class_raw(const ReducedPotential& r, const SpectralData& sd, Side s,
                               long long n) {
    double base = (s == Side::Zero) ? sd.logF[0] : 0.0;  // log Phi(10) or log Phi(01)
    SeriesResult part = eval_F_from(r, other(s), sd.beta, sd.loglam1, n);
    return static_cast<double>(n - 1) * sd.loglam() + part.F.logv + base;
}

// Values at the two fixed points: Phi(s^inf) = e^{-beta Hinf^sbar}/(lam-1) * base.
inline double logphi_fix_raw(const ReducedPotential& r, const SpectralData& sd, Side s) {
    double base = (s == Side::Zero) ? sd.logF[0] : 0.0;
    return -sd.beta * r.hinf(other(s)) - sd.loglam1 + base;
}

// Tables of eigendata on the cylinder classes [0^n 1], [1^n 0] for n <= nmax
// plus the fixed points, normalized so that sup Phi = 1, together with the
// normalization constants needed to produce Gibbs probabilities.
struct CylinderTables {
    double beta = 0.0;
    int nmax = 0;
    std::vector<double> logphi0, logphi1;  // log Phi([0^n 1]) etc., n = 1..nmax
    double logphi_fix0 = 0.0, logphi_fix1 = 0.0;
    double lognorm = 0.0;   // shift applied to reach sup Phi = 1
    double logmu01 = 0.0;   // log mu[01] (= log mu[10])
    double logZ = 0.0;      // mu[w] = exp(logphi_class + lognu(w) - logZ)
};

inline CylinderTables eigenfunction_table(const ReducedPotential& r, const SpectralData& sd,
                                          int nmax = kDefaultNmax) {
    if (nmax < 1) throw ValidationError("eigenfunction_table: nmax >= 1 required");
    CylinderTables ct;
    ct.beta = sd.beta;
    ct.nmax = nmax;
    // The class value at run length n is lam^{n-1} times the partial series of
    // the other side from n on; within one plateau of that series the value
    // drifts geometrically toward or away from a fixed level, so it is
    // monotone there and the supremum over all n is attained at a plateau
    // boundary (or at head+1, past which the value equals the fixed-point
    // one).  Scanning boundaries keeps this exact for astronomically long
    // plateaus.
    double sup = std::max(logphi_fix_raw(r, sd, Side::Zero), logphi_fix_raw(r, sd, Side::One));
    ct.logphi0.resize(static_cast<size_t>(nmax));
    ct.logphi1.resize(static_cast<size_t>(nmax));
    auto scan_side = [&](Side s, std::vector<double>& table) {
        const PlateauSeq& oth = r.h[idx(other(s))];
        std::vector<long long> cand;
        for (long long n = 1; n <= std::min<long long>(nmax, oth.head_length() + 1); ++n)
            cand.push_back(n);
        long long pos = 0;
        for (const auto& pl : oth.plateaus) {
            cand.push_back(pos + 1);
            cand.push_back(pos + pl.length);
            pos += pl.length;
        }
        cand.push_back(pos + 1);
        for (long long n : cand) {
            double v = logphi_class_raw(r, sd, s, n);
            if (n <= nmax) table[static_cast<size_t>(n - 1)] = v;
            sup = std::max(sup, v);
        }
        // indices past the other head all carry the fixed-point partial series
        for (long long n = std::min<long long>(nmax, oth.head_length() + 1) + 1; n <= nmax; ++n)
            table[static_cast<size_t>(n - 1)] = logphi_class_raw(r, sd, s, n);
    };
    scan_side(Side::Zero, ct.logphi0);
    scan_side(Side::One, ct.logphi1);
    ct.lognorm = sup;
    for (auto& v : ct.logphi0) v -= sup;
    for (auto& v : ct.logphi1) v -= sup;
    ct.logphi_fix0 = logphi_fix_raw(r, sd, Side::Zero) - sup;
    ct.logphi_fix1 = logphi_fix_raw(r, sd, Side::One) - sup;
    // mu[0]/mu[01] = Ft1/F1 and mu[1]/mu[10] = Ft0/F0 with mu[01] = mu[10] and
    // mu[0] + mu[1] = 1 pin the probability normalization.
    ct.logmu01 = -log_add(sd.logFt[1] - sd.logF[1], sd.logFt[0] - sd.logF[0]);
    ct.logZ = (ct.logphi0[0]) - ct.logmu01;  // logphi([01]) + lognu([01]) - logmu01, nu[01] = 1
    return ct;
}

namespace detail {

inline void check_word(const std::string& w) {
    if (w.empty()) throw ValidationError("cylinder word must be nonempty");
    for (char c : w)
        if (c != '0' && c != '1') throw ValidationError("cylinder word must be over {0,1}");
}

}  // namespace detail

// Log eigenmeasure of an arbitrary cylinder, relative to nu[01] = 1, obtained
// by peeling leading symbols with the constant-Jacobian relation
// nu[c w] = e^{-beta H([c w])} nu[w] / lam whenever H is constant on [c w],
// and closing unresolved runs with the partial fundamental series.
inline double lognu(const ReducedPotential& r, const SpectralData& sd, const std::string& word) {
    detail::check_word(word);
    double L = sd.loglam();
    double acc = 0.0;
    std::string w = word;
    for (;;) {
        size_t n = w.size();
        // run length of the leading symbol
        size_t runlen = 1;
        while (runlen < n && w[runlen] == w[0]) ++runlen;
        if (runlen == n) {
            // w = c^n: nu[c^n] = lam^{2-n}/(lam-1) * nu[c cbar]
            double base = (w[0] == '0') ? 0.0 : sd.logF[1];  // log nu[01] or log nu[10]
            return acc + (2.0 - static_cast<double>(n)) * L - sd.loglam1 + base;
        }
        if (runlen >= 2) {
            // leading pair is doubled: H = 0 on [c c ...]
            acc += -L;
            w.erase(0, 1);
            continue;
        }
        // w = c d^j ... with d = 1-c; find the run of d after position 0
        size_t j = 1;
        while (1 + j < n && w[1 + j] == w[1]) ++j;
        Side crossing = (w[0] == '0') ? Side::Zero : Side::One;  // [0 1^j 0] vs [1 0^j 1]
        if (1 + j < n) {
            // the run closes inside the word: H = H^s_j on [w]
            acc += -sd.beta * r.h[idx(crossing)].value(static_cast<long long>(j)) - L;
            w.erase(0, 1);
            continue;
        }
        // w = c d^j: nu = sum_{k>=j} e^{-beta H^s_k} lam^{-k} nu[d c]
        double base = (w[0] == '0') ? sd.logF[1] : 0.0;  // log nu[10] resp. log nu[01]
        SeriesResult part = eval_F_from(r, crossing, sd.beta, sd.loglam1, static_cast<long long>(j));
        return acc + part.F.logv + base;
    }
}

// Log Gibbs probability of a cylinder.  Words visiting both symbols lie in a
// single eigenfunction class, so mu[w] = Phi(class) nu[w] / Z; homogeneous
// words are resolved by the exact telescoped sums
//   mu[0^n] = mu[01] F0 ( Ft1_{>=n} - (n-1) F1_{>=n} )   (and symmetrically).
inline double log_gibbs(const ReducedPotential& r, const SpectralData& sd,
                        const CylinderTables& ct, const std::string& word) {
    detail::check_word(word);
    bool has0 = word.find('0') != std::string::npos;
    bool has1 = word.find('1') != std::string::npos;
    if (has0 && has1) {
        size_t runlen = 1;
        while (runlen < word.size() && word[runlen] == word[0]) ++runlen;
        Side lead = (word[0] == '0') ? Side::Zero : Side::One;
        double logphi = logphi_class_raw(r, sd, lead, static_cast<long long>(runlen)) - ct.lognorm;
        return logphi + lognu(r, sd, word) - ct.logZ;
    }
    long long n = static_cast<long long>(word.size());
    Side s = has0 ? Side::Zero : Side::One;
    Side o = other(s);
    double logF_lead = (s == Side::Zero) ? sd.logF[0] : sd.logF[1];
    SeriesResult part = eval_F_from(r, o, sd.beta, sd.loglam1, n);
    double inner = (n == 1)
                       ? part.Ft.logv
                       : log_sub(part.Ft.logv, std::log(static_cast<double>(n - 1)) + part.F.logv);
    return ct.logmu01 + logF_lead + inner;
}

inline double gibbs_cylinder(const ReducedPotential& r, const SpectralData& sd,
                             const CylinderTables& ct, const std::string& word) {
    return std::exp(log_gibbs(r, sd, ct, word));
}

// The finite-beta sub-action V = -(1/beta) log Phi on cylinder classes.  With
// sup Phi = 1 the minimum of V is 0.
struct SubactionTable {
    int nmax = 0;
    std::vector<double> v0, v1;  // values on [0^n 1], [1^n 0], n = 1..nmax
    double vfix0 = 0.0, vfix1 = 0.0;

    double value(Side s, long long n) const {
        const std::vector<double>& v = (s == Side::Zero) ? v0 : v1;
        if (n < 1) throw ValidationError("SubactionTable: n >= 1 required");
        size_t i = static_cast<size_t>(std::min<long long>(n, nmax) - 1);
        return v[i];
    }
    double min_all() const {
        double m = std::min(vfix0, vfix1);
        for (double x : v0) m = std::min(m, x);
        for (double x : v1) m = std::min(m, x);
        return m;
    }
    double sup_dist(const SubactionTable& oth) const {
        double d = std::max(std::abs(vfix0 - oth.vfix0), std::abs(vfix1 - oth.vfix1));
        for (size_t i = 0; i < v0.size() && i < oth.v0.size(); ++i)
            d = std::max(d, std::abs(v0[i] - oth.v0[i]));
        for (size_t i = 0; i < v1.size() && i < oth.v1.size(); ++i)
            d = std::max(d, std::abs(v1[i] - oth.v1[i]));
        return d;
    }
};

inline SubactionTable subaction_table(const ReducedPotential& r, const SpectralData& sd,
                                      const CylinderTables& ct) {
    SubactionTable st;
    st.nmax = ct.nmax;
    st.v0.reserve(ct.logphi0.size());
    st.v1.reserve(ct.logphi1.size());
    for (double lp : ct.logphi0) st.v0.push_back(-lp / sd.beta);
    for (double lp : ct.logphi1) st.v1.push_back(-lp / sd.beta);
    st.vfix0 = -ct.logphi_fix0 / sd.beta;
    st.vfix1 = -ct.logphi_fix1 / sd.beta;
    return st;
}

}  // namespace dwt

#endif
