#ifndef DWT_SERIES_HPP
#define DWT_SERIES_HPP

#include <algorithm>
#include <cmath>
#include <optional>

#include "dwt/errors.hpp"
#include "dwt/log_value.hpp"
#include "dwt/potential.hpp"

namespace dwt {

// Logs of the closed-form geometric tails
//   sum_{k>N} lam^{-k}     = 1 / (lam^N (lam-1))
//   sum_{k>N} k lam^{-k}   = (N(lam-1) + lam) / (lam^N (lam-1)^2)
// parameterized by t = log(lam - 1), the variable all spectral work uses
// (lam - 1 itself underflows long before t does).
struct TailLogs {
    double log_tail1;
    double log_tailk;
};

inline TailLogs geometric_tails(double t, double N) {
    if (!(t > kNegInf)) throw NumericError("geometric_tails: lam must exceed 1");
    double L = softplus(t);  // log lam
    TailLogs out;
    out.log_tail1 = -N * L - t;
    // log(N(lam-1) + lam) = log(1 + (N+1) e^t), guarded against overflow of e^t.
    double u = std::log(N + 1.0) + t;
    double inner = (u > 36.0) ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
    out.log_tailk = inner - N * L - 2.0 * t;
    return out;
}

// One evaluation of the fundamental series of a side at inverse temperature
// beta and spectral variable t = log(lam-1):
//   F  = sum_{k>=1} lam^{-k} e^{-beta H_k}
//   Ft = sum_{k>=1} k lam^{-k} e^{-beta H_k}
// For limit-approximation potentials the same sums with the tail energy
// lifted to eps_bracket give a rigorous lower log-bracket.
struct SeriesResult {
    LogValue F = LogValue::zero();
    LogValue Ft = LogValue::zero();
    long long head_terms = 0;
    std::optional<double> logF_lower;   // bracket when limit_approximation
    std::optional<double> logFt_lower;
};

namespace detail {

// Plateaus at least this long are summed in closed form; shorter ones term by
// term (which is both exact and what every tight-tolerance fixture hits).
inline constexpr long long kDirectTermLimit = 4096;

struct PartialLogs {
    double logF = kNegInf;
    double logFt = kNegInf;
    long long terms = 0;
};

// log of sum_{k=a..b} lam^{-k} e^{-beta v} and of the k-weighted analogue.
inline void accumulate_plateau(PartialLogs& acc, double beta, double t, double L,
                               long long a, long long b, double v) {
    if (b < a) return;
    long long cnt = b - a + 1;
    double w = -beta * v;
    if (cnt <= kDirectTermLimit) {
        for (long long k = a; k <= b; ++k) {
            double base = w - static_cast<double>(k) * L;
            acc.logF = log_add(acc.logF, base);
            acc.logFt = log_add(acc.logFt, base + std::log(static_cast<double>(k)));
        }
        acc.terms += cnt;
        return;
    }
    double A = static_cast<double>(a), B = static_cast<double>(b), C = static_cast<double>(cnt);
    // sum lam^{-k} = lam^{-(a-1)} (1 - lam^{-cnt}) / (lam - 1).  The factor
    // log(1 - lam^{-cnt}) needs care when cnt*log(lam) underflows double: use
    // log(cnt) + log(log lam) directly, with log(log lam) ~= t for deep t.
    double log_logL = (t < -30.0) ? t : std::log(L);
    double log_cl = std::log(C) + log_logL;
    double one_m = (log_cl < -37.0) ? log_cl : log1mexp(C * L);
    double logS1 = w - (A - 1.0) * L + one_m - t;
    acc.logF = log_add(acc.logF, logS1);
    // k-weighted: difference of two closed tails, with a midpoint fallback when
    // the difference is too tight for log-space subtraction.
    TailLogs ta = geometric_tails(t, A - 1.0);
    TailLogs tb = geometric_tails(t, B);
    double logSk;
    if (ta.log_tailk - tb.log_tailk > 1e-9) {
        logSk = w + log_sub(ta.log_tailk, tb.log_tailk);
    } else {
        // lam^{-k} is nearly flat across the plateau: sum k lam^{-k} ~= lam^{-mid} sum k.
        double mid = (A + B) / 2.0;
        logSk = w - mid * L + std::log(mid) + std::log(C);
    }
    acc.logFt = log_add(acc.logFt, logSk);
    acc.terms += cnt;
}

// Both series restricted to indices n0 <= k <= n1 (n1 < 0 means unbounded),
// with an optional override of the tail energy (used for brackets).
inline PartialLogs eval_range(const PlateauSeq& h, double beta, double t, long long n0,
                              long long n1, std::optional<double> tail_override = std::nullopt) {
    if (n0 < 1) throw ValidationError("series: index range starts at 1");
    double L = softplus(t);
    PartialLogs acc;
    long long pos = 0;
    for (const auto& p : h.plateaus) {
        long long a = pos + 1, b = pos + p.length;
        pos += p.length;
        long long lo = std::max(a, n0);
        long long hi = (n1 < 0) ? b : std::min(b, n1);
        accumulate_plateau(acc, beta, t, L, lo, hi, p.value);
    }
    double tail_v = tail_override.value_or(h.tail);
    long long tail_from = std::max(pos + 1, n0);
    if (n1 < 0) {
        double w = -beta * tail_v;
        TailLogs tl = geometric_tails(t, static_cast<double>(tail_from - 1));
        acc.logF = log_add(acc.logF, w + tl.log_tail1);
        acc.logFt = log_add(acc.logFt, w + tl.log_tailk);
    } else if (tail_from <= n1) {
        accumulate_plateau(acc, beta, t, L, tail_from, n1, tail_v);
    }
    return acc;
}

}  // namespace detail

inline SeriesResult eval_F(const ReducedPotential& r, Side side, double beta, double t) {
    const PlateauSeq& h = r.h[idx(side)];
    auto full = detail::eval_range(h, beta, t, 1, -1);
    SeriesResult out;
    out.F = LogValue::from_log(full.logF);
    out.Ft = LogValue::from_log(full.logFt);
    out.head_terms = full.terms;
    if (r.limit_approximation && h.tail == 0.0 && r.eps_bracket > 0.0) {
        auto low = detail::eval_range(h, beta, t, 1, -1, r.eps_bracket);
        out.logF_lower = low.logF;
        out.logFt_lower = low.logFt;
    }
    return out;
}

// Partial sums from index n0 on, used by eigenfunction and eigenmeasure
// cylinder formulas: sum_{k>=n0} lam^{-k} e^{-beta H_k} (and k-weighted).
inline SeriesResult eval_F_from(const ReducedPotential& r, Side side, double beta, double t,
                                long long n0) {
    auto part = detail::eval_range(r.h[idx(side)], beta, t, n0, -1);
    SeriesResult out;
    out.F = LogValue::from_log(part.logF);
    out.Ft = LogValue::from_log(part.logFt);
    out.head_terms = part.terms;
    return out;
}

// Head-only partial sum over n0 <= k <= n1.
inline SeriesResult eval_F_range(const ReducedPotential& r, Side side, double beta, double t,
                                 long long n0, long long n1) {
    auto part = detail::eval_range(r.h[idx(side)], beta, t, n0, n1);
    SeriesResult out;
    out.F = LogValue::from_log(part.logF);
    out.Ft = LogValue::from_log(part.logFt);
    out.head_terms = part.terms;
    return out;
}

// dF/dlam = -Ft / lam, returned as (sign = -1, log magnitude).
inline double eval_F_derivative_logmag(const ReducedPotential& r, Side side, double beta,
                                       double t) {
    auto res = eval_F(r, side, beta, t);
    return res.Ft.logv - softplus(t);
}

}  // namespace dwt

#endif
