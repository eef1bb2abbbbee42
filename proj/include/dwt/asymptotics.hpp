#ifndef DWT_ASYMPTOTICS_HPP
#define DWT_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dwt/errors.hpp"
#include "dwt/potential.hpp"
#include "dwt/spectrum.hpp"

namespace dwt {

enum class Regime { SelectOne, Barycenter, GammaZero };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::SelectOne: return "select_one";
        case Regime::Barycenter: return "barycenter";
        default: return "gamma_zero";
    }
}

// gamma = min{ (Hinf^1 + Hinf^0)/2, Hmin^0 + Hinf^1, Hmin^1 + Hinf^0 }.
// Shared by the profile and the barrier identities so that both always agree
// to the last bit.
inline double gamma_of(const ReducedPotential& r) {
    double half = (r.hinf(Side::One) + r.hinf(Side::Zero)) / 2.0;
    double c0 = r.hmin(Side::Zero) + r.hinf(Side::One);
    double c1 = r.hmin(Side::One) + r.hinf(Side::Zero);
    return std::min({half, c0, c1});
}

// Predicted exponential rates (slopes in beta of the negative log) from the
// zero-temperature limit theory.
struct LogScaleRates {
    double lam1 = 0.0;      // -(1/beta) log(lam-1)  ->  gamma
    double F[2] = {0, 0};   // -(1/beta) log F^s     ->  min{ Hmin^s, Hinf^s - gamma }
    double Ft[2] = {0, 0};  // -(1/beta) log Ft^s    ->  min{ Hmin^s, Hinf^s - 2 gamma }
    double mu_ratio = 0.0;  // decay rate of mu[light side]/mu[heavy side]
    Side light_side = Side::Zero;  // the side whose mass decays (oriented)
};

// Zero-temperature classification.  All formulas are stated for the
// orientation Hinf^0 <= Hinf^1; `swapped` records whether the input had to be
// relabeled, and the weights are always reported in the input's labels.
struct AsymptoticProfile {
    double gamma = 0.0;
    Regime regime = Regime::GammaZero;
    bool swapped = false;
    long long kappa = 0;   // only meaningful in the Barycenter regime
    double c = 1.0;        // (kappa + sqrt(kappa^2+4))/2, so c^2 = kappa c + 1
    // limit weights of delta_{000...} and delta_{111...}; absent when gamma=0
    std::optional<double> w0, w1;
    LogScaleRates rates;
};

inline LogScaleRates log_scale_rates(const ReducedPotential& r, double gamma) {
    LogScaleRates lr;
    lr.lam1 = gamma;
    for (int s = 0; s < 2; ++s) {
        Side side = static_cast<Side>(s);
        lr.F[s] = std::min(r.hmin(side), r.hinf(side) - gamma);
        lr.Ft[s] = std::min(r.hmin(side), r.hinf(side) - 2.0 * gamma);
    }
    bool swapped = r.hinf(Side::Zero) > r.hinf(Side::One);
    Side light = swapped ? Side::One : Side::Zero;  // oriented side 0 loses mass
    Side heavy = other(light);
    lr.light_side = light;
    lr.mu_ratio =
        r.hinf(light) + std::min(r.hmin(heavy), r.hinf(heavy) - 2.0 * gamma);
    return lr;
}

inline AsymptoticProfile profile(const ReducedPotential& r) {
    validate_reduced(r).require_ok("profile: invalid reduced potential");
    AsymptoticProfile p;
    p.gamma = gamma_of(r);
    p.swapped = r.hinf(Side::Zero) > r.hinf(Side::One);
    ReducedPotential o = p.swapped ? r.swapped() : r;  // oriented: Hinf^0 <= Hinf^1
    double oi0 = o.hinf(Side::Zero), oi1 = o.hinf(Side::One);
    double half = (oi1 + oi0) / 2.0;
    p.rates = log_scale_rates(r, p.gamma);

    if (half > o.hmin(Side::One) + oi0) {
        // the deep-well crossing dominates: full selection of the heavy point
        p.regime = Regime::SelectOne;
        double w0o = 0.0, w1o = 1.0;
        p.w0 = p.swapped ? w1o : w0o;
        p.w1 = p.swapped ? w0o : w1o;
        return p;
    }
    if (p.gamma > 0.0) {
        p.regime = Regime::Barycenter;
        // kappa counts the indices where H^1_n + Hinf^0 attains (Hinf^1+Hinf^0)/2.
        double target = (oi1 - oi0) / 2.0;
        double tol = 1e-9 * std::max(1.0, p.gamma);
        if (std::abs(o.h[1].tail - target) <= tol)
            throw ValidationError("profile: the limit energy attains the barycenter level, "
                                  "kappa would be infinite");
        long long kappa = 0;
        for (const auto& pl : o.h[1].plateaus)
            if (std::abs(pl.value - target) <= tol) kappa += pl.length;
        p.kappa = kappa;
        double k = static_cast<double>(kappa);
        p.c = (k + std::sqrt(k * k + 4.0)) / 2.0;
        double c2 = p.c * p.c;
        double w0o = 1.0 / (1.0 + c2), w1o = c2 / (1.0 + c2);
        p.w0 = p.swapped ? w1o : w0o;
        p.w1 = p.swapped ? w0o : w1o;
        return p;
    }
    p.regime = Regime::GammaZero;  // accumulation points may mix; no weights
    return p;
}

// Sharp equivalents in the Barycenter regime (also valid in SelectOne for
// lam-1 with kappa = 0 terms absent; only used where gamma > 0).  Each entry
// is a ratio that converges to 1:
//   (lam-1) e^{beta gamma} / c,
//   F^0 c e^{-beta (Hinf^1-Hinf^0)/2},  Ft^0 c^2 e^{-beta Hinf^1},
//   F^1 (1/c) e^{beta (Hinf^1-Hinf^0)/2},  Ft^1 c^2 e^{-beta Hinf^0}
// (sides in the oriented labels; the struct reports input labels).
struct EquivalentRatios {
    double lam1 = 0.0;
    double F[2] = {0, 0};
    double Ft[2] = {0, 0};
};

inline EquivalentRatios equivalents(const ReducedPotential& r, const AsymptoticProfile& p,
                                    const SpectralData& sd) {
    if (p.regime != Regime::Barycenter)
        throw ValidationError("equivalents: only defined in the Barycenter regime");
    ReducedPotential o = p.swapped ? r.swapped() : r;
    double oi0 = o.hinf(Side::Zero), oi1 = o.hinf(Side::One);
    double logc = std::log(p.c);
    double b = sd.beta;
    EquivalentRatios e;
    e.lam1 = std::exp(sd.loglam1 + b * p.gamma - logc);
    // oriented-side values of the series logs
    double lF0 = sd.logF[p.swapped ? 1 : 0], lF1 = sd.logF[p.swapped ? 0 : 1];
    double lFt0 = sd.logFt[p.swapped ? 1 : 0], lFt1 = sd.logFt[p.swapped ? 0 : 1];
    double eF0 = std::exp(lF0 + logc - b * (oi1 - oi0) / 2.0);
    double eFt0 = std::exp(lFt0 + 2.0 * logc - b * oi1);
    double eF1 = std::exp(lF1 - logc + b * (oi1 - oi0) / 2.0);
    double eFt1 = std::exp(lFt1 + 2.0 * logc - b * oi0);
    e.F[p.swapped ? 1 : 0] = eF0;
    e.F[p.swapped ? 0 : 1] = eF1;
    e.Ft[p.swapped ? 1 : 0] = eFt0;
    e.Ft[p.swapped ? 0 : 1] = eFt1;
    return e;
}

// Zero-temperature limit of the finite-beta sub-actions (gamma > 0, oriented
// labels Hinf^0 <= Hinf^1):
//   V([0^n 1]) = min{ Hinf^1 - gamma, inf_{k>=n} H^1_k },  V = 0 on the 1 side,
//   V(000...) = Hinf^1 - gamma,  V(111...) = 0.
// When gamma = 0 the limit vanishes identically.
inline SubactionTable limit_subaction(const ReducedPotential& r, int nmax = kDefaultNmax) {
    AsymptoticProfile p = profile(r);
    SubactionTable st;
    st.nmax = nmax;
    st.v0.assign(static_cast<size_t>(nmax), 0.0);
    st.v1.assign(static_cast<size_t>(nmax), 0.0);
    if (p.gamma == 0.0) return st;
    ReducedPotential o = p.swapped ? r.swapped() : r;
    double cap = o.hinf(Side::One) - p.gamma;
    std::vector<double> von(static_cast<size_t>(nmax), 0.0);
    for (long long n = 1; n <= nmax; ++n)
        von[static_cast<size_t>(n - 1)] = std::min(cap, o.h[1].suffix_min(n));
    if (!p.swapped) {
        st.v0 = von;
        st.vfix0 = cap;
        st.vfix1 = 0.0;
    } else {
        st.v1 = von;
        st.vfix1 = cap;
        st.vfix0 = 0.0;
    }
    return st;
}

// One row of a phase diagram scan over a two-parameter family.
struct PhaseGridRow {
    double s = 0.0, t = 0.0;
    Regime regime = Regime::GammaZero;
    double gamma = 0.0;
    long long kappa = 0;
    double c = 1.0;
    std::optional<double> w0, w1;
};

struct GridRange {
    double min = 0.0, max = 0.0;
    int steps = 1;  // number of samples (>= 1); max is included when steps > 1

    double at(int i) const {
        if (steps <= 1) return min;
        return min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
};

// Classify a family (s, t) -> ReducedPotential over a rectangular grid.  Rows
// come out in row-major (s outer, t inner) order; parameter points where the
// family is undefined or degenerate are skipped via the optional return.
inline std::vector<PhaseGridRow> phase_grid(
    const std::function<std::optional<ReducedPotential>(double, double)>& family,
    const GridRange& srange, const GridRange& trange) {
    std::vector<PhaseGridRow> rows;
    rows.reserve(static_cast<size_t>(srange.steps) * static_cast<size_t>(trange.steps));
    for (int i = 0; i < srange.steps; ++i) {
        for (int j = 0; j < trange.steps; ++j) {
            double s = srange.at(i), t = trange.at(j);
            auto r = family(s, t);
            if (!r) continue;
            AsymptoticProfile p = profile(*r);
            PhaseGridRow row;
            row.s = s;
            row.t = t;
            row.regime = p.regime;
            row.gamma = p.gamma;
            row.kappa = p.kappa;
            row.c = p.c;
            row.w0 = p.w0;
            row.w1 = p.w1;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace dwt

#endif
