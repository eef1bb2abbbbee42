#ifndef DWT_PEIERLS_HPP
#define DWT_PEIERLS_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "dwt/asymptotics.hpp"
#include "dwt/errors.hpp"
#include "dwt/potential.hpp"
#include "dwt/spectrum.hpp"

namespace dwt {

// Peierls barriers between the two ground configurations 000... and 111...
// and the cylinder classes.  Starting from a fixed point, reaching the same
// side is free; reaching [d^n dbar ...] across the wall costs the cheapest
// crossing with run length at least n.
struct BarrierTable {
    int nmax = 0;
    // h(000..., [1^n 0]) and h(111..., [0^n 1]) for n = 1..nmax
    std::vector<double> from0_to1, from1_to0;
    double h_0_to_1 = 0.0;   // h(000..., 111...) = Hinf^0
    double h_1_to_0 = 0.0;   // h(111..., 000...) = Hinf^1
    double liminf_to_0 = 0.0;  // liminf_{x->000...} h(x, 000...) = Hmin^0 + Hinf^1
    double liminf_to_1 = 0.0;  // liminf_{x->111...} h(x, 111...) = Hmin^1 + Hinf^0
};

inline BarrierTable barrier(const ReducedPotential& r, int nmax = kDefaultNmax) {
    if (nmax < 1) throw ValidationError("barrier: nmax >= 1 required");
    BarrierTable bt;
    bt.nmax = nmax;
    bt.from0_to1.resize(static_cast<size_t>(nmax));
    bt.from1_to0.resize(static_cast<size_t>(nmax));
    for (long long n = 1; n <= nmax; ++n) {
        bt.from0_to1[static_cast<size_t>(n - 1)] = r.h[0].suffix_min(n);
        bt.from1_to0[static_cast<size_t>(n - 1)] = r.h[1].suffix_min(n);
    }
    bt.h_0_to_1 = r.hinf(Side::Zero);
    bt.h_1_to_0 = r.hinf(Side::One);
    bt.liminf_to_0 = r.hmin(Side::Zero) + r.hinf(Side::One);
    bt.liminf_to_1 = r.hmin(Side::One) + r.hinf(Side::Zero);
    return bt;
}

// The three candidate crossing costs whose minimum is gamma, and the
// nonselection criterion: both one-way barriers between the ground points
// vanish iff gamma = 0.
struct CrossingIdentities {
    double half_sum = 0.0;   // (Hinf^0 + Hinf^1)/2
    double cross_0 = 0.0;    // Hmin^0 + Hinf^1
    double cross_1 = 0.0;    // Hmin^1 + Hinf^0
    bool nonselection = false;

    double min_value() const { return std::min({half_sum, cross_0, cross_1}); }
};

inline CrossingIdentities crossing_identities(const ReducedPotential& r) {
    CrossingIdentities ci;
    ci.half_sum = (r.hinf(Side::One) + r.hinf(Side::Zero)) / 2.0;
    ci.cross_0 = r.hmin(Side::Zero) + r.hinf(Side::One);
    ci.cross_1 = r.hmin(Side::One) + r.hinf(Side::Zero);
    ci.nonselection = (r.hinf(Side::Zero) == 0.0) && (r.hinf(Side::One) == 0.0);
    return ci;
}

// One Lax-Oleinik update on class tables (the ground value of the reduced
// potential is 0, so T[V] = min over preimages of V + H with no subtraction):
//   (TV)([0^n 1]) = min{ V([0^{n+1} 1]), V([10]) + H^1_n }
//   (TV)([1^n 0]) = min{ V([1^{n+1} 0]), V([01]) + H^0_n }
//   (TV)(000...)  = min{ V(000...), V([10]) + Hinf^1 }   (and symmetrically).
// Entries past nmax reuse the last table value, which is exact once nmax is
// past both heads.
inline SubactionTable lax_oleinik_step(const ReducedPotential& r, const SubactionTable& v) {
    SubactionTable out = v;
    int nmax = v.nmax;
    for (long long n = 1; n <= nmax; ++n) {
        double next0 = v.value(Side::Zero, std::min<long long>(n + 1, nmax));
        double next1 = v.value(Side::One, std::min<long long>(n + 1, nmax));
        out.v0[static_cast<size_t>(n - 1)] =
            std::min(next0, v.v1[0] + r.h[1].value(n));
        out.v1[static_cast<size_t>(n - 1)] =
            std::min(next1, v.v0[0] + r.h[0].value(n));
    }
    out.vfix0 = std::min(v.vfix0, v.v1[0] + r.hinf(Side::One));
    out.vfix1 = std::min(v.vfix1, v.v0[0] + r.hinf(Side::Zero));
    return out;
}

struct CalibratedResult {
    SubactionTable v;
    int iterations = 0;
    double final_change = 0.0;
    bool converged = false;
};

// Iterate the Lax-Oleinik operator to a fixed point, then shift so min V = 0.
// The fixed-point set is a continuum (every constant is calibrated), so the
// limit depends on the seed; callers choose the seed that selects the fixed
// point they are after.
inline CalibratedResult solve_calibrated(const ReducedPotential& r, const SubactionTable& v0,
                                         int max_iter = 100000, double tol = 1e-14) {
    CalibratedResult res;
    SubactionTable v = v0;
    for (res.iterations = 0; res.iterations < max_iter; ++res.iterations) {
        SubactionTable w = lax_oleinik_step(r, v);
        res.final_change = v.sup_dist(w);
        v = w;
        if (res.final_change <= tol) {
            res.converged = true;
            break;
        }
    }
    if (!res.converged)
        throw NumericError("solve_calibrated: Lax-Oleinik iteration did not settle");
    double m = v.min_all();
    for (auto& x : v.v0) x -= m;
    for (auto& x : v.v1) x -= m;
    v.vfix0 -= m;
    v.vfix1 -= m;
    res.v = v;
    return res;
}

// Representation formula: a calibrated sub-action is determined on every
// class by its values u0, u1 at the two ground points,
//   V([0^n 1]) = min{ u0, u1 + inf_{k>=n} H^1_k },
//   V([1^n 0]) = min{ u1, u0 + inf_{k>=n} H^0_k }.
inline SubactionTable representation_formula(const ReducedPotential& r, double u0, double u1,
                                             int nmax = kDefaultNmax) {
    SubactionTable st;
    st.nmax = nmax;
    st.v0.resize(static_cast<size_t>(nmax));
    st.v1.resize(static_cast<size_t>(nmax));
    BarrierTable bt = barrier(r, nmax);
    for (int n = 1; n <= nmax; ++n) {
        st.v0[static_cast<size_t>(n - 1)] = std::min(u0, u1 + bt.from1_to0[static_cast<size_t>(n - 1)]);
        st.v1[static_cast<size_t>(n - 1)] = std::min(u1, u0 + bt.from0_to1[static_cast<size_t>(n - 1)]);
    }
    st.vfix0 = std::min(u0, u1 + bt.h_1_to_0);
    st.vfix1 = std::min(u1, u0 + bt.h_0_to_1);
    return st;
}

// n-th variation of a class table, mirroring variation() for the potential:
// oscillation over run lengths k >= n-1 on each side, the fixed-point value
// standing in for the limit of the class values.
inline double table_variation(const SubactionTable& v, long long n) {
    if (n < 1) throw ValidationError("table_variation: n >= 1 required");
    double out = 0.0;
    for (int s = 0; s < 2; ++s) {
        const std::vector<double>& col = (s == 0) ? v.v0 : v.v1;
        double fix = (s == 0) ? v.vfix0 : v.vfix1;
        double hi = fix, lo = fix;
        for (long long k = std::max<long long>(n - 1, 1); k <= v.nmax; ++k) {
            double x = col[static_cast<size_t>(k - 1)];
            hi = std::max(hi, x);
            lo = std::min(lo, x);
        }
        out = std::max(out, hi - lo);
    }
    return out;
}

}  // namespace dwt

#endif
