#ifndef DWT_POTENTIAL_HPP
#define DWT_POTENTIAL_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dwt/errors.hpp"
#include "dwt/plateau_seq.hpp"

namespace dwt {

// Symbol sides of the two-letter shift.  Side Zero indexes the data attached
// to the fixed point 000... (coefficients a^0, b^0, energies H^0), side One
// the data attached to 111...
enum class Side { Zero = 0, One = 1 };

inline Side other(Side s) { return s == Side::Zero ? Side::One : Side::Zero; }
inline int idx(Side s) { return static_cast<int>(s); }

// Four coefficient sequences defining a double-well type potential on the
// full 2-shift: a^s weights the approach cylinders on side s, b^s the
// crossing cylinders.  Admissibility:
//   * a^s_n >= 0 with finite first moment (here: zero tail, so automatic);
//   * b^s_n > 0, finite, with summable total variation (automatic for a
//     plateau head with finite tail).
struct GeneralDoubleWell {
    PlateauSeq a[2];
    PlateauSeq b[2];
};

// Energies of the reduced cohomologous form: the potential vanishes on [00]
// and [11] and takes the value H^0_n on [0 1^n 0], H^1_n on [1 0^n 1].
struct ReducedPotential {
    PlateauSeq h[2];
    // When a well has zero asymptotic energy the reduction is only reached as
    // a limit of strictly positive data; evaluations then also report a
    // bracket obtained by re-running with the tail lifted to eps_bracket.
    bool limit_approximation = false;
    double eps_bracket = 0.0;

    double hinf(Side s) const { return h[idx(s)].tail; }
    double hmin(Side s) const { return h[idx(s)].min_all(); }
    double hmax(Side s) const { return h[idx(s)].max_all(); }

    ReducedPotential swapped() const {
        ReducedPotential r = *this;
        std::swap(r.h[0], r.h[1]);
        return r;
    }
};

struct ValidationItem {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationItem> items;
    bool ok = true;

    void add(std::string name, bool pass, std::string detail = "") {
        ok = ok && pass;
        items.push_back({std::move(name), pass, std::move(detail)});
    }
    void require_ok(const char* what) const {
        if (ok) return;
        std::string msg = std::string(what) + ":";
        for (const auto& it : items)
            if (!it.pass) msg += " [" + it.name + (it.detail.empty() ? "" : ": " + it.detail) + "]";
        throw ValidationError(msg);
    }
};

// sum over the head of |x_k - inf-or-sup over j >= k|, i.e. the summable
// variation functional sum_k sup_{n>=0} |x_k - x_{k+n}|, evaluated plateau by
// plateau (the summand vanishes past the head).
inline double summable_variation(const PlateauSeq& x) {
    double s = 0.0;
    long long pos = 0;
    for (const auto& p : x.plateaus) {
        long long lo = pos + 1;
        pos += p.length;
        double up = x.suffix_max(lo) - p.value;
        double dn = p.value - x.suffix_min(lo);
        s += static_cast<double>(p.length) * std::max(up, dn);
    }
    return s;
}

inline ValidationReport validate_general(const GeneralDoubleWell& g) {
    ValidationReport rep;
    const char* an[2] = {"a0", "a1"};
    const char* bn[2] = {"b0", "b1"};
    for (int s = 0; s < 2; ++s) {
        rep.add(std::string(an[s]) + "_finite", g.a[s].all_finite());
        rep.add(std::string(bn[s]) + "_finite", g.b[s].all_finite());
        rep.add(std::string(an[s]) + "_nonnegative", g.a[s].min_all() >= 0.0);
        rep.add(std::string(bn[s]) + "_positive", g.b[s].min_all() > 0.0);
        // First moment of a^s: finite iff the tail vanishes.
        rep.add(std::string(an[s]) + "_first_moment_finite", g.a[s].tail == 0.0,
                g.a[s].tail == 0.0 ? "" : "nonzero tail makes sum n*a_n diverge");
        double var = summable_variation(g.b[s]);
        rep.add(std::string(bn[s]) + "_variation_summable", std::isfinite(var),
                "sum=" + std::to_string(var));
    }
    return rep;
}

inline ValidationReport validate_reduced(const ReducedPotential& r) {
    ValidationReport rep;
    const char* hn[2] = {"H0", "H1"};
    for (int s = 0; s < 2; ++s) {
        rep.add(std::string(hn[s]) + "_finite", r.h[s].all_finite());
        rep.add(std::string(hn[s]) + "_nonnegative", r.h[s].min_all() >= 0.0);
        bool head_pos = true;
        for (const auto& p : r.h[s].plateaus) head_pos = head_pos && p.value > 0.0;
        rep.add(std::string(hn[s]) + "_head_positive", head_pos);
        rep.add(std::string(hn[s]) + "_tail_nonnegative", r.h[s].tail >= 0.0);
        if (r.h[s].tail == 0.0)
            rep.add(std::string(hn[s]) + "_zero_tail_flagged", r.limit_approximation,
                    "zero asymptotic energy requires limit_approximation");
    }
    if (r.limit_approximation)
        rep.add("eps_bracket_positive", r.eps_bracket > 0.0);
    return rep;
}

// Reduce a general double-well potential to crossing energies:
//   H^0_n = b^0_n + sum_{k=1}^{n-1} a^1_k,   H^1_n = b^1_n + sum_{k=1}^{n-1} a^0_k.
// Both heads are finite, so the result is again an exact plateau sequence
// with tail b^s_inf + (total sum of the opposite a).
inline ReducedPotential reduce(const GeneralDoubleWell& g) {
    validate_general(g).require_ok("reduce: invalid general potential");
    ReducedPotential r;
    for (int s = 0; s < 2; ++s) {
        const PlateauSeq& b = g.b[s];
        const PlateauSeq& a = g.a[1 - s];
        long long head = std::max(b.head_length(), a.head_length() + 1);
        if (head > 2000000) throw ValidationError("reduce: head too long for per-index reduction");
        std::vector<double> vals;
        vals.reserve(static_cast<size_t>(head));
        double prefix = 0.0;  // sum_{k<=n-1} a_k, updated incrementally
        for (long long n = 1; n <= head; ++n) {
            vals.push_back(b.value(n) + prefix);
            prefix += a.value(n);
        }
        r.h[s] = PlateauSeq::from_values(vals, b.tail + a.head_sum());
    }
    if (r.h[0].tail == 0.0 || r.h[1].tail == 0.0) r.limit_approximation = true;
    return r;
}

// Scalar invariants of a reduced potential.
struct DerivedConstants {
    double hmin[2];  // inf_n H^s_n (tail included)
    double hinf[2];  // lim_n H^s_n
    double hmax[2];  // sup_n H^s_n
};

inline DerivedConstants derived_constants(const ReducedPotential& r) {
    DerivedConstants d{};
    for (int s = 0; s < 2; ++s) {
        Side side = static_cast<Side>(s);
        d.hmin[s] = r.hmin(side);
        d.hinf[s] = r.hinf(side);
        d.hmax[s] = r.hmax(side);
    }
    return d;
}

// n-th variation of the reduced potential: the maximal oscillation over any
// cylinder of length n.  For n >= 2 this is the oscillation of each crossing
// family over run lengths k >= n-1 (the limit value included); for n = 1 the
// zero value on [00] u [11] also enters.
inline double variation(const ReducedPotential& r, long long n) {
    if (n < 1) throw ValidationError("variation: n >= 1 required");
    double v = 0.0;
    for (int s = 0; s < 2; ++s) {
        long long k0 = std::max<long long>(n - 1, 1);
        double hi = r.h[s].suffix_max(k0);
        double lo = r.h[s].suffix_min(k0);
        if (n == 1) lo = std::min(lo, 0.0);
        v = std::max(v, hi - lo);
    }
    return v;
}

// sum_{k >= n0} variation(r, k): finite because the variation vanishes once
// k-1 is past both heads.  The summand is constant between plateau breaks, so
// the sum is taken segment-wise and stays cheap for very long heads.
inline double variation_tail_sum(const ReducedPotential& r, long long n0) {
    long long head = std::max(r.h[0].head_length(), r.h[1].head_length());
    long long kmax = head + 2;  // variation(r, k) == 0 for k > head + 1
    n0 = std::max<long long>(n0, 1);
    if (n0 > kmax) return 0.0;
    // variation(r, k) can only change when k-1 enters a new plateau.
    std::vector<long long> cuts = {n0, kmax + 1};
    for (int s = 0; s < 2; ++s) {
        long long pos = 0;
        for (const auto& p : r.h[s].plateaus) {
            if (pos + 2 > n0 && pos + 2 <= kmax) cuts.push_back(pos + 2);  // k with k-1 = plateau start
            pos += p.length;
        }
        if (pos + 2 > n0 && pos + 2 <= kmax) cuts.push_back(pos + 2);  // k-1 = first tail index
    }
    if (n0 < 2 && 2 <= kmax) cuts.push_back(2);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double s = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        s += static_cast<double>(cuts[i + 1] - cuts[i]) * variation(r, cuts[i]);
    return s;
}

}  // namespace dwt

#endif
