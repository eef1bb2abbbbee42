#ifndef DWT_PLATEAU_SEQ_HPP
#define DWT_PLATEAU_SEQ_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "dwt/errors.hpp"

namespace dwt {

// A sequence (x_n)_{n>=1} that is piecewise constant on finitely many index
// plateaus and constant past the head.  This is the exact representation used
// for every coefficient and energy sequence in the library: heads are summed
// term by term (or plateau by plateau), the constant part in closed form, so
// no truncation error is ever introduced.
struct Plateau {
    long long length = 0;  // number of consecutive indices sharing the value
    double value = 0.0;
};

struct PlateauSeq {
    std::vector<Plateau> plateaus;  // the head, in index order
    double tail = 0.0;              // value for every index past the head

    static PlateauSeq constant(double v) { return PlateauSeq{{}, v}; }

    long long head_length() const {
        long long n = 0;
        for (const auto& p : plateaus) n += p.length;
        return n;
    }

    double value(long long n) const {
        if (n < 1) throw ValidationError("PlateauSeq: indices start at 1");
        long long pos = 0;
        for (const auto& p : plateaus) {
            pos += p.length;
            if (n <= pos) return p.value;
        }
        return tail;
    }

    // min / max over all indices n >= n0 (the constant part always counts).
    double suffix_min(long long n0 = 1) const {
        double m = tail;
        long long pos = 0;
        for (const auto& p : plateaus) {
            pos += p.length;
            if (pos >= n0) m = std::min(m, p.value);
        }
        return m;
    }
    double suffix_max(long long n0 = 1) const {
        double m = tail;
        long long pos = 0;
        for (const auto& p : plateaus) {
            pos += p.length;
            if (pos >= n0) m = std::max(m, p.value);
        }
        return m;
    }
    double min_all() const { return suffix_min(1); }
    double max_all() const { return suffix_max(1); }

    // sum over the head of x_n and of n * x_n (finite; the tail is excluded,
    // callers that need the tail handle it in closed form).
    double head_sum() const {
        double s = 0.0;
        long long pos = 0;
        for (const auto& p : plateaus) {
            pos += p.length;
            s += static_cast<double>(p.length) * p.value;
        }
        return s;
    }
    double head_weighted_sum() const {
        double s = 0.0;
        long long pos = 0;
        for (const auto& p : plateaus) {
            double a = static_cast<double>(pos + 1);
            double b = static_cast<double>(pos + p.length);
            pos += p.length;
            s += p.value * (a + b) * static_cast<double>(p.length) / 2.0;
        }
        return s;
    }

    // Merge adjacent plateaus with equal values, drop empty ones, and absorb a
    // trailing plateau that equals the tail.
    void normalize() {
        std::vector<Plateau> out;
        for (const auto& p : plateaus) {
            if (p.length <= 0) {
                if (p.length < 0) throw ValidationError("PlateauSeq: negative plateau length");
                continue;
            }
            if (!out.empty() && out.back().value == p.value)
                out.back().length += p.length;
            else
                out.push_back(p);
        }
        while (!out.empty() && out.back().value == tail) out.pop_back();
        plateaus = std::move(out);
    }

    // Build from explicit per-index head values plus a tail.
    static PlateauSeq from_values(const std::vector<double>& head, double tail_value) {
        PlateauSeq s;
        s.tail = tail_value;
        for (double v : head) s.plateaus.push_back({1, v});
        s.normalize();
        return s;
    }

    bool all_finite() const {
        if (!std::isfinite(tail)) return false;
        for (const auto& p : plateaus)
            if (!std::isfinite(p.value)) return false;
        return true;
    }
};

}  // namespace dwt

#endif
