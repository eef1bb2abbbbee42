#ifndef DWT_LOG_VALUE_HPP
#define DWT_LOG_VALUE_HPP

#include <cmath>
#include <limits>

#include "dwt/errors.hpp"

namespace dwt {

// All series in this library are sums of terms of the form
// exp(-k*log(lambda) - beta*H) whose magnitudes span hundreds of orders of
// magnitude.  Everything is therefore carried as a natural logarithm; the
// helpers below are the only place where exp/log cancellation is handled.

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(1 + e^x), monotone, safe for any x.
inline double softplus(double x) {
    if (x > 36.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

// log(1 - e^{-x}) for x > 0.
inline double log1mexp(double x) {
    if (!(x > 0.0)) throw NumericError("log1mexp: argument must be positive");
    if (x < 0.6931471805599453) return std::log(-std::expm1(-x));
    return std::log1p(-std::exp(-x));
}

// log(e^a + e^b).
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

// log(e^a - e^b); requires a > b (up to the empty case b == -inf).
inline double log_sub(double a, double b) {
    if (b == kNegInf) return a;
    if (!(a > b)) throw NumericError("log_sub: would take log of a non-positive value");
    return a + log1mexp(a - b);
}

// Thin wrapper used at API boundaries for quantities stored in log scale.
// Arithmetic maps (+, *) of the represented values to (log-sum-exp, +).
struct LogValue {
    double logv = kNegInf;

    static LogValue zero() { return LogValue{kNegInf}; }
    static LogValue one() { return LogValue{0.0}; }
    static LogValue from_log(double lg) { return LogValue{lg}; }
    static LogValue from_value(double v) {
        if (v < 0.0) throw NumericError("LogValue: negative value");
        return LogValue{v == 0.0 ? kNegInf : std::log(v)};
    }

    double value() const { return std::exp(logv); }
    bool is_zero() const { return logv == kNegInf; }

    friend LogValue operator+(LogValue a, LogValue b) { return LogValue{log_add(a.logv, b.logv)}; }
    friend LogValue operator*(LogValue a, LogValue b) {
        if (a.is_zero() || b.is_zero()) return zero();
        return LogValue{a.logv + b.logv};
    }
    friend LogValue operator/(LogValue a, LogValue b) {
        if (b.is_zero()) throw NumericError("LogValue: division by zero");
        if (a.is_zero()) return zero();
        return LogValue{a.logv - b.logv};
    }
    friend bool operator<(LogValue a, LogValue b) { return a.logv < b.logv; }
};

}  // namespace dwt

#endif
