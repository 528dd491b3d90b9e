#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pplab {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Violated precondition (bad arguments, infeasible inputs).
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

/// Iterative solver failed to converge; carries the last residual.
struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (last residual " + std::to_string(residual) + ")"),
          last_residual(residual) {}
    double last_residual;
};

/// Violated invariant detected at runtime (scheme or data inconsistency).
struct InvariantError : Error {
    explicit InvariantError(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// Extended reals
// ---------------------------------------------------------------------------

/// Extended-real value: finite double or an explicit +/-infinity flag.
/// Flags are deliberate state, not sentinel floats; inf - inf is an error.
class ExtReal {
  public:
    ExtReal() : v_(0.0), flag_(0) {}
    ExtReal(double v) : v_(v), flag_(0) {
        if (std::isinf(v)) flag_ = v > 0 ? +1 : -1;
        if (std::isnan(v)) throw PreconditionError("ExtReal: NaN is not a value");
    }

    static ExtReal pos_inf() { ExtReal e; e.flag_ = +1; return e; }
    static ExtReal neg_inf() { ExtReal e; e.flag_ = -1; return e; }

    bool finite() const { return flag_ == 0; }
    bool is_pos_inf() const { return flag_ == +1; }
    bool is_neg_inf() const { return flag_ == -1; }
    int flag() const { return flag_; }

    /// Finite value; throws if flagged.
    double value() const {
        if (flag_ != 0) throw PreconditionError("ExtReal: value() on infinite entry");
        return v_;
    }

    /// Value with infinities mapped to +/-cap (display / diagnostics only).
    double capped(double cap) const {
        if (flag_ > 0) return cap;
        if (flag_ < 0) return -cap;
        return v_;
    }

    ExtReal operator+(const ExtReal& o) const {
        if (flag_ == 0 && o.flag_ == 0) return ExtReal(v_ + o.v_);
        if (flag_ != 0 && o.flag_ != 0) {
            if (flag_ != o.flag_) throw PreconditionError("ExtReal: inf - inf");
            return flag_ > 0 ? pos_inf() : neg_inf();
        }
        int f = flag_ != 0 ? flag_ : o.flag_;
        return f > 0 ? pos_inf() : neg_inf();
    }
    ExtReal operator-() const {
        if (flag_ > 0) return neg_inf();
        if (flag_ < 0) return pos_inf();
        return ExtReal(-v_);
    }
    ExtReal operator-(const ExtReal& o) const { return *this + (-o); }

    bool operator<(const ExtReal& o) const {
        if (flag_ != o.flag_) return flag_ < o.flag_;
        return flag_ == 0 ? v_ < o.v_ : false;
    }
    bool operator<=(const ExtReal& o) const { return !(o < *this); }
    bool operator==(const ExtReal& o) const {
        return flag_ == o.flag_ && (flag_ != 0 || v_ == o.v_);
    }

  private:
    double v_;
    int8_t flag_;
};

inline ExtReal clamp(const ExtReal& x, double lo, double hi) {
    if (x.is_neg_inf()) return ExtReal(lo);
    if (x.is_pos_inf()) return ExtReal(hi);
    return ExtReal(std::min(hi, std::max(lo, x.value())));
}

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

/// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double t) {
    double w = std::fmod(t, kTwoPi);
    if (w < 0) w += kTwoPi;
    return w;
}

}  // namespace pplab
