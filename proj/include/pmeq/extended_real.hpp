#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace pmeq {

// Formats a double with 17 significant digits, enough to round-trip the
// value through text exactly. Shared by the table writers.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

// A real number extended with signed infinity indicators.
//
// Diverging moments and transform-derivative limits are legitimate outcomes,
// not failures, so they are carried as tagged values that tests can pattern
// match instead of IEEE specials that could also mean overflow.
class ExtendedReal {
public:
    static ExtendedReal finite(double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("ExtendedReal::finite: value is not finite");
        return ExtendedReal(Tag::Finite, v);
    }
    static ExtendedReal pos_inf() { return ExtendedReal(Tag::PosInf, 0.0); }
    static ExtendedReal neg_inf() { return ExtendedReal(Tag::NegInf, 0.0); }

    bool is_finite() const { return tag_ == Tag::Finite; }
    bool is_pos_inf() const { return tag_ == Tag::PosInf; }
    bool is_neg_inf() const { return tag_ == Tag::NegInf; }
    bool is_inf() const { return !is_finite(); }

    // Finite value; throws if the value is an infinity indicator.
    double value() const {
        if (!is_finite()) throw std::logic_error("ExtendedReal::value: value is infinite");
        return v_;
    }

    // "inf" / "-inf" for the indicators, 17-significant-digit decimal otherwise.
    std::string str() const {
        if (is_pos_inf()) return "inf";
        if (is_neg_inf()) return "-inf";
        return format_double(v_);
    }

    friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
        if (a.tag_ != b.tag_) return false;
        return a.tag_ != Tag::Finite || a.v_ == b.v_;
    }
    friend bool operator!=(const ExtendedReal& a, const ExtendedReal& b) { return !(a == b); }

private:
    enum class Tag { Finite, PosInf, NegInf };
    ExtendedReal(Tag tag, double v) : tag_(tag), v_(v) {}
    Tag tag_;
    double v_;
};

}  // namespace pmeq
