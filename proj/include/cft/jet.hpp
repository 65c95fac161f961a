#pragma once

#include <cmath>

#include "cft/errors.hpp"

namespace cft {

// Truncated derivative stack of a scalar function of one variable: value and
// first three derivatives at a point.  Arithmetic follows the truncated
// Leibniz/chain rules; all operations are pure.
struct Jet3 {
    double v = 0, d1 = 0, d2 = 0, d3 = 0;

    static Jet3 variable(double x) { return {x, 1, 0, 0}; }
    static Jet3 constant(double c) { return {c, 0, 0, 0}; }

    Jet3 operator-() const { return {-v, -d1, -d2, -d3}; }

    friend Jet3 operator+(const Jet3& a, const Jet3& b) {
        return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
    }
    friend Jet3 operator-(const Jet3& a, const Jet3& b) {
        return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
    }
    friend Jet3 operator*(const Jet3& a, const Jet3& b) {
        return {a.v * b.v,
                a.d1 * b.v + a.v * b.d1,
                a.d2 * b.v + 2 * a.d1 * b.d1 + a.v * b.d2,
                a.d3 * b.v + 3 * a.d2 * b.d1 + 3 * a.d1 * b.d2 + a.v * b.d3};
    }
    friend Jet3 operator*(double s, const Jet3& a) { return {s * a.v, s * a.d1, s * a.d2, s * a.d3}; }
    friend Jet3 operator*(const Jet3& a, double s) { return s * a; }
    friend Jet3 operator/(const Jet3& a, const Jet3& b);
    friend Jet3 operator+(const Jet3& a, double s) { return {a.v + s, a.d1, a.d2, a.d3}; }
    friend Jet3 operator+(double s, const Jet3& a) { return a + s; }
    friend Jet3 operator-(const Jet3& a, double s) { return {a.v - s, a.d1, a.d2, a.d3}; }
    friend Jet3 operator-(double s, const Jet3& a) { return {s - a.v, -a.d1, -a.d2, -a.d3}; }
};

// Composition h = f(g) given the outer derivatives c0..c3 of f at g.v.
inline Jet3 compose(double c0, double c1, double c2, double c3, const Jet3& g) {
    return {c0,
            c1 * g.d1,
            c2 * g.d1 * g.d1 + c1 * g.d2,
            c3 * g.d1 * g.d1 * g.d1 + 3 * c2 * g.d1 * g.d2 + c1 * g.d3};
}

inline Jet3 inv(const Jet3& a) {
    if (a.v == 0) throw DomainError("division by zero");
    const double r = 1.0 / a.v;
    return compose(r, -r * r, 2 * r * r * r, -6 * r * r * r * r, a);
}

inline Jet3 operator/(const Jet3& a, const Jet3& b) { return a * inv(b); }

inline Jet3 sin(const Jet3& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return compose(s, c, -s, -c, a);
}
inline Jet3 cos(const Jet3& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return compose(c, -s, -c, s, a);
}
inline Jet3 tan(const Jet3& a) {
    const double t = std::tan(a.v), w = 1 + t * t;
    return compose(t, w, 2 * t * w, 2 * w * (1 + 3 * t * t), a);
}
inline Jet3 sinh(const Jet3& a) {
    const double s = std::sinh(a.v), c = std::cosh(a.v);
    return compose(s, c, s, c, a);
}
inline Jet3 cosh(const Jet3& a) {
    const double s = std::sinh(a.v), c = std::cosh(a.v);
    return compose(c, s, c, s, a);
}
inline Jet3 tanh(const Jet3& a) {
    const double t = std::tanh(a.v), w = 1 - t * t;
    return compose(t, w, -2 * t * w, -2 * w * (1 - 3 * t * t), a);
}
inline Jet3 asinh(const Jet3& a) {
    const double x = a.v, r = 1 + x * x, s = std::sqrt(r);
    return compose(std::asinh(x), 1 / s, -x / (r * s), (2 * x * x - 1) / (r * r * s), a);
}
inline Jet3 exp(const Jet3& a) {
    const double e = std::exp(a.v);
    return compose(e, e, e, e, a);
}
inline Jet3 log(const Jet3& a) {
    if (!(a.v > 0)) throw DomainError("ln of non-positive value");
    const double r = 1.0 / a.v;
    return compose(std::log(a.v), r, -r * r, 2 * r * r * r, a);
}
inline Jet3 sqrt(const Jet3& a) {
    if (!(a.v > 0)) throw DomainError("sqrt of non-positive value");
    const double s = std::sqrt(a.v), r = 1.0 / a.v;
    return compose(s, 0.5 / s, -0.25 * r / s, 0.375 * r * r / s, a);
}
inline Jet3 abs(const Jet3& a) {
    if (a.v == 0) throw DomainError("abs is not differentiable at 0");
    return a.v > 0 ? a : -a;
}

// All mixed partial derivatives of a scalar function of (u,v) up to total
// order 3.  Mixed-partial symmetry is structural: one slot per multi-index.
struct BiJet3 {
    double f = 0;
    double fu = 0, fv = 0;
    double fuu = 0, fuv = 0, fvv = 0;
    double fuuu = 0, fuuv = 0, fuvv = 0, fvvv = 0;

    static BiJet3 var_u(double u) {
        BiJet3 j; j.f = u; j.fu = 1; return j;
    }
    static BiJet3 var_v(double v) {
        BiJet3 j; j.f = v; j.fv = 1; return j;
    }
    static BiJet3 constant(double c) {
        BiJet3 j; j.f = c; return j;
    }
    // Lift a u-only (resp. v-only) one-variable jet.
    static BiJet3 from_u(const Jet3& a) {
        BiJet3 j; j.f = a.v; j.fu = a.d1; j.fuu = a.d2; j.fuuu = a.d3; return j;
    }
    static BiJet3 from_v(const Jet3& a) {
        BiJet3 j; j.f = a.v; j.fv = a.d1; j.fvv = a.d2; j.fvvv = a.d3; return j;
    }

    BiJet3 operator-() const {
        return {-f, -fu, -fv, -fuu, -fuv, -fvv, -fuuu, -fuuv, -fuvv, -fvvv};
    }

    friend BiJet3 operator+(const BiJet3& a, const BiJet3& b) {
        return {a.f + b.f, a.fu + b.fu, a.fv + b.fv, a.fuu + b.fuu, a.fuv + b.fuv,
                a.fvv + b.fvv, a.fuuu + b.fuuu, a.fuuv + b.fuuv, a.fuvv + b.fuvv,
                a.fvvv + b.fvvv};
    }
    friend BiJet3 operator-(const BiJet3& a, const BiJet3& b) { return a + (-b); }
    friend BiJet3 operator*(double s, const BiJet3& a) {
        return {s * a.f, s * a.fu, s * a.fv, s * a.fuu, s * a.fuv, s * a.fvv,
                s * a.fuuu, s * a.fuuv, s * a.fuvv, s * a.fvvv};
    }
    friend BiJet3 operator*(const BiJet3& a, double s) { return s * a; }
    friend BiJet3 operator+(const BiJet3& a, double s) {
        BiJet3 r = a; r.f += s; return r;
    }
    friend BiJet3 operator+(double s, const BiJet3& a) { return a + s; }
    friend BiJet3 operator-(const BiJet3& a, double s) { return a + (-s); }
    friend BiJet3 operator-(double s, const BiJet3& a) { return (-a) + s; }

    // Bivariate Leibniz rule through total order 3.
    friend BiJet3 operator*(const BiJet3& a, const BiJet3& b) {
        BiJet3 r;
        r.f = a.f * b.f;
        r.fu = a.fu * b.f + a.f * b.fu;
        r.fv = a.fv * b.f + a.f * b.fv;
        r.fuu = a.fuu * b.f + 2 * a.fu * b.fu + a.f * b.fuu;
        r.fuv = a.fuv * b.f + a.fu * b.fv + a.fv * b.fu + a.f * b.fuv;
        r.fvv = a.fvv * b.f + 2 * a.fv * b.fv + a.f * b.fvv;
        r.fuuu = a.fuuu * b.f + 3 * a.fuu * b.fu + 3 * a.fu * b.fuu + a.f * b.fuuu;
        r.fuuv = a.fuuv * b.f + a.fuu * b.fv + 2 * a.fuv * b.fu + 2 * a.fu * b.fuv +
                 a.fv * b.fuu + a.f * b.fuuv;
        r.fuvv = a.fuvv * b.f + a.fvv * b.fu + 2 * a.fuv * b.fv + 2 * a.fv * b.fuv +
                 a.fu * b.fvv + a.f * b.fuvv;
        r.fvvv = a.fvvv * b.f + 3 * a.fvv * b.fv + 3 * a.fv * b.fvv + a.f * b.fvvv;
        return r;
    }
    friend BiJet3 operator/(const BiJet3& a, const BiJet3& b);
};

// Bivariate Faa di Bruno for a univariate outer function with derivatives
// c0..c3 at g.f.
inline BiJet3 compose(double c0, double c1, double c2, double c3, const BiJet3& g) {
    BiJet3 r;
    r.f = c0;
    r.fu = c1 * g.fu;
    r.fv = c1 * g.fv;
    r.fuu = c2 * g.fu * g.fu + c1 * g.fuu;
    r.fuv = c2 * g.fu * g.fv + c1 * g.fuv;
    r.fvv = c2 * g.fv * g.fv + c1 * g.fvv;
    r.fuuu = c3 * g.fu * g.fu * g.fu + 3 * c2 * g.fu * g.fuu + c1 * g.fuuu;
    r.fuuv = c3 * g.fu * g.fu * g.fv + c2 * (2 * g.fu * g.fuv + g.fv * g.fuu) + c1 * g.fuuv;
    r.fuvv = c3 * g.fu * g.fv * g.fv + c2 * (2 * g.fv * g.fuv + g.fu * g.fvv) + c1 * g.fuvv;
    r.fvvv = c3 * g.fv * g.fv * g.fv + 3 * c2 * g.fv * g.fvv + c1 * g.fvvv;
    return r;
}

inline BiJet3 inv(const BiJet3& a) {
    if (a.f == 0) throw DomainError("division by zero");
    const double r = 1.0 / a.f;
    return compose(r, -r * r, 2 * r * r * r, -6 * r * r * r * r, a);
}

inline BiJet3 operator/(const BiJet3& a, const BiJet3& b) { return a * inv(b); }

inline BiJet3 sin(const BiJet3& a) {
    const double s = std::sin(a.f), c = std::cos(a.f);
    return compose(s, c, -s, -c, a);
}
inline BiJet3 cos(const BiJet3& a) {
    const double s = std::sin(a.f), c = std::cos(a.f);
    return compose(c, -s, -c, s, a);
}
inline BiJet3 tan(const BiJet3& a) {
    const double t = std::tan(a.f), w = 1 + t * t;
    return compose(t, w, 2 * t * w, 2 * w * (1 + 3 * t * t), a);
}
inline BiJet3 sinh(const BiJet3& a) {
    const double s = std::sinh(a.f), c = std::cosh(a.f);
    return compose(s, c, s, c, a);
}
inline BiJet3 cosh(const BiJet3& a) {
    const double s = std::sinh(a.f), c = std::cosh(a.f);
    return compose(c, s, c, s, a);
}
inline BiJet3 tanh(const BiJet3& a) {
    const double t = std::tanh(a.f), w = 1 - t * t;
    return compose(t, w, -2 * t * w, -2 * w * (1 - 3 * t * t), a);
}
inline BiJet3 asinh(const BiJet3& a) {
    const double x = a.f, r = 1 + x * x, s = std::sqrt(r);
    return compose(std::asinh(x), 1 / s, -x / (r * s), (2 * x * x - 1) / (r * r * s), a);
}
inline BiJet3 exp(const BiJet3& a) {
    const double e = std::exp(a.f);
    return compose(e, e, e, e, a);
}
inline BiJet3 log(const BiJet3& a) {
    if (!(a.f > 0)) throw DomainError("ln of non-positive value");
    const double r = 1.0 / a.f;
    return compose(std::log(a.f), r, -r * r, 2 * r * r * r, a);
}
inline BiJet3 sqrt(const BiJet3& a) {
    if (!(a.f > 0)) throw DomainError("sqrt of non-positive value");
    const double s = std::sqrt(a.f), r = 1.0 / a.f;
    return compose(s, 0.5 / s, -0.25 * r / s, 0.375 * r * r / s, a);
}
inline BiJet3 abs(const BiJet3& a) {
    if (a.f == 0) throw DomainError("abs is not differentiable at 0");
    return a.f > 0 ? a : -a;
}

} // namespace cft
