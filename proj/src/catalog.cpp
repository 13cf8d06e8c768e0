#include "tscalc/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tscalc::harness {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

double Fn1::operator()(double t) const {
    const double span = t1 - t0;
    double s = span > 0 ? (t - t0) / span : 0.0;
    s = std::clamp(s, 0.0, 1.0);

    double shape = 0.0;
    switch (kind) {
    case Kind::Constant: shape = c0; break;
    case Kind::Affine: shape = c0 + (c1 - c0) * s; break;
    case Kind::Quadratic: shape = c0 * (1 - s) * (1 - s) + 2 * c1 * s * (1 - s) + c2 * s * s; break;
    case Kind::Exponential: shape = c0 + (c1 - c0) * std::expm1(k * s) / std::expm1(k); break;
    case Kind::Step: {
        const auto idx = std::upper_bound(breaks.begin(), breaks.end(), s) - breaks.begin();
        shape = levels[static_cast<std::size_t>(idx)];
        break;
    }
    }
    return lo + (hi - lo) * shape;
}

std::string Fn1::describe() const {
    std::string body;
    switch (kind) {
    case Kind::Constant: body = "constant(c0=" + num(c0) + ")"; break;
    case Kind::Affine: body = "affine(c0=" + num(c0) + ", c1=" + num(c1) + ")"; break;
    case Kind::Quadratic: body = "quadratic(c0=" + num(c0) + ", c1=" + num(c1) + ", c2=" + num(c2) + ")"; break;
    case Kind::Exponential: body = "exp(k=" + num(k) + ", c0=" + num(c0) + ", c1=" + num(c1) + ")"; break;
    case Kind::Step: {
        body = "step(breaks=[";
        for (std::size_t i = 0; i < breaks.size(); ++i) body += (i ? "," : "") + num(breaks[i]);
        body += "], levels=[";
        for (std::size_t i = 0; i < levels.size(); ++i) body += (i ? "," : "") + num(levels[i]);
        body += "])";
        break;
    }
    }
    return body + " in [" + num(lo) + ", " + num(hi) + "] over [" + num(t0) + ", " + num(t1) + "]";
}

double Fn2::operator()(double x, double y) const {
    double v = 0.0;
    switch (kind) {
    case Kind::Product: v = a(x) * b(y); break;
    case Kind::Sum: v = 0.5 * (a(x) + b(y)); break;
    case Kind::Diagonal: v = a(0.5 * (x + y)); break;
    }
    return negate ? -v : v;
}

std::string Fn2::describe() const {
    std::string s;
    switch (kind) {
    case Kind::Product: s = "a(x)*b(y)"; break;
    case Kind::Sum: s = "(a(x)+b(y))/2"; break;
    case Kind::Diagonal: s = "a((x+y)/2)"; break;
    }
    s += "; a=" + a.describe();
    if (kind != Kind::Diagonal) s += "; b=" + b.describe();
    return negate ? "-[" + s + "]" : s;
}

double LFn::operator()(double u, double v) const {
    switch (kind) {
    case Kind::MeanPlus: return 0.5 * (u + v) + c;
    case Kind::Product: return c * u * v;
    case Kind::Max: return std::max(u, v) + c;
    case Kind::Quadratic: return c + u * u + v;
    }
    return c;
}

std::string LFn::describe() const {
    switch (kind) {
    case Kind::MeanPlus: return "(u+v)/2 + " + num(c);
    case Kind::Product: return num(c) + "*u*v";
    case Kind::Max: return "max(u,v) + " + num(c);
    case Kind::Quadratic: return num(c) + " + u^2 + v";
    }
    return "?";
}

double MFn::operator()(double u) const {
    switch (kind) {
    case Kind::Power: return std::pow(u, c);
    case Kind::Affine: return c + u;
    case Kind::Sqrt: return std::sqrt(c + u);
    case Kind::Constant: return c;
    }
    return c;
}

std::string MFn::describe() const {
    switch (kind) {
    case Kind::Power: return "u^" + num(c);
    case Kind::Affine: return num(c) + " + u";
    case Kind::Sqrt: return "sqrt(" + num(c) + " + u)";
    case Kind::Constant: return num(c);
    }
    return "?";
}

}  // namespace tscalc::harness
