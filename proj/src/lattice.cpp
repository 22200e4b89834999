#include "bhl/lattice.hpp"

#include "bhl/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bhl {

LatticeWindow::LatticeWindow(Index offset, std::vector<double> values)
    : offset_(offset), values_(std::move(values)) {
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw NonFinite("LatticeWindow: non-finite component");
        }
    }
}

LatticeWindow LatticeWindow::unit(Index i, double value) {
    return LatticeWindow(i, {value});
}

double LatticeWindow::at(Index i) const noexcept {
    if (i < offset_ || i > last()) return 0.0;
    return values_[static_cast<std::size_t>(i - offset_)];
}

bool LatticeWindow::is_zero() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

LatticeWindow LatticeWindow::normalized() const {
    auto first = std::find_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; });
    if (first == values_.end()) return {};
    auto rlast = std::find_if(values_.rbegin(), values_.rend(), [](double v) { return v != 0.0; });
    LatticeWindow out;
    out.offset_ = offset_ + (first - values_.begin());
    out.values_.assign(first, rlast.base());
    return out;
}

LatticeWindow LatticeWindow::restricted(Index lo, Index hi) const {
    if (hi < lo) return {};
    LatticeWindow out;
    out.offset_ = lo;
    out.values_ = dense(lo, hi);
    return out;
}

std::vector<double> LatticeWindow::dense(Index lo, Index hi) const {
    std::vector<double> out(hi >= lo ? static_cast<std::size_t>(hi - lo + 1) : 0, 0.0);
    const Index a = std::max(lo, offset_);
    const Index b = std::min(hi, last());
    for (Index i = a; i <= b; ++i) {
        out[static_cast<std::size_t>(i - lo)] = values_[static_cast<std::size_t>(i - offset_)];
    }
    return out;
}

bool operator==(const LatticeWindow& a, const LatticeWindow& b) {
    const LatticeWindow na = a.normalized();
    const LatticeWindow nb = b.normalized();
    if (na.values_.empty() || nb.values_.empty()) return na.values_.empty() && nb.values_.empty();
    return na.offset_ == nb.offset_ && na.values_ == nb.values_;
}

namespace {

// Combined support of two windows; empty windows do not contribute.
std::pair<Index, Index> joint_range(const LatticeWindow& a, const LatticeWindow& b) {
    if (a.size() == 0) return {b.offset(), b.last()};
    if (b.size() == 0) return {a.offset(), a.last()};
    return {std::min(a.offset(), b.offset()), std::max(a.last(), b.last())};
}

template <class Op>
LatticeWindow combine(const LatticeWindow& a, const LatticeWindow& b, Op op) {
    if (a.size() == 0 && b.size() == 0) return {};
    auto [lo, hi] = joint_range(a, b);
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (Index i = lo; i <= hi; ++i) out[static_cast<std::size_t>(i - lo)] = op(a.at(i), b.at(i));
    return LatticeWindow(lo, std::move(out));
}

// out_i = w_m * u_{i-1} + w_0 * u_i + w_p * u_{i+1} over the grown support.
LatticeWindow stencil(const LatticeWindow& u, double w_m, double w_0, double w_p) {
    if (u.size() == 0) return {};
    const Index lo = u.offset() - 1;
    const Index hi = u.last() + 1;
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (Index i = lo; i <= hi; ++i) {
        out[static_cast<std::size_t>(i - lo)] = w_m * u.at(i - 1) + w_0 * u.at(i) + w_p * u.at(i + 1);
    }
    return LatticeWindow(lo, std::move(out));
}

} // namespace

LatticeWindow operator+(const LatticeWindow& a, const LatticeWindow& b) {
    return combine(a, b, [](double x, double y) { return x + y; });
}

LatticeWindow operator-(const LatticeWindow& a, const LatticeWindow& b) {
    return combine(a, b, [](double x, double y) { return x - y; });
}

LatticeWindow operator*(double c, const LatticeWindow& a) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& v : out) v *= c;
    return LatticeWindow(a.offset(), std::move(out));
}

LatticeWindow hadamard(const LatticeWindow& a, const LatticeWindow& b) {
    if (a.size() == 0 || b.size() == 0) return {};
    const Index lo = std::max(a.offset(), b.offset());
    const Index hi = std::min(a.last(), b.last());
    if (hi < lo) return {};
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (Index i = lo; i <= hi; ++i) out[static_cast<std::size_t>(i - lo)] = a.at(i) * b.at(i);
    return LatticeWindow(lo, std::move(out));
}

LatticeWindow d_plus(const LatticeWindow& u) { return stencil(u, 0.0, -1.0, 1.0); }

LatticeWindow d_minus(const LatticeWindow& u) { return stencil(u, 1.0, -1.0, 0.0); }

LatticeWindow laplacian(const LatticeWindow& u, LaplacianSign sign) {
    const double s = sign == LaplacianSign::positive ? 1.0 : -1.0;
    return stencil(u, -s, 2.0 * s, -s);
}

double inner(const LatticeWindow& a, const LatticeWindow& b) {
    double acc = 0.0;
    const Index lo = std::max(a.offset(), b.offset());
    const Index hi = std::min(a.last(), b.last());
    for (Index i = lo; i <= hi; ++i) acc += a.at(i) * b.at(i);
    return acc;
}

double norm(std::span<const double> u) {
    double acc = 0.0;
    for (double v : u) acc += v * v;
    return std::sqrt(acc);
}

double norm(const LatticeWindow& u) { return norm(u.values()); }

double norm_lp(const LatticeWindow& u, int p) {
    if (p < 1 || p > 4) {
        throw ConfigError("norm_lp: unsupported p = " + std::to_string(p));
    }
    if (p == 2) return norm(u);
    double acc = 0.0;
    for (double v : u.values()) acc += std::pow(std::abs(v), p);
    return p == 1 ? acc : std::pow(acc, 1.0 / p);
}

double distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

} // namespace bhl
