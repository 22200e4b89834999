#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bhl {

using Index = std::int64_t;

/// Orientation of the discrete Laplacian. `positive` is
/// (Lu)_i = -u_{i-1} + 2u_i - u_{i+1}; `continuum` is its negative.
enum class LaplacianSign { positive, continuum };

/// A bi-infinite square-summable sequence stored as a finite window.
///
/// Components outside [offset, offset + size - 1] are implicitly zero.
/// Equality compares the implied sequences, so explicit leading and
/// trailing zeros do not matter. All stored values are finite.
class LatticeWindow {
public:
    LatticeWindow() = default;
    LatticeWindow(Index offset, std::vector<double> values);

    static LatticeWindow unit(Index i, double value = 1.0);

    Index offset() const noexcept { return offset_; }
    Index last() const noexcept { return offset_ + static_cast<Index>(values_.size()) - 1; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

    /// Component i of the implied sequence.
    double at(Index i) const noexcept;

    bool is_zero() const noexcept;

    /// Drops explicit zeros at both ends; an all-zero window becomes empty.
    LatticeWindow normalized() const;

    /// Components with lo <= i <= hi, as a window over exactly that range.
    LatticeWindow restricted(Index lo, Index hi) const;

    /// Dense copy of components lo..hi inclusive.
    std::vector<double> dense(Index lo, Index hi) const;

    friend bool operator==(const LatticeWindow& a, const LatticeWindow& b);

private:
    Index offset_ = 0;
    std::vector<double> values_;
};

LatticeWindow operator+(const LatticeWindow& a, const LatticeWindow& b);
LatticeWindow operator-(const LatticeWindow& a, const LatticeWindow& b);
LatticeWindow operator*(double c, const LatticeWindow& a);

/// Componentwise (Hadamard) product.
LatticeWindow hadamard(const LatticeWindow& a, const LatticeWindow& b);

// First differences and the discrete Laplacian. Output support grows by at
// most one index on each side.
LatticeWindow d_plus(const LatticeWindow& u);
LatticeWindow d_minus(const LatticeWindow& u);
LatticeWindow laplacian(const LatticeWindow& u, LaplacianSign sign = LaplacianSign::positive);

double inner(const LatticeWindow& a, const LatticeWindow& b);
double norm(const LatticeWindow& u);
double norm(std::span<const double> u);

/// l^p norm for p in {1, 2, 3, 4}; throws ConfigError otherwise.
double norm_lp(const LatticeWindow& u, int p);

double distance(std::span<const double> a, std::span<const double> b);

} // namespace bhl
