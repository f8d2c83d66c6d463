#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>

namespace rwre {

/// A lattice site (or jump offset) in Z^D.
template <int D>
using Site = std::array<std::int32_t, D>;

template <int D>
Site<D> operator+(Site<D> a, const Site<D>& b) {
    for (int i = 0; i < D; ++i) a[i] += b[i];
    return a;
}

template <int D>
Site<D> operator-(const Site<D>& a) {
    Site<D> r{};
    for (int i = 0; i < D; ++i) r[i] = -a[i];
    return r;
}

template <int D>
Site<D> origin() {
    return Site<D>{};
}

template <int D>
int sup_radius(const Site<D>& a) {
    int r = 0;
    for (int i = 0; i < D; ++i) r = std::max(r, std::abs(a[i]));
    return r;
}

template <int D>
std::string to_string(const Site<D>& a) {
    std::ostringstream os;
    os << '(';
    for (int i = 0; i < D; ++i) os << (i ? "," : "") << a[i];
    os << ')';
    return os.str();
}

/// Finite-range kernel on Z^D: offset -> weight, canonically ordered.
template <int D>
using LatticeKernel = std::map<Site<D>, double>;

template <int D>
double kernel_at(const LatticeKernel<D>& k, const Site<D>& u) {
    auto it = k.find(u);
    return it == k.end() ? 0.0 : it->second;
}

/// Union of two kernel supports, canonically ordered.
template <int D>
std::map<Site<D>, int> support_union(const LatticeKernel<D>& a,
                                     const LatticeKernel<D>& b) {
    std::map<Site<D>, int> u;
    for (const auto& [s, v] : a)
        if (v != 0.0) u[s] = 1;
    for (const auto& [s, v] : b)
        if (v != 0.0) u[s] = 1;
    return u;
}

} // namespace rwre
