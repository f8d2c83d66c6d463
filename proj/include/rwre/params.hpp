#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwre/lattice.hpp"

namespace rwre {

inline constexpr double kProbTol = 1e-12; // absolute tolerance for probability checks

/// Symmetric row-stochastic 2x2 kernel on {+1,-1} with eigenvalues {1, lambda}.
///
///   [[ (1+l)/2, (1-l)/2 ],
///    [ (1-l)/2, (1+l)/2 ]]
///
/// Acting on a spin it flips with probability (1-lambda)/2, so the
/// conditional mean of the updated spin is lambda * s.
struct SymmetricKernel {
    double lambda = 0.0;

    double stay() const { return 0.5 * (1.0 + lambda); }
    double flip() const { return 0.5 * (1.0 - lambda); }

    /// One update of spin s driven by a uniform [0,1) variate.
    int step(int s, double u) const { return u < flip() ? -s : s; }

    /// Matrix entry P(s -> t).
    double entry(int s, int t) const { return s == t ? stay() : flip(); }

    /// Kernel composition: two symmetric kernels compose eigenvalue-wise.
    SymmetricKernel compose(const SymmetricKernel& o) const {
        return {lambda * o.lambda};
    }
};

/// All model constants: walk kernels P0 (even) and c (odd), perturbation
/// strength epsilon, environment eigenvalues mu (off-walker) and
/// mu1 = mu + epsilon*rho (at the walker), and the norm base M.
template <int D>
struct ModelParams {
    LatticeKernel<D> P0;
    LatticeKernel<D> c;
    double epsilon = 0.0;
    double mu = 0.0;
    double rho = 0.0;
    double M = 1.5;
    int range = 0; // declared finite range; 0 = infer from supports

    double mu1() const { return mu + epsilon * rho; }
    SymmetricKernel Q0() const { return {mu}; }
    SymmetricKernel Q1() const { return {mu1()}; }

    int support_radius() const {
        int r = 0;
        for (const auto& [u, v] : P0)
            if (v != 0.0) r = std::max(r, sup_radius<D>(u));
        for (const auto& [u, v] : c)
            if (v != 0.0) r = std::max(r, sup_radius<D>(u));
        return r;
    }
};

/// Every violated invariant, with the offending offset/value spelled out.
/// An empty list means the parameters are valid. Violations are data, not
/// exceptions, and the list is produced in a fixed deterministic order.
template <int D>
std::vector<std::string> validate_params(const ModelParams<D>& p) {
    std::vector<std::string> bad;
    double mass = 0.0;
    for (const auto& [u, v] : p.P0) {
        mass += v;
        if (v < 0.0 || v > 1.0)
            bad.push_back("P0" + to_string<D>(u) + " = " + std::to_string(v) +
                          " outside [0,1]");
    }
    if (std::abs(mass - 1.0) > kProbTol)
        bad.push_back("sum P0 = " + std::to_string(mass) + " != 1");

    for (const auto& [u, v] : p.P0) {
        if (std::abs(v - kernel_at<D>(p.P0, -u)) > kProbTol)
            bad.push_back("P0 not even at " + to_string<D>(u));
    }
    for (const auto& [u, v] : p.c) {
        if (std::abs(v + kernel_at<D>(p.c, -u)) > kProbTol)
            bad.push_back("c not odd at " + to_string<D>(u));
    }

    for (const auto& [u, one] : support_union<D>(p.P0, p.c)) {
        (void)one;
        const double base = kernel_at<D>(p.P0, u);
        const double tilt = p.epsilon * kernel_at<D>(p.c, u);
        for (double q : {base + tilt, base - tilt}) {
            if (q < -kProbTol || q >= 1.0) {
                bad.push_back("P0 +/- eps*c at " + to_string<D>(u) + " = " +
                              std::to_string(q) + " outside [0,1)");
                break;
            }
        }
    }

    if (p.epsilon < 0.0) bad.push_back("epsilon < 0");
    if (std::abs(p.mu) >= 1.0) bad.push_back("|mu| >= 1");
    if (std::abs(p.mu1()) >= 1.0) bad.push_back("|mu1| = |mu + eps*rho| >= 1");
    if (!(p.M > 1.0)) bad.push_back("M <= 1");

    if (p.range > 0) {
        for (const auto& [u, one] : support_union<D>(p.P0, p.c)) {
            (void)one;
            if (sup_radius<D>(u) > p.range)
                bad.push_back("offset " + to_string<D>(u) +
                              " outside declared range " + std::to_string(p.range));
        }
    }
    return bad;
}

/// Quenched one-step jump law u -> P0(u) + eps*c(u)*s for the spin s at the
/// walker's site. Sums to 1 because c is odd.
template <int D>
LatticeKernel<D> quenched_jump_distribution(const ModelParams<D>& p, int s) {
    if (s != 1 && s != -1) throw std::invalid_argument("spin must be +1 or -1");
    LatticeKernel<D> out;
    for (const auto& [u, one] : support_union<D>(p.P0, p.c)) {
        (void)one;
        out[u] = kernel_at<D>(p.P0, u) + p.epsilon * kernel_at<D>(p.c, u) * s;
    }
    return out;
}

struct NondegeneracyReport {
    double max_offzero = 0.0;    // max |p0_hat(lambda)| over the grid, excluding 0
    double min_abs = 0.0;        // min |p0_hat| over the whole grid
    bool pass = false;           // max_offzero < 1 - tolerance
    double tolerance = 1e-6;
    std::vector<double> flagged; // grid angles (first coordinate) where |p0_hat| ~ 1
    double recip_tail_ratio = -1.0; // d=1 only: l1 tail mass fraction of coeffs of 1/p0_hat
};

/// Grid diagnostic for the characteristic function p0_hat(lambda).
/// Advisory only: reports whether |p0_hat| stays away from 1 off lambda=0,
/// and (in d=1) how fast the Fourier coefficients of 1/p0_hat decay.
template <int D>
NondegeneracyReport nondegeneracy_diagnostic(const ModelParams<D>& p, int grid) {
    if (grid < 16) throw std::invalid_argument("grid too small (need >= 16)");
    NondegeneracyReport rep;
    rep.min_abs = 1.0;

    const double two_pi = 2.0 * std::acos(-1.0);
    std::array<int, D> idx{};
    const auto phat = [&](const std::array<double, D>& lam) {
        std::complex<double> z = 0.0;
        for (const auto& [u, v] : p.P0) {
            double phase = 0.0;
            for (int i = 0; i < D; ++i) phase += lam[i] * u[i];
            z += v * std::polar(1.0, phase);
        }
        return z;
    };

    // walk the full grid [0, 2pi)^D
    bool done = false;
    while (!done) {
        std::array<double, D> lam;
        bool is_zero = true;
        for (int i = 0; i < D; ++i) {
            lam[i] = two_pi * idx[i] / grid;
            if (idx[i] != 0) is_zero = false;
        }
        const double a = std::abs(phat(lam));
        rep.min_abs = std::min(rep.min_abs, a);
        if (!is_zero) {
            if (a > rep.max_offzero) rep.max_offzero = a;
            if (a > 1.0 - rep.tolerance && rep.flagged.size() < 8)
                rep.flagged.push_back(lam[0]);
        }
        int i = 0;
        for (; i < D; ++i) {
            if (++idx[i] < grid) break;
            idx[i] = 0;
        }
        done = (i == D);
    }
    rep.pass = rep.max_offzero < 1.0 - rep.tolerance;

    if (D == 1 && rep.min_abs > rep.tolerance) {
        // discrete Fourier coefficients of 1/p0_hat on the grid; the ratio of
        // high-index l1 mass to the total is a crude summability heuristic
        std::vector<std::complex<double>> recip(grid);
        for (int j = 0; j < grid; ++j) {
            std::array<double, D> lam{};
            lam[0] = two_pi * j / grid;
            recip[j] = 1.0 / phat(lam);
        }
        double total = 0.0, tail = 0.0;
        for (int k = 0; k < grid; ++k) {
            std::complex<double> ck = 0.0;
            for (int j = 0; j < grid; ++j)
                ck += recip[j] * std::polar(1.0, -two_pi * double(j) * k / grid);
            const double m = std::abs(ck) / grid;
            total += m;
            const int dist = std::min(k, grid - k); // signed frequency distance
            if (dist > grid / 8) tail += m;
        }
        rep.recip_tail_ratio = total > 0.0 ? tail / total : -1.0;
    }
    return rep;
}

} // namespace rwre
