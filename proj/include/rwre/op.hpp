#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rwre/basis.hpp"
#include "rwre/params.hpp"
#include "rwre/timeset.hpp"

namespace rwre {

inline constexpr double kDefaultPrune = 1e-15;

namespace detail {
inline double ipow(double x, std::size_t n) {
    double r = 1.0;
    while (n--) r *= x;
    return r;
}
} // namespace detail

/// One application of the stochastic operator T,
/// (T f)(eta) = E[ f(eta_{t+1}) | eta_t = eta ], in closed form on the basis:
///
///   T Phi_Gamma = sum_u w_u(Gamma) [ P0(u) Phi_{Gamma+u}
///                                    + eps c(u) Phi_{(Gamma+u) symdiff {0}} ]
///
/// with w_u(Gamma) = mu^{|Gamma|-b} mu1^b, b = 1 iff -u in Gamma. The jump
/// weight P0(u) + eps c(u) eta(0) carries the spin at the origin, which is
/// where the symdiff {0} term comes from; each surviving site contributes
/// its kernel eigenvalue (mu1 at the walker's site, mu elsewhere).
///
/// Coefficients below `prune_threshold` are dropped; the H_M mass removed is
/// reported through `pruned_hm` when non-null.
template <int D>
FieldFunctional<D> apply_T(const ModelParams<D>& p, const FieldFunctional<D>& f,
                           double prune_threshold = kDefaultPrune,
                           double* pruned_hm = nullptr) {
    const double mu1 = p.mu1();
    FieldFunctional<D> out;
    const auto support = support_union<D>(p.P0, p.c);
    for (const auto& [gamma, coeff] : f.coeffs()) {
        if (gamma.empty()) {
            // T fixes constants: the P0 part sums to 1 and c sums to 0,
            // but both are accumulated termwise to keep the code uniform.
        }
        for (const auto& [u, one] : support) {
            (void)one;
            const bool hits_walker = gamma.contains(-u);
            const double w = detail::ipow(p.mu, gamma.size() - (hits_walker ? 1 : 0)) *
                             (hits_walker ? mu1 : 1.0);
            if (w == 0.0) continue;
            const GammaSet<D> shifted = gamma.translated(u);
            const double p0 = kernel_at<D>(p.P0, u);
            if (p0 != 0.0) out.add(shifted, coeff * w * p0);
            const double cu = p.epsilon * kernel_at<D>(p.c, u);
            if (cu != 0.0) out.add(shifted.origin_toggled(), coeff * w * cu);
        }
    }
    const double dropped = out.prune(prune_threshold, p.M);
    if (pruned_hm) *pruned_hm += dropped;
    return out;
}

template <int D>
FieldFunctional<D> apply_T_pow(const ModelParams<D>& p, FieldFunctional<D> f,
                               int power, double prune_threshold = kDefaultPrune,
                               double* pruned_hm = nullptr) {
    for (int i = 0; i < power; ++i) f = apply_T(p, f, prune_threshold, pruned_hm);
    return f;
}

/// G_gamma = < Psi_gamma | field at the earliest time of gamma >, built
/// right to left: seed with the origin spin at the latest time, then
/// alternate T^gap and multiplication by the origin spin down the gaps.
template <int D>
FieldFunctional<D> g_gamma(const ModelParams<D>& p, const TimeSet& gamma,
                           double prune_threshold = kDefaultPrune,
                           double* pruned_hm = nullptr) {
    if (gamma.empty()) throw std::invalid_argument("g_gamma: empty time set");
    const auto& t = gamma.times();
    FieldFunctional<D> g = FieldFunctional<D>::spin_at_origin();
    for (std::size_t i = t.size() - 1; i-- > 0;) {
        const int gap = t[i + 1] - t[i];
        g = apply_T_pow(p, g, gap, prune_threshold, pruned_hm);
        g = g.times_origin_spin();
    }
    return g;
}

/// G of a cylinder functional given by its Walsh spectrum:
/// sum_gamma f_gamma G_gamma, with G_empty = Phi_empty.
template <int D>
FieldFunctional<D> g_of_cylinder(const ModelParams<D>& p, const WalshSpectrum& f,
                                 double prune_threshold = kDefaultPrune) {
    FieldFunctional<D> g;
    for (const auto& [gamma, v] : f.coeffs) {
        if (gamma.empty())
            g += FieldFunctional<D>::constant(v);
        else
            g += g_gamma<D>(p, gamma, prune_threshold) * v;
    }
    return g;
}

struct MeanResult {
    double value = 0.0;
    double error_bound = 0.0; // residual hat-norm plus accumulated pruning mass
    int iterations = 0;
    bool converged = false;
};

/// Average of f under the invariant measure, by iterating T until the
/// non-constant part is negligible in H_M. The constant coefficient of the
/// iterate then approximates <f> with error at most the residual hat-norm
/// (|<f_hat>| <= ||f_hat||_inf <= ||f_hat||_M), plus whatever pruning removed.
template <int D>
MeanResult invariant_mean(const ModelParams<D>& p, FieldFunctional<D> f,
                          double tol = 1e-11, int max_iterations = 400,
                          double prune_threshold = kDefaultPrune) {
    MeanResult r;
    double pruned = 0.0;
    for (;;) {
        auto [c0, hat] = f.split_hat();
        const double residual = hat.hm_norm(p.M);
        if (residual <= tol) {
            r.value = c0;
            r.error_bound = residual + pruned;
            r.converged = true;
            return r;
        }
        if (r.iterations >= max_iterations) {
            // signals parameters outside the contractive regime
            r.value = c0;
            r.error_bound = residual + pruned;
            r.converged = false;
            return r;
        }
        f = apply_T(p, f, prune_threshold, &pruned);
        ++r.iterations;
    }
}

struct ContractionProbeRow {
    std::size_t probe = 0;
    int step = 0;
    double ratio = 0.0;
};

struct ContractionEstimate {
    double mu_hat = 0.0;
    std::vector<ContractionProbeRow> ledger;
    std::size_t skipped = 0;
};

/// Measured contraction factor of T on the zero-mean subspace:
/// max over probes and k <= depth of ||T^{k+1} f|| / ||T^k f||.
/// Probes are centred by subtracting their invariant mean first; probes that
/// vanish after centring are skipped.
template <int D>
ContractionEstimate contraction_estimate(const ModelParams<D>& p,
                                         const std::vector<FieldFunctional<D>>& probes,
                                         int depth = 4, double tol = 1e-11,
                                         double prune_threshold = kDefaultPrune) {
    ContractionEstimate est;
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const MeanResult m = invariant_mean(p, probes[i], tol, 400, prune_threshold);
        FieldFunctional<D> f = probes[i] - FieldFunctional<D>::constant(m.value);
        double prev = f.hm_norm(p.M);
        if (prev <= 100.0 * tol) {
            ++est.skipped;
            continue;
        }
        for (int k = 0; k < depth; ++k) {
            f = apply_T(p, f, prune_threshold);
            const double cur = f.hm_norm(p.M);
            if (cur <= 100.0 * tol) break;
            const double ratio = cur / prev;
            est.ledger.push_back({i, k, ratio});
            est.mu_hat = std::max(est.mu_hat, ratio);
            prev = cur;
        }
    }
    return est;
}

/// Conservative contraction bound used inside inequality checks.
inline double mu_bar_for_bounds(double mu1_abs, double measured) {
    return std::max(mu1_abs, measured);
}

/// mu_star = M sqrt(mu_bar (1 + 2 mu_bar)).
inline double mu_star(double M, double mu_bar) {
    return M * std::sqrt(mu_bar * (1.0 + 2.0 * mu_bar));
}

} // namespace rwre
