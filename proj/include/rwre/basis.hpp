#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rwre/lattice.hpp"

namespace rwre {

/// Finite subset of Z^D indexing a basis monomial Phi_Gamma = prod spins.
/// Sites are kept sorted and distinct, so equality is structural.
template <int D>
class GammaSet {
  public:
    GammaSet() = default;

    explicit GammaSet(std::vector<Site<D>> sites) : sites_(std::move(sites)) {
        std::sort(sites_.begin(), sites_.end());
        sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
    }

    static GammaSet empty_set() { return {}; }

    static GammaSet single(const Site<D>& s) {
        GammaSet g;
        g.sites_.push_back(s);
        return g;
    }

    const std::vector<Site<D>>& sites() const { return sites_; }
    std::size_t size() const { return sites_.size(); }
    bool empty() const { return sites_.empty(); }

    bool contains(const Site<D>& s) const {
        return std::binary_search(sites_.begin(), sites_.end(), s);
    }

    /// Translate every site by u (order is preserved).
    GammaSet translated(const Site<D>& u) const {
        GammaSet g;
        g.sites_.reserve(sites_.size());
        for (const auto& s : sites_) g.sites_.push_back(s + u);
        return g;
    }

    /// Symmetric difference with the singleton {0}: multiplication by the
    /// spin at the origin.
    GammaSet origin_toggled() const {
        const Site<D> o = origin<D>();
        GammaSet g;
        g.sites_.reserve(sites_.size() + 1);
        bool placed = false;
        for (const auto& s : sites_) {
            if (s == o) {
                placed = true; // remove
                continue;
            }
            if (!placed && o < s) {
                g.sites_.push_back(o);
                placed = true;
            }
            g.sites_.push_back(s);
        }
        if (!placed) g.sites_.push_back(o);
        return g;
    }

    /// Phi_Gamma * Phi_Gamma' = Phi_{Gamma symdiff Gamma'}.
    friend GammaSet sym_diff(const GammaSet& a, const GammaSet& b) {
        GammaSet g;
        g.sites_.reserve(a.sites_.size() + b.sites_.size());
        std::set_symmetric_difference(a.sites_.begin(), a.sites_.end(),
                                      b.sites_.begin(), b.sites_.end(),
                                      std::back_inserter(g.sites_));
        return g;
    }

    /// Spatial reflection x -> -x.
    GammaSet reflected() const {
        std::vector<Site<D>> r;
        r.reserve(sites_.size());
        for (const auto& s : sites_) r.push_back(-s);
        std::sort(r.begin(), r.end());
        GammaSet g;
        g.sites_ = std::move(r);
        return g;
    }

    auto operator<=>(const GammaSet&) const = default;

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < sites_.size(); ++i)
            s += (i ? "," : "") + to_string<D>(sites_[i]);
        return s + "}";
    }

  private:
    std::vector<Site<D>> sites_;
};

/// Sparse expansion f = sum_Gamma f_Gamma Phi_Gamma over finitely many sets.
template <int D>
class FieldFunctional {
  public:
    using CoeffMap = std::map<GammaSet<D>, double>;

    FieldFunctional() = default;
    explicit FieldFunctional(CoeffMap coeffs) : coeffs_(std::move(coeffs)) {}

    static FieldFunctional constant(double v) {
        FieldFunctional f;
        if (v != 0.0) f.coeffs_[GammaSet<D>::empty_set()] = v;
        return f;
    }

    /// Phi_{{0}}, the spin at the origin.
    static FieldFunctional spin_at_origin() {
        FieldFunctional f;
        f.coeffs_[GammaSet<D>::single(origin<D>())] = 1.0;
        return f;
    }

    static FieldFunctional basis(const GammaSet<D>& g, double coeff = 1.0) {
        FieldFunctional f;
        if (coeff != 0.0) f.coeffs_[g] = coeff;
        return f;
    }

    const CoeffMap& coeffs() const { return coeffs_; }
    std::size_t term_count() const { return coeffs_.size(); }
    bool is_zero() const { return coeffs_.empty(); }

    double coeff(const GammaSet<D>& g) const {
        auto it = coeffs_.find(g);
        return it == coeffs_.end() ? 0.0 : it->second;
    }

    double constant_coeff() const { return coeff(GammaSet<D>::empty_set()); }

    void add(const GammaSet<D>& g, double v) {
        if (v == 0.0) return;
        auto [it, fresh] = coeffs_.try_emplace(g, v);
        if (!fresh && (it->second += v) == 0.0) coeffs_.erase(it);
    }

    /// ||f||_M = sum |f_Gamma| M^|Gamma|.
    double hm_norm(double M) const {
        if (!(M > 1.0)) throw std::invalid_argument("hm_norm needs M > 1");
        double n = 0.0;
        for (const auto& [g, v] : coeffs_)
            n += std::abs(v) * std::pow(M, static_cast<double>(g.size()));
        return n;
    }

    /// sum |f_Gamma| >= ||f||_inf (each |Phi_Gamma| = 1).
    double sup_bound() const {
        double n = 0.0;
        for (const auto& [g, v] : coeffs_) {
            (void)g;
            n += std::abs(v);
        }
        return n;
    }

    /// Drop coefficients below `threshold` in absolute value; returns the
    /// H_M mass removed so callers can fold it into their error budgets.
    double prune(double threshold, double M) {
        double dropped = 0.0;
        for (auto it = coeffs_.begin(); it != coeffs_.end();) {
            if (std::abs(it->second) < threshold) {
                dropped += std::abs(it->second) *
                           std::pow(M, static_cast<double>(it->first.size()));
                it = coeffs_.erase(it);
            } else {
                ++it;
            }
        }
        return dropped;
    }

    /// Split f = f_empty * Phi_empty + f_hat (exact).
    std::pair<double, FieldFunctional> split_hat() const {
        FieldFunctional hat = *this;
        double c0 = 0.0;
        auto it = hat.coeffs_.find(GammaSet<D>::empty_set());
        if (it != hat.coeffs_.end()) {
            c0 = it->second;
            hat.coeffs_.erase(it);
        }
        return {c0, hat};
    }

    FieldFunctional& operator+=(const FieldFunctional& o) {
        for (const auto& [g, v] : o.coeffs_) add(g, v);
        return *this;
    }

    FieldFunctional operator+(const FieldFunctional& o) const {
        FieldFunctional r = *this;
        r += o;
        return r;
    }

    FieldFunctional operator*(double a) const {
        FieldFunctional r;
        if (a == 0.0) return r;
        r.coeffs_ = coeffs_;
        for (auto& [g, v] : r.coeffs_) v *= a;
        return r;
    }

    /// Pointwise product, expanded through Phi_G Phi_G' = Phi_{G symdiff G'}.
    FieldFunctional operator*(const FieldFunctional& o) const {
        FieldFunctional r;
        for (const auto& [g1, v1] : coeffs_)
            for (const auto& [g2, v2] : o.coeffs_) r.add(sym_diff(g1, g2), v1 * v2);
        return r;
    }

    /// Multiply by the spin at the origin (every set gets {0} toggled).
    FieldFunctional times_origin_spin() const {
        FieldFunctional r;
        for (const auto& [g, v] : coeffs_) r.add(g.origin_toggled(), v);
        return r;
    }

    /// Evaluate on a finite spin window. Sets not fully contained in the
    /// window are skipped: unspecified sites carry the symmetric law, so
    /// their conditional mean contribution is zero.
    double eval_window(const std::map<Site<D>, int>& window) const {
        double total = 0.0;
        for (const auto& [g, v] : coeffs_) {
            double prod = v;
            bool covered = true;
            for (const auto& s : g.sites()) {
                auto it = window.find(s);
                if (it == window.end()) {
                    covered = false;
                    break;
                }
                prod *= it->second;
            }
            if (covered) total += prod;
        }
        return total;
    }

    /// Image under the joint spin-flip / space-reflection map
    /// (coefficient at Gamma becomes (-1)^|Gamma| times the one at -Gamma).
    FieldFunctional flip_reflected() const {
        FieldFunctional r;
        for (const auto& [g, v] : coeffs_)
            r.add(g.reflected(), (g.size() % 2 == 0) ? v : -v);
        return r;
    }

  private:
    CoeffMap coeffs_;
};

template <int D>
FieldFunctional<D> operator*(double a, const FieldFunctional<D>& f) {
    return f * a;
}

template <int D>
FieldFunctional<D> operator-(const FieldFunctional<D>& a, const FieldFunctional<D>& b) {
    return a + b * (-1.0);
}

} // namespace rwre
