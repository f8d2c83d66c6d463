#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rwre {

/// Finite subset gamma of Z_+, canonically sorted. Indexes a Walsh monomial
/// Psi_gamma = prod_{t in gamma} zeta_t.
class TimeSet {
  public:
    TimeSet() = default;

    explicit TimeSet(std::vector<int> times) : times_(std::move(times)) {
        std::sort(times_.begin(), times_.end());
        times_.erase(std::unique(times_.begin(), times_.end()), times_.end());
        if (!times_.empty() && times_.front() < 0)
            throw std::invalid_argument("TimeSet: negative time");
    }

    const std::vector<int>& times() const { return times_; }
    std::size_t size() const { return times_.size(); }
    bool empty() const { return times_.empty(); }

    int min_time() const { return times_.front(); }
    int max_time() const { return times_.back(); }

    /// Consecutive gaps t_{j+1} - t_j.
    std::vector<int> gaps() const {
        std::vector<int> g;
        for (std::size_t i = 1; i < times_.size(); ++i)
            g.push_back(times_[i] - times_[i - 1]);
        return g;
    }

    bool contains(int t) const {
        return std::binary_search(times_.begin(), times_.end(), t);
    }

    TimeSet shifted(int dt) const {
        TimeSet s;
        s.times_.reserve(times_.size());
        for (int t : times_) s.times_.push_back(t + dt);
        if (!s.times_.empty() && s.times_.front() < 0)
            throw std::invalid_argument("TimeSet: shift below zero");
        return s;
    }

    /// Shift so the earliest time is 0 (no-op for the empty set).
    TimeSet rebased() const { return empty() ? *this : shifted(-min_time()); }

    friend TimeSet sym_diff(const TimeSet& a, const TimeSet& b) {
        TimeSet r;
        std::set_symmetric_difference(a.times_.begin(), a.times_.end(),
                                      b.times_.begin(), b.times_.end(),
                                      std::back_inserter(r.times_));
        return r;
    }

    auto operator<=>(const TimeSet&) const = default;

    std::string str() const {
        std::string s = "{";
        for (std::size_t i = 0; i < times_.size(); ++i)
            s += (i ? "," : "") + std::to_string(times_[i]);
        return s + "}";
    }

  private:
    std::vector<int> times_;
};

/// gamma_n from the binary expansion n = sum_{t in gamma} 2^t; gamma_0 is empty.
inline TimeSet gamma_of_n(std::uint64_t n) {
    std::vector<int> t;
    for (int bit = 0; n; ++bit, n >>= 1)
        if (n & 1u) t.push_back(bit);
    return TimeSet(std::move(t));
}

inline std::uint64_t n_of_gamma(const TimeSet& gamma) {
    std::uint64_t n = 0;
    for (int t : gamma.times()) {
        if (t >= 64) throw std::invalid_argument("n_of_gamma: index overflow");
        n |= (std::uint64_t{1} << t);
    }
    return n;
}

/// Walsh spectrum of a cylinder functional of zeta_0..zeta_{depth-1}.
struct WalshSpectrum {
    int depth = 0;
    std::map<TimeSet, double> coeffs;

    double coeff(const TimeSet& g) const {
        auto it = coeffs.find(g);
        return it == coeffs.end() ? 0.0 : it->second;
    }

    void add(const TimeSet& g, double v) {
        if (v == 0.0) return;
        auto [it, fresh] = coeffs.try_emplace(g, v);
        if (!fresh && (it->second += v) == 0.0) coeffs.erase(it);
    }

    WalshSpectrum shifted(int dt) const {
        WalshSpectrum s;
        s.depth = depth + dt;
        for (const auto& [g, v] : coeffs) s.coeffs[g.shifted(dt)] = v;
        return s;
    }

    /// Pointwise product through Psi_g Psi_g' = Psi_{g symdiff g'}.
    WalshSpectrum operator*(const WalshSpectrum& o) const {
        WalshSpectrum r;
        r.depth = std::max(depth, o.depth);
        for (const auto& [g1, v1] : coeffs)
            for (const auto& [g2, v2] : o.coeffs) r.add(sym_diff(g1, g2), v1 * v2);
        return r;
    }

    WalshSpectrum& operator+=(const WalshSpectrum& o) {
        depth = std::max(depth, o.depth);
        for (const auto& [g, v] : o.coeffs) add(g, v);
        return *this;
    }

    /// Evaluate on a window of spins, window[t] = zeta_t, t = 0..m-1.
    double eval(const std::vector<int>& window) const {
        double total = 0.0;
        for (const auto& [g, v] : coeffs) {
            double prod = v;
            for (int t : g.times()) {
                if (t >= static_cast<int>(window.size()))
                    throw std::invalid_argument("WalshSpectrum::eval: window too short");
                prod *= window[static_cast<std::size_t>(t)];
            }
            total += prod;
        }
        return total;
    }

    /// sup norm over all sign patterns (exact for small depth).
    double sup_norm_exact() const {
        int m = 0;
        for (const auto& [g, v] : coeffs) {
            (void)v;
            if (!g.empty()) m = std::max(m, g.max_time() + 1);
        }
        if (m > 24) throw std::invalid_argument("sup_norm_exact: depth too large");
        double best = 0.0;
        std::vector<int> w(static_cast<std::size_t>(m), 1);
        const std::uint64_t total = std::uint64_t{1} << m;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            for (int t = 0; t < m; ++t)
                w[static_cast<std::size_t>(t)] = (mask >> t) & 1u ? -1 : 1;
            best = std::max(best, std::abs(eval(w)));
        }
        return best;
    }
};

} // namespace rwre
