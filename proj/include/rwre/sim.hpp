#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "rwre/lattice.hpp"
#include "rwre/params.hpp"
#include "rwre/rng.hpp"

namespace rwre {

/// Lazily materialized environment. A site absent from the map has never
/// been read and never carried the walker; under the symmetric kernels the
/// uniform marginal is preserved, so sampling it fresh on first access is
/// distributionally exact.
template <int D>
struct EnvState {
    std::map<Site<D>, int> sites;       // materialized spins, canonical order
    std::map<Site<D>, long long> last_visit; // last time the walker occupied

    int read(const Site<D>& x, Philox& rng) {
        auto it = sites.find(x);
        if (it != sites.end()) return it->second;
        const int s = rng.spin();
        sites.emplace(x, s);
        return s;
    }
};

template <int D>
struct WalkerState {
    Site<D> position{}; // X_0 = 0
    long long time = 0;
};

template <int D>
struct Trajectory {
    std::vector<int> zeta;            // zeta_t = xi_t(X_t), t = 0..n
    std::vector<Site<D>> displacement; // X_t
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    long long tau = 0; // forget horizon used (0 = exact)
};

enum class InitialLaw { ProductUniform, GivenWindow };

/// Initial state. ProductUniform materializes nothing (lazy product sample);
/// GivenWindow pins a finite window of spins for deterministic tests.
template <int D>
std::pair<EnvState<D>, WalkerState<D>> init(const ModelParams<D>& p, InitialLaw law,
                                            const std::map<Site<D>, int>& window = {}) {
    (void)p;
    EnvState<D> env;
    if (law == InitialLaw::GivenWindow) {
        for (const auto& [x, s] : window) {
            if (s != 1 && s != -1)
                throw std::invalid_argument("window spin must be +1 or -1 at " +
                                            to_string<D>(x));
            env.sites.emplace(x, s);
        }
    }
    WalkerState<D> w;
    env.last_visit[w.position] = 0;
    return {env, w};
}

/// One step of the joint chain. Fixed sampling order for reproducibility:
/// read the spin under the walker, draw the jump, update materialized sites
/// in canonical order (Q1 at the walker's site, Q0 elsewhere), move.
template <int D>
void step(const ModelParams<D>& p, EnvState<D>& env, WalkerState<D>& w, Philox& rng) {
    const int s = env.read(w.position, rng);

    // jump ~ P0(u) + eps c(u) s, walked by inverse CDF in kernel order
    const double draw = rng.uniform();
    double acc = 0.0;
    Site<D> jump{};
    bool jump_set = false;
    for (const auto& [u, one] : support_union<D>(p.P0, p.c)) {
        (void)one;
        acc += kernel_at<D>(p.P0, u) + p.epsilon * kernel_at<D>(p.c, u) * s;
        if (draw < acc) {
            jump = u;
            jump_set = true;
            break;
        }
    }
    if (!jump_set) {
        // draw fell in the residual round-off sliver; take the last offset
        jump = support_union<D>(p.P0, p.c).rbegin()->first;
    }

    const SymmetricKernel q0 = p.Q0();
    const SymmetricKernel q1 = p.Q1();
    for (auto& [x, spin] : env.sites) {
        const SymmetricKernel& q = (x == w.position) ? q1 : q0;
        spin = q.step(spin, rng.uniform());
    }

    w.position = w.position + jump;
    ++w.time;
    env.last_visit[w.position] = w.time;
}

/// Drop materialized sites the walker has not occupied for more than tau
/// steps. A dropped site is re-sampled uniform on next access, which biases
/// a later read by at most |mu|^tau in total variation.
template <int D>
void forget_stale(EnvState<D>& env, long long now, long long tau) {
    for (auto it = env.sites.begin(); it != env.sites.end();) {
        const auto lv = env.last_visit.find(it->first);
        const long long last = (lv == env.last_visit.end()) ? -1 : lv->second;
        if (now - last > tau) {
            if (lv != env.last_visit.end()) env.last_visit.erase(lv);
            it = env.sites.erase(it);
        } else {
            ++it;
        }
    }
}

/// Streaming run: calls on_zeta(t, zeta_t, X_t) for t = 0..n.
/// tau = 0 keeps every materialized site (exact).
template <int D, typename F>
void run_streaming(const ModelParams<D>& p, long long n, Philox& rng, F&& on_zeta,
                   long long tau = 0,
                   const std::map<Site<D>, int>* window = nullptr) {
    auto [env, w] = init<D>(p, window ? InitialLaw::GivenWindow : InitialLaw::ProductUniform,
                            window ? *window : std::map<Site<D>, int>{});
    for (long long t = 0;; ++t) {
        on_zeta(t, env.read(w.position, rng), w.position);
        if (t == n) break;
        step(p, env, w, rng);
        if (tau > 0) forget_stale(env, w.time, tau);
    }
}

/// Full trajectory of n steps (n+1 recorded states), bit-reproducible from
/// (params, seed, stream).
template <int D>
Trajectory<D> run(const ModelParams<D>& p, long long n, std::uint64_t seed,
                  std::uint64_t stream = 0, long long tau = 0) {
    if (n < 1) throw std::invalid_argument("run: need n >= 1");
    Trajectory<D> traj;
    traj.seed = seed;
    traj.stream = stream;
    traj.tau = tau;
    traj.zeta.reserve(static_cast<std::size_t>(n) + 1);
    traj.displacement.reserve(static_cast<std::size_t>(n) + 1);
    Philox rng = replica_stream(seed, stream);
    run_streaming<D>(
        p, n, rng,
        [&](long long, int z, const Site<D>& x) {
            traj.zeta.push_back(z);
            traj.displacement.push_back(x);
        },
        tau);
    return traj;
}

/// Forget horizon giving per-site bias below `bias`: smallest tau with
/// max(|mu|,|mu1|)^tau < bias.
template <int D>
long long forget_horizon_for(const ModelParams<D>& p, double bias) {
    const double rate = std::max(std::abs(p.mu), std::abs(p.mu1()));
    if (rate <= 0.0) return 1;
    if (rate >= 1.0) return 0; // no finite horizon is safe
    const double t = std::log(bias) / std::log(rate);
    return static_cast<long long>(std::ceil(t)) + 1;
}

} // namespace rwre
